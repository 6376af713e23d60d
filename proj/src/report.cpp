#include "nmrq/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace nmrq {

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw std::runtime_error("cannot move report into place: " + path);
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

ordered_json budget_to_json(const SimulationBudget& b) {
  ordered_json j;
  j["t_max_s"] = b.t_max;
  j["t2_s"] = b.t2;
  j["epsilon_max"] = b.epsilon_max;
  j["epsilon_meas"] = b.epsilon_meas;
  j["n_points"] = b.n_points;
  j["coeff_bits"] = b.coeff_bits;
  if (b.epsilon_fixed > 0.0) j["epsilon_fixed"] = b.epsilon_fixed;
  return j;
}

ordered_json estimate_to_json(const LogicalEstimate& e) {
  ordered_json j;
  j["n_t"] = e.n_t;
  j["n_rotations"] = e.n_rot;
  j["degree"] = e.degree;
  j["tau"] = e.tau;
  j["epsilon"] = e.epsilon;
  j["epsilon_rot"] = e.epsilon_rot;
  j["n_logical_evolution"] = e.n_logical_evolution;
  j["n_logical_total"] = e.n_logical_total;
  ordered_json parts;
  for (const auto& [label, cost] : e.breakdown) parts[label] = cost;
  j["breakdown"] = parts;
  return j;
}

ordered_json metrics_to_json(const ClusterMetrics& m) {
  ordered_json j;
  j["size"] = m.size;
  j["term_count"] = m.term_count;
  j["coupled_pairs"] = m.coupled_pairs;
  j["alpha_hz"] = m.alpha;
  j["f_max_hz"] = m.f_max;
  j["max_register_distance"] = m.max_register_distance;
  return j;
}

ordered_json aggregate_to_json(const AggregateEstimate& a) {
  ordered_json j;
  j["threshold"] = a.threshold;
  j["included_clusters"] = a.included_clusters;
  j["empty"] = a.empty;
  j["aggregate_t"] = a.aggregate_t;
  j["single_shot_max"] = a.single_shot_max;
  j["n_logical_max"] = a.n_logical_max;
  j["n_shots"] = a.n_shots;
  j["classical_n2_shots"] = a.classical_n2_shots;
  j["per_cluster_single_shot"] = a.per_cluster_single_shot;
  if (a.single_shot_max > 0) j["aggregate_over_single_shot"] = a.ratio();
  return j;
}

ordered_json physical_to_json(const PhysicalEstimate& p) {
  ordered_json j;
  j["d1"] = p.d1;
  j["d2"] = p.d2;
  j["n_factories"] = p.n_factories;
  j["n_data_tiles"] = p.n_data_tiles;
  j["n_physical"] = p.n_physical;
  j["eps_physical"] = p.eps_physical;
  j["t_wall_s"] = p.t_wall;
  j["feasible"] = p.feasible;
  ordered_json layout;
  layout["n_t1_units"] = p.layout.n_t1_units;
  layout["t1_unit_area"] = p.layout.t1_unit_area;
  layout["ccz_area"] = p.layout.ccz_area;
  layout["cat_area"] = p.layout.cat_area;
  layout["store_area"] = p.layout.store_area;
  layout["factory_area"] = p.layout.area;
  layout["d_distill_cycles"] = p.layout.d_distill;
  j["factory"] = layout;
  return j;
}

ordered_json plan_to_json(const GqspPlan& p) {
  ordered_json j;
  j["tau"] = p.tau;
  j["epsilon"] = p.epsilon;
  j["degree"] = p.degree;
  j["prescale"] = p.prescale;
  j["n_phases"] = p.n_phases();
  j["lambda"] = p.lambda;
  j["phi"] = p.phi;
  j["theta"] = p.theta;
  return j;
}

std::string estimate_report_csv(const ordered_json& report) {
  std::ostringstream out;
  out << "molecule,cluster,size,alpha_hz,n_t_single_shot,n_logical,degree,"
         "aggregate_t,feasible\n";
  if (!report.contains("molecules")) return out.str();
  for (const auto& mol : report["molecules"]) {
    const std::string name = mol.value("name", std::string{});
    const std::string agg =
        mol.contains("aggregate") && mol["aggregate"].contains("aggregate_t")
            ? mol["aggregate"]["aggregate_t"].dump()
            : std::string{};
    const std::string feasible =
        mol.contains("physical") && mol["physical"].contains("feasible")
            ? mol["physical"]["feasible"].dump()
            : std::string{};
    if (!mol.contains("clusters")) continue;
    int index = 0;
    for (const auto& cl : mol["clusters"]) {
      out << name << ',' << index++ << ',';
      if (cl.contains("metrics")) {
        out << cl["metrics"].value("size", 0) << ','
            << cl["metrics"].value("alpha_hz", 0.0) << ',';
      } else {
        out << ",,";
      }
      if (cl.contains("single_shot")) {
        out << cl["single_shot"].value("n_t", 0LL) << ','
            << cl["single_shot"].value("n_logical_total", 0) << ','
            << cl["single_shot"].value("degree", 0) << ',';
      } else {
        out << ",,,";
      }
      out << agg << ',' << feasible << '\n';
    }
  }
  return out.str();
}

}  // namespace nmrq
