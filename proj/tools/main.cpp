// nmrq: molecular structures -> spin Hamiltonians -> fault-tolerant quantum
// resource estimates, with an exact small-system dynamics oracle.
//
// Subcommands: inspect, estimate, spectrum, phases, physical, refmodel.
// Exit codes: 0 success, 1 hard error, 2 partial per-file failures in a
// batch, 3 infeasible physical mapping under --strict.

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "nmrq/blockenc.hpp"
#include "nmrq/clusters.hpp"
#include "nmrq/costs.hpp"
#include "nmrq/dynamics.hpp"
#include "nmrq/gqsp.hpp"
#include "nmrq/hamiltonian.hpp"
#include "nmrq/lattices.hpp"
#include "nmrq/report.hpp"
#include "nmrq/sites.hpp"
#include "nmrq/structure.hpp"
#include "nmrq/surface_code.hpp"

namespace fs = std::filesystem;
using nmrq::ordered_json;

namespace {

constexpr unsigned kMaxWorkers = 8;

struct Options {
  // Regime / coupling generation.
  std::string regime = "proton";
  std::string dipolar = "none";
  double kappa = 1e-3;
  double r_cut = 4.0;
  int max_bonds = 4;
  bool exclude_exchangeable = false;

  // Budget.
  double t_max = 1.0;
  double t2 = 1.0;
  double eps_max = 5e-3;
  double eps_meas = 0.01;
  int points = 400;
  int coeff_bits = 10;

  // Aggregation / physical mapping.
  int threshold = 20;
  double eps_target = 1e-3;
  std::vector<std::string> machines;
  bool strict = false;

  // I/O.
  std::string out;
  std::string format = "json";
  std::string input_format = "auto";
  std::string coupling_table;
  std::string gamma_table;
  std::string radii_table;
  std::string cost_model;
};

// --- configuration resolution ----------------------------------------------

// Explicit flag wins; otherwise look for `name` in $NMRQ_CONFIG_PATH; empty
// result means "use built-in defaults".
std::string resolve_config(const std::string& flag_value, const std::string& name) {
  if (!flag_value.empty()) return flag_value;
  if (const char* dir = std::getenv("NMRQ_CONFIG_PATH")) {
    fs::path candidate = fs::path(dir) / name;
    std::error_code ec;
    if (fs::exists(candidate, ec)) return candidate.string();
  }
  return {};
}

struct Tables {
  nmrq::CouplingTable couplings = nmrq::CouplingTable::defaults();
  nmrq::GyromagneticTable gammas = nmrq::GyromagneticTable::defaults();
  nmrq::RadiiTable radii = nmrq::RadiiTable::defaults();
  nmrq::CostModel cost_model = nmrq::CostModel::defaults();
};

Tables load_tables(const Options& opt) {
  Tables t;
  if (std::string p = resolve_config(opt.coupling_table, "coupling_table.cfg"); !p.empty())
    t.couplings = nmrq::CouplingTable::load(p);
  if (std::string p = resolve_config(opt.gamma_table, "gyromagnetic.cfg"); !p.empty())
    t.gammas = nmrq::GyromagneticTable::load(p);
  if (std::string p = resolve_config(opt.radii_table, "covalent_radii.cfg"); !p.empty())
    t.radii = nmrq::RadiiTable::load(p);
  if (std::string p = resolve_config(opt.cost_model, "cost_model.json"); !p.empty())
    t.cost_model = nmrq::CostModel::from_json_file(p);
  return t;
}

nmrq::RegimeConfig make_regime(const Options& opt) {
  nmrq::RegimeConfig rc = opt.regime == "hetero" ? nmrq::RegimeConfig::heteronuclear()
                                                 : nmrq::RegimeConfig::proton();
  if (opt.dipolar == "none") rc.dipolar = nmrq::DipolarMode::None;
  else if (opt.dipolar == "rdc") rc.dipolar = nmrq::DipolarMode::Rdc;
  else rc.dipolar = nmrq::DipolarMode::Full;
  rc.kappa = opt.kappa;
  rc.r_cut = opt.r_cut;
  rc.max_bond_separation = opt.max_bonds;
  rc.include_exchangeable = !opt.exclude_exchangeable;
  return rc;
}

nmrq::SimulationBudget make_budget(const Options& opt) {
  nmrq::SimulationBudget b;
  b.t_max = opt.t_max;
  b.t2 = opt.t2;
  b.epsilon_max = opt.eps_max;
  b.epsilon_meas = opt.eps_meas;
  b.n_points = opt.points;
  b.coeff_bits = opt.coeff_bits;
  return b;
}

nmrq::StructureFormat make_format(const Options& opt) {
  if (opt.input_format == "mol") return nmrq::StructureFormat::Mol;
  if (opt.input_format == "xyz") return nmrq::StructureFormat::Xyz;
  return nmrq::StructureFormat::Auto;
}

// --- input gathering --------------------------------------------------------

bool structure_extension(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".mol" || ext == ".sdf" || ext == ".xyz";
}

// Files stay; directories expand (non-recursively) to their structure files.
// The result is sorted so batch output is order-independent.
std::vector<std::string> gather_inputs(const std::vector<std::string>& paths) {
  std::vector<std::string> files;
  for (const std::string& raw : paths) {
    fs::path p(raw);
    if (fs::is_directory(p)) {
      for (const auto& entry : fs::directory_iterator(p))
        if (entry.is_regular_file() && structure_extension(entry.path()))
          files.push_back(entry.path().string());
    } else {
      files.push_back(raw);  // missing files surface as per-file parse errors
    }
  }
  std::sort(files.begin(), files.end());
  files.erase(std::unique(files.begin(), files.end()), files.end());
  return files;
}

std::string molecule_name(const fs::path& p) { return p.stem().string(); }

// --- bounded worker pool ----------------------------------------------------

template <typename Work>
void run_pool(std::size_t n_items, Work&& work) {
  if (n_items == 0) return;
  const unsigned n_workers = static_cast<unsigned>(
      std::min<std::size_t>(kMaxWorkers, n_items));
  if (n_workers <= 1) {
    for (std::size_t i = 0; i < n_items; ++i) work(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(n_workers);
  for (unsigned w = 0; w < n_workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < n_items; i = next.fetch_add(1))
        work(i);
    });
  for (std::thread& t : pool) t.join();
}

// --- shared pipeline pieces -------------------------------------------------

struct MoleculeResult {
  bool ok = false;
  std::string error;
  ordered_json json;
};

// Emit the report: into <out>/<basename> when an output directory was given,
// otherwise to stdout.
void emit(const Options& opt, const std::string& basename, const std::string& content) {
  if (opt.out.empty()) {
    std::cout << content;
    return;
  }
  fs::create_directories(opt.out);
  nmrq::write_file_atomic((fs::path(opt.out) / basename).string(), content);
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

ordered_json errors_to_json(const std::vector<std::string>& files,
                            const std::vector<MoleculeResult>& results) {
  ordered_json errs = ordered_json::array();
  for (std::size_t i = 0; i < results.size(); ++i)
    if (!results[i].ok) {
      ordered_json e;
      e["file"] = files[i];
      e["message"] = results[i].error;
      errs.push_back(e);
    }
  return errs;
}

int finish_batch(const std::vector<MoleculeResult>& results, bool strict_violated) {
  if (strict_violated) return 3;
  for (const MoleculeResult& r : results)
    if (!r.ok) return 2;
  return 0;
}

// Spin sites of one cluster, in cluster-site order (for gamma weighting).
std::vector<nmrq::SpinSite> cluster_sites(const nmrq::Cluster& cluster,
                                          const std::vector<nmrq::SpinSite>& parent) {
  std::vector<nmrq::SpinSite> out;
  out.reserve(cluster.site_map.size());
  for (int parent_site : cluster.site_map)
    out.push_back(parent.at(static_cast<std::size_t>(parent_site)));
  return out;
}

// --- inspect ----------------------------------------------------------------

int cmd_inspect(const Options& opt, const std::vector<std::string>& raw_paths) {
  const std::vector<std::string> files = gather_inputs(raw_paths);
  const Tables tables = load_tables(opt);
  const nmrq::RegimeConfig rc = make_regime(opt);
  const nmrq::StructureFormat fmt = make_format(opt);

  std::vector<MoleculeResult> results(files.size());
  run_pool(files.size(), [&](std::size_t i) {
    MoleculeResult& r = results[i];
    try {
      nmrq::MolecularGraph g = nmrq::parse_structure(files[i], fmt, tables.radii);
      std::vector<nmrq::SpinSite> sites = nmrq::select_spin_sites(g, rc, tables.gammas);
      nmrq::SpinHamiltonian h =
          nmrq::build_hamiltonian(g, sites, rc, tables.couplings, tables.gammas);
      std::vector<nmrq::Cluster> clusters = nmrq::decompose_clusters(h, sites);

      ordered_json mol;
      mol["name"] = molecule_name(files[i]);
      mol["source"] = files[i];
      mol["title"] = g.name;
      mol["n_atoms"] = g.atom_count();
      mol["n_spin_sites"] = static_cast<int>(sites.size());
      ordered_json cl_list = ordered_json::array();
      for (const nmrq::Cluster& c : clusters) {
        ordered_json cj;
        cj["metrics"] = nmrq::metrics_to_json(nmrq::cluster_metrics(c.h));
        cj["hardness_flags"] = nmrq::hardness_flags(c.size());
        cl_list.push_back(cj);
      }
      mol["clusters"] = cl_list;
      r.json = mol;
      r.ok = true;
    } catch (const std::exception& e) {
      r.error = e.what();
    }
  });

  ordered_json report;
  report["schema_version"] = nmrq::kReportSchemaVersion;
  report["command"] = "inspect";
  report["regime"] = opt.regime;
  report["dipolar"] = opt.dipolar;
  ordered_json mols = ordered_json::array();
  for (const MoleculeResult& r : results)
    if (r.ok) mols.push_back(r.json);
  report["molecules"] = mols;
  report["errors"] = errors_to_json(files, results);

  for (std::size_t i = 0; i < results.size(); ++i)
    if (!results[i].ok)
      std::cerr << "nmrq: " << files[i] << ": " << results[i].error << "\n";

  emit(opt, "inspect.json", dump(report));
  return finish_batch(results, false);
}

// --- estimate ----------------------------------------------------------------

int cmd_estimate(const Options& opt, const std::vector<std::string>& raw_paths) {
  const std::vector<std::string> files = gather_inputs(raw_paths);
  const Tables tables = load_tables(opt);
  const nmrq::RegimeConfig rc = make_regime(opt);
  const nmrq::SimulationBudget budget = make_budget(opt);
  const nmrq::StructureFormat fmt = make_format(opt);

  std::vector<MoleculeResult> results(files.size());
  std::atomic<bool> any_infeasible{false};

  run_pool(files.size(), [&](std::size_t i) {
    MoleculeResult& r = results[i];
    try {
      nmrq::MolecularGraph g = nmrq::parse_structure(files[i], fmt, tables.radii);
      std::vector<nmrq::SpinSite> sites = nmrq::select_spin_sites(g, rc, tables.gammas);
      nmrq::SpinHamiltonian h =
          nmrq::build_hamiltonian(g, sites, rc, tables.couplings, tables.gammas);
      std::vector<nmrq::Cluster> clusters = nmrq::decompose_clusters(h, sites);

      ordered_json mol;
      mol["name"] = molecule_name(files[i]);
      mol["source"] = files[i];
      mol["n_atoms"] = g.atom_count();
      mol["n_spin_sites"] = static_cast<int>(sites.size());

      long long single_shot_max = 0;
      ordered_json cl_list = ordered_json::array();
      for (const nmrq::Cluster& c : clusters) {
        ordered_json cj;
        cj["metrics"] = nmrq::metrics_to_json(nmrq::cluster_metrics(c.h));
        cj["hardness_flags"] = nmrq::hardness_flags(c.size());
        if (c.h.term_count() > 0) {
          nmrq::LogicalEstimate est =
              nmrq::single_shot_cost(c.h, budget.t_max, budget, tables.cost_model);
          single_shot_max = std::max(single_shot_max, est.n_t);
          cj["single_shot"] = nmrq::estimate_to_json(est);
          nmrq::SampleSchedule sched = nmrq::schedule(c.h, budget);
          ordered_json sj;
          sj["f_max_hz"] = sched.f_max;
          sj["n_timepoints"] = static_cast<int>(sched.timepoints.size());
          sj["t_first_s"] = sched.timepoints.front();
          sj["t_last_s"] = sched.timepoints.back();
          sj["n_shots"] = sched.n_shots;
          cj["schedule"] = sj;
        }
        cl_list.push_back(cj);
      }
      mol["clusters"] = cl_list;

      nmrq::AggregateEstimate agg =
          nmrq::aggregate_cost(clusters, budget, opt.threshold, tables.cost_model);
      mol["aggregate"] = nmrq::aggregate_to_json(agg);
      if (single_shot_max > 0) {
        mol["single_shot_max_n_t"] = single_shot_max;
        mol["n_t_below_1e10"] = single_shot_max < 10000000000LL;
      }

      if (!opt.machines.empty() && !agg.empty) {
        nmrq::PhysicalEstimate phys = nmrq::optimize_distance(
            static_cast<double>(agg.single_shot_max), agg.n_logical_max, opt.eps_target);
        mol["physical"] = nmrq::physical_to_json(phys);
        if (!phys.feasible) any_infeasible = true;
        ordered_json runtimes = ordered_json::array();
        for (const std::string& key : opt.machines) {
          nmrq::MachineProfile machine = nmrq::reference_machine(key);
          nmrq::RuntimeEstimate rt =
              nmrq::runtime_estimate(phys, agg.aggregate_t, agg.n_shots, machine);
          ordered_json rj;
          rj["machine"] = machine.name;
          rj["machine_physical_qubits"] = machine.physical_qubits;
          rj["concurrency"] = rt.concurrency;
          rj["t_wall_shot_s"] = rt.t_wall_shot;
          rj["total_seconds"] = rt.total_seconds;
          rj["feasible"] = rt.feasible;
          if (!rt.feasible) any_infeasible = true;
          runtimes.push_back(rj);
        }
        mol["runtimes"] = runtimes;
      }

      r.json = mol;
      r.ok = true;
    } catch (const std::exception& e) {
      r.error = e.what();
    }
  });

  ordered_json report;
  report["schema_version"] = nmrq::kReportSchemaVersion;
  report["command"] = "estimate";
  report["regime"] = opt.regime;
  report["dipolar"] = opt.dipolar;
  report["budget"] = nmrq::budget_to_json(budget);
  report["threshold"] = opt.threshold;
  ordered_json mols = ordered_json::array();
  for (const MoleculeResult& r : results)
    if (r.ok) mols.push_back(r.json);
  report["molecules"] = mols;
  report["errors"] = errors_to_json(files, results);

  for (std::size_t i = 0; i < results.size(); ++i)
    if (!results[i].ok)
      std::cerr << "nmrq: " << files[i] << ": " << results[i].error << "\n";

  if (opt.out.empty()) {
    std::cout << (opt.format == "csv" ? nmrq::estimate_report_csv(report) : dump(report));
  } else {
    emit(opt, "estimate.json", dump(report));
    if (opt.format == "csv") emit(opt, "estimate.csv", nmrq::estimate_report_csv(report));
  }
  return finish_batch(results, opt.strict && any_infeasible.load());
}

// --- spectrum ----------------------------------------------------------------

int cmd_spectrum(const Options& opt, const std::string& path,
                 const std::string& observable, const std::string& state_kind,
                 double polarization, int n_freq, double f_max) {
  const Tables tables = load_tables(opt);
  const nmrq::RegimeConfig rc = make_regime(opt);

  nmrq::MolecularGraph g = nmrq::parse_structure(path, make_format(opt), tables.radii);
  std::vector<nmrq::SpinSite> sites = nmrq::select_spin_sites(g, rc, tables.gammas);
  nmrq::SpinHamiltonian h =
      nmrq::build_hamiltonian(g, sites, rc, tables.couplings, tables.gammas);
  std::vector<nmrq::Cluster> clusters = nmrq::decompose_clusters(h, sites);
  if (clusters.empty()) throw std::runtime_error(path + ": no spin sites under this regime");
  const nmrq::Cluster& c = clusters.front();  // largest first
  if (c.size() > nmrq::kDenseSpinCap)
    throw std::runtime_error(
        path + ": largest cluster has " + std::to_string(c.size()) +
        " spins; the dense dynamics oracle is capped at " +
        std::to_string(nmrq::kDenseSpinCap) + " spins");

  std::vector<double> weights =
      observable == "uniform"
          ? nmrq::uniform_weights(c.size())
          : nmrq::gamma_weights(cluster_sites(c, sites));
  Eigen::MatrixXcd obs = nmrq::dense_z_observable(c.size(), weights);

  nmrq::InitialState init;
  if (state_kind == "thermal") {
    init.kind = nmrq::InitialStateKind::ThermalZ;
    init.polarization = polarization;
  }

  std::vector<double> times(static_cast<std::size_t>(std::max(opt.points, 1)));
  const double dt = times.size() > 1
                        ? opt.t_max / static_cast<double>(times.size() - 1)
                        : 0.0;
  for (std::size_t k = 0; k < times.size(); ++k)
    times[k] = static_cast<double>(k) * dt;

  nmrq::CorrelationTrace trace =
      nmrq::correlator(c.h, obs, init, times, observable);

  std::vector<std::string> warnings;
  double c_min = std::numeric_limits<double>::infinity(), c_max = -c_min;
  for (const std::complex<double>& v : trace.values) {
    c_min = std::min(c_min, v.real());
    c_max = std::max(c_max, v.real());
  }
  const double scale = std::max({1.0, std::abs(c_min), std::abs(c_max)});
  if (!trace.values.empty() && (c_max - c_min) <= 1e-10 * scale)
    warnings.push_back(
        "flat trace: the observable is conserved under this Hamiltonian, so the "
        "spectrum carries no lines");

  nmrq::Spectrum spec;
  try {
    spec = nmrq::spectrum(trace, opt.t2, n_freq, f_max);
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": spectrum with " + std::to_string(opt.points) +
                             " trace points: " + e.what());
  }
  spec.peaks = nmrq::find_peaks(spec.frequencies, spec.intensity);

  ordered_json report;
  report["schema_version"] = nmrq::kReportSchemaVersion;
  report["command"] = "spectrum";
  report["molecule"] = molecule_name(path);
  report["source"] = path;
  report["regime"] = opt.regime;
  report["observable"] = observable;
  report["cluster_size"] = c.size();
  report["t_max_s"] = opt.t_max;
  report["t2_s"] = opt.t2;
  report["n_trace_points"] = static_cast<int>(times.size());
  report["bin_hz"] = opt.t_max > 0 ? 1.0 / opt.t_max : 0.0;
  ordered_json peaks = ordered_json::array();
  for (const nmrq::Peak& p : spec.peaks) {
    ordered_json pj;
    pj["frequency_hz"] = p.frequency;
    pj["intensity"] = p.intensity;
    peaks.push_back(pj);
  }
  report["peaks"] = peaks;
  report["warnings"] = warnings;

  for (const std::string& w : warnings) std::cerr << "nmrq: warning: " << w << "\n";

  if (opt.out.empty()) {
    std::cout << dump(report);
  } else {
    emit(opt, "trace.csv", nmrq::trace_to_csv(trace));
    emit(opt, "spectrum.csv", nmrq::spectrum_to_csv(spec));
    emit(opt, "spectrum.json", dump(report));
  }
  return 0;
}

// --- phases -------------------------------------------------------------------

int cmd_phases(const Options& opt, double tau, double eps) {
  nmrq::GqspPlan plan = nmrq::generate_phases(tau, eps);
  ordered_json report;
  report["schema_version"] = nmrq::kReportSchemaVersion;
  report["command"] = "phases";
  report["plan"] = nmrq::plan_to_json(plan);
  report["reconstruction_error"] = nmrq::reconstruction_error(plan, 512);

  if (opt.out.empty()) {
    std::cout << nmrq::phases_to_csv(plan);
  } else {
    emit(opt, "phases.csv", nmrq::phases_to_csv(plan));
    emit(opt, "phases.json", dump(report));
  }
  return 0;
}

// --- physical -----------------------------------------------------------------

int cmd_physical(const Options& opt, double n_t, int n_logical, int d1, int d2,
                 long long n_fact, unsigned long long t_ops, long long shots) {
  nmrq::PhysicalEstimate phys =
      (d1 > 0 && d2 > 0)
          ? nmrq::physical_at(n_t, n_logical, d1, d2, n_fact, nmrq::HardwareModel{},
                              opt.eps_target)
          : nmrq::optimize_distance(n_t, n_logical, opt.eps_target);

  ordered_json report;
  report["schema_version"] = nmrq::kReportSchemaVersion;
  report["command"] = "physical";
  report["n_t"] = n_t;
  report["n_logical"] = n_logical;
  report["eps_target"] = opt.eps_target;
  report["physical"] = nmrq::physical_to_json(phys);

  bool any_infeasible = !phys.feasible;
  if (!opt.machines.empty()) {
    const unsigned long long ops = t_ops > 0 ? t_ops : static_cast<unsigned long long>(n_t);
    ordered_json runtimes = ordered_json::array();
    for (const std::string& key : opt.machines) {
      nmrq::MachineProfile machine = nmrq::reference_machine(key);
      nmrq::RuntimeEstimate rt = nmrq::runtime_estimate(phys, ops, shots, machine);
      ordered_json rj;
      rj["machine"] = machine.name;
      rj["machine_physical_qubits"] = machine.physical_qubits;
      rj["concurrency"] = rt.concurrency;
      rj["t_wall_shot_s"] = rt.t_wall_shot;
      rj["total_seconds"] = rt.total_seconds;
      rj["feasible"] = rt.feasible;
      if (!rt.feasible) any_infeasible = true;
      runtimes.push_back(rj);
    }
    report["runtimes"] = runtimes;
  }

  emit(opt, "physical.json", dump(report));
  return opt.strict && any_infeasible ? 3 : 0;
}

// --- refmodel -----------------------------------------------------------------

int cmd_refmodel(const Options& opt, const std::string& kind, int lx, int ly,
                 double j1, double j2, double j, double u) {
  nmrq::LatticeSpec spec;
  spec.lx = lx;
  spec.ly = ly;
  spec.j1 = j1;
  spec.j2 = j2;
  spec.j = j;
  spec.u = u;

  nmrq::SpinHamiltonian h;
  nmrq::SimulationBudget budget;
  if (kind == "fh") {
    spec.kind = nmrq::LatticeKind::FermiHubbardSquare;
    h = nmrq::build_fermi_hubbard(spec);
    budget = nmrq::fermi_hubbard_budget();
  } else {
    spec.kind = nmrq::LatticeKind::J1J2Triangular;
    h = nmrq::build_j1j2(spec);
    budget = nmrq::j1j2_budget();
  }
  const Tables tables = load_tables(opt);

  ordered_json report;
  report["schema_version"] = nmrq::kReportSchemaVersion;
  report["command"] = "refmodel";
  report["kind"] = kind;
  report["lx"] = lx;
  report["ly"] = ly;
  ordered_json params;
  if (kind == "fh") {
    params["j_hz"] = j;
    params["u_hz"] = u;
    params["u_over_j"] = j != 0.0 ? u / j : 0.0;
  } else {
    params["j1_hz"] = j1;
    params["j2_hz"] = j2;
  }
  report["params"] = params;
  report["n_sites"] = h.n_sites;
  report["term_count"] = h.term_count();
  report["energy_offset_hz"] = h.energy_offset;
  report["metrics"] = nmrq::metrics_to_json(nmrq::cluster_metrics(h));
  report["budget"] = nmrq::budget_to_json(budget);

  nmrq::LogicalEstimate est =
      nmrq::single_shot_cost(h, budget.t_max, budget, tables.cost_model);
  report["single_shot"] = nmrq::estimate_to_json(est);
  nmrq::SampleSchedule sched = nmrq::schedule(h, budget);
  ordered_json sj;
  sj["f_max_hz"] = sched.f_max;
  sj["n_timepoints"] = static_cast<int>(sched.timepoints.size());
  sj["t_first_s"] = sched.timepoints.front();
  sj["t_last_s"] = sched.timepoints.back();
  sj["n_shots"] = sched.n_shots;
  report["schedule"] = sj;

  emit(opt, "refmodel.json", dump(report));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "nmrq: spin-Hamiltonian construction and fault-tolerant quantum resource "
      "estimation for zero-field NMR spectra"};
  app.require_subcommand(1);
  app.fallthrough();

  Options opt;
  app.add_option("--regime", opt.regime, "Spin-active nuclei selection")
      ->check(CLI::IsMember({"proton", "hetero"}));
  app.add_option("--dipolar", opt.dipolar, "Dipolar coupling mode")
      ->check(CLI::IsMember({"none", "rdc", "full"}));
  app.add_option("--kappa", opt.kappa, "Residual-alignment scale for rdc mode");
  app.add_option("--r-cut", opt.r_cut, "Dipolar pair cutoff (Angstrom)");
  app.add_option("--max-bonds", opt.max_bonds, "Scalar-coupling bond range");
  app.add_flag("--exclude-exchangeable", opt.exclude_exchangeable,
               "Drop protons bonded to O/N/S");
  app.add_option("--tmax", opt.t_max, "Maximum evolution time (s)");
  app.add_option("--t2", opt.t2, "Coherence time T2 (s)");
  app.add_option("--eps-max", opt.eps_max, "Unitary-error ceiling");
  app.add_option("--eps-meas", opt.eps_meas, "Per-point measurement precision");
  app.add_option("--points", opt.points, "Sample points (schedule / trace)");
  app.add_option("--coeff-bits", opt.coeff_bits, "Amplitude bits in state prep");
  app.add_option("--threshold", opt.threshold, "Minimum cluster size aggregated");
  app.add_option("--eps-target", opt.eps_target, "Total physical error target");
  app.add_option("--machine", opt.machines,
                 "Machine profile: minimal, ge, fh128, custom:<qubits> (repeatable)");
  app.add_flag("--strict", opt.strict, "Exit 3 when a physical mapping is infeasible");
  app.add_option("--out", opt.out, "Output directory (default: stdout)");
  app.add_option("--format", opt.format, "Report format")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--input-format", opt.input_format, "Structure file format")
      ->check(CLI::IsMember({"auto", "mol", "xyz"}));
  app.add_option("--coupling-table", opt.coupling_table, "Scalar J-coupling table file");
  app.add_option("--gamma-table", opt.gamma_table, "Gyromagnetic ratio table file");
  app.add_option("--radii-table", opt.radii_table, "Covalent radii table file");
  app.add_option("--cost-model", opt.cost_model, "Logical cost model JSON file");

  std::vector<std::string> inspect_paths;
  CLI::App* inspect = app.add_subcommand(
      "inspect", "Cluster structure report for molecules (no cost estimate)");
  inspect->add_option("paths", inspect_paths, "Structure files or directories");

  std::vector<std::string> estimate_paths;
  CLI::App* estimate = app.add_subcommand(
      "estimate", "Logical (and optionally physical) resource estimates");
  estimate->add_option("paths", estimate_paths, "Structure files or directories");

  std::string spectrum_path;
  std::string observable = "gamma";
  std::string state_kind = "mixed";
  double polarization = 0.1;
  int n_freq = 0;
  double f_max = 0.0;
  CLI::App* spectrum = app.add_subcommand(
      "spectrum", "Exact correlation trace and spectrum for a small molecule");
  spectrum->add_option("path", spectrum_path, "Structure file")->required();
  spectrum->add_option("--observable", observable, "Z-observable weighting")
      ->check(CLI::IsMember({"gamma", "uniform"}));
  spectrum->add_option("--state", state_kind, "Initial state")
      ->check(CLI::IsMember({"mixed", "thermal"}));
  spectrum->add_option("--polarization", polarization, "Thermal-state polarization");
  spectrum->add_option("--nfreq", n_freq, "Spectrum points (0 = auto)");
  spectrum->add_option("--fmax", f_max, "Spectrum range (Hz, 0 = Nyquist)");

  double tau = 0.0, eps = 1e-3;
  CLI::App* phases = app.add_subcommand(
      "phases", "Signal-processing phase factors for evolution time tau");
  phases->add_option("--tau", tau, "Rescaled evolution time 2*pi*alpha*t")->required();
  phases->add_option("--eps", eps, "Polynomial truncation error");

  double phys_nt = 0.0;
  int phys_logical = 0, phys_d1 = 0, phys_d2 = 0;
  long long phys_nfact = 0, phys_shots = 1;
  unsigned long long phys_tops = 0;
  CLI::App* physical = app.add_subcommand(
      "physical", "Surface-code mapping of a logical workload");
  physical->add_option("--nt", phys_nt, "Logical T-gate count")->required();
  physical->add_option("--logical", phys_logical, "Logical qubit count")->required();
  physical->add_option("--d1", phys_d1, "Force level-1 code distance");
  physical->add_option("--d2", phys_d2, "Force level-2 code distance");
  physical->add_option("--nfact", phys_nfact, "Force factory count (0 = derive)");
  physical->add_option("--t-ops", phys_tops, "T gates per shot for runtime (0 = --nt)");
  physical->add_option("--shots", phys_shots, "Shots for total runtime");

  std::string ref_kind = "j1j2";
  int ref_lx = 2, ref_ly = 2;
  double ref_j1 = 1.0, ref_j2 = 0.5, ref_j = 1.0, ref_u = -4.0;
  CLI::App* refmodel = app.add_subcommand(
      "refmodel", "Resource estimates for condensed-matter reference lattices");
  refmodel->add_option("--kind", ref_kind, "Model family")
      ->check(CLI::IsMember({"j1j2", "fh"}));
  refmodel->add_option("--lx", ref_lx, "Lattice extent x");
  refmodel->add_option("--ly", ref_ly, "Lattice extent y");
  refmodel->add_option("--j1", ref_j1, "Nearest-neighbor exchange (Hz)");
  refmodel->add_option("--j2", ref_j2, "Next-nearest exchange (Hz)");
  refmodel->add_option("--j", ref_j, "Hopping amplitude (Hz)");
  refmodel->add_option("--u", ref_u, "On-site interaction (Hz)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (inspect->parsed()) return cmd_inspect(opt, inspect_paths);
    if (estimate->parsed()) return cmd_estimate(opt, estimate_paths);
    if (spectrum->parsed())
      return cmd_spectrum(opt, spectrum_path, observable, state_kind, polarization,
                          n_freq, f_max);
    if (phases->parsed()) return cmd_phases(opt, tau, eps);
    if (physical->parsed())
      return cmd_physical(opt, phys_nt, phys_logical, phys_d1, phys_d2, phys_nfact,
                          phys_tops, phys_shots);
    if (refmodel->parsed())
      return cmd_refmodel(opt, ref_kind, ref_lx, ref_ly, ref_j1, ref_j2, ref_j, ref_u);
  } catch (const std::exception& e) {
    std::cerr << "nmrq: error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
