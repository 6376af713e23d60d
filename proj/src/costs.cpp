#include "nmrq/costs.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "nmrq/constants.hpp"
#include "nmrq/gqsp.hpp"

namespace nmrq {

namespace {

long long clamp_nonneg(long long v) { return v < 0 ? 0 : v; }

}  // namespace

long long ceil_guarded(double x) {
  // Analytic integers routinely arrive as n +/- few ulp after a chain of
  // float ops; the guard keeps ceil from jumping a whole unit on noise.
  return static_cast<long long>(std::ceil(x - 1e-9));
}

int CostModel::selection_bits(std::size_t m_terms) {
  if (m_terms <= 1) return 0;
  return std::bit_width(m_terms - 1);
}

long long CostModel::select_t(std::size_t m_terms) const {
  return clamp_nonneg(select_per_term * static_cast<long long>(m_terms) +
                      select_const);
}

long long CostModel::prepare_t(std::size_t m_terms, int mu) const {
  const long long m = selection_bits(m_terms);
  return clamp_nonneg(prepare_per_term * static_cast<long long>(m_terms) +
                      prepare_per_mu * mu + prepare_per_m * m + prepare_const);
}

long long CostModel::reflection_t(std::size_t m_terms) const {
  const long long m = selection_bits(m_terms);
  return clamp_nonneg(reflection_per_m * m + reflection_const);
}

long long CostModel::rotation_t(double eps_rot) const {
  if (!(eps_rot > 0.0))
    throw std::domain_error("rotation_t: rotation error budget must be positive");
  const double per_axial = rot_slope * std::log2(1.0 / eps_rot) + rot_offset;
  return rot_bundle * clamp_nonneg(ceil_guarded(per_axial));
}

std::string CostModel::to_json() const {
  nlohmann::ordered_json j;
  j["ledger_version"] = ledger_version;
  j["select_per_term"] = select_per_term;
  j["select_const"] = select_const;
  j["prepare_per_term"] = prepare_per_term;
  j["prepare_per_mu"] = prepare_per_mu;
  j["prepare_per_m"] = prepare_per_m;
  j["prepare_const"] = prepare_const;
  j["reflection_per_m"] = reflection_per_m;
  j["reflection_const"] = reflection_const;
  j["rot_slope"] = rot_slope;
  j["rot_offset"] = rot_offset;
  j["rot_bundle"] = rot_bundle;
  j["estimator_oracle_coeff"] = estimator_oracle_coeff;
  j["estimator_pup_coeff"] = estimator_pup_coeff;
  return j.dump(2) + "\n";
}

CostModel CostModel::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cost model file not found: " + path);
  nlohmann::json j;
  in >> j;
  CostModel m = defaults();
  m.ledger_version = j.value("ledger_version", m.ledger_version);
  m.select_per_term = j.value("select_per_term", m.select_per_term);
  m.select_const = j.value("select_const", m.select_const);
  m.prepare_per_term = j.value("prepare_per_term", m.prepare_per_term);
  m.prepare_per_mu = j.value("prepare_per_mu", m.prepare_per_mu);
  m.prepare_per_m = j.value("prepare_per_m", m.prepare_per_m);
  m.prepare_const = j.value("prepare_const", m.prepare_const);
  m.reflection_per_m = j.value("reflection_per_m", m.reflection_per_m);
  m.reflection_const = j.value("reflection_const", m.reflection_const);
  m.rot_slope = j.value("rot_slope", m.rot_slope);
  m.rot_offset = j.value("rot_offset", m.rot_offset);
  m.rot_bundle = j.value("rot_bundle", m.rot_bundle);
  m.estimator_oracle_coeff = j.value("estimator_oracle_coeff", m.estimator_oracle_coeff);
  m.estimator_pup_coeff = j.value("estimator_pup_coeff", m.estimator_pup_coeff);
  return m;
}

double SimulationBudget::epsilon_at(double t) const {
  if (epsilon_fixed > 0.0) return epsilon_fixed;
  if (!(epsilon_max > 0.0))
    throw std::domain_error("SimulationBudget: epsilon_max must be positive");
  if (t <= 0.0) return epsilon_max;
  if (!(t2 > 0.0))
    throw std::domain_error("SimulationBudget: T2 must be positive");
  // Coherence already lost to T2 decay caps how much unitary accuracy is
  // worth paying for; past the cap the budget saturates.
  return std::min(1.0 - std::exp(-t / t2), epsilon_max);
}

EncodingCost encoding_cost(std::size_t m_terms, int mu, const CostModel& model) {
  if (m_terms == 0)
    throw std::domain_error("encoding_cost: Hamiltonian has no terms");
  if (mu < 1) throw std::domain_error("encoding_cost: coefficient bits must be >= 1");
  EncodingCost c;
  c.m_terms = m_terms;
  c.m = CostModel::selection_bits(m_terms);
  c.select = model.select_t(m_terms);
  c.prepare = model.prepare_t(m_terms, mu);
  c.reflection = model.reflection_t(m_terms);
  c.ancilla_qubits = 2 * c.m + 2 * mu + 1;
  return c;
}

EncodingCost encoding_cost(const SpinHamiltonian& h, int mu, const CostModel& model) {
  return encoding_cost(h.term_count(), mu, model);
}

EstimatorOverhead estimator_overhead(int n_sites, int mu, const CostModel& model) {
  if (n_sites < 1)
    throw std::domain_error("estimator_overhead: need at least one site");
  EstimatorOverhead e;
  const int s = CostModel::selection_bits(static_cast<std::size_t>(n_sites));
  // Two controlled total-spin oracles, each computed and uncomputed: the
  // oracle adds n single-bit contributions into an s-bit accumulator.
  e.spin_oracle_t = 4 * model.estimator_oracle_coeff *
                    static_cast<long long>(n_sites) *
                    std::max(0, s - 1);
  // Comparator against the mu-bit amplitude register, plus uncompute.
  e.state_prep_t = 2 * model.estimator_pup_coeff * static_cast<long long>(mu);
  e.extra_qubits = 1 + s;
  return e;
}

LogicalEstimate evolution_cost(const SpinHamiltonian& h, double t,
                               const SimulationBudget& budget,
                               const CostModel& model) {
  const EncodingCost enc = encoding_cost(h, budget.coeff_bits, model);
  const double alpha = h.alpha();
  LogicalEstimate est;
  est.tau = 2.0 * constants::pi * alpha * t;
  est.epsilon = budget.epsilon_at(t);
  est.degree = plan_degree(est.tau, est.epsilon);
  const long long two_d = 2LL * est.degree;
  est.n_rot = two_d + 1;
  est.epsilon_rot = est.epsilon / (3.0 * static_cast<double>(est.n_rot));
  const long long rot = model.rotation_t(est.epsilon_rot);

  est.breakdown["select"] = two_d * enc.select;
  est.breakdown["prepare"] = two_d * enc.prepare;
  est.breakdown["prepare_inverse"] = two_d * enc.prepare;
  est.breakdown["reflection"] = two_d * enc.reflection;
  est.breakdown["rotations"] = est.n_rot * rot;
  est.n_t = 0;
  for (const auto& [label, cost] : est.breakdown) est.n_t += cost;

  est.n_logical_evolution = h.n_sites + enc.ancilla_qubits + 1;
  est.n_logical_total = est.n_logical_evolution;
  return est;
}

LogicalEstimate single_shot_cost(const SpinHamiltonian& h, double t,
                                 const SimulationBudget& budget,
                                 const CostModel& model) {
  LogicalEstimate est = evolution_cost(h, t, budget, model);
  const EstimatorOverhead over =
      estimator_overhead(h.n_sites, budget.coeff_bits, model);
  est.breakdown["spin_oracles"] = over.spin_oracle_t;
  est.breakdown["state_prep"] = over.state_prep_t;
  est.n_t += over.spin_oracle_t + over.state_prep_t;
  est.n_logical_total = est.n_logical_evolution + over.extra_qubits;
  return est;
}

SampleSchedule schedule(const SpinHamiltonian& h, const SimulationBudget& budget) {
  SampleSchedule s;
  s.f_max = h.f_max();
  if (!(s.f_max > 0.0))
    throw std::domain_error(
        "schedule: Hamiltonian has no terms, so the fastest frequency is zero");
  if (budget.n_points < 1)
    throw std::domain_error("schedule: need at least one timepoint");
  if (!(budget.epsilon_meas > 0.0))
    throw std::domain_error("schedule: measurement precision must be positive");
  s.n_shots = ceil_guarded(1.0 / (budget.epsilon_meas * budget.epsilon_meas));

  const double t_hi = budget.t_max;
  if (budget.n_points == 1) {
    s.timepoints = {t_hi};
    return s;
  }
  // Earliest useful sample: half a period of the fastest spectral line.
  const double t_lo = 1.0 / (2.0 * s.f_max);
  if (!(t_lo < t_hi))
    throw std::domain_error(
        "schedule: acquisition window ends before the first useful sample "
        "(increase t_max or the number of points)");
  s.timepoints.resize(static_cast<std::size_t>(budget.n_points));
  const double log_ratio = std::log(t_hi / t_lo);
  const int last = budget.n_points - 1;
  for (int k = 0; k <= last; ++k)
    s.timepoints[static_cast<std::size_t>(k)] =
        t_lo * std::exp(log_ratio * static_cast<double>(k) / last);
  s.timepoints.front() = t_lo;
  s.timepoints.back() = t_hi;
  return s;
}

AggregateEstimate aggregate_cost(const std::vector<Cluster>& clusters,
                                 const SimulationBudget& budget, int threshold,
                                 const CostModel& model) {
  AggregateEstimate agg;
  agg.threshold = threshold;
  if (!(budget.epsilon_meas > 0.0))
    throw std::domain_error("aggregate_cost: measurement precision must be positive");
  agg.n_shots = ceil_guarded(1.0 / (budget.epsilon_meas * budget.epsilon_meas));

  for (const Cluster& cluster : clusters) {
    const int size = static_cast<int>(cluster.size());
    if (size < threshold) continue;
    if (cluster.h.term_count() == 0) continue;  // uncoupled singletons
    const SampleSchedule sched = schedule(cluster.h, budget);
    for (double t : sched.timepoints) {
      const LogicalEstimate shot = single_shot_cost(cluster.h, t, budget, model);
      agg.aggregate_t += static_cast<unsigned long long>(shot.n_t);
    }
    const LogicalEstimate at_tmax =
        single_shot_cost(cluster.h, budget.t_max, budget, model);
    agg.per_cluster_single_shot.push_back(at_tmax.n_t);
    agg.single_shot_max = std::max(agg.single_shot_max, at_tmax.n_t);
    agg.n_logical_max = std::max(agg.n_logical_max, at_tmax.n_logical_total);
    agg.classical_n2_shots += static_cast<unsigned long long>(size) *
                              static_cast<unsigned long long>(size) *
                              static_cast<unsigned long long>(agg.n_shots);
    ++agg.included_clusters;
  }
  agg.empty = agg.included_clusters == 0;
  return agg;
}

}  // namespace nmrq
