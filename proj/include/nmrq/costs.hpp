#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "nmrq/clusters.hpp"
#include "nmrq/hamiltonian.hpp"

namespace nmrq {

// Pinned logical T-cost formulas, kept in one swappable record and mirrored
// by the machine-readable ledger file (data/cost_model.json).
struct CostModel {
  int ledger_version = 1;

  // Select: select_per_term*M + select_const          (4(M-1))
  long long select_per_term = 4;
  long long select_const = -4;
  // Prepare (QROM + alias sampling): 4M + 8*mu + 4m - 8
  long long prepare_per_term = 4;
  long long prepare_per_mu = 8;
  long long prepare_per_m = 4;
  long long prepare_const = -8;
  // Reflection over m+1 qubits: 4(m-1)
  long long reflection_per_m = 4;
  long long reflection_const = -4;
  // Axial-rotation synthesis: per rotation ceil(rot_slope*log2(1/eps) +
  // rot_offset), bundled as rot_bundle per SU(2) rotation (ZYZ).
  double rot_slope = 1.15;
  double rot_offset = 9.2;
  int rot_bundle = 3;
  // Estimator circuit: two controlled total-spin oracles plus uncompute,
  // 2*2*n*oracle_coeff*(s-1); state-prep comparator 4*mu plus uncompute.
  long long estimator_oracle_coeff = 4;
  long long estimator_pup_coeff = 4;

  static CostModel defaults() { return {}; }
  static CostModel from_json_file(const std::string& path);
  std::string to_json() const;

  static int selection_bits(std::size_t m_terms);  // ceil(log2 M), exact
  long long select_t(std::size_t m_terms) const;
  long long prepare_t(std::size_t m_terms, int mu) const;
  long long reflection_t(std::size_t m_terms) const;
  long long rotation_t(double eps_rot) const;  // full SU(2) rotation (bundle)
};

// ceil with a 1e-9 guard so analytically-integer inputs are stable under
// floating-point noise.
long long ceil_guarded(double x);

struct SimulationBudget {
  double t_max = 1.0;        // s
  double t2 = 1.0;           // s
  double epsilon_max = 5e-3;
  double epsilon_meas = 0.01;
  int n_points = 400;
  int coeff_bits = 10;       // mu
  // > 0: fixed unitary-error target replacing the T2-decay curve
  // (used by the condensed-matter reference presets).
  double epsilon_fixed = 0.0;

  // Per-time error budget: min(1 - exp(-t/T2), epsilon_max), pinned to
  // epsilon_max at t <= 0.
  double epsilon_at(double t) const;
};

struct EncodingCost {
  std::size_t m_terms = 0;
  int m = 0;  // selection bits
  long long select = 0;
  long long prepare = 0;      // prepare_inverse costs the same
  long long reflection = 0;
  int ancilla_qubits = 0;     // m selection + mu keep + mu alt + m alias + 1 flag
  long long query_t() const { return select + 2 * prepare + reflection; }
};

// M = 0 is a domain error.
EncodingCost encoding_cost(std::size_t m_terms, int mu,
                           const CostModel& model = CostModel::defaults());
EncodingCost encoding_cost(const SpinHamiltonian& h, int mu,
                           const CostModel& model = CostModel::defaults());

struct EstimatorOverhead {
  long long spin_oracle_t = 0;  // 2 controlled S^z oracles + uncompute
  long long state_prep_t = 0;   // comparator filter + uncompute
  int extra_qubits = 0;         // 1 readout + ceil(log2 n) sum qubits
};
EstimatorOverhead estimator_overhead(int n_sites, int mu,
                                     const CostModel& model = CostModel::defaults());

struct LogicalEstimate {
  long long n_t = 0;
  long long n_rot = 0;           // SU(2) rotations (2d+1)
  int degree = 0;                // GQSP degree d
  double tau = 0.0;              // 2*pi*alpha*t
  double epsilon = 0.0;          // unitary error target used
  double epsilon_rot = 0.0;      // per-axial-rotation budget
  int n_logical_evolution = 0;   // n + encoding ancilla + 1 phase qubit
  int n_logical_total = 0;       // + estimator registers
  std::map<std::string, long long> breakdown;  // sums exactly to n_t
};

// GQSP time-evolution cost for one query chain (no estimator registers).
LogicalEstimate evolution_cost(const SpinHamiltonian& h, double t,
                               const SimulationBudget& budget,
                               const CostModel& model = CostModel::defaults());

// Evolution plus the correlation-estimator circuit (the reported cost).
LogicalEstimate single_shot_cost(const SpinHamiltonian& h, double t,
                                 const SimulationBudget& budget,
                                 const CostModel& model = CostModel::defaults());

struct SampleSchedule {
  std::vector<double> timepoints;  // log-spaced, inclusive endpoints
  double f_max = 0.0;              // Hz
  long long n_shots = 0;           // ceil(1/epsilon_meas^2)
};

// Log-spaced t_k in [1/(2 f_max), t_max]. Empty Hamiltonian (f_max = 0)
// or an inverted interval is a domain error.
SampleSchedule schedule(const SpinHamiltonian& h, const SimulationBudget& budget);

struct AggregateEstimate {
  int threshold = 20;
  int included_clusters = 0;
  bool empty = true;  // no cluster met the threshold
  unsigned long long aggregate_t = 0;      // sum over clusters and timepoints
  long long single_shot_max = 0;           // max over included clusters at t_max
  int n_logical_max = 0;                   // largest included cluster's total
  long long n_shots = 0;
  unsigned long long classical_n2_shots = 0;  // informational N^2-sampling path
  std::vector<long long> per_cluster_single_shot;  // included clusters, in order
  double ratio() const {
    return single_shot_max > 0
               ? static_cast<double>(aggregate_t) / static_cast<double>(single_shot_max)
               : 0.0;
  }
};

// Sums single-shot n_T over every cluster with size >= threshold and every
// schedule timepoint. No qualifying cluster yields an empty (flagged) result.
AggregateEstimate aggregate_cost(const std::vector<Cluster>& clusters,
                                 const SimulationBudget& budget, int threshold = 20,
                                 const CostModel& model = CostModel::defaults());

}  // namespace nmrq
