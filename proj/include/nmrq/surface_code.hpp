#pragma once

#include <cstdint>
#include <string>

namespace nmrq {

// Surface-code hardware model: error rates, cycle times, and the AutoCCZ
// factory geometry/volume constants.
struct HardwareModel {
  double p_phys = 1e-4;
  double p_threshold = 1e-2;
  double t_cycle = 1e-6;   // s, code cycle
  double t_react = 1e-5;   // s, decode/feedback reaction time

  // Distillation volumes (logical cells) entering the error chain.
  double inj_volume = 100.0;    // state injection
  double t1_volume = 1100.0;    // level-1 T factory
  double ccz_cat_volume = 1000.0;  // CCZ factory + catalyzer combined
  // The chain needs the CCZ share alone; split the pinned sum by cycle
  // depth (D_CCZ = 5 d2 vs D_cat = 1 d2 -> 5:1). eps_T2 re-sums the parts,
  // so downstream numbers are split-independent.
  double ccz_volume() const { return ccz_cat_volume * 5.0 / 6.0; }
  double cat_volume() const { return ccz_cat_volume / 6.0; }

  // Factory footprints (physical qubits ex routing; x2 routing applied in
  // the layout): T1 unit 4d1 x 8d1, CCZ 6d2 x 3d2, catalyzer 4d2 x 4d2,
  // storage 2 tiles of d2^2.
  double t1_area(int d1) const { return 2.0 * 32.0 * d1 * d1; }
  double ccz_area(int d2) const { return 2.0 * 18.0 * d2 * d2; }
  double cat_area(int d2) const { return 2.0 * 16.0 * d2 * d2; }
  double store_area(int d2) const { return 2.0 * 2.0 * d2 * d2; }

  // Distillation stage depths in code cycles.
  double t1_depth(int d1) const { return 5.75 * d1; }
  double ccz_depth(int d2) const { return 5.0 * d2; }
  double cat_depth(int d2) const { return 1.0 * d2; }

  int eta = 4;  // T1 units feeding one CCZ unit
};

// Logical cell error per round: E(d) = 0.1 * (p/p_th)^((d+1)/2).
double cell_error(int d, const HardwareModel& hw = HardwareModel{});

struct DistillErrors {
  double eps_inj = 0.0;
  double eps_t1 = 0.0;
  double eps_ccz = 0.0;
  double eps_t2 = 0.0;  // per output T state at level 2
};

// Error chain: injection at d0 = floor(d1/2), level-1 T at d1, CCZ +
// catalyzed T at d2.
DistillErrors distill_error(int d1, int d2, const HardwareModel& hw = HardwareModel{});

struct FactoryLayout {
  int d1 = 0, d2 = 0;
  int n_t1_units = 0;       // ceil(eta * D_T1 / D_CCZ)
  double t1_unit_area = 0;  // each, incl routing factor
  double ccz_area = 0;
  double cat_area = 0;
  double store_area = 0;
  double area = 0;          // eta T1 units + CCZ + cat + storage
  double d_t1 = 0, d_ccz = 0, d_cat = 0;
  double d_distill = 0;     // max(D_T1, D_CCZ + D_cat)
};
FactoryLayout factory_layout(int d1, int d2, const HardwareModel& hw = HardwareModel{});

// Fast-block data region: ceil(2 N_L + sqrt(8 N_L) + 1) tiles.
long long data_tiles(int n_logical);

struct PhysicalEstimate {
  int d1 = 0, d2 = 0;
  long long n_factories = 0;
  long long n_data_tiles = 0;
  unsigned long long n_physical = 0;  // factories*area + 2*tiles*d2^2
  double eps_physical = 0.0;
  double t_wall = 0.0;  // s, reaction-limited single shot: N_T * t_react
  bool feasible = false;
  FactoryLayout layout;
};

// Estimate at a forced operating point. n_factories <= 0 derives
// ceil(N_T * D_distill * t_cycle / T_wall) (the N_T cancels against
// T_wall = N_T * t_react).
PhysicalEstimate physical_at(double n_t, int n_logical, int d1, int d2,
                             long long n_factories = 0,
                             const HardwareModel& hw = HardwareModel{},
                             double eps_target = 1e-3);

// Minimize physical qubits over odd d1 in [3,25], odd d2 in [d1+2,51]
// subject to eps_physical <= eps_target; ties prefer smaller d2, then d1.
// No feasible point yields feasible = false (best-effort fields filled).
PhysicalEstimate optimize_distance(double n_t, int n_logical,
                                   double eps_target = 1e-3,
                                   const HardwareModel& hw = HardwareModel{});

struct MachineProfile {
  std::string name;
  double physical_qubits = 0.0;  // 0: single-instance machine (concurrency 1)
  long long logical_hint = 0;
};

// Profiles: "minimal", "ge" (6190 logical / 2.0e7 physical), "fh128"
// (32805 logical / 4.81e7 physical), "custom:<qubits>".
MachineProfile reference_machine(const std::string& key);

struct RuntimeEstimate {
  long long concurrency = 0;  // floor(machine / n_physical); 0 = infeasible
  double t_wall_shot = 0.0;   // s, one shot at the costed N_T
  double total_seconds = 0.0; // ceil(shots/concurrency) * t_ops * t_react
  bool feasible = false;
};

// Wall-clock estimate for `shots` repetitions of a workload consuming
// t_ops T gates (e.g. an aggregate over the schedule), on a machine.
RuntimeEstimate runtime_estimate(const PhysicalEstimate& phys,
                                 unsigned long long t_ops, long long shots,
                                 const MachineProfile& machine,
                                 const HardwareModel& hw = HardwareModel{});

}  // namespace nmrq
