#include "nmrq/surface_code.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nmrq/costs.hpp"

namespace nmrq {

double cell_error(int d, const HardwareModel& hw) {
  if (d < 1) throw std::domain_error("cell_error: code distance must be >= 1");
  if (!(hw.p_phys > 0.0) || !(hw.p_threshold > 0.0))
    throw std::domain_error("cell_error: error rates must be positive");
  return 0.1 * std::pow(hw.p_phys / hw.p_threshold, (d + 1) / 2.0);
}

DistillErrors distill_error(int d1, int d2, const HardwareModel& hw) {
  if (d1 < 2 || d2 < d1)
    throw std::domain_error("distill_error: need d2 >= d1 >= 2");
  DistillErrors e;
  const int d0 = d1 / 2;
  // Injection at half distance, then 15-to-1 T distillation (35 ways for
  // three input faults to slip through), then catalyzed CCZ (28 ways for
  // two faulty T inputs out of eight).
  e.eps_inj = hw.inj_volume * cell_error(d0, hw) + hw.p_phys;
  e.eps_t1 = hw.t1_volume * cell_error(d1, hw) + 35.0 * std::pow(e.eps_inj, 3);
  e.eps_ccz = hw.ccz_volume() * cell_error(d2, hw) + 28.0 * e.eps_t1 * e.eps_t1;
  e.eps_t2 = hw.cat_volume() * cell_error(d2, hw) + e.eps_ccz;
  return e;
}

FactoryLayout factory_layout(int d1, int d2, const HardwareModel& hw) {
  if (d1 < 1 || d2 < 1)
    throw std::domain_error("factory_layout: distances must be >= 1");
  FactoryLayout f;
  f.d1 = d1;
  f.d2 = d2;
  f.d_t1 = hw.t1_depth(d1);
  f.d_ccz = hw.ccz_depth(d2);
  f.d_cat = hw.cat_depth(d2);
  f.d_distill = std::max(f.d_t1, f.d_ccz + f.d_cat);
  // T1 units needed to keep the CCZ stage fed at its own cadence.
  f.n_t1_units = static_cast<int>(ceil_guarded(hw.eta * f.d_t1 / f.d_ccz));
  f.t1_unit_area = hw.t1_area(d1);
  f.ccz_area = hw.ccz_area(d2);
  f.cat_area = hw.cat_area(d2);
  f.store_area = hw.store_area(d2);
  // The floor plan provisions the full eta-wide T1 bank.
  f.area = hw.eta * f.t1_unit_area + f.ccz_area + f.cat_area + f.store_area;
  return f;
}

long long data_tiles(int n_logical) {
  if (n_logical < 1) throw std::domain_error("data_tiles: need >= 1 logical qubit");
  const double n = static_cast<double>(n_logical);
  // Fast-block layout: one tile per qubit, one ancilla lane per qubit, and a
  // sqrt-sized access corridor.
  return ceil_guarded(2.0 * n + std::sqrt(8.0 * n) + 1.0);
}

PhysicalEstimate physical_at(double n_t, int n_logical, int d1, int d2,
                             long long n_factories, const HardwareModel& hw,
                             double eps_target) {
  if (!(n_t > 0.0)) throw std::domain_error("physical_at: T count must be positive");
  PhysicalEstimate p;
  p.d1 = d1;
  p.d2 = d2;
  p.layout = factory_layout(d1, d2, hw);
  p.n_data_tiles = data_tiles(n_logical);

  if (n_factories > 0) {
    p.n_factories = n_factories;
  } else {
    // Enough factories that distillation keeps pace with the reaction-limited
    // consumption rate; the T count cancels out of the ratio.
    p.n_factories = ceil_guarded(p.layout.d_distill * hw.t_cycle / hw.t_react);
    p.n_factories = std::max<long long>(p.n_factories, 1);
  }

  const double tile_phys = 2.0 * static_cast<double>(d2) * static_cast<double>(d2);
  p.n_physical = static_cast<unsigned long long>(
      ceil_guarded(static_cast<double>(p.n_factories) * p.layout.area +
                   static_cast<double>(p.n_data_tiles) * tile_phys));

  const DistillErrors derr = distill_error(d1, d2, hw);
  // Data-block exposure for the whole run plus per-T magic-state infidelity
  // (each CCZ output serves two T gates).
  p.eps_physical = n_t * static_cast<double>(p.n_data_tiles) * cell_error(d2, hw) +
                   0.5 * n_t * derr.eps_t2;
  p.t_wall = n_t * hw.t_react;
  p.feasible = p.eps_physical <= eps_target;
  return p;
}

PhysicalEstimate optimize_distance(double n_t, int n_logical, double eps_target,
                                   const HardwareModel& hw) {
  PhysicalEstimate best;
  bool have_any = false;
  for (int d1 = 3; d1 <= 25; d1 += 2) {
    for (int d2 = d1 + 2; d2 <= 51; d2 += 2) {
      const PhysicalEstimate cand =
          physical_at(n_t, n_logical, d1, d2, 0, hw, eps_target);
      if (!have_any) {
        best = cand;
        have_any = true;
        continue;
      }
      if (cand.feasible != best.feasible) {
        if (cand.feasible) best = cand;
        continue;
      }
      if (cand.feasible) {
        const bool better =
            cand.n_physical < best.n_physical ||
            (cand.n_physical == best.n_physical &&
             (cand.d2 < best.d2 || (cand.d2 == best.d2 && cand.d1 < best.d1)));
        if (better) best = cand;
      } else {
        // Neither point meets the target: keep the most accurate one so the
        // caller sees how far off the best attempt lands.
        if (cand.eps_physical < best.eps_physical) best = cand;
      }
    }
  }
  return best;
}

MachineProfile reference_machine(const std::string& key) {
  if (key == "minimal") return {"minimal", 0.0, 0};
  if (key == "ge") return {"ge", 2.0e7, 6190};
  if (key == "fh128") return {"fh128", 4.81e7, 32805};
  const std::string prefix = "custom:";
  if (key.rfind(prefix, 0) == 0) {
    const std::string arg = key.substr(prefix.size());
    std::size_t used = 0;
    double q = 0.0;
    try {
      q = std::stod(arg, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != arg.size() || !(q > 0.0))
      throw std::runtime_error("reference_machine: bad qubit count in '" + key + "'");
    return {"custom", q, 0};
  }
  throw std::runtime_error(
      "reference_machine: unknown machine '" + key +
      "' (expected minimal, ge, fh128, or custom:<qubits>)");
}

RuntimeEstimate runtime_estimate(const PhysicalEstimate& phys,
                                 unsigned long long t_ops, long long shots,
                                 const MachineProfile& machine,
                                 const HardwareModel& hw) {
  if (shots < 1) throw std::domain_error("runtime_estimate: need >= 1 shot");
  RuntimeEstimate r;
  r.t_wall_shot = static_cast<double>(t_ops) * hw.t_react;
  if (machine.physical_qubits <= 0.0) {
    // "minimal" machine: exactly one instance, sized to the workload.
    r.concurrency = 1;
  } else {
    r.concurrency = static_cast<long long>(
        machine.physical_qubits / static_cast<double>(phys.n_physical));
  }
  if (r.concurrency < 1) {
    r.concurrency = 0;
    r.feasible = false;
    r.total_seconds = 0.0;
    return r;
  }
  const long long batches = (shots + r.concurrency - 1) / r.concurrency;
  r.total_seconds = static_cast<double>(batches) * r.t_wall_shot;
  r.feasible = true;
  return r;
}

}  // namespace nmrq
