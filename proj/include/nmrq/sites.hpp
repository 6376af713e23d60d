#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nmrq/structure.hpp"

namespace nmrq {

// Gyromagnetic ratios keyed by (element, mass number), rad/(s*T).
class GyromagneticTable {
 public:
  static GyromagneticTable defaults();  // 1H, 13C, 15N
  // File format: "Element isotope gamma" per line; '#' comments allowed.
  static GyromagneticTable load(const std::string& path);
  void set(const std::string& element, int isotope, double gamma);
  std::optional<double> gamma(const std::string& element, int isotope) const;
  // Reference gamma for weighted observables (proton).
  double gamma_reference() const;

 private:
  std::map<std::pair<std::string, int>, double> gammas_;
};

enum class Regime { Proton, Heteronuclear };
enum class DipolarMode { None, Rdc, Full };

// Which spins participate and how couplings are generated.
struct RegimeConfig {
  Regime regime = Regime::Proton;
  DipolarMode dipolar = DipolarMode::None;
  double kappa = 1e-3;           // residual-alignment scale for RDC mode
  double r_cut = 4.0;            // Angstrom; dipolar pair cutoff
  int max_bond_separation = 4;   // scalar couplings reach this many bonds
  bool include_exchangeable = true;  // protons on O/N/S

  static RegimeConfig proton();
  static RegimeConfig heteronuclear();
};

// A spin-active nucleus selected from a molecular graph.
struct SpinSite {
  int atom = -1;  // index into MolecularGraph::atoms
  std::string element;
  int isotope = 0;
  double gamma = 0.0;  // rad/(s*T)
};

// The mass number treated as spin-active for an element under a regime,
// or 0 if the element is inactive. Proton: H->1. Heteronuclear: H->1,
// C->13, N->15 (labeled-sample convention).
int active_isotope(const std::string& element, Regime regime);

// True if atom is a hydrogen bonded to O, N, or S (exchangeable proton).
bool is_exchangeable_proton(const MolecularGraph& g, int atom);

// Pick the spin sites for a regime. Atoms with an explicit isotope keep it:
// they are active only if it matches the regime's active mass number
// (e.g. explicit deuterium is skipped; explicit 13C is active under
// Heteronuclear). Unspecified isotopes are assigned the active mass number.
std::vector<SpinSite> select_spin_sites(
    const MolecularGraph& g, const RegimeConfig& config,
    const GyromagneticTable& gammas = GyromagneticTable::defaults());

}  // namespace nmrq
