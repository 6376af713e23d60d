#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nmrq/sites.hpp"
#include "nmrq/structure.hpp"

namespace nmrq {

enum class Axis : int { X = 0, Y = 1, Z = 2 };
char axis_char(Axis a);
Axis axis_from_char(char c);

struct PauliFactor {
  int site = 0;
  Axis axis = Axis::X;
  friend bool operator==(const PauliFactor&, const PauliFactor&) = default;
};
bool operator<(const PauliFactor& a, const PauliFactor& b);

// coeff * product of single-site Pauli operators on distinct sites.
// Coefficients are in Hz throughout: time evolution is exp(-i 2*pi H t).
struct PauliTerm {
  double coeff = 0.0;
  std::vector<PauliFactor> factors;  // sorted by site after canonicalize
  int weight() const { return static_cast<int>(factors.size()); }
};

struct SpinHamiltonian {
  int n_sites = 0;
  double energy_offset = 0.0;  // identity component, Hz; excluded from alpha
  std::vector<PauliTerm> terms;
  std::map<std::string, std::string> metadata;

  std::size_t term_count() const { return terms.size(); }
  double alpha() const;  // LCU 1-norm: sum of |coeff|
  double f_max() const;  // max |coeff| (bounds the fastest coupling)
};

// Scalar J-couplings in Hz keyed by (element pair, bond separation).
// A missing (pair, separation) entry means "no coupling"; a pair with no
// entries at all is "not covered" and triggers a configuration error when
// such a pair occurs within scalar range.
class CouplingTable {
 public:
  static CouplingTable defaults();
  // File format: "ElemA ElemB separation J_Hz" per line; '#' comments.
  static CouplingTable load(const std::string& path);
  void set(const std::string& a, const std::string& b, int separation, double j_hz);
  std::optional<double> coupling(const std::string& a, const std::string& b,
                                 int separation) const;
  bool covers(const std::string& a, const std::string& b) const;
  static std::string pair_key(const std::string& a, const std::string& b);

 private:
  std::map<std::string, std::map<int, double>> table_;
};

// A coupled site pair retained in the Hamiltonian (for cluster metrics).
struct PairCoupling {
  int site_a = 0;
  int site_b = 0;
  int bond_separation = 0;  // -1 for through-space (dipolar-only) pairs
  double j_hz = 0.0;        // scalar J (0 if dipolar-only)
};

// Build the spin Hamiltonian for the selected sites:
//   scalar:   sum_{k<l} (J_kl/4)(XX + YY + ZZ)
//   dipolar:  sum_{k<l} (s*b_Hz/4)(delta_ab - 3 rhat_a rhat_b) sigma_a sigma_b
// with b = mu0*gamma_k*gamma_l*hbar/(4 pi r^3) rad/s, b_Hz = b/(2 pi),
// s = kappa for RDC mode and 1 for full dipolar. Tensor components below
// 1e-12*|b_Hz| are dropped. Result is canonicalized.
SpinHamiltonian build_hamiltonian(const MolecularGraph& g,
                                  const std::vector<SpinSite>& sites,
                                  const RegimeConfig& config,
                                  const CouplingTable& couplings = CouplingTable::defaults(),
                                  const GyromagneticTable& gammas = GyromagneticTable::defaults());

// The coupled pairs the builder retained, in deterministic (k<l) order.
std::vector<PairCoupling> coupled_pairs(const MolecularGraph& g,
                                        const std::vector<SpinSite>& sites,
                                        const RegimeConfig& config,
                                        const CouplingTable& couplings = CouplingTable::defaults());

// Sort factors by site, order terms lexicographically, merge duplicates,
// drop numerically-zero terms. Serialization of a canonical Hamiltonian is
// byte-stable.
void canonicalize(SpinHamiltonian& h);

// Text round-trip:
//   # comment lines
//   nspins N
//   offset E
//   meta key value
//   <coeff> site:Axis [site:Axis ...]
std::string to_text(const SpinHamiltonian& h);
SpinHamiltonian hamiltonian_from_text(std::istream& in);
SpinHamiltonian hamiltonian_from_text(const std::string& text);

}  // namespace nmrq
