#include "nmrq/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "nmrq/constants.hpp"

namespace nmrq {

namespace {
std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string format_coeff(double c) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", c);
  return buf;
}

bool term_less(const PauliTerm& a, const PauliTerm& b) {
  return std::lexicographical_compare(
      a.factors.begin(), a.factors.end(), b.factors.begin(), b.factors.end(),
      [](const PauliFactor& x, const PauliFactor& y) { return x < y; });
}
}  // namespace

char axis_char(Axis a) {
  switch (a) {
    case Axis::X: return 'X';
    case Axis::Y: return 'Y';
    default: return 'Z';
  }
}

Axis axis_from_char(char c) {
  switch (c) {
    case 'X': case 'x': return Axis::X;
    case 'Y': case 'y': return Axis::Y;
    case 'Z': case 'z': return Axis::Z;
    default:
      throw std::invalid_argument(std::string("invalid Pauli axis '") + c + "'");
  }
}

bool operator<(const PauliFactor& a, const PauliFactor& b) {
  if (a.site != b.site) return a.site < b.site;
  return static_cast<int>(a.axis) < static_cast<int>(b.axis);
}

double SpinHamiltonian::alpha() const {
  double s = 0.0;
  for (const PauliTerm& t : terms) s += std::abs(t.coeff);
  return s;
}

double SpinHamiltonian::f_max() const {
  double m = 0.0;
  for (const PauliTerm& t : terms) m = std::max(m, std::abs(t.coeff));
  return m;
}

std::string CouplingTable::pair_key(const std::string& a, const std::string& b) {
  return a <= b ? a + "-" + b : b + "-" + a;
}

CouplingTable CouplingTable::defaults() {
  CouplingTable t;
  // Representative isotropic J values (Hz) by bond separation.
  t.set("H", "H", 1, 280.0);   // directly bonded (H2)
  t.set("H", "H", 2, -12.0);   // geminal
  t.set("H", "H", 3, 7.0);     // vicinal
  t.set("H", "H", 4, 0.5);     // long range
  t.set("C", "H", 1, 125.0);
  t.set("C", "H", 2, -4.5);
  t.set("C", "H", 3, 5.0);
  t.set("N", "H", 1, -90.0);
  t.set("N", "H", 2, 2.0);
  t.set("N", "H", 3, 1.0);
  t.set("C", "C", 1, 35.0);
  t.set("C", "C", 2, 2.0);
  t.set("C", "C", 3, 4.0);
  t.set("C", "N", 1, -12.0);
  t.set("C", "N", 2, 3.0);
  t.set("C", "N", 3, 1.0);
  t.set("N", "N", 1, 0.0);  // coverage marker: pair known, coupling negligible
  return t;
}

CouplingTable CouplingTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open coupling table: " + path);
  CouplingTable t;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    std::istringstream iss(s);
    std::string a, b;
    int sep;
    double j;
    if (!(iss >> a >> b >> sep >> j))
      throw ParseError(path, lineno, "expected: ElemA ElemB separation J_Hz");
    t.set(a, b, sep, j);
  }
  return t;
}

void CouplingTable::set(const std::string& a, const std::string& b, int separation,
                        double j_hz) {
  table_[pair_key(a, b)][separation] = j_hz;
}

std::optional<double> CouplingTable::coupling(const std::string& a,
                                              const std::string& b,
                                              int separation) const {
  auto it = table_.find(pair_key(a, b));
  if (it == table_.end()) return std::nullopt;
  auto jt = it->second.find(separation);
  if (jt == it->second.end()) return std::nullopt;
  return jt->second;
}

bool CouplingTable::covers(const std::string& a, const std::string& b) const {
  return table_.count(pair_key(a, b)) > 0;
}

std::vector<PairCoupling> coupled_pairs(const MolecularGraph& g,
                                        const std::vector<SpinSite>& sites,
                                        const RegimeConfig& config,
                                        const CouplingTable& couplings) {
  Eigen::MatrixXi dist = bond_distance_matrix(g);
  std::vector<PairCoupling> pairs;
  int n = static_cast<int>(sites.size());
  for (int k = 0; k < n; ++k) {
    for (int l = k + 1; l < n; ++l) {
      const SpinSite& a = sites[static_cast<std::size_t>(k)];
      const SpinSite& b = sites[static_cast<std::size_t>(l)];
      int d = dist(a.atom, b.atom);
      bool scalar_range = d >= 1 && d <= config.max_bond_separation;
      double j = 0.0;
      if (scalar_range) {
        if (!couplings.covers(a.element, b.element))
          throw std::runtime_error(
              "coupling table has no entry for pair \"" +
              CouplingTable::pair_key(a.element, b.element) + "\" (atoms " +
              std::to_string(a.atom) + " and " + std::to_string(b.atom) + " are " +
              std::to_string(d) + " bonds apart)");
        j = couplings.coupling(a.element, b.element, d).value_or(0.0);
      }
      bool dipolar = config.dipolar != DipolarMode::None &&
                     g.distance(a.atom, b.atom) <= config.r_cut;
      if (j != 0.0 || dipolar)
        pairs.push_back({k, l, scalar_range ? d : -1, j});
    }
  }
  return pairs;
}

SpinHamiltonian build_hamiltonian(const MolecularGraph& g,
                                  const std::vector<SpinSite>& sites,
                                  const RegimeConfig& config,
                                  const CouplingTable& couplings,
                                  const GyromagneticTable& /*gammas*/) {
  SpinHamiltonian h;
  h.n_sites = static_cast<int>(sites.size());
  Eigen::MatrixXi dist = bond_distance_matrix(g);

  for (int k = 0; k < h.n_sites; ++k) {
    for (int l = k + 1; l < h.n_sites; ++l) {
      const SpinSite& a = sites[static_cast<std::size_t>(k)];
      const SpinSite& b = sites[static_cast<std::size_t>(l)];
      int d = dist(a.atom, b.atom);

      // Scalar coupling: (J/4)(XX + YY + ZZ) for pairs within bond range.
      if (d >= 1 && d <= config.max_bond_separation) {
        if (!couplings.covers(a.element, b.element))
          throw std::runtime_error(
              "coupling table has no entry for pair \"" +
              CouplingTable::pair_key(a.element, b.element) + "\" (atoms " +
              std::to_string(a.atom) + " and " + std::to_string(b.atom) + " are " +
              std::to_string(d) + " bonds apart)");
        double j = couplings.coupling(a.element, b.element, d).value_or(0.0);
        if (j != 0.0) {
          for (Axis ax : {Axis::X, Axis::Y, Axis::Z})
            h.terms.push_back({j / 4.0, {{k, ax}, {l, ax}}});
        }
      }

      // Dipolar coupling: (s*b_Hz/4)(delta_ab - 3 rhat_a rhat_b).
      if (config.dipolar != DipolarMode::None) {
        double r_ang = g.distance(a.atom, b.atom);
        if (r_ang <= config.r_cut && r_ang > 0.0) {
          double r_m = r_ang * 1e-10;
          double b_rad = constants::mu0 * a.gamma * b.gamma * constants::hbar /
                         (4.0 * constants::pi * r_m * r_m * r_m);
          double b_hz = b_rad / (2.0 * constants::pi);
          double scale = config.dipolar == DipolarMode::Rdc ? config.kappa : 1.0;
          Eigen::Vector3d rhat = (g.position(b.atom) - g.position(a.atom)).normalized();
          for (int alpha = 0; alpha < 3; ++alpha) {
            for (int beta = 0; beta < 3; ++beta) {
              double delta = alpha == beta ? 1.0 : 0.0;
              double c = scale * (b_hz / 4.0) * (delta - 3.0 * rhat[alpha] * rhat[beta]);
              if (std::abs(c) < 1e-12 * std::abs(scale * b_hz)) continue;
              h.terms.push_back(
                  {c, {{k, static_cast<Axis>(alpha)}, {l, static_cast<Axis>(beta)}}});
            }
          }
        }
      }
    }
  }
  canonicalize(h);
  return h;
}

void canonicalize(SpinHamiltonian& h) {
  for (PauliTerm& t : h.terms) {
    std::sort(t.factors.begin(), t.factors.end());
    std::set<int> seen;
    for (const PauliFactor& f : t.factors) {
      if (f.site < 0 || f.site >= h.n_sites)
        throw std::invalid_argument("Pauli factor site " + std::to_string(f.site) +
                                    " outside register of " +
                                    std::to_string(h.n_sites) + " sites");
      if (!seen.insert(f.site).second)
        throw std::invalid_argument("repeated site " + std::to_string(f.site) +
                                    " in a Pauli term");
    }
  }
  std::sort(h.terms.begin(), h.terms.end(), term_less);
  std::vector<PauliTerm> merged;
  for (const PauliTerm& t : h.terms) {
    if (t.factors.empty()) {  // identity terms fold into the offset
      h.energy_offset += t.coeff;
      continue;
    }
    if (!merged.empty() && merged.back().factors == t.factors)
      merged.back().coeff += t.coeff;
    else
      merged.push_back(t);
  }
  double cmax = 0.0;
  for (const PauliTerm& t : merged) cmax = std::max(cmax, std::abs(t.coeff));
  std::erase_if(merged,
                [cmax](const PauliTerm& t) { return std::abs(t.coeff) <= 1e-15 * cmax; });
  h.terms = std::move(merged);
}

std::string to_text(const SpinHamiltonian& h) {
  std::ostringstream out;
  out << "# spin-hamiltonian v1\n";
  out << "nspins " << h.n_sites << "\n";
  out << "offset " << format_coeff(h.energy_offset) << "\n";
  for (const auto& [k, v] : h.metadata) out << "meta " << k << " " << v << "\n";
  out << "# alpha " << format_coeff(h.alpha()) << "\n";
  for (const PauliTerm& t : h.terms) {
    out << format_coeff(t.coeff);
    for (const PauliFactor& f : t.factors)
      out << " " << f.site << ":" << axis_char(f.axis);
    out << "\n";
  }
  return out.str();
}

SpinHamiltonian hamiltonian_from_text(std::istream& in) {
  SpinHamiltonian h;
  std::string line;
  int lineno = 0;
  bool have_nspins = false;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    std::istringstream iss(s);
    std::string first;
    iss >> first;
    if (first == "nspins") {
      if (!(iss >> h.n_sites) || h.n_sites < 0)
        throw ParseError("<hamiltonian>", lineno, "malformed nspins line");
      have_nspins = true;
    } else if (first == "offset") {
      if (!(iss >> h.energy_offset))
        throw ParseError("<hamiltonian>", lineno, "malformed offset line");
    } else if (first == "meta") {
      std::string key;
      iss >> key;
      std::string value;
      std::getline(iss, value);
      h.metadata[key] = trim(value);
    } else {
      PauliTerm t;
      try {
        t.coeff = std::stod(first);
      } catch (...) {
        throw ParseError("<hamiltonian>", lineno, "expected coefficient, got \"" + first + "\"");
      }
      std::string fac;
      while (iss >> fac) {
        std::size_t colon = fac.find(':');
        if (colon == std::string::npos || colon + 1 >= fac.size())
          throw ParseError("<hamiltonian>", lineno, "malformed factor \"" + fac + "\"");
        PauliFactor f;
        f.site = std::stoi(fac.substr(0, colon));
        f.axis = axis_from_char(fac[colon + 1]);
        t.factors.push_back(f);
      }
      h.terms.push_back(std::move(t));
    }
  }
  if (!have_nspins) throw ParseError("<hamiltonian>", lineno, "missing nspins header");
  canonicalize(h);
  return h;
}

SpinHamiltonian hamiltonian_from_text(const std::string& text) {
  std::istringstream in(text);
  return hamiltonian_from_text(in);
}

}  // namespace nmrq
