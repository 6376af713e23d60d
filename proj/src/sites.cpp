#include "nmrq/sites.hpp"

#include <fstream>
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
}  // namespace

GyromagneticTable GyromagneticTable::defaults() {
  GyromagneticTable t;
  t.set("H", 1, constants::gamma_1h);
  t.set("C", 13, constants::gamma_13c);
  t.set("N", 15, constants::gamma_15n);
  return t;
}

GyromagneticTable GyromagneticTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open gyromagnetic table: " + path);
  GyromagneticTable t = defaults();
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    std::istringstream iss(s);
    std::string el;
    int iso;
    double gamma;
    if (!(iss >> el >> iso >> gamma))
      throw ParseError(path, lineno, "expected: Element isotope gamma");
    t.set(el, iso, gamma);
  }
  return t;
}

void GyromagneticTable::set(const std::string& element, int isotope, double gamma) {
  gammas_[{element, isotope}] = gamma;
}

std::optional<double> GyromagneticTable::gamma(const std::string& element,
                                               int isotope) const {
  auto it = gammas_.find({element, isotope});
  if (it == gammas_.end()) return std::nullopt;
  return it->second;
}

double GyromagneticTable::gamma_reference() const {
  auto g = gamma("H", 1);
  return g ? *g : constants::gamma_1h;
}

RegimeConfig RegimeConfig::proton() { return {}; }

RegimeConfig RegimeConfig::heteronuclear() {
  RegimeConfig c;
  c.regime = Regime::Heteronuclear;
  return c;
}

int active_isotope(const std::string& element, Regime regime) {
  if (element == "H") return 1;
  if (regime == Regime::Heteronuclear) {
    if (element == "C") return 13;
    if (element == "N") return 15;
  }
  return 0;
}

bool is_exchangeable_proton(const MolecularGraph& g, int atom) {
  if (g.atoms[static_cast<std::size_t>(atom)].element != "H") return false;
  for (const Bond& b : g.bonds) {
    int other = -1;
    if (b.a == atom)
      other = b.b;
    else if (b.b == atom)
      other = b.a;
    else
      continue;
    const std::string& el = g.atoms[static_cast<std::size_t>(other)].element;
    if (el == "O" || el == "N" || el == "S") return true;
  }
  return false;
}

std::vector<SpinSite> select_spin_sites(const MolecularGraph& g,
                                        const RegimeConfig& config,
                                        const GyromagneticTable& gammas) {
  std::vector<SpinSite> sites;
  for (int i = 0; i < g.atom_count(); ++i) {
    const Atom& a = g.atoms[static_cast<std::size_t>(i)];
    int want = active_isotope(a.element, config.regime);
    if (want == 0) continue;
    // Explicit isotopes must match the active one (e.g. deuterium drops out).
    if (a.isotope != 0 && a.isotope != want) continue;
    if (!config.include_exchangeable && is_exchangeable_proton(g, i)) continue;
    auto gamma = gammas.gamma(a.element, want);
    if (!gamma)
      throw std::runtime_error("no gyromagnetic ratio for " + a.element + "-" +
                               std::to_string(want));
    sites.push_back({i, a.element, want, *gamma});
  }
  return sites;
}

}  // namespace nmrq
