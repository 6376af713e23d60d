#include "nmrq/structure.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <deque>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace nmrq {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string field(const std::string& line, std::size_t pos, std::size_t len) {
  if (pos >= line.size()) return "";
  return trim(line.substr(pos, std::min(len, line.size() - pos)));
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  std::size_t idx = 0;
  try {
    out = std::stod(s, &idx);
  } catch (...) {
    return false;
  }
  return idx == s.size();
}

bool parse_int(const std::string& s, int& out) {
  if (s.empty()) return false;
  std::size_t idx = 0;
  try {
    out = std::stoi(s, &idx);
  } catch (...) {
    return false;
  }
  return idx == s.size();
}

// Split an XYZ element token like "13C" into (isotope, element).
void split_isotope_prefix(const std::string& token, int& isotope, std::string& element) {
  std::size_t i = 0;
  while (i < token.size() && std::isdigit(static_cast<unsigned char>(token[i]))) ++i;
  if (i > 0 && i < token.size()) {
    isotope = std::stoi(token.substr(0, i));
    element = token.substr(i);
  } else {
    isotope = 0;
    element = token;
  }
}

std::string normalize_element(const std::string& el) {
  std::string out = el;
  if (!out.empty()) {
    out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
    for (std::size_t i = 1; i < out.size(); ++i)
      out[i] = static_cast<char>(std::tolower(static_cast<unsigned char>(out[i])));
  }
  return out;
}

}  // namespace

Eigen::Vector3d MolecularGraph::position(int i) const {
  const Atom& a = atoms.at(static_cast<std::size_t>(i));
  return {a.x, a.y, a.z};
}

double MolecularGraph::distance(int i, int j) const {
  return (position(i) - position(j)).norm();
}

ParseError::ParseError(std::string file, int line, const std::string& message)
    : std::runtime_error(file + ":" + std::to_string(line) + ": " + message),
      file_(std::move(file)),
      line_(line) {}

RadiiTable RadiiTable::defaults() {
  RadiiTable t;
  // Single-bond covalent radii, Angstrom. Hydrogen is 0.37 (not the 0.31
  // sometimes quoted) so that H2 at 0.74 A is perceived as bonded under the
  // 1.15x slack rule while water's H..H at 1.51 A is not.
  t.radii_ = {{"H", 0.37}, {"C", 0.76},  {"N", 0.71}, {"O", 0.66},
              {"S", 1.05}, {"P", 1.07},  {"F", 0.57}, {"Cl", 1.02},
              {"Br", 1.20}, {"I", 1.39}, {"B", 0.84}, {"Si", 1.11}};
  return t;
}

RadiiTable RadiiTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open radii table: " + path);
  RadiiTable t = defaults();
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    std::istringstream iss(s);
    std::string el;
    double r;
    if (!(iss >> el >> r)) throw ParseError(path, lineno, "expected: Element radius");
    t.set(normalize_element(el), r);
  }
  return t;
}

double RadiiTable::radius(const std::string& element) const {
  auto it = radii_.find(element);
  if (it == radii_.end())
    throw std::runtime_error("no covalent radius for element \"" + element + "\"");
  return it->second;
}

bool RadiiTable::has(const std::string& element) const {
  return radii_.count(element) > 0;
}

void RadiiTable::set(const std::string& element, double r) { radii_[element] = r; }

MolecularGraph parse_mol_text(std::istream& in, const std::string& display_name) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  if (lines.size() < 4) throw ParseError(display_name, 1, "truncated MOL file");

  MolecularGraph g;
  g.source = display_name;
  g.name = trim(lines[0]);
  if (g.name.empty()) g.name = std::filesystem::path(display_name).stem().string();

  // Counts line: atoms in columns 0-2, bonds in 3-5 (whitespace fallback).
  const std::string& counts = lines[3];
  int n_atoms = 0, n_bonds = 0;
  if (!parse_int(field(counts, 0, 3), n_atoms) || !parse_int(field(counts, 3, 3), n_bonds)) {
    std::istringstream iss(counts);
    if (!(iss >> n_atoms >> n_bonds))
      throw ParseError(display_name, 4, "malformed counts line: \"" + counts + "\"");
  }
  if (n_atoms <= 0) throw ParseError(display_name, 4, "no atoms declared");
  if (lines.size() < 4 + static_cast<std::size_t>(n_atoms) + static_cast<std::size_t>(n_bonds))
    throw ParseError(display_name, static_cast<int>(lines.size()),
                     "file shorter than declared atom/bond blocks");

  for (int i = 0; i < n_atoms; ++i) {
    const std::string& al = lines[4 + static_cast<std::size_t>(i)];
    int lineno = 5 + i;
    Atom atom;
    // Fixed V2000 columns: x 0-9, y 10-19, z 20-29, element 31-33.
    bool ok = parse_double(field(al, 0, 10), atom.x) &&
              parse_double(field(al, 10, 10), atom.y) &&
              parse_double(field(al, 20, 10), atom.z);
    std::string el = field(al, 31, 3);
    if (!ok || el.empty()) {
      std::istringstream iss(al);
      if (!(iss >> atom.x >> atom.y >> atom.z >> el))
        throw ParseError(display_name, lineno, "malformed atom line: \"" + al + "\"");
    }
    atom.element = normalize_element(el);
    g.atoms.push_back(atom);
  }

  for (int i = 0; i < n_bonds; ++i) {
    const std::string& bl = lines[4 + static_cast<std::size_t>(n_atoms + i)];
    int lineno = 5 + n_atoms + i;
    Bond b;
    int a1 = 0, a2 = 0, order = 1;
    if (!(parse_int(field(bl, 0, 3), a1) && parse_int(field(bl, 3, 3), a2))) {
      std::istringstream iss(bl);
      if (!(iss >> a1 >> a2))
        throw ParseError(display_name, lineno, "malformed bond line: \"" + bl + "\"");
      iss >> order;
    } else {
      if (!parse_int(field(bl, 6, 3), order)) order = 1;
    }
    if (a1 < 1 || a1 > n_atoms || a2 < 1 || a2 > n_atoms || a1 == a2)
      throw ParseError(display_name, lineno, "bond references invalid atom index");
    b.a = a1 - 1;
    b.b = a2 - 1;
    b.order = order;
    g.bonds.push_back(b);
  }

  // Properties block: isotopes via "M  ISO", terminated by "M  END".
  for (std::size_t li = 4 + static_cast<std::size_t>(n_atoms + n_bonds); li < lines.size(); ++li) {
    std::string s = trim(lines[li]);
    if (s.rfind("M", 0) != 0) continue;
    std::istringstream iss(s);
    std::string m, tag;
    iss >> m >> tag;
    if (tag == "END") break;
    if (tag == "ISO") {
      int count = 0;
      if (!(iss >> count))
        throw ParseError(display_name, static_cast<int>(li + 1), "malformed M ISO line");
      for (int k = 0; k < count; ++k) {
        int idx = 0, mass = 0;
        if (!(iss >> idx >> mass))
          throw ParseError(display_name, static_cast<int>(li + 1), "malformed M ISO pair");
        if (idx < 1 || idx > n_atoms)
          throw ParseError(display_name, static_cast<int>(li + 1),
                           "M ISO references invalid atom index");
        g.atoms[static_cast<std::size_t>(idx - 1)].isotope = mass;
      }
    }
  }
  return g;
}

MolecularGraph parse_xyz_text(std::istream& in, const std::string& display_name,
                              const RadiiTable& radii) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(display_name, 1, "empty XYZ file");
  int n_atoms = 0;
  if (!parse_int(trim(line), n_atoms) || n_atoms <= 0)
    throw ParseError(display_name, 1, "expected atom count, got \"" + trim(line) + "\"");

  MolecularGraph g;
  g.source = display_name;
  if (!std::getline(in, line)) throw ParseError(display_name, 2, "missing comment line");
  g.name = trim(line);
  if (g.name.empty()) g.name = std::filesystem::path(display_name).stem().string();

  for (int i = 0; i < n_atoms; ++i) {
    int lineno = 3 + i;
    if (!std::getline(in, line))
      throw ParseError(display_name, lineno, "fewer atom lines than declared");
    std::istringstream iss(line);
    std::string token;
    Atom atom;
    if (!(iss >> token >> atom.x >> atom.y >> atom.z))
      throw ParseError(display_name, lineno, "malformed atom line: \"" + trim(line) + "\"");
    split_isotope_prefix(token, atom.isotope, atom.element);
    atom.element = normalize_element(atom.element);
    g.atoms.push_back(atom);
  }
  infer_bonds(g, radii);
  return g;
}

MolecularGraph parse_structure(const std::string& path, StructureFormat format,
                               const RadiiTable& radii) {
  StructureFormat fmt = format;
  if (fmt == StructureFormat::Auto) {
    std::string ext = std::filesystem::path(path).extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (ext == ".mol" || ext == ".sdf" || ext == ".mdl")
      fmt = StructureFormat::Mol;
    else if (ext == ".xyz")
      fmt = StructureFormat::Xyz;
    else
      throw std::runtime_error("cannot infer structure format from \"" + path +
                               "\"; pass an explicit format");
  }
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open structure file: " + path);
  return fmt == StructureFormat::Mol ? parse_mol_text(in, path)
                                     : parse_xyz_text(in, path, radii);
}

std::string to_mol_text(const MolecularGraph& g) {
  std::ostringstream out;
  out << g.name << "\n  nmrq\n\n";
  char buf[128];
  std::snprintf(buf, sizeof buf, "%3d%3d  0  0  0  0  0  0  0  0999 V2000\n",
                g.atom_count(), static_cast<int>(g.bonds.size()));
  out << buf;
  for (const Atom& a : g.atoms) {
    std::snprintf(buf, sizeof buf,
                  "%10.4f%10.4f%10.4f %-3s 0  0  0  0  0  0  0  0  0  0  0  0\n",
                  a.x, a.y, a.z, a.element.c_str());
    out << buf;
  }
  for (const Bond& b : g.bonds) {
    std::snprintf(buf, sizeof buf, "%3d%3d%3d  0\n", b.a + 1, b.b + 1, b.order);
    out << buf;
  }
  std::vector<std::pair<int, int>> iso;
  for (int i = 0; i < g.atom_count(); ++i)
    if (g.atoms[static_cast<std::size_t>(i)].isotope != 0)
      iso.emplace_back(i + 1, g.atoms[static_cast<std::size_t>(i)].isotope);
  for (std::size_t k = 0; k < iso.size(); k += 8) {
    std::size_t run = std::min<std::size_t>(8, iso.size() - k);
    std::snprintf(buf, sizeof buf, "M  ISO%3d", static_cast<int>(run));
    out << buf;
    for (std::size_t j = k; j < k + run; ++j) {
      std::snprintf(buf, sizeof buf, " %3d %3d", iso[j].first, iso[j].second);
      out << buf;
    }
    out << "\n";
  }
  out << "M  END\n";
  return out.str();
}

std::string to_xyz_text(const MolecularGraph& g) {
  std::ostringstream out;
  out << g.atom_count() << "\n" << g.name << "\n";
  char buf[160];
  for (const Atom& a : g.atoms) {
    std::string el = a.element;
    if (a.isotope != 0) el = std::to_string(a.isotope) + el;
    std::snprintf(buf, sizeof buf, "%-4s %14.8f %14.8f %14.8f\n", el.c_str(), a.x,
                  a.y, a.z);
    out << buf;
  }
  return out.str();
}

void infer_bonds(MolecularGraph& g, const RadiiTable& radii, double slack) {
  g.bonds.clear();
  int n = g.atom_count();
  for (int i = 0; i < n; ++i) {
    double ri = radii.radius(g.atoms[static_cast<std::size_t>(i)].element);
    for (int j = i + 1; j < n; ++j) {
      double rj = radii.radius(g.atoms[static_cast<std::size_t>(j)].element);
      if (g.distance(i, j) <= slack * (ri + rj)) g.bonds.push_back({i, j, 1});
    }
  }
}

Eigen::MatrixXi bond_distance_matrix(const MolecularGraph& g) {
  int n = g.atom_count();
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  for (const Bond& b : g.bonds) {
    adj[static_cast<std::size_t>(b.a)].push_back(b.b);
    adj[static_cast<std::size_t>(b.b)].push_back(b.a);
  }
  Eigen::MatrixXi dist = Eigen::MatrixXi::Constant(n, n, -1);
  for (int s = 0; s < n; ++s) {
    dist(s, s) = 0;
    std::deque<int> queue{s};
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      for (int v : adj[static_cast<std::size_t>(u)]) {
        if (dist(s, v) == -1) {
          dist(s, v) = dist(s, u) + 1;
          queue.push_back(v);
        }
      }
    }
  }
  return dist;
}

}  // namespace nmrq
