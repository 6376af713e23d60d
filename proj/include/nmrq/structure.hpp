#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace nmrq {

// One atom of a molecular structure. Coordinates are in Angstrom. isotope = 0
// means "unspecified / most abundant"; an explicit mass number (e.g. 13 for
// carbon-13, 2 for deuterium) overrides the regime's default assignment.
struct Atom {
  std::string element;
  double x = 0.0, y = 0.0, z = 0.0;
  int isotope = 0;
};

struct Bond {
  int a = 0;  // atom indices, 0-based
  int b = 0;
  int order = 1;
};

struct MolecularGraph {
  std::string name;    // title line / comment line
  std::string source;  // originating file path, "<memory>" for in-memory parses
  std::vector<Atom> atoms;
  std::vector<Bond> bonds;

  int atom_count() const { return static_cast<int>(atoms.size()); }
  Eigen::Vector3d position(int i) const;
  double distance(int i, int j) const;  // Angstrom
};

// Parse failure with file/line context, so batch runs can report precisely
// which input line was malformed.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string file, int line, const std::string& message);
  const std::string& file() const { return file_; }
  int line() const { return line_; }

 private:
  std::string file_;
  int line_;
};

// Covalent single-bond radii (Angstrom) used for XYZ bond perception.
class RadiiTable {
 public:
  static RadiiTable defaults();
  // File format: one "Element radius" pair per line; '#' comments allowed.
  static RadiiTable load(const std::string& path);
  double radius(const std::string& element) const;  // throws for unknown elements
  bool has(const std::string& element) const;
  void set(const std::string& element, double r);

 private:
  std::map<std::string, double> radii_;
};

enum class StructureFormat { Auto, Mol, Xyz };

// Parse a structure file. Auto sniffs the extension (.mol/.sdf vs .xyz);
// passing an explicit format overrides sniffing.
MolecularGraph parse_structure(const std::string& path,
                               StructureFormat format = StructureFormat::Auto,
                               const RadiiTable& radii = RadiiTable::defaults());

// Stream-level parsers. display_name is used in error messages and as the
// fallback molecule name.
MolecularGraph parse_mol_text(std::istream& in, const std::string& display_name);
MolecularGraph parse_xyz_text(std::istream& in, const std::string& display_name,
                              const RadiiTable& radii = RadiiTable::defaults());

std::string to_mol_text(const MolecularGraph& g);
std::string to_xyz_text(const MolecularGraph& g);

// Distance-based bond perception: a-b bonded iff d(a,b) <= slack*(r_a + r_b).
// Replaces any existing bond list.
void infer_bonds(MolecularGraph& g, const RadiiTable& radii = RadiiTable::defaults(),
                 double slack = 1.15);

// All-pairs graph distance in bond steps (BFS). Unreachable pairs are -1;
// diagonal is 0.
Eigen::MatrixXi bond_distance_matrix(const MolecularGraph& g);

}  // namespace nmrq
