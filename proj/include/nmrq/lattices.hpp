#pragma once

#include <utility>
#include <vector>

#include "nmrq/costs.hpp"
#include "nmrq/hamiltonian.hpp"

namespace nmrq {

enum class LatticeKind { J1J2Triangular, FermiHubbardSquare };

struct LatticeSpec {
  LatticeKind kind = LatticeKind::J1J2Triangular;
  int lx = 2, ly = 2;  // site extents (>= 1); Fermi-Hubbard uses 2*lx*ly qubits
  double j1 = 1.0;     // Hz (value elided upstream; 1.0 keeps J2/J1 = 0.5)
  double j2 = 0.5;     // Hz
  double j = 1.0;      // hopping, treated as unit frequency
  double u = -4.0;     // on-site interaction (U/J = -4 default)
};

struct EdgeSets {
  std::vector<std::pair<int, int>> nn;   // nearest neighbors (distance 1)
  std::vector<std::pair<int, int>> nnn;  // next-nearest (distance sqrt 3)
};

// Open-parallelogram triangular lattice, site (i,j) -> i + j*lx, embedded
// with a1 = (1,0), a2 = (1/2, sqrt3/2). Offset-based enumeration.
EdgeSets triangular_edges(int lx, int ly);
// Brute-force pair enumeration from the geometric embedding (test oracle).
EdgeSets triangular_edges_geometric(int lx, int ly, double tol = 1e-9);

// Heisenberg on explicit edge sets: per NN edge J1*(XX+YY+ZZ), per NNN
// edge J2*(...). Covers irregular patches (e.g. a single triangle) that a
// parallelogram cannot express.
SpinHamiltonian build_heisenberg(const EdgeSets& edges, int n_sites, double j1,
                                 double j2);

// Heisenberg J1-J2 on the open parallelogram; wraps build_heisenberg.
SpinHamiltonian build_j1j2(const LatticeSpec& spec);

// Jordan-Wigner square-lattice Fermi-Hubbard, rows doubled for spin,
// qubit(x, row, spin) = 2*lx*row + 2*x + spin (plain row-major order):
// horizontal hops X-Z-X/Y-Z-Y with coeff J/2; vertical hops with
// 2*lx - 1 interior Z's and coeff J*(-1)^lx/2; on-site U/4 (I+Z)(I+Z)
// expanded, identity part tracked as energy offset U*lx*ly/4.
SpinHamiltonian build_fermi_hubbard(const LatticeSpec& spec);

int fermi_hubbard_qubit(int x, int row, int spin, int lx);

// Budget presets: J1-J2 (t_max = 1 s, fixed eps = 1e-3, mu = 10) and
// Fermi-Hubbard (t_max = 2*pi*200 s of unit-J time, fixed eps = 1e-3).
SimulationBudget j1j2_budget();
SimulationBudget fermi_hubbard_budget();

}  // namespace nmrq
