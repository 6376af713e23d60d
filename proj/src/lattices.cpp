#include "nmrq/lattices.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "nmrq/constants.hpp"

namespace nmrq {

namespace {

void require_extents(int lx, int ly) {
  if (lx < 1 || ly < 1)
    throw std::domain_error("lattice extents must be >= 1");
}

void add_edge(std::vector<std::pair<int, int>>& edges, int a, int b) {
  edges.emplace_back(std::min(a, b), std::max(a, b));
}

}  // namespace

EdgeSets triangular_edges(int lx, int ly) {
  require_extents(lx, ly);
  EdgeSets e;
  // Offsets in (i, j) lattice coordinates; the embedding a1 = (1,0),
  // a2 = (1/2, sqrt3/2) makes these the distance-1 and distance-sqrt3 shells.
  static constexpr int nn_off[3][2] = {{1, 0}, {0, 1}, {-1, 1}};
  static constexpr int nnn_off[3][2] = {{1, 1}, {2, -1}, {-1, 2}};
  for (int j = 0; j < ly; ++j) {
    for (int i = 0; i < lx; ++i) {
      const int site = i + j * lx;
      for (const auto& off : nn_off) {
        const int i2 = i + off[0], j2 = j + off[1];
        if (i2 < 0 || i2 >= lx || j2 < 0 || j2 >= ly) continue;
        add_edge(e.nn, site, i2 + j2 * lx);
      }
      for (const auto& off : nnn_off) {
        const int i2 = i + off[0], j2 = j + off[1];
        if (i2 < 0 || i2 >= lx || j2 < 0 || j2 >= ly) continue;
        add_edge(e.nnn, site, i2 + j2 * lx);
      }
    }
  }
  return e;
}

EdgeSets triangular_edges_geometric(int lx, int ly, double tol) {
  require_extents(lx, ly);
  const double sqrt3 = std::sqrt(3.0);
  std::vector<std::pair<double, double>> pos;
  pos.reserve(static_cast<std::size_t>(lx) * static_cast<std::size_t>(ly));
  for (int j = 0; j < ly; ++j)
    for (int i = 0; i < lx; ++i)
      pos.emplace_back(i + 0.5 * j, 0.5 * sqrt3 * j);

  EdgeSets e;
  for (std::size_t a = 0; a < pos.size(); ++a) {
    for (std::size_t b = a + 1; b < pos.size(); ++b) {
      const double dx = pos[b].first - pos[a].first;
      const double dy = pos[b].second - pos[a].second;
      const double d = std::hypot(dx, dy);
      if (std::abs(d - 1.0) <= tol)
        e.nn.emplace_back(static_cast<int>(a), static_cast<int>(b));
      else if (std::abs(d - sqrt3) <= tol)
        e.nnn.emplace_back(static_cast<int>(a), static_cast<int>(b));
    }
  }
  return e;
}

SpinHamiltonian build_heisenberg(const EdgeSets& edges, int n_sites, double j1,
                                 double j2) {
  if (n_sites < 1) throw std::domain_error("build_heisenberg: need >= 1 site");
  SpinHamiltonian h;
  h.n_sites = n_sites;
  auto add_exchange = [&h, n_sites](int a, int b, double j) {
    if (a < 0 || b < 0 || a >= n_sites || b >= n_sites || a == b)
      throw std::invalid_argument("build_heisenberg: edge site out of range");
    if (j == 0.0) return;
    for (Axis ax : {Axis::X, Axis::Y, Axis::Z})
      h.terms.push_back({j, {{a, ax}, {b, ax}}});
  };
  for (const auto& [a, b] : edges.nn) add_exchange(a, b, j1);
  for (const auto& [a, b] : edges.nnn) add_exchange(a, b, j2);
  canonicalize(h);
  return h;
}

SpinHamiltonian build_j1j2(const LatticeSpec& spec) {
  if (spec.kind != LatticeKind::J1J2Triangular)
    throw std::invalid_argument("build_j1j2: wrong lattice kind");
  require_extents(spec.lx, spec.ly);
  const EdgeSets edges = triangular_edges(spec.lx, spec.ly);
  SpinHamiltonian h =
      build_heisenberg(edges, spec.lx * spec.ly, spec.j1, spec.j2);
  h.metadata["model"] = "j1j2-triangular";
  h.metadata["boundary"] = "open";
  h.metadata["lx"] = std::to_string(spec.lx);
  h.metadata["ly"] = std::to_string(spec.ly);
  h.metadata["j1_hz"] = std::to_string(spec.j1);
  h.metadata["j2_hz"] = std::to_string(spec.j2);
  return h;
}

int fermi_hubbard_qubit(int x, int row, int spin, int lx) {
  return 2 * lx * row + 2 * x + spin;
}

SpinHamiltonian build_fermi_hubbard(const LatticeSpec& spec) {
  if (spec.kind != LatticeKind::FermiHubbardSquare)
    throw std::invalid_argument("build_fermi_hubbard: wrong lattice kind");
  require_extents(spec.lx, spec.ly);
  const int lx = spec.lx, ly = spec.ly;
  SpinHamiltonian h;
  h.n_sites = 2 * lx * ly;

  // Jordan-Wigner hopping between qubits p < q: (J_eff/2)(X Z..Z X + Y Z..Z Y)
  // with Z on every qubit strictly between them.
  auto add_hop = [&h](int p, int q, double coeff) {
    if (p > q) std::swap(p, q);
    for (Axis ax : {Axis::X, Axis::Y}) {
      PauliTerm term;
      term.coeff = coeff;
      term.factors.push_back({p, ax});
      for (int z = p + 1; z < q; ++z) term.factors.push_back({z, Axis::Z});
      term.factors.push_back({q, ax});
      h.terms.push_back(std::move(term));
    }
  };

  const double hop = spec.j / 2.0;
  // Crossing a full doubled row flips the string parity convention.
  const double vhop = (lx % 2 == 0 ? 1.0 : -1.0) * spec.j / 2.0;
  for (int row = 0; row < ly; ++row) {
    for (int x = 0; x < lx; ++x) {
      for (int spin = 0; spin < 2; ++spin) {
        const int q0 = fermi_hubbard_qubit(x, row, spin, lx);
        if (x + 1 < lx) add_hop(q0, fermi_hubbard_qubit(x + 1, row, spin, lx), hop);
        if (row + 1 < ly) add_hop(q0, fermi_hubbard_qubit(x, row + 1, spin, lx), vhop);
      }
      // On-site U n_up n_down = U/4 (I+Z_a)(I+Z_b): identity part becomes a
      // tracked offset, the three Pauli parts join the LCU.
      const int qa = fermi_hubbard_qubit(x, row, 0, lx);
      const int qb = fermi_hubbard_qubit(x, row, 1, lx);
      const double u4 = spec.u / 4.0;
      h.terms.push_back({u4, {{qa, Axis::Z}}});
      h.terms.push_back({u4, {{qb, Axis::Z}}});
      h.terms.push_back({u4, {{qa, Axis::Z}, {qb, Axis::Z}}});
      h.energy_offset += u4;
    }
  }

  canonicalize(h);
  h.metadata["model"] = "fermi-hubbard-square";
  h.metadata["boundary"] = "open";
  h.metadata["lx"] = std::to_string(lx);
  h.metadata["ly"] = std::to_string(ly);
  h.metadata["j"] = std::to_string(spec.j);
  h.metadata["u"] = std::to_string(spec.u);
  return h;
}

SimulationBudget j1j2_budget() {
  SimulationBudget b;
  b.t_max = 1.0;
  b.t2 = 1.0;
  b.epsilon_fixed = 1e-3;
  b.coeff_bits = 10;
  return b;
}

SimulationBudget fermi_hubbard_budget() {
  SimulationBudget b;
  b.t_max = 2.0 * constants::pi * 200.0;  // unit-J dimensionless horizon
  b.t2 = b.t_max;
  b.epsilon_fixed = 1e-3;
  b.coeff_bits = 10;
  return b;
}

}  // namespace nmrq
