#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <set>
#include <utility>
#include <vector>

#include "nmrq/costs.hpp"
#include "nmrq/dynamics.hpp"
#include "nmrq/hamiltonian.hpp"
#include "nmrq/lattices.hpp"

using namespace nmrq;
using complexd = std::complex<double>;

namespace {

using EdgeSet = std::set<std::pair<int, int>>;

EdgeSet as_set(const std::vector<std::pair<int, int>>& edges) {
  EdgeSet s;
  for (auto [a, b] : edges) s.insert({std::min(a, b), std::max(a, b)});
  return s;
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Jordan-Wigner annihilation operator for mode p among n modes (mode k on
// bit k, Z string over the lower modes) built from explicit tensor products.
// The occupied state is bit 0, matching n = (I+Z)/2 in the lattice builder.
Eigen::MatrixXcd jw_annihilate(int p, int n) {
  Eigen::Matrix2cd z, lower, eye;
  z << 1, 0, 0, -1;
  lower << 0, 0, 1, 0;  // maps the occupied |bit=0> state to |bit=1>
  eye.setIdentity();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
  for (int k = n - 1; k >= 0; --k) {
    if (k == p)
      m = kron(m, lower);
    else if (k < p)
      m = kron(m, z);
    else
      m = kron(m, eye);
  }
  return m;
}

int count_incident(const std::vector<std::pair<int, int>>& edges, int site) {
  int c = 0;
  for (auto [a, b] : edges)
    if (a == site || b == site) ++c;
  return c;
}
}  // namespace

TEST_CASE("single triangle built from explicit edges") {
  EdgeSets tri;
  tri.nn = {{0, 1}, {0, 2}, {1, 2}};
  SpinHamiltonian h = build_heisenberg(tri, 3, 1.0, 0.0);
  CHECK(h.n_sites == 3);
  CHECK(h.term_count() == 9);
  CHECK(h.alpha() == doctest::Approx(9.0));
  for (const PauliTerm& t : h.terms) {
    CHECK(t.coeff == doctest::Approx(1.0));
    CHECK(t.weight() == 2);
    CHECK(t.factors[0].axis == t.factors[1].axis);
  }
}

TEST_CASE("offset edge enumeration matches the geometric oracle") {
  for (auto [lx, ly] : {std::pair{2, 2}, std::pair{3, 3}, std::pair{4, 3},
                        std::pair{5, 5}, std::pair{1, 4}, std::pair{6, 2}}) {
    CAPTURE(lx);
    CAPTURE(ly);
    EdgeSets fast = triangular_edges(lx, ly);
    EdgeSets slow = triangular_edges_geometric(lx, ly);
    CHECK(as_set(fast.nn) == as_set(slow.nn));
    CHECK(as_set(fast.nnn) == as_set(slow.nnn));
    // No duplicates in the offset enumeration.
    CHECK(fast.nn.size() == as_set(fast.nn).size());
    CHECK(fast.nnn.size() == as_set(fast.nnn).size());
  }
}

TEST_CASE("3x3 patch: edge counts, exchange term count, and 1-norm") {
  EdgeSets e = triangular_edges(3, 3);
  CHECK(e.nn.size() == 16);
  CHECK(e.nnn.size() == 8);
  LatticeSpec spec;  // defaults: J1J2Triangular, j1 = 1, j2 = 0.5
  spec.lx = 3;
  spec.ly = 3;
  SpinHamiltonian h = build_j1j2(spec);
  CHECK(h.n_sites == 9);
  CHECK(h.term_count() == 72);  // 3 * (16 + 8)
  CHECK(h.alpha() == doctest::Approx(16.0 * 3.0 + 8.0 * 3.0 * 0.5));  // 60
  CHECK(h.energy_offset == 0.0);
}

TEST_CASE("interior site of a 5x5 patch touches six neighbors in each shell") {
  EdgeSets e = triangular_edges(5, 5);
  const int center = 2 + 2 * 5;
  CHECK(count_incident(e.nn, center) == 6);
  CHECK(count_incident(e.nnn, center) == 6);
}

TEST_CASE("exchange term count is three per edge across patch sizes") {
  for (auto [lx, ly] : {std::pair{2, 2}, std::pair{3, 3}, std::pair{4, 3},
                        std::pair{5, 5}}) {
    CAPTURE(lx);
    CAPTURE(ly);
    EdgeSets e = triangular_edges(lx, ly);
    LatticeSpec spec;
    spec.lx = lx;
    spec.ly = ly;
    CHECK(build_j1j2(spec).term_count() == 3 * (e.nn.size() + e.nnn.size()));
    spec.j2 = 0.0;  // dropping J2 leaves only the nearest-neighbor shell
    CHECK(build_j1j2(spec).term_count() == 3 * e.nn.size());
  }
}

TEST_CASE("edge validation") {
  EdgeSets bad;
  bad.nn = {{0, 5}};
  CHECK_THROWS_AS(build_heisenberg(bad, 3, 1.0, 0.0), std::invalid_argument);
  bad.nn = {{1, 1}};
  CHECK_THROWS_AS(build_heisenberg(bad, 3, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(build_heisenberg(EdgeSets{}, 0, 1.0, 0.0), std::domain_error);
  LatticeSpec wrong;
  wrong.kind = LatticeKind::FermiHubbardSquare;
  CHECK_THROWS_AS(build_j1j2(wrong), std::invalid_argument);
  wrong.kind = LatticeKind::J1J2Triangular;
  CHECK_THROWS_AS(build_fermi_hubbard(wrong), std::invalid_argument);
}

TEST_CASE("qubit indexing is row-major with doubled rows") {
  CHECK(fermi_hubbard_qubit(0, 0, 0, 5) == 0);
  CHECK(fermi_hubbard_qubit(0, 0, 1, 5) == 1);
  CHECK(fermi_hubbard_qubit(1, 1, 1, 2) == 7);
  CHECK(fermi_hubbard_qubit(3, 2, 1, 5) == 27);
}

TEST_CASE("2x2 Fermi-Hubbard: term census") {
  LatticeSpec spec;
  spec.kind = LatticeKind::FermiHubbardSquare;
  SpinHamiltonian h = build_fermi_hubbard(spec);  // lx = ly = 2, J = 1, U = -4
  CHECK(h.n_sites == 8);
  CHECK(h.term_count() == 28);  // 16 hopping + 12 on-site
  CHECK(h.energy_offset == doctest::Approx(-4.0));  // U * lx * ly / 4
  CHECK(h.alpha() == doctest::Approx(20.0));

  int hops = 0, onsite = 0;
  for (const PauliTerm& t : h.terms) {
    const bool all_z = std::all_of(t.factors.begin(), t.factors.end(),
                                   [](const PauliFactor& f) { return f.axis == Axis::Z; });
    if (all_z) {
      ++onsite;
      CHECK(t.coeff == doctest::Approx(-1.0));  // U/4
      CHECK((t.weight() == 1 || t.weight() == 2));
    } else {
      ++hops;
      CHECK(std::abs(t.coeff) == doctest::Approx(0.5));  // J/2
      CHECK(t.coeff > 0.0);  // lx even: vertical strings keep the plus sign
      // X or Y on both ends, Z's in the interior only.
      CHECK(t.factors.front().axis != Axis::Z);
      CHECK(t.factors.back().axis != Axis::Z);
      CHECK(t.factors.front().axis == t.factors.back().axis);
      for (std::size_t i = 1; i + 1 < t.factors.size(); ++i)
        CHECK(t.factors[i].axis == Axis::Z);
    }
  }
  CHECK(hops == 16);
  CHECK(onsite == 12);
}

TEST_CASE("odd-width vertical strings carry the parity sign and full Z bridge") {
  LatticeSpec spec;
  spec.kind = LatticeKind::FermiHubbardSquare;
  spec.lx = 3;
  spec.ly = 2;
  SpinHamiltonian h = build_fermi_hubbard(spec);
  // Vertical hop from qubit 0 (x=0,row=0,up) to qubit 6: 5 interior Z's.
  bool found = false;
  for (const PauliTerm& t : h.terms) {
    if (t.weight() != 7) continue;
    if (t.factors.front().site != 0 || t.factors.back().site != 6) continue;
    found = true;
    CHECK(t.coeff == doctest::Approx(-0.5));  // (-1)^lx * J/2 with lx = 3
    for (std::size_t i = 1; i + 1 < t.factors.size(); ++i) {
      CHECK(t.factors[i].axis == Axis::Z);
      CHECK(t.factors[i].site == static_cast<int>(i));
    }
  }
  CHECK(found);
}

TEST_CASE("2x2 Fermi-Hubbard equals an independent fermionic construction") {
  LatticeSpec spec;
  spec.kind = LatticeKind::FermiHubbardSquare;
  spec.j = 1.0;
  spec.u = -4.0;
  SpinHamiltonian h = build_fermi_hubbard(spec);
  const Eigen::MatrixXcd got = dense_matrix(h);

  const int n = 8;
  std::vector<Eigen::MatrixXcd> a(n);
  for (int p = 0; p < n; ++p) a[p] = jw_annihilate(p, n);
  const Eigen::Index dim = 256;
  Eigen::MatrixXcd want = Eigen::MatrixXcd::Zero(dim, dim);
  // Standard tight-binding sign: H = -J sum (a^dag a + h.c.) + U sum n n.
  auto hop = [&](int p, int q) {
    want -= spec.j * (a[p].adjoint() * a[q] + a[q].adjoint() * a[p]);
  };
  for (int row = 0; row < 2; ++row)
    for (int x = 0; x < 2; ++x)
      for (int s = 0; s < 2; ++s) {
        const int q0 = fermi_hubbard_qubit(x, row, s, 2);
        if (x + 1 < 2) hop(q0, fermi_hubbard_qubit(x + 1, row, s, 2));
        if (row + 1 < 2) hop(q0, fermi_hubbard_qubit(x, row + 1, s, 2));
      }
  for (int row = 0; row < 2; ++row)
    for (int x = 0; x < 2; ++x) {
      const int up = fermi_hubbard_qubit(x, row, 0, 2);
      const int dn = fermi_hubbard_qubit(x, row, 1, 2);
      want += spec.u * (a[up].adjoint() * a[up]) * (a[dn].adjoint() * a[dn]);
    }
  CHECK((got - want).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("2x2 Fermi-Hubbard conserves total particle number") {
  LatticeSpec spec;
  spec.kind = LatticeKind::FermiHubbardSquare;
  SpinHamiltonian h = build_fermi_hubbard(spec);
  const Eigen::MatrixXcd hm = dense_matrix(h);
  const Eigen::MatrixXcd num = dense_z_observable(8, uniform_weights(8));
  CHECK((hm * num - num * hm).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("preset budgets") {
  SimulationBudget j = j1j2_budget();
  CHECK(j.t_max == 1.0);
  CHECK(j.t2 == 1.0);
  CHECK(j.epsilon_fixed == 1e-3);
  CHECK(j.coeff_bits == 10);
  CHECK(j.epsilon_at(0.5) == 1e-3);  // fixed target overrides the decay curve
  SimulationBudget f = fermi_hubbard_budget();
  CHECK(f.t_max == doctest::Approx(2.0 * std::numbers::pi * 200.0));
  CHECK(f.epsilon_fixed == 1e-3);
}

TEST_CASE("reference-model costs: pinned totals and relative ordering") {
  LatticeSpec j33;
  j33.lx = 3;
  j33.ly = 3;
  SpinHamiltonian hj = build_j1j2(j33);
  SimulationBudget bj = j1j2_budget();
  LogicalEstimate ej = single_shot_cost(hj, bj.t_max, bj);
  CHECK(ej.n_t == 1224566);
  CHECK(ej.n_logical_total == 50);

  LatticeSpec fh;
  fh.kind = LatticeKind::FermiHubbardSquare;
  SpinHamiltonian hf = build_fermi_hubbard(fh);
  SimulationBudget bf = fermi_hubbard_budget();
  LogicalEstimate ef = single_shot_cost(hf, bf.t_max, bf);
  CHECK(ef.n_t == 286316891);
  CHECK(ef.n_logical_total == 44);

  // The doubled-register Fermi-Hubbard patch needs more logical qubits than
  // the spin patch on the same 2x2 footprint.
  LatticeSpec j22;
  SpinHamiltonian hj22 = build_j1j2(j22);
  LogicalEstimate ej22 = single_shot_cost(hj22, bj.t_max, bj);
  CHECK(ef.n_logical_total > ej22.n_logical_total);
}
