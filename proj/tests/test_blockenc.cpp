#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <string>
#include <vector>

#include "nmrq/blockenc.hpp"
#include "nmrq/dynamics.hpp"
#include "nmrq/hamiltonian.hpp"
#include "nmrq/sites.hpp"
#include "nmrq/structure.hpp"

using namespace nmrq;
using complexd = std::complex<double>;

namespace {
const std::string kFixtures = NMRQ_FIXTURE_DIR;

SpinHamiltonian fixture_hamiltonian(const std::string& name, const RegimeConfig& rc) {
  MolecularGraph g = parse_structure(kFixtures + "/" + name);
  return build_hamiltonian(g, select_spin_sites(g, rc), rc);
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Random Hermitian Pauli-sum Hamiltonians for property sweeps.
SpinHamiltonian random_hamiltonian(std::mt19937_64& rng, int n_sites, int m_terms) {
  std::uniform_real_distribution<double> coeff(-2.0, 2.0);
  std::uniform_int_distribution<int> site(0, n_sites - 1);
  std::uniform_int_distribution<int> axis(0, 2);
  std::uniform_int_distribution<int> weight(1, n_sites);
  SpinHamiltonian h;
  h.n_sites = n_sites;
  for (int i = 0; i < m_terms; ++i) {
    PauliTerm t;
    double c = coeff(rng);
    if (std::abs(c) < 1e-3) c = 1e-3;  // keep every slot populated
    t.coeff = c;
    const int w = weight(rng);
    std::vector<int> used;
    while (static_cast<int>(used.size()) < w) {
      const int s = site(rng);
      if (std::find(used.begin(), used.end(), s) == used.end()) used.push_back(s);
    }
    std::sort(used.begin(), used.end());
    for (int s : used)
      t.factors.push_back({s, static_cast<Axis>(axis(rng))});
    h.terms.push_back(std::move(t));
  }
  return h;
}
}  // namespace

TEST_CASE("encoding layout for the hydrogen-pair Hamiltonian") {
  SpinHamiltonian h = fixture_hamiltonian("h2.xyz", RegimeConfig::proton());
  REQUIRE(h.term_count() == 3);
  BlockEncoding enc = make_block_encoding(h);
  CHECK(enc.n == 2);
  CHECK(enc.m == 2);  // 3 terms -> 2 selection bits
  CHECK(enc.alpha == doctest::Approx(210.0));
  REQUIRE(enc.amplitudes.size() == 4);
  for (int i = 0; i < 3; ++i)
    CHECK(enc.amplitudes[i] == doctest::Approx(std::sqrt(70.0 / 210.0)));
  CHECK(enc.amplitudes[3] == 0.0);  // zero-padded
  // Identity padding in the selected-unitary list.
  CHECK(enc.selected[3].xmask == 0);
  CHECK(enc.selected[3].zmask == 0);
  CHECK(enc.selected[3].phase == complexd(1.0, 0.0));
  // Prepare is unitary with the amplitude vector in column 0.
  const Eigen::MatrixXcd p = enc.prepare_dense();
  CHECK((p * p.adjoint() - Eigen::MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff() <
        1e-12);
  for (int i = 0; i < 4; ++i)
    CHECK(std::abs(p(i, 0) - complexd(enc.amplitudes[i], 0.0)) < 1e-12);
}

TEST_CASE("dense factor product agrees with the streaming application") {
  SpinHamiltonian h = fixture_hamiltonian("h2.xyz", RegimeConfig::proton());
  BlockEncoding enc = make_block_encoding(h);
  const Eigen::Index dim_s = 4, dim_a = 4, dim = 16;
  const Eigen::MatrixXcd prep_full =
      kron(enc.prepare_dense(), Eigen::MatrixXcd::Identity(dim_s, dim_s));
  const Eigen::MatrixXcd u_dense = prep_full * enc.select_dense() * prep_full;
  Eigen::VectorXcd basis = Eigen::VectorXcd::Zero(dim);
  for (Eigen::Index c = 0; c < dim; ++c) {
    basis.setZero();
    basis[c] = 1.0;
    const Eigen::VectorXcd via_apply = enc.apply_uh(basis);
    CHECK((via_apply - u_dense.col(c)).cwiseAbs().maxCoeff() < 1e-12);
  }
  (void)dim_a;
}

TEST_CASE("encoded block reproduces H/alpha for molecular Hamiltonians") {
  for (const char* name : {"h2.xyz", "water.xyz", "methane.xyz"}) {
    CAPTURE(name);
    SpinHamiltonian h = fixture_hamiltonian(name, RegimeConfig::proton());
    BlockEncoding enc = make_block_encoding(h);
    CHECK(block_residual(enc, h) < 1e-10);
  }
  // Heteronuclear couplings exercise mixed signs and gamma scales.
  SpinHamiltonian het = fixture_hamiltonian("chpair.xyz", RegimeConfig::heteronuclear());
  CHECK(block_residual(make_block_encoding(het), het) < 1e-10);
}

TEST_CASE("random Hamiltonians: block and walk residuals stay at numerical noise") {
  std::mt19937_64 rng(20260816ULL);
  for (int trial = 0; trial < 12; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 3);       // 2..4 sites
    const int m = 1 + static_cast<int>(rng() % 10);      // 1..10 terms
    CAPTURE(trial);
    CAPTURE(n);
    CAPTURE(m);
    SpinHamiltonian h = random_hamiltonian(rng, n, m);
    BlockEncoding enc = make_block_encoding(h);
    CHECK(block_residual(enc, h) < 1e-10);
    CHECK(walk_phase_residual(enc, h) < 1e-8);
  }
}

TEST_CASE("negative coefficients are absorbed into the selected strings") {
  SpinHamiltonian h;
  h.n_sites = 2;
  PauliTerm t1;
  t1.coeff = -3.0;
  t1.factors = {{0, Axis::X}, {1, Axis::X}};
  PauliTerm t2;
  t2.coeff = 1.5;
  t2.factors = {{0, Axis::Y}, {1, Axis::Y}};
  h.terms = {t1, t2};
  BlockEncoding enc = make_block_encoding(h);
  // Amplitudes are real square roots of |c|/alpha regardless of sign.
  CHECK(enc.amplitudes[0] == doctest::Approx(std::sqrt(3.0 / 4.5)));
  CHECK(enc.amplitudes[1] == doctest::Approx(std::sqrt(1.5 / 4.5)));
  CHECK(block_residual(enc, h) < 1e-12);
}

TEST_CASE("full verification bundle") {
  SpinHamiltonian h = fixture_hamiltonian("water.xyz", RegimeConfig::proton());
  BlockEncodingCheck check = verify_block_encoding(h);
  CHECK(check.block_residual < 1e-10);
  CHECK(check.walk_residual < 1e-8);
  CHECK(check.unitarity_residual < 1e-10);
}

TEST_CASE("degenerate and invalid inputs") {
  SUBCASE("no terms") {
    SpinHamiltonian empty;
    empty.n_sites = 2;
    CHECK_THROWS_AS(make_block_encoding(empty), std::invalid_argument);
  }
  SUBCASE("single term needs no selection register") {
    SpinHamiltonian h;
    h.n_sites = 1;
    PauliTerm t;
    t.coeff = 2.0;
    t.factors = {{0, Axis::Z}};
    h.terms = {t};
    BlockEncoding enc = make_block_encoding(h);
    CHECK(enc.m == 0);
    CHECK(block_residual(enc, h) < 1e-14);
  }
  SUBCASE("verification refuses state spaces too large to materialize") {
    SpinHamiltonian big;
    big.n_sites = 25;
    for (int i = 0; i < 4; ++i) {
      PauliTerm t;
      t.coeff = 1.0;
      t.factors = {{i, Axis::Z}};
      big.terms.push_back(t);
    }
    CHECK_THROWS_AS(make_block_encoding(big), std::domain_error);
  }
}

TEST_CASE("walk reflection negates only the nonzero-ancilla blocks") {
  SpinHamiltonian h = fixture_hamiltonian("h2.xyz", RegimeConfig::proton());
  BlockEncoding enc = make_block_encoding(h);
  const Eigen::Index dim_s = 4, dim = 16;
  std::mt19937_64 rng(7ULL);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXcd psi(dim);
  for (Eigen::Index i = 0; i < dim; ++i) psi[i] = complexd(gauss(rng), gauss(rng));
  psi /= psi.norm();
  const Eigen::VectorXcd u = enc.apply_uh(psi);
  const Eigen::VectorXcd w = enc.apply_walk(psi);
  CHECK((w.head(dim_s) - u.head(dim_s)).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((w.tail(dim - dim_s) + u.tail(dim - dim_s)).cwiseAbs().maxCoeff() < 1e-14);
}
