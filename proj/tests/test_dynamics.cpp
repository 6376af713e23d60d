#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "nmrq/constants.hpp"
#include "nmrq/dynamics.hpp"
#include "nmrq/gqsp.hpp"
#include "nmrq/hamiltonian.hpp"
#include "nmrq/sites.hpp"
#include "nmrq/structure.hpp"

using namespace nmrq;
using complexd = std::complex<double>;

namespace {
const std::string kFixtures = NMRQ_FIXTURE_DIR;

Eigen::Matrix2cd pauli(Axis a) {
  Eigen::Matrix2cd m;
  switch (a) {
    case Axis::X: m << 0, 1, 1, 0; break;
    case Axis::Y: m << complexd(0, 0), complexd(0, -1), complexd(0, 1), complexd(0, 0); break;
    case Axis::Z: m << 1, 0, 0, -1; break;
  }
  return m;
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Dense matrix for one Pauli term built by explicit tensor products,
// independent of the library's bitmask representation. Site k maps to
// bit k, so the site with the highest index is the leftmost kron factor.
Eigen::MatrixXcd term_dense(const PauliTerm& term, int n_sites) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
  for (int site = n_sites - 1; site >= 0; --site) {
    Eigen::Matrix2cd factor = Eigen::Matrix2cd::Identity();
    for (const PauliFactor& f : term.factors)
      if (f.site == site) factor = pauli(f.axis);
    m = kron(m, factor);
  }
  return term.coeff * m;
}

PauliTerm term(double coeff, std::vector<PauliFactor> factors) {
  PauliTerm t;
  t.coeff = coeff;
  t.factors = std::move(factors);
  return t;
}

// Isotropic J-coupled pair: (J/4)(XX + YY + ZZ).
SpinHamiltonian coupled_pair(double j_hz) {
  SpinHamiltonian h;
  h.n_sites = 2;
  for (Axis a : {Axis::X, Axis::Y, Axis::Z})
    h.terms.push_back(term(j_hz / 4.0, {{0, a}, {1, a}}));
  return h;
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k)
    v[static_cast<std::size_t>(k)] = lo + (hi - lo) * k / (n - 1);
  return v;
}

// gamma-weighted z observable for a proton-carbon pair.
Eigen::MatrixXcd hetero_observable() {
  GyromagneticTable gt = GyromagneticTable::defaults();
  std::vector<SpinSite> sites = {{0, "H", 1, gt.gamma("H", 1).value()},
                                 {1, "C", 13, gt.gamma("C", 13).value()}};
  return dense_z_observable(2, gamma_weights(sites));
}

// Half-width at half-maximum of the line nearest f0, measured on a dense
// monotone-cubic resampling of the sampled spectrum.
double measure_hwhm(const Spectrum& spec, double f0, double window) {
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < spec.frequencies.size(); ++i) {
    if (std::abs(spec.frequencies[i] - f0) <= window) {
      xs.push_back(spec.frequencies[i]);
      ys.push_back(spec.intensity[i]);
    }
  }
  REQUIRE(xs.size() >= 8);
  std::vector<double> fine_x = linspace(xs.front(), xs.back(), 4001);
  std::vector<double> fine_y = pchip_resample(xs, ys, fine_x);
  std::size_t imax = 0;
  for (std::size_t i = 0; i < fine_y.size(); ++i)
    if (fine_y[i] > fine_y[imax]) imax = i;
  const double half = fine_y[imax] / 2.0;
  std::size_t lo = imax, hi = imax;
  while (lo > 0 && fine_y[lo] > half) --lo;
  while (hi + 1 < fine_y.size() && fine_y[hi] > half) ++hi;
  return (fine_x[hi] - fine_x[lo]) / 2.0;
}
}  // namespace

TEST_CASE("pauli string operators match explicit tensor products") {
  const int n = 3;
  std::vector<PauliTerm> cases = {
      term(35.0, {{0, Axis::X}, {1, Axis::Y}, {2, Axis::Z}}),
      term(-2.5, {{0, Axis::Y}, {2, Axis::Y}}),
      term(1.0, {{1, Axis::Z}}),
      term(0.75, {{0, Axis::X}, {1, Axis::X}}),
      term(4.0, {}),  // identity
  };
  for (const PauliTerm& t : cases) {
    CAPTURE(t.coeff);
    SpinHamiltonian h;
    h.n_sites = n;
    h.terms = {t};
    const Eigen::MatrixXcd want = term_dense(t, n);
    CHECK((dense_matrix(h) - want).cwiseAbs().maxCoeff() < 1e-14);

    // The permutation form agrees column by column.
    const PauliStringOp op = make_string_op(t);
    Eigen::VectorXcd in = Eigen::VectorXcd::Zero(8), out;
    for (int b = 0; b < 8; ++b) {
      in.setZero();
      in[b] = complexd(0.6, -0.8);
      apply_string_op(op, in, out);
      CHECK((out - want * in).cwiseAbs().maxCoeff() < 1e-14);
    }
  }
}

TEST_CASE("dense oracle refuses systems beyond its spin cap") {
  SpinHamiltonian h;
  h.n_sites = kDenseSpinCap + 1;
  h.terms.push_back(term(1.0, {{0, Axis::Z}}));
  try {
    dense_matrix(h);
    FAIL("expected a domain error");
  } catch (const std::domain_error& e) {
    CHECK(std::string(e.what()).find("14") != std::string::npos);
  }
  SpinHamiltonian none;
  none.n_sites = 0;
  CHECK_THROWS_AS(dense_matrix(none), std::domain_error);
}

TEST_CASE("coupled pair eigenvalues: triplet at J/4, singlet at -3J/4") {
  SpinHamiltonian h = coupled_pair(140.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense_matrix(h));
  REQUIRE(es.info() == Eigen::Success);
  Eigen::VectorXd ev = es.eigenvalues();
  CHECK(ev[0] == doctest::Approx(-105.0));
  CHECK(ev[1] == doctest::Approx(35.0));
  CHECK(ev[2] == doctest::Approx(35.0));
  CHECK(ev[3] == doctest::Approx(35.0));
}

TEST_CASE("evolution operator is unitary and composes") {
  SpinHamiltonian h = coupled_pair(140.0);
  h.energy_offset = 3.0;
  const Eigen::MatrixXcd u1 = evolution_operator(h, 0.013);
  const Eigen::MatrixXcd u2 = evolution_operator(h, 0.029);
  const Eigen::MatrixXcd u12 = evolution_operator(h, 0.042);
  const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(4, 4);
  CHECK((u1 * u1.adjoint() - eye).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((u1 * u2 - u12).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((evolution_operator(h, 0.0) - eye).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("total z magnetization is conserved for a homonuclear pair") {
  SpinHamiltonian h = coupled_pair(280.0);
  const Eigen::MatrixXcd obs = dense_z_observable(2, uniform_weights(2));
  InitialState thermal;
  thermal.kind = InitialStateKind::ThermalZ;
  thermal.polarization = 0.2;
  CorrelationTrace trace = correlator(h, obs, thermal, linspace(0.0, 1.0, 64));
  double cmin = 1e300, cmax = -1e300;
  for (const complexd& v : trace.values) {
    cmin = std::min(cmin, v.real());
    cmax = std::max(cmax, v.real());
    CHECK(std::abs(v.imag()) < 1e-12);
  }
  CHECK(cmax - cmin < 1e-10 * std::max(1.0, std::abs(cmax)));
}

TEST_CASE("heteronuclear pair shows the J line at 140 Hz") {
  SpinHamiltonian h = coupled_pair(140.0);
  CorrelationTrace trace =
      correlator(h, hetero_observable(), InitialState{}, linspace(0.0, 2.0, 1600));
  Spectrum spec = spectrum(trace, 1.0);
  REQUIRE(!spec.peaks.empty());
  // Dominant nonzero-frequency peak.
  Peak best{0.0, -1.0};
  for (const Peak& p : spec.peaks)
    if (p.frequency > 1.0 && p.intensity > best.intensity) best = p;
  const double bin = 1.0 / trace.times.back();
  CHECK(std::abs(best.frequency - 140.0) <= bin);
}

TEST_CASE("halving T2 doubles the Lorentzian linewidth") {
  SpinHamiltonian h = coupled_pair(140.0);
  const Eigen::MatrixXcd obs = hetero_observable();
  auto hwhm_for = [&](double t2) {
    const double t_max = 10.0 * t2;
    const int nt = static_cast<int>(t_max / 0.625e-3) + 1;
    CorrelationTrace trace =
        correlator(h, obs, InitialState{}, linspace(0.0, t_max, nt));
    Spectrum spec = spectrum(trace, t2, 1801, 180.0);
    return measure_hwhm(spec, 140.0, 20.0);
  };
  const double w_slow = hwhm_for(0.25);
  const double w_fast = hwhm_for(0.125);
  CHECK(w_slow == doctest::Approx(1.0 / (2.0 * std::numbers::pi * 0.25)).epsilon(0.05));
  CHECK(w_fast == doctest::Approx(1.0 / (2.0 * std::numbers::pi * 0.125)).epsilon(0.05));
  CHECK(w_fast / w_slow == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("initial state construction") {
  SUBCASE("maximally mixed and zero-polarization thermal coincide") {
    InitialState thermal;
    thermal.kind = InitialStateKind::ThermalZ;
    thermal.polarization = 0.0;
    const Eigen::MatrixXcd a = density_matrix(InitialState{}, 3);
    const Eigen::MatrixXcd b = density_matrix(thermal, 3);
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(std::abs(a.trace().real() - 1.0) < 1e-14);
  }
  SUBCASE("thermal state has unit trace and product weights") {
    InitialState thermal;
    thermal.kind = InitialStateKind::ThermalZ;
    thermal.polarization = 0.3;
    const Eigen::MatrixXcd rho = density_matrix(thermal, 3);
    CHECK(std::abs(rho.trace().real() - 1.0) < 1e-14);
    // |000> weight: ((1 + p)/2)^3.
    CHECK(rho(0, 0).real() == doctest::Approx(std::pow(0.65, 3)));
    thermal.polarization = 1.0;
    CHECK_THROWS_AS(density_matrix(thermal, 3), std::domain_error);
  }
  SUBCASE("basis-state mixtures validate their indices") {
    InitialState mix;
    mix.kind = InitialStateKind::BasisStates;
    mix.basis_states = {0, 3};
    const Eigen::MatrixXcd rho = density_matrix(mix, 2);
    CHECK(rho(0, 0).real() == doctest::Approx(0.5));
    CHECK(rho(3, 3).real() == doctest::Approx(0.5));
    CHECK(std::abs(rho(1, 1)) == 0.0);
    mix.basis_states = {4};
    CHECK_THROWS_AS(density_matrix(mix, 2), std::domain_error);
    mix.basis_states = {};
    CHECK_THROWS_AS(density_matrix(mix, 2), std::domain_error);
  }
}

TEST_CASE("spectrum grid parameter semantics") {
  CorrelationTrace trace;
  trace.times = linspace(0.0, 1.0, 5);
  trace.values.assign(5, complexd(1.0, 0.0));
  SUBCASE("defaults: Nyquist band, one point per natural bin") {
    Spectrum s = spectrum(trace, 1.0);
    // f_max = (5-1)/(2*1) = 2 Hz -> floor(2*1)+1 = 3 points at 0, 1, 2 Hz.
    REQUIRE(s.frequencies.size() == 3);
    CHECK(s.frequencies[0] == 0.0);
    CHECK(s.frequencies[1] == doctest::Approx(1.0));
    CHECK(s.frequencies[2] == doctest::Approx(2.0));
    CHECK(s.gamma2 == doctest::Approx(1.0));
  }
  SUBCASE("explicit grid is inclusive of both ends") {
    Spectrum s = spectrum(trace, 1.0, 4, 3.0);
    REQUIRE(s.frequencies.size() == 4);
    CHECK(s.frequencies.front() == 0.0);
    CHECK(s.frequencies.back() == doctest::Approx(3.0));
  }
  SUBCASE("degenerate single-point grid sits at zero") {
    Spectrum s = spectrum(trace, 1.0, 1, 50.0);
    REQUIRE(s.frequencies.size() == 1);
    CHECK(s.frequencies[0] == 0.0);
  }
  SUBCASE("too few samples or a bad T2 are domain errors") {
    CorrelationTrace three;
    three.times = {0.0, 0.1, 0.2};
    three.values.assign(3, complexd(1.0, 0.0));
    CHECK_THROWS_AS(spectrum(three, 1.0), std::domain_error);
    CHECK_THROWS_AS(spectrum(trace, 0.0), std::domain_error);
  }
}

TEST_CASE("peak finding") {
  std::vector<double> f = {0, 1, 2, 3, 4, 5, 6};
  SUBCASE("single interior maximum") {
    std::vector<double> y = {0, 1, 5, 2, 1, 0.5, 0};
    std::vector<Peak> p = find_peaks(f, y);
    REQUIRE(p.size() == 1);
    CHECK(p[0].frequency == 2.0);
    CHECK(p[0].intensity == 5.0);
  }
  SUBCASE("leading edge counts when it dominates its neighbor") {
    std::vector<double> y = {5, 4, 3, 2, 1, 0.5, 0};
    std::vector<Peak> p = find_peaks(f, y);
    REQUIRE(p.size() == 1);
    CHECK(p[0].frequency == 0.0);
  }
  SUBCASE("relative threshold prunes small bumps") {
    std::vector<double> y = {0, 100, 0, 1, 0, 0.5, 0};
    std::vector<Peak> p = find_peaks(f, y, 0.02);
    REQUIRE(p.size() == 1);  // 1 and 0.5 sit below 2% of 100
    CHECK(p[0].frequency == 1.0);
    p = find_peaks(f, y, 0.005);
    CHECK(p.size() == 3);
  }
  SUBCASE("all-zero or negative signals yield nothing") {
    CHECK(find_peaks(f, std::vector<double>(7, 0.0)).empty());
    CHECK(find_peaks(f, std::vector<double>(7, -1.0)).empty());
    CHECK(find_peaks({}, {}).empty());
  }
}

TEST_CASE("monotone cubic resampling") {
  SUBCASE("exact at nodes") {
    std::vector<double> x = {0, 1, 2.5, 3, 4.5};
    std::vector<double> y = {1, -2, 0.5, 0.25, 3};
    std::vector<double> got = pchip_resample(x, y, x);
    for (std::size_t i = 0; i < x.size(); ++i)
      CHECK(got[i] == doctest::Approx(y[i]).epsilon(1e-14));
  }
  SUBCASE("monotone data stays monotone, no overshoot") {
    std::vector<double> x = {0, 1, 2, 3, 4};
    std::vector<double> y = {0, 0.1, 0.2, 5.0, 5.1};
    std::vector<double> q = linspace(0.0, 4.0, 401);
    std::vector<double> v = pchip_resample(x, y, q);
    for (std::size_t i = 1; i < v.size(); ++i) CHECK(v[i] >= v[i - 1] - 1e-12);
    for (double val : v) {
      CHECK(val >= -1e-12);
      CHECK(val <= 5.1 + 1e-12);
    }
  }
  SUBCASE("single node extends as a constant") {
    std::vector<double> v = pchip_resample({1.0}, {7.0}, {-5.0, 0.0, 42.0});
    for (double val : v) CHECK(val == 7.0);
  }
  SUBCASE("two nodes interpolate and extrapolate linearly") {
    std::vector<double> v = pchip_resample({0.0, 2.0}, {1.0, 5.0}, {1.0, 3.0, -1.0});
    CHECK(v[0] == doctest::Approx(3.0));
    CHECK(v[1] == doctest::Approx(7.0));
    CHECK(v[2] == doctest::Approx(-1.0));
  }
  SUBCASE("invalid nodes are rejected") {
    CHECK_THROWS_AS(pchip_resample({}, {}, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(pchip_resample({0, 0}, {1, 2}, {0.5}), std::invalid_argument);
    CHECK_THROWS_AS(pchip_resample({0, 1}, {1}, {0.5}), std::invalid_argument);
  }
}

TEST_CASE("plan polynomial tracks exact evolution phases on the spectrum") {
  MolecularGraph g = parse_structure(kFixtures + "/h2.xyz");
  RegimeConfig rc = RegimeConfig::proton();
  SpinHamiltonian h = build_hamiltonian(g, select_spin_sites(g, rc), rc);
  for (double t : {0.001, 0.01}) {
    CAPTURE(t);
    const double tau = 2.0 * std::numbers::pi * h.alpha() * t;
    GqspPlan plan = generate_phases(tau, 1e-3);
    CHECK(gqsp_eigenvalue_crosscheck(h, plan) <= 1e-3);
  }
  SpinHamiltonian empty;
  empty.n_sites = 2;
  GqspPlan plan = generate_phases(1.0, 1e-3);
  CHECK_THROWS_AS(gqsp_eigenvalue_crosscheck(empty, plan), std::domain_error);
}

TEST_CASE("spectra ignore the identity offset") {
  SpinHamiltonian h = coupled_pair(140.0);
  const Eigen::MatrixXcd obs = hetero_observable();
  std::vector<double> times = linspace(0.0, 2.0, 400);
  Spectrum base = spectrum(correlator(h, obs, InitialState{}, times), 1.0);
  h.energy_offset += 5.0;
  Spectrum shifted = spectrum(correlator(h, obs, InitialState{}, times), 1.0);
  REQUIRE(base.intensity.size() == shifted.intensity.size());
  for (std::size_t i = 0; i < base.intensity.size(); ++i)
    CHECK(std::abs(base.intensity[i] - shifted.intensity[i]) < 1e-10);
}

TEST_CASE("csv serializations") {
  CorrelationTrace trace;
  trace.times = {0.0, 0.5};
  trace.values = {complexd(1.0, 0.0), complexd(0.25, -0.125)};
  std::string tcsv = trace_to_csv(trace);
  CHECK(tcsv.rfind("t_seconds,re,im\n", 0) == 0);
  CHECK(std::count(tcsv.begin(), tcsv.end(), '\n') == 3);
  CHECK(tcsv.find("0.25,-0.125") != std::string::npos);

  Spectrum spec;
  spec.frequencies = {0.0, 1.0};
  spec.intensity = {0.5, 0.75};
  std::string scsv = spectrum_to_csv(spec);
  CHECK(scsv.rfind("frequency_hz,intensity\n", 0) == 0);
  CHECK(std::count(scsv.begin(), scsv.end(), '\n') == 3);
}
