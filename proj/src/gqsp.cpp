#include "nmrq/gqsp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "nmrq/constants.hpp"
#include "nmrq/fft.hpp"

namespace nmrq {

namespace {

using cd = std::complex<double>;

// Headroom below 1 for 1 - |sP|^2 > 0. It also floors F and thereby sets the
// cepstrum decay rate (~sqrt(margin) analyticity width), so it trades FFT
// size against an O(margin) bias that is negligible next to every epsilon
// target in play.
constexpr double kPrescaleMargin = 1e-8;
// Grid-doubling convergence target for the mid-band cepstrum. The true
// cepstrum decays exponentially, but the computed one bottoms out at a
// cancellation-noise floor: samples where F = 1 - |sP|^2 dips toward
// 2*margin are computed as 1 - (almost 1), so log F carries ~eps_mach/F_min
// pointwise noise at those samples. That floor is benign - exponentiation
// reproduces the sampled F values exactly, so the factorization defect stays
// near roundoff - but no amount of grid doubling pushes the tail below it.
// Convergence therefore means "below the absolute target, or stalled at a
// floor that is still small enough to be noise rather than structure".
constexpr double kCepstrumTail = 1e-10;
constexpr double kCepstrumNoiseCap = 1e-6;

// i^n without trig: cycle length 4.
cd i_power(int n) {
  switch (((n % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

// Evaluate an ordinary polynomial on the L-point unit-circle grid
// w_j = exp(2*pi*i*j/L) via zero-padded FFT (sign +1 matches the
// convention p(w_j) = sum_k a_k w_j^k).
std::vector<cd> grid_values(const std::vector<cd>& coeffs, std::size_t L) {
  std::vector<cd> v(L, cd(0.0, 0.0));
  std::copy(coeffs.begin(), coeffs.end(), v.begin());
  fft_radix2(v, +1);
  return v;
}

double wrap_angle(double a) {
  while (a > constants::pi) a -= 2.0 * constants::pi;
  while (a <= -constants::pi) a += 2.0 * constants::pi;
  return a;
}

// One layer of the stripping recursion: consume R_k, producing the
// degree-(k-1) pair from the degree-k pair.
void strip_layer(std::vector<cd>& p, std::vector<cd>& q, double& phi_out,
                 double& theta_out) {
  const std::size_t k = p.size() - 1;
  const cd top_p = p[k], top_q = q[k];
  const cd bot_p = p[0], bot_q = q[0];
  double phi, theta;
  // Both coefficient pairs determine (phi, theta); use the better-conditioned
  // (larger-magnitude) one.
  if (std::norm(top_p) + std::norm(top_q) >= std::norm(bot_p) + std::norm(bot_q)) {
    theta = std::atan2(std::abs(top_q), std::abs(top_p));
    phi = std::arg(top_p) - std::arg(top_q);
  } else {
    theta = std::atan2(std::abs(bot_p), std::abs(bot_q));
    phi = std::arg(bot_p) - std::arg(bot_q) - constants::pi;
  }
  const double c = std::cos(theta), s = std::sin(theta);
  const cd em(std::cos(phi), -std::sin(phi));  // e^{-i phi}
  // Inverse rotation: (w*P_{k-1})[j] = e^{-i phi} c p[j] + s q[j],
  //                    Q_{k-1}[j]    = e^{-i phi} s p[j] - c q[j].
  std::vector<cd> wp(k + 1), qn(k + 1);
  for (std::size_t j = 0; j <= k; ++j) {
    wp[j] = em * c * p[j] + s * q[j];
    qn[j] = em * s * p[j] - c * q[j];
  }
  // w*P_{k-1} has no constant term and Q_{k-1} has degree k-1; the dropped
  // entries are numerically ~0 by construction.
  p.assign(wp.begin() + 1, wp.end());
  qn.pop_back();
  q = std::move(qn);
  phi_out = wrap_angle(phi);
  theta_out = theta;
}

}  // namespace

int plan_degree(double tau, double eps) {
  if (eps <= 0.0 || eps >= 1.0)
    throw std::domain_error("plan_degree: eps must lie in (0,1)");
  double x = std::exp(1.0) * std::abs(tau) / 2.0 + std::log10(1.0 / eps);
  long long d = static_cast<long long>(std::ceil(x - 1e-9));
  return static_cast<int>(std::max<long long>(d, 0));
}

std::vector<double> bessel_j_sequence(double tau, int n_max) {
  if (tau < 0.0) throw std::domain_error("bessel_j_sequence: tau must be >= 0");
  if (n_max < 0) throw std::domain_error("bessel_j_sequence: n_max must be >= 0");
  std::vector<double> j(static_cast<std::size_t>(n_max) + 1, 0.0);
  if (tau == 0.0) {
    j[0] = 1.0;
    return j;
  }
  // Miller's downward recurrence J_{n-1} = (2n/tau) J_n - J_{n+1}, started
  // far above both n_max and the turning point n ~ tau, normalized with
  // J_0 + 2 sum_k J_{2k} = 1.
  int start = std::max(n_max, static_cast<int>(std::ceil(tau))) + 32 +
              static_cast<int>(2.0 * std::sqrt(std::max(n_max, static_cast<int>(tau)) + 1.0));
  std::vector<double> work(static_cast<std::size_t>(start) + 2, 0.0);
  work[static_cast<std::size_t>(start) + 1] = 0.0;
  work[static_cast<std::size_t>(start)] = 1e-30;
  for (int n = start; n >= 1; --n) {
    double next = (2.0 * n / tau) * work[static_cast<std::size_t>(n)] -
                  work[static_cast<std::size_t>(n) + 1];
    work[static_cast<std::size_t>(n) - 1] = next;
    if (std::abs(next) > 1e250) {  // rescale to avoid overflow
      for (std::size_t i = static_cast<std::size_t>(n) - 1; i < work.size(); ++i)
        work[i] *= 1e-250;
    }
  }
  double norm = work[0];
  for (int n = 2; n <= start; n += 2) norm += 2.0 * work[static_cast<std::size_t>(n)];
  for (int n = 0; n <= n_max; ++n)
    j[static_cast<std::size_t>(n)] = work[static_cast<std::size_t>(n)] / norm;
  return j;
}

std::vector<cd> jacobi_anger_coefficients(double tau, int degree) {
  std::vector<double> j = bessel_j_sequence(std::abs(tau), degree);
  std::vector<cd> c(static_cast<std::size_t>(degree) + 1);
  for (int n = 0; n <= degree; ++n) {
    cd cn = i_power(n) * j[static_cast<std::size_t>(n)];
    // J_n(-tau) = (-1)^n J_n(tau) flips odd orders; with the i^n factor this
    // is exactly complex conjugation of the coefficient.
    c[static_cast<std::size_t>(n)] = tau >= 0.0 ? cn : std::conj(cn);
  }
  return c;
}

double truncation_error(double tau, int degree, int grid_points) {
  std::vector<cd> c = jacobi_anger_coefficients(tau, degree);
  double worst = 0.0;
  for (int g = 0; g < grid_points; ++g) {
    double theta = 2.0 * constants::pi * g / grid_points;
    cd p = c[0];
    for (int n = 1; n <= degree; ++n)
      p += 2.0 * c[static_cast<std::size_t>(n)] * std::cos(n * theta);
    cd target = std::exp(cd(0.0, tau * std::cos(theta)));
    worst = std::max(worst, std::abs(p - target));
  }
  return worst;
}

namespace {

// Shared cepstral spectral factorization. With calibrate set, the prescale
// is re-derived on every grid so F = 1 - s^2|p|^2 is positive at the
// calibration points by construction (doubling a radix-2 grid keeps all old
// points, so the grid max only grows and s only shrinks). Without it, s
// stays 1 and an F <= 0 sample is the caller's contract violation.
std::vector<cd> min_phase_complement(const std::vector<cd>& p, bool calibrate,
                                     double& scale_out) {
  if (p.empty()) throw std::invalid_argument("complementary_polynomial: empty input");
  const std::size_t n_coeff = p.size();
  std::size_t L = next_pow2(8 * n_coeff);
  double best_tail = std::numeric_limits<double>::infinity();
  for (;; L *= 2) {
    if (L > (std::size_t{1} << 22))
      throw std::runtime_error("complementary_polynomial: cepstrum failed to converge");
    std::vector<cd> vals = grid_values(p, L);
    double s = 1.0;
    if (calibrate) {
      double maxp = 0.0;
      for (const cd& v : vals) maxp = std::max(maxp, std::abs(v));
      s = (1.0 - kPrescaleMargin) / std::max(1.0, maxp);
    }
    // F = 1 - |s p|^2 must stay positive on the grid.
    std::vector<cd> logf(L);
    bool ok = true;
    for (std::size_t i = 0; i < L; ++i) {
      const double f = 1.0 - s * s * std::norm(vals[i]);
      if (f <= 0.0) {
        ok = false;
        break;
      }
      logf[i] = cd(std::log(f), 0.0);
    }
    if (!ok)
      throw std::runtime_error(
          "complementary_polynomial: |p| reaches 1 on the unit circle (prescale "
          "the polynomial)");
    // Cepstrum c_n (convention log F_j = sum_n c_n w_j^n).
    std::vector<cd> cep = logf;
    fft_radix2(cep, -1);
    for (cd& x : cep) x /= static_cast<double>(L);
    // Grid is adequate once the mid-band cepstrum has decayed to roundoff or
    // stalled at its noise floor (a doubling no longer halves it).
    double tail = 0.0;
    for (std::size_t i = L / 2 - L / 8; i <= L / 2; ++i)
      tail = std::max(tail, std::abs(cep[i]));
    const bool at_noise_floor =
        tail > 0.5 * best_tail && tail <= kCepstrumNoiseCap;
    if (tail > kCepstrumTail && !at_noise_floor) {
      best_tail = std::min(best_tail, tail);
      continue;
    }
    // Fold onto non-negative orders: the analytic (min-phase) half.
    std::vector<cd> h(L, cd(0.0, 0.0));
    h[0] = cep[0] / 2.0;
    for (std::size_t i = 1; i < L / 2; ++i) h[i] = cep[i];
    h[L / 2] = cep[L / 2] / 2.0;
    fft_radix2(h, +1);
    for (cd& x : h) x = std::exp(x);  // Q on the grid
    fft_radix2(h, -1);
    for (cd& x : h) x /= static_cast<double>(L);
    scale_out = s;
    return {h.begin(), h.begin() + static_cast<std::ptrdiff_t>(n_coeff)};
  }
}

}  // namespace

std::vector<cd> complementary_polynomial(const std::vector<cd>& p) {
  double unused = 1.0;
  return min_phase_complement(p, false, unused);
}

GqspPlan generate_phases(double tau, double eps) {
  GqspPlan plan;
  plan.tau = tau;
  plan.epsilon = eps;
  plan.degree = plan_degree(tau, eps);
  const int d = plan.degree;

  std::vector<cd> c = jacobi_anger_coefficients(tau, d);

  // Ordinary-polynomial view p(w) = w^d P(w) of the symmetric Laurent series.
  std::vector<cd> laurent(2 * static_cast<std::size_t>(d) + 1);
  for (int k = -d; k <= d; ++k)
    laurent[static_cast<std::size_t>(k + d)] = c[static_cast<std::size_t>(std::abs(k))];

  // The truncated series overshoots |P| = 1 by ~trunc_error, which would
  // break the factorization of 1 - |P|^2; the factorizer calibrates the
  // prescale on its own (final) grid so positivity holds by construction.
  double s = 1.0;
  std::vector<cd> q = min_phase_complement(laurent, true, s);
  plan.prescale = s;
  plan.coefficients.resize(static_cast<std::size_t>(d) + 1);
  for (int n = 0; n <= d; ++n)
    plan.coefficients[static_cast<std::size_t>(n)] = s * c[static_cast<std::size_t>(n)];
  std::vector<cd> p(laurent);
  for (cd& x : p) x *= s;

  // Peel rotation layers from degree 2d down to 1, then read off layer 0.
  plan.phi.assign(2 * static_cast<std::size_t>(d) + 1, 0.0);
  plan.theta.assign(2 * static_cast<std::size_t>(d) + 1, 0.0);
  for (int k = 2 * d; k >= 1; --k)
    strip_layer(p, q, plan.phi[static_cast<std::size_t>(k)],
                plan.theta[static_cast<std::size_t>(k)]);
  const cd p0 = p[0], q0 = q[0];
  plan.theta[0] = std::atan2(std::abs(q0), std::abs(p0));
  plan.lambda = std::abs(q0) > 1e-300 ? wrap_angle(std::arg(q0)) : 0.0;
  plan.phi[0] = wrap_angle(std::arg(p0) - plan.lambda);
  return plan;
}

std::complex<double> evaluate_plan_polynomial(const GqspPlan& plan, double theta) {
  cd p = plan.coefficients.empty() ? cd(0.0, 0.0) : plan.coefficients[0];
  for (int n = 1; n <= plan.degree; ++n)
    p += 2.0 * plan.coefficients[static_cast<std::size_t>(n)] * std::cos(n * theta);
  return p;
}

namespace {
struct Mat2 {
  cd a, b, c, d;  // [[a, b], [c, d]]
};
Mat2 signal_rotation(double lambda, double phi, double th) {
  const double co = std::cos(th), si = std::sin(th);
  const cd el = std::exp(cd(0.0, lambda));
  const cd ep = std::exp(cd(0.0, phi));
  return {el * ep * co, ep * si, el * si, cd(-co, 0.0)};
}
}  // namespace

std::complex<double> reconstruct_from_phases(const GqspPlan& plan, double theta) {
  const cd w = std::exp(cd(0.0, theta));
  // M = R_0, then M <- R_k diag(w,1) M for k = 1..2d.
  Mat2 m = signal_rotation(plan.lambda, plan.phi[0], plan.theta[0]);
  for (int k = 1; k <= 2 * plan.degree; ++k) {
    // A = diag(w, 1) scales M's top row.
    const cd a = m.a * w, b = m.b * w;
    const Mat2 r = signal_rotation(0.0, plan.phi[static_cast<std::size_t>(k)],
                                   plan.theta[static_cast<std::size_t>(k)]);
    m = {r.a * a + r.b * m.c, r.a * b + r.b * m.d,
         r.c * a + r.d * m.c, r.c * b + r.d * m.d};
  }
  return m.a * std::pow(std::conj(w), plan.degree);
}

double reconstruction_error(const GqspPlan& plan, int grid_points) {
  double worst = 0.0;
  for (int g = 0; g < grid_points; ++g) {
    double theta = 2.0 * constants::pi * g / grid_points;
    worst = std::max(worst, std::abs(reconstruct_from_phases(plan, theta) -
                                     evaluate_plan_polynomial(plan, theta)));
  }
  return worst;
}

std::string phases_to_csv(const GqspPlan& plan) {
  std::string out = "index,lambda,phi,theta\n";
  char buf[128];
  for (int k = 0; k < plan.n_phases(); ++k) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g\n", k,
                  k == 0 ? plan.lambda : 0.0, plan.phi[static_cast<std::size_t>(k)],
                  plan.theta[static_cast<std::size_t>(k)]);
    out += buf;
  }
  return out;
}

}  // namespace nmrq
