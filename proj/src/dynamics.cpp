#include "nmrq/dynamics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "nmrq/constants.hpp"
#include "nmrq/sites.hpp"

namespace nmrq {

namespace {

using complexd = std::complex<double>;

std::size_t dense_dim(const SpinHamiltonian& h) {
  if (h.n_sites > kDenseSpinCap)
    throw std::domain_error(
        "dense dynamics oracle supports at most " + std::to_string(kDenseSpinCap) +
        " spins; got " + std::to_string(h.n_sites));
  if (h.n_sites < 1)
    throw std::domain_error("dense dynamics oracle needs at least one spin");
  return std::size_t{1} << h.n_sites;
}

struct EigenSystem {
  Eigen::VectorXd energies;   // Hz
  Eigen::MatrixXcd vectors;   // columns
};

EigenSystem eigensystem(const SpinHamiltonian& h) {
  const Eigen::MatrixXcd hm = dense_matrix(h);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hm);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigendecomposition failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

}  // namespace

PauliStringOp make_string_op(const PauliTerm& term) {
  PauliStringOp op;
  op.phase = complexd(term.coeff, 0.0);
  for (const PauliFactor& f : term.factors) {
    const std::uint64_t bit = std::uint64_t{1} << f.site;
    switch (f.axis) {
      case Axis::X:
        op.xmask |= bit;
        break;
      case Axis::Y:
        // Y = i X Z, so track both masks and fold in one factor of i.
        op.xmask |= bit;
        op.zmask |= bit;
        op.phase *= complexd(0.0, 1.0);
        break;
      case Axis::Z:
        op.zmask |= bit;
        break;
    }
  }
  return op;
}

void apply_string_op(const PauliStringOp& op, const Eigen::VectorXcd& in,
                     Eigen::VectorXcd& out) {
  const auto dim = static_cast<std::uint64_t>(in.size());
  out.resize(in.size());
  for (std::uint64_t b = 0; b < dim; ++b) {
    const double sign = (std::popcount(b & op.zmask) & 1) ? -1.0 : 1.0;
    out[static_cast<Eigen::Index>(b ^ op.xmask)] =
        op.phase * sign * in[static_cast<Eigen::Index>(b)];
  }
}

Eigen::MatrixXcd dense_matrix(const SpinHamiltonian& h) {
  const std::size_t dim = dense_dim(h);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                              static_cast<Eigen::Index>(dim));
  if (h.energy_offset != 0.0)
    m.diagonal().setConstant(complexd(h.energy_offset, 0.0));
  for (const PauliTerm& term : h.terms) {
    const PauliStringOp op = make_string_op(term);
    for (std::uint64_t b = 0; b < dim; ++b) {
      const double sign = (std::popcount(b & op.zmask) & 1) ? -1.0 : 1.0;
      m(static_cast<Eigen::Index>(b ^ op.xmask), static_cast<Eigen::Index>(b)) +=
          op.phase * sign;
    }
  }
  return m;
}

Eigen::MatrixXcd dense_z_observable(int n_sites, const std::vector<double>& weights) {
  if (n_sites < 1 || n_sites > kDenseSpinCap)
    throw std::domain_error("dense_z_observable: spin count out of range");
  if (weights.size() != static_cast<std::size_t>(n_sites))
    throw std::invalid_argument("dense_z_observable: one weight per site required");
  const std::uint64_t dim = std::uint64_t{1} << n_sites;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                              static_cast<Eigen::Index>(dim));
  for (std::uint64_t b = 0; b < dim; ++b) {
    double v = 0.0;
    for (int k = 0; k < n_sites; ++k) {
      const double z = (b >> k) & 1 ? -1.0 : 1.0;
      v += 0.5 * weights[static_cast<std::size_t>(k)] * z;
    }
    m(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(b)) = v;
  }
  return m;
}

std::vector<double> uniform_weights(int n_sites) {
  return std::vector<double>(static_cast<std::size_t>(n_sites), 1.0);
}

std::vector<double> gamma_weights(const std::vector<SpinSite>& sites) {
  std::vector<double> w;
  w.reserve(sites.size());
  for (const SpinSite& s : sites) w.push_back(s.gamma / constants::gamma_1h);
  return w;
}

Eigen::MatrixXcd density_matrix(const InitialState& state, int n_sites) {
  if (n_sites < 1 || n_sites > kDenseSpinCap)
    throw std::domain_error("density_matrix: spin count out of range");
  const std::uint64_t dim = std::uint64_t{1} << n_sites;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                                static_cast<Eigen::Index>(dim));
  switch (state.kind) {
    case InitialStateKind::MaximallyMixed:
      rho.diagonal().setConstant(complexd(1.0 / static_cast<double>(dim), 0.0));
      break;
    case InitialStateKind::ThermalZ: {
      const double p = state.polarization;
      if (!(p > -1.0) || !(p < 1.0))
        throw std::domain_error("density_matrix: polarization must lie in (-1, 1)");
      for (std::uint64_t b = 0; b < dim; ++b) {
        double w = 1.0;
        for (int k = 0; k < n_sites; ++k) {
          const double z = (b >> k) & 1 ? -1.0 : 1.0;
          w *= 0.5 * (1.0 + p * z);
        }
        rho(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(b)) = w;
      }
      break;
    }
    case InitialStateKind::BasisStates: {
      if (state.basis_states.empty())
        throw std::domain_error("density_matrix: basis-state mixture needs states");
      for (std::uint64_t b : state.basis_states) {
        if (b >= dim)
          throw std::domain_error("density_matrix: basis state index out of range");
        rho(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(b)) +=
            complexd(1.0 / static_cast<double>(state.basis_states.size()), 0.0);
      }
      break;
    }
  }
  return rho;
}

Eigen::MatrixXcd evolution_operator(const SpinHamiltonian& h, double t) {
  const EigenSystem es = eigensystem(h);
  const Eigen::Index dim = es.vectors.rows();
  Eigen::VectorXcd phases(dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    const double angle = -2.0 * constants::pi * es.energies[j] * t;
    phases[j] = complexd(std::cos(angle), std::sin(angle));
  }
  return es.vectors * phases.asDiagonal() * es.vectors.adjoint();
}

CorrelationTrace correlator(const SpinHamiltonian& h,
                            const Eigen::MatrixXcd& observable,
                            const InitialState& state,
                            const std::vector<double>& times,
                            const std::string& observable_name) {
  const EigenSystem es = eigensystem(h);
  const Eigen::Index dim = es.vectors.rows();
  if (observable.rows() != dim || observable.cols() != dim)
    throw std::invalid_argument("correlator: observable dimension mismatch");

  const Eigen::MatrixXcd rho = density_matrix(state, h.n_sites);
  // In the energy eigenbasis, C(t) = sum_jk e^{i 2pi (E_j - E_k) t} *
  // S_jk (S rho)_kj; precompute the static matrix once.
  const Eigen::MatrixXcd s_e = es.vectors.adjoint() * observable * es.vectors;
  const Eigen::MatrixXcd rho_e = es.vectors.adjoint() * rho * es.vectors;
  const Eigen::MatrixXcd a = s_e.cwiseProduct((s_e * rho_e).transpose());

  CorrelationTrace trace;
  trace.times = times;
  trace.observable = observable_name;
  trace.values.reserve(times.size());
  Eigen::VectorXcd u_plus(dim), u_minus(dim);
  for (double t : times) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      const double angle = 2.0 * constants::pi * es.energies[j] * t;
      u_plus[j] = complexd(std::cos(angle), std::sin(angle));
      u_minus[j] = std::conj(u_plus[j]);
    }
    // Plain transpose product (no conjugation): u_plus^T a u_minus.
    const Eigen::VectorXcd av = a * u_minus;
    trace.values.push_back((u_plus.array() * av.array()).sum());
  }
  return trace;
}

Spectrum spectrum(const CorrelationTrace& trace, double t2_seconds, int n_freq,
                  double f_max) {
  const std::size_t nt = trace.times.size();
  if (nt < 4 || trace.values.size() != nt)
    throw std::domain_error("spectrum: need at least 4 correlator samples");
  if (!(t2_seconds > 0.0))
    throw std::domain_error("spectrum: T2 must be positive");
  const double t_max = trace.times.back();
  if (!(t_max > 0.0)) throw std::domain_error("spectrum: trace must extend past t = 0");

  Spectrum spec;
  spec.gamma2 = 1.0 / t2_seconds;

  if (f_max <= 0.0) {
    // Uniform-grid Nyquist limit as the default band edge.
    f_max = static_cast<double>(nt - 1) / (2.0 * t_max);
  }
  if (n_freq <= 0) {
    // One point per natural bin 1/t_max across the band.
    n_freq = static_cast<int>(std::floor(f_max * t_max)) + 1;
    spec.frequencies.resize(static_cast<std::size_t>(n_freq));
    for (int k = 0; k < n_freq; ++k)
      spec.frequencies[static_cast<std::size_t>(k)] = static_cast<double>(k) / t_max;
  } else if (n_freq == 1) {
    spec.frequencies = {0.0};
  } else {
    spec.frequencies.resize(static_cast<std::size_t>(n_freq));
    for (int k = 0; k < n_freq; ++k)
      spec.frequencies[static_cast<std::size_t>(k)] =
          f_max * static_cast<double>(k) / (n_freq - 1);
  }

  spec.intensity.resize(spec.frequencies.size());
  std::vector<complexd> damped(nt);
  for (std::size_t i = 0; i < nt; ++i)
    damped[i] = trace.values[i] * std::exp(-trace.times[i] / t2_seconds);
  for (std::size_t q = 0; q < spec.frequencies.size(); ++q) {
    const double f = spec.frequencies[q];
    complexd acc(0.0, 0.0);
    for (std::size_t i = 0; i + 1 < nt; ++i) {
      const double dt = trace.times[i + 1] - trace.times[i];
      const double a0 = 2.0 * constants::pi * f * trace.times[i];
      const double a1 = 2.0 * constants::pi * f * trace.times[i + 1];
      const complexd g0 = damped[i] * complexd(std::cos(a0), std::sin(a0));
      const complexd g1 = damped[i + 1] * complexd(std::cos(a1), std::sin(a1));
      acc += 0.5 * (g0 + g1) * dt;
    }
    spec.intensity[q] = acc.real();
  }
  spec.peaks = find_peaks(spec.frequencies, spec.intensity);
  return spec;
}

std::vector<Peak> find_peaks(const std::vector<double>& freqs,
                             const std::vector<double>& intensity,
                             double rel_threshold) {
  std::vector<Peak> peaks;
  const std::size_t n = intensity.size();
  if (n == 0 || freqs.size() != n) return peaks;
  const double gmax = *std::max_element(intensity.begin(), intensity.end());
  if (!(gmax > 0.0)) return peaks;
  const double thr = rel_threshold * gmax;
  for (std::size_t i = 0; i < n; ++i) {
    const bool left_ok = i == 0 || intensity[i] > intensity[i - 1];
    const bool right_ok = i + 1 == n || intensity[i] >= intensity[i + 1];
    if (left_ok && right_ok && intensity[i] >= thr)
      peaks.push_back({freqs[i], intensity[i]});
  }
  return peaks;
}

std::vector<double> pchip_resample(const std::vector<double>& x,
                                   const std::vector<double>& y,
                                   const std::vector<double>& xq) {
  const std::size_t n = x.size();
  if (n == 0 || y.size() != n)
    throw std::invalid_argument("pchip_resample: node arrays must match and be nonempty");
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (!(x[i] < x[i + 1]))
      throw std::invalid_argument("pchip_resample: nodes must be strictly increasing");

  std::vector<double> out;
  out.reserve(xq.size());
  if (n == 1) {
    out.assign(xq.size(), y[0]);
    return out;
  }

  std::vector<double> h(n - 1), delta(n - 1), m(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x[i + 1] - x[i];
    delta[i] = (y[i + 1] - y[i]) / h[i];
  }
  if (n == 2) {
    m[0] = m[1] = delta[0];
  } else {
    // Interior tangents: shape-preserving weighted harmonic mean, zeroed at
    // local extrema so the interpolant never overshoots the data.
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (delta[i - 1] * delta[i] <= 0.0) {
        m[i] = 0.0;
      } else {
        const double w1 = 2.0 * h[i] + h[i - 1];
        const double w2 = h[i] + 2.0 * h[i - 1];
        m[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
      }
    }
    auto endpoint = [](double h0, double h1, double d0, double d1) {
      double t = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
      if (t * d0 <= 0.0)
        t = 0.0;
      else if (d0 * d1 < 0.0 && std::abs(t) > 3.0 * std::abs(d0))
        t = 3.0 * d0;
      return t;
    };
    m[0] = endpoint(h[0], h[1], delta[0], delta[1]);
    m[n - 1] = endpoint(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
  }

  for (double q : xq) {
    // Clamp to the outermost intervals rather than inventing data beyond them.
    std::size_t i = 0;
    if (q >= x[n - 1]) {
      i = n - 2;
    } else if (q > x[0]) {
      i = static_cast<std::size_t>(
              std::upper_bound(x.begin(), x.end(), q) - x.begin()) -
          1;
      if (i > n - 2) i = n - 2;
    }
    const double s = (q - x[i]) / h[i];
    const double s2 = s * s, s3 = s2 * s;
    const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    const double h10 = s3 - 2.0 * s2 + s;
    const double h01 = -2.0 * s3 + 3.0 * s2;
    const double h11 = s3 - s2;
    out.push_back(h00 * y[i] + h10 * h[i] * m[i] + h01 * y[i + 1] +
                  h11 * h[i] * m[i + 1]);
  }
  return out;
}

double gqsp_eigenvalue_crosscheck(const SpinHamiltonian& h, const GqspPlan& plan) {
  const double alpha = h.alpha();
  if (!(alpha > 0.0))
    throw std::domain_error("gqsp_eigenvalue_crosscheck: Hamiltonian has no terms");
  const EigenSystem es = eigensystem(h);
  double worst = 0.0;
  for (Eigen::Index j = 0; j < es.energies.size(); ++j) {
    // Block-encoded spectrum: (H - offset)/alpha lies in [-1, 1]; clamp the
    // last-ulp spill so the Chebyshev recurrence stays on the real interval.
    double lam = (es.energies[j] - h.energy_offset) / alpha;
    lam = std::clamp(lam, -1.0, 1.0);
    complexd p = plan.coefficients.empty() ? complexd(0.0, 0.0)
                                           : plan.coefficients[0];
    double t_prev = 1.0, t_cur = lam;
    for (std::size_t nidx = 1; nidx < plan.coefficients.size(); ++nidx) {
      p += 2.0 * plan.coefficients[nidx] * t_cur;
      const double t_next = 2.0 * lam * t_cur - t_prev;
      t_prev = t_cur;
      t_cur = t_next;
    }
    const double angle = plan.tau * lam;
    const complexd target =
        plan.prescale * complexd(std::cos(angle), std::sin(angle));
    worst = std::max(worst, std::abs(p - target));
  }
  return worst;
}

std::string trace_to_csv(const CorrelationTrace& trace) {
  std::string out = "t_seconds,re,im\n";
  char buf[128];
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", trace.times[i],
                  trace.values[i].real(), trace.values[i].imag());
    out += buf;
  }
  return out;
}

std::string spectrum_to_csv(const Spectrum& spec) {
  std::string out = "frequency_hz,intensity\n";
  char buf[96];
  for (std::size_t i = 0; i < spec.frequencies.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", spec.frequencies[i],
                  spec.intensity[i]);
    out += buf;
  }
  return out;
}

}  // namespace nmrq
