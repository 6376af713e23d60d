#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "nmrq/gqsp.hpp"
#include "nmrq/hamiltonian.hpp"

namespace nmrq {

// Largest spin count the dense oracle will materialize (2^14 amplitudes).
inline constexpr int kDenseSpinCap = 14;

// A Pauli string as a basis-state permutation with phases: acting on |b>,
// the result is phase * (-1)^popcount(b & zmask) |b ^ xmask>.
struct PauliStringOp {
  std::uint64_t xmask = 0;
  std::uint64_t zmask = 0;
  std::complex<double> phase{1.0, 0.0};
};
PauliStringOp make_string_op(const PauliTerm& term);
void apply_string_op(const PauliStringOp& op, const Eigen::VectorXcd& in,
                     Eigen::VectorXcd& out);  // out = op * in

// Dense Hamiltonian matrix (site k <-> bit k), including the identity
// offset. Throws std::domain_error above kDenseSpinCap, naming the cap.
Eigen::MatrixXcd dense_matrix(const SpinHamiltonian& h);

// Weighted z observable sum_k w_k sigma^z_k / 2.
Eigen::MatrixXcd dense_z_observable(int n_sites, const std::vector<double>& weights);
std::vector<double> uniform_weights(int n_sites);                       // S^z_tot
std::vector<double> gamma_weights(const std::vector<SpinSite>& sites);  // gamma_k/gamma_1H

enum class InitialStateKind { MaximallyMixed, ThermalZ, BasisStates };
struct InitialState {
  InitialStateKind kind = InitialStateKind::MaximallyMixed;
  double polarization = 0.1;               // ThermalZ: rho = prod (I + p*sigma_z)/2
  std::vector<std::uint64_t> basis_states; // BasisStates: uniform mixture
};
Eigen::MatrixXcd density_matrix(const InitialState& state, int n_sites);

// U(t) = exp(-i 2*pi H t) via eigendecomposition.
Eigen::MatrixXcd evolution_operator(const SpinHamiltonian& h, double t);

struct CorrelationTrace {
  std::vector<double> times;                 // s
  std::vector<std::complex<double>> values;  // <S(t) S(0)>
  std::string observable;
};

// C(t) = tr(e^{i 2pi H t} S e^{-i 2pi H t} S rho).
CorrelationTrace correlator(const SpinHamiltonian& h, const Eigen::MatrixXcd& observable,
                            const InitialState& state, const std::vector<double>& times,
                            const std::string& observable_name = "");

struct Peak {
  double frequency = 0.0;  // Hz
  double intensity = 0.0;
};

struct Spectrum {
  std::vector<double> frequencies;  // Hz
  std::vector<double> intensity;    // Re of the damped Fourier integral
  std::vector<Peak> peaks;
  double gamma2 = 0.0;              // 1/T2, rad-free rate in 1/s
};

// S(f) = Re integral_0^tmax C(t) e^{i 2pi f t} e^{-t/T2} dt (trapezoid).
// Lines acquire a Lorentzian half-width gamma2/(2 pi) Hz. Requires at
// least 4 trace samples (domain error otherwise). n_freq = 0 picks
// floor(f_max * t_max) + 1 points (bin 1/t_max); f_max = 0 uses Nyquist.
Spectrum spectrum(const CorrelationTrace& trace, double t2_seconds,
                  int n_freq = 0, double f_max = 0.0);

// Local maxima above rel_threshold * global max.
std::vector<Peak> find_peaks(const std::vector<double>& freqs,
                             const std::vector<double>& intensity,
                             double rel_threshold = 0.02);

// Monotone (Fritsch-Carlson) piecewise-cubic resampling; exact at nodes.
std::vector<double> pchip_resample(const std::vector<double>& x,
                                   const std::vector<double>& y,
                                   const std::vector<double>& xq);

// max over eigenvalues lambda of H/alpha of
// |P_plan(lambda) - prescale * e^{i tau lambda}| with
// P_plan(lambda) = c_0 + 2 sum_n c_n T_n(lambda). Cross-validates the GQSP
// plan against exact evolution phases.
double gqsp_eigenvalue_crosscheck(const SpinHamiltonian& h, const GqspPlan& plan);

std::string trace_to_csv(const CorrelationTrace& trace);
std::string spectrum_to_csv(const Spectrum& spec);

}  // namespace nmrq
