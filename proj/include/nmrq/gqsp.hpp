#pragma once

#include <complex>
#include <string>
#include <vector>

namespace nmrq {

// Phase-factor plan realizing P(w) ~ exp(i*tau*cos(theta)) on w = e^{i theta}
// as a product of SU(2) signal rotations interleaved with the signal unitary.
// The target is the truncated Jacobi-Anger expansion
//   P(w) = sum_{n=-d}^{d} i^n J_n(tau) w^n,
// scaled by `prescale` (slightly below 1) so the complementary polynomial
// exists. coefficients[n] = prescale * i^n J_n(tau) for n = 0..d (the
// negative orders equal the positive ones).
//
// Rotation convention, applied as R_{2d} A R_{2d-1} A ... R_1 A R_0 with
// A = diag(w, 1):
//   R(lambda, phi, theta) = [[e^{i(lambda+phi)} cos th, e^{i phi} sin th],
//                            [e^{i lambda} sin th,      -cos th          ]]
// with lambda = 0 for every layer except layer 0.
struct GqspPlan {
  double tau = 0.0;
  double epsilon = 0.0;
  int degree = 0;       // d
  double prescale = 1.0;
  std::vector<std::complex<double>> coefficients;  // scaled, orders 0..d
  std::vector<double> phi;    // size 2d+1
  std::vector<double> theta;  // size 2d+1
  double lambda = 0.0;        // layer-0 extra phase

  int n_phases() const { return static_cast<int>(phi.size()); }
};

// Truncation degree d = ceil(e*|tau|/2 + log10(1/eps)).
int plan_degree(double tau, double eps);

// J_0..J_n_max at fixed tau >= 0 by Miller's downward recurrence,
// normalized with J_0 + 2*sum J_{2k} = 1.
std::vector<double> bessel_j_sequence(double tau, int n_max);

// Unscaled coefficients c_n = i^n J_n(tau), orders 0..degree.
std::vector<std::complex<double>> jacobi_anger_coefficients(double tau, int degree);

// sup over a theta grid of |P(theta) - exp(i*tau*cos theta)| for the
// unscaled degree-d truncation.
double truncation_error(double tau, int degree, int grid_points = 4096);

// Min-phase complementary polynomial q (degree = p's) with
// |p|^2 + |q|^2 = 1 on the unit circle, via FFT cepstral factorization.
// Requires max|p| <= 1 on the circle (caller prescales).
std::vector<std::complex<double>> complementary_polynomial(
    const std::vector<std::complex<double>>& p);

// Full plan: degree, scaled coefficients, and phase factors.
GqspPlan generate_phases(double tau, double eps);

// P_plan(theta) from the stored (scaled) coefficients.
std::complex<double> evaluate_plan_polynomial(const GqspPlan& plan, double theta);

// Top-left entry of the rotation product at angle theta, shifted by w^{-d}
// so it is directly comparable to evaluate_plan_polynomial.
std::complex<double> reconstruct_from_phases(const GqspPlan& plan, double theta);

// max over a uniform theta grid of |reconstruction - plan polynomial|.
double reconstruction_error(const GqspPlan& plan, int grid_points = 4096);

// CSV with header "index,lambda,phi,theta"; lambda only on row 0.
std::string phases_to_csv(const GqspPlan& plan);

}  // namespace nmrq
