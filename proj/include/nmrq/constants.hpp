#pragma once

namespace nmrq::constants {

// CODATA-2018 values used for dipolar coupling strengths.
inline constexpr double mu0 = 1.25663706212e-6;      // vacuum permeability, N/A^2
inline constexpr double hbar = 1.054571817e-34;      // reduced Planck constant, J*s
inline constexpr double pi = 3.14159265358979323846;

// Gyromagnetic ratios, rad/(s*T). Proton value doubles as the reference for
// gamma-weighted observables.
inline constexpr double gamma_1h = 2.6752e8;
inline constexpr double gamma_13c = 6.7283e7;
inline constexpr double gamma_15n = -2.7126e7;

}  // namespace nmrq::constants
