#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "clab/field.hpp"

namespace clab {

// Real field a e^{ik.x} + conj: sets c(k) = a, c(-k) = conj(a).
Field single_mode(const Grid& g, const std::array<int, 3>& k, const std::array<cplx, 3>& a,
                  Rank r = Rank::vector);

// (sin x cos y, -cos x sin y) * amp, x measured in units of L / 2 pi.
Field taylor_green_2d(const Grid& g, double amp = 1.0);
// (A sin mz + C cos my, B sin mx + A cos mz, C sin my + B cos mx)
Field abc_3d(const Grid& g, double A, double B, double C, int m = 1);

// Gaussian coefficients with |c(k)| ~ |k|^-alpha for 1 <= |k| <= k_max
// (integer radius; 0 means N/3), kept inside the 2/3 band, zero mean,
// Hermitian, divergence-free for vectors, unit L^2 norm.
Field power_law_random(const Grid& g, double alpha, std::uint64_t seed, Rank r = Rank::vector,
                       double k_max = 0);

// Sum of degree -1 homogeneous singular profiles at random centres with
// random polarizations: c(k) ~ |k|^-2 chi(|k| / k_c), Leray projected, unit L^2.
Field critical_singular(const Grid& g, int centres, std::uint64_t seed, double k_c);

// Named family lookup used by configs and the CLI:
// "taylor-green", "abc", "power-law", "critical-singular", "zero".
Field make_family(const Grid& g, const std::string& name, double amplitude, std::uint64_t seed,
                  double alpha = 2.0);

} // namespace clab
