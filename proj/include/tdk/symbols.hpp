/// @file symbols.hpp
/// @brief Per-axis derivative symbols (i*xi)^a with the Nyquist convention.

#pragma once

#include <complex>

#include "tdk/grid.hpp"

namespace tdk {

/// xi for axis index j, zeroed on the Nyquist index when the power is odd
/// (the sine partner of the Nyquist cosine is not representable).
inline double axis_wavenumber(const Grid& grid, int j, bool odd_power) {
  const int s = grid.signed_index(j);
  if (odd_power && s == -grid.n / 2) return 0.0;
  constexpr double two_pi = 6.283185307179586476925286766559;
  return two_pi / grid.box_length * s;
}

/// (i*xi_j)^a as a complex factor.
inline std::complex<double> axis_symbol_pow(const Grid& grid, int j, int a) {
  if (a == 0) return {1.0, 0.0};
  const double xi = axis_wavenumber(grid, j, a % 2 != 0);
  double mag = 1.0;
  for (int c = 0; c < a; ++c) mag *= xi;
  switch (a % 4) {  // i^a
    case 0: return {mag, 0.0};
    case 1: return {0.0, mag};
    case 2: return {-mag, 0.0};
    default: return {0.0, -mag};
  }
}

/// |(i*xi_j)^a|^2 = xi_j^(2a) under the same Nyquist convention.
inline double symbol_weight(const Grid& grid, int j, int a) {
  if (a == 0) return 1.0;
  const double xi = axis_wavenumber(grid, j, a % 2 != 0);
  double w = 1.0;
  for (int c = 0; c < 2 * a; ++c) w *= xi;
  return w;
}

}  // namespace tdk
