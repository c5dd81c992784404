/// @file grid.hpp
/// @brief Uniform periodic grid on [0, L)^3 and its Fourier index bookkeeping.

#pragma once

#include <array>
#include <cstddef>

#include "tdk/errors.hpp"

namespace tdk {

/// Sample points x_j = j*L/n; wavenumbers xi = (2*pi/L)*s with signed index
/// s in {-n/2, ..., n/2 - 1}.  Real-input transforms store the last axis
/// halved (index 0..n/2), so grids carry both layouts' sizes.
struct Grid {
  int n = 0;
  double box_length = 0.0;

  static Grid make(int n, double box_length) {
    if (n < 4 || n % 2 != 0)
      fail(ErrorKind::InvalidParameters, "grid.n must be even and >= 4");
    if (!(box_length > 0.0))
      fail(ErrorKind::InvalidParameters, "grid.box_length must be positive");
    return Grid{n, box_length};
  }

  double spacing() const { return box_length / n; }
  double volume() const { return box_length * box_length * box_length; }
  std::size_t size() const {
    return static_cast<std::size_t>(n) * n * n;
  }
  std::size_t spectral_size() const {
    return static_cast<std::size_t>(n) * n * (n / 2 + 1);
  }

  int signed_index(int j) const { return j <= n / 2 - 1 ? j : j - n; }
  double wavenumber(int j) const;

  /// Largest retained axis index of the 2/3-rule band: the biggest K with
  /// 3K < n, so products of band-limited fields never alias back into band.
  int dealias_cutoff() const { return (n - 1) / 3; }

  bool operator==(const Grid& other) const = default;
};

inline double Grid::wavenumber(int j) const {
  constexpr double two_pi = 6.283185307179586476925286766559;
  return two_pi / box_length * signed_index(j);
}

using MultiIndex = std::array<int, 3>;

inline int order_of(const MultiIndex& alpha) {
  return alpha[0] + alpha[1] + alpha[2];
}

}  // namespace tdk
