/// @file field.hpp
/// @brief Scalar fields in real or spectral representation plus the spectral
///        toolbox: transforms, exact derivatives, dealiasing, and norms.
///
/// Conventions (fixed project-wide):
///   forward:   c_k = sum_x f(x) exp(-i xi_k . x)   (raw DFT, unnormalized)
///   inverse:   f(x) = (1/n^3) sum_k c_k exp(+i xi_k . x)
///   Parseval:  ||f||_2^2 = (V/n^6) sum_k w_k |c_k|^2, w_k the real-layout
///              multiplicity (2 off the self-conjugate planes of the halved axis).
/// Odd derivative symbols vanish on Nyquist indices: a real grid field cannot
/// represent the sine partner of its Nyquist cosine, so (i xi)^alpha uses
/// xi = 0 there whenever alpha is odd on that axis.

#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "tdk/grid.hpp"

namespace tdk {

class ScalarField {
 public:
  enum class Rep { Real, Spectral };

  ScalarField() = default;
  static ScalarField zeros(const Grid& grid, Rep rep = Rep::Real);
  /// Samples fn(x, y, z) on the grid.
  static ScalarField from_function(
      const Grid& grid, const std::function<double(double, double, double)>& fn);

  const Grid& grid() const { return grid_; }
  Rep rep() const { return rep_; }
  bool empty() const { return grid_.n == 0; }

  std::vector<double>& real_data();
  const std::vector<double>& real_data() const;
  std::vector<std::complex<double>>& spectral_data();
  const std::vector<std::complex<double>>& spectral_data() const;

  /// Representation changes; both error on NaN/Inf in the source data.
  ScalarField to_spectral() const;
  ScalarField to_real() const;

  ScalarField& operator+=(const ScalarField& other);
  ScalarField& operator*=(double s);

 private:
  Grid grid_;
  Rep rep_ = Rep::Real;
  std::vector<double> real_;
  std::vector<std::complex<double>> spec_;
};

/// result += scale * other; representations and grids must match.
void add_scaled(ScalarField& result, double scale, const ScalarField& other);

/// Exact spectral derivative d^alpha; mixed orders commute exactly.
ScalarField derivative(const ScalarField& f, const MultiIndex& alpha);

/// Zeroes every coefficient with an axis index outside the retained band.
/// Idempotent; returns a spectral field.
ScalarField dealias(const ScalarField& f);

/// L^q norm by real-space quadrature: (h^3 sum |f|^q)^(1/q); q = infinity
/// gives the grid max.  Requires q >= 1.
double lq_norm(const ScalarField& f, double q);

/// L^2 norm through the Parseval identity (spectral path).
double l2_norm_spectral(const ScalarField& f);

/// Real-space inner product h^3 sum f*g.
double l2_inner(const ScalarField& a, const ScalarField& b);

/// sqrt(sum_{|alpha| <= s} ||d^alpha f||_2^2) over every field in the pack,
/// each multi-index counted once.  Requires 0 <= s <= 4.
double sobolev_norm(const std::vector<const ScalarField*>& fields, int s);
double sobolev_norm(const ScalarField& f, int s);

/// All multi-indices with lo <= |alpha| <= hi, graded order.
std::vector<MultiIndex> multi_indices(int lo, int hi);

}  // namespace tdk
