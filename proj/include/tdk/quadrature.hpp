/// @file quadrature.hpp
/// @brief Gauss-Legendre rules and an adaptive bisection integrator.

#pragma once

#include <functional>
#include <vector>

#include "tdk/errors.hpp"

namespace tdk {

struct QuadratureRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// Nodes by Newton iteration on the Legendre recurrence; cached per order.
const QuadratureRule& gauss_legendre(int order);

/// Fixed-order Gauss-Legendre on [a, b].
double integrate_gl(const std::function<double(double)>& f, double a, double b,
                    int order);

/// Adaptive bisection with a GL(15) vs split-GL(15) error estimate.
/// `tol` is relative to the accumulated integral (with an absolute floor).
double adaptive_integrate(const std::function<double(double)>& f, double a, double b,
                          double tol);

}  // namespace tdk
