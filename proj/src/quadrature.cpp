#include "tdk/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace tdk {

namespace {

QuadratureRule build_rule(int order) {
  // Newton iteration for the roots of P_n; standard Golub-Welsch-free
  // construction exploiting root symmetry about zero.
  QuadratureRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int j = 2; j <= order; ++j) {
        double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[order - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[order - 1 - i] = w;
  }
  if (order % 2 == 1) rule.nodes[half - 1] = 0.0;
  return rule;
}

std::mutex rule_mutex;
std::map<int, QuadratureRule> rule_cache;

double gl_on_interval(const std::function<double(double)>& f, double a, double b,
                      const QuadratureRule& rule) {
  const double mid = 0.5 * (a + b);
  const double rad = 0.5 * (b - a);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    sum += rule.weights[i] * f(mid + rad * rule.nodes[i]);
  }
  return rad * sum;
}

struct AdaptiveState {
  const std::function<double(double)>* f;
  const QuadratureRule* rule;
  double tol;
  int max_depth;
};

double adaptive_recurse(const AdaptiveState& st, double a, double b, double whole,
                        int depth) {
  const double mid = 0.5 * (a + b);
  const double left = gl_on_interval(*st.f, a, mid, *st.rule);
  const double right = gl_on_interval(*st.f, mid, b, *st.rule);
  const double refined = left + right;
  const double err = std::abs(refined - whole);
  if (err <= st.tol * std::max(1.0, std::abs(refined)) || depth >= st.max_depth) {
    if (depth >= st.max_depth && err > 1e3 * st.tol * std::max(1.0, std::abs(refined))) {
      fail(ErrorKind::Numeric, "adaptive quadrature failed to converge on [" +
                                   std::to_string(a) + ", " + std::to_string(b) + "]");
    }
    return refined;
  }
  return adaptive_recurse(st, a, mid, left, depth + 1) +
         adaptive_recurse(st, mid, b, right, depth + 1);
}

}  // namespace

const QuadratureRule& gauss_legendre(int order) {
  if (order < 1 || order > 256) {
    fail(ErrorKind::InvalidParameters,
         "gauss_legendre order must be in [1, 256], got " + std::to_string(order));
  }
  std::lock_guard<std::mutex> lock(rule_mutex);
  auto it = rule_cache.find(order);
  if (it == rule_cache.end()) {
    it = rule_cache.emplace(order, build_rule(order)).first;
  }
  return it->second;
}

double integrate_gl(const std::function<double(double)>& f, double a, double b,
                    int order) {
  return gl_on_interval(f, a, b, gauss_legendre(order));
}

double adaptive_integrate(const std::function<double(double)>& f, double a, double b,
                          double tol) {
  if (!(tol > 0.0)) {
    fail(ErrorKind::InvalidParameters, "adaptive_integrate requires tol > 0");
  }
  if (!(b >= a)) {
    fail(ErrorKind::Domain, "adaptive_integrate requires b >= a");
  }
  if (a == b) return 0.0;
  AdaptiveState st{&f, &gauss_legendre(15), tol, 48};
  const double whole = gl_on_interval(f, a, b, *st.rule);
  return adaptive_recurse(st, a, b, whole, 0);
}

}  // namespace tdk
