#include "tdk/field.hpp"

#include "tdk/symbols.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace tdk {
namespace {

// One cached plan pair per grid size; FFTW_ESTIMATE keeps planning
// deterministic.  Execution goes through the cache buffers under a lock, so
// transforms are serialized (callers parallelize across fields, not within).
struct PlanSet {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
  double* real_buf = nullptr;
  fftw_complex* spec_buf = nullptr;
  std::size_t real_size = 0;
  std::size_t spec_size = 0;
};

std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

PlanSet& plans_for(int n) {
  static std::map<int, PlanSet> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  PlanSet set;
  set.real_size = static_cast<std::size_t>(n) * n * n;
  set.spec_size = static_cast<std::size_t>(n) * n * (n / 2 + 1);
  set.real_buf = fftw_alloc_real(set.real_size);
  set.spec_buf = fftw_alloc_complex(set.spec_size);
  set.fwd = fftw_plan_dft_r2c_3d(n, n, n, set.real_buf, set.spec_buf, FFTW_ESTIMATE);
  set.bwd = fftw_plan_dft_c2r_3d(n, n, n, set.spec_buf, set.real_buf, FFTW_ESTIMATE);
  if (set.fwd == nullptr || set.bwd == nullptr)
    fail(ErrorKind::Numeric, "FFT planning failed");
  return cache.emplace(n, set).first->second;
}

void require_finite(const std::vector<double>& data) {
  for (double x : data)
    if (!std::isfinite(x)) fail(ErrorKind::Numeric, "non-finite value in field data");
}

void require_finite(const std::vector<std::complex<double>>& data) {
  for (const auto& z : data)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      fail(ErrorKind::Numeric, "non-finite value in field data");
}

void require_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b)) fail(ErrorKind::Shape, "fields live on different grids");
}

}  // namespace

ScalarField ScalarField::zeros(const Grid& grid, Rep rep) {
  ScalarField f;
  f.grid_ = grid;
  f.rep_ = rep;
  if (rep == Rep::Real)
    f.real_.assign(grid.size(), 0.0);
  else
    f.spec_.assign(grid.spectral_size(), {0.0, 0.0});
  return f;
}

ScalarField ScalarField::from_function(
    const Grid& grid, const std::function<double(double, double, double)>& fn) {
  ScalarField f = zeros(grid, Rep::Real);
  const double h = grid.spacing();
  std::size_t idx = 0;
  for (int i0 = 0; i0 < grid.n; ++i0)
    for (int i1 = 0; i1 < grid.n; ++i1)
      for (int i2 = 0; i2 < grid.n; ++i2, ++idx)
        f.real_[idx] = fn(i0 * h, i1 * h, i2 * h);
  return f;
}

std::vector<double>& ScalarField::real_data() {
  if (rep_ != Rep::Real) fail(ErrorKind::Shape, "field is not in real representation");
  return real_;
}

const std::vector<double>& ScalarField::real_data() const {
  if (rep_ != Rep::Real) fail(ErrorKind::Shape, "field is not in real representation");
  return real_;
}

std::vector<std::complex<double>>& ScalarField::spectral_data() {
  if (rep_ != Rep::Spectral)
    fail(ErrorKind::Shape, "field is not in spectral representation");
  return spec_;
}

const std::vector<std::complex<double>>& ScalarField::spectral_data() const {
  if (rep_ != Rep::Spectral)
    fail(ErrorKind::Shape, "field is not in spectral representation");
  return spec_;
}

ScalarField ScalarField::to_spectral() const {
  if (empty()) fail(ErrorKind::Shape, "empty field");
  if (rep_ == Rep::Spectral) return *this;
  require_finite(real_);
  ScalarField out = zeros(grid_, Rep::Spectral);
  std::lock_guard<std::mutex> lock(plan_mutex());
  PlanSet& set = plans_for(grid_.n);
  std::copy(real_.begin(), real_.end(), set.real_buf);
  fftw_execute(set.fwd);
  auto* src = reinterpret_cast<std::complex<double>*>(set.spec_buf);
  std::copy(src, src + set.spec_size, out.spec_.begin());
  return out;
}

ScalarField ScalarField::to_real() const {
  if (empty()) fail(ErrorKind::Shape, "empty field");
  if (rep_ == Rep::Real) return *this;
  require_finite(spec_);
  ScalarField out = zeros(grid_, Rep::Real);
  std::lock_guard<std::mutex> lock(plan_mutex());
  PlanSet& set = plans_for(grid_.n);
  auto* dst = reinterpret_cast<std::complex<double>*>(set.spec_buf);
  std::copy(spec_.begin(), spec_.end(), dst);
  fftw_execute(set.bwd);
  const double scale = 1.0 / static_cast<double>(grid_.size());
  for (std::size_t i = 0; i < set.real_size; ++i)
    out.real_[i] = set.real_buf[i] * scale;
  return out;
}

ScalarField& ScalarField::operator+=(const ScalarField& other) {
  add_scaled(*this, 1.0, other);
  return *this;
}

ScalarField& ScalarField::operator*=(double s) {
  if (rep_ == Rep::Real)
    for (double& x : real_) x *= s;
  else
    for (auto& z : spec_) z *= s;
  return *this;
}

void add_scaled(ScalarField& result, double scale, const ScalarField& other) {
  require_same_grid(result.grid(), other.grid());
  if (result.rep() != other.rep())
    fail(ErrorKind::Shape, "cannot combine fields in different representations");
  if (result.rep() == ScalarField::Rep::Real) {
    auto& dst = result.real_data();
    const auto& src = other.real_data();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += scale * src[i];
  } else {
    auto& dst = result.spectral_data();
    const auto& src = other.spectral_data();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += scale * src[i];
  }
}

ScalarField derivative(const ScalarField& f, const MultiIndex& alpha) {
  for (int a : alpha)
    if (a < 0) fail(ErrorKind::Domain, "derivative order must be non-negative");
  ScalarField g = f.rep() == ScalarField::Rep::Spectral ? f : f.to_spectral();
  const Grid& grid = g.grid();
  auto& data = g.spectral_data();
  const int n = grid.n;
  const int half = n / 2 + 1;
  std::size_t idx = 0;
  for (int j0 = 0; j0 < n; ++j0) {
    const std::complex<double> f0 = axis_symbol_pow(grid, j0, alpha[0]);
    for (int j1 = 0; j1 < n; ++j1) {
      const std::complex<double> f01 = f0 * axis_symbol_pow(grid, j1, alpha[1]);
      for (int j2 = 0; j2 < half; ++j2, ++idx)
        data[idx] *= f01 * axis_symbol_pow(grid, j2, alpha[2]);
    }
  }
  return g;
}

ScalarField dealias(const ScalarField& f) {
  ScalarField g = f.rep() == ScalarField::Rep::Spectral ? f : f.to_spectral();
  const Grid& grid = g.grid();
  auto& data = g.spectral_data();
  const int n = grid.n;
  const int half = n / 2 + 1;
  const int cutoff = grid.dealias_cutoff();
  std::size_t idx = 0;
  for (int j0 = 0; j0 < n; ++j0) {
    const bool kill0 = std::abs(grid.signed_index(j0)) > cutoff;
    for (int j1 = 0; j1 < n; ++j1) {
      const bool kill01 = kill0 || std::abs(grid.signed_index(j1)) > cutoff;
      for (int j2 = 0; j2 < half; ++j2, ++idx)
        if (kill01 || std::abs(grid.signed_index(j2)) > cutoff)
          data[idx] = {0.0, 0.0};
    }
  }
  return g;
}

double lq_norm(const ScalarField& f, double q) {
  if (!(q >= 1.0)) fail(ErrorKind::Domain, "lq_norm requires q >= 1");
  const ScalarField g = f.to_real();
  const auto& data = g.real_data();
  if (std::isinf(q)) {
    double m = 0.0;
    for (double x : data) m = std::max(m, std::abs(x));
    return m;
  }
  const double h3 = std::pow(g.grid().spacing(), 3);
  if (q == 2.0) {
    double sum = 0.0;
    for (double x : data) sum += x * x;
    return std::sqrt(h3 * sum);
  }
  double sum = 0.0;
  for (double x : data) sum += std::pow(std::abs(x), q);
  return std::pow(h3 * sum, 1.0 / q);
}

double l2_norm_spectral(const ScalarField& f) {
  const ScalarField g = f.rep() == ScalarField::Rep::Spectral ? f : f.to_spectral();
  const Grid& grid = g.grid();
  const auto& data = g.spectral_data();
  const int n = grid.n;
  const int half = n / 2 + 1;
  double sum = 0.0;
  std::size_t idx = 0;
  for (int j0 = 0; j0 < n; ++j0)
    for (int j1 = 0; j1 < n; ++j1)
      for (int j2 = 0; j2 < half; ++j2, ++idx) {
        const double w = (j2 == 0 || j2 == n / 2) ? 1.0 : 2.0;
        sum += w * std::norm(data[idx]);
      }
  const double n3 = static_cast<double>(grid.size());
  return std::sqrt(grid.volume() * sum / (n3 * n3));
}

double l2_inner(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid());
  const ScalarField ra = a.to_real();
  const ScalarField rb = b.to_real();
  const auto& da = ra.real_data();
  const auto& db = rb.real_data();
  double sum = 0.0;
  for (std::size_t i = 0; i < da.size(); ++i) sum += da[i] * db[i];
  return std::pow(a.grid().spacing(), 3) * sum;
}

std::vector<MultiIndex> multi_indices(int lo, int hi) {
  std::vector<MultiIndex> out;
  for (int total = lo; total <= hi; ++total)
    for (int a0 = total; a0 >= 0; --a0)
      for (int a1 = total - a0; a1 >= 0; --a1)
        out.push_back(MultiIndex{a0, a1, total - a0 - a1});
  return out;
}

double sobolev_norm(const std::vector<const ScalarField*>& fields, int s) {
  if (s < 0 || s > 4) fail(ErrorKind::Domain, "sobolev_norm requires 0 <= s <= 4");
  if (fields.empty()) fail(ErrorKind::Shape, "sobolev_norm needs at least one field");
  const Grid& grid = fields.front()->grid();
  const auto alphas = multi_indices(0, s);
  const int n = grid.n;
  const int half = n / 2 + 1;

  double total = 0.0;
  for (const ScalarField* fp : fields) {
    require_same_grid(fp->grid(), grid);
    const ScalarField g =
        fp->rep() == ScalarField::Rep::Spectral ? *fp : fp->to_spectral();
    const auto& data = g.spectral_data();
    double sum = 0.0;
    std::size_t idx = 0;
    for (int j0 = 0; j0 < n; ++j0)
      for (int j1 = 0; j1 < n; ++j1)
        for (int j2 = 0; j2 < half; ++j2, ++idx) {
          const double e = std::norm(data[idx]);
          if (e == 0.0) continue;
          const double w = (j2 == 0 || j2 == n / 2) ? 1.0 : 2.0;
          double weight = 0.0;
          for (const auto& alpha : alphas)
            weight += symbol_weight(grid, j0, alpha[0]) *
                      symbol_weight(grid, j1, alpha[1]) *
                      symbol_weight(grid, j2, alpha[2]);
          sum += w * weight * e;
        }
    total += sum;
  }
  const double n3 = static_cast<double>(grid.size());
  return std::sqrt(grid.volume() * total / (n3 * n3));
}

double sobolev_norm(const ScalarField& f, int s) {
  return sobolev_norm(std::vector<const ScalarField*>{&f}, s);
}

}  // namespace tdk
