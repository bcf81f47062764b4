#include "bvi/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bvi {

template <class Tag>
bool Coords<Tag>::all_finite() const noexcept {
  return std::all_of(v_.begin(), v_.end(), [](double e) { return std::isfinite(e); });
}

template class Coords<PrimalTag>;
template class Coords<DualTag>;

double pairing(const Vector& x, const DualVector& xs) {
  if (x.size() != xs.size()) throw DimensionMismatch(x.size(), xs.size());
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * xs[i];
  return s;
}

template <class Tag>
double dot(const Coords<Tag>& a, const Coords<Tag>& b) {
  if (a.size() != b.size()) throw DimensionMismatch(a.size(), b.size());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

template <class Tag>
double euclidean_norm(const Coords<Tag>& a) {
  return std::sqrt(dot(a, a));
}

template double dot(const Vector&, const Vector&);
template double dot(const DualVector&, const DualVector&);
template double euclidean_norm(const Vector&);
template double euclidean_norm(const DualVector&);

namespace {

// (sum |v_i|^r)^(1/r), scaled by max |v_i| to avoid under/overflow.
double lr_norm(std::span<const double> v, double r) {
  if (r == 2.0) {
    double s = 0.0;
    for (double e : v) s += e * e;
    return std::sqrt(s);
  }
  double scale = 0.0;
  for (double e : v) scale = std::max(scale, std::abs(e));
  if (scale == 0.0) return 0.0;
  double s = 0.0;
  for (double e : v) s += std::pow(std::abs(e) / scale, r);
  return scale * std::pow(s, 1.0 / r);
}

// Duality map of l_r: (Jv)_i = ||v||^{2-r} |v_i|^{r-1} sgn(v_i).
std::vector<double> lr_duality(std::span<const double> v, double r) {
  std::vector<double> out(v.size(), 0.0);
  if (r == 2.0) {
    std::copy(v.begin(), v.end(), out.begin());
    return out;
  }
  const double n = lr_norm(v, r);
  if (n == 0.0) return out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0.0) continue;
    const double mag = n * std::pow(std::abs(v[i]) / n, r - 1.0);
    out[i] = v[i] > 0.0 ? mag : -mag;
  }
  return out;
}

}  // namespace

SpaceSpec::SpaceSpec(std::size_t dim, NormFamily family, double p)
    : dim_(dim), family_(family), p_(p), q_(p / (p - 1.0)), c_(std::sqrt(p - 1.0)) {}

SpaceSpec SpaceSpec::euclidean(std::size_t dim) {
  if (dim == 0) throw Error("space dimension must be positive");
  return SpaceSpec(dim, NormFamily::euclidean, 2.0);
}

SpaceSpec SpaceSpec::lp(std::size_t dim, double p) {
  if (dim == 0) throw Error("space dimension must be positive");
  if (!(p > 1.0 && p <= 2.0)) throw Error("lp exponent must lie in (1, 2], got " + std::to_string(p));
  return SpaceSpec(dim, NormFamily::lp, p);
}

void SpaceSpec::check(const Vector& x) const {
  if (x.size() != dim_) throw DimensionMismatch(dim_, x.size());
}

void SpaceSpec::check(const DualVector& x) const {
  if (x.size() != dim_) throw DimensionMismatch(dim_, x.size());
}

double norm(const SpaceSpec& space, const Vector& x) {
  space.check(x);
  return lr_norm(x.values(), space.p());
}

double dual_norm(const SpaceSpec& space, const DualVector& xs) {
  space.check(xs);
  return lr_norm(xs.values(), space.q());
}

DualVector duality_map(const SpaceSpec& space, const Vector& x) {
  space.check(x);
  return DualVector(lr_duality(x.values(), space.p()));
}

Vector inverse_duality_map(const SpaceSpec& space, const DualVector& xs) {
  space.check(xs);
  return Vector(lr_duality(xs.values(), space.q()));
}

double lyapunov_phi(const SpaceSpec& space, const Vector& x, const Vector& y) {
  space.check(x);
  space.check(y);
  if (space.is_euclidean()) {
    // Same value as the definition; avoids cancellation when x is close to y.
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
    return s;
  }
  const double nx = norm(space, x);
  const double ny = norm(space, y);
  return std::max(0.0, nx * nx - 2.0 * pairing(x, duality_map(space, y)) + ny * ny);
}

double v_functional(const SpaceSpec& space, const Vector& x, const DualVector& xs) {
  space.check(x);
  space.check(xs);
  const double nx = norm(space, x);
  const double nxs = dual_norm(space, xs);
  return std::max(0.0, nx * nx - 2.0 * pairing(x, xs) + nxs * nxs);
}

}  // namespace bvi
