#pragma once

// Finite-dimensional models of smooth, 2-uniformly convex Banach spaces.
//
// A point of E and a functional of E* are both stored as coordinate arrays;
// the pairing <x, x*> is the coordinate dot product. The two are kept as
// distinct types so that primal and dual quantities cannot be mixed by
// accident.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "bvi/errors.hpp"

namespace bvi {

struct PrimalTag {};
struct DualTag {};

template <class Tag>
class Coords {
 public:
  Coords() = default;
  explicit Coords(std::size_t n, double fill = 0.0) : v_(n, fill) {}
  Coords(std::initializer_list<double> init) : v_(init) {}
  explicit Coords(std::vector<double> values) : v_(std::move(values)) {}

  std::size_t size() const noexcept { return v_.size(); }
  double& operator[](std::size_t i) { return v_[i]; }
  double operator[](std::size_t i) const { return v_[i]; }

  auto begin() noexcept { return v_.begin(); }
  auto end() noexcept { return v_.end(); }
  auto begin() const noexcept { return v_.begin(); }
  auto end() const noexcept { return v_.end(); }

  std::span<const double> values() const noexcept { return v_; }
  const std::vector<double>& raw() const noexcept { return v_; }

  Coords& operator+=(const Coords& o) {
    check_same(o);
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
    return *this;
  }
  Coords& operator-=(const Coords& o) {
    check_same(o);
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
    return *this;
  }
  Coords& operator*=(double s) {
    for (auto& e : v_) e *= s;
    return *this;
  }

  friend Coords operator+(Coords a, const Coords& b) { return a += b; }
  friend Coords operator-(Coords a, const Coords& b) { return a -= b; }
  friend Coords operator*(double s, Coords a) { return a *= s; }
  friend Coords operator*(Coords a, double s) { return a *= s; }
  friend Coords operator-(Coords a) { return a *= -1.0; }
  friend bool operator==(const Coords&, const Coords&) = default;

  bool all_finite() const noexcept;

 private:
  void check_same(const Coords& o) const {
    if (o.size() != size()) throw DimensionMismatch(size(), o.size());
  }

  std::vector<double> v_;
};

using Vector = Coords<PrimalTag>;
using DualVector = Coords<DualTag>;

/// Coordinate identification E -> E*. Only meaningful as a duality map in Hilbert space.
inline DualVector as_dual(const Vector& x) { return DualVector(x.raw()); }
/// Coordinate identification E* -> E.
inline Vector as_primal(const DualVector& x) { return Vector(x.raw()); }

/// The pairing <x, x*>.
double pairing(const Vector& x, const DualVector& xs);

/// Plain coordinate dot product of two vectors of the same kind.
template <class Tag>
double dot(const Coords<Tag>& a, const Coords<Tag>& b);

template <class Tag>
double euclidean_norm(const Coords<Tag>& a);

enum class NormFamily { euclidean, lp };

/// Coordinate model of E = (R^dim, ||.||_p), p in (1, 2].
///
/// `convexity_constant` is the c of the bound ||x - y|| <= (2/c^2)||Jx - Jy||;
/// the 2-uniform convexity constant is its reciprocal. For l_p we store
/// c = sqrt(p - 1), so 2/c^2 = 2/(p - 1).
class SpaceSpec {
 public:
  static SpaceSpec euclidean(std::size_t dim);
  static SpaceSpec lp(std::size_t dim, double p);

  std::size_t dim() const noexcept { return dim_; }
  NormFamily family() const noexcept { return family_; }
  bool is_euclidean() const noexcept { return family_ == NormFamily::euclidean; }
  double p() const noexcept { return p_; }
  /// Conjugate exponent q = p/(p-1); the dual norm is l_q.
  double q() const noexcept { return q_; }
  double convexity_constant() const noexcept { return c_; }
  double c_inv() const noexcept { return 1.0 / c_; }

  void check(const Vector& x) const;
  void check(const DualVector& x) const;

  friend bool operator==(const SpaceSpec&, const SpaceSpec&) = default;

 private:
  SpaceSpec(std::size_t dim, NormFamily family, double p);

  std::size_t dim_ = 1;
  NormFamily family_ = NormFamily::euclidean;
  double p_ = 2.0;
  double q_ = 2.0;
  double c_ = 1.0;
};

double norm(const SpaceSpec& space, const Vector& x);
double dual_norm(const SpaceSpec& space, const DualVector& xs);

/// Normalized duality map J. J0 = 0, and sgn(0) = 0 coordinatewise.
DualVector duality_map(const SpaceSpec& space, const Vector& x);

/// J^{-1}, computed as the duality map of the dual norm l_q.
Vector inverse_duality_map(const SpaceSpec& space, const DualVector& xs);

/// phi(x, y) = ||x||^2 - 2<x, Jy> + ||y||^2.
double lyapunov_phi(const SpaceSpec& space, const Vector& x, const Vector& y);

/// V(x, x*) = ||x||^2 - 2<x, x*> + ||x*||^2 = phi(x, J^{-1}x*).
double v_functional(const SpaceSpec& space, const Vector& x, const DualVector& xs);

}  // namespace bvi
