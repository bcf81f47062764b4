#pragma once

// Closed convex sets, membership, and the generalized projection Pi_C.

#include <cstdint>
#include <optional>
#include <random>
#include <variant>
#include <vector>

#include "bvi/geometry.hpp"

namespace bvi {

class SetSpec;

struct Box {
  Vector lo;
  Vector hi;
};

/// Euclidean-norm ball.
struct Ball {
  Vector center;
  double radius = 1.0;
};

/// { v : <v, normal> <= offset }.
struct Halfspace {
  DualVector normal;
  double offset = 0.0;
};

struct WholeSpace {
  std::size_t dim = 1;
};

struct Intersection {
  std::vector<SetSpec> parts;
};

class SetSpec {
 public:
  using Kind = std::variant<Box, Ball, Halfspace, WholeSpace, Intersection>;

  static SetSpec box(Vector lo, Vector hi);
  static SetSpec interval(double lo, double hi);
  static SetSpec ball(Vector center, double radius);
  static SetSpec halfspace(DualVector normal, double offset);
  static SetSpec whole_space(std::size_t dim);
  /// Throws InfeasibleSet when a feasibility probe finds the parts disjoint.
  static SetSpec intersection(std::vector<SetSpec> parts);

  const Kind& kind() const noexcept { return kind_; }
  std::size_t dim() const;

  template <class T>
  const T* as() const noexcept {
    return std::get_if<T>(&kind_);
  }

 private:
  explicit SetSpec(Kind k) : kind_(std::move(k)) {}
  Kind kind_;
};

bool contains(const SetSpec& set, const Vector& x, double tol = 1e-10);

/// Largest violation of the set's defining inequalities at x (0 when inside).
double constraint_violation(const SetSpec& set, const Vector& x);

/// Axis-aligned bounding box, when the set is bounded by a box or ball component.
std::optional<Box> bounding_box(const SetSpec& set);

struct Projection {
  Vector point;
  /// Solver residual: constraint violation for direct solves; for the
  /// alternating scheme, the larger of the violation and the last cycle change.
  double residual = 0.0;
  std::size_t iterations = 0;
};

struct ProjectionOptions {
  std::size_t max_cycles = 10'000;
  double tol = 1e-10;
};

/// Pi_C x: the minimizer of phi(., x) over C.
Projection project(const SpaceSpec& space, const SetSpec& set, const Vector& x,
                   const ProjectionOptions& opts = {});

Vector generalized_project(const SpaceSpec& space, const SetSpec& set, const Vector& x);

/// Nearest point in the Euclidean metric, whatever the ambient space.
Vector euclidean_project(const SetSpec& set, const Vector& x);

/// max over `samples` of <y - z, Jx - Jz>; nonpositive iff z passes the
/// variational characterization of Pi_C x on those samples.
double characterization_residual(const SpaceSpec& space, const Vector& x, const Vector& z,
                                 const std::vector<Vector>& samples);

/// argmin over y in the box [lo, hi] (entries may be infinite) of
/// 1/2 ||y||^2 + mu/2 ||y||_2^2 - <t, y>. With mu = 0 this is Pi_box J^{-1} t.
Vector solve_regularized_box(const SpaceSpec& space, const Vector& lo, const Vector& hi,
                             const DualVector& t, double mu);

// Sampling ------------------------------------------------------------------

/// n points of the set: uniform in the bounding region when they land inside,
/// otherwise their Euclidean projections (boundary points).
std::vector<Vector> sample_points(const SetSpec& set, std::size_t n, std::mt19937_64& rng);

/// Deterministic grid (per_axis points per coordinate) over the bounding box,
/// plus its corners, restricted to the set. Empty when the set is unbounded.
std::vector<Vector> structured_points(const SetSpec& set, std::size_t per_axis);

// Cut set -------------------------------------------------------------------

/// C_n = { v in C : 2<v, Jx_n - Jw_n> <= ||x_n||^2 - ||w_n||^2 }.
struct CutSet {
  SetSpec base;
  DualVector normal;
  double rhs = 0.0;
};

CutSet cut_set(const SpaceSpec& space, const SetSpec& base, const Vector& x_n, const Vector& w_n);

bool contains(const CutSet& cut, const Vector& v, double tol = 1e-10);

/// Generalized projection onto C intersected with the cut halfspace. A zero
/// normal means C itself when rhs >= 0 and an empty set otherwise.
Projection project_onto_cut(const SpaceSpec& space, const CutSet& cut, const Vector& x,
                            const ProjectionOptions& opts = {});

}  // namespace bvi
