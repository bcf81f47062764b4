#pragma once

// Problem data: the operator A, the bifunction F, the map f, and sampling
// checks of the standing assumptions placed on them.

#include <functional>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "bvi/geometry.hpp"
#include "bvi/sets.hpp"

namespace bvi {

// -- operator A : C -> E* ----------------------------------------------------

struct IdentityOperator {};

/// Ax = M x + b, M row-major dim x dim.
struct AffineOperator {
  std::vector<std::vector<double>> matrix;
  DualVector offset;
};

struct CustomOperator {
  std::function<DualVector(const Vector&)> fn;
  bool lipschitz = true;
};

struct OperatorSpec {
  std::variant<IdentityOperator, AffineOperator, CustomOperator> kind;
  /// Claimed inverse-strong-monotonicity modulus.
  double alpha = 1.0;

  DualVector operator()(const Vector& x) const;
  bool lipschitz() const noexcept;
  bool is_identity() const noexcept;

  static OperatorSpec identity(double alpha = 1.0) { return {IdentityOperator{}, alpha}; }
  static OperatorSpec affine(std::vector<std::vector<double>> m, DualVector b, double alpha);
};

// -- bifunction F : C x C -> R -----------------------------------------------

struct ZeroBifunction {};

/// F(u, y) = a <y,y> + b <u,y> + c <u,u> (coordinate products; scalars in dim 1).
struct QuadraticBifunction {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

struct CustomBifunction {
  std::function<double(const Vector& u, const Vector& y)> fn;
};

struct BifunctionSpec {
  std::variant<ZeroBifunction, QuadraticBifunction, CustomBifunction> kind;

  double operator()(const Vector& u, const Vector& y) const;
  /// Gradient of y -> F(u, y); central differences for custom bifunctions.
  DualVector gradient_y(const Vector& u, const Vector& y) const;

  static BifunctionSpec zero() { return {ZeroBifunction{}}; }
  static BifunctionSpec quadratic(double a, double b, double c) { return {QuadraticBifunction{a, b, c}}; }
};

// -- map f : C -> C ----------------------------------------------------------

struct IdentityMap {};
struct ScalingMap {
  double k = 1.0;
};
struct CustomMap {
  std::function<Vector(const Vector&)> fn;
};

struct MapSpec {
  std::variant<IdentityMap, ScalingMap, CustomMap> kind;
  /// F(f), supplied as data. The asymptotic fixed-point set is assumed equal.
  std::vector<Vector> fixed_points;

  Vector operator()(const Vector& x) const;

  static MapSpec identity() { return {IdentityMap{}, {}}; }
  /// Throws when |k| > 1. The fixed point 0 is recorded.
  static MapSpec scaling(double k, std::size_t dim);
};

// -- problem -----------------------------------------------------------------

struct ProblemSpec {
  std::string id;
  std::string description;
  SpaceSpec space = SpaceSpec::euclidean(1);
  SetSpec feasible = SetSpec::whole_space(1);
  OperatorSpec op;
  std::optional<BifunctionSpec> bifunction;
  std::optional<MapSpec> map;
  /// A point of VI(C,A) ∩ F(f) (and GEP when a bifunction is present).
  std::optional<Vector> known_solution;
  /// Resolvent parameter r_n used by the second algorithm by default.
  double resolvent_r = 1.0;
  /// True when resolvent_r was read off the example rather than stated.
  bool resolvent_r_inferred = false;
  /// False for deliberately broken problems kept to exercise the validators.
  bool admissible = true;
};

/// Ax in dual coordinates. Logs a warning (does not fail) when x is outside C.
DualVector apply_operator(const ProblemSpec& p, const Vector& x);

/// c^2 alpha / 2: the step-size cap for the Banach-space algorithms.
double step_cap(const ProblemSpec& p);

struct CheckReport {
  std::string name;
  bool passed = false;
  /// Smallest sampled margin; the check passes when worst >= -tol.
  double worst = 0.0;
  std::size_t samples = 0;
  std::optional<Vector> witness;
};

struct AxiomReport {
  CheckReport a1, a2, a3, a4;
  bool passed() const noexcept { return a1.passed && a2.passed && a3.passed && a4.passed; }
};

/// Worst of <x-y, Ax-Ay> - alpha ||Ax-Ay||_*^2 over sampled pairs in C.
CheckReport verify_ism(const ProblemSpec& p, std::size_t n_samples, double tol, std::mt19937_64& rng);

/// Worst of ||Ax - Au||_* - ||Ax||_* over sampled x in C.
CheckReport verify_norm_condition(const ProblemSpec& p, const Vector& u, std::size_t n_samples,
                                  double tol, std::mt19937_64& rng);

/// (A1) F(x,x)=0, (A2) F(x,y)+F(y,x)<=0, (A3) upper limit along segments,
/// (A4) midpoint convexity in y.
AxiomReport verify_bifunction_axioms(const BifunctionSpec& b, const SetSpec& set, std::size_t n_samples,
                                     double tol, std::mt19937_64& rng);

/// min over sampled y in C of <Aq, y - q>. Throws when q is outside C.
CheckReport verify_vi_membership(const ProblemSpec& p, const Vector& q, double tol, std::size_t n_samples,
                                 std::mt19937_64& rng);

/// Worst of phi(p, x) - phi(p, f(x)) over sampled x and the map's fixed points p.
CheckReport verify_relative_nonexpansive(const ProblemSpec& p, std::size_t n_samples, double tol,
                                         std::mt19937_64& rng);

}  // namespace bvi
