#include "bvi/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include <boost/math/tools/minima.hpp>
#include <spdlog/spdlog.h>

namespace bvi {

namespace {

constexpr std::size_t kSweepIterations = 2'000;
constexpr std::size_t kFbfIterations = 100'000;

const ProblemSpec& problem_of(const ResolventQuery& q) {
  if (q.problem == nullptr) throw Error("resolvent query without a problem");
  if (!(q.r > 0.0)) throw Error("resolvent parameter r must be positive");
  if (!q.problem->bifunction) throw Error("problem '" + q.problem->id + "' has no bifunction");
  q.problem->space.check(q.x);
  return *q.problem;
}

std::vector<Vector> residual_points(const SetSpec& set) {
  return structured_points(set, set.dim() == 1 ? 201 : 7);
}

// One sweep of the splitting. For a quadratic F with a >= 0 on a box the
// a-term is kept implicit: solve Jv + 2ra v = Jx - r(b u + Au) over the box.
Vector sweep(const ProblemSpec& p, double r, const DualVector& jx, const Vector& u) {
  const auto* quad = std::get_if<QuadraticBifunction>(&p.bifunction->kind);
  const auto* box = p.feasible.as<Box>();
  if (quad != nullptr && quad->a >= 0.0 && box != nullptr) {
    const DualVector t = jx - r * (as_dual(quad->b * u) + p.op(u));
    return solve_regularized_box(p.space, box->lo, box->hi, t, 2.0 * r * quad->a);
  }
  const DualVector t = jx - r * (p.bifunction->gradient_y(u, u) + p.op(u));
  return generalized_project(p.space, p.feasible, inverse_duality_map(p.space, t));
}

}  // namespace

double resolvent_expression(const ResolventQuery& q, const Vector& u, const Vector& y) {
  const ProblemSpec& p = *q.problem;
  const Vector d = y - u;
  const DualVector gap = duality_map(p.space, u) - duality_map(p.space, q.x);
  return (*p.bifunction)(u, y) + pairing(d, p.op(u)) + pairing(d, gap) / q.r;
}

double resolvent_residual(const ResolventQuery& q, const Vector& u) {
  problem_of(q);
  // Points close to u along each direction catch a wrong first-order term
  // that the coarse grid would miss.
  double worst = 0.0;
  for (const auto& y : residual_points(q.problem->feasible)) {
    worst = std::min(worst, resolvent_expression(q, u, y));
    for (double s : {1e-1, 1e-2, 1e-3, 1e-4}) {
      worst = std::min(worst, resolvent_expression(q, u, u + s * (y - u)));
    }
  }
  return worst;
}

bool has_closed_form(const ProblemSpec& p) {
  if (p.space.dim() != 1 || !p.space.is_euclidean() || !p.op.is_identity()) return false;
  if (!p.bifunction || p.feasible.as<Box>() == nullptr) return false;
  const auto* quad = std::get_if<QuadraticBifunction>(&p.bifunction->kind);
  return quad != nullptr && quad->a == 16.0 && quad->b == 9.0 && quad->c == -25.0;
}

namespace {

// Returns nullopt when the iteration stops without settling.
std::optional<Vector> damped_sweep(const ProblemSpec& p, const ResolventQuery& q) {
  const DualVector jx = duality_map(p.space, q.x);
  Vector u = euclidean_project(p.feasible, q.x);
  double theta = 0.5;
  double prev_change = std::numeric_limits<double>::infinity();
  int growth = 0;
  for (std::size_t k = 0; k < kSweepIterations; ++k) {
    const Vector next = (1.0 - theta) * u + theta * sweep(p, q.r, jx, u);
    const double change = euclidean_norm(next - u);
    u = next;
    if (!u.all_finite()) return std::nullopt;
    if (change <= 1e-15 * (1.0 + euclidean_norm(u))) return u;
    // Three consecutive non-decreases mean the damped map is not contracting.
    growth = change >= prev_change ? growth + 1 : 0;
    if (growth >= 3) {
      theta = std::max(theta * 0.5, 1e-4);
      growth = 0;
    }
    prev_change = change;
  }
  return std::nullopt;
}

// Forward-backward-forward with backtracking on the variational inequality
// <y - u, T(u)> >= 0, T(u) = grad_y F(u, u) + Au + (Ju - Jx)/r. Convexity of
// F(u, .) makes every solution a resolvent point.
Vector forward_backward_forward(const ProblemSpec& p, const ResolventQuery& q) {
  const DualVector jx = duality_map(p.space, q.x);
  auto T = [&](const Vector& u) {
    return p.bifunction->gradient_y(u, u) + p.op(u) + (1.0 / q.r) * (duality_map(p.space, u) - jx);
  };
  Vector u = euclidean_project(p.feasible, q.x);
  double t = q.r;
  for (std::size_t k = 0; k < kFbfIterations; ++k) {
    const DualVector tu = T(u);
    Vector y = euclidean_project(p.feasible, u - t * as_primal(tu));
    DualVector ty = T(y);
    while (t * euclidean_norm(ty - tu) > 0.9 * euclidean_norm(u - y) && t > 1e-12) {
      t *= 0.5;
      y = euclidean_project(p.feasible, u - t * as_primal(tu));
      ty = T(y);
    }
    const Vector next = euclidean_project(p.feasible, y - t * as_primal(ty - tu));
    const double change = euclidean_norm(next - u);
    u = next;
    if (!u.all_finite() || change <= 1e-15 * (1.0 + euclidean_norm(u))) break;
    t *= 1.25;
  }
  return u;
}

double certified(const ResolventQuery& q, const Vector& u) {
  return u.all_finite() ? resolvent_residual(q, u) : -std::numeric_limits<double>::infinity();
}

}  // namespace

Vector resolvent(const ResolventQuery& q, double tol) {
  const ProblemSpec& p = problem_of(q);

  if (has_closed_form(p)) {
    const Vector u{q.x[0] / (42.0 * q.r + 1.0)};
    if (contains(p.feasible, u, 0.0)) return u;
  }

  if (auto u = damped_sweep(p, q)) {
    if (certified(q, *u) >= -tol) return *u;
  }
  spdlog::debug("{}: splitting did not settle, switching to forward-backward-forward", p.id);
  Vector u = forward_backward_forward(p, q);
  const double res = certified(q, u);
  if (res < -tol) throw ResolventError("resolvent did not reach tolerance for '" + p.id + "'", res);
  return u;
}

Vector resolvent_oracle_1d(const ResolventQuery& q, std::size_t grid, double tol) {
  const ProblemSpec& p = problem_of(q);
  const auto* box = p.feasible.as<Box>();
  if (p.space.dim() != 1 || box == nullptr) throw UnsupportedError("resolvent oracle needs an interval in dim 1");
  if (grid < 3) throw Error("resolvent oracle needs at least 3 grid points");
  const double lo = box->lo[0];
  const double hi = box->hi[0];
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw UnsupportedError("resolvent oracle needs a bounded interval");

  auto expr = [&](double u, double y) { return resolvent_expression(q, Vector{u}, Vector{y}); };

  // y -> expr(u, y) is convex, so a coarse scan followed by Brent in the best
  // cell finds its minimum over [lo, hi].
  constexpr std::size_t kInner = 11;
  const double dy = (hi - lo) / (kInner - 1);
  auto h = [&](double u) {
    std::size_t best = 0;
    double best_val = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < kInner; ++j) {
      const double v = expr(u, lo + dy * static_cast<double>(j));
      if (v < best_val) {
        best_val = v;
        best = j;
      }
    }
    const double a = lo + dy * static_cast<double>(best == 0 ? 0 : best - 1);
    const double b = lo + dy * static_cast<double>(std::min(best + 1, kInner - 1));
    const auto m = boost::math::tools::brent_find_minima([&](double y) { return expr(u, y); }, a, b, 32);
    return std::min(best_val, m.second);
  };

  const double du = (hi - lo) / static_cast<double>(grid - 1);
  std::size_t best = 0;
  double best_h = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid; ++i) {
    const double hv = h(lo + du * static_cast<double>(i));
    if (hv > best_h) {
      best_h = hv;
      best = i;
    }
  }
  // h is concave (a minimum of functions concave in u); refine in the best cell.
  const double a = lo + du * static_cast<double>(best == 0 ? 0 : best - 1);
  const double b = lo + du * static_cast<double>(std::min(best + 1, grid - 1));
  const auto m = boost::math::tools::brent_find_minima([&](double u) { return -h(u); }, a, b, 50);
  double u = lo + du * static_cast<double>(best);
  if (-m.second >= best_h) {
    u = m.first;
    best_h = -m.second;
  }
  if (best_h < -tol) throw ResolventError("resolvent oracle found no admissible point at this resolution", best_h);
  spdlog::debug("resolvent oracle: u = {}, h(u) = {:.3g}", u, best_h);
  return Vector{u};
}

}  // namespace bvi
