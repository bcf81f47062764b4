#include "bvi/algorithms.hpp"

#include <algorithm>
#include <cmath>

#include <spdlog/spdlog.h>

#include "bvi/resolvent.hpp"

namespace bvi {

namespace {

constexpr double kMembershipTol = 1e-9;

void require_start(const ProblemSpec& p, const Vector& x0, const StopRule& stop) {
  stop.validate();
  p.space.check(x0);
  if (!contains(p.feasible, x0, kMembershipTol)) throw ConfigError("x0 lies outside the feasible set");
}

void require_euclidean(const ProblemSpec& p) {
  if (!p.space.is_euclidean()) throw UnsupportedError("algorithm requires euclidean space");
}

void check_schedule(const ProblemSpec& p, const ScheduleSet& s, std::size_t n_alpha) {
  for (const auto& w : validate_schedule(s, n_alpha, step_cap(p))) spdlog::warn("{}: {}", p.id, w);
}

std::optional<double> phi_to_solution(const ProblemSpec& p, const Vector& x) {
  if (!p.known_solution) return std::nullopt;
  return lyapunov_phi(p.space, *p.known_solution, x);
}

// Pi_C J^{-1}(t), recording the solver residual.
Vector project_dual(const ProblemSpec& p, const DualVector& t, double& residual) {
  const Projection pr = project(p.space, p.feasible, inverse_duality_map(p.space, t));
  residual = std::max(residual, pr.residual);
  return pr.point;
}

// Drives the shared loop: `step` fills a row from x_n and returns x_{n+1}.
template <class Step>
IterateTrace iterate(std::string name, const ProblemSpec& p, const Vector& x0, const StopRule& stop, Step&& step) {
  IterateTrace trace;
  trace.algorithm = std::move(name);
  Vector x = x0;
  trace.final_point = x;
  try {
    for (std::size_t n = 1; n <= stop.max_iter; ++n) {
      IterateRow row;
      row.n = n;
      row.x = x;
      row.phi = phi_to_solution(p, x);
      Vector next = step(n, x, row);
      if (!next.all_finite()) throw Error("iterate is not finite");
      row.step_norm = norm(p.space, next - x);
      row.xy_residual = norm(p.space, x - row.y);
      if (row.z) row.yz_residual = norm(p.space, row.y - *row.z);
      const bool done = row.step_norm <= stop.tol_step && row.xy_residual <= stop.tol_residual;
      trace.rows.push_back(std::move(row));
      x = std::move(next);
      trace.final_point = x;
      if (done) {
        trace.status = RunStatus::converged;
        return trace;
      }
    }
    trace.status = RunStatus::max_iter;
  } catch (const Error& e) {
    trace.status = RunStatus::error;
    trace.message = e.what();
    spdlog::error("{} on '{}' stopped at row {}: {}", trace.algorithm, p.id, trace.rows.size() + 1, e.what());
  }
  return trace;
}

const MapSpec& map_or_identity(const ProblemSpec& p, bool allow_identity) {
  static const MapSpec identity = MapSpec::identity();
  if (p.map) return *p.map;
  if (!allow_identity) throw ConfigError("problem '" + p.id + "' has no map f");
  spdlog::info("'{}' has no map f; using the identity", p.id);
  return identity;
}

}  // namespace

void StopRule::validate() const {
  if (!(tol_step > 0.0) || !(tol_residual > 0.0)) throw ConfigError("stop tolerances must be positive");
  if (max_iter < 1) throw ConfigError("max_iter must be at least 1");
}

std::string to_string(RunStatus s) {
  switch (s) {
    case RunStatus::converged:
      return "converged";
    case RunStatus::max_iter:
      return "max_iter";
    case RunStatus::error:
      return "error";
  }
  return "?";
}

IterateTrace run_algorithm1(const ProblemSpec& p, const ScheduleSet& s, const Vector& x0, const StopRule& stop,
                            bool identity_if_no_map) {
  require_start(p, x0, stop);
  check_schedule(p, s, 3);
  const MapSpec& f = map_or_identity(p, identity_if_no_map);
  const double cap = step_cap(p);
  const SpaceSpec& E = p.space;

  return iterate("alg1", p, x0, stop, [&](std::size_t n, const Vector& x, IterateRow& row) {
    const double lambda = s.lambda.at(n, cap);
    const DualVector jx = duality_map(E, x);
    double res = 0.0;
    const Vector y = project_dual(p, jx - lambda * p.op(x), res);
    const Vector z = inverse_duality_map(E, duality_map(E, y) - lambda * p.op(y));
    const DualVector mix =
        s.alpha[0].at(n) * jx + s.alpha[1].at(n) * duality_map(E, f(x)) + s.alpha[2].at(n) * duality_map(E, z);
    Vector next = project_dual(p, mix, res);
    row.y = y;
    row.z = z;
    row.lambda = lambda;
    row.projection_residual = res;
    return next;
  });
}

IterateTrace run_algorithm2(const ProblemSpec& p, const ScheduleSet& s, const Vector& x0, const StopRule& stop) {
  require_start(p, x0, stop);
  if (!p.bifunction) throw ConfigError("problem '" + p.id + "' has no bifunction");
  if (!p.map) throw ConfigError("problem '" + p.id + "' has no map f");
  check_schedule(p, s, 4);
  const MapSpec& f = *p.map;
  const double cap = step_cap(p);
  const SpaceSpec& E = p.space;

  return iterate("alg2", p, x0, stop, [&](std::size_t n, const Vector& x, IterateRow& row) {
    const double lambda = s.lambda.at(n, cap);
    const DualVector jx = duality_map(E, x);
    double res = 0.0;
    const Vector u = resolvent({&p, s.r, x});
    const Vector w = project_dual(p, duality_map(E, u) - lambda * p.op(u), res);
    const Vector y = project_dual(p, jx - lambda * p.op(x), res);
    const CutSet cut = cut_set(E, p.feasible, x, w);
    const Projection zp =
        project_onto_cut(E, cut, inverse_duality_map(E, duality_map(E, y) - lambda * p.op(y)));
    res = std::max(res, zp.residual);
    const Vector& z = zp.point;
    const DualVector mix = s.alpha[0].at(n) * jx + s.alpha[1].at(n) * duality_map(E, f(x)) +
                           s.alpha[2].at(n) * duality_map(E, z) + s.alpha[3].at(n) * duality_map(E, w);
    Vector next = project_dual(p, mix, res);
    row.y = y;
    row.z = z;
    row.w = w;
    row.u = u;
    row.lambda = lambda;
    row.projection_residual = res;
    row.cut_normal = cut.normal;
    row.cut_rhs = cut.rhs;
    return next;
  });
}

IterateTrace run_korpelevich(const ProblemSpec& p, double lambda, const Vector& x0, const StopRule& stop) {
  require_euclidean(p);
  require_start(p, x0, stop);
  if (!(lambda > 0.0)) throw ConfigError("step must be positive");

  return iterate("korpelevich", p, x0, stop, [&](std::size_t, const Vector& x, IterateRow& row) {
    row.y = euclidean_project(p.feasible, x - lambda * as_primal(p.op(x)));
    row.lambda = lambda;
    return euclidean_project(p.feasible, x - lambda * as_primal(p.op(row.y)));
  });
}

IterateTrace run_tseng(const ProblemSpec& p, double lambda, const Vector& x0, const StopRule& stop) {
  require_euclidean(p);
  require_start(p, x0, stop);
  if (!(lambda > 0.0)) throw ConfigError("step must be positive");
  const bool whole = p.op.lipschitz();

  return iterate("tseng", p, x0, stop, [&](std::size_t, const Vector& x, IterateRow& row) {
    const DualVector ax = p.op(x);
    row.y = euclidean_project(p.feasible, x - lambda * as_primal(ax));
    row.lambda = lambda;
    const Vector v = row.y - lambda * as_primal(p.op(row.y) - ax);
    return whole ? v : euclidean_project(p.feasible, v);
  });
}

bool thong_condition(const ProblemSpec& p, const Vector& x, double lambda, double mu) {
  const DualVector ax = p.op(x);
  const Vector y = euclidean_project(p.feasible, x - lambda * as_primal(ax));
  return lambda * euclidean_norm(ax - p.op(y)) <= mu * euclidean_norm(x - y);
}

IterateTrace run_thong(const ProblemSpec& p, const ThongParams& params, const Vector& x0, const StopRule& stop,
                       const std::optional<MapSpec>& f) {
  require_euclidean(p);
  require_start(p, x0, stop);
  if (!(params.gamma > 0.0)) throw ConfigError("gamma must be positive");
  if (!(params.l > 0.0 && params.l < 1.0)) throw ConfigError("l must lie in (0, 1)");
  if (!(params.mu > 0.0 && params.mu < 1.0)) throw ConfigError("mu must lie in (0, 1)");
  const MapSpec* map = f ? &*f : (p.map ? &*p.map : nullptr);
  if (map == nullptr) throw ConfigError("problem '" + p.id + "' has no map f");

  return iterate("thong", p, x0, stop, [&](std::size_t n, const Vector& x, IterateRow& row) {
    const DualVector ax = p.op(x);
    double lambda = params.gamma;
    std::size_t k = 0;
    Vector y = euclidean_project(p.feasible, x - lambda * as_primal(ax));
    DualVector ay = p.op(y);
    while (lambda * euclidean_norm(ax - ay) > params.mu * euclidean_norm(x - y)) {
      if (++k > params.max_backtracks) throw Error("line search exceeded the backtrack limit");
      lambda *= params.l;
      y = euclidean_project(p.feasible, x - lambda * as_primal(ax));
      ay = p.op(y);
    }
    const Vector z = y - lambda * as_primal(ay - ax);
    const double a = params.alpha.at(n);
    row.y = y;
    row.z = z;
    row.lambda = lambda;
    row.backtracks = k;
    return a * (*map)(x) + (1.0 - a) * z;
  });
}

}  // namespace bvi
