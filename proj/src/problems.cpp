#include "bvi/problems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <spdlog/spdlog.h>

namespace bvi {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Random samples of C plus its deterministic grid/corner points.
std::vector<Vector> points_of(const SetSpec& set, std::size_t n, std::mt19937_64& rng) {
  auto pts = structured_points(set, set.dim() == 1 ? 21 : 5);
  auto rnd = sample_points(set, n, rng);
  pts.insert(pts.end(), std::make_move_iterator(rnd.begin()), std::make_move_iterator(rnd.end()));
  return pts;
}

CheckReport make_report(std::string name) {
  CheckReport r;
  r.name = std::move(name);
  r.worst = std::numeric_limits<double>::infinity();
  return r;
}

void record(CheckReport& r, double margin, const Vector& at) {
  ++r.samples;
  if (margin < r.worst) {
    r.worst = margin;
    r.witness = at;
  }
}

void finish(CheckReport& r, double tol) {
  if (r.samples == 0) r.worst = 0.0;
  r.passed = r.worst >= -tol;
}

}  // namespace

// -- OperatorSpec ------------------------------------------------------------

OperatorSpec OperatorSpec::affine(std::vector<std::vector<double>> m, DualVector b, double alpha) {
  if (m.size() != b.size()) throw DimensionMismatch(b.size(), m.size());
  for (const auto& row : m) {
    if (row.size() != b.size()) throw DimensionMismatch(b.size(), row.size());
  }
  return {AffineOperator{std::move(m), std::move(b)}, alpha};
}

DualVector OperatorSpec::operator()(const Vector& x) const {
  return std::visit(Overloaded{
                        [&](const IdentityOperator&) { return as_dual(x); },
                        [&](const AffineOperator& a) {
                          if (a.offset.size() != x.size()) throw DimensionMismatch(a.offset.size(), x.size());
                          DualVector out = a.offset;
                          for (std::size_t i = 0; i < x.size(); ++i) {
                            for (std::size_t j = 0; j < x.size(); ++j) out[i] += a.matrix[i][j] * x[j];
                          }
                          return out;
                        },
                        [&](const CustomOperator& c) { return c.fn(x); },
                    },
                    kind);
}

bool OperatorSpec::lipschitz() const noexcept {
  if (const auto* c = std::get_if<CustomOperator>(&kind)) return c->lipschitz;
  return true;
}

bool OperatorSpec::is_identity() const noexcept { return std::holds_alternative<IdentityOperator>(kind); }

// -- BifunctionSpec ----------------------------------------------------------

double BifunctionSpec::operator()(const Vector& u, const Vector& y) const {
  return std::visit(Overloaded{
                        [](const ZeroBifunction&) { return 0.0; },
                        [&](const QuadraticBifunction& q) {
                          return q.a * dot(y, y) + q.b * dot(u, y) + q.c * dot(u, u);
                        },
                        [&](const CustomBifunction& c) { return c.fn(u, y); },
                    },
                    kind);
}

DualVector BifunctionSpec::gradient_y(const Vector& u, const Vector& y) const {
  return std::visit(Overloaded{
                        [&](const ZeroBifunction&) { return DualVector(y.size(), 0.0); },
                        [&](const QuadraticBifunction& q) { return as_dual(2.0 * q.a * y + q.b * u); },
                        [&](const CustomBifunction& c) {
                          DualVector g(y.size());
                          for (std::size_t i = 0; i < y.size(); ++i) {
                            const double h = 1e-6 * std::max(1.0, std::abs(y[i]));
                            Vector yp = y, ym = y;
                            yp[i] += h;
                            ym[i] -= h;
                            g[i] = (c.fn(u, yp) - c.fn(u, ym)) / (2.0 * h);
                          }
                          return g;
                        },
                    },
                    kind);
}

// -- MapSpec -----------------------------------------------------------------

MapSpec MapSpec::scaling(double k, std::size_t dim) {
  if (std::abs(k) > 1.0) throw Error("scaling map requires |k| <= 1");
  return {ScalingMap{k}, {Vector(dim, 0.0)}};
}

Vector MapSpec::operator()(const Vector& x) const {
  return std::visit(Overloaded{
                        [&](const IdentityMap&) { return x; },
                        [&](const ScalingMap& s) { return s.k * x; },
                        [&](const CustomMap& c) { return c.fn(x); },
                    },
                    kind);
}

// -- problem-level operations ------------------------------------------------

DualVector apply_operator(const ProblemSpec& p, const Vector& x) {
  p.space.check(x);
  if (!contains(p.feasible, x, 1e-9)) {
    spdlog::warn("operator of '{}' evaluated outside the feasible set (violation {:.3g})", p.id,
                 constraint_violation(p.feasible, x));
  }
  return p.op(x);
}

double step_cap(const ProblemSpec& p) {
  const double c = p.space.convexity_constant();
  return c * c * p.op.alpha / 2.0;
}

CheckReport verify_ism(const ProblemSpec& p, std::size_t n_samples, double tol, std::mt19937_64& rng) {
  if (n_samples == 0) throw Error("verify_ism needs at least one sample");
  auto r = make_report("inverse strong monotonicity");
  const auto pts = points_of(p.feasible, 2 * n_samples, rng);
  std::uniform_int_distribution<std::size_t> pick(0, pts.size() - 1);
  for (std::size_t k = 0; k < n_samples; ++k) {
    const Vector& x = pts[pick(rng)];
    const Vector& y = pts[pick(rng)];
    const DualVector d = p.op(x) - p.op(y);
    const double nd = dual_norm(p.space, d);
    record(r, pairing(x - y, d) - p.op.alpha * nd * nd, x);
  }
  finish(r, tol);
  return r;
}

CheckReport verify_norm_condition(const ProblemSpec& p, const Vector& u, std::size_t n_samples, double tol,
                                  std::mt19937_64& rng) {
  auto r = make_report("norm condition ||Ax|| <= ||Ax - Au||");
  const DualVector au = p.op(u);
  for (const auto& x : points_of(p.feasible, n_samples, rng)) {
    const DualVector ax = p.op(x);
    record(r, dual_norm(p.space, ax - au) - dual_norm(p.space, ax), x);
  }
  finish(r, tol);
  return r;
}

AxiomReport verify_bifunction_axioms(const BifunctionSpec& b, const SetSpec& set, std::size_t n_samples,
                                     double tol, std::mt19937_64& rng) {
  AxiomReport rep{make_report("(A1) F(x,x) = 0"), make_report("(A2) monotone"),
                  make_report("(A3) upper limit along segments"), make_report("(A4) convex in y")};
  const auto pts = points_of(set, 3 * n_samples, rng);
  std::uniform_int_distribution<std::size_t> pick(0, pts.size() - 1);
  auto scale = [](double v) { return std::max(1.0, std::abs(v)); };
  for (std::size_t k = 0; k < n_samples; ++k) {
    const Vector& x = pts[pick(rng)];
    const Vector& y = pts[pick(rng)];
    const Vector& z = pts[pick(rng)];

    record(rep.a1, -std::abs(b(x, x)), x);
    record(rep.a2, -(b(x, y) + b(y, x)) , x);

    // Richardson estimate of lim_{t->0+} F(tz + (1-t)x, y).
    const double fxy = b(x, y);
    const double t = 1e-6;
    const double f_t = b(t * z + (1.0 - t) * x, y);
    const double f_half = b(0.5 * t * z + (1.0 - 0.5 * t) * x, y);
    const double limit = 2.0 * f_half - f_t;
    record(rep.a3, (fxy - limit) / scale(fxy), x);

    const Vector mid = 0.5 * (y + z);
    const double avg = 0.5 * (b(x, y) + b(x, z));
    record(rep.a4, (avg - b(x, mid)) / scale(avg), x);
  }
  finish(rep.a1, tol);
  finish(rep.a2, tol);
  finish(rep.a3, tol);
  finish(rep.a4, tol);
  return rep;
}

CheckReport verify_vi_membership(const ProblemSpec& p, const Vector& q, double tol, std::size_t n_samples,
                                 std::mt19937_64& rng) {
  if (!contains(p.feasible, q, 1e-12)) throw Error("verify_vi_membership: q lies outside C");
  auto r = make_report("variational inequality membership");
  const DualVector aq = p.op(q);
  for (const auto& y : points_of(p.feasible, n_samples, rng)) record(r, pairing(y - q, aq), y);
  finish(r, tol);
  return r;
}

CheckReport verify_relative_nonexpansive(const ProblemSpec& p, std::size_t n_samples, double tol,
                                         std::mt19937_64& rng) {
  auto r = make_report("relative nonexpansiveness");
  if (!p.map) {
    finish(r, tol);
    return r;
  }
  const auto pts = points_of(p.feasible, n_samples, rng);
  for (const auto& fp : p.map->fixed_points) {
    for (const auto& x : pts) {
      record(r, lyapunov_phi(p.space, fp, x) - lyapunov_phi(p.space, fp, (*p.map)(x)), x);
    }
  }
  finish(r, tol);
  return r;
}

}  // namespace bvi
