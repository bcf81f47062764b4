#include "bvi/sets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "roots.hpp"

namespace bvi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double clamp(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

bool is_zero(const DualVector& v) {
  return std::all_of(v.begin(), v.end(), [](double e) { return e == 0.0; });
}

void check_dim(const SetSpec& set, const Vector& x) {
  if (set.dim() != x.size()) throw DimensionMismatch(set.dim(), x.size());
}

// Leaves of an intersection tree, whole-space parts dropped, boxes merged.
std::vector<SetSpec> flatten(const SetSpec& set) {
  std::vector<SetSpec> leaves;
  std::optional<Box> merged;
  auto visit = [&](auto&& self, const SetSpec& s) -> void {
    if (const auto* in = s.as<Intersection>()) {
      for (const auto& part : in->parts) self(self, part);
    } else if (s.as<WholeSpace>()) {
      return;
    } else if (const auto* b = s.as<Box>()) {
      if (!merged) {
        merged = *b;
      } else {
        for (std::size_t i = 0; i < b->lo.size(); ++i) {
          merged->lo[i] = std::max(merged->lo[i], b->lo[i]);
          merged->hi[i] = std::min(merged->hi[i], b->hi[i]);
        }
      }
    } else {
      leaves.push_back(s);
    }
  };
  visit(visit, set);
  if (merged) {
    for (std::size_t i = 0; i < merged->lo.size(); ++i) {
      if (merged->lo[i] > merged->hi[i]) throw InfeasibleSet("intersection of boxes is empty");
    }
    leaves.insert(leaves.begin(), SetSpec::box(merged->lo, merged->hi));
  }
  return leaves;
}

// -- single-set generalized projections --------------------------------------

Vector project_box(const SpaceSpec& space, const Box& box, const Vector& x) {
  bool inside = true;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < box.lo[i] || x[i] > box.hi[i]) inside = false;
  }
  if (inside) return x;
  if (space.is_euclidean()) {
    Vector z = x;
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = clamp(z[i], box.lo[i], box.hi[i]);
    return z;
  }
  return solve_regularized_box(space, box.lo, box.hi, duality_map(space, x), 0.0);
}

Vector project_halfspace(const SpaceSpec& space, const Halfspace& hs, const Vector& x) {
  const double excess = pairing(x, hs.normal) - hs.offset;
  if (excess <= 0.0) return x;
  if (is_zero(hs.normal)) throw InfeasibleSet("halfspace with zero normal and negative offset is empty");
  if (space.is_euclidean()) {
    const double nn = dot(hs.normal, hs.normal);
    return x - (excess / nn) * as_primal(hs.normal);
  }
  // <J^{-1}(Jx - mu a), a> is nonincreasing in mu (monotonicity of J^{-1}).
  const DualVector jx = duality_map(space, x);
  auto point = [&](double mu) { return inverse_duality_map(space, jx - mu * hs.normal); };
  auto h = [&](double mu) { return pairing(point(mu), hs.normal) - hs.offset; };
  const double start = excess / std::max(dot(hs.normal, hs.normal), 1e-300);
  const double hi = detail::expand_upper(h, start);
  if (hi < 0.0) throw ProjectionError("halfspace projection: multiplier bracket failed", excess);
  const auto bracket = detail::bracketed_root(h, 0.0, hi);
  return point(bracket.second);
}

Vector project_ball(const SpaceSpec& space, const Ball& ball, const Vector& x) {
  const Vector d = x - ball.center;
  const double dist = euclidean_norm(d);
  if (dist <= ball.radius) return x;
  if (space.is_euclidean()) return ball.center + (ball.radius / dist) * d;
  // KKT: Jz + mu z = Jx + mu c; ||z(mu) - c||_2 is nonincreasing in mu.
  const Vector lo(x.size(), -kInf);
  const Vector hi(x.size(), kInf);
  const DualVector jx = duality_map(space, x);
  auto point = [&](double mu) {
    return solve_regularized_box(space, lo, hi, jx + mu * as_dual(ball.center), mu);
  };
  auto g = [&](double mu) { return euclidean_norm(point(mu) - ball.center) - ball.radius; };
  const double mu_hi = detail::expand_upper(g, 1.0);
  if (mu_hi < 0.0) throw ProjectionError("ball projection: multiplier bracket failed", dist - ball.radius);
  const auto bracket = detail::bracketed_root(g, 0.0, mu_hi);
  return point(bracket.second);
}

Vector project_leaf(const SpaceSpec& space, const SetSpec& leaf, const Vector& x) {
  return std::visit(Overloaded{
                        [&](const Box& b) { return project_box(space, b, x); },
                        [&](const Ball& b) { return project_ball(space, b, x); },
                        [&](const Halfspace& h) { return project_halfspace(space, h, x); },
                        [&](const WholeSpace&) { return x; },
                        [&](const Intersection&) -> Vector {
                          throw Error("internal: intersection passed as a leaf");
                        },
                    },
                    leaf.kind());
}

// Exact solve for box ∩ halfspace: z(mu) = Pi_box J^{-1}(Jx - mu a) with a
// single multiplier; <a, z(mu)> is nonincreasing in mu.
Vector project_box_halfspace(const SpaceSpec& space, const Box& box, const Halfspace& hs,
                             const Vector& x) {
  const Vector z0 = project_box(space, box, x);
  if (pairing(z0, hs.normal) <= hs.offset) return z0;
  if (is_zero(hs.normal)) throw InfeasibleSet("cut with zero normal and negative offset is empty");

  double min_over_box = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    min_over_box += std::min(hs.normal[i] * box.lo[i], hs.normal[i] * box.hi[i]);
  }
  if (min_over_box > hs.offset) throw InfeasibleSet("box and halfspace do not intersect");

  const DualVector jx = duality_map(space, x);
  auto point = [&](double mu) {
    if (space.is_euclidean()) return project_box(space, box, x - mu * as_primal(hs.normal));
    return solve_regularized_box(space, box.lo, box.hi, jx - mu * hs.normal, 0.0);
  };
  auto h = [&](double mu) { return pairing(point(mu), hs.normal) - hs.offset; };
  const double start = (pairing(z0, hs.normal) - hs.offset) / std::max(dot(hs.normal, hs.normal), 1e-300);
  const double hi = detail::expand_upper(h, start);
  if (hi < 0.0) {
    // The halfspace only touches the box; the minimizing face is the answer.
    throw ProjectionError("box/halfspace projection: multiplier bracket failed", h(start));
  }
  const auto bracket = detail::bracketed_root(h, 0.0, hi);
  return point(bracket.second);
}

// Dykstra's scheme with Bregman projections; the correction terms live in E*.
Projection dykstra(const SpaceSpec& space, const std::vector<SetSpec>& leaves, const Vector& x,
                   const ProjectionOptions& opts) {
  auto violation = [&](const Vector& v) {
    double worst = 0.0;
    for (const auto& l : leaves) worst = std::max(worst, constraint_violation(l, v));
    return worst;
  };
  if (violation(x) == 0.0) return {x, 0.0, 0};

  std::vector<DualVector> corr(leaves.size(), DualVector(x.size(), 0.0));
  Vector cur = x;
  double change = kInf;
  for (std::size_t cycle = 1; cycle <= opts.max_cycles; ++cycle) {
    const Vector start = cur;
    double corr_change = 0.0;
    for (std::size_t i = 0; i < leaves.size(); ++i) {
      const DualVector jc = duality_map(space, cur);
      const DualVector target = jc + corr[i];
      const Vector next = project_leaf(space, leaves[i], inverse_duality_map(space, target));
      DualVector updated = target - duality_map(space, next);
      corr_change = std::max(corr_change, euclidean_norm(updated - corr[i]));
      corr[i] = std::move(updated);
      cur = next;
    }
    // The point can stall for a cycle while the corrections still move.
    change = std::max(euclidean_norm(cur - start), corr_change);
    const double viol = violation(cur);
    if (change <= opts.tol * (1.0 + euclidean_norm(cur)) && viol <= opts.tol) {
      return {cur, std::max(viol, change), cycle};
    }
  }
  throw ProjectionError("alternating projection did not converge", std::max(violation(cur), change));
}

Projection project_leaves(const SpaceSpec& space, const std::vector<SetSpec>& leaves, const Vector& x,
                          const ProjectionOptions& opts) {
  if (leaves.empty()) return {x, 0.0, 0};
  if (leaves.size() == 1) {
    Vector z = project_leaf(space, leaves[0], x);
    const double r = constraint_violation(leaves[0], z);
    return {std::move(z), r, 1};
  }
  if (leaves.size() == 2) {
    const Box* box = leaves[0].as<Box>();
    const Halfspace* hs = leaves[1].as<Halfspace>();
    if (!box) {
      box = leaves[1].as<Box>();
      hs = leaves[0].as<Halfspace>();
    }
    if (box && hs) {
      Vector z = project_box_halfspace(space, *box, *hs, x);
      const double r = std::max(constraint_violation(leaves[0], z), constraint_violation(leaves[1], z));
      return {std::move(z), r, 1};
    }
  }
  return dykstra(space, leaves, x, opts);
}

}  // namespace

// -- SetSpec -----------------------------------------------------------------

SetSpec SetSpec::box(Vector lo, Vector hi) {
  if (lo.size() != hi.size()) throw DimensionMismatch(lo.size(), hi.size());
  if (lo.size() == 0) throw Error("box must have positive dimension");
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (!(lo[i] <= hi[i])) throw InfeasibleSet("box requires lo <= hi componentwise");
  }
  return SetSpec(Box{std::move(lo), std::move(hi)});
}

SetSpec SetSpec::interval(double lo, double hi) { return box(Vector{lo}, Vector{hi}); }

SetSpec SetSpec::ball(Vector center, double radius) {
  if (!(radius > 0.0)) throw InfeasibleSet("ball radius must be positive");
  if (center.size() == 0) throw Error("ball must have positive dimension");
  return SetSpec(Ball{std::move(center), radius});
}

SetSpec SetSpec::halfspace(DualVector normal, double offset) {
  if (normal.size() == 0) throw Error("halfspace must have positive dimension");
  if (is_zero(normal) && offset < 0.0) throw InfeasibleSet("halfspace with zero normal and negative offset");
  return SetSpec(Halfspace{std::move(normal), offset});
}

SetSpec SetSpec::whole_space(std::size_t dim) {
  if (dim == 0) throw Error("whole space must have positive dimension");
  return SetSpec(WholeSpace{dim});
}

SetSpec SetSpec::intersection(std::vector<SetSpec> parts) {
  if (parts.empty()) throw Error("intersection needs at least one part");
  const std::size_t d = parts.front().dim();
  for (const auto& p : parts) {
    if (p.dim() != d) throw DimensionMismatch(d, p.dim());
  }
  SetSpec set(Intersection{std::move(parts)});
  // Feasibility probe: the Euclidean nearest point to the bounding-box centre
  // (or the origin) must land in every part.
  Vector probe(d, 0.0);
  if (auto bb = bounding_box(set)) probe = 0.5 * (bb->lo + bb->hi);
  try {
    const auto leaves = flatten(set);
    const auto proj = project_leaves(SpaceSpec::euclidean(d), leaves, probe, {});
    if (constraint_violation(set, proj.point) > 1e-6) throw InfeasibleSet("intersection is empty");
  } catch (const InfeasibleSet&) {
    throw;
  } catch (const Error& e) {
    throw InfeasibleSet(std::string("intersection feasibility probe failed: ") + e.what());
  }
  return set;
}

std::size_t SetSpec::dim() const {
  return std::visit(Overloaded{
                        [](const Box& b) { return b.lo.size(); },
                        [](const Ball& b) { return b.center.size(); },
                        [](const Halfspace& h) { return h.normal.size(); },
                        [](const WholeSpace& w) { return w.dim; },
                        [](const Intersection& in) { return in.parts.front().dim(); },
                    },
                    kind_);
}

double constraint_violation(const SetSpec& set, const Vector& x) {
  check_dim(set, x);
  return std::visit(Overloaded{
                        [&](const Box& b) {
                          double worst = 0.0;
                          for (std::size_t i = 0; i < x.size(); ++i) {
                            worst = std::max({worst, b.lo[i] - x[i], x[i] - b.hi[i]});
                          }
                          return worst;
                        },
                        [&](const Ball& b) {
                          return std::max(0.0, euclidean_norm(x - b.center) - b.radius);
                        },
                        [&](const Halfspace& h) { return std::max(0.0, pairing(x, h.normal) - h.offset); },
                        [&](const WholeSpace&) { return 0.0; },
                        [&](const Intersection& in) {
                          double worst = 0.0;
                          for (const auto& p : in.parts) worst = std::max(worst, constraint_violation(p, x));
                          return worst;
                        },
                    },
                    set.kind());
}

bool contains(const SetSpec& set, const Vector& x, double tol) {
  return constraint_violation(set, x) <= tol;
}

std::optional<Box> bounding_box(const SetSpec& set) {
  return std::visit(Overloaded{
                        [](const Box& b) -> std::optional<Box> { return b; },
                        [](const Ball& b) -> std::optional<Box> {
                          const Vector r(b.center.size(), b.radius);
                          return Box{b.center - r, b.center + r};
                        },
                        [](const Halfspace&) -> std::optional<Box> { return std::nullopt; },
                        [](const WholeSpace&) -> std::optional<Box> { return std::nullopt; },
                        [](const Intersection& in) -> std::optional<Box> {
                          std::optional<Box> acc;
                          for (const auto& p : in.parts) {
                            auto bb = bounding_box(p);
                            if (!bb) continue;
                            if (!acc) {
                              acc = std::move(bb);
                              continue;
                            }
                            for (std::size_t i = 0; i < acc->lo.size(); ++i) {
                              acc->lo[i] = std::max(acc->lo[i], bb->lo[i]);
                              acc->hi[i] = std::min(acc->hi[i], bb->hi[i]);
                            }
                          }
                          return acc;
                        },
                    },
                    set.kind());
}

// -- projections -------------------------------------------------------------

Vector solve_regularized_box(const SpaceSpec& space, const Vector& lo, const Vector& hi,
                             const DualVector& t, double mu) {
  space.check(t);
  const std::size_t n = t.size();
  const double p = space.p();
  if (p == 2.0) {
    Vector y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = clamp(t[i] / (1.0 + mu), lo[i], hi[i]);
    return y;
  }
  const bool unbounded = std::all_of(lo.begin(), lo.end(), [](double v) { return v == -kInf; }) &&
                         std::all_of(hi.begin(), hi.end(), [](double v) { return v == kInf; });
  if (mu == 0.0 && unbounded) return inverse_duality_map(space, t);

  // For a fixed value s of ||y||, coordinate i solves
  //   s^{2-p} |y_i|^{p-1} sgn(y_i) + mu y_i = t_i,
  // increasing in y_i, so the box constraint is a clamp. ||y(s)|| is
  // nonincreasing in s and the answer is its fixed point.
  auto magnitude = [&](double s, double ti) {
    const double a = std::abs(ti);
    if (a == 0.0) return 0.0;
    const double w = std::pow(s, 2.0 - p);
    if (mu == 0.0) return std::pow(a / w, 1.0 / (p - 1.0));
    auto g = [&](double m) { return a - (w * std::pow(m, p - 1.0) + mu * m); };
    return detail::bracketed_root(g, 0.0, a / mu).second;
  };
  auto at = [&](double s) {
    Vector y(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double m = magnitude(s, t[i]);
      y[i] = clamp(t[i] >= 0.0 ? m : -m, lo[i], hi[i]);
    }
    return y;
  };
  // Limit s -> 0+.
  Vector y0(n);
  for (std::size_t i = 0; i < n; ++i) {
    double m = 0.0;
    if (t[i] != 0.0) m = mu > 0.0 ? std::abs(t[i]) / mu : kInf;
    y0[i] = clamp(t[i] >= 0.0 ? m : -m, lo[i], hi[i]);
  }
  if (std::all_of(y0.begin(), y0.end(), [](double v) { return v == 0.0; })) return y0;

  auto gap = [&](double s) { return norm(space, at(s)) - s; };
  double s_hi = y0.all_finite() ? norm(space, y0) : detail::expand_upper(gap, 1.0);
  if (s_hi <= 0.0) throw ProjectionError("regularized box solve: norm bracket failed", 0.0);
  double s_lo = s_hi;
  for (int k = 0; k < 100; ++k) {
    s_lo *= 1e-3;
    if (gap(s_lo) > 0.0) break;
    if (s_lo < 1e-280) return at(s_lo);
  }
  const auto bracket = detail::bracketed_root(gap, s_lo, s_hi);
  return at(0.5 * (bracket.first + bracket.second));
}

Projection project(const SpaceSpec& space, const SetSpec& set, const Vector& x,
                   const ProjectionOptions& opts) {
  space.check(x);
  check_dim(set, x);
  if (set.as<Intersection>()) return project_leaves(space, flatten(set), x, opts);
  Vector z = project_leaf(space, set, x);
  const double r = constraint_violation(set, z);
  return {std::move(z), r, 1};
}

Vector generalized_project(const SpaceSpec& space, const SetSpec& set, const Vector& x) {
  return project(space, set, x).point;
}

Vector euclidean_project(const SetSpec& set, const Vector& x) {
  return generalized_project(SpaceSpec::euclidean(x.size()), set, x);
}

double characterization_residual(const SpaceSpec& space, const Vector& x, const Vector& z,
                                 const std::vector<Vector>& samples) {
  const DualVector diff = duality_map(space, x) - duality_map(space, z);
  double worst = -kInf;
  for (const auto& y : samples) worst = std::max(worst, pairing(y - z, diff));
  return worst;
}

// -- sampling ----------------------------------------------------------------

std::vector<Vector> sample_points(const SetSpec& set, std::size_t n, std::mt19937_64& rng) {
  const std::size_t d = set.dim();
  Box region{Vector(d, -10.0), Vector(d, 10.0)};
  if (auto bb = bounding_box(set)) region = *bb;
  std::vector<Vector> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    Vector v(d);
    for (std::size_t i = 0; i < d; ++i) {
      std::uniform_real_distribution<double> u(region.lo[i], region.hi[i]);
      v[i] = u(rng);
    }
    if (!contains(set, v, 0.0)) v = euclidean_project(set, v);
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<Vector> structured_points(const SetSpec& set, std::size_t per_axis) {
  auto bb = bounding_box(set);
  if (!bb) return {};
  const std::size_t d = set.dim();
  per_axis = std::max<std::size_t>(per_axis, 2);
  while (d > 1 && std::pow(static_cast<double>(per_axis), static_cast<double>(d)) > 20000.0 && per_axis > 2) {
    --per_axis;
  }
  std::vector<std::size_t> idx(d, 0);
  std::vector<Vector> out;
  while (true) {
    Vector v(d);
    for (std::size_t i = 0; i < d; ++i) {
      const double frac = static_cast<double>(idx[i]) / static_cast<double>(per_axis - 1);
      v[i] = bb->lo[i] + frac * (bb->hi[i] - bb->lo[i]);
    }
    if (contains(set, v, 1e-12)) out.push_back(std::move(v));
    std::size_t i = 0;
    while (i < d && ++idx[i] == per_axis) idx[i++] = 0;
    if (i == d) break;
  }
  return out;
}

// -- cut set -----------------------------------------------------------------

CutSet cut_set(const SpaceSpec& space, const SetSpec& base, const Vector& x_n, const Vector& w_n) {
  space.check(x_n);
  space.check(w_n);
  const double nx = norm(space, x_n);
  const double nw = norm(space, w_n);
  return CutSet{base, duality_map(space, x_n) - duality_map(space, w_n), 0.5 * (nx * nx - nw * nw)};
}

bool contains(const CutSet& cut, const Vector& v, double tol) {
  // 2<v, Jx - Jw> - (||x||^2 - ||w||^2) equals phi(v, w) - phi(v, x).
  return contains(cut.base, v, tol) && 2.0 * (pairing(v, cut.normal) - cut.rhs) <= tol;
}

Projection project_onto_cut(const SpaceSpec& space, const CutSet& cut, const Vector& x,
                            const ProjectionOptions& opts) {
  space.check(x);
  if (is_zero(cut.normal)) {
    if (cut.rhs < 0.0) throw InfeasibleSet("cut set is empty: zero normal with negative right-hand side");
    return project(space, cut.base, x, opts);
  }
  auto leaves = flatten(cut.base);
  leaves.push_back(SetSpec::halfspace(cut.normal, cut.rhs));
  return project_leaves(space, leaves, x, opts);
}

}  // namespace bvi
