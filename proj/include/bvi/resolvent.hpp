#pragma once

// The equilibrium resolvent K_r: for x in E, the u in C with
//   F(u,y) + <Au, y-u> + (1/r)<y-u, Ju-Jx> >= 0   for all y in C.

#include <cstddef>
#include <vector>

#include "bvi/problems.hpp"

namespace bvi {

struct ResolventQuery {
  const ProblemSpec* problem = nullptr;
  double r = 1.0;
  Vector x;
};

/// The defining expression F(u,y) + <Au, y-u> + (1/r)<y-u, Ju-Jx>.
double resolvent_expression(const ResolventQuery& q, const Vector& u, const Vector& y);

/// min of the defining expression over the structured points of C (grid and
/// corners). Nonnegative up to rounding at u = K_r x.
double resolvent_residual(const ResolventQuery& q, const Vector& u);

/// K_r x. The scalar case with F = 16y^2 + 9uy - 25u^2 and A = I uses
/// u = x/(42r + 1); everything else runs a damped fixed-point iteration on
///   u = Pi_C J^{-1}(Jx - r(grad_y F(u,u) + Au)).
/// Throws ResolventError if the result's residual is below -tol.
Vector resolvent(const ResolventQuery& q, double tol = 1e-8);

/// Brute-force scalar resolvent: maximizes h(u) = min_y expression(u, y) over a
/// grid of C, then refines around the best cell. Needs dim 1 and an interval C.
Vector resolvent_oracle_1d(const ResolventQuery& q, std::size_t grid = 10'001, double tol = 1e-6);

/// True when the closed form x/(42r+1) applies to the query's problem.
bool has_closed_form(const ProblemSpec& p);

}  // namespace bvi
