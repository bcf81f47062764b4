#pragma once

// Bracketed scalar root finding for the monotone equations that show up in
// the projection and resolvent solvers.

#include <cmath>
#include <cstdint>
#include <utility>

#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

namespace bvi::detail {

/// Root of a continuous nonincreasing f on [lo, hi] with f(lo) >= 0 >= f(hi).
/// Returns the final bracket; `second` is on the f <= 0 side.
template <class F>
std::pair<double, double> bracketed_root(F&& f, double lo, double hi) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return {lo, lo};
  if (fhi == 0.0) return {hi, hi};
  if (!(flo > 0.0 && fhi < 0.0)) return {lo, hi};
  std::uintmax_t max_iter = 200;
  auto tol = boost::math::tools::eps_tolerance<double>(52);
  auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, max_iter);
  // toms748 does not say which end is which; put the f <= 0 end second.
  if (f(r.second) <= 0.0) return r;
  if (f(r.first) <= 0.0) return {r.second, r.first};
  return r;
}

/// Doubles `hi` from `start` until f(hi) <= 0. Returns nullopt-like -1 on failure.
template <class F>
double expand_upper(F&& f, double start, int max_doublings = 200) {
  double hi = start;
  for (int k = 0; k < max_doublings; ++k) {
    if (f(hi) <= 0.0) return hi;
    hi *= 2.0;
  }
  return -1.0;
}

}  // namespace bvi::detail
