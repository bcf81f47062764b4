#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "bvi/algorithms.hpp"
#include "bvi/registry.hpp"
#include "../support/oracles.hpp"

using namespace bvi;

namespace {

StopRule run_for(std::size_t n) { return {1e-300, 1e-300, n}; }

ScheduleSet strict_alg2() {
  auto s = default_schedule_alg2(1.0 / 42.0);
  s.lambda = StepRule::harmonic();
  return s;
}

}  // namespace

TEST_CASE("algorithm 1: one step by hand") {
  const auto& ex = find_problem("example-4-1");
  auto s = default_schedule_alg1();
  s.lambda = StepRule::harmonic();
  const auto t = run_algorithm1(ex, s, Vector{3.0}, run_for(1));
  REQUIRE(t.rows.size() == 1);
  CHECK(t.rows[0].y[0] == 0.0);
  CHECK((*t.rows[0].z)[0] == 0.0);
  CHECK(t.final_point[0] == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("algorithm 1 follows its scalar recursion on the worked example") {
  const auto& ex = find_problem("example-4-1");
  const auto s = default_schedule_alg1();
  const auto t = run_algorithm1(ex, s, Vector{5.0}, run_for(100));
  double x = 5.0;
  for (const auto& row : t.rows) {
    const double lambda = std::min(1.0 / row.n, 0.99 * 0.5);
    CHECK(std::abs(row.x[0] - x) <= 1e-12);
    const double y = std::clamp((1.0 - lambda) * x, -5.0, 5.0);
    const double z = (1.0 - lambda) * y;
    x = std::clamp((x + x / 3.0 + z) / 3.0, -5.0, 5.0);
  }
  CHECK(std::abs(t.final_point[0]) < 1e-10);
}

TEST_CASE("fixed points are kept") {
  for (const auto& p : all_problems()) {
    if (!p.admissible || !p.known_solution) continue;
    CAPTURE(p.id);
    const auto t1 = run_algorithm1(p, default_schedule_alg1(), *p.known_solution, {});
    CHECK(t1.status == RunStatus::converged);
    CHECK(t1.rows.size() == 1);
    if (p.bifunction) {
      const auto t2 = run_algorithm2(p, default_schedule_alg2(p.resolvent_r), *p.known_solution, {});
      CHECK(t2.status == RunStatus::converged);
      CHECK(t2.rows.size() == 1);
      CHECK(t2.final_point == *p.known_solution);
    }
  }
}

TEST_CASE("algorithm 2: first step of the worked example") {
  const auto& ex = find_problem("example-4-1");
  const auto t = run_algorithm2(ex, strict_alg2(), Vector{5.0}, run_for(1));
  REQUIRE(t.rows.size() == 1);
  const auto& r = t.rows[0];
  CHECK(r.y[0] == 0.0);
  CHECK((*r.w)[0] == 0.0);
  CHECK((*r.z)[0] == 0.0);
  CHECK((*r.u)[0] == doctest::Approx(2.5));
  CHECK(t.final_point[0] == doctest::Approx(2.5 + 5.0 / 36.0).epsilon(1e-15));
}

TEST_CASE("algorithm 2 follows the cut-aware scalar recursion for 100 steps") {
  const auto& ex = find_problem("example-4-1");
  const auto t = run_algorithm2(ex, strict_alg2(), Vector{5.0}, run_for(100));
  const auto xs = oracle::run_scalar(oracle::example_cut_step, 5.0, 100);
  REQUIRE(t.rows.size() == 100);
  for (std::size_t i = 0; i < t.rows.size(); ++i) CHECK(std::abs(t.rows[i].x[0] - xs[i]) <= 1e-12);
}

TEST_CASE("baselines: one step by hand") {
  const auto& ex = find_problem("example-4-1");
  const auto k = run_korpelevich(ex, 0.5, Vector{4.0}, run_for(1));
  CHECK(k.rows[0].y[0] == doctest::Approx(2.0));
  CHECK(k.final_point[0] == doctest::Approx(3.0));
  const auto t = run_tseng(ex, 0.5, Vector{4.0}, run_for(1));
  CHECK(t.rows[0].y[0] == doctest::Approx(2.0));
  CHECK(t.final_point[0] == doctest::Approx(3.0));

  const auto k50 = run_korpelevich(ex, 0.5, Vector{4.0}, run_for(50));
  const auto t50 = run_tseng(ex, 0.5, Vector{4.0}, run_for(50));
  for (std::size_t i = 0; i < 50; ++i) {
    CHECK(std::abs(k50.rows[i].x[0] - t50.rows[i].x[0]) <= 1e-12);
    CHECK(k50.rows[i].x[0] == doctest::Approx(4.0 * std::pow(0.75, static_cast<double>(i))));
  }
}

TEST_CASE("Hilbert reduction: the first auxiliary step of algorithm 1 is the extragradient step") {
  const auto& p = find_problem("rotation-2d");
  auto s = default_schedule_alg1();
  s.lambda = StepRule::constant(0.15);
  const auto t = run_algorithm1(p, s, Vector{2.0, -1.0}, run_for(30));
  for (const auto& row : t.rows) {
    const auto k = run_korpelevich(p, 0.15, row.x, run_for(1));
    CHECK(euclidean_norm(k.rows[0].y - row.y) <= 1e-12);
  }
}

TEST_CASE("Thong line search") {
  const auto& ex = find_problem("example-4-1");
  ThongParams params{1.0, 0.5, 0.6, {0.0, 1.0, 1.0}, 200};
  const auto t = run_thong(ex, params, Vector{3.0}, run_for(30));
  for (const auto& row : t.rows) {
    if (row.x[0] == 0.0) continue;
    CHECK(row.lambda == 0.5);
    CHECK(row.backtracks == 1);
  }
  for (std::size_t i = 1; i < t.rows.size(); ++i) {
    if (t.rows[i - 1].x[0] != 0.0) CHECK(std::abs(t.rows[i].x[0]) < std::abs(t.rows[i - 1].x[0]));
  }
  const auto still = run_thong(ex, params, Vector{0.0}, {});
  CHECK(still.rows.size() == 1);
  CHECK(still.final_point[0] == 0.0);
}

TEST_CASE("preconditions") {
  const auto& ex = find_problem("example-4-1");
  CHECK_THROWS_AS(run_algorithm2(ex, default_schedule_alg2(1.0), Vector{6.0}, {}), ConfigError);
  CHECK_THROWS_AS(run_algorithm1(ex, default_schedule_alg2(1.0), Vector{1.0}, {}), ScheduleError);
  CHECK_THROWS_AS(run_algorithm2(ex, default_schedule_alg2(1.0), Vector{1.0}, {0.0, 1e-8, 10}), ConfigError);
  CHECK_THROWS_AS(run_algorithm2(ex, default_schedule_alg2(1.0), Vector{1.0}, {1e-8, 1e-8, 0}), ConfigError);

  ProblemSpec no_map = ex;
  no_map.map.reset();
  CHECK_THROWS_AS(run_algorithm1(no_map, default_schedule_alg1(), Vector{1.0}, {}), ConfigError);
  CHECK(run_algorithm1(no_map, default_schedule_alg1(), Vector{1.0}, {}, true).status != RunStatus::error);
  CHECK_THROWS_AS(run_algorithm2(no_map, default_schedule_alg2(1.0), Vector{1.0}, {}), ConfigError);

  const auto& lp = find_problem("lp15-box-2d");
  CHECK_THROWS_WITH_AS(run_korpelevich(lp, 0.1, Vector{0.0, 0.0}, {}),
                       "algorithm requires euclidean space", UnsupportedError);
  CHECK_THROWS_AS(run_tseng(lp, 0.1, Vector{0.0, 0.0}, {}), UnsupportedError);
  CHECK_THROWS_AS(run_thong(lp, {}, Vector{0.0, 0.0}, {}), UnsupportedError);
}

TEST_CASE("trace shape and determinism") {
  const auto& p = find_problem("lp15-polytope-3d");
  const auto s = default_schedule_alg2(p.resolvent_r);
  const auto a = run_algorithm2(p, s, Vector{0.5, 0.0, 0.25}, {1e-8, 1e-8, 7});
  const auto b = run_algorithm2(p, s, Vector{0.5, 0.0, 0.25}, {1e-8, 1e-8, 7});
  CHECK(a.status == RunStatus::max_iter);
  CHECK(a.rows.size() == 7);
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].x == b.rows[i].x);
    CHECK(a.rows[i].step_norm >= 0.0);
    CHECK(a.rows[i].xy_residual >= 0.0);
    CHECK(a.rows[i].projection_residual >= 0.0);
    CHECK(a.rows[i].phi.has_value());
  }
  CHECK(a.final_point == b.final_point);
}

TEST_CASE("property: Fejer monotonicity, comparison chain and cut soundness") {
  for (const auto& p : all_problems()) {
    if (!p.admissible || !p.known_solution) continue;
    CAPTURE(p.id);
    const Vector& q = *p.known_solution;
    const auto box = bounding_box(p.feasible);
    const Vector x0 = euclidean_project(p.feasible, box->hi);
    std::vector<IterateTrace> traces{run_algorithm1(p, default_schedule_alg1(), x0, run_for(60))};
    if (p.bifunction) traces.push_back(run_algorithm2(p, default_schedule_alg2(p.resolvent_r), x0, run_for(60)));
    for (const auto& t : traces) {
      CAPTURE(t.algorithm);
      REQUIRE(t.status != RunStatus::error);
      for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto& row = t.rows[i];
        const Vector& next = i + 1 < t.rows.size() ? t.rows[i + 1].x : t.final_point;
        const double px = lyapunov_phi(p.space, q, row.x);
        const double py = lyapunov_phi(p.space, q, row.y);
        const double pz = lyapunov_phi(p.space, q, *row.z);
        CHECK(lyapunov_phi(p.space, q, next) <= px + 1e-10);
        CHECK(pz <= py + 1e-10);
        CHECK(py <= px + 1e-10);
        if (row.cut_normal) CHECK(2.0 * (pairing(q, *row.cut_normal) - *row.cut_rhs) <= 1e-10);
      }
    }
  }
}
