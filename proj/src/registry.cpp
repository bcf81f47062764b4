#include "bvi/registry.hpp"

#include <algorithm>

namespace bvi {

namespace {

// E = R, C = [-5,5], A = I, f(x) = x/3, F(u,y) = 16y^2 + 9uy - 25u^2.
// K_r x = x/(42r + 1); r = 1/42 is what makes u_n = x_n/2 in the worked recursion.
ProblemSpec example_4_1() {
  ProblemSpec p;
  p.id = "example-4-1";
  p.description = "R, C=[-5,5], A=I, f(x)=x/3, F(u,y)=16y^2+9uy-25u^2; solution 0";
  p.space = SpaceSpec::euclidean(1);
  p.feasible = SetSpec::interval(-5.0, 5.0);
  p.op = OperatorSpec::identity(1.0);
  p.bifunction = BifunctionSpec::quadratic(16.0, 9.0, -25.0);
  p.map = MapSpec::scaling(1.0 / 3.0, 1);
  p.known_solution = Vector{0.0};
  p.resolvent_r = 1.0 / 42.0;
  p.resolvent_r_inferred = true;
  return p;
}

ProblemSpec example_4_1_overstated() {
  ProblemSpec p = example_4_1();
  p.id = "example-4-1-overstated-alpha";
  p.description = "example-4-1 with the ism modulus overstated as 2 (fails validation)";
  p.op.alpha = 2.0;
  p.known_solution.reset();
  p.admissible = false;
  return p;
}

// Skew rotation plus a multiple of the identity: <d, Ad> = 0.5|d|^2 and
// |Ad|^2 = 1.25|d|^2, so A is 0.4-inverse strongly monotone.
ProblemSpec rotation_2d() {
  ProblemSpec p;
  p.id = "rotation-2d";
  p.description = "R^2, C=[-2,2]^2, A=[[0.5,1],[-1,0.5]], f(x)=x/2, F=0; solution 0";
  p.space = SpaceSpec::euclidean(2);
  p.feasible = SetSpec::box(Vector{-2.0, -2.0}, Vector{2.0, 2.0});
  p.op = OperatorSpec::affine({{0.5, 1.0}, {-1.0, 0.5}}, DualVector{0.0, 0.0}, 0.4);
  p.bifunction = BifunctionSpec::zero();
  p.map = MapSpec::scaling(0.5, 2);
  p.known_solution = Vector{0.0, 0.0};
  p.resolvent_r = 0.5;
  return p;
}

// Symmetric positive definite A with eigenvalues 1, 2, 4; alpha = 1/4.
ProblemSpec spd_polytope_3d() {
  ProblemSpec p;
  p.id = "spd-polytope-3d";
  p.description = "R^3, C=[-1,1]^3 ∩ {x1+x2+x3<=1}, SPD A, f(x)=x/3, F=0; solution 0";
  p.space = SpaceSpec::euclidean(3);
  p.feasible = SetSpec::intersection({SetSpec::box(Vector(3, -1.0), Vector(3, 1.0)),
                                      SetSpec::halfspace(DualVector{1.0, 1.0, 1.0}, 1.0)});
  p.op = OperatorSpec::affine({{2.0, 1.0, 0.0}, {1.0, 2.0, 0.0}, {0.0, 0.0, 4.0}}, DualVector(3, 0.0), 0.25);
  p.bifunction = BifunctionSpec::zero();
  p.map = MapSpec::scaling(1.0 / 3.0, 3);
  p.known_solution = Vector(3, 0.0);
  p.resolvent_r = 0.5;
  return p;
}

// l_1.5 plane. <d, d> >= |d|_3^2, so A = I is 1-inverse strongly monotone.
// F(u,y) = |y|^2 + <u,y> - 2|u|^2 satisfies (A1)-(A4).
ProblemSpec lp_box_2d() {
  ProblemSpec p;
  p.id = "lp15-box-2d";
  p.description = "l_1.5^2, C=[-1,2]x[-1.5,1], A=I, f(x)=x/2, F(u,y)=|y|^2+<u,y>-2|u|^2; solution 0";
  p.space = SpaceSpec::lp(2, 1.5);
  p.feasible = SetSpec::box(Vector{-1.0, -1.5}, Vector{2.0, 1.0});
  p.op = OperatorSpec::identity(1.0);
  p.bifunction = BifunctionSpec::quadratic(1.0, 1.0, -2.0);
  p.map = MapSpec::scaling(0.5, 2);
  p.known_solution = Vector{0.0, 0.0};
  p.resolvent_r = 0.5;
  return p;
}

// Diagonal A = diag(1, 2, 0.5) on l_1.5^3: <d, Dd> >= |Dd|_2^2 / 2 >= |Dd|_3^2 / 2.
ProblemSpec lp_polytope_3d() {
  ProblemSpec p;
  p.id = "lp15-polytope-3d";
  p.description = "l_1.5^3, C=[-1,1]^3 ∩ {x1-x2+2x3<=1.5}, A=diag(1,2,0.5), f(x)=x/2, F=0; solution 0";
  p.space = SpaceSpec::lp(3, 1.5);
  p.feasible = SetSpec::intersection({SetSpec::box(Vector(3, -1.0), Vector(3, 1.0)),
                                      SetSpec::halfspace(DualVector{1.0, -1.0, 2.0}, 1.5)});
  p.op = OperatorSpec::affine({{1.0, 0.0, 0.0}, {0.0, 2.0, 0.0}, {0.0, 0.0, 0.5}}, DualVector(3, 0.0), 0.5);
  p.bifunction = BifunctionSpec::zero();
  p.map = MapSpec::scaling(0.5, 3);
  p.known_solution = Vector(3, 0.0);
  p.resolvent_r = 0.5;
  return p;
}

}  // namespace

const std::vector<ProblemSpec>& all_problems() {
  static const std::vector<ProblemSpec> problems = {
      example_4_1(), example_4_1_overstated(), rotation_2d(), spd_polytope_3d(), lp_box_2d(), lp_polytope_3d(),
  };
  return problems;
}

bool has_problem(const std::string& id) {
  const auto& ps = all_problems();
  return std::any_of(ps.begin(), ps.end(), [&](const ProblemSpec& p) { return p.id == id; });
}

const ProblemSpec& find_problem(const std::string& id) {
  for (const auto& p : all_problems()) {
    if (p.id == id) return p;
  }
  throw ConfigError("unknown problem: " + id);
}

std::vector<std::string> problem_ids() {
  std::vector<std::string> ids;
  for (const auto& p : all_problems()) ids.push_back(p.id);
  return ids;
}

}  // namespace bvi
