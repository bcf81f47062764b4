#pragma once

// Iterative solvers for the common-solution problem and the Hilbert-space
// baselines they are compared against.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "bvi/problems.hpp"
#include "bvi/schedule.hpp"

namespace bvi {

/// Stop when ||x_{n+1} - x_n|| <= tol_step and ||x_n - y_n|| <= tol_residual, or after max_iter rows.
struct StopRule {
  double tol_step = 1e-8;
  double tol_residual = 1e-8;
  std::size_t max_iter = 1000;

  void validate() const;
};

/// One iteration. Row n carries x_n, the auxiliary points computed from it,
/// and step_norm = ||x_{n+1} - x_n||.
struct IterateRow {
  std::size_t n = 0;
  Vector x;
  Vector y;
  std::optional<Vector> z;
  std::optional<Vector> w;
  std::optional<Vector> u;
  double lambda = 0.0;
  double step_norm = 0.0;
  double xy_residual = 0.0;
  std::optional<double> yz_residual;
  /// phi(q, x_n) for the problem's known solution q.
  std::optional<double> phi;
  /// Largest solver residual among this iteration's projections.
  double projection_residual = 0.0;
  /// Cut set C_n (second algorithm only).
  std::optional<DualVector> cut_normal;
  std::optional<double> cut_rhs;
  /// Line-search reductions (Thong only).
  std::size_t backtracks = 0;
};

enum class RunStatus { converged, max_iter, error };

std::string to_string(RunStatus s);

struct IterateTrace {
  std::string algorithm;
  std::vector<IterateRow> rows;
  RunStatus status = RunStatus::max_iter;
  /// The last computed iterate (x_{n+1} of the last row, or x0 on early failure).
  Vector final_point;
  std::string message;
};

/// y_n = Pi_C J^{-1}(Jx_n - l_n Ax_n), z_n = J^{-1}(Jy_n - l_n Ay_n),
/// x_{n+1} = Pi_C J^{-1}(a1 Jx_n + a2 Jf(x_n) + a3 Jz_n).
/// Without a map f this throws unless identity_if_no_map is set.
IterateTrace run_algorithm1(const ProblemSpec& p, const ScheduleSet& s, const Vector& x0, const StopRule& stop,
                            bool identity_if_no_map = false);

/// u_n = K_{r_n} x_n, w_n = Pi_C J^{-1}(Ju_n - l_n Au_n), y_n as above,
/// z_n = Pi_{C_n} J^{-1}(Jy_n - l_n Ay_n),
/// x_{n+1} = Pi_C J^{-1}(a1 Jx_n + a2 Jf(x_n) + a3 Jz_n + a4 Jw_n).
IterateTrace run_algorithm2(const ProblemSpec& p, const ScheduleSet& s, const Vector& x0, const StopRule& stop);

/// Extragradient: y_n = P_C(x_n - l Ax_n), x_{n+1} = P_C(x_n - l Ay_n).
IterateTrace run_korpelevich(const ProblemSpec& p, double lambda, const Vector& x0, const StopRule& stop);

/// Forward-backward-forward: y_n = P_C(x_n - l Ax_n),
/// x_{n+1} = P_X(y_n - l(Ay_n - Ax_n)) with X = E for Lipschitz A, else C.
IterateTrace run_tseng(const ProblemSpec& p, double lambda, const Vector& x0, const StopRule& stop);

struct ThongParams {
  double gamma = 1.0;
  double l = 0.5;
  double mu = 0.6;
  /// alpha_n, default 1/(n+1).
  AlphaRule alpha{0.0, 1.0, 1.0};
  std::size_t max_backtracks = 200;
};

/// lambda_n = largest gamma l^k with lambda ||Ax_n - Ay_n|| <= mu ||x_n - y_n||,
/// y_n = P_C(x_n - lambda_n Ax_n), z_n = y_n - lambda_n(Ay_n - Ax_n),
/// x_{n+1} = alpha_n f(x_n) + (1 - alpha_n) z_n.
IterateTrace run_thong(const ProblemSpec& p, const ThongParams& params, const Vector& x0, const StopRule& stop,
                       const std::optional<MapSpec>& f = std::nullopt);

/// The Armijo-type condition lambda ||Ax - Ay|| <= mu ||x - y|| with y = P_C(x - lambda Ax).
bool thong_condition(const ProblemSpec& p, const Vector& x, double lambda, double mu);

}  // namespace bvi
