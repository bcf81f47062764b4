#pragma once

// Parameter sequences lambda_n, alpha_{n,i}, r_n.

#include <cstddef>
#include <string>
#include <vector>

namespace bvi {

enum class StepKind { constant, harmonic, capped_harmonic };

struct StepRule {
  StepKind kind = StepKind::capped_harmonic;
  /// Step for `constant`.
  double value = 0.1;
  /// Fraction of the cap for `capped_harmonic`, in (0, 1).
  double kappa = 0.99;

  /// lambda_n for n >= 1, given the cap c^2 alpha / 2.
  double at(std::size_t n, double cap) const;

  static StepRule constant(double v) { return {StepKind::constant, v, 0.99}; }
  static StepRule harmonic() { return {StepKind::harmonic, 0.0, 0.99}; }
  static StepRule capped_harmonic(double kappa = 0.99) { return {StepKind::capped_harmonic, 0.0, kappa}; }
};

/// alpha_n = a + b / (n + shift).
struct AlphaRule {
  double a = 0.0;
  double b = 0.0;
  double shift = 0.0;

  double at(std::size_t n) const { return a + b / (static_cast<double>(n) + shift); }
};

struct ScheduleSet {
  StepRule lambda;
  std::vector<AlphaRule> alpha;
  /// Constant r_n.
  double r = 1.0;
};

/// Checks the affine alpha rules (count, range, sums, liminf products), the
/// step rule and r. Throws ScheduleError. Returns warnings for conditions that
/// are legal to run but outside the convergence theory.
std::vector<std::string> validate_schedule(const ScheduleSet& s, std::size_t n_alpha, double cap);

/// Step rule name as used in configs: constant, harmonic, capped_harmonic.
std::string to_string(StepKind k);
StepKind step_kind_from_string(const std::string& name);

/// lambda capped_harmonic(0.99), alpha = (1/3, 1/3, 1/3).
ScheduleSet default_schedule_alg1();

/// lambda capped_harmonic(0.99),
/// alpha = (1/4 + 1/(4n), 1/4 - 1/(6n), 1/4 + 1/(12n), 1/4 - 1/(6n)), r = r.
ScheduleSet default_schedule_alg2(double r);

}  // namespace bvi
