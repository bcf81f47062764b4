#include "bvi/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "bvi/errors.hpp"

namespace bvi {

namespace {

constexpr double kTol = 1e-12;

std::string rule_name(std::size_t i) { return "alpha_" + std::to_string(i + 1); }

}  // namespace

double StepRule::at(std::size_t n, double cap) const {
  const double h = 1.0 / static_cast<double>(n);
  switch (kind) {
    case StepKind::constant:
      return value;
    case StepKind::harmonic:
      return h;
    case StepKind::capped_harmonic:
      return std::min(h, kappa * cap);
  }
  return h;
}

std::string to_string(StepKind k) {
  switch (k) {
    case StepKind::constant:
      return "constant";
    case StepKind::harmonic:
      return "harmonic";
    case StepKind::capped_harmonic:
      return "capped_harmonic";
  }
  return "?";
}

StepKind step_kind_from_string(const std::string& name) {
  if (name == "constant") return StepKind::constant;
  if (name == "harmonic") return StepKind::harmonic;
  if (name == "capped_harmonic") return StepKind::capped_harmonic;
  throw ScheduleError("unknown step rule: " + name);
}

std::vector<std::string> validate_schedule(const ScheduleSet& s, std::size_t n_alpha, double cap) {
  std::vector<std::string> warnings;

  switch (s.lambda.kind) {
    case StepKind::constant:
      if (!(s.lambda.value > 0.0)) throw ScheduleError("constant step must be positive");
      if (s.lambda.value >= cap) {
        warnings.push_back("constant step " + std::to_string(s.lambda.value) + " is not below the cap " +
                           std::to_string(cap));
      }
      warnings.emplace_back("constant step does not tend to 0");
      break;
    case StepKind::harmonic:
      if (1.0 >= cap) {
        warnings.push_back("harmonic step 1/n exceeds the cap " + std::to_string(cap) + " for n <= " +
                           std::to_string(static_cast<long>(std::floor(1.0 / cap))));
      }
      break;
    case StepKind::capped_harmonic:
      if (!(s.lambda.kappa > 0.0 && s.lambda.kappa < 1.0)) throw ScheduleError("kappa must lie in (0, 1)");
      if (!(cap > 0.0)) throw ScheduleError("step cap must be positive");
      break;
  }

  if (!(s.r > 0.0)) throw ScheduleError("r must be positive");

  if (s.alpha.size() != n_alpha) {
    throw ScheduleError("expected " + std::to_string(n_alpha) + " alpha rules, got " +
                        std::to_string(s.alpha.size()));
  }

  double sum_a = 0.0;
  std::map<double, double> sum_b;
  for (std::size_t i = 0; i < s.alpha.size(); ++i) {
    const AlphaRule& rule = s.alpha[i];
    if (!(rule.shift > -1.0)) throw ScheduleError(rule_name(i) + ": shift must exceed -1");
    // a + b/(n+shift) is monotone in n, so its range is spanned by n = 1 and the limit.
    for (double v : {rule.at(1), rule.a}) {
      if (v < -kTol || v > 1.0 + kTol) throw ScheduleError(rule_name(i) + " leaves [0, 1]");
    }
    sum_a += rule.a;
    sum_b[rule.shift] += rule.b;
  }
  if (std::abs(sum_a - 1.0) > kTol) throw ScheduleError("alpha rules do not sum to 1");
  for (const auto& [shift, b] : sum_b) {
    if (std::abs(b) > kTol) throw ScheduleError("alpha rules do not sum to 1 for every n");
  }

  if (n_alpha >= 3 && !(s.alpha[1].a * s.alpha[2].a > 0.0)) {
    throw ScheduleError("liminf alpha_2 alpha_3 must be positive");
  }
  if (n_alpha >= 4 && !(s.alpha[1].a * s.alpha[3].a > 0.0)) {
    throw ScheduleError("liminf alpha_2 alpha_4 must be positive");
  }
  return warnings;
}

ScheduleSet default_schedule_alg1() {
  const double third = 1.0 / 3.0;
  return {StepRule::capped_harmonic(), {{third, 0.0, 0.0}, {third, 0.0, 0.0}, {1.0 - 2.0 * third, 0.0, 0.0}}, 1.0};
}

ScheduleSet default_schedule_alg2(double r) {
  return {StepRule::capped_harmonic(),
          {{0.25, 0.25, 0.0}, {0.25, -1.0 / 6.0, 0.0}, {0.25, 1.0 / 12.0, 0.0}, {0.25, -1.0 / 6.0, 0.0}},
          r};
}

}  // namespace bvi
