#include "bvi/harness.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>
#include <spdlog/spdlog.h>

#include "bvi/registry.hpp"
#include "bvi/trace_csv.hpp"

namespace bvi {

namespace {

using nlohmann::json;

const std::set<std::string> kAlgorithms = {"alg1", "alg2", "korpelevich", "tseng", "thong"};
const std::set<std::string> kEuclideanOnly = {"korpelevich", "tseng", "thong"};

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, _] : j.items()) {
    if (!allowed.contains(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

AlphaRule alpha_rule(const json& j) {
  reject_unknown(j, {"a", "b", "shift"}, "alpha rule");
  return {j.value("a", 0.0), j.value("b", 0.0), j.value("shift", 0.0)};
}

StepRule step_rule(const json& j) {
  reject_unknown(j, {"rule", "value", "kappa"}, "schedule.lambda");
  StepRule s;
  s.kind = step_kind_from_string(j.at("rule").get<std::string>());
  s.value = j.value("value", s.value);
  s.kappa = j.value("kappa", s.kappa);
  return s;
}

ExperimentConfig from_json(const json& j) {
  reject_unknown(j, {"problem", "algorithm", "algorithms", "x0", "stop", "seed", "out", "strict_paper", "schedule",
                     "baseline"},
                 "config");
  ExperimentConfig c;
  c.problem_id = j.value("problem", std::string());
  c.algorithm = j.value("algorithm", c.algorithm);
  if (j.contains("algorithms")) c.algorithms = j.at("algorithms").get<std::vector<std::string>>();
  if (j.contains("x0")) c.x0 = Vector(j.at("x0").get<std::vector<double>>());
  if (j.contains("stop")) {
    const json& s = j.at("stop");
    reject_unknown(s, {"tol_step", "tol_residual", "max_iter"}, "stop");
    c.stop.tol_step = s.value("tol_step", c.stop.tol_step);
    c.stop.tol_residual = s.value("tol_residual", c.stop.tol_residual);
    c.stop.max_iter = s.value("max_iter", c.stop.max_iter);
  }
  c.seed = j.value("seed", c.seed);
  c.output_path = j.value("out", c.output_path);
  c.strict_paper = j.value("strict_paper", false);
  if (j.contains("schedule")) {
    const json& s = j.at("schedule");
    reject_unknown(s, {"lambda", "alpha", "r"}, "schedule");
    if (s.contains("lambda")) c.lambda = step_rule(s.at("lambda"));
    if (s.contains("alpha")) {
      std::vector<AlphaRule> rules;
      for (const auto& a : s.at("alpha")) rules.push_back(alpha_rule(a));
      c.alpha = std::move(rules);
    }
    if (s.contains("r")) c.r = s.at("r").get<double>();
  }
  if (j.contains("baseline")) {
    const json& b = j.at("baseline");
    reject_unknown(b, {"lambda", "gamma", "l", "mu", "alpha", "max_backtracks"}, "baseline");
    if (b.contains("lambda")) c.baseline_lambda = b.at("lambda").get<double>();
    c.thong.gamma = b.value("gamma", c.thong.gamma);
    c.thong.l = b.value("l", c.thong.l);
    c.thong.mu = b.value("mu", c.thong.mu);
    if (b.contains("alpha")) c.thong.alpha = alpha_rule(b.at("alpha"));
    c.thong.max_backtracks = b.value("max_backtracks", c.thong.max_backtracks);
  }
  return c;
}

std::ostream& summary_stream(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  return cfg.output_path.empty() ? err : out;
}

std::string fmt_opt(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  try {
    return from_json(json::parse(json_text));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

ScheduleSet resolve_schedule(const ExperimentConfig& cfg, const ProblemSpec& p, const std::string& algorithm) {
  ScheduleSet s = algorithm == "alg1" ? default_schedule_alg1() : default_schedule_alg2(p.resolvent_r);
  if (algorithm == "alg2" && p.resolvent_r_inferred && !cfg.r) {
    spdlog::info("'{}': resolvent parameter r = {} is inferred from the worked example", p.id, p.resolvent_r);
  }
  if (cfg.lambda) s.lambda = *cfg.lambda;
  if (cfg.alpha) s.alpha = *cfg.alpha;
  if (cfg.r) s.r = *cfg.r;
  if (cfg.strict_paper) {
    s.lambda = StepRule::harmonic();
    spdlog::warn("strict paper mode: lambda_n = 1/n ignores the step cap {}", step_cap(p));
  }
  return s;
}

Vector resolve_x0(const ExperimentConfig& cfg, const ProblemSpec& p) {
  if (cfg.x0) return *cfg.x0;
  if (auto box = bounding_box(p.feasible)) return euclidean_project(p.feasible, box->hi);
  return Vector(p.space.dim(), 0.0);
}

IterateTrace run_experiment(const ExperimentConfig& cfg, const std::string& algorithm) {
  const ProblemSpec& p = find_problem(cfg.problem_id);
  if (!kAlgorithms.contains(algorithm)) throw ConfigError("unknown algorithm: " + algorithm);
  if (kEuclideanOnly.contains(algorithm) && !p.space.is_euclidean()) {
    throw UnsupportedError("algorithm requires euclidean space: " + algorithm);
  }
  const Vector x0 = resolve_x0(cfg, p);
  if (algorithm == "alg1") return run_algorithm1(p, resolve_schedule(cfg, p, algorithm), x0, cfg.stop);
  if (algorithm == "alg2") return run_algorithm2(p, resolve_schedule(cfg, p, algorithm), x0, cfg.stop);
  if (algorithm == "thong") return run_thong(p, cfg.thong, x0, cfg.stop);
  const double lambda = cfg.baseline_lambda.value_or(p.op.alpha / 2.0);
  if (algorithm == "korpelevich") return run_korpelevich(p, lambda, x0, cfg.stop);
  return run_tseng(p, lambda, x0, cfg.stop);
}

int exit_code(RunStatus s) {
  switch (s) {
    case RunStatus::converged:
      return 0;
    case RunStatus::max_iter:
      return 2;
    case RunStatus::error:
      return 1;
  }
  return 1;
}

int cli_run(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  IterateTrace trace;
  try {
    trace = run_experiment(cfg, cfg.algorithm);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  if (cfg.output_path.empty()) {
    write_trace_csv(out, trace);
  } else {
    std::ofstream file(cfg.output_path, std::ios::binary);
    if (file) write_trace_csv(file, trace);
    if (!file) {
      err << "error: cannot write trace: " << cfg.output_path << '\n';
      return 1;
    }
  }

  std::ostream& s = summary_stream(cfg, out, err);
  s << trace.algorithm << " on " << cfg.problem_id << ": " << to_string(trace.status) << " after "
    << trace.rows.size() << " iterations, x = " << format_vector(trace.final_point);
  if (!trace.rows.empty()) {
    s << ", step_norm = " << format_double(trace.rows.back().step_norm)
      << ", xy_residual = " << format_double(trace.rows.back().xy_residual);
  }
  s << '\n';
  if (trace.status == RunStatus::error) err << "error: " << trace.message << '\n';
  return exit_code(trace.status);
}

int cli_compare(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.algorithms.empty()) {
    err << "error: no algorithms to compare\n";
    return 1;
  }
  std::vector<IterateTrace> traces;
  try {
    const ProblemSpec& p = find_problem(cfg.problem_id);
    for (const auto& a : cfg.algorithms) {
      if (!kAlgorithms.contains(a)) throw ConfigError("unknown algorithm: " + a);
      if (kEuclideanOnly.contains(a) && !p.space.is_euclidean()) {
        throw UnsupportedError("algorithm requires euclidean space: " + a);
      }
    }
    for (const auto& a : cfg.algorithms) traces.push_back(run_experiment(cfg, a));
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  std::ostringstream csv;
  csv << 'n';
  std::size_t rows = 0;
  for (std::size_t k = 0; k < traces.size(); ++k) {
    csv << ',' << cfg.algorithms[k] << "_step_norm," << cfg.algorithms[k] << "_phi_to_solution";
    rows = std::max(rows, traces[k].rows.size());
  }
  csv << '\n';
  for (std::size_t i = 0; i < rows; ++i) {
    csv << i + 1;
    for (const auto& t : traces) {
      if (i < t.rows.size()) {
        csv << ',' << format_double(t.rows[i].step_norm) << ',' << fmt_opt(t.rows[i].phi);
      } else {
        csv << ",,";
      }
    }
    csv << '\n';
  }

  if (cfg.output_path.empty()) {
    out << csv.str();
  } else {
    std::ofstream file(cfg.output_path, std::ios::binary);
    if (file) file << csv.str();
    if (!file) {
      err << "error: cannot write trace: " << cfg.output_path << '\n';
      return 1;
    }
  }

  int code = 0;
  std::ostream& s = summary_stream(cfg, out, err);
  for (std::size_t k = 0; k < traces.size(); ++k) {
    const auto& t = traces[k];
    s << cfg.algorithms[k] << ": " << to_string(t.status) << " after " << t.rows.size() << " iterations\n";
    if (t.status == RunStatus::error) {
      err << "error: " << cfg.algorithms[k] << ": " << t.message << '\n';
      code = 1;
    } else if (t.status == RunStatus::max_iter && code == 0) {
      code = 2;
    }
  }
  return code;
}

int cli_validate(const std::string& problem_id, std::uint64_t seed, std::ostream& out, std::ostream& err) {
  constexpr std::size_t kSamples = 1000;
  constexpr double kTol = 1e-9;
  const ProblemSpec* p = nullptr;
  try {
    p = &find_problem(problem_id);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  std::mt19937_64 rng(seed);
  std::vector<CheckReport> reports;
  reports.push_back(verify_ism(*p, kSamples, kTol, rng));
  if (p->known_solution) {
    reports.push_back(verify_norm_condition(*p, *p->known_solution, kSamples, kTol, rng));
    reports.push_back(verify_vi_membership(*p, *p->known_solution, kTol, kSamples, rng));
  }
  if (p->bifunction) {
    const AxiomReport ax = verify_bifunction_axioms(*p->bifunction, p->feasible, kSamples, kTol, rng);
    for (const auto& r : {ax.a1, ax.a2, ax.a3, ax.a4}) reports.push_back(r);
  }
  if (p->map) reports.push_back(verify_relative_nonexpansive(*p, kSamples, kTol, rng));

  bool all = true;
  for (const auto& r : reports) {
    all = all && r.passed;
    out << (r.passed ? "PASS " : "FAIL ") << r.name << ": worst margin " << format_double(r.worst) << " over "
        << r.samples << " samples";
    if (!r.passed && r.witness) out << " (at x = " << format_vector(*r.witness) << ')';
    out << '\n';
  }
  out << problem_id << ": " << (all ? "all checks pass" : "some checks fail") << '\n';
  return all ? 0 : 1;
}

}  // namespace bvi
