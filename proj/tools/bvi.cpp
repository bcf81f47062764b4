// Command-line front end: bvi run | compare | validate.

#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bvi/errors.hpp"
#include "bvi/harness.hpp"
#include "bvi/registry.hpp"

namespace {

struct Flags {
  std::string config;
  std::string problem;
  std::vector<std::string> algorithms;
  std::string x0;
  std::optional<std::size_t> max_iter;
  std::optional<double> tol_step;
  std::optional<double> tol_residual;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  bool strict_paper = false;
};

bvi::Vector parse_x0(const std::string& text) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      vals.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw bvi::ConfigError("--x0 expects comma-separated numbers, got '" + text + "'");
    }
  }
  if (vals.empty()) throw bvi::ConfigError("--x0 is empty");
  return bvi::Vector(std::move(vals));
}

bvi::ExperimentConfig build_config(const Flags& f) {
  bvi::ExperimentConfig cfg = f.config.empty() ? bvi::ExperimentConfig{} : bvi::load_config(f.config);
  if (!f.problem.empty()) cfg.problem_id = f.problem;
  if (!f.algorithms.empty()) {
    cfg.algorithm = f.algorithms.front();
    cfg.algorithms = f.algorithms;
  }
  if (!f.x0.empty()) cfg.x0 = parse_x0(f.x0);
  if (f.max_iter) cfg.stop.max_iter = *f.max_iter;
  if (f.tol_step) cfg.stop.tol_step = *f.tol_step;
  if (f.tol_residual) cfg.stop.tol_residual = *f.tol_residual;
  if (f.seed) cfg.seed = *f.seed;
  if (f.out) cfg.output_path = *f.out;
  if (f.strict_paper) cfg.strict_paper = true;
  if (cfg.problem_id.empty()) throw bvi::ConfigError("no problem given (use --problem or a config file)");
  return cfg;
}

void add_common(CLI::App* cmd, Flags& f, bool many_algorithms) {
  cmd->add_option("-c,--config", f.config, "JSON experiment config")->check(CLI::ExistingFile);
  cmd->add_option("--problem", f.problem, "problem id");
  if (many_algorithms) {
    cmd->add_option("--algorithm", f.algorithms, "algorithms to compare (repeat or comma-separate)")
        ->delimiter(',');
  } else {
    cmd->add_option("--algorithm", f.algorithms, "alg1, alg2, korpelevich, tseng or thong")->expected(1);
  }
  cmd->add_option("--x0", f.x0, "starting point, comma-separated");
  cmd->add_option("--max-iter", f.max_iter, "iteration cap");
  cmd->add_option("--tol-step", f.tol_step, "tolerance on ||x_{n+1} - x_n||");
  cmd->add_option("--tol-residual", f.tol_residual, "tolerance on ||x_n - y_n||");
  cmd->add_option("--seed", f.seed, "random seed");
  cmd->add_option("--out", f.out, "output CSV path (default stdout)");
  cmd->add_flag("--strict-paper", f.strict_paper, "use lambda_n = 1/n without the step cap");
}

}  // namespace

int main(int argc, char** argv) {
  bvi::configure_logging();

  CLI::App app{"Solvers for variational inequalities, equilibrium and fixed-point problems"};
  app.require_subcommand(1);

  Flags run_flags, compare_flags;
  auto* run = app.add_subcommand("run", "run one algorithm and write its trace");
  add_common(run, run_flags, false);
  auto* compare = app.add_subcommand("compare", "run several algorithms on one problem");
  add_common(compare, compare_flags, true);

  std::string validate_problem;
  std::uint64_t validate_seed = 0;
  auto* validate = app.add_subcommand("validate", "sample the assumptions of a registered problem");
  validate->add_option("--problem", validate_problem, "problem id")->required();
  validate->add_option("--seed", validate_seed, "random seed");

  auto* list = app.add_subcommand("problems", "list registered problems");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (run->parsed()) return bvi::cli_run(build_config(run_flags), std::cout, std::cerr);
    if (compare->parsed()) return bvi::cli_compare(build_config(compare_flags), std::cout, std::cerr);
    if (validate->parsed()) return bvi::cli_validate(validate_problem, validate_seed, std::cout, std::cerr);
    if (list->parsed()) {
      for (const auto& p : bvi::all_problems()) std::cout << p.id << "  " << p.description << '\n';
      return 0;
    }
  } catch (const bvi::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
