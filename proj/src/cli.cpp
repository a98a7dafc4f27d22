#include "tangle/cli.hpp"

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "tangle/harness.hpp"
#include "tangle/notation.hpp"
#include "tangle/numfmt.hpp"
#include "tangle/solver.hpp"

namespace tangle {

namespace {

std::filesystem::path default_out_root() {
  if (const char* env = std::getenv("TANGLE_RL_OUT"); env && *env) return env;
  return "out";
}

struct RunOptions {
  std::string puzzle = "fishermans";
  std::string variant = "original";
  std::string algorithm = "qlearning";
  int trials = 30;
  int episodes = 6000;
  std::uint64_t seed = 1;
  double alpha = 0.2;
  double gamma = 0.9;
  double eta = 0.25;
  double xi = 1.0;
  double beta = 1.0;
  int winding_limit = 2;
  int crossing_cap = 0;  // 0: puzzle default
  std::string heuristic_from;
  std::string out;
  bool parallel = false;
};

int do_run(const RunOptions& opt) {
  BuildOptions build;
  build.global_winding_limit = opt.winding_limit;
  if (opt.crossing_cap > 0) build.crossing_cap = opt.crossing_cap;
  ExperimentConfig config;
  config.env = make_env_config(build_spec(opt.puzzle, opt.variant, build));
  config.algorithm = algorithm_from_name(opt.algorithm);
  config.learner.alpha = opt.alpha;
  config.learner.gamma = opt.gamma;
  config.learner.eta = opt.eta;
  config.learner.xi = opt.xi;
  config.learner.beta = opt.beta;
  config.learner.episodes = opt.episodes;
  config.trials = opt.trials;
  config.base_seed = opt.seed;
  config.out_dir =
      opt.out.empty() ? default_out_root() : std::filesystem::path(opt.out);
  if (!opt.heuristic_from.empty()) config.heuristic_from = opt.heuristic_from;
  config.parallel = opt.parallel;
  // Q-Learning starts from scratch when the constraint switch hits; the ASP
  // learners keep revising their programs instead.
  if (config.env.nonstationary &&
      config.algorithm == AlgorithmKind::qlearning) {
    config.learner.reinit_episode =
        config.env.nonstationary->switch_after_episode + 1;
  }

  const ExperimentResult result = run_experiment(config);
  const std::size_t episodes = result.aggregate.episodes();
  std::cout << opt.algorithm << " on " << opt.puzzle << "/" << opt.variant << ": "
            << config.trials << " trials x " << episodes << " episodes -> "
            << (config.out_dir / "raw.csv").string() << "\n";
  if (episodes > 0) {
    std::cout << "final mean steps "
              << format_double(
                     result.aggregate.metrics[0].mean[episodes - 1])
              << ", mean visited states "
              << format_double(result.aggregate.metrics[2].mean[episodes - 1])
              << "\n";
  }
  return 0;
}

int do_solve(const std::string& puzzle, const std::string& variant, int max_depth,
             int winding_limit, int crossing_cap, std::size_t max_states) {
  BuildOptions build;
  build.global_winding_limit = winding_limit;
  if (crossing_cap > 0) build.crossing_cap = crossing_cap;
  const PuzzleSpec spec = build_spec(puzzle, variant, build);
  const SolveResult result = bfs_solve(spec, max_depth, max_states);
  std::cout << "expanded " << result.states_expanded << " states\n";
  if (!result.plan) {
    std::cout << "no plan found within depth " << max_depth << "\n";
    return 0;
  }
  std::cout << print_plan(spec, *result.plan);
  std::cout << "optimal length " << result.plan->size() << "\n";
  return 0;
}

int do_ttest(const std::string& a_path, const std::string& b_path,
             const std::string& column, const std::string& out_path, bool pooled) {
  const auto a = load_raw_csv(a_path);
  const auto b = load_raw_csv(b_path);
  const auto results = ttest_by_episode(a, b, metric_from_name(column), pooled);
  if (out_path.empty()) {
    std::cout << "episode,t,df,p\n";
    for (std::size_t e = 0; e < results.size(); ++e) {
      std::cout << (e + 1) << ',' << format_double(results[e].t) << ','
                << format_double(results[e].df) << ','
                << format_double(results[e].p) << '\n';
    }
  } else {
    export_ttest_csv(out_path, results);
    std::cout << "wrote " << out_path << " (" << results.size() << " episodes)\n";
  }
  return 0;
}

int do_show_state(const std::string& puzzle, const std::string& variant,
                  const std::string& text) {
  const PuzzleSpec spec = build_spec(puzzle, variant);
  const PuzzleState state = parse_state(spec, text);
  std::cout << canonical_key(spec, state) << "\n";
  const auto issues = validate_state(spec, state);
  if (issues.empty()) {
    std::cout << "valid" << (is_goal(spec, state) ? ", goal state" : "") << "\n";
  } else {
    for (const std::string& issue : issues) std::cout << "invalid: " << issue << "\n";
  }
  return 0;
}

}  // namespace

int cli_main(const std::vector<std::string>& args) {
  CLI::App app{"String-and-hole puzzle workbench: simulator, learners, experiments"};
  app.require_subcommand(1);

  RunOptions run;
  CLI::App* run_cmd = app.add_subcommand("run", "Train agents and export metrics");
  run_cmd->add_option("--puzzle", run.puzzle, "fishermans or ropeladder");
  run_cmd->add_option("--variant", run.variant,
                      "simplified, original, nondeterministic, nonstationary-disk");
  run_cmd->add_option("--algorithm", run.algorithm,
                      "qlearning, haql, oasp, hoasp");
  run_cmd->add_option("--trials", run.trials)->check(CLI::PositiveNumber);
  run_cmd->add_option("--episodes", run.episodes)->check(CLI::PositiveNumber);
  run_cmd->add_option("--seed", run.seed);
  run_cmd->add_option("--alpha", run.alpha);
  run_cmd->add_option("--gamma", run.gamma);
  run_cmd->add_option("--eta", run.eta);
  run_cmd->add_option("--xi", run.xi);
  run_cmd->add_option("--beta", run.beta);
  run_cmd->add_option("--winding-limit", run.winding_limit)->check(CLI::PositiveNumber);
  run_cmd->add_option("--crossing-cap", run.crossing_cap)->check(CLI::PositiveNumber);
  run_cmd->add_option("--heuristic-from", run.heuristic_from,
                      "Q-table snapshot from the relaxed puzzle");
  run_cmd->add_option("--out", run.out, "output directory (default $TANGLE_RL_OUT)");
  run_cmd->add_flag("--parallel", run.parallel, "run trials on all cores");

  std::string solve_puzzle = "fishermans", solve_variant = "original";
  int solve_depth = 20, solve_winding = 2, solve_cap = 0;
  std::size_t solve_max_states = 20000000;
  CLI::App* solve_cmd =
      app.add_subcommand("solve", "Breadth-first search for a shortest plan");
  solve_cmd->add_option("--puzzle", solve_puzzle);
  solve_cmd->add_option("--variant", solve_variant);
  solve_cmd->add_option("--max-depth", solve_depth)->check(CLI::PositiveNumber);
  solve_cmd->add_option("--winding-limit", solve_winding)->check(CLI::PositiveNumber);
  solve_cmd->add_option("--crossing-cap", solve_cap)->check(CLI::PositiveNumber);
  solve_cmd->add_option("--max-states", solve_max_states);

  std::string ttest_a, ttest_b, ttest_column = "steps", ttest_out;
  bool ttest_pooled = false;
  CLI::App* ttest_cmd =
      app.add_subcommand("ttest", "Per-episode two-sample t-test of two raw CSVs");
  ttest_cmd->add_option("a", ttest_a, "first raw.csv")->required();
  ttest_cmd->add_option("b", ttest_b, "second raw.csv")->required();
  ttest_cmd->add_option("--column", ttest_column,
                        "steps, return, visited_states, qtable_pairs");
  ttest_cmd->add_option("--out", ttest_out, "output CSV (default stdout)");
  ttest_cmd->add_flag("--pooled", ttest_pooled, "pooled-variance Student's t");

  std::string show_puzzle = "fishermans", show_variant = "original", show_text;
  CLI::App* show_cmd =
      app.add_subcommand("show-state", "Parse, validate and canonicalize a state");
  show_cmd->add_option("--puzzle", show_puzzle);
  show_cmd->add_option("--variant", show_variant);
  show_cmd->add_option("state", show_text, "chain notation")->required();

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (run_cmd->parsed()) return do_run(run);
    if (solve_cmd->parsed()) {
      return do_solve(solve_puzzle, solve_variant, solve_depth, solve_winding,
                      solve_cap, solve_max_states);
    }
    if (ttest_cmd->parsed()) {
      return do_ttest(ttest_a, ttest_b, ttest_column, ttest_out, ttest_pooled);
    }
    if (show_cmd->parsed()) {
      return do_show_state(show_puzzle, show_variant, show_text);
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

}  // namespace tangle
