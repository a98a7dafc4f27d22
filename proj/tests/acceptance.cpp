// End-to-end acceptance gate. Each test case is one numbered criterion and
// prints its own pass/fail line; run the binary directly (or through ctest)
// to see the scoreboard. Training-based criteria run scaled-down versions of
// the full experiment grid on fixed seeds, so the whole suite is
// deterministic.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "tangle/harness.hpp"
#include "tangle/learn.hpp"
#include "tangle/notation.hpp"
#include "tangle/rng.hpp"
#include "tangle/solver.hpp"
#include "tangle/stats.hpp"

using namespace tangle;

namespace {

// Shortest plan lengths established once by exhaustive search (criterion 3
// freezes them; the unit suite pins the fisherman's folly ones too).
constexpr std::size_t kOptimalSimplifiedFF = 5;
constexpr std::size_t kOptimalOriginalFF = 5;
constexpr std::size_t kOptimalSimplifiedRL = 11;
constexpr std::size_t kOptimalOriginalRL = 13;
// Move count of the documented manual rope ladder solution, for comparison.
constexpr std::size_t kReferenceRopeLadderLength = 12;

constexpr std::uint64_t kConvergenceBase = 700;  // criteria 6 and 8
constexpr std::uint64_t kHeuristicBase = 100;    // criterion 7
constexpr std::uint64_t kSwitchBase = 100;       // criterion 9

struct Scoreboard {
  static void report(int criterion, bool pass, const std::string& detail) {
    std::printf("[criterion %2d] %s  %s\n", criterion, pass ? "PASS" : "FAIL",
                detail.c_str());
    std::fflush(stdout);
  }
};

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("tangle_acceptance_" + std::to_string(::getpid()));
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
};

// Shared state between criteria that reuse each other's runs (6 and 8).
struct ConvergenceRuns {
  std::vector<int> ql_rollouts, oasp_rollouts;  // last 200 episodes, pooled
  std::vector<std::size_t> ql_visited, oasp_visited;
  std::vector<std::size_t> ql_pairs, oasp_pairs;
  int optimal = 0;
  bool done = false;
};

ConvergenceRuns& convergence_runs() {
  static ConvergenceRuns runs;
  if (runs.done) return runs;

  const PuzzleSpec sff = build_spec("fishermans", "simplified");
  runs.optimal = static_cast<int>(bfs_solve(sff, 8).plan->size());

  EnvConfig cfg = make_env_config(sff);
  LearnerConfig c;
  c.episodes = 2000;

  for (int k = 0; k < 10; ++k) {
    auto ql = train_trial(AlgorithmKind::qlearning, cfg, c, nullptr,
                          kConvergenceBase + k, [&](int ep, const Agent& a) {
                            if (ep > 1800) {
                              runs.ql_rollouts.push_back(greedy_rollout(
                                  sff, a.qtable(), a.program(), 500));
                            }
                          });
    auto oasp = train_trial(AlgorithmKind::oasp, cfg, c, nullptr,
                            kConvergenceBase + k, [&](int ep, const Agent& a) {
                              if (ep > 1800) {
                                runs.oasp_rollouts.push_back(greedy_rollout(
                                    sff, a.qtable(), a.program(), 500));
                              }
                            });
    runs.ql_visited.push_back(ql.episodes.back().visited_states);
    runs.ql_pairs.push_back(ql.episodes.back().qtable_pairs);
    runs.oasp_visited.push_back(oasp.episodes.back().visited_states);
    runs.oasp_pairs.push_back(oasp.episodes.back().qtable_pairs);
  }
  runs.done = true;
  return runs;
}

int median_of(std::vector<int> values) {
  std::sort(values.begin(), values.end());
  return values[values.size() / 2];
}

}  // namespace

TEST_CASE("criterion 1: action counts") {
  const std::size_t ff = enumerate_actions(build_spec("fishermans", "original")).size();
  const std::size_t rl = enumerate_actions(build_spec("ropeladder", "original")).size();
  const bool pass = ff == 20 && rl == 28;
  Scoreboard::report(1, pass,
                     "fishermans " + std::to_string(ff) + "/20, ropeladder " +
                         std::to_string(rl) + "/28");
  CHECK(ff == 20);
  CHECK(rl == 28);
}

TEST_CASE("criterion 2: simulator properties on sampled reachable transitions") {
  std::size_t violations = 0;
  std::size_t sampled = 0;

  for (const char* puzzle : {"fishermans", "ropeladder"}) {
    const PuzzleSpec spec = build_spec(puzzle, "original");
    const auto actions = enumerate_actions(spec);
    const auto pool = reachable_states(spec, 64, 60000);
    Rng rng(90210);

    std::size_t moved = 0;
    while (moved < 10000 && sampled < 1000000) {
      ++sampled;
      const PuzzleState& s = pool[rng.uniform_below(pool.size())];
      const ActionTriple& a = actions[rng.uniform_below(actions.size())];
      TransitionResult once = apply(spec, s, a);
      TransitionResult twice = apply(spec, s, a);

      // Purity.
      if (once.moved() != twice.moved()) ++violations;
      if (!once.moved()) {
        if (once.block != twice.block) ++violations;
        continue;
      }
      ++moved;
      if (!(*once.next == *twice.next)) ++violations;

      // Constraint safety and winding limits on the produced state.
      if (!validate_state(spec, *once.next).empty()) ++violations;

      // Reversibility.
      TransitionResult back =
          apply(spec, *once.next, ActionTriple{a.ce, a.he, opposite(a.hf)});
      if (!back.moved() || !(*back.next == s)) ++violations;

      // Notation round-trip.
      if (parse_state(spec, print_state(spec, *once.next)) != *once.next) {
        ++violations;
      }
    }
  }

  const bool pass = violations == 0;
  Scoreboard::report(2, pass,
                     "zero violations required, got " + std::to_string(violations) +
                         " over 2x10000 moved transitions");
  CHECK(violations == 0);
}

TEST_CASE("criterion 3: solvability fixtures") {
  const SolveResult sff = bfs_solve(build_spec("fishermans", "simplified"), 10);
  const SolveResult off = bfs_solve(build_spec("fishermans", "original"), 10);
  const SolveResult srl = bfs_solve(build_spec("ropeladder", "simplified"), 14);
  const SolveResult orl = bfs_solve(build_spec("ropeladder", "original"), 16);

  const bool pass = sff.plan && sff.plan->size() == kOptimalSimplifiedFF &&
                    off.plan && off.plan->size() == kOptimalOriginalFF &&
                    srl.plan && srl.plan->size() == kOptimalSimplifiedRL &&
                    orl.plan && orl.plan->size() == kOptimalOriginalRL;
  std::string detail = "SFF " + std::to_string(sff.plan ? sff.plan->size() : 0) +
                       ", OFF " + std::to_string(off.plan ? off.plan->size() : 0) +
                       ", SRL " + std::to_string(srl.plan ? srl.plan->size() : 0) +
                       ", RL " + std::to_string(orl.plan ? orl.plan->size() : 0) +
                       " (documented manual rope ladder solution: " +
                       std::to_string(kReferenceRopeLadderLength) +
                       " moves; informational)";
  Scoreboard::report(3, pass, detail);
  REQUIRE(sff.plan.has_value());
  REQUIRE(off.plan.has_value());
  REQUIRE(srl.plan.has_value());
  REQUIRE(orl.plan.has_value());
  CHECK(sff.plan->size() == kOptimalSimplifiedFF);
  CHECK(off.plan->size() == kOptimalOriginalFF);
  CHECK(srl.plan->size() == kOptimalSimplifiedRL);
  CHECK(orl.plan->size() == kOptimalOriginalRL);

  // Plans replay to goal states.
  for (auto [spec, plan] :
       {std::pair{build_spec("fishermans", "simplified"), *sff.plan},
        std::pair{build_spec("ropeladder", "original"), *orl.plan}}) {
    PuzzleState s = spec.initial;
    for (const ActionTriple& a : plan) {
      TransitionResult t = apply(spec, s, a);
      REQUIRE(t.moved());
      s = *t.next;
    }
    CHECK(is_goal(spec, s));
  }
}

TEST_CASE("criterion 4: exact update arithmetic") {
  LearnerConfig c;
  bool pass = true;

  {
    QTable q(4);
    q.ensure("s", 0);
    pass &= std::fabs(q_update(q, "s", 0, 1000, "t", c) - 200.0) <= 1e-12;
  }
  {
    QTable q(4);
    q.set("s", 1, 10.0);
    q.set("t", 0, 20.0);
    pass &= std::fabs(q_update(q, "s", 1, -1, "t", c) - 11.4) <= 1e-12;
  }
  {
    QTable q(4);
    q.set("s", 2, 5.0);
    q.set("t", 0, 5.0);
    pass &= std::fabs(q_update(q, "s", 2, -1, "t", c) - 4.7) <= 1e-12;
  }

  QTable q(8);
  std::map<std::pair<std::string, std::size_t>, double> mirror;
  const std::vector<std::string> states = {"a", "b", "c", "d", "e"};
  Rng rng(7);
  std::size_t failures = 0;
  for (int i = 0; i < 10000; ++i) {
    const std::string& s = states[rng.uniform_below(states.size())];
    const std::string& t = states[rng.uniform_below(states.size())];
    const std::size_t action = rng.uniform_below(8);
    const double r = -100 + 1100 * rng.uniform();
    double next_max = 0;
    bool any = false;
    for (std::size_t a2 = 0; a2 < 8; ++a2) {
      auto it = mirror.find({t, a2});
      if (it == mirror.end()) continue;
      if (!any || it->second > next_max) next_max = it->second;
      any = true;
    }
    double& slot = mirror[{s, action}];
    const double expected = slot + c.alpha * (r + c.gamma * next_max - slot);
    slot = expected;
    q.ensure(s, action);
    if (std::fabs(q_update(q, s, action, r, t, c) - expected) > 1e-12) ++failures;
  }
  pass &= failures == 0;
  Scoreboard::report(4, pass,
                     "3 fixtures plus 10000 random tuples at 1e-12, " +
                         std::to_string(failures) + " failures");
  CHECK(pass);
}

TEST_CASE("criterion 5: answer-set enumeration equals brute force") {
  const PuzzleSpec spec = build_spec("ropeladder", "original");
  const auto actions = enumerate_actions(spec);
  Rng rng(515151);
  std::size_t mismatches = 0;

  for (int round = 0; round < 1000; ++round) {
    GlobalProgram gp(spec, actions);
    std::map<std::size_t, std::set<std::size_t>> rules;
    std::set<std::size_t> state_constraints, global_constraints;

    const std::size_t states = 2 + rng.uniform_below(6);
    std::vector<std::size_t> ids;
    for (std::size_t i = 0; i < states; ++i) {
      ids.push_back(gp.ensure_state("state" + std::to_string(i)));
    }
    const std::size_t target = ids[0];

    const std::size_t rule_count = rng.uniform_below(actions.size() + 1);
    for (std::size_t i = 0; i < rule_count; ++i) {
      const std::size_t action = rng.uniform_below(actions.size());
      if (gp.is_forbidden(target, action)) continue;
      const std::size_t succ_count = 1 + rng.uniform_below(5);
      for (std::size_t j = 0; j < succ_count; ++j) {
        const std::size_t succ = ids[rng.uniform_below(ids.size())];
        gp.record_transition(target, action, succ);
        rules[action].insert(succ);
      }
      if (rng.uniform() < 0.15) {
        gp.record_forbidden(target, action);
        state_constraints.insert(action);
        rules.erase(action);
      }
    }
    for (int g = 0; g < 3; ++g) {
      if (rng.uniform() < 0.3) {
        const std::size_t action = rng.uniform_below(actions.size());
        gp.record_forbidden(std::nullopt, action);
        global_constraints.insert(action);
        rules.erase(action);
      }
    }

    std::vector<std::pair<std::size_t, std::size_t>> expected;
    for (const auto& [action, successors] : rules) {
      if (state_constraints.count(action) || global_constraints.count(action)) {
        continue;
      }
      for (std::size_t succ : successors) expected.emplace_back(action, succ);
    }
    if (gp.answer_sets(target) != expected) ++mismatches;
  }
  const bool pass = mismatches == 0;
  Scoreboard::report(5, pass,
                     "1000 random programs, " + std::to_string(mismatches) +
                         " mismatches");
  CHECK(mismatches == 0);
}

TEST_CASE("criterion 6: learners converge to the oracle length") {
  ConvergenceRuns& runs = convergence_runs();
  const int ql_median = median_of(runs.ql_rollouts);
  const int oasp_median = median_of(runs.oasp_rollouts);
  const bool pass = ql_median == runs.optimal && oasp_median == runs.optimal;
  Scoreboard::report(6, pass,
                     "median greedy rollout over last 200 episodes: qlearning " +
                         std::to_string(ql_median) + ", oasp " +
                         std::to_string(oasp_median) + ", oracle " +
                         std::to_string(runs.optimal));
  CHECK(ql_median == runs.optimal);
  CHECK(oasp_median == runs.optimal);
}

TEST_CASE("criterion 7: heuristics accelerate learning") {
  TempDir tmp;
  const PuzzleSpec sff = build_spec("fishermans", "simplified");
  const PuzzleSpec off = build_spec("fishermans", "original");

  // Source policy: one oASP trial on the relaxed puzzle, snapshotted through
  // the on-disk format the CLI uses.
  EnvConfig sff_env = make_env_config(sff);
  LearnerConfig source_cfg;
  source_cfg.episodes = 2000;
  TrialResult source =
      train_trial(AlgorithmKind::oasp, sff_env, source_cfg, nullptr, 1);
  const auto snapshot = tmp.path / "sff_qtable.tsv";
  save_qtable(snapshot, sff, enumerate_actions(sff), source.agent->qtable());
  const HeuristicSource heuristic = load_heuristic_source(snapshot, off);

  EnvConfig env = make_env_config(off);
  LearnerConfig c;
  c.episodes = 1500;

  auto auc_first_1000 = [&](AlgorithmKind kind, const HeuristicSource* src,
                            std::uint64_t seed) {
    TrialResult r = train_trial(kind, env, c, src, seed);
    double sum = 0;
    for (int e = 0; e < 1000; ++e) sum += r.episodes[e].steps;
    return sum;
  };

  std::vector<double> oasp, hoasp, ql, haql;
  for (int k = 0; k < 10; ++k) {
    oasp.push_back(auc_first_1000(AlgorithmKind::oasp, nullptr, kHeuristicBase + k));
    hoasp.push_back(
        auc_first_1000(AlgorithmKind::hoasp, &heuristic, kHeuristicBase + k));
    ql.push_back(
        auc_first_1000(AlgorithmKind::qlearning, nullptr, kHeuristicBase + k));
    haql.push_back(
        auc_first_1000(AlgorithmKind::haql, &heuristic, kHeuristicBase + k));
  }

  const TTestResult asp_test = welch_t_test(hoasp, oasp);
  const TTestResult ql_test = welch_t_test(haql, ql);
  const double hoasp_mean = mean_sd(hoasp).mean, oasp_mean = mean_sd(oasp).mean;
  const double haql_mean = mean_sd(haql).mean, ql_mean = mean_sd(ql).mean;

  const bool pass = hoasp_mean < oasp_mean && asp_test.p < 0.05 &&
                    haql_mean < ql_mean && ql_test.p < 0.05;
  char detail[256];
  std::snprintf(detail, sizeof(detail),
                "steps-AUC first 1000 eps: hoasp %.0f < oasp %.0f (p=%.2e), "
                "haql %.0f < ql %.0f (p=%.2e)",
                hoasp_mean, oasp_mean, asp_test.p, haql_mean, ql_mean, ql_test.p);
  Scoreboard::report(7, pass, detail);
  CHECK(hoasp_mean < oasp_mean);
  CHECK(asp_test.p < 0.05);
  CHECK(haql_mean < ql_mean);
  CHECK(ql_test.p < 0.05);
}

TEST_CASE("criterion 8: exploration ordering") {
  ConvergenceRuns& runs = convergence_runs();
  int wins = 0;
  for (int k = 0; k < 10; ++k) {
    if (runs.oasp_visited[k] >= runs.ql_visited[k] &&
        runs.ql_pairs[k] >= runs.oasp_pairs[k]) {
      ++wins;
    }
  }
  const bool pass = wins >= 8;
  Scoreboard::report(8, pass,
                     "visited(oasp) >= visited(ql) and pairs(ql) >= pairs(oasp) in " +
                         std::to_string(wins) + "/10 paired trials (need >= 8)");
  CHECK(wins >= 8);
}

TEST_CASE("criterion 9: non-stationary switch favors reinitialized q-learning") {
  EnvConfig env = make_env_config(build_spec("fishermans", "nonstationary-disk"));
  REQUIRE(env.nonstationary.has_value());
  env.nonstationary->switch_after_episode = 500;

  LearnerConfig ql_cfg;
  ql_cfg.episodes = 1500;
  ql_cfg.reinit_episode = 501;
  LearnerConfig oasp_cfg;
  oasp_cfg.episodes = 1500;

  int wins = 0;
  for (int k = 0; k < 10; ++k) {
    TrialResult ql = train_trial(AlgorithmKind::qlearning, env, ql_cfg, nullptr,
                                 kSwitchBase + k);
    TrialResult oasp = train_trial(AlgorithmKind::oasp, env, oasp_cfg, nullptr,
                                   kSwitchBase + k);
    double ql_mean = 0, oasp_mean = 0;
    for (int e = 1300; e < 1500; ++e) {
      ql_mean += ql.episodes[e].steps;
      oasp_mean += oasp.episodes[e].steps;
    }
    if (ql_mean / 200 <= oasp_mean / 200) ++wins;
  }
  const bool pass = wins >= 7;
  Scoreboard::report(9, pass,
                     "post-switch mean steps ql <= oasp in " + std::to_string(wins) +
                         "/10 trials (need >= 7)");
  CHECK(wins >= 7);
}

TEST_CASE("criterion 10: perturbation calibration") {
  const PuzzleSpec spec = build_spec("fishermans", "nondeterministic");
  const ActionTriple a = enumerate_actions(spec)[0];
  const PerturbationModel model;
  Rng rng(424242);
  int kept = 0, flipped = 0, dropped = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const auto r = perturb(a, model, rng.uniform());
    if (!r) {
      ++dropped;
    } else if (*r == a) {
      ++kept;
    } else {
      ++flipped;
    }
  }
  const double fk = kept / double(n), ff = flipped / double(n),
               fd = dropped / double(n);
  const bool pass = std::fabs(fk - 0.8) <= 0.01 && std::fabs(ff - 0.1) <= 0.01 &&
                    std::fabs(fd - 0.1) <= 0.01;
  char detail[128];
  std::snprintf(detail, sizeof(detail),
                "empirical (%.4f, %.4f, %.4f) vs (0.8, 0.1, 0.1) +-0.01", fk, ff, fd);
  Scoreboard::report(10, pass, detail);
  CHECK(pass);
}

TEST_CASE("criterion 11: byte-identical reproducibility") {
  TempDir tmp;
  auto make_config = [&](const char* sub) {
    ExperimentConfig config;
    config.env = make_env_config(build_spec("fishermans", "nondeterministic"));
    config.algorithm = AlgorithmKind::oasp;
    config.learner.episodes = 120;
    config.trials = 3;
    config.base_seed = 77;
    config.out_dir = tmp.path / sub;
    return config;
  };
  run_experiment(make_config("a"));
  ExperimentConfig parallel = make_config("b");
  parallel.parallel = true;
  run_experiment(parallel);

  const std::string raw_a = read_file(tmp.path / "a" / "raw.csv");
  const std::string raw_b = read_file(tmp.path / "b" / "raw.csv");
  const std::string agg_a = read_file(tmp.path / "a" / "aggregate.csv");
  const std::string agg_b = read_file(tmp.path / "b" / "aggregate.csv");
  const std::string q_a = read_file(tmp.path / "a" / "trial0" / "qtable.tsv");
  const std::string q_b = read_file(tmp.path / "b" / "trial0" / "qtable.tsv");

  const bool pass = raw_a == raw_b && agg_a == agg_b && q_a == q_b;
  Scoreboard::report(11, pass,
                     pass ? "sequential and parallel reruns match byte for byte"
                          : "outputs differ between reruns");
  CHECK(raw_a == raw_b);
  CHECK(agg_a == agg_b);
  CHECK(q_a == q_b);
}
