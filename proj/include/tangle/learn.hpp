#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "tangle/asp.hpp"
#include "tangle/env.hpp"
#include "tangle/qtable.hpp"
#include "tangle/rng.hpp"

namespace tangle {

enum class AlgorithmKind : std::uint8_t { qlearning, haql, oasp, hoasp };

AlgorithmKind algorithm_from_name(const std::string& name);
const char* algorithm_name(AlgorithmKind kind);
inline bool uses_heuristic(AlgorithmKind k) {
  return k == AlgorithmKind::haql || k == AlgorithmKind::hoasp;
}
inline bool uses_programs(AlgorithmKind k) {
  return k == AlgorithmKind::oasp || k == AlgorithmKind::hoasp;
}

struct LearnerConfig {
  double alpha = 0.2;
  double gamma = 0.9;
  double epsilon_base = 0.1;
  int epsilon_decay_start = 4000;   // episodes at the base rate
  int epsilon_decay_every = 250;    // then one step down per this many episodes
  double epsilon_decay_step = 0.01;
  double epsilon_floor = 0.03;
  double eta = 0.25;  // heuristic margin added on top of the current best value
  double xi = 1.0;    // heuristic weight in the action score
  double beta = 1.0;  // heuristic exponent in the action score
  int max_steps = 500;
  int episodes = 6000;
  // Wipe the table and visited set at the start of this episode (the
  // Q-Learning answer to a mid-run environment change).
  std::optional<int> reinit_episode;
};

double epsilon_at(const LearnerConfig& config, int episode);

// One Q-Learning backup. The entry must exist; the successor's value is the
// max over its existing entries (zero when it has none). Returns the value.
double q_update(QTable& table, const std::string& state, std::size_t action,
                double reward, const std::string& next_state,
                const LearnerConfig& config);

// Knowledge transferred from a solved relaxed puzzle. Identity mapping when
// source and target share their state notation and start state; otherwise
// states correspond through replaying the episode's action trace in the
// source simulator.
enum class MapperKind : std::uint8_t { identity, trace_replay };

struct HeuristicSource {
  PuzzleSpec source_spec;
  std::vector<ActionTriple> source_actions;
  QTable source_q{0};
  MapperKind mapper = MapperKind::identity;
};

// Loads a Q-table snapshot as a heuristic source for the given target spec.
HeuristicSource load_heuristic_source(const std::filesystem::path& path,
                                      const PuzzleSpec& target);

// Per-trial state-correspondence tracker for trace replay. Follows the
// target episode's effective actions in the source simulator; once an action
// fails there, the rest of the episode maps to nothing. The first trace to
// reach a target state fixes its mapping for the whole trial.
class TraceMapper {
 public:
  explicit TraceMapper(const HeuristicSource& source);

  void begin_episode(const std::string& target_initial_key);
  void observe_move(const ActionTriple& realized, const std::string& target_key_after);
  // Mapped source state key, or nothing when the target state has no image.
  std::optional<std::string> lookup(const std::string& target_key) const;

 private:
  void memoize(const std::string& target_key);

  const HeuristicSource* source_;
  std::unordered_map<std::string, std::optional<std::string>> memo_;
  PuzzleState replay_;
  bool alive_ = false;
};

// Heuristic bonus per action: the source's preferred action for the mapped
// state is lifted just above the current argmax (max Q - Q(s, a*) + eta),
// everything else gets zero.
std::vector<double> heuristic_values(const QTable& target_q,
                                     const HeuristicSource& source,
                                     const std::optional<std::string>& mapped_key,
                                     const std::string& state_key,
                                     std::size_t action_count,
                                     const LearnerConfig& config);

struct EpisodeMetrics {
  int steps = 0;
  double accumulated_return = 0;
  std::size_t visited_states = 0;  // distinct states occupied so far this trial
  std::size_t qtable_pairs = 0;    // entries in the table after the episode
};

// One agent owns one trial: its table, its programs (for the ASP variants),
// its exploration stream, and its trace mapper.
class Agent {
 public:
  Agent(AlgorithmKind kind, const PuzzleSpec& spec, const LearnerConfig& config,
        const HeuristicSource* source, std::uint64_t agent_seed);

  AlgorithmKind kind() const { return kind_; }
  const QTable& qtable() const { return qtable_; }
  QTable& mutable_qtable() { return qtable_; }
  const GlobalProgram* program() const { return program_.get(); }
  const LearnerConfig& config() const { return config_; }

  // Runs one episode against the environment (schedule tick, reset, loop).
  EpisodeMetrics run_episode(Environment& env, int episode);

  // Actions not ruled out for this state: everything for the plain learners,
  // everything minus recorded constraints for the ASP ones.
  std::vector<std::size_t> admissible_actions(const std::string& state_key) const;

  std::size_t select_action(const std::string& state_key, int episode);

 private:
  double score(const std::string& state_key, std::size_t action,
               const std::vector<double>* heuristic) const;

  AlgorithmKind kind_;
  PuzzleSpec spec_;
  std::vector<ActionTriple> actions_;
  LearnerConfig config_;
  const HeuristicSource* source_;
  QTable qtable_;
  std::unique_ptr<GlobalProgram> program_;
  std::optional<TraceMapper> mapper_;
  Rng rng_;
};

// Greedy walk from the puzzle's initial state (no exploration, no learning).
// Returns the number of steps taken; hitting the cap means no goal.
int greedy_rollout(const PuzzleSpec& spec, const QTable& table,
                   const GlobalProgram* program, int max_steps);

struct TrialResult {
  std::vector<EpisodeMetrics> episodes;
  std::unique_ptr<Agent> agent;
};

// Trains one agent for the configured number of episodes. The observer, when
// set, runs after every episode (probe rollouts, convergence tracking).
TrialResult train_trial(
    AlgorithmKind kind, const EnvConfig& env_config, const LearnerConfig& config,
    const HeuristicSource* source, std::uint64_t trial_seed,
    const std::function<void(int episode, const Agent&)>& observer = {});

}  // namespace tangle
