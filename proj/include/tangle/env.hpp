#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tangle/puzzle.hpp"
#include "tangle/rng.hpp"

namespace tangle {

// Episodic MDP wrapper around the puzzle simulator: reward schedule, step
// budget, optional action noise, and the mid-run constraint switch of the
// non-stationary variant.

struct RewardSchedule {
  double impossible = -100.0;  // blocked actions and moves that change nothing
  double goal = 1000.0;
  double step = -1.0;
};

enum class Determinism : std::uint8_t { deterministic, nondeterministic };

struct PerturbationModel {
  double p_intended = 0.8;
  double p_opposite = 0.1;  // remainder: no action at all
};

struct FitsOverride {
  ObjectIndex element;
  ObjectIndex host;
  bool fits;
};

struct NonstationaryConfig {
  int switch_after_episode = 2000;  // overrides apply from the next episode on
  std::vector<FitsOverride> overrides;
};

struct EnvConfig {
  PuzzleSpec spec;
  Determinism determinism = Determinism::deterministic;
  PerturbationModel perturbation;
  std::optional<NonstationaryConfig> nonstationary;
  int max_steps_per_episode = 500;
  RewardSchedule rewards;
  // Reward when noise suppresses the action entirely. The agent stays in
  // place, which the schedule treats like an impossible action; override to
  // score it as a plain step instead.
  std::optional<double> noop_reward;
};

// Environment config for a named puzzle variant: nondeterministic variants
// get action noise, the disk variant gets its constraint switch.
EnvConfig make_env_config(const PuzzleSpec& spec);

// The disk variant's switch: disks stop fitting the ring and start fitting
// the post hole, turning the puzzle into the original Fisherman's Folly.
NonstationaryConfig disk_switch(const PuzzleSpec& spec, int switch_after_episode);

struct StepOutcome {
  PuzzleState next;
  double reward = 0;
  bool terminal = false;
  // Action the noise actually produced; empty means no action happened.
  std::optional<ActionTriple> realized;
  std::optional<std::size_t> realized_index;
  bool impossible = false;             // realized action was blocked or changed nothing
  bool impossible_everywhere = false;  // a size misfit, invalid in every state
};

// Draw-once noise: u < 0.8 keeps the action, u < 0.9 flips the hole face,
// otherwise nothing happens.
std::optional<ActionTriple> perturb(const ActionTriple& intended,
                                    const PerturbationModel& model, double u);

class Environment {
 public:
  Environment(EnvConfig config, std::uint64_t env_seed);

  const PuzzleSpec& spec() const { return spec_; }
  const std::vector<ActionTriple>& actions() const { return actions_; }

  // Applies the constraint switch when its episode has been reached. Safe to
  // call every episode; the switch fires exactly once.
  void schedule_tick(int episode);

  const PuzzleState& reset();
  const PuzzleState& current() const { return current_; }
  int steps_taken() const { return steps_; }
  bool terminal() const { return terminal_; }

  StepOutcome step(std::size_t action_index);

 private:
  EnvConfig config_;
  PuzzleSpec spec_;  // fits table mutates at the switch
  std::vector<ActionTriple> actions_;
  Rng rng_;
  PuzzleState current_;
  int steps_ = 0;
  bool terminal_ = false;
  bool switched_ = false;
};

}  // namespace tangle
