#include "tangle/learn.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

#include "tangle/notation.hpp"

namespace tangle {

AlgorithmKind algorithm_from_name(const std::string& name) {
  if (name == "qlearning") return AlgorithmKind::qlearning;
  if (name == "haql") return AlgorithmKind::haql;
  if (name == "oasp") return AlgorithmKind::oasp;
  if (name == "hoasp") return AlgorithmKind::hoasp;
  throw std::invalid_argument("unknown algorithm: " + name);
}

const char* algorithm_name(AlgorithmKind kind) {
  switch (kind) {
    case AlgorithmKind::qlearning: return "qlearning";
    case AlgorithmKind::haql: return "haql";
    case AlgorithmKind::oasp: return "oasp";
    case AlgorithmKind::hoasp: return "hoasp";
  }
  return "?";
}

double epsilon_at(const LearnerConfig& c, int episode) {
  if (episode <= c.epsilon_decay_start) return c.epsilon_base;
  const int steps_down = (episode - c.epsilon_decay_start) / c.epsilon_decay_every;
  return std::max(c.epsilon_floor, c.epsilon_base - c.epsilon_decay_step * steps_down);
}

double q_update(QTable& table, const std::string& state, std::size_t action,
                double reward, const std::string& next_state,
                const LearnerConfig& config) {
  const double old_value = table.get(state, action);
  const double next_best = table.max_existing(next_state);
  const double value =
      old_value + config.alpha * (reward + config.gamma * next_best - old_value);
  table.set(state, action, value);
  return value;
}

HeuristicSource load_heuristic_source(const std::filesystem::path& path,
                                      const PuzzleSpec& target) {
  QTableSnapshot snap = load_qtable(path);
  HeuristicSource src;
  src.source_spec = std::move(snap.spec);
  src.source_actions = enumerate_actions(src.source_spec);
  src.source_q = std::move(snap.table);
  const bool same_notation =
      src.source_spec.puzzle == target.puzzle &&
      canonical_key(src.source_spec, src.source_spec.initial) ==
          canonical_key(target, target.initial);
  src.mapper = same_notation ? MapperKind::identity : MapperKind::trace_replay;
  return src;
}

TraceMapper::TraceMapper(const HeuristicSource& source) : source_(&source) {}

void TraceMapper::begin_episode(const std::string& target_initial_key) {
  replay_ = source_->source_spec.initial;
  alive_ = true;
  memoize(target_initial_key);
}

void TraceMapper::observe_move(const ActionTriple& realized,
                               const std::string& target_key_after) {
  if (alive_) {
    TransitionResult t = apply(source_->source_spec, replay_, realized);
    if (t.moved()) {
      replay_ = std::move(*t.next);
    } else {
      alive_ = false;
    }
  }
  memoize(target_key_after);
}

void TraceMapper::memoize(const std::string& target_key) {
  if (memo_.count(target_key)) return;  // the first trace wins
  if (alive_) {
    memo_.emplace(target_key, canonical_key(source_->source_spec, replay_));
  } else {
    memo_.emplace(target_key, std::nullopt);
  }
}

std::optional<std::string> TraceMapper::lookup(const std::string& target_key) const {
  auto it = memo_.find(target_key);
  if (it == memo_.end()) return std::nullopt;
  return it->second;
}

std::vector<double> heuristic_values(const QTable& target_q,
                                     const HeuristicSource& source,
                                     const std::optional<std::string>& mapped_key,
                                     const std::string& state_key,
                                     std::size_t action_count,
                                     const LearnerConfig& config) {
  std::vector<double> h(action_count, 0.0);
  if (!mapped_key) return h;
  // The source table speaks in its own action indexing; both puzzles here
  // share one action set, so indices line up by construction.
  std::optional<std::size_t> suggested = source.source_q.best_action(*mapped_key);
  if (!suggested || *suggested >= action_count) return h;
  // Max over the whole action list, absent entries reading as zero.
  double best = target_q.get(state_key, 0);
  for (std::size_t a = 1; a < action_count; ++a) {
    best = std::max(best, target_q.get(state_key, a));
  }
  h[*suggested] = best - target_q.get(state_key, *suggested) + config.eta;
  return h;
}

Agent::Agent(AlgorithmKind kind, const PuzzleSpec& spec, const LearnerConfig& config,
             const HeuristicSource* source, std::uint64_t agent_seed)
    : kind_(kind),
      spec_(spec),
      actions_(enumerate_actions(spec)),
      config_(config),
      source_(source),
      qtable_(actions_.size()),
      rng_(agent_seed) {
  if (uses_heuristic(kind_) && !source_) {
    throw std::invalid_argument("heuristic algorithm needs a heuristic source");
  }
  if (uses_programs(kind_)) {
    program_ = std::make_unique<GlobalProgram>(spec_, actions_);
  }
  if (source_ && source_->mapper == MapperKind::trace_replay) {
    mapper_.emplace(*source_);
  }
}

std::vector<std::size_t> Agent::admissible_actions(const std::string& state_key) const {
  std::vector<std::size_t> out;
  out.reserve(actions_.size());
  if (program_) {
    const auto state = program_->find_state(state_key);
    for (std::size_t a = 0; a < actions_.size(); ++a) {
      if (program_->is_globally_forbidden(a)) continue;
      if (state && program_->is_forbidden(*state, a)) continue;
      out.push_back(a);
    }
  } else {
    for (std::size_t a = 0; a < actions_.size(); ++a) out.push_back(a);
  }
  // Constraints never exhaust the action set in these puzzles: something
  // always moves (the string tip, if nothing else).
  assert(!out.empty());
  return out;
}

double Agent::score(const std::string& state_key, std::size_t action,
                    const std::vector<double>* heuristic) const {
  double s = qtable_.get(state_key, action);
  if (heuristic) {
    s += config_.xi * std::pow((*heuristic)[action], config_.beta);
  }
  return s;
}

std::size_t Agent::select_action(const std::string& state_key, int episode) {
  const std::vector<std::size_t> admissible = admissible_actions(state_key);

  if (rng_.uniform() < epsilon_at(config_, episode)) {
    return admissible[rng_.uniform_below(admissible.size())];
  }

  std::vector<double> h;
  const std::vector<double>* heuristic = nullptr;
  if (source_) {
    std::optional<std::string> mapped;
    if (mapper_) {
      mapped = mapper_->lookup(state_key);
    } else {
      mapped = state_key;
    }
    h = heuristic_values(qtable_, *source_, mapped, state_key, actions_.size(),
                         config_);
    heuristic = &h;
  }

  double best = score(state_key, admissible[0], heuristic);
  std::vector<std::size_t> ties{admissible[0]};
  for (std::size_t i = 1; i < admissible.size(); ++i) {
    const double s = score(state_key, admissible[i], heuristic);
    if (s > best) {
      best = s;
      ties.assign(1, admissible[i]);
    } else if (s == best) {
      ties.push_back(admissible[i]);
    }
  }
  if (ties.size() == 1) return ties[0];
  return ties[rng_.uniform_below(ties.size())];
}

EpisodeMetrics Agent::run_episode(Environment& env, int episode) {
  if (config_.reinit_episode && episode == *config_.reinit_episode) {
    qtable_.clear();
  }
  env.schedule_tick(episode);
  env.reset();
  if (mapper_) {
    mapper_->begin_episode(canonical_key(spec_, env.current()));
  }

  EpisodeMetrics metrics;

  while (!env.terminal()) {
    const std::string state_key = canonical_key(spec_, env.current());
    qtable_.mark_visited(state_key);

    std::size_t action;
    if (program_) {
      if (!program_->has_state(state_key)) {
        // First visit: register the state and act at random (among actions
        // not already globally ruled out).
        program_->ensure_state(state_key);
        const auto admissible = admissible_actions(state_key);
        action = admissible[rng_.uniform_below(admissible.size())];
      } else {
        action = select_action(state_key, episode);
      }
    } else {
      qtable_.ensure_full_row(state_key);
      action = select_action(state_key, episode);
    }

    const StepOutcome out = env.step(action);
    metrics.steps += 1;
    metrics.accumulated_return += out.reward;
    const std::string next_key = canonical_key(spec_, out.next);

    if (program_) {
      const std::size_t state_id = *program_->find_state(state_key);
      if (out.impossible && out.realized_index) {
        // The environment names the offending action; a size misfit holds
        // everywhere and is recorded globally.
        const std::size_t bad = *out.realized_index;
        if (out.impossible_everywhere) {
          program_->record_forbidden(std::nullopt, bad);
          qtable_.erase_action_everywhere(bad);
        } else {
          program_->record_forbidden(state_id, bad);
          qtable_.erase(state_key, bad);
        }
      } else if (out.realized && !out.impossible) {
        program_->record_transition(state_id, action,
                                    program_->ensure_state(next_key));
      }
      program_->seed_q_rows(state_id, qtable_);
      if (!program_->is_forbidden(state_id, action)) {
        qtable_.ensure(state_key, action);
        q_update(qtable_, state_key, action, out.reward, next_key, config_);
      }
    } else {
      q_update(qtable_, state_key, action, out.reward, next_key, config_);
    }

    if (mapper_ && out.realized && !out.impossible) {
      mapper_->observe_move(*out.realized, next_key);
    }
  }

  metrics.visited_states = qtable_.visited_count();
  metrics.qtable_pairs = qtable_.pair_count();
  return metrics;
}

int greedy_rollout(const PuzzleSpec& spec, const QTable& table,
                   const GlobalProgram* program, int max_steps) {
  EnvConfig cfg;
  cfg.spec = spec;
  cfg.max_steps_per_episode = max_steps;
  Environment env(cfg, 0);
  env.reset();

  const std::vector<ActionTriple> actions = enumerate_actions(spec);
  while (!env.terminal()) {
    const std::string key = canonical_key(spec, env.current());
    std::optional<std::size_t> pick;
    double best = 0;
    for (std::size_t a = 0; a < actions.size(); ++a) {
      if (program) {
        if (program->is_globally_forbidden(a)) continue;
        const auto sid = program->find_state(key);
        if (sid && program->is_forbidden(*sid, a)) continue;
      }
      const double v = table.get(key, a);
      if (!pick || v > best) {
        pick = a;
        best = v;
      }
    }
    if (!pick) return max_steps;
    env.step(*pick);
  }
  return env.steps_taken();
}

TrialResult train_trial(
    AlgorithmKind kind, const EnvConfig& env_config, const LearnerConfig& config,
    const HeuristicSource* source, std::uint64_t trial_seed,
    const std::function<void(int episode, const Agent&)>& observer) {
  Environment env(env_config, Rng::stream(trial_seed, 0).next_u64());
  TrialResult result;
  result.agent = std::make_unique<Agent>(kind, env_config.spec, config, source,
                                         Rng::stream(trial_seed, 1).next_u64());
  result.episodes.reserve(config.episodes);
  for (int episode = 1; episode <= config.episodes; ++episode) {
    result.episodes.push_back(result.agent->run_episode(env, episode));
    if (observer) observer(episode, *result.agent);
  }
  return result;
}

}  // namespace tangle
