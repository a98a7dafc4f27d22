#include "tangle/env.hpp"

#include <stdexcept>

namespace tangle {

EnvConfig make_env_config(const PuzzleSpec& spec) {
  EnvConfig cfg;
  cfg.spec = spec;
  if (spec.variant == "nondeterministic") {
    cfg.determinism = Determinism::nondeterministic;
  }
  if (spec.variant == "nonstationary-disk") {
    cfg.nonstationary = disk_switch(spec, 2000);
  }
  return cfg;
}

NonstationaryConfig disk_switch(const PuzzleSpec& spec, int switch_after_episode) {
  NonstationaryConfig ns;
  ns.switch_after_episode = switch_after_episode;
  const ObjectIndex disk1 = spec.index_of("Disk1");
  const ObjectIndex disk2 = spec.index_of("Disk2");
  const ObjectIndex ring = spec.index_of("Ring");
  const ObjectIndex post_hole = spec.index_of("PostHole1");
  ns.overrides = {
      {disk1, ring, false},
      {disk2, ring, false},
      {disk1, post_hole, true},
      {disk2, post_hole, true},
  };
  return ns;
}

std::optional<ActionTriple> perturb(const ActionTriple& intended,
                                    const PerturbationModel& model, double u) {
  if (u < model.p_intended) return intended;
  if (u < model.p_intended + model.p_opposite) {
    return ActionTriple{intended.ce, intended.he, opposite(intended.hf)};
  }
  return std::nullopt;
}

Environment::Environment(EnvConfig config, std::uint64_t env_seed)
    : config_(std::move(config)),
      spec_(config_.spec),
      actions_(enumerate_actions(spec_)),
      rng_(env_seed),
      current_(spec_.initial) {}

void Environment::schedule_tick(int episode) {
  if (!config_.nonstationary || switched_) return;
  if (episode <= config_.nonstationary->switch_after_episode) return;
  for (const FitsOverride& o : config_.nonstationary->overrides) {
    spec_.fits_table[o.element][o.host] = o.fits;
  }
  switched_ = true;
}

const PuzzleState& Environment::reset() {
  current_ = spec_.initial;
  steps_ = 0;
  terminal_ = false;
  return current_;
}

StepOutcome Environment::step(std::size_t action_index) {
  if (terminal_) throw std::logic_error("step on a terminal episode");
  const ActionTriple& intended = actions_.at(action_index);

  std::optional<ActionTriple> realized = intended;
  if (config_.determinism == Determinism::nondeterministic) {
    realized = perturb(intended, config_.perturbation, rng_.uniform());
  }

  StepOutcome out;
  out.realized = realized;
  if (realized) {
    // The opposite-face twin of any enumerated action is also enumerated.
    for (std::size_t i = 0; i < actions_.size(); ++i) {
      if (actions_[i] == *realized) {
        out.realized_index = i;
        break;
      }
    }
    TransitionResult t = apply(spec_, current_, *realized);
    if (t.moved()) {
      if (is_goal(spec_, *t.next)) {
        out.reward = config_.rewards.goal;
        out.terminal = true;
      } else if (*t.next == current_) {
        out.reward = config_.rewards.impossible;
        out.impossible = true;
      } else {
        out.reward = config_.rewards.step;
      }
      current_ = std::move(*t.next);
    } else {
      out.reward = config_.rewards.impossible;
      out.impossible = true;
      out.impossible_everywhere = t.block == BlockReason::does_not_fit;
    }
  } else {
    out.reward = config_.noop_reward.value_or(config_.rewards.impossible);
  }

  ++steps_;
  if (steps_ >= config_.max_steps_per_episode) out.terminal = true;
  terminal_ = out.terminal;
  out.next = current_;
  return out;
}

}  // namespace tangle
