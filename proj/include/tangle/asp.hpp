#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tangle/puzzle.hpp"
#include "tangle/qtable.hpp"

namespace tangle {

// Logic-program record of what the agent has learned about the transition
// system. Every visited state owns one program: a choice rule per observed
// action listing its known successors, plus integrity constraints for the
// actions found impossible there. A separate global constraint set holds
// actions impossible in every state. Atoms are numbered registries: states
// s0, s1, ... in discovery order, actions a0, a1, ... in enumeration order.
//
// The fragment needs no general solver: each choice rule fires alone (one
// action happens at a time), so the stable models of a state's program are
// exactly one (action, successor) pick per unconstrained rule head.

struct StateProgram {
  std::size_t state = 0;
  std::map<std::size_t, std::set<std::size_t>> rules;  // action -> successors
  std::set<std::size_t> constraints;                   // forbidden actions here

  bool operator==(const StateProgram&) const = default;
};

class GlobalProgram {
 public:
  GlobalProgram(const PuzzleSpec& spec, const std::vector<ActionTriple>& actions);

  std::size_t action_count() const { return action_labels_.size(); }
  const std::string& action_label(std::size_t a) const { return action_labels_[a]; }

  bool has_state(const std::string& key) const { return state_ids_.count(key) > 0; }
  std::size_t ensure_state(const std::string& key);
  std::optional<std::size_t> find_state(const std::string& key) const;
  const std::string& state_label(std::size_t s) const { return state_labels_[s]; }
  std::size_t state_count() const { return state_labels_.size(); }

  bool is_globally_forbidden(std::size_t action) const {
    return global_constraints_.count(action) > 0;
  }
  bool is_forbidden(std::size_t state, std::size_t action) const;

  // Adds (or extends) the choice rule for (state, action) with the observed
  // successor. Repeating an observation changes nothing. Recording against a
  // constrained pair is a caller bug.
  void record_transition(std::size_t state, std::size_t action, std::size_t successor);

  // Marks the action impossible, per state or globally, revising away any
  // choice rules previously learned for it.
  void record_forbidden(std::optional<std::size_t> state, std::size_t action);

  // Stable models for the state: (action, successor) pairs ordered by action
  // then successor index.
  std::vector<std::pair<std::size_t, std::size_t>> answer_sets(std::size_t state) const;

  // Ensures a zero-initialized Q entry for every action in the state's
  // answer sets. Never touches constrained actions or existing values.
  void seed_q_rows(std::size_t state, QTable& table) const;

  const StateProgram& program(std::size_t state) const;
  const std::set<std::size_t>& global_constraints() const { return global_constraints_; }

  std::string print_rules(std::size_t state) const;
  std::string print_state_constraints(std::size_t state) const;
  std::string print_global_constraints() const;
  // Rules followed by constraints, the full per-state program.
  std::string print_program(std::size_t state) const;
  std::string print_registry_tsv() const;

  // Layout: s<N>.rules and s<N>.constraints per state, global.constraints,
  // and the atom registry atoms.tsv.
  void write_files(const std::filesystem::path& dir) const;

 private:
  std::vector<std::string> action_labels_;
  std::vector<std::string> state_labels_;
  std::map<std::string, std::size_t> state_ids_;
  std::vector<StateProgram> programs_;
  std::set<std::size_t> global_constraints_;
};

// Structural inverse of print_program for one state's text. Comment lines
// (leading '%') are ignored. Atom syntax errors and atoms beyond the given
// action count are rejected; action_count 0 skips that bound.
StateProgram parse_program(const std::string& text, std::size_t action_count = 0);

// Structural inverse of print_global_constraints.
std::set<std::size_t> parse_global_constraints(const std::string& text,
                                               std::size_t action_count = 0);

}  // namespace tangle
