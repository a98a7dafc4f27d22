#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "tangle/puzzle.hpp"

namespace tangle {

// Chain notation: `chain(Post)=[+Ring];chain(String)=[+Sphere1,+Post,+Sphere2]`
// with `[]` for an empty chain. Crossings use the hole's chain label (a hole
// at a post's head prints under the post's name). Plans and actions print as
// `pass(Disk1,PostHole1,-)`, one per line.

struct ParseError : std::runtime_error {
  ParseError(std::size_t column_, const std::string& what_)
      : std::runtime_error("column " + std::to_string(column_ + 1) + ": " + what_),
        column(column_) {}
  std::size_t column;
};

std::string print_state(const PuzzleSpec& spec, const PuzzleState& state);
PuzzleState parse_state(const PuzzleSpec& spec, const std::string& text);

// Stable textual identity of a state: chains in lexicographic owner order,
// no whitespace. Two states are behaviorally identical iff their keys match.
using CanonicalKey = std::string;
CanonicalKey canonical_key(const PuzzleSpec& spec, const PuzzleState& state);

std::string print_action(const PuzzleSpec& spec, const ActionTriple& action);
ActionTriple parse_action(const PuzzleSpec& spec, const std::string& text);

std::string print_plan(const PuzzleSpec& spec, const std::vector<ActionTriple>& plan);

}  // namespace tangle
