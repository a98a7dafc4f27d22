#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "tangle/puzzle.hpp"

namespace tangle {

struct SolveResult {
  // Shortest action sequence from the initial state to a goal state, absent
  // when no goal lies within max_depth. Ties break toward the plan whose
  // actions come first in enumeration order.
  std::optional<std::vector<ActionTriple>> plan;
  std::size_t states_expanded = 0;
};

// Exact breadth-first search over canonical states; the ground-truth oracle
// for plan lengths and reachability. max_states caps memory (0 = unlimited);
// hitting the cap reports no plan, like depth exhaustion.
SolveResult bfs_solve(const PuzzleSpec& spec, int max_depth,
                      std::size_t max_states = 0);

// Every distinct state reachable within the given depth (the initial state
// included), in breadth-first discovery order, optionally capped in size.
std::vector<PuzzleState> reachable_states(const PuzzleSpec& spec, int max_depth,
                                          std::size_t max_states = 0);

}  // namespace tangle
