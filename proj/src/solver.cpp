#include "tangle/solver.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "tangle/notation.hpp"

namespace tangle {

namespace {

// Compact byte form of a state used as the dedup key: one byte per crossing,
// NUL between chains. Far smaller than chain notation, and short states stay
// within the small-string buffer.
std::string encode_state(const PuzzleState& s) {
  std::string out;
  for (std::size_t i = 0; i < s.chains.size(); ++i) {
    if (i > 0) out.push_back('\0');
    for (const Crossing& c : s.chains[i]) {
      out.push_back(static_cast<char>(
          2 + (static_cast<unsigned>(c.hole) << 1) +
          (c.face == HoleFace::negative ? 1u : 0u)));
    }
  }
  return out;
}

PuzzleState decode_state(const std::string& bytes, std::size_t chain_count) {
  PuzzleState s;
  s.chains.resize(chain_count);
  std::size_t slot = 0;
  for (char raw : bytes) {
    if (raw == '\0') {
      ++slot;
      continue;
    }
    const unsigned v = static_cast<unsigned char>(raw) - 2u;
    s.chains[slot].push_back(
        {(v & 1u) ? HoleFace::negative : HoleFace::positive,
         static_cast<ObjectIndex>(v >> 1)});
  }
  return s;
}

struct Node {
  std::uint32_t parent;
  std::uint16_t via_action;
  std::uint16_t depth;
};

}  // namespace

SolveResult bfs_solve(const PuzzleSpec& spec, int max_depth,
                      std::size_t max_states) {
  if (max_depth < 1) throw std::invalid_argument("max_depth must be >= 1");

  const std::vector<ActionTriple> actions = enumerate_actions(spec);
  const std::size_t chain_count = spec.long_objects.size();

  std::unordered_map<std::string, std::uint32_t> index;
  std::vector<const std::string*> key_of;
  std::vector<Node> nodes;

  auto intern = [&](const PuzzleState& s) -> std::pair<std::uint32_t, bool> {
    auto [it, inserted] =
        index.emplace(encode_state(s), static_cast<std::uint32_t>(key_of.size()));
    if (inserted) key_of.push_back(&it->first);
    return {it->second, inserted};
  };

  intern(spec.initial);
  nodes.push_back({0, 0, 0});

  SolveResult result;

  auto plan_to = [&](std::uint32_t i) {
    std::vector<ActionTriple> plan;
    while (nodes[i].depth > 0) {
      plan.push_back(actions[nodes[i].via_action]);
      i = nodes[i].parent;
    }
    std::reverse(plan.begin(), plan.end());
    return plan;
  };

  if (is_goal(spec, spec.initial)) {
    result.plan = std::vector<ActionTriple>{};
    result.states_expanded = 1;
    return result;
  }

  for (std::uint32_t head = 0; head < nodes.size(); ++head) {
    ++result.states_expanded;
    if (nodes[head].depth >= max_depth) continue;
    const PuzzleState state = decode_state(*key_of[head], chain_count);
    for (std::size_t a = 0; a < actions.size(); ++a) {
      if (max_states && key_of.size() >= max_states) return result;
      TransitionResult t = apply(spec, state, actions[a]);
      if (!t.moved()) continue;
      auto [id, fresh] = intern(*t.next);
      if (!fresh) continue;
      nodes.push_back({head, static_cast<std::uint16_t>(a),
                       static_cast<std::uint16_t>(nodes[head].depth + 1)});
      if (is_goal(spec, *t.next)) {
        result.plan = plan_to(id);
        return result;
      }
    }
  }
  return result;
}

std::vector<PuzzleState> reachable_states(const PuzzleSpec& spec, int max_depth,
                                          std::size_t max_states) {
  const std::vector<ActionTriple> actions = enumerate_actions(spec);
  const std::size_t chain_count = spec.long_objects.size();

  std::unordered_map<std::string, std::uint32_t> index;
  std::vector<const std::string*> key_of;
  std::vector<std::uint16_t> depth;

  index.emplace(encode_state(spec.initial), 0);
  key_of.push_back(&index.begin()->first);
  depth.push_back(0);

  for (std::uint32_t head = 0; head < key_of.size(); ++head) {
    if (depth[head] >= max_depth) break;  // breadth-first: the rest is deeper
    if (max_states && key_of.size() >= max_states) break;
    const PuzzleState state = decode_state(*key_of[head], chain_count);
    for (const ActionTriple& action : actions) {
      if (max_states && key_of.size() >= max_states) break;
      TransitionResult t = apply(spec, state, action);
      if (!t.moved()) continue;
      auto [it, inserted] = index.emplace(
          encode_state(*t.next), static_cast<std::uint32_t>(key_of.size()));
      if (!inserted) continue;
      key_of.push_back(&it->first);
      depth.push_back(static_cast<std::uint16_t>(depth[head] + 1));
    }
  }

  std::vector<PuzzleState> states;
  states.reserve(key_of.size());
  for (const std::string* key : key_of) states.push_back(decode_state(*key, chain_count));
  return states;
}

}  // namespace tangle
