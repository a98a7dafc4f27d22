#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace tangle {

// Model of string-and-hole entanglement puzzles. A state is one crossing
// chain per long object: the ordered tail-to-head list of holes the object
// passes through, each signed by the exit face. Passing an object through a
// hole rewrites the chains; nothing else ever changes.

enum class ObjectClass : std::uint8_t { regular, holed, long_object };

enum class HoleFace : std::uint8_t { positive, negative };

inline HoleFace opposite(HoleFace f) {
  return f == HoleFace::positive ? HoleFace::negative : HoleFace::positive;
}

// Index into PuzzleSpec::objects.
using ObjectIndex = std::uint8_t;
inline constexpr ObjectIndex kNoObject = 0xff;

enum class ChainEnd : std::uint8_t { tail, head };

// Where a holed object sits relative to the long objects. A hole at the head
// of a long object is structurally part of it (a post's eye); a threaded hole
// merely has a long object running through it (a bead on a string).
enum class HolePlacement : std::uint8_t { free_standing, threaded_on, at_head_of };

struct ObjectDef {
  std::string name;
  ObjectClass cls = ObjectClass::regular;

  // Holed objects only.
  HolePlacement placement = HolePlacement::free_standing;
  ObjectIndex placed_on = kNoObject;
  std::string crossing_label;  // name used for this hole in chain notation

  // Regular objects only: fixed to one end of a long object, or to nothing.
  ObjectIndex attached_to = kNoObject;
  ChainEnd attached_end = ChainEnd::tail;
};

struct Crossing {
  HoleFace face;
  ObjectIndex hole;  // the holed object being crossed
  auto operator<=>(const Crossing&) const = default;
};

// One chain per long object, in PuzzleSpec::long_objects order.
struct PuzzleState {
  std::vector<std::vector<Crossing>> chains;
  auto operator<=>(const PuzzleState&) const = default;
};

struct ActionTriple {
  ObjectIndex ce;  // crossing element: what passes through
  ObjectIndex he;  // host element: whose hole it passes through
  HoleFace hf;     // which face it exits toward
  auto operator<=>(const ActionTriple&) const = default;
};

struct PuzzleSpec {
  std::string puzzle;
  std::string variant;

  std::vector<ObjectDef> objects;
  std::vector<ObjectIndex> crossing_elements;  // CE candidates, declaration order
  std::vector<ObjectIndex> host_elements;      // HE candidates, declaration order
  std::vector<ObjectIndex> long_objects;       // chain owners, sorted by name

  // fits[x][h]: object x (or a segment of long object x) passes through the
  // hole of h without breaking the puzzle. Never consulted for x == h.
  std::vector<std::vector<bool>> fits_table;

  // (ce, he) pairs excluded from the action set a priori.
  std::set<std::pair<ObjectIndex, ObjectIndex>> forbidden_pairs;

  int winding_limit = 2;  // max run of same-sign crossings of one hole
  std::map<std::pair<ObjectIndex, ObjectIndex>, int> winding_overrides;

  // Room in a hole: how many times one long object can cross one hole at
  // all, either direction. Keeps the state space finite the way a real hole
  // does; winding limits alone still allow unbounded alternating chains.
  int crossing_cap = 4;
  std::map<std::pair<ObjectIndex, ObjectIndex>, int> crossing_cap_overrides;

  int crossing_cap_for(ObjectIndex owner, ObjectIndex hole) const;

  // The hole whose disentanglement is the goal (the Ring).
  ObjectIndex goal_hole = kNoObject;

  PuzzleState initial;

  // Adjacent opposite-face crossings of the same hole cancel after every
  // pass: a loop pushed through a hole and straight back slides out, which is
  // what makes a ring slide along a string past a bead. Also the property
  // that makes every pass the exact inverse of its opposite-face twin.
  // Disabling it keeps every inserted pair in place.
  bool reduce_after_pass = true;

  ObjectIndex index_of(const std::string& name) const;
  const std::string& name_of(ObjectIndex i) const { return objects[i].name; }
  bool fits(ObjectIndex x, ObjectIndex host) const { return fits_table[x][host]; }
  int winding_limit_for(ObjectIndex owner, ObjectIndex hole) const;
  std::size_t chain_slot(ObjectIndex long_object) const;
};

struct BuildOptions {
  int global_winding_limit = 2;
  // The simplified Fisherman's Folly restricts how often the string may wind
  // through the post hole; 1 forbids winding outright, 2 allows one doubling.
  int simplified_string_post_limit = 1;
  // Default crossing caps differ per puzzle (3 for the Fisherman's Folly,
  // 4 for the Rope Ladder, which is unsolvable at 3).
  std::optional<int> crossing_cap;
};

// Known puzzles: "fishermans" (variants: simplified, original,
// nondeterministic, nonstationary-disk) and "ropeladder" (simplified,
// original). Throws std::invalid_argument for anything else.
PuzzleSpec build_spec(const std::string& puzzle, const std::string& variant,
                      const BuildOptions& options = {});

// All candidate actions in a fixed order: CE outer, HE middle, face inner.
// Self pairs, holes hosted on their own crossing element, and a-priori
// forbidden pairs are excluded; size misfits are kept (agents learn those).
std::vector<ActionTriple> enumerate_actions(const PuzzleSpec& spec);

enum class BlockReason : std::uint8_t {
  none,
  does_not_fit,          // the crossing element never fits this hole
  segment_does_not_fit,  // a dragged long-object segment does not fit
  self_crossing,         // a long object would cross its own head hole
  winding_limit,         // too many consecutive same-sign crossings
  crossing_limit,        // no room for another pass through the hole
  no_rule,               // the crossing element cannot be passed at all
};

const char* block_reason_text(BlockReason r);

struct TransitionResult {
  std::optional<PuzzleState> next;
  BlockReason block = BlockReason::none;

  bool moved() const { return next.has_value(); }
  static TransitionResult moved_to(PuzzleState s) {
    TransitionResult r;
    r.next = std::move(s);
    return r;
  }
  static TransitionResult impossible(BlockReason why) {
    TransitionResult r;
    r.block = why;
    return r;
  }
};

// Pure transition function. Three mechanisms cover every crossing element:
//  - a long object (or a regular object fixed to a long object's end) drags
//    that end through the hole: cancel the matching end crossing or add one;
//  - a holed object carries every strand that runs through its own hole
//    through the target hole: cancel the flanking pair around each such
//    crossing or insert one;
//  - a long object with a hole at its head additionally carries every strand
//    threading that head hole (passing a post's eye through the ring drags
//    the string along).
TransitionResult apply(const PuzzleSpec& spec, const PuzzleState& state,
                       const ActionTriple& action);

// True when nothing crosses the goal hole anywhere (the ring is free).
bool is_goal(const PuzzleSpec& spec, const PuzzleState& state);

// Violations of the structural state invariants, empty when valid.
std::vector<std::string> validate_state(const PuzzleSpec& spec,
                                        const PuzzleState& state);

// Same spec with a different start state (probe rollouts, oracle checks).
PuzzleSpec with_initial(const PuzzleSpec& spec, PuzzleState initial);

}  // namespace tangle
