#include "tangle/puzzle.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace tangle {

ObjectIndex PuzzleSpec::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < objects.size(); ++i) {
    if (objects[i].name == name) return static_cast<ObjectIndex>(i);
  }
  throw std::invalid_argument("unknown object: " + name);
}

int PuzzleSpec::winding_limit_for(ObjectIndex owner, ObjectIndex hole) const {
  auto it = winding_overrides.find({owner, hole});
  return it == winding_overrides.end() ? winding_limit : it->second;
}

int PuzzleSpec::crossing_cap_for(ObjectIndex owner, ObjectIndex hole) const {
  auto it = crossing_cap_overrides.find({owner, hole});
  return it == crossing_cap_overrides.end() ? crossing_cap : it->second;
}

std::size_t PuzzleSpec::chain_slot(ObjectIndex long_object) const {
  for (std::size_t i = 0; i < long_objects.size(); ++i) {
    if (long_objects[i] == long_object) return i;
  }
  throw std::invalid_argument("not a long object: " + name_of(long_object));
}

namespace {

class SpecBuilder {
 public:
  ObjectIndex add(ObjectDef def) {
    if (def.crossing_label.empty()) def.crossing_label = def.name;
    spec_.objects.push_back(std::move(def));
    return static_cast<ObjectIndex>(spec_.objects.size() - 1);
  }

  ObjectIndex regular_at(const std::string& name, ObjectIndex long_obj, ChainEnd end) {
    ObjectDef d;
    d.name = name;
    d.cls = ObjectClass::regular;
    d.attached_to = long_obj;
    d.attached_end = end;
    return add(std::move(d));
  }

  ObjectIndex long_object(const std::string& name) {
    ObjectDef d;
    d.name = name;
    d.cls = ObjectClass::long_object;
    return add(std::move(d));
  }

  ObjectIndex free_hole(const std::string& name) {
    ObjectDef d;
    d.name = name;
    d.cls = ObjectClass::holed;
    d.placement = HolePlacement::free_standing;
    return add(std::move(d));
  }

  ObjectIndex threaded_hole(const std::string& name, ObjectIndex long_obj) {
    ObjectDef d;
    d.name = name;
    d.cls = ObjectClass::holed;
    d.placement = HolePlacement::threaded_on;
    d.placed_on = long_obj;
    return add(std::move(d));
  }

  ObjectIndex head_hole(const std::string& name, ObjectIndex long_obj,
                        const std::string& label) {
    ObjectDef d;
    d.name = name;
    d.cls = ObjectClass::holed;
    d.placement = HolePlacement::at_head_of;
    d.placed_on = long_obj;
    d.crossing_label = label;
    return add(std::move(d));
  }

  PuzzleSpec finish() {
    const std::size_t n = spec_.objects.size();
    if (spec_.fits_table.empty()) {
      spec_.fits_table.assign(n, std::vector<bool>(n, false));
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (spec_.objects[i].cls == ObjectClass::long_object) {
        spec_.long_objects.push_back(static_cast<ObjectIndex>(i));
      }
    }
    std::sort(spec_.long_objects.begin(), spec_.long_objects.end(),
              [&](ObjectIndex a, ObjectIndex b) {
                return spec_.objects[a].name < spec_.objects[b].name;
              });
    return std::move(spec_);
  }

  void allow(ObjectIndex x, ObjectIndex host) {
    if (spec_.fits_table.empty()) {
      spec_.fits_table.assign(spec_.objects.size(),
                              std::vector<bool>(spec_.objects.size(), false));
    }
    spec_.fits_table[x][host] = true;
  }

  PuzzleSpec spec_;
};

}  // namespace

PuzzleSpec build_spec(const std::string& puzzle, const std::string& variant,
                      const BuildOptions& options) {
  const bool fishermans = puzzle == "fishermans";
  const bool ropeladder = puzzle == "ropeladder";
  if (!fishermans && !ropeladder) {
    throw std::invalid_argument("unknown puzzle: " + puzzle);
  }

  const bool simplified = variant == "simplified";
  const bool original = variant == "original";
  const bool nondeterministic = variant == "nondeterministic";
  const bool nonstationary = variant == "nonstationary-disk";
  if (!simplified && !original && !nondeterministic &&
      !(fishermans && nonstationary)) {
    throw std::invalid_argument("unknown variant for " + puzzle + ": " + variant);
  }

  SpecBuilder b;
  PuzzleSpec spec;

  if (fishermans) {
    ObjectIndex string_obj = b.long_object("String");
    ObjectIndex post = b.long_object("Post");
    ObjectIndex sphere1 = b.threaded_hole("Sphere1", string_obj);
    ObjectIndex sphere2 = b.threaded_hole("Sphere2", string_obj);
    ObjectIndex disk1 = b.regular_at("Disk1", string_obj, ChainEnd::tail);
    ObjectIndex disk2 = b.regular_at("Disk2", string_obj, ChainEnd::head);
    ObjectIndex ring = b.free_hole("Ring");
    b.regular_at("Base", post, ChainEnd::tail);
    ObjectIndex post_hole = b.head_hole("PostHole1", post, "Post");

    // Size constraints: spheres exceed the post hole, disks exceed the ring
    // hole. The string and the ring pass everywhere; disks pass the post
    // hole; the post passes the ring. The non-stationary variant starts with
    // the disk fits flipped and becomes the original puzzle at the switch.
    b.allow(string_obj, post_hole);
    b.allow(string_obj, ring);
    b.allow(string_obj, sphere1);
    b.allow(string_obj, sphere2);
    b.allow(post, ring);
    b.allow(sphere1, ring);
    b.allow(sphere2, ring);
    b.allow(ring, post_hole);
    if (nonstationary) {
      b.allow(disk1, ring);
      b.allow(disk2, ring);
    } else {
      b.allow(disk1, post_hole);
      b.allow(disk2, post_hole);
    }

    spec = b.finish();
    spec.crossing_elements = {sphere1, sphere2, post, disk1, disk2, ring};
    spec.host_elements = {post_hole, ring};
    spec.goal_hole = ring;
    spec.winding_limit = options.global_winding_limit;
    spec.crossing_cap = options.crossing_cap.value_or(3);
    // The ring hole is the roomy one; the extra pass through it is what
    // separates the original search space from the simplified one.
    spec.crossing_cap_overrides[{string_obj, ring}] = spec.crossing_cap + 1;
    if (simplified) {
      spec.winding_overrides[{string_obj, post_hole}] =
          options.simplified_string_post_limit;
    }

    PuzzleState init;
    init.chains.resize(spec.long_objects.size());
    init.chains[spec.chain_slot(string_obj)] = {
        {HoleFace::positive, sphere1},
        {HoleFace::positive, post_hole},
        {HoleFace::positive, sphere2},
    };
    init.chains[spec.chain_slot(post)] = {{HoleFace::positive, ring}};
    spec.initial = std::move(init);
  } else {
    ObjectIndex string_obj = b.long_object("String");
    ObjectIndex post1 = b.long_object("Post1");
    ObjectIndex post2 = b.long_object("Post2");
    ObjectIndex sphere1 = b.threaded_hole("Sphere1", string_obj);
    ObjectIndex sphere2 = b.threaded_hole("Sphere2", string_obj);
    ObjectIndex disk1 = b.regular_at("Disk1", string_obj, ChainEnd::tail);
    ObjectIndex disk2 = b.regular_at("Disk2", string_obj, ChainEnd::head);
    ObjectIndex ring = b.free_hole("Ring");
    ObjectIndex post_hole1 = b.head_hole("PostHole1", post1, "Post1");
    ObjectIndex post_hole2 = b.head_hole("PostHole2", post2, "Post2");

    b.allow(string_obj, post_hole1);
    b.allow(string_obj, post_hole2);
    b.allow(string_obj, ring);
    b.allow(string_obj, sphere1);
    b.allow(string_obj, sphere2);
    b.allow(post1, ring);
    b.allow(post2, ring);
    b.allow(sphere1, ring);
    b.allow(sphere2, ring);
    b.allow(ring, post_hole1);
    b.allow(ring, post_hole2);
    b.allow(disk1, post_hole1);
    b.allow(disk2, post_hole2);

    spec = b.finish();
    spec.crossing_elements = {sphere1, sphere2, post1, post2, disk1, disk2, ring};
    spec.host_elements = {post_hole1, post_hole2, ring};
    spec.goal_hole = ring;
    spec.winding_limit = options.global_winding_limit;
    spec.crossing_cap = options.crossing_cap.value_or(4);
    // The string may not wind through either post hole in any variant.
    spec.winding_overrides[{string_obj, post_hole1}] = 1;
    spec.winding_overrides[{string_obj, post_hole2}] = 1;
    // Each disk stays on its own side, and neither post threads the other's
    // hole; these pairs are not offered to the agent at all.
    spec.forbidden_pairs = {
        {disk1, post_hole2},
        {disk2, post_hole1},
        {post1, post_hole2},
        {post2, post_hole1},
    };

    PuzzleState init;
    init.chains.resize(spec.long_objects.size());
    // The original weave crosses each post hole twice, once inside the
    // sphere span and once out by the string tip; the simplified variant
    // keeps a single crossing per hole.
    std::vector<Crossing> weave;
    if (simplified) {
      weave = {{HoleFace::positive, sphere1},
               {HoleFace::positive, post_hole1},
               {HoleFace::positive, post_hole2},
               {HoleFace::positive, sphere2}};
    } else {
      weave = {{HoleFace::positive, post_hole1},
               {HoleFace::positive, sphere1},
               {HoleFace::positive, post_hole1},
               {HoleFace::positive, post_hole2},
               {HoleFace::positive, sphere2},
               {HoleFace::positive, post_hole2}};
    }
    init.chains[spec.chain_slot(string_obj)] = std::move(weave);
    init.chains[spec.chain_slot(post1)] = {{HoleFace::positive, ring}};
    init.chains[spec.chain_slot(post2)] = {{HoleFace::positive, ring}};
    spec.initial = std::move(init);
  }

  spec.puzzle = puzzle;
  spec.variant = variant;
  return spec;
}

std::vector<ActionTriple> enumerate_actions(const PuzzleSpec& spec) {
  std::vector<ActionTriple> out;
  for (ObjectIndex ce : spec.crossing_elements) {
    for (ObjectIndex he : spec.host_elements) {
      if (ce == he) continue;
      const ObjectDef& hole = spec.objects[he];
      if (hole.placement == HolePlacement::at_head_of && hole.placed_on == ce) {
        continue;  // an object cannot pass through its own head hole
      }
      if (spec.forbidden_pairs.count({ce, he})) continue;
      out.push_back({ce, he, HoleFace::positive});
      out.push_back({ce, he, HoleFace::negative});
    }
  }
  return out;
}

const char* block_reason_text(BlockReason r) {
  switch (r) {
    case BlockReason::none: return "none";
    case BlockReason::does_not_fit: return "does not fit";
    case BlockReason::segment_does_not_fit: return "dragged segment does not fit";
    case BlockReason::self_crossing: return "object would cross its own hole";
    case BlockReason::winding_limit: return "winding limit exceeded";
    case BlockReason::crossing_limit: return "no room for another pass through the hole";
    case BlockReason::no_rule: return "object cannot be passed";
  }
  return "unknown";
}

namespace {

// A long object must never cross a hole that is part of itself.
bool hole_is_part_of(const PuzzleSpec& spec, ObjectIndex hole, ObjectIndex owner) {
  const ObjectDef& h = spec.objects[hole];
  return h.placement == HolePlacement::at_head_of && h.placed_on == owner;
}

// Pass the given end of a chain through the hole: the matching crossing at
// that end cancels, anything else gains a new end crossing.
void pass_chain_end(std::vector<Crossing>& chain, ChainEnd end, HoleFace hf,
                    ObjectIndex hole) {
  const Crossing cancel{opposite(hf), hole};
  if (!chain.empty()) {
    Crossing& endmost = end == ChainEnd::tail ? chain.front() : chain.back();
    if (endmost == cancel) {
      if (end == ChainEnd::tail) {
        chain.erase(chain.begin());
      } else {
        chain.pop_back();
      }
      return;
    }
  }
  if (end == ChainEnd::tail) {
    chain.insert(chain.begin(), {hf, hole});
  } else {
    chain.push_back({hf, hole});
  }
}

// Carry every crossing of `carried_hole` in this chain through `hole`:
// where the flanking pair already matches, it cancels; otherwise a new pair
// is inserted around the crossing. All positions rewrite simultaneously.
// Returns false when nothing in the chain crosses `carried_hole`.
bool carry_through(std::vector<Crossing>& chain, ObjectIndex carried_hole,
                   HoleFace hf, ObjectIndex hole) {
  const Crossing before_ins{hf, hole};
  const Crossing after_ins{opposite(hf), hole};

  enum class Edit : std::uint8_t { keep, drop, wrap };
  std::vector<Edit> edit(chain.size(), Edit::keep);
  bool any = false;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    if (chain[i].hole != carried_hole) continue;
    any = true;
    const bool cancels = i > 0 && i + 1 < chain.size() &&
                         chain[i - 1] == after_ins && chain[i + 1] == before_ins;
    if (cancels) {
      edit[i - 1] = Edit::drop;
      edit[i + 1] = Edit::drop;
    } else {
      edit[i] = Edit::wrap;
    }
  }
  if (!any) return false;

  std::vector<Crossing> next;
  next.reserve(chain.size() + 2);
  for (std::size_t i = 0; i < chain.size(); ++i) {
    switch (edit[i]) {
      case Edit::drop:
        break;
      case Edit::wrap:
        next.push_back(before_ins);
        next.push_back(chain[i]);
        next.push_back(after_ins);
        break;
      case Edit::keep:
        next.push_back(chain[i]);
        break;
    }
  }
  chain = std::move(next);
  return true;
}

// Cancel adjacent opposite-face crossings of the same hole until none remain.
void reduce_chain(std::vector<Crossing>& chain) {
  std::vector<Crossing> out;
  out.reserve(chain.size());
  for (const Crossing& c : chain) {
    if (!out.empty() && out.back().hole == c.hole &&
        out.back().face == opposite(c.face)) {
      out.pop_back();
    } else {
      out.push_back(c);
    }
  }
  chain = std::move(out);
}

BlockReason winding_violation(const PuzzleSpec& spec, ObjectIndex owner,
                              const std::vector<Crossing>& chain) {
  std::size_t i = 0;
  while (i < chain.size()) {
    std::size_t j = i + 1;
    while (j < chain.size() && chain[j] == chain[i]) ++j;
    const int limit = spec.winding_limit_for(owner, chain[i].hole);
    if (static_cast<int>(j - i) > limit) return BlockReason::winding_limit;
    i = j;
  }
  int per_hole[256] = {};
  for (const Crossing& c : chain) {
    if (++per_hole[c.hole] > spec.crossing_cap_for(owner, c.hole)) {
      return BlockReason::crossing_limit;
    }
  }
  return BlockReason::none;
}

}  // namespace

TransitionResult apply(const PuzzleSpec& spec, const PuzzleState& state,
                       const ActionTriple& action) {
  const ObjectDef& ce = spec.objects[action.ce];
  const ObjectIndex hole = action.he;

  if (!spec.fits(action.ce, hole)) {
    return TransitionResult::impossible(BlockReason::does_not_fit);
  }

  PuzzleState next = state;

  // Which long objects get edited, and how.
  ObjectIndex dragged_long = kNoObject;  // chain whose end passes through
  ChainEnd dragged_end = ChainEnd::head;
  ObjectIndex carried_hole = kNoObject;  // crossings of this hole get carried

  switch (ce.cls) {
    case ObjectClass::long_object: {
      dragged_long = action.ce;
      dragged_end = ChainEnd::head;
      // A hole at this object's head carries its own threading strands along.
      for (std::size_t i = 0; i < spec.objects.size(); ++i) {
        const ObjectDef& o = spec.objects[i];
        if (o.cls == ObjectClass::holed &&
            o.placement == HolePlacement::at_head_of && o.placed_on == action.ce) {
          carried_hole = static_cast<ObjectIndex>(i);
        }
      }
      break;
    }
    case ObjectClass::regular: {
      if (ce.attached_to == kNoObject) {
        return TransitionResult::impossible(BlockReason::no_rule);
      }
      dragged_long = ce.attached_to;
      dragged_end = ce.attached_end;
      break;
    }
    case ObjectClass::holed: {
      carried_hole = action.ce;
      break;
    }
  }

  if (dragged_long != kNoObject) {
    if (hole_is_part_of(spec, hole, dragged_long)) {
      return TransitionResult::impossible(BlockReason::self_crossing);
    }
    if (!spec.fits(dragged_long, hole)) {
      return TransitionResult::impossible(BlockReason::segment_does_not_fit);
    }
    pass_chain_end(next.chains[spec.chain_slot(dragged_long)], dragged_end,
                   action.hf, hole);
  }

  if (carried_hole != kNoObject) {
    for (std::size_t slot = 0; slot < spec.long_objects.size(); ++slot) {
      const ObjectIndex owner = spec.long_objects[slot];
      if (owner == action.ce) continue;  // own chain already handled above
      bool hit = false;
      for (const Crossing& c : state.chains[slot]) {
        if (c.hole == carried_hole) {
          hit = true;
          break;
        }
      }
      if (!hit) continue;
      if (hole_is_part_of(spec, hole, owner)) {
        return TransitionResult::impossible(BlockReason::self_crossing);
      }
      if (!spec.fits(owner, hole)) {
        return TransitionResult::impossible(BlockReason::segment_does_not_fit);
      }
      carry_through(next.chains[slot], carried_hole, action.hf, hole);
    }
  }

  if (spec.reduce_after_pass) {
    for (auto& chain : next.chains) reduce_chain(chain);
  }

  for (std::size_t slot = 0; slot < spec.long_objects.size(); ++slot) {
    const BlockReason r =
        winding_violation(spec, spec.long_objects[slot], next.chains[slot]);
    if (r != BlockReason::none) return TransitionResult::impossible(r);
  }

  return TransitionResult::moved_to(std::move(next));
}

bool is_goal(const PuzzleSpec& spec, const PuzzleState& state) {
  for (const auto& chain : state.chains) {
    for (const Crossing& c : chain) {
      if (c.hole == spec.goal_hole) return false;
    }
  }
  return true;
}

std::vector<std::string> validate_state(const PuzzleSpec& spec,
                                        const PuzzleState& state) {
  std::vector<std::string> issues;
  if (state.chains.size() != spec.long_objects.size()) {
    issues.push_back("expected one chain per long object");
    return issues;
  }
  for (std::size_t slot = 0; slot < spec.long_objects.size(); ++slot) {
    const ObjectIndex owner = spec.long_objects[slot];
    const std::string& owner_name = spec.name_of(owner);
    for (const Crossing& c : state.chains[slot]) {
      if (c.hole >= spec.objects.size() ||
          spec.objects[c.hole].cls != ObjectClass::holed) {
        issues.push_back("chain(" + owner_name + ") crosses a non-holed object");
        continue;
      }
      if (hole_is_part_of(spec, c.hole, owner)) {
        issues.push_back("chain(" + owner_name + ") crosses its own hole " +
                         spec.name_of(c.hole));
      }
      if (!spec.fits(owner, c.hole)) {
        issues.push_back("chain(" + owner_name + ") crosses " +
                         spec.name_of(c.hole) + " but does not fit it");
      }
    }
    const BlockReason winding = winding_violation(spec, owner, state.chains[slot]);
    if (winding != BlockReason::none) {
      issues.push_back("chain(" + owner_name + "): " +
                       std::string(block_reason_text(winding)));
    }
  }
  return issues;
}

PuzzleSpec with_initial(const PuzzleSpec& spec, PuzzleState initial) {
  PuzzleSpec out = spec;
  out.initial = std::move(initial);
  return out;
}

}  // namespace tangle
