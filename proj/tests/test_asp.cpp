#include <doctest.h>

#include <map>
#include <set>

#include "tangle/asp.hpp"
#include "tangle/rng.hpp"

using namespace tangle;

namespace {

GlobalProgram make_program() {
  const PuzzleSpec spec = build_spec("fishermans", "original");
  return GlobalProgram(spec, enumerate_actions(spec));
}

}  // namespace

TEST_CASE("states register in discovery order, actions in enumeration order") {
  GlobalProgram gp = make_program();
  CHECK(gp.action_count() == 20);
  CHECK(gp.ensure_state("alpha") == 0);
  CHECK(gp.ensure_state("beta") == 1);
  CHECK(gp.ensure_state("alpha") == 0);
  CHECK(gp.state_count() == 2);
  CHECK(gp.find_state("beta") == 1);
  CHECK(!gp.find_state("gamma").has_value());
  CHECK(gp.state_label(1) == "beta");
}

TEST_CASE("choice rules grow one successor set per observed action") {
  GlobalProgram gp = make_program();
  const std::size_t s0 = gp.ensure_state("s0key");
  const std::size_t s1 = gp.ensure_state("s1key");
  const std::size_t s2 = gp.ensure_state("s2key");

  gp.record_transition(s0, 1, s1);
  CHECK(gp.print_rules(s0).find("1 {s1} 1 :- a1, s0.") != std::string::npos);

  gp.record_transition(s0, 1, s2);
  CHECK(gp.print_rules(s0).find("1 {s1; s2} 1 :- a1, s0.") != std::string::npos);

  // Repeated observations change nothing.
  gp.record_transition(s0, 1, s1);
  CHECK(gp.program(s0).rules.at(1) == std::set<std::size_t>{s1, s2});
}

TEST_CASE("constraints remove rules and block answer sets") {
  GlobalProgram gp = make_program();
  const std::size_t s0 = gp.ensure_state("s0key");
  const std::size_t s1 = gp.ensure_state("s1key");

  gp.record_transition(s0, 5, s1);
  gp.record_forbidden(s0, 5);
  CHECK(gp.print_state_constraints(s0).find(":- a5, s0.") != std::string::npos);
  CHECK(gp.program(s0).rules.count(5) == 0);
  CHECK(gp.answer_sets(s0).empty());
  CHECK_THROWS_AS(gp.record_transition(s0, 5, s1), std::logic_error);

  gp.record_forbidden(std::nullopt, 7);
  CHECK(gp.print_global_constraints().find(":- a7.") != std::string::npos);
  CHECK(gp.is_forbidden(s1, 7));
  CHECK_THROWS_AS(gp.record_transition(s1, 7, s0), std::logic_error);
}

TEST_CASE("answer sets enumerate per-rule head choices in order") {
  GlobalProgram gp = make_program();
  const std::size_t s0 = gp.ensure_state("s0key");
  const std::size_t s1 = gp.ensure_state("s1key");
  const std::size_t s2 = gp.ensure_state("s2key");
  const std::size_t s3 = gp.ensure_state("s3key");

  CHECK(gp.answer_sets(s0).empty());

  gp.record_transition(s0, 1, s1);
  gp.record_transition(s0, 1, s2);
  gp.record_transition(s0, 2, s3);
  using Pair = std::pair<std::size_t, std::size_t>;
  CHECK(gp.answer_sets(s0) ==
        std::vector<Pair>{{1, s1}, {1, s2}, {2, s3}});

  gp.record_forbidden(s0, 1);
  CHECK(gp.answer_sets(s0) == std::vector<Pair>{{2, s3}});
}

TEST_CASE("q rows seed from answer sets without touching learned values") {
  GlobalProgram gp = make_program();
  QTable q(gp.action_count());
  const std::size_t s0 = gp.ensure_state("s0key");
  const std::size_t s1 = gp.ensure_state("s1key");

  gp.record_transition(s0, 0, s1);
  gp.record_transition(s0, 4, s1);
  gp.record_transition(s0, 9, s1);
  gp.record_forbidden(std::nullopt, 2);
  gp.seed_q_rows(s0, q);
  CHECK(q.pair_count() == 3);
  CHECK(q.has("s0key", 0));
  CHECK(q.has("s0key", 4));
  CHECK(q.has("s0key", 9));
  CHECK(!q.has("s0key", 2));

  q.set("s0key", 4, 12.5);
  gp.seed_q_rows(s0, q);
  CHECK(q.get("s0key", 4) == 12.5);
  CHECK(q.pair_count() == 3);
}

TEST_CASE("printing and parsing a program round-trips") {
  GlobalProgram gp = make_program();
  const std::size_t s0 = gp.ensure_state("s0key");
  const std::size_t s1 = gp.ensure_state("s1key");
  const std::size_t s2 = gp.ensure_state("s2key");

  gp.record_transition(s0, 3, s1);
  gp.record_transition(s0, 3, s2);
  gp.record_transition(s0, 11, s0);
  gp.record_forbidden(s0, 6);
  gp.record_forbidden(s0, 17);

  const std::string text = gp.print_program(s0);
  const StateProgram parsed = parse_program(text, gp.action_count());
  CHECK(parsed == gp.program(s0));

  // An empty program still names its state through the comment header.
  const StateProgram empty = parse_program(gp.print_program(s2), gp.action_count());
  CHECK(empty.state == s2);
  CHECK(empty.rules.empty());
  CHECK(empty.constraints.empty());

  const std::string global_text = gp.print_global_constraints();
  CHECK(parse_global_constraints(global_text, gp.action_count()) ==
        gp.global_constraints());

  CHECK_THROWS_AS(parse_program("1 {s1} 1 :- a99, s0.", 20), std::runtime_error);
  CHECK_THROWS_AS(parse_program("nonsense", 20), std::runtime_error);
  CHECK_THROWS_AS(parse_program("1 {s1} 1 :- a1, s0.\n:- a2, s3.", 20),
                  std::runtime_error);
}

TEST_CASE("enumeration matches brute force on random programs") {
  const PuzzleSpec spec = build_spec("ropeladder", "original");
  const auto actions = enumerate_actions(spec);
  Rng rng(4242);

  for (int round = 0; round < 250; ++round) {
    GlobalProgram gp(spec, actions);
    // Mirror model maintained independently by the test.
    std::map<std::size_t, std::set<std::size_t>> rules;
    std::set<std::size_t> state_constraints;
    std::set<std::size_t> global_constraints;

    const std::size_t states = 2 + rng.uniform_below(6);
    std::vector<std::size_t> ids;
    for (std::size_t i = 0; i < states; ++i) {
      ids.push_back(gp.ensure_state("state" + std::to_string(i)));
    }
    const std::size_t target = ids[0];

    const std::size_t rule_count = rng.uniform_below(actions.size() + 1);
    for (std::size_t i = 0; i < rule_count; ++i) {
      const std::size_t action = rng.uniform_below(actions.size());
      if (gp.is_forbidden(target, action)) continue;
      const std::size_t succ_count = 1 + rng.uniform_below(5);
      for (std::size_t j = 0; j < succ_count; ++j) {
        const std::size_t succ = ids[rng.uniform_below(ids.size())];
        gp.record_transition(target, action, succ);
        rules[action].insert(succ);
      }
      if (rng.uniform() < 0.15) {
        gp.record_forbidden(target, action);
        state_constraints.insert(action);
        rules.erase(action);
      }
    }
    for (int g = 0; g < 3; ++g) {
      if (rng.uniform() < 0.3) {
        const std::size_t action = rng.uniform_below(actions.size());
        gp.record_forbidden(std::nullopt, action);
        global_constraints.insert(action);
        rules.erase(action);
      }
    }

    // Brute force: every head selection of every rule, minus constrained ones.
    std::vector<std::pair<std::size_t, std::size_t>> expected;
    for (const auto& [action, successors] : rules) {
      if (state_constraints.count(action) || global_constraints.count(action)) continue;
      for (std::size_t succ : successors) expected.emplace_back(action, succ);
    }
    CHECK(gp.answer_sets(target) == expected);

    // Each state's rule count stays within the action set.
    CHECK(gp.program(target).rules.size() <= actions.size());

    // Serialization survives the trip.
    CHECK(parse_program(gp.print_program(target), actions.size()) ==
          gp.program(target));
  }
}

TEST_CASE("revision is permanent: a forbidden pair never reappears") {
  GlobalProgram gp = make_program();
  const std::size_t s0 = gp.ensure_state("s0key");
  const std::size_t s1 = gp.ensure_state("s1key");
  gp.record_transition(s0, 4, s1);
  gp.record_forbidden(s0, 4);
  for (const auto& [action, succ] : gp.answer_sets(s0)) {
    (void)succ;
    CHECK(action != 4);
  }
  CHECK_THROWS_AS(gp.record_transition(s0, 4, s1), std::logic_error);
  // Forbidding again is harmless.
  gp.record_forbidden(s0, 4);
  CHECK(gp.answer_sets(s0).empty());
}
