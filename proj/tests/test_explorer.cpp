#include <doctest.h>

#include <set>

#include "bpmncheck/benchgen.hpp"
#include "bpmncheck/explore.hpp"
#include "fixtures.hpp"
#include "oracle/token_game_oracle.hpp"

using namespace bpmncheck;

TEST_CASE("one-branch benchmark: 7 states, 6 transitions") {
    Lts lts = explore(generate_rules(gen_parallel(1)));
    CHECK(lts.stats.state_count == 7);
    CHECK(lts.stats.transition_count == 6);
    CHECK_FALSE(lts.stats.truncated);
}

TEST_CASE("empty start state: one state, no transitions") {
    ModelBuilder b;
    b.process("p");
    b.node("mse", FlowNodeKind::MessageStartEvent);
    b.node("end", FlowNodeKind::NoneEndEvent);
    b.flow("mse", "end");
    Lts lts = explore(generate_rules(b.build()));
    CHECK(lts.stats.state_count == 1);
    CHECK(lts.stats.transition_count == 0);
    CHECK(lts.keys[0] == canonical_key(ExecutionState{}));
}

TEST_CASE("three-branch benchmark matches the brute-force enumerator") {
    BpmnModel model = gen_parallel(3);
    Lts lts = explore(generate_rules(model));
    CHECK(lts.stats.state_count == 31);
    CHECK(lts.stats.transition_count == 58);

    oracle::Lts reference = oracle::enumerate(model);
    CHECK(lts.stats.state_count == reference.states.size());
    CHECK(lts.stats.transition_count == reference.transitions.size());
}

TEST_CASE("canonical keys are unique across the state set") {
    Lts lts = explore(generate_rules(fixtures::messaging_pair()));
    std::set<std::string> keys;
    for (const auto& k : lts.keys) keys.insert(k.bytes);
    CHECK(keys.size() == lts.states.size());
    CHECK(lts.index.size() == lts.states.size());
}

TEST_CASE("transitions are sorted, deduplicated and well-indexed") {
    Lts lts = explore(generate_rules(fixtures::two_branches_one_end()));
    for (std::size_t i = 1; i < lts.transitions.size(); ++i)
        CHECK(lts.transitions[i - 1] < lts.transitions[i]);
    for (const auto& t : lts.transitions) {
        CHECK(t.source < lts.states.size());
        CHECK(t.target < lts.states.size());
        CHECK(t.rule < lts.rule_names.size());
    }
}

TEST_CASE("deadlock states are exactly the states without successors") {
    // The xor-split/parallel-join model deadlocks with a stuck token.
    Lts lts = explore(generate_rules(fixtures::xor_split_into_parallel_join()));
    std::set<std::uint32_t> with_out;
    for (const auto& t : lts.transitions) with_out.insert(t.source);
    int deadlocks = 0;
    for (std::uint32_t s = 0; s < lts.states.size(); ++s) {
        if (!with_out.count(s)) {
            ++deadlocks;
            // No rule applies in a deadlock state.
            RuleSet rs = generate_rules(fixtures::xor_split_into_parallel_join());
            for (const auto& rule : rs.rules) CHECK(apply_rule(rule, lts.states[s]).empty());
        }
    }
    CHECK(deadlocks > 0);
}

TEST_CASE("exploration is schedule-independent") {
    for (const BpmnModel& model :
         {gen_parallel(4), fixtures::messaging_pair(), fixtures::signal_broadcast(),
          fixtures::call_activity_chain(), fixtures::terminate_race()}) {
        RuleSet rs = generate_rules(model);
        Lts one = explore(rs, {}, 1);
        Lts three = explore(rs, {}, 3);
        CHECK(one.keys == three.keys);
        CHECK(one.transitions == three.transitions);
        CHECK(one.stats.state_count == three.stats.state_count);
    }
}

TEST_CASE("state limits truncate the exploration") {
    RuleSet rs = generate_rules(gen_parallel(3));
    Lts lts = explore(rs, {5, 300'000});
    CHECK(lts.stats.truncated);
    CHECK(lts.stats.state_count <= 5);  // initial + discovered up to the cap
    CHECK(lts.stats.state_count >= 1);
}

TEST_CASE("stored states are normalized and reachable from the initial state") {
    Lts lts = explore(generate_rules(fixtures::call_activity_chain()));
    for (std::size_t i = 0; i < lts.states.size(); ++i) {
        CHECK(lts.states[i] == normalize(lts.states[i]));
        CHECK(canonical_key(lts.states[i]) == lts.keys[i]);
    }
    std::set<std::uint32_t> reached{0};
    for (const auto& t : lts.transitions) reached.insert(t.target);
    CHECK(reached.size() == lts.states.size());
}
