#ifndef BPMNCHECK_EXPLORE_HPP
#define BPMNCHECK_EXPLORE_HPP

#include <cstdint>
#include <unordered_map>

#include "bpmncheck/generate.hpp"

namespace bpmncheck {

struct Transition {
    std::uint32_t source;
    std::uint32_t rule;  // index into Lts::rule_names
    std::uint32_t target;

    bool operator==(const Transition&) const = default;
    auto operator<=>(const Transition&) const = default;
};

struct LtsStats {
    std::size_t state_count = 0;
    std::size_t transition_count = 0;
    std::int64_t exploration_time_ms = 0;
    bool truncated = false;
};

// Explored labeled transition system. State 0 is the initial state; states
// are stored in canonical form and indexed in BFS discovery order, which is
// independent of the worker thread count.
struct Lts {
    std::vector<CanonicalKey> keys;
    std::vector<ExecutionState> states;
    std::vector<std::string> rule_names;
    std::vector<Transition> transitions;  // sorted by (source, rule, target), unique
    LtsStats stats;

    std::unordered_map<CanonicalKey, std::uint32_t> index;

    const std::string& label(const Transition& t) const { return rule_names[t.rule]; }
};

struct ExploreLimits {
    std::size_t max_states = 5'000'000;
    std::int64_t max_millis = 300'000;
};

// Exhaustive breadth-first closure of the start state under the rule set,
// deduplicated by canonical key. Stops early when a limit trips; the result
// is then flagged truncated. The resulting LTS does not depend on the
// number of threads.
Lts explore(const RuleSet& ruleset, const ExploreLimits& limits = {}, unsigned threads = 1);

}  // namespace bpmncheck

#endif
