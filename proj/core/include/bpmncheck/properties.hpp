#ifndef BPMNCHECK_PROPERTIES_HPP
#define BPMNCHECK_PROPERTIES_HPP

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "bpmncheck/explore.hpp"
#include "bpmncheck/model.hpp"
#include "bpmncheck/state.hpp"

namespace bpmncheck {

// A token-distribution pattern for one process snapshot.
struct SnapshotPattern {
    std::string process;
    std::optional<Lifecycle> lifecycle;
    Counts required_tokens;  // min counts, >= 1
    std::set<std::string> forbidden_tokens;
    Counts required_messages;
};

// An atomic proposition: a state is labeled when the patterns can be
// assigned injectively to distinct snapshots (at any depth). Several
// propositions may share a name; the labeling unions them.
struct Proposition {
    std::string name;
    std::vector<SnapshotPattern> patterns;
};

inline constexpr const char* kUnsafeName = "Unsafe";
inline constexpr const char* kAllTerminatedName = "AllTerminated";

bool match_proposition(const Proposition& prop, const ExecutionState& state);

// Unsafe: two tokens of one snapshot on the same sequence flow, expanded to
// one proposition per flow under the shared name. AllTerminated is a native
// predicate on the state, not a pattern, and is always part of the labeling.
std::vector<Proposition> builtin_propositions(const BpmnModel& model);

// Throws DanglingReferenceError when a pattern references an id that does
// not exist in the model; throws std::runtime_error when required and
// forbidden tokens overlap within one pattern.
void check_propositions_resolve(const std::vector<Proposition>& props, const BpmnModel& model);

// Propositions file (JSON): {"propositions":[{"name":...,"patterns":[
//   {"process":...,"lifecycle":...,"tokens":{...},"noTokens":[...],
//    "messages":{...}}]}]}
std::vector<Proposition> load_propositions_json(const std::string& text);

// Propositions persisted in BPMN extension elements, converted to the same
// schema at load time.
std::vector<Proposition> extension_propositions(const BpmnModel& model);

struct Labeling {
    std::vector<std::set<std::string>> by_state;  // indexed like Lts::states
    std::set<std::string> names;                  // atom universe

    bool has(std::size_t state, const std::string& name) const {
        return by_state[state].count(name) > 0;
    }
};

// Labels every LTS state with AllTerminated and the matching propositions.
Labeling compute_labeling(const Lts& lts, const std::vector<Proposition>& props);

struct Verdict {
    std::string name;
    bool holds = true;
    bool inconclusive = false;          // truncated exploration
    std::vector<std::string> witness;   // rule-name path from the initial state
    std::string witness_note;           // e.g. lasso marker
    std::vector<std::string> dead_activities;
};

// No reachable state puts two tokens of one snapshot on the same sequence
// flow. Witness: shortest rule path to a violating state.
Verdict check_safeness(const Lts& lts, const BpmnModel& model);

// Every maximal path eventually reaches a state with no Running snapshot
// (deadlock states are extended by an implicit self-loop).
Verdict check_option_to_complete(const Lts& lts);

// No path fires the same end event twice. Witness: a path exhibiting both
// firings.
Verdict check_proper_completion(const Lts& lts, const RuleSet& ruleset);

// Every activity has at least one start rule labeling some transition.
Verdict check_no_dead_activities(const Lts& lts, const RuleSet& ruleset);

}  // namespace bpmncheck

#endif
