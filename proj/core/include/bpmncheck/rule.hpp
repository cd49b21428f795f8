#ifndef BPMNCHECK_RULE_HPP
#define BPMNCHECK_RULE_HPP

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bpmncheck/model.hpp"
#include "bpmncheck/state.hpp"

namespace bpmncheck {

// --- Guards -----------------------------------------------------------
// Guards are evaluated on the focal snapshot only. NoTokenAt, NoTokensAtAll
// and NoChildren are negative application conditions.

struct TokenAt {
    std::string element;
    int min_count = 1;
    bool operator==(const TokenAt&) const = default;
};
struct NoTokenAt {
    std::string element;
    bool operator==(const NoTokenAt&) const = default;
};
struct MessageAt {
    std::string message_flow;
    bool operator==(const MessageAt&) const = default;
};
struct SnapshotRunning {
    bool operator==(const SnapshotRunning&) const = default;
};
struct NoTokensAtAll {
    bool operator==(const NoTokensAtAll&) const = default;
};
struct NoChildren {
    bool operator==(const NoChildren&) const = default;
};
struct ChildTerminated {
    std::string spawned_by;
    bool operator==(const ChildTerminated&) const = default;
};

using Guard = std::variant<TokenAt, NoTokenAt, MessageAt, SnapshotRunning, NoTokensAtAll,
                           NoChildren, ChildTerminated>;

// --- Effects ----------------------------------------------------------

struct ConsumeToken {
    std::string element;
    int count = 1;
    bool operator==(const ConsumeToken&) const = default;
};
struct ProduceToken {
    std::string element;
    int count = 1;
    bool operator==(const ProduceToken&) const = default;
};
struct ConsumeMessage {
    std::string message_flow;
    bool operator==(const ConsumeMessage&) const = default;
};
struct SetTerminated {
    bool operator==(const SetTerminated&) const = default;
};
struct DeleteAllTokens {
    bool operator==(const DeleteAllTokens&) const = default;
};
// Removes the focal snapshot's children (they end terminated and empty).
struct TerminateSubtree {
    bool operator==(const TerminateSubtree&) const = default;
};
struct DeleteTerminatedChild {
    std::string spawned_by;
    bool operator==(const DeleteTerminatedChild&) const = default;
};
struct SpawnChild {
    std::string process;
    std::string spawned_by;
    Counts initial_tokens;
    bool operator==(const SpawnChild&) const = default;
};
struct SpawnTopLevel {
    std::string process;
    Counts initial_tokens;
    // The triggering message flow; consumed at spawn, never stored.
    std::optional<std::string> incoming_message;
    bool operator==(const SpawnTopLevel&) const = default;
};

using Effect = std::variant<ConsumeToken, ProduceToken, ConsumeMessage, SetTerminated,
                            DeleteAllTokens, TerminateSubtree, DeleteTerminatedChild, SpawnChild,
                            SpawnTopLevel>;

// Optional-existential message delivery: when at least one eligible recipient
// exists the message is delivered (branching over recipients); with no
// eligible recipient the message is skipped without branching.
struct OptionalMessageSend {
    std::string message_flow;
    std::vector<std::string> eligibility_tokens;  // incoming flows of the receiving catch event
    std::string target_process;
    bool operator==(const OptionalMessageSend&) const = default;
};

// Universally quantified rule parts; applied exhaustively, no branching.

// For every snapshot and every token on catch_incoming: consume the token
// and produce one token per flow in catch_outgoing.
struct SignalCatch {
    std::string catch_incoming;
    std::vector<std::string> catch_outgoing;
    bool operator==(const SignalCatch&) const = default;
};
// Spawn one top-level snapshot (exactly once per matching signal start event).
struct SignalSpawn {
    std::string process;
    std::vector<std::string> sse_outgoing;
    bool operator==(const SignalSpawn&) const = default;
};

using UniversalBlock = std::variant<SignalCatch, SignalSpawn>;

enum class RuleRole {
    ActivityStart,
    ActivityEnd,
    EventFire,
    GatewayFire,
    Termination,
};

struct Rule {
    std::string name;           // stable, derived from element ids
    std::string source_node;    // provenance; empty for the generic termination rule
    std::string focal_process;  // empty = anchors on snapshots of any process
    RuleRole role = RuleRole::EventFire;
    std::vector<Guard> guards;
    std::vector<Effect> effects;
    std::vector<OptionalMessageSend> optional_sends;
    std::vector<UniversalBlock> universal_blocks;
};

struct RuleApplication {
    ExecutionState state;  // normalized successor
    CanonicalKey key;
    std::string binding;  // focal snapshot path plus optional-send choices
};

// Returns every successor reachable by one application of the rule:
// one candidate per focal snapshot (at any depth) whose guards all hold,
// times the Cartesian product of eligible-recipient choices of the optional
// sends. Results are normalized and sorted by (key, binding); an empty
// result means the rule is not applicable.
std::vector<RuleApplication> apply_rule(const Rule& rule, const ExecutionState& state);

// Flags unresolvable ids, empty effect lists and optional blocks with empty
// eligibility sets.
std::vector<Diagnostic> check_rule_wellformed(const Rule& rule, const BpmnModel& model);

// Debug dump consumed by `--dump-rules`; documented but not a compatibility
// surface.
std::string rules_to_json(const std::vector<Rule>& rules);

}  // namespace bpmncheck

#endif
