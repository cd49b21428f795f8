#ifndef BPMNCHECK_STATE_HPP
#define BPMNCHECK_STATE_HPP

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace bpmncheck {

enum class Lifecycle { Running, Terminated };

// Multiset of element ids; counts are always >= 1.
using Counts = std::map<std::string, int>;

// One running or terminated instance of a BPMN process. Children are the
// snapshots spawned by call activities of this instance.
struct ProcessSnapshot {
    std::string process;     // process id
    std::string spawned_by;  // call-activity id; empty for top-level snapshots
    Lifecycle lifecycle = Lifecycle::Running;
    Counts tokens;    // activity / sequence-flow ids (gateway ids only for
                      // start-less subprocess instantiation)
    Counts messages;  // message-flow ids
    std::vector<ProcessSnapshot> children;

    bool operator==(const ProcessSnapshot&) const = default;
};

struct ExecutionState {
    std::vector<ProcessSnapshot> snapshots;

    bool operator==(const ExecutionState&) const = default;
};

// Order-independent identity of a state. Two states get the same key exactly
// when they are equal as multiset forests.
struct CanonicalKey {
    std::string bytes;

    bool operator==(const CanonicalKey&) const = default;
    bool operator<(const CanonicalKey& o) const { return bytes < o.bytes; }
};

CanonicalKey canonical_key(const ExecutionState& state);

// Rewrites the state into its canonical representative: sibling snapshots
// sorted by their canonical serialization. canonical_key(normalize(s)) ==
// canonical_key(s), and normalized equal-key states compare equal with ==.
ExecutionState normalize(const ExecutionState& state);

// True iff no snapshot at any depth is Running. Vacuously true for the
// empty state.
bool is_all_terminated(const ExecutionState& state);

// Checked after every rule application in debug builds: Terminated
// snapshots hold no tokens and no children.
bool terminated_snapshots_are_empty(const ExecutionState& state);

// External JSON form:
// {"snapshots":[{"process":id,"spawnedBy":id|null,"lifecycle":...,
//   "tokens":{id:count},"messages":{id:count},"children":[...]}]}
std::string state_to_json(const ExecutionState& state);
ExecutionState state_from_json(const std::string& text);

}  // namespace bpmncheck

template <>
struct std::hash<bpmncheck::CanonicalKey> {
    std::size_t operator()(const bpmncheck::CanonicalKey& k) const noexcept {
        return std::hash<std::string>{}(k.bytes);
    }
};

#endif
