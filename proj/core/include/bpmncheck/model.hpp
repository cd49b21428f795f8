#ifndef BPMNCHECK_MODEL_HPP
#define BPMNCHECK_MODEL_HPP

#include <optional>
#include <string>
#include <vector>

#include "bpmncheck/diagnostics.hpp"

namespace bpmncheck {

enum class FlowNodeKind {
    NoneStartEvent,
    NoneEndEvent,
    Task,
    SubProcessCall,
    ParallelGateway,
    ExclusiveGateway,
    MessageStartEvent,
    MessageIntermediateThrowEvent,
    MessageIntermediateCatchEvent,
    MessageEndEvent,
    LinkThrowEvent,
    LinkCatchEvent,
    SignalStartEvent,
    SignalIntermediateThrowEvent,
    SignalIntermediateCatchEvent,
    SignalEndEvent,
    TerminateEndEvent,
};

const char* to_string(FlowNodeKind kind);

bool is_start_event(FlowNodeKind kind);
bool is_end_event(FlowNodeKind kind);
bool is_gateway(FlowNodeKind kind);
// Task or SubProcessCall.
bool is_activity(FlowNodeKind kind);

struct FlowNode {
    std::string id;
    std::string name;
    FlowNodeKind kind = FlowNodeKind::Task;
    std::vector<std::string> incoming;  // sequence-flow ids
    std::vector<std::string> outgoing;  // sequence-flow ids
    std::optional<std::string> called_process;  // SubProcessCall only
};

struct SequenceFlow {
    std::string id;
    std::string source;  // flow-node id
    std::string target;  // flow-node id
};

struct MessageFlow {
    std::string id;
    std::string source;  // flow-node id
    std::string target;  // flow-node id
};

struct Process {
    std::string id;
    std::string name;
    std::vector<FlowNode> flow_nodes;
    std::vector<SequenceFlow> sequence_flows;

    const FlowNode* find_node(const std::string& id) const;
    const SequenceFlow* find_flow(const std::string& id) const;
};

// Token placement persisted in BPMN extension elements. Surfaced to the
// properties module, not interpreted by the parser.
struct ExtensionToken {
    std::string element_id;
    bool should_exist = true;  // false encodes a crossed-out (forbidden) token
};

struct ExtensionSnapshot {
    std::string name;        // proposition name (may be synthesized)
    std::string process_id;  // process the snapshot pattern anchors to
    std::vector<ExtensionToken> tokens;
};

struct BpmnModel {
    std::string name;
    std::vector<Process> processes;
    std::vector<MessageFlow> message_flows;
    std::vector<ExtensionSnapshot> extension_snapshots;

    const Process* find_process(const std::string& id) const;
    // Looks the node up across all processes; null if absent.
    const FlowNode* find_node(const std::string& id) const;
    const SequenceFlow* find_flow(const std::string& id) const;
    const MessageFlow* find_message_flow(const std::string& id) const;
    // Process owning the given flow node or sequence flow; null if absent.
    const Process* owner_of(const std::string& element_id) const;

    std::size_t flow_node_count() const;
    std::size_t sequence_flow_count() const;
};

// Model-level diagnostics: ERRORs for dangling references, call cycles,
// unsupported message-flow endpoints and miswired start/end events; WARNINGs
// for implicit gateways (multiple incoming/outgoing flows on non-gateways)
// and processes without any start event.
std::vector<Diagnostic> validate_model(const BpmnModel& model);

// Structural equality up to element ordering (used by parse/serialize
// round-trip checks).
bool structurally_equal(const BpmnModel& a, const BpmnModel& b);

}  // namespace bpmncheck

#endif
