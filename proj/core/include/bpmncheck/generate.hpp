#ifndef BPMNCHECK_GENERATE_HPP
#define BPMNCHECK_GENERATE_HPP

#include <memory>

#include "bpmncheck/model.hpp"
#include "bpmncheck/rule.hpp"
#include "bpmncheck/state.hpp"

namespace bpmncheck {

// The model-specific rewrite system generated for a BPMN model: one rule set
// plus the start state. Keeps its own copy of the source model.
struct RuleSet {
    std::vector<Rule> rules;
    ExecutionState start_state;
    std::shared_ptr<const BpmnModel> model;
    std::vector<Diagnostic> diagnostics;  // generation warnings

    const Rule* find_rule(const std::string& name) const;
};

// One Running top-level snapshot per process containing at least one none
// start event, holding one token per outgoing flow of each of them.
// Processes without a none start event get no snapshot.
ExecutionState generate_start_state(const BpmnModel& model);

// Generates the per-node token-game rules plus exactly one generic
// termination rule. Deterministic: equal models yield identical rule sets
// including names and order. Expects a validated model.
RuleSet generate_rules(const BpmnModel& model);

}  // namespace bpmncheck

#endif
