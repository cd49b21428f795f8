#include "bpmncheck/generate.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace bpmncheck {

const Rule* RuleSet::find_rule(const std::string& name) const {
    for (const auto& r : rules)
        if (r.name == name) return &r;
    return nullptr;
}

ExecutionState generate_start_state(const BpmnModel& model) {
    ExecutionState state;
    for (const auto& proc : model.processes) {
        ProcessSnapshot snap;
        snap.process = proc.id;
        bool has_nse = false;
        for (const auto& node : proc.flow_nodes) {
            if (node.kind != FlowNodeKind::NoneStartEvent) continue;
            has_nse = true;
            for (const auto& sf : node.outgoing) snap.tokens[sf] += 1;
        }
        if (has_nse) state.snapshots.push_back(std::move(snap));
    }
    return normalize(state);
}

namespace {

// Initial token placement for a spawned instance of `proc`: tokens at the
// outgoing flows of its none start events, or — when the process has no
// start events at all — on every activity and gateway without incoming
// sequence flows.
Counts spawn_tokens(const Process& proc) {
    Counts tokens;
    bool has_start = false;
    for (const auto& node : proc.flow_nodes) {
        if (!is_start_event(node.kind)) continue;
        has_start = true;
        if (node.kind == FlowNodeKind::NoneStartEvent)
            for (const auto& sf : node.outgoing) tokens[sf] += 1;
    }
    if (!has_start) {
        for (const auto& node : proc.flow_nodes) {
            if ((is_activity(node.kind) || is_gateway(node.kind)) && node.incoming.empty())
                tokens[node.id] += 1;
        }
    }
    return tokens;
}

class Generator {
public:
    explicit Generator(const BpmnModel& model) : model_(model) {}

    RuleSet run() {
        RuleSet rs;
        rs.model = std::make_shared<const BpmnModel>(model_);
        rs.start_state = generate_start_state(model_);

        for (const auto& proc : model_.processes)
            for (const auto& node : proc.flow_nodes) generate_for_node(proc, node);

        std::stable_sort(rules_.begin(), rules_.end(), [](const Rule& a, const Rule& b) {
            return a.source_node == b.source_node ? a.name < b.name
                                                  : a.source_node < b.source_node;
        });

        Rule termination;
        termination.name = "terminate_process";
        termination.role = RuleRole::Termination;
        termination.guards = {SnapshotRunning{}, NoTokensAtAll{}, NoChildren{}};
        termination.effects = {SetTerminated{}};
        rules_.push_back(std::move(termination));

        ensure_unique_names();
        rs.rules = std::move(rules_);
        rs.diagnostics = std::move(diagnostics_);
        return rs;
    }

private:
    void generate_for_node(const Process& proc, const FlowNode& node) {
        switch (node.kind) {
            case FlowNodeKind::NoneStartEvent:
            case FlowNodeKind::MessageStartEvent:
            case FlowNodeKind::SignalStartEvent:
            case FlowNodeKind::LinkCatchEvent:
            case FlowNodeKind::SignalIntermediateCatchEvent:
                // Instantiated by the start graph or by the matching throw
                // rules; no rules of their own.
                break;
            case FlowNodeKind::NoneEndEvent:
                for (const auto& sf : node.incoming) {
                    Rule r = base_rule(proc, node, node.id + "_consume_" + sf, RuleRole::EventFire);
                    r.guards = {TokenAt{sf, 1}};
                    r.effects = {ConsumeToken{sf, 1}};
                    rules_.push_back(std::move(r));
                }
                break;
            case FlowNodeKind::Task:
                generate_task(proc, node);
                break;
            case FlowNodeKind::SubProcessCall:
                generate_call(proc, node);
                break;
            case FlowNodeKind::ParallelGateway:
                if (!node.incoming.empty()) {
                    Rule r = base_rule(proc, node, node.id + "_fire", RuleRole::GatewayFire);
                    for (const auto& sf : node.incoming) r.guards.push_back(TokenAt{sf, 1});
                    for (const auto& sf : node.incoming) r.effects.push_back(ConsumeToken{sf, 1});
                    for (const auto& sf : node.outgoing) r.effects.push_back(ProduceToken{sf, 1});
                    rules_.push_back(std::move(r));
                } else {
                    // Entered via a gateway token (start-less subprocess
                    // instantiation).
                    Rule r = base_rule(proc, node, node.id + "_fromNode", RuleRole::GatewayFire);
                    r.guards = {TokenAt{node.id, 1}};
                    r.effects = {ConsumeToken{node.id, 1}};
                    for (const auto& sf : node.outgoing) r.effects.push_back(ProduceToken{sf, 1});
                    rules_.push_back(std::move(r));
                }
                break;
            case FlowNodeKind::ExclusiveGateway:
                for (const auto& in : node.incoming) {
                    for (const auto& out : node.outgoing) {
                        Rule r = base_rule(proc, node, node.id + "_" + in + "_to_" + out,
                                           RuleRole::GatewayFire);
                        r.guards = {TokenAt{in, 1}};
                        r.effects = {ConsumeToken{in, 1}, ProduceToken{out, 1}};
                        rules_.push_back(std::move(r));
                    }
                }
                if (node.incoming.empty()) {
                    for (const auto& out : node.outgoing) {
                        Rule r = base_rule(proc, node, node.id + "_fromNode_" + out,
                                           RuleRole::GatewayFire);
                        r.guards = {TokenAt{node.id, 1}};
                        r.effects = {ConsumeToken{node.id, 1}, ProduceToken{out, 1}};
                        rules_.push_back(std::move(r));
                    }
                }
                break;
            case FlowNodeKind::MessageIntermediateThrowEvent:
            case FlowNodeKind::MessageEndEvent:
                generate_message_throw(proc, node);
                break;
            case FlowNodeKind::MessageIntermediateCatchEvent:
                generate_message_catch(proc, node);
                break;
            case FlowNodeKind::LinkThrowEvent:
                generate_link_throw(proc, node);
                break;
            case FlowNodeKind::SignalIntermediateThrowEvent:
            case FlowNodeKind::SignalEndEvent:
                generate_signal_throw(proc, node);
                break;
            case FlowNodeKind::TerminateEndEvent:
                for (const auto& sf : node.incoming) {
                    Rule r =
                        base_rule(proc, node, node.id + "_terminate_" + sf, RuleRole::EventFire);
                    r.guards = {TokenAt{sf, 1}};
                    r.effects = {ConsumeToken{sf, 1}, DeleteAllTokens{}, SetTerminated{},
                                 TerminateSubtree{}};
                    rules_.push_back(std::move(r));
                }
                break;
        }
    }

    void generate_task(const Process& proc, const FlowNode& node) {
        for (const auto& sf : node.incoming) {
            Rule r = base_rule(proc, node, node.id + "_start_" + sf, RuleRole::ActivityStart);
            r.guards = {TokenAt{sf, 1}};
            r.effects = {ConsumeToken{sf, 1}, ProduceToken{node.id, 1}};
            rules_.push_back(std::move(r));
        }
        Rule r = base_rule(proc, node, node.id + "_end", RuleRole::ActivityEnd);
        r.guards = {TokenAt{node.id, 1}};
        r.effects = {ConsumeToken{node.id, 1}};
        for (const auto& sf : node.outgoing) r.effects.push_back(ProduceToken{sf, 1});
        rules_.push_back(std::move(r));
    }

    void generate_call(const Process& proc, const FlowNode& node) {
        if (!node.called_process)
            throw IllFormedRuleError("call activity '" + node.id + "' has no called process");
        const Process* called = model_.find_process(*node.called_process);
        if (!called)
            throw IllFormedRuleError("call activity '" + node.id + "' calls unknown process '" +
                                     *node.called_process + "'");
        Counts initial = spawn_tokens(*called);

        for (const auto& sf : node.incoming) {
            Rule r = base_rule(proc, node, node.id + "_start_" + sf, RuleRole::ActivityStart);
            r.guards = {TokenAt{sf, 1}};
            r.effects = {ConsumeToken{sf, 1}, SpawnChild{called->id, node.id, initial}};
            rules_.push_back(std::move(r));
        }
        Rule r = base_rule(proc, node, node.id + "_end", RuleRole::ActivityEnd);
        r.guards = {ChildTerminated{node.id}};
        r.effects = {DeleteTerminatedChild{node.id}};
        for (const auto& sf : node.outgoing) r.effects.push_back(ProduceToken{sf, 1});
        rules_.push_back(std::move(r));
    }

    // MITE and MEE: token movement plus optional message delivery to catch
    // events and direct instantiation of message start events, merged into
    // one rule per incoming flow.
    void generate_message_throw(const Process& proc, const FlowNode& node) {
        std::vector<OptionalMessageSend> sends;
        std::vector<Effect> spawns;
        for (const auto& mf : model_.message_flows) {
            if (mf.source != node.id) continue;
            const FlowNode* target = model_.find_node(mf.target);
            if (!target) continue;
            const Process* target_proc = model_.owner_of(mf.target);
            if (target->kind == FlowNodeKind::MessageIntermediateCatchEvent) {
                if (target->incoming.empty()) {
                    diagnostics_.push_back(
                        {Severity::Warning, mf.id,
                         "message flow targets catch event '" + target->id +
                             "' with no incoming sequence flows; it can never be delivered"});
                    continue;
                }
                sends.push_back({mf.id, target->incoming, target_proc->id});
            } else if (target->kind == FlowNodeKind::MessageStartEvent) {
                Counts tokens;
                for (const auto& sf : target->outgoing) tokens[sf] += 1;
                spawns.push_back(SpawnTopLevel{target_proc->id, std::move(tokens), mf.id});
            }
        }

        for (const auto& sf : node.incoming) {
            Rule r = base_rule(proc, node, node.id + "_throw_" + sf, RuleRole::EventFire);
            r.guards = {TokenAt{sf, 1}};
            r.effects = {ConsumeToken{sf, 1}};
            if (node.kind == FlowNodeKind::MessageIntermediateThrowEvent)
                for (const auto& out : node.outgoing) r.effects.push_back(ProduceToken{out, 1});
            for (const auto& e : spawns) r.effects.push_back(e);
            r.optional_sends = sends;
            rules_.push_back(std::move(r));
        }
    }

    void generate_message_catch(const Process& proc, const FlowNode& node) {
        for (const auto& mf : model_.message_flows) {
            if (mf.target != node.id) continue;
            for (const auto& sf : node.incoming) {
                Rule r = base_rule(proc, node, node.id + "_catch_" + mf.id + "_" + sf,
                                   RuleRole::EventFire);
                r.guards = {MessageAt{mf.id}, TokenAt{sf, 1}};
                r.effects = {ConsumeMessage{mf.id}, ConsumeToken{sf, 1}};
                for (const auto& out : node.outgoing) r.effects.push_back(ProduceToken{out, 1});
                rules_.push_back(std::move(r));
            }
        }
    }

    // Link throws jump: the token reappears at the outgoing flows of every
    // same-process catch event with an equal name.
    void generate_link_throw(const Process& proc, const FlowNode& node) {
        std::vector<Effect> productions;
        bool matched = false;
        for (const auto& other : proc.flow_nodes) {
            if (other.kind != FlowNodeKind::LinkCatchEvent || other.name != node.name) continue;
            matched = true;
            for (const auto& out : other.outgoing) productions.push_back(ProduceToken{out, 1});
        }
        if (!matched) {
            diagnostics_.push_back({Severity::Warning, node.id,
                                    "link throw event has no matching link catch event; its "
                                    "token is consumed without continuation"});
        }
        for (const auto& sf : node.incoming) {
            Rule r = base_rule(proc, node, node.id + "_throw_" + sf, RuleRole::EventFire);
            r.guards = {TokenAt{sf, 1}};
            r.effects = {ConsumeToken{sf, 1}};
            for (const auto& e : productions) r.effects.push_back(e);
            rules_.push_back(std::move(r));
        }
    }

    // Signal broadcast: catch events anywhere with the same signal name are
    // triggered once per waiting token; start events spawn one instance each.
    void generate_signal_throw(const Process& proc, const FlowNode& node) {
        std::vector<UniversalBlock> blocks;
        for (const auto& p : model_.processes) {
            for (const auto& other : p.flow_nodes) {
                if (other.name != node.name) continue;
                if (other.kind == FlowNodeKind::SignalIntermediateCatchEvent) {
                    for (const auto& in : other.incoming)
                        blocks.push_back(SignalCatch{in, other.outgoing});
                } else if (other.kind == FlowNodeKind::SignalStartEvent) {
                    blocks.push_back(SignalSpawn{p.id, other.outgoing});
                }
            }
        }
        for (const auto& sf : node.incoming) {
            Rule r = base_rule(proc, node, node.id + "_throw_" + sf, RuleRole::EventFire);
            r.guards = {TokenAt{sf, 1}};
            r.effects = {ConsumeToken{sf, 1}};
            if (node.kind == FlowNodeKind::SignalIntermediateThrowEvent)
                for (const auto& out : node.outgoing) r.effects.push_back(ProduceToken{out, 1});
            r.universal_blocks = blocks;
            rules_.push_back(std::move(r));
        }
    }

    Rule base_rule(const Process& proc, const FlowNode& node, std::string name, RuleRole role) {
        Rule r;
        r.name = std::move(name);
        r.source_node = node.id;
        r.focal_process = proc.id;
        r.role = role;
        return r;
    }

    void ensure_unique_names() {
        std::set<std::string> used;
        std::map<std::string, int> counter;
        for (auto& r : rules_) {
            if (used.insert(r.name).second) continue;
            int& n = counter[r.name];
            std::string candidate;
            do {
                candidate = r.name + "__" + std::to_string(++n + 1);
            } while (used.count(candidate));
            r.name = std::move(candidate);
            used.insert(r.name);
        }
    }

    const BpmnModel& model_;
    std::vector<Rule> rules_;
    std::vector<Diagnostic> diagnostics_;
};

}  // namespace

RuleSet generate_rules(const BpmnModel& model) {
    return Generator(model).run();
}

}  // namespace bpmncheck
