#include "bpmncheck/model.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace bpmncheck {

const char* to_string(FlowNodeKind kind) {
    switch (kind) {
        case FlowNodeKind::NoneStartEvent: return "NoneStartEvent";
        case FlowNodeKind::NoneEndEvent: return "NoneEndEvent";
        case FlowNodeKind::Task: return "Task";
        case FlowNodeKind::SubProcessCall: return "SubProcessCall";
        case FlowNodeKind::ParallelGateway: return "ParallelGateway";
        case FlowNodeKind::ExclusiveGateway: return "ExclusiveGateway";
        case FlowNodeKind::MessageStartEvent: return "MessageStartEvent";
        case FlowNodeKind::MessageIntermediateThrowEvent: return "MessageIntermediateThrowEvent";
        case FlowNodeKind::MessageIntermediateCatchEvent: return "MessageIntermediateCatchEvent";
        case FlowNodeKind::MessageEndEvent: return "MessageEndEvent";
        case FlowNodeKind::LinkThrowEvent: return "LinkThrowEvent";
        case FlowNodeKind::LinkCatchEvent: return "LinkCatchEvent";
        case FlowNodeKind::SignalStartEvent: return "SignalStartEvent";
        case FlowNodeKind::SignalIntermediateThrowEvent: return "SignalIntermediateThrowEvent";
        case FlowNodeKind::SignalIntermediateCatchEvent: return "SignalIntermediateCatchEvent";
        case FlowNodeKind::SignalEndEvent: return "SignalEndEvent";
        case FlowNodeKind::TerminateEndEvent: return "TerminateEndEvent";
    }
    return "?";
}

bool is_start_event(FlowNodeKind kind) {
    return kind == FlowNodeKind::NoneStartEvent || kind == FlowNodeKind::MessageStartEvent ||
           kind == FlowNodeKind::SignalStartEvent;
}

bool is_end_event(FlowNodeKind kind) {
    return kind == FlowNodeKind::NoneEndEvent || kind == FlowNodeKind::MessageEndEvent ||
           kind == FlowNodeKind::SignalEndEvent || kind == FlowNodeKind::TerminateEndEvent;
}

bool is_gateway(FlowNodeKind kind) {
    return kind == FlowNodeKind::ParallelGateway || kind == FlowNodeKind::ExclusiveGateway;
}

bool is_activity(FlowNodeKind kind) {
    return kind == FlowNodeKind::Task || kind == FlowNodeKind::SubProcessCall;
}

const FlowNode* Process::find_node(const std::string& node_id) const {
    for (const auto& n : flow_nodes)
        if (n.id == node_id) return &n;
    return nullptr;
}

const SequenceFlow* Process::find_flow(const std::string& flow_id) const {
    for (const auto& f : sequence_flows)
        if (f.id == flow_id) return &f;
    return nullptr;
}

const Process* BpmnModel::find_process(const std::string& process_id) const {
    for (const auto& p : processes)
        if (p.id == process_id) return &p;
    return nullptr;
}

const FlowNode* BpmnModel::find_node(const std::string& node_id) const {
    for (const auto& p : processes)
        if (const auto* n = p.find_node(node_id)) return n;
    return nullptr;
}

const SequenceFlow* BpmnModel::find_flow(const std::string& flow_id) const {
    for (const auto& p : processes)
        if (const auto* f = p.find_flow(flow_id)) return f;
    return nullptr;
}

const MessageFlow* BpmnModel::find_message_flow(const std::string& flow_id) const {
    for (const auto& mf : message_flows)
        if (mf.id == flow_id) return &mf;
    return nullptr;
}

const Process* BpmnModel::owner_of(const std::string& element_id) const {
    for (const auto& p : processes) {
        if (p.find_node(element_id) || p.find_flow(element_id)) return &p;
    }
    return nullptr;
}

std::size_t BpmnModel::flow_node_count() const {
    std::size_t n = 0;
    for (const auto& p : processes) n += p.flow_nodes.size();
    return n;
}

std::size_t BpmnModel::sequence_flow_count() const {
    std::size_t n = 0;
    for (const auto& p : processes) n += p.sequence_flows.size();
    return n;
}

namespace {

// A process is on a call cycle iff it can reach itself through call edges.
// One error is reported per cycle, anchored at its first process in model
// order.
void find_call_cycles(const BpmnModel& model, std::vector<Diagnostic>& out) {
    std::map<std::string, std::set<std::string>> calls;
    for (const auto& p : model.processes) {
        for (const auto& n : p.flow_nodes) {
            if (n.kind == FlowNodeKind::SubProcessCall && n.called_process)
                calls[p.id].insert(*n.called_process);
        }
    }
    auto reachable = [&](const std::string& from) {
        std::set<std::string> seen;
        std::vector<std::string> stack(calls[from].begin(), calls[from].end());
        while (!stack.empty()) {
            std::string cur = stack.back();
            stack.pop_back();
            if (!seen.insert(cur).second) continue;
            for (const auto& next : calls[cur]) stack.push_back(next);
        }
        return seen;
    };

    std::set<std::string> covered;
    for (const auto& p : model.processes) {
        if (covered.count(p.id)) continue;
        auto reach = reachable(p.id);
        if (!reach.count(p.id)) continue;
        // Mark the whole cycle as reported.
        covered.insert(p.id);
        for (const auto& q : reach) {
            if (reachable(q).count(p.id)) covered.insert(q);
        }
        out.push_back({Severity::Error, p.id,
                       "process '" + p.id + "' calls itself through call activities"});
    }
}

}  // namespace

std::vector<Diagnostic> validate_model(const BpmnModel& model) {
    std::vector<Diagnostic> diags;

    std::set<std::string> all_ids;
    auto check_unique = [&](const std::string& id, const char* what) {
        if (!all_ids.insert(id).second)
            diags.push_back({Severity::Error, id, std::string("duplicate ") + what + " id"});
    };
    for (const auto& p : model.processes) {
        check_unique(p.id, "process");
        for (const auto& n : p.flow_nodes) check_unique(n.id, "flow-node");
    }

    for (const auto& p : model.processes) {
        for (const auto& f : p.sequence_flows) {
            if (!p.find_node(f.source))
                diags.push_back({Severity::Error, f.id,
                                 "sequence flow source '" + f.source + "' not found in process"});
            if (!p.find_node(f.target))
                diags.push_back({Severity::Error, f.id,
                                 "sequence flow target '" + f.target + "' not found in process"});
        }

        bool has_start = false;
        for (const auto& n : p.flow_nodes) {
            if (is_start_event(n.kind)) has_start = true;

            if (n.kind == FlowNodeKind::SubProcessCall) {
                if (!n.called_process)
                    diags.push_back({Severity::Error, n.id, "call activity has no called process"});
                else if (!model.find_process(*n.called_process))
                    diags.push_back({Severity::Error, n.id,
                                     "called process '" + *n.called_process + "' not found"});
            }
            if (is_start_event(n.kind) && !n.incoming.empty())
                diags.push_back({Severity::Error, n.id, "start event has incoming sequence flows"});
            if (is_end_event(n.kind) && !n.outgoing.empty())
                diags.push_back({Severity::Error, n.id, "end event has outgoing sequence flows"});

            if (!is_gateway(n.kind) && (n.incoming.size() > 1 || n.outgoing.size() > 1)) {
                diags.push_back({Severity::Warning, n.id,
                                 "flow node has " + std::to_string(n.incoming.size()) +
                                     " incoming / " + std::to_string(n.outgoing.size()) +
                                     " outgoing sequence flows; implicit gateways are bad practice"});
            }
        }
        if (!has_start)
            diags.push_back({Severity::Warning, p.id, "process has no start event"});
    }

    for (const auto& mf : model.message_flows) {
        const FlowNode* src = model.find_node(mf.source);
        const FlowNode* tgt = model.find_node(mf.target);
        if (!src)
            diags.push_back({Severity::Error, mf.id, "message flow source '" + mf.source + "' not found"});
        if (!tgt)
            diags.push_back({Severity::Error, mf.id, "message flow target '" + mf.target + "' not found"});
        if (src && src->kind != FlowNodeKind::MessageIntermediateThrowEvent &&
            src->kind != FlowNodeKind::MessageEndEvent)
            diags.push_back({Severity::Error, mf.id,
                             "message flow source must be a message throw or message end event"});
        if (tgt && tgt->kind != FlowNodeKind::MessageStartEvent &&
            tgt->kind != FlowNodeKind::MessageIntermediateCatchEvent)
            diags.push_back({Severity::Error, mf.id,
                             "message flow target must be a message start or message catch event"});
    }

    find_call_cycles(model, diags);
    return diags;
}

namespace {

template <typename T, typename Key>
std::vector<const T*> sorted_by(const std::vector<T>& xs, Key key) {
    std::vector<const T*> out;
    out.reserve(xs.size());
    for (const auto& x : xs) out.push_back(&x);
    std::sort(out.begin(), out.end(), [&](const T* a, const T* b) { return key(*a) < key(*b); });
    return out;
}

bool node_equal(const FlowNode& a, const FlowNode& b) {
    auto sorted = [](std::vector<std::string> v) {
        std::sort(v.begin(), v.end());
        return v;
    };
    return a.id == b.id && a.name == b.name && a.kind == b.kind &&
           sorted(a.incoming) == sorted(b.incoming) && sorted(a.outgoing) == sorted(b.outgoing) &&
           a.called_process == b.called_process;
}

}  // namespace

bool structurally_equal(const BpmnModel& a, const BpmnModel& b) {
    if (a.processes.size() != b.processes.size()) return false;
    if (a.message_flows.size() != b.message_flows.size()) return false;

    auto pid = [](const Process& p) { return p.id; };
    auto pa = sorted_by(a.processes, pid);
    auto pb = sorted_by(b.processes, pid);
    for (std::size_t i = 0; i < pa.size(); ++i) {
        if (pa[i]->id != pb[i]->id || pa[i]->name != pb[i]->name) return false;
        if (pa[i]->flow_nodes.size() != pb[i]->flow_nodes.size()) return false;
        if (pa[i]->sequence_flows.size() != pb[i]->sequence_flows.size()) return false;
        auto nid = [](const FlowNode& n) { return n.id; };
        auto na = sorted_by(pa[i]->flow_nodes, nid);
        auto nb = sorted_by(pb[i]->flow_nodes, nid);
        for (std::size_t j = 0; j < na.size(); ++j)
            if (!node_equal(*na[j], *nb[j])) return false;
        auto fid = [](const SequenceFlow& f) { return f.id; };
        auto fa = sorted_by(pa[i]->sequence_flows, fid);
        auto fb = sorted_by(pb[i]->sequence_flows, fid);
        for (std::size_t j = 0; j < fa.size(); ++j) {
            if (fa[j]->id != fb[j]->id || fa[j]->source != fb[j]->source ||
                fa[j]->target != fb[j]->target)
                return false;
        }
    }
    auto mid = [](const MessageFlow& m) { return m.id; };
    auto ma = sorted_by(a.message_flows, mid);
    auto mb = sorted_by(b.message_flows, mid);
    for (std::size_t i = 0; i < ma.size(); ++i) {
        if (ma[i]->id != mb[i]->id || ma[i]->source != mb[i]->source ||
            ma[i]->target != mb[i]->target)
            return false;
    }
    return true;
}

}  // namespace bpmncheck
