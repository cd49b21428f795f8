#include "token_game_oracle.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <stdexcept>

namespace oracle {

using bpmncheck::BpmnModel;
using bpmncheck::FlowNode;
using bpmncheck::FlowNodeKind;
using bpmncheck::Process;

namespace {

const Process& the_process(const BpmnModel& model) {
    if (model.processes.size() != 1 || !model.message_flows.empty())
        throw std::invalid_argument("oracle supports single-process models only");
    for (const auto& n : model.processes[0].flow_nodes) {
        switch (n.kind) {
            case FlowNodeKind::NoneStartEvent:
            case FlowNodeKind::NoneEndEvent:
            case FlowNodeKind::Task:
            case FlowNodeKind::ParallelGateway:
            case FlowNodeKind::ExclusiveGateway:
                break;
            default:
                throw std::invalid_argument("oracle does not support node kind " +
                                            std::string(bpmncheck::to_string(n.kind)));
        }
    }
    return model.processes[0];
}

int tokens_at(const State& s, const std::string& id) {
    auto it = s.tokens.find(id);
    return it == s.tokens.end() ? 0 : it->second;
}

void remove_token(State& s, const std::string& id) {
    auto it = s.tokens.find(id);
    if (--it->second == 0) s.tokens.erase(it);
}

}  // namespace

State initial_state(const BpmnModel& model) {
    const Process& proc = the_process(model);
    State s;
    for (const auto& n : proc.flow_nodes)
        if (n.kind == FlowNodeKind::NoneStartEvent)
            for (const auto& sf : n.outgoing) s.tokens[sf] += 1;
    return s;
}

std::vector<Step> successors(const BpmnModel& model, const State& state) {
    const Process& proc = the_process(model);
    std::vector<Step> steps;
    if (state.terminated) return steps;

    for (const auto& n : proc.flow_nodes) {
        switch (n.kind) {
            case FlowNodeKind::NoneEndEvent:
                for (const auto& sf : n.incoming) {
                    if (tokens_at(state, sf) >= 1) {
                        State next = state;
                        remove_token(next, sf);
                        steps.push_back({"end:" + n.id + ":" + sf, std::move(next)});
                    }
                }
                break;
            case FlowNodeKind::Task: {
                for (const auto& sf : n.incoming) {
                    if (tokens_at(state, sf) >= 1) {
                        State next = state;
                        remove_token(next, sf);
                        next.tokens[n.id] += 1;
                        steps.push_back({"taskstart:" + n.id + ":" + sf, std::move(next)});
                    }
                }
                if (tokens_at(state, n.id) >= 1) {
                    State next = state;
                    remove_token(next, n.id);
                    for (const auto& sf : n.outgoing) next.tokens[sf] += 1;
                    steps.push_back({"taskend:" + n.id, std::move(next)});
                }
                break;
            }
            case FlowNodeKind::ParallelGateway: {
                if (n.incoming.empty()) break;
                bool enabled = true;
                for (const auto& sf : n.incoming)
                    if (tokens_at(state, sf) < 1) enabled = false;
                if (enabled) {
                    State next = state;
                    for (const auto& sf : n.incoming) remove_token(next, sf);
                    for (const auto& sf : n.outgoing) next.tokens[sf] += 1;
                    steps.push_back({"pg:" + n.id, std::move(next)});
                }
                break;
            }
            case FlowNodeKind::ExclusiveGateway:
                for (const auto& in : n.incoming) {
                    if (tokens_at(state, in) < 1) continue;
                    for (const auto& out : n.outgoing) {
                        State next = state;
                        remove_token(next, in);
                        next.tokens[out] += 1;
                        steps.push_back({"xg:" + n.id + ":" + in + ":" + out, std::move(next)});
                    }
                }
                break;
            default:
                break;
        }
    }

    if (state.tokens.empty() && !state.terminated) {
        State next = state;
        next.terminated = true;
        steps.push_back({"terminate", std::move(next)});
    }
    return steps;
}

Lts enumerate(const BpmnModel& model) {
    Lts lts;
    std::map<State, std::size_t> index;
    State init = initial_state(model);
    lts.states.push_back(init);
    index[init] = 0;
    std::deque<std::size_t> queue{0};
    while (!queue.empty()) {
        std::size_t cur = queue.front();
        queue.pop_front();
        State state = lts.states[cur];
        for (auto& step : successors(model, state)) {
            auto [it, fresh] = index.try_emplace(step.next, lts.states.size());
            if (fresh) {
                lts.states.push_back(step.next);
                queue.push_back(it->second);
            }
            lts.transitions.push_back({cur, step.label, it->second});
        }
    }
    std::sort(lts.transitions.begin(), lts.transitions.end());
    lts.transitions.erase(std::unique(lts.transitions.begin(), lts.transitions.end()),
                          lts.transitions.end());
    return lts;
}

bool safe(const BpmnModel& model, const Lts& lts) {
    std::set<std::string> flow_ids;
    for (const auto& f : model.processes[0].sequence_flows) flow_ids.insert(f.id);
    for (const auto& s : lts.states)
        for (const auto& [id, count] : s.tokens)
            if (count >= 2 && flow_ids.count(id)) return false;
    return true;
}

bool option_to_complete(const Lts& lts) {
    // Greatest fixpoint of "not terminated-state and has a successor in the
    // set" over the totalized graph; the property fails iff the initial
    // state is in it.
    const std::size_t n = lts.states.size();
    std::vector<std::vector<std::size_t>> succ(n);
    for (const auto& t : lts.transitions) succ[t.source].push_back(t.target);
    std::vector<bool> in_set(n);
    for (std::size_t i = 0; i < n; ++i) in_set[i] = !lts.states[i].terminated;
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            if (!in_set[i]) continue;
            bool any = succ[i].empty();  // deadlock keeps itself alive
            for (auto t : succ[i])
                if (in_set[t]) any = true;
            if (!any) {
                in_set[i] = false;
                changed = true;
            }
        }
    }
    return !in_set[0];
}

bool proper_completion(const BpmnModel& model, const Lts& lts) {
    for (const auto& n : model.processes[0].flow_nodes) {
        if (n.kind != FlowNodeKind::NoneEndEvent) continue;
        std::string prefix = "end:" + n.id + ":";
        std::vector<bool> is_source(lts.states.size(), false);
        std::vector<bool> reached(lts.states.size(), false);
        std::deque<std::size_t> queue;
        for (const auto& t : lts.transitions) {
            if (t.label.rfind(prefix, 0) != 0) continue;
            is_source[t.source] = true;
            if (!reached[t.target]) {
                reached[t.target] = true;
                queue.push_back(t.target);
            }
        }
        std::vector<std::vector<std::size_t>> succ(lts.states.size());
        for (const auto& t : lts.transitions) succ[t.source].push_back(t.target);
        while (!queue.empty()) {
            std::size_t cur = queue.front();
            queue.pop_front();
            if (is_source[cur]) return false;  // same end event can fire again
            for (auto t : succ[cur]) {
                if (!reached[t]) {
                    reached[t] = true;
                    queue.push_back(t);
                }
            }
        }
    }
    return true;
}

std::vector<std::string> dead_activities(const BpmnModel& model, const Lts& lts) {
    std::set<std::string> started;
    for (const auto& t : lts.transitions) {
        if (t.label.rfind("taskstart:", 0) == 0) {
            std::string rest = t.label.substr(10);
            started.insert(rest.substr(0, rest.find(':')));
        }
    }
    std::vector<std::string> dead;
    for (const auto& n : model.processes[0].flow_nodes)
        if (n.kind == FlowNodeKind::Task && !started.count(n.id)) dead.push_back(n.id);
    return dead;
}

}  // namespace oracle
