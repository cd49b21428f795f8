#include "bpmncheck/rule.hpp"

#include <algorithm>
#include <cassert>

#include <nlohmann/json.hpp>

namespace bpmncheck {

namespace {

using Path = std::vector<std::size_t>;

void collect_paths(const std::vector<ProcessSnapshot>& snaps, Path& prefix,
                   std::vector<Path>& out) {
    for (std::size_t i = 0; i < snaps.size(); ++i) {
        prefix.push_back(i);
        out.push_back(prefix);
        collect_paths(snaps[i].children, prefix, out);
        prefix.pop_back();
    }
}

std::vector<Path> all_paths(const ExecutionState& state) {
    std::vector<Path> out;
    Path prefix;
    collect_paths(state.snapshots, prefix, out);
    return out;
}

const ProcessSnapshot& at(const ExecutionState& state, const Path& path) {
    const ProcessSnapshot* cur = &state.snapshots[path[0]];
    for (std::size_t i = 1; i < path.size(); ++i) cur = &cur->children[path[i]];
    return *cur;
}

ProcessSnapshot& at_mut(ExecutionState& state, const Path& path) {
    ProcessSnapshot* cur = &state.snapshots[path[0]];
    for (std::size_t i = 1; i < path.size(); ++i) cur = &cur->children[path[i]];
    return *cur;
}

int count_of(const Counts& counts, const std::string& id) {
    auto it = counts.find(id);
    return it == counts.end() ? 0 : it->second;
}

void add_count(Counts& counts, const std::string& id, int n) {
    if (n == 0) return;
    int next = count_of(counts, id) + n;
    assert(next >= 0 && "multiset count underflow");
    if (next <= 0)
        counts.erase(id);
    else
        counts[id] = next;
}

bool guard_holds(const Guard& guard, const ProcessSnapshot& snap) {
    return std::visit(
        [&](const auto& g) -> bool {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, TokenAt>)
                return count_of(snap.tokens, g.element) >= g.min_count;
            else if constexpr (std::is_same_v<T, NoTokenAt>)
                return count_of(snap.tokens, g.element) == 0;
            else if constexpr (std::is_same_v<T, MessageAt>)
                return count_of(snap.messages, g.message_flow) >= 1;
            else if constexpr (std::is_same_v<T, SnapshotRunning>)
                return snap.lifecycle == Lifecycle::Running;
            else if constexpr (std::is_same_v<T, NoTokensAtAll>)
                return snap.tokens.empty();
            else if constexpr (std::is_same_v<T, NoChildren>)
                return snap.children.empty();
            else if constexpr (std::is_same_v<T, ChildTerminated>) {
                for (const auto& c : snap.children)
                    if (c.spawned_by == g.spawned_by && c.lifecycle == Lifecycle::Terminated)
                        return true;
                return false;
            }
        },
        guard);
}

void apply_effect(const Effect& effect, ExecutionState& state, const Path& focal_path) {
    ProcessSnapshot& focal = at_mut(state, focal_path);
    std::visit(
        [&](const auto& e) {
            using T = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<T, ConsumeToken>)
                add_count(focal.tokens, e.element, -e.count);
            else if constexpr (std::is_same_v<T, ProduceToken>)
                add_count(focal.tokens, e.element, e.count);
            else if constexpr (std::is_same_v<T, ConsumeMessage>)
                add_count(focal.messages, e.message_flow, -1);
            else if constexpr (std::is_same_v<T, SetTerminated>)
                focal.lifecycle = Lifecycle::Terminated;
            else if constexpr (std::is_same_v<T, DeleteAllTokens>)
                focal.tokens.clear();
            else if constexpr (std::is_same_v<T, TerminateSubtree>)
                focal.children.clear();
            else if constexpr (std::is_same_v<T, DeleteTerminatedChild>) {
                auto it = std::find_if(focal.children.begin(), focal.children.end(),
                                       [&](const ProcessSnapshot& c) {
                                           return c.spawned_by == e.spawned_by &&
                                                  c.lifecycle == Lifecycle::Terminated;
                                       });
                assert(it != focal.children.end() && "no terminated child to collect");
                if (it != focal.children.end()) focal.children.erase(it);
            } else if constexpr (std::is_same_v<T, SpawnChild>) {
                ProcessSnapshot child;
                child.process = e.process;
                child.spawned_by = e.spawned_by;
                child.tokens = e.initial_tokens;
                focal.children.push_back(std::move(child));
            } else if constexpr (std::is_same_v<T, SpawnTopLevel>) {
                ProcessSnapshot snap;
                snap.process = e.process;
                snap.tokens = e.initial_tokens;
                state.snapshots.push_back(std::move(snap));
            }
        },
        effect);
}

std::string path_string(const Path& path) {
    std::string out;
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (i) out += '.';
        out += std::to_string(path[i]);
    }
    return out;
}

}  // namespace

std::vector<RuleApplication> apply_rule(const Rule& rule, const ExecutionState& state) {
    std::vector<RuleApplication> results;
    const std::vector<Path> paths = all_paths(state);

    // Eligible recipients per optional send, matched on the pre-state.
    std::vector<std::vector<Path>> recipients(rule.optional_sends.size());
    for (std::size_t b = 0; b < rule.optional_sends.size(); ++b) {
        const auto& send = rule.optional_sends[b];
        for (const auto& p : paths) {
            const ProcessSnapshot& snap = at(state, p);
            if (snap.process != send.target_process || snap.lifecycle != Lifecycle::Running)
                continue;
            bool ready = false;
            for (const auto& sf : send.eligibility_tokens)
                if (count_of(snap.tokens, sf) >= 1) ready = true;
            if (ready) recipients[b].push_back(p);
        }
    }

    for (const auto& focal_path : paths) {
        const ProcessSnapshot& focal = at(state, focal_path);
        if (!rule.focal_process.empty() && focal.process != rule.focal_process) continue;
        bool ok = true;
        for (const auto& g : rule.guards)
            if (!guard_holds(g, focal)) ok = false;
        if (!ok) continue;

        // Cartesian product over the optional sends that have eligible
        // recipients; sends without any recipient are skipped.
        std::vector<std::size_t> active;
        for (std::size_t b = 0; b < recipients.size(); ++b)
            if (!recipients[b].empty()) active.push_back(b);

        std::vector<std::size_t> choice(active.size(), 0);
        while (true) {
            ExecutionState succ = state;
            std::string binding = "focal=" + path_string(focal_path);

            // Matching happens on the pre-state, so deliveries and universal
            // parts are applied before structural effects can move things.
            for (std::size_t i = 0; i < active.size(); ++i) {
                const auto& send = rule.optional_sends[active[i]];
                const Path& recipient = recipients[active[i]][choice[i]];
                add_count(at_mut(succ, recipient).messages, send.message_flow, 1);
                binding += ";" + send.message_flow + "@" + path_string(recipient);
            }

            for (const auto& block : rule.universal_blocks) {
                if (const auto* catch_block = std::get_if<SignalCatch>(&block)) {
                    for (const auto& p : paths) {
                        int n = count_of(at(state, p).tokens, catch_block->catch_incoming);
                        if (n == 0) continue;
                        ProcessSnapshot& target = at_mut(succ, p);
                        add_count(target.tokens, catch_block->catch_incoming, -n);
                        for (const auto& out : catch_block->catch_outgoing)
                            add_count(target.tokens, out, n);
                    }
                }
            }

            for (const auto& e : rule.effects) apply_effect(e, succ, focal_path);

            for (const auto& block : rule.universal_blocks) {
                if (const auto* spawn = std::get_if<SignalSpawn>(&block)) {
                    ProcessSnapshot snap;
                    snap.process = spawn->process;
                    for (const auto& sf : spawn->sse_outgoing) add_count(snap.tokens, sf, 1);
                    succ.snapshots.push_back(std::move(snap));
                }
            }

            RuleApplication app;
            app.state = normalize(succ);
            app.key = canonical_key(app.state);
            app.binding = std::move(binding);
            assert(terminated_snapshots_are_empty(app.state) &&
                   "terminated snapshot with tokens or children");
            results.push_back(std::move(app));

            // Advance the mixed-radix choice vector.
            std::size_t i = 0;
            for (; i < active.size(); ++i) {
                if (++choice[i] < recipients[active[i]].size()) break;
                choice[i] = 0;
            }
            if (i == active.size()) break;
        }
    }

    std::sort(results.begin(), results.end(), [](const RuleApplication& a, const RuleApplication& b) {
        return a.key == b.key ? a.binding < b.binding : a.key < b.key;
    });
    results.erase(std::unique(results.begin(), results.end(),
                              [](const RuleApplication& a, const RuleApplication& b) {
                                  return a.key == b.key && a.binding == b.binding;
                              }),
                  results.end());
    return results;
}

namespace {

bool element_exists(const BpmnModel& model, const std::string& id) {
    return model.find_node(id) != nullptr || model.find_flow(id) != nullptr;
}

}  // namespace

std::vector<Diagnostic> check_rule_wellformed(const Rule& rule, const BpmnModel& model) {
    std::vector<Diagnostic> diags;
    auto bad = [&](const std::string& what) {
        diags.push_back({Severity::Error, rule.name, what});
    };
    auto check_element = [&](const std::string& id) {
        if (!element_exists(model, id)) bad("unresolvable element id '" + id + "'");
    };
    auto check_message = [&](const std::string& id) {
        if (!model.find_message_flow(id)) bad("unresolvable message-flow id '" + id + "'");
    };
    auto check_process = [&](const std::string& id) {
        if (!model.find_process(id)) bad("unresolvable process id '" + id + "'");
    };
    auto check_node = [&](const std::string& id) {
        if (!model.find_node(id)) bad("unresolvable flow-node id '" + id + "'");
    };

    if (!rule.focal_process.empty()) check_process(rule.focal_process);
    if (!rule.source_node.empty()) check_node(rule.source_node);

    for (const auto& g : rule.guards) {
        std::visit(
            [&](const auto& gv) {
                using T = std::decay_t<decltype(gv)>;
                if constexpr (std::is_same_v<T, TokenAt>) check_element(gv.element);
                else if constexpr (std::is_same_v<T, NoTokenAt>) check_element(gv.element);
                else if constexpr (std::is_same_v<T, MessageAt>) check_message(gv.message_flow);
                else if constexpr (std::is_same_v<T, ChildTerminated>) check_node(gv.spawned_by);
            },
            g);
    }
    if (rule.effects.empty()) bad("rule has no effects");
    for (const auto& e : rule.effects) {
        std::visit(
            [&](const auto& ev) {
                using T = std::decay_t<decltype(ev)>;
                if constexpr (std::is_same_v<T, ConsumeToken> || std::is_same_v<T, ProduceToken>)
                    check_element(ev.element);
                else if constexpr (std::is_same_v<T, ConsumeMessage>)
                    check_message(ev.message_flow);
                else if constexpr (std::is_same_v<T, DeleteTerminatedChild>)
                    check_node(ev.spawned_by);
                else if constexpr (std::is_same_v<T, SpawnChild>) {
                    check_process(ev.process);
                    check_node(ev.spawned_by);
                    for (const auto& [id, n] : ev.initial_tokens) check_element(id);
                } else if constexpr (std::is_same_v<T, SpawnTopLevel>) {
                    check_process(ev.process);
                    for (const auto& [id, n] : ev.initial_tokens) check_element(id);
                    if (ev.incoming_message) check_message(*ev.incoming_message);
                }
            },
            e);
    }
    for (const auto& send : rule.optional_sends) {
        check_message(send.message_flow);
        check_process(send.target_process);
        if (send.eligibility_tokens.empty())
            bad("optional send of '" + send.message_flow + "' has an empty eligibility set");
        for (const auto& sf : send.eligibility_tokens) check_element(sf);
    }
    for (const auto& block : rule.universal_blocks) {
        if (const auto* c = std::get_if<SignalCatch>(&block)) {
            check_element(c->catch_incoming);
            for (const auto& sf : c->catch_outgoing) check_element(sf);
        } else if (const auto* s = std::get_if<SignalSpawn>(&block)) {
            check_process(s->process);
            for (const auto& sf : s->sse_outgoing) check_element(sf);
        }
    }
    return diags;
}

namespace {

using nlohmann::json;

json guard_json(const Guard& g) {
    return std::visit(
        [](const auto& gv) -> json {
            using T = std::decay_t<decltype(gv)>;
            if constexpr (std::is_same_v<T, TokenAt>)
                return {{"type", "tokenAt"}, {"element", gv.element}, {"min", gv.min_count}};
            else if constexpr (std::is_same_v<T, NoTokenAt>)
                return {{"type", "noTokenAt"}, {"element", gv.element}};
            else if constexpr (std::is_same_v<T, MessageAt>)
                return {{"type", "messageAt"}, {"messageFlow", gv.message_flow}};
            else if constexpr (std::is_same_v<T, SnapshotRunning>)
                return {{"type", "running"}};
            else if constexpr (std::is_same_v<T, NoTokensAtAll>)
                return {{"type", "noTokens"}};
            else if constexpr (std::is_same_v<T, NoChildren>)
                return {{"type", "noChildren"}};
            else if constexpr (std::is_same_v<T, ChildTerminated>)
                return {{"type", "childTerminated"}, {"spawnedBy", gv.spawned_by}};
        },
        g);
}

json effect_json(const Effect& e) {
    return std::visit(
        [](const auto& ev) -> json {
            using T = std::decay_t<decltype(ev)>;
            if constexpr (std::is_same_v<T, ConsumeToken>)
                return {{"type", "consumeToken"}, {"element", ev.element}, {"count", ev.count}};
            else if constexpr (std::is_same_v<T, ProduceToken>)
                return {{"type", "produceToken"}, {"element", ev.element}, {"count", ev.count}};
            else if constexpr (std::is_same_v<T, ConsumeMessage>)
                return {{"type", "consumeMessage"}, {"messageFlow", ev.message_flow}};
            else if constexpr (std::is_same_v<T, SetTerminated>)
                return {{"type", "setTerminated"}};
            else if constexpr (std::is_same_v<T, DeleteAllTokens>)
                return {{"type", "deleteAllTokens"}};
            else if constexpr (std::is_same_v<T, TerminateSubtree>)
                return {{"type", "terminateSubtree"}};
            else if constexpr (std::is_same_v<T, DeleteTerminatedChild>)
                return {{"type", "deleteTerminatedChild"}, {"spawnedBy", ev.spawned_by}};
            else if constexpr (std::is_same_v<T, SpawnChild>)
                return {{"type", "spawnChild"},
                        {"process", ev.process},
                        {"spawnedBy", ev.spawned_by},
                        {"tokens", ev.initial_tokens}};
            else if constexpr (std::is_same_v<T, SpawnTopLevel>) {
                json j = {{"type", "spawnTopLevel"},
                          {"process", ev.process},
                          {"tokens", ev.initial_tokens}};
                if (ev.incoming_message) j["incomingMessage"] = *ev.incoming_message;
                return j;
            }
        },
        e);
}

}  // namespace

std::string rules_to_json(const std::vector<Rule>& rules) {
    json out;
    out["rules"] = json::array();
    for (const auto& r : rules) {
        json j;
        j["name"] = r.name;
        j["sourceNode"] = r.source_node;
        j["process"] = r.focal_process;
        j["guards"] = json::array();
        for (const auto& g : r.guards) j["guards"].push_back(guard_json(g));
        j["effects"] = json::array();
        for (const auto& e : r.effects) j["effects"].push_back(effect_json(e));
        j["optionalSends"] = json::array();
        for (const auto& s : r.optional_sends)
            j["optionalSends"].push_back({{"messageFlow", s.message_flow},
                                          {"eligibility", s.eligibility_tokens},
                                          {"targetProcess", s.target_process}});
        j["universal"] = json::array();
        for (const auto& b : r.universal_blocks) {
            if (const auto* c = std::get_if<SignalCatch>(&b))
                j["universal"].push_back({{"type", "signalCatch"},
                                          {"incoming", c->catch_incoming},
                                          {"outgoing", c->catch_outgoing}});
            else if (const auto* s = std::get_if<SignalSpawn>(&b))
                j["universal"].push_back({{"type", "signalSpawn"},
                                          {"process", s->process},
                                          {"outgoing", s->sse_outgoing}});
        }
        out["rules"].push_back(std::move(j));
    }
    return out.dump(2);
}

}  // namespace bpmncheck
