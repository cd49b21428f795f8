#include "bpmncheck/properties.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include <nlohmann/json.hpp>

namespace bpmncheck {

namespace {

void flatten(const std::vector<ProcessSnapshot>& snaps, std::vector<const ProcessSnapshot*>& out) {
    for (const auto& s : snaps) {
        out.push_back(&s);
        flatten(s.children, out);
    }
}

int count_of(const Counts& counts, const std::string& id) {
    auto it = counts.find(id);
    return it == counts.end() ? 0 : it->second;
}

bool pattern_matches(const SnapshotPattern& pattern, const ProcessSnapshot& snap) {
    if (snap.process != pattern.process) return false;
    if (pattern.lifecycle && snap.lifecycle != *pattern.lifecycle) return false;
    for (const auto& [id, min] : pattern.required_tokens)
        if (count_of(snap.tokens, id) < min) return false;
    for (const auto& id : pattern.forbidden_tokens)
        if (count_of(snap.tokens, id) != 0) return false;
    for (const auto& [id, min] : pattern.required_messages)
        if (count_of(snap.messages, id) < min) return false;
    return true;
}

bool assign(const std::vector<SnapshotPattern>& patterns, std::size_t idx,
            const std::vector<const ProcessSnapshot*>& snaps, std::vector<bool>& used) {
    if (idx == patterns.size()) return true;
    for (std::size_t i = 0; i < snaps.size(); ++i) {
        if (used[i] || !pattern_matches(patterns[idx], *snaps[i])) continue;
        used[i] = true;
        if (assign(patterns, idx + 1, snaps, used)) return true;
        used[i] = false;
    }
    return false;
}

}  // namespace

bool match_proposition(const Proposition& prop, const ExecutionState& state) {
    std::vector<const ProcessSnapshot*> snaps;
    flatten(state.snapshots, snaps);
    std::vector<bool> used(snaps.size(), false);
    return assign(prop.patterns, 0, snaps, used);
}

std::vector<Proposition> builtin_propositions(const BpmnModel& model) {
    std::vector<Proposition> props;
    for (const auto& proc : model.processes) {
        for (const auto& flow : proc.sequence_flows) {
            Proposition p;
            p.name = kUnsafeName;
            SnapshotPattern pattern;
            pattern.process = proc.id;
            pattern.required_tokens[flow.id] = 2;
            p.patterns.push_back(std::move(pattern));
            props.push_back(std::move(p));
        }
    }
    return props;
}

void check_propositions_resolve(const std::vector<Proposition>& props, const BpmnModel& model) {
    for (const auto& prop : props) {
        for (const auto& pattern : prop.patterns) {
            if (!model.find_process(pattern.process))
                throw DanglingReferenceError(pattern.process);
            for (const auto& [id, min] : pattern.required_tokens) {
                if (!model.find_node(id) && !model.find_flow(id)) throw DanglingReferenceError(id);
                if (pattern.forbidden_tokens.count(id))
                    throw std::runtime_error("proposition '" + prop.name + "': token '" + id +
                                             "' is both required and forbidden");
                if (min < 1)
                    throw std::runtime_error("proposition '" + prop.name + "': token '" + id +
                                             "' has a count below 1");
            }
            for (const auto& id : pattern.forbidden_tokens)
                if (!model.find_node(id) && !model.find_flow(id)) throw DanglingReferenceError(id);
            for (const auto& [id, min] : pattern.required_messages)
                if (!model.find_message_flow(id)) throw DanglingReferenceError(id);
        }
    }
}

std::vector<Proposition> load_propositions_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    std::vector<Proposition> props;
    for (const auto& jp : j.at("propositions")) {
        Proposition p;
        p.name = jp.at("name").get<std::string>();
        for (const auto& jpat : jp.at("patterns")) {
            SnapshotPattern pattern;
            pattern.process = jpat.at("process").get<std::string>();
            if (jpat.contains("lifecycle") && !jpat["lifecycle"].is_null()) {
                std::string lc = jpat["lifecycle"].get<std::string>();
                if (lc == "Running")
                    pattern.lifecycle = Lifecycle::Running;
                else if (lc == "Terminated")
                    pattern.lifecycle = Lifecycle::Terminated;
                else
                    throw std::runtime_error("unknown lifecycle '" + lc + "' in propositions file");
            }
            if (jpat.contains("tokens"))
                for (const auto& [id, n] : jpat["tokens"].items())
                    pattern.required_tokens[id] = n.get<int>();
            if (jpat.contains("noTokens"))
                for (const auto& id : jpat["noTokens"])
                    pattern.forbidden_tokens.insert(id.get<std::string>());
            if (jpat.contains("messages"))
                for (const auto& [id, n] : jpat["messages"].items())
                    pattern.required_messages[id] = n.get<int>();
            p.patterns.push_back(std::move(pattern));
        }
        props.push_back(std::move(p));
    }
    return props;
}

std::vector<Proposition> extension_propositions(const BpmnModel& model) {
    std::vector<Proposition> props;
    for (const auto& snap : model.extension_snapshots) {
        Proposition p;
        p.name = snap.name;
        SnapshotPattern pattern;
        pattern.process = snap.process_id;
        for (const auto& tok : snap.tokens) {
            if (tok.should_exist)
                pattern.required_tokens[tok.element_id] += 1;
            else
                pattern.forbidden_tokens.insert(tok.element_id);
        }
        p.patterns.push_back(std::move(pattern));
        props.push_back(std::move(p));
    }
    return props;
}

Labeling compute_labeling(const Lts& lts, const std::vector<Proposition>& props) {
    Labeling labeling;
    labeling.by_state.resize(lts.states.size());
    labeling.names.insert(kAllTerminatedName);
    for (const auto& p : props) labeling.names.insert(p.name);
    for (std::size_t i = 0; i < lts.states.size(); ++i) {
        if (is_all_terminated(lts.states[i])) labeling.by_state[i].insert(kAllTerminatedName);
        for (const auto& p : props) {
            if (labeling.by_state[i].count(p.name)) continue;
            if (match_proposition(p, lts.states[i])) labeling.by_state[i].insert(p.name);
        }
    }
    return labeling;
}

namespace {

struct Adjacency {
    // Per state: outgoing (rule, target) pairs in transition order.
    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> out;

    explicit Adjacency(const Lts& lts) : out(lts.states.size()) {
        for (const auto& t : lts.transitions) out[t.source].push_back({t.rule, t.target});
    }
};

struct BfsPath {
    std::vector<std::string> labels;
    std::uint32_t final_state = 0;
};

// Shortest rule path from `from` to any state satisfying `goal`.
std::optional<BfsPath> shortest_path(const Lts& lts, const Adjacency& adj, std::uint32_t from,
                                     const std::vector<bool>& goal) {
    if (lts.states.empty()) return std::nullopt;
    std::vector<std::int64_t> prev_state(lts.states.size(), -1);
    std::vector<std::uint32_t> prev_rule(lts.states.size(), 0);
    std::vector<bool> seen(lts.states.size(), false);
    std::deque<std::uint32_t> queue{from};
    seen[from] = true;
    while (!queue.empty()) {
        std::uint32_t cur = queue.front();
        queue.pop_front();
        if (goal[cur]) {
            BfsPath result;
            result.final_state = cur;
            for (std::uint32_t s = cur; s != from; s = static_cast<std::uint32_t>(prev_state[s]))
                result.labels.push_back(lts.rule_names[prev_rule[s]]);
            std::reverse(result.labels.begin(), result.labels.end());
            return result;
        }
        for (const auto& [rule, tgt] : adj.out[cur]) {
            if (seen[tgt]) continue;
            seen[tgt] = true;
            prev_state[tgt] = cur;
            prev_rule[tgt] = rule;
            queue.push_back(tgt);
        }
    }
    return std::nullopt;
}

bool snapshot_unsafe(const ProcessSnapshot& snap, const std::set<std::string>& flow_ids) {
    for (const auto& [id, count] : snap.tokens)
        if (count >= 2 && flow_ids.count(id)) return true;
    for (const auto& c : snap.children)
        if (snapshot_unsafe(c, flow_ids)) return true;
    return false;
}

}  // namespace

Verdict check_safeness(const Lts& lts, const BpmnModel& model) {
    Verdict v;
    v.name = "Safeness";
    v.inconclusive = lts.stats.truncated;

    std::set<std::string> flow_ids;
    for (const auto& p : model.processes)
        for (const auto& f : p.sequence_flows) flow_ids.insert(f.id);

    std::vector<bool> violating(lts.states.size(), false);
    bool any = false;
    for (std::size_t i = 0; i < lts.states.size(); ++i) {
        for (const auto& snap : lts.states[i].snapshots) {
            if (snapshot_unsafe(snap, flow_ids)) {
                violating[i] = true;
                any = true;
                break;
            }
        }
    }
    if (!any) return v;

    v.holds = false;
    Adjacency adj(lts);
    if (auto path = shortest_path(lts, adj, 0, violating)) v.witness = std::move(path->labels);
    return v;
}

Verdict check_option_to_complete(const Lts& lts) {
    Verdict v;
    v.name = "OptionToComplete";
    v.inconclusive = lts.stats.truncated;

    const std::size_t n = lts.states.size();
    std::vector<bool> all_terminated(n, false);
    for (std::size_t i = 0; i < n; ++i) all_terminated[i] = is_all_terminated(lts.states[i]);

    Adjacency adj(lts);
    // EG(!AllTerminated) greatest fixpoint on the totalized graph; the
    // property fails exactly when the initial state is in it.
    std::vector<bool> in_set(n);
    for (std::size_t i = 0; i < n; ++i) in_set[i] = !all_terminated[i];
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            if (!in_set[i]) continue;
            bool has_successor_in_set = false;
            if (adj.out[i].empty()) {
                has_successor_in_set = true;  // implicit self-loop
            } else {
                for (const auto& [rule, tgt] : adj.out[i])
                    if (in_set[tgt]) has_successor_in_set = true;
            }
            if (!has_successor_in_set) {
                in_set[i] = false;
                changed = true;
            }
        }
    }
    if (n == 0 || !in_set[0]) return v;

    v.holds = false;
    // Witness lasso: walk inside the EG set until a state repeats.
    std::vector<std::int64_t> visited_at(n, -1);
    std::uint32_t cur = 0;
    while (visited_at[cur] < 0) {
        visited_at[cur] = static_cast<std::int64_t>(v.witness.size());
        if (adj.out[cur].empty()) {
            v.witness_note = "ends in a deadlock state that is not fully terminated";
            return v;
        }
        for (const auto& [rule, tgt] : adj.out[cur]) {
            if (in_set[tgt]) {
                v.witness.push_back(lts.rule_names[rule]);
                cur = tgt;
                break;
            }
        }
    }
    v.witness_note = "lasso: loops back to step " + std::to_string(visited_at[cur] + 1);
    return v;
}

Verdict check_proper_completion(const Lts& lts, const RuleSet& ruleset) {
    Verdict v;
    v.name = "ProperCompletion";
    v.inconclusive = lts.stats.truncated;
    if (!ruleset.model) return v;

    // Group the rules of each end-event node; firing any of them counts as
    // an execution of that end event.
    std::map<std::string, std::set<std::uint32_t>> end_event_rules;
    for (std::uint32_t r = 0; r < ruleset.rules.size(); ++r) {
        const auto& rule = ruleset.rules[r];
        if (rule.source_node.empty()) continue;
        const FlowNode* node = ruleset.model->find_node(rule.source_node);
        if (node && is_end_event(node->kind)) end_event_rules[rule.source_node].insert(r);
    }

    Adjacency adj(lts);
    std::vector<std::vector<std::uint32_t>> rev(lts.states.size());
    for (const auto& t : lts.transitions) rev[t.target].push_back(t.source);

    for (const auto& [node_id, rule_set] : end_event_rules) {
        std::vector<bool> is_source(lts.states.size(), false);
        for (const auto& t : lts.transitions)
            if (rule_set.count(t.rule)) is_source[t.source] = true;

        // States that can still reach a firing of this end event.
        std::vector<bool> can_fire_again(lts.states.size(), false);
        std::deque<std::uint32_t> rq;
        for (std::uint32_t s = 0; s < lts.states.size(); ++s)
            if (is_source[s]) {
                can_fire_again[s] = true;
                rq.push_back(s);
            }
        while (!rq.empty()) {
            std::uint32_t cur = rq.front();
            rq.pop_front();
            for (auto p : rev[cur])
                if (!can_fire_again[p]) {
                    can_fire_again[p] = true;
                    rq.push_back(p);
                }
        }

        // A violation is a firing whose target can fire the end event again.
        std::vector<bool> double_fire_source(lts.states.size(), false);
        bool violated = false;
        for (const auto& t : lts.transitions) {
            if (rule_set.count(t.rule) && can_fire_again[t.target]) {
                double_fire_source[t.source] = true;
                violated = true;
            }
        }
        if (!violated) continue;

        v.holds = false;
        v.witness_note = "end event '" + node_id + "' fires twice on one path";

        auto stem = shortest_path(lts, adj, 0, double_fire_source);
        if (!stem) return v;
        v.witness = std::move(stem->labels);
        // First firing out of the reached state.
        std::uint32_t t1 = 0;
        for (const auto& [rule, tgt] : adj.out[stem->final_state]) {
            if (rule_set.count(rule) && can_fire_again[tgt]) {
                v.witness.push_back(lts.rule_names[rule]);
                t1 = tgt;
                break;
            }
        }
        // Walk to the second firing and take it.
        if (auto tail = shortest_path(lts, adj, t1, is_source)) {
            for (auto& step : tail->labels) v.witness.push_back(std::move(step));
            for (const auto& [rule, tgt] : adj.out[tail->final_state]) {
                if (rule_set.count(rule)) {
                    v.witness.push_back(lts.rule_names[rule]);
                    break;
                }
            }
        }
        return v;
    }
    return v;
}

Verdict check_no_dead_activities(const Lts& lts, const RuleSet& ruleset) {
    Verdict v;
    v.name = "NoDeadActivities";
    v.inconclusive = lts.stats.truncated;
    if (!ruleset.model) return v;

    std::set<std::uint32_t> fired;
    for (const auto& t : lts.transitions) fired.insert(t.rule);

    std::map<std::string, bool> activity_started;  // id -> some start rule fired
    for (const auto& proc : ruleset.model->processes)
        for (const auto& node : proc.flow_nodes)
            if (is_activity(node.kind)) activity_started[node.id] = false;

    for (std::uint32_t r = 0; r < ruleset.rules.size(); ++r) {
        const auto& rule = ruleset.rules[r];
        if (rule.role != RuleRole::ActivityStart) continue;
        if (fired.count(r)) activity_started[rule.source_node] = true;
    }

    for (const auto& [id, started] : activity_started) {
        if (!started) {
            v.holds = false;
            v.dead_activities.push_back(id);
        }
    }
    return v;
}

}  // namespace bpmncheck
