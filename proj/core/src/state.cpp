#include "bpmncheck/state.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

namespace bpmncheck {

namespace {

// Length-prefixed fields keep the serialization injective for arbitrary ids.
void put(std::string& out, const std::string& s) {
    out += std::to_string(s.size());
    out += ':';
    out += s;
}

void put_counts(std::string& out, const Counts& counts) {
    out += '{';
    for (const auto& [id, count] : counts) {
        put(out, id);
        out += '*';
        out += std::to_string(count);
        out += ';';
    }
    out += '}';
}

std::string serialize_snapshot(const ProcessSnapshot& snap) {
    std::string out;
    out += 'P';
    put(out, snap.process);
    out += 'B';
    put(out, snap.spawned_by);
    out += snap.lifecycle == Lifecycle::Running ? 'R' : 'T';
    out += 'T';
    put_counts(out, snap.tokens);
    out += 'M';
    put_counts(out, snap.messages);
    std::vector<std::string> children;
    children.reserve(snap.children.size());
    for (const auto& c : snap.children) children.push_back(serialize_snapshot(c));
    std::sort(children.begin(), children.end());
    out += 'C';
    out += '[';
    for (const auto& c : children) put(out, c);
    out += ']';
    return out;
}

}  // namespace

CanonicalKey canonical_key(const ExecutionState& state) {
    std::vector<std::string> parts;
    parts.reserve(state.snapshots.size());
    for (const auto& s : state.snapshots) parts.push_back(serialize_snapshot(s));
    std::sort(parts.begin(), parts.end());
    std::string out;
    for (const auto& p : parts) put(out, p);
    return CanonicalKey{std::move(out)};
}

namespace {

ProcessSnapshot normalize_snapshot(const ProcessSnapshot& snap) {
    ProcessSnapshot out = snap;
    for (auto& c : out.children) c = normalize_snapshot(c);
    std::sort(out.children.begin(), out.children.end(),
              [](const ProcessSnapshot& a, const ProcessSnapshot& b) {
                  return serialize_snapshot(a) < serialize_snapshot(b);
              });
    return out;
}

}  // namespace

ExecutionState normalize(const ExecutionState& state) {
    ExecutionState out;
    out.snapshots.reserve(state.snapshots.size());
    for (const auto& s : state.snapshots) out.snapshots.push_back(normalize_snapshot(s));
    std::sort(out.snapshots.begin(), out.snapshots.end(),
              [](const ProcessSnapshot& a, const ProcessSnapshot& b) {
                  return serialize_snapshot(a) < serialize_snapshot(b);
              });
    return out;
}

namespace {

bool any_running(const ProcessSnapshot& snap) {
    if (snap.lifecycle == Lifecycle::Running) return true;
    for (const auto& c : snap.children)
        if (any_running(c)) return true;
    return false;
}

bool terminated_empty(const ProcessSnapshot& snap) {
    if (snap.lifecycle == Lifecycle::Terminated && (!snap.tokens.empty() || !snap.children.empty()))
        return false;
    for (const auto& c : snap.children)
        if (!terminated_empty(c)) return false;
    return true;
}

}  // namespace

bool is_all_terminated(const ExecutionState& state) {
    for (const auto& s : state.snapshots)
        if (any_running(s)) return false;
    return true;
}

bool terminated_snapshots_are_empty(const ExecutionState& state) {
    for (const auto& s : state.snapshots)
        if (!terminated_empty(s)) return false;
    return true;
}

namespace {

using nlohmann::json;

json snapshot_to_json(const ProcessSnapshot& snap) {
    json j;
    j["process"] = snap.process;
    j["spawnedBy"] = snap.spawned_by.empty() ? json(nullptr) : json(snap.spawned_by);
    j["lifecycle"] = snap.lifecycle == Lifecycle::Running ? "Running" : "Terminated";
    j["tokens"] = json::object();
    for (const auto& [id, count] : snap.tokens) j["tokens"][id] = count;
    j["messages"] = json::object();
    for (const auto& [id, count] : snap.messages) j["messages"][id] = count;
    j["children"] = json::array();
    for (const auto& c : snap.children) j["children"].push_back(snapshot_to_json(c));
    return j;
}

ProcessSnapshot snapshot_from_json(const json& j) {
    ProcessSnapshot snap;
    snap.process = j.at("process").get<std::string>();
    if (j.contains("spawnedBy") && !j["spawnedBy"].is_null())
        snap.spawned_by = j["spawnedBy"].get<std::string>();
    snap.lifecycle = j.at("lifecycle").get<std::string>() == "Terminated" ? Lifecycle::Terminated
                                                                          : Lifecycle::Running;
    if (j.contains("tokens"))
        for (const auto& [id, count] : j["tokens"].items()) snap.tokens[id] = count.get<int>();
    if (j.contains("messages"))
        for (const auto& [id, count] : j["messages"].items()) snap.messages[id] = count.get<int>();
    if (j.contains("children"))
        for (const auto& c : j["children"]) snap.children.push_back(snapshot_from_json(c));
    return snap;
}

}  // namespace

std::string state_to_json(const ExecutionState& state) {
    json j;
    j["snapshots"] = json::array();
    for (const auto& s : state.snapshots) j["snapshots"].push_back(snapshot_to_json(s));
    return j.dump(2);
}

ExecutionState state_from_json(const std::string& text) {
    json j = json::parse(text);
    ExecutionState state;
    for (const auto& s : j.at("snapshots")) state.snapshots.push_back(snapshot_from_json(s));
    return state;
}

}  // namespace bpmncheck
