#include "bpmncheck/groove.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "xml_writer.hpp"

namespace bpmncheck {

namespace {

std::string groove_string_literal(const std::string& s) {
    std::string out = "string:\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    out += '"';
    return out;
}

// Builds one GXL graph; nodes and labeled edges are emitted in creation
// order, so equal input produces byte-identical output.
class GxlGraph {
public:
    GxlGraph(std::string role, std::string id) : role_(std::move(role)), id_(std::move(id)) {}

    std::string node() {
        std::string id = "n" + std::to_string(next_node_++);
        nodes_.push_back(id);
        return id;
    }

    // Node carrying a self-edge label (type:, flag:, quantifier or value).
    std::string labeled_node(const std::string& label) {
        std::string id = node();
        edge(id, id, label);
        return id;
    }

    void edge(const std::string& from, const std::string& to, const std::string& label) {
        edges_.push_back({from, to, label});
    }

    // Value node for a string literal, shared within the graph.
    std::string value_node(const std::string& text) {
        auto it = values_.find(text);
        if (it != values_.end()) return it->second;
        std::string id = labeled_node(groove_string_literal(text));
        values_.emplace(text, id);
        return id;
    }

    std::string str() const {
        detail::XmlWriter w;
        w.open("gxl").attr("xmlns", "http://www.gupro.de/GXL/gxl-1.0.dtd");
        w.open("graph")
            .attr("role", role_)
            .attr("edgeids", "false")
            .attr("edgemode", "directed")
            .attr("id", id_);
        for (const auto& n : nodes_) w.open("node").attr("id", n).close();
        for (const auto& e : edges_) {
            w.open("edge").attr("from", e.from).attr("to", e.to);
            w.open("attr").attr("name", "label");
            w.text_element("string", e.label);
            w.close();
            w.close();
        }
        w.close();
        w.close();
        return w.str();
    }

private:
    struct Edge {
        std::string from, to, label;
    };
    std::string role_, id_;
    int next_node_ = 0;
    std::vector<std::string> nodes_;
    std::vector<Edge> edges_;
    std::map<std::string, std::string> values_;
};

void emit_snapshot(GxlGraph& g, const ProcessSnapshot& snap, const std::string& parent) {
    std::string node = g.labeled_node("type:ProcessSnapshot");
    g.edge(node, g.value_node(snap.process), "processID");
    g.edge(node,
           g.value_node(snap.lifecycle == Lifecycle::Running ? "Running" : "Terminated"),
           "state");
    if (!parent.empty()) g.edge(parent, node, "subprocess");
    for (const auto& [element, count] : snap.tokens) {
        for (int i = 0; i < count; ++i) {
            std::string token = g.labeled_node("type:Token");
            g.edge(node, token, "tokens");
            g.edge(token, g.value_node(element), "elementID");
        }
    }
    for (const auto& [flow, count] : snap.messages) {
        for (int i = 0; i < count; ++i) {
            std::string message = g.labeled_node("type:Message");
            g.edge(node, message, "messages");
            g.edge(message, g.value_node(flow), "elementID");
        }
    }
    for (const auto& child : snap.children) emit_snapshot(g, child, node);
}

}  // namespace

std::string start_graph_gxl(const ExecutionState& state) {
    GxlGraph g("graph", "start");
    ExecutionState canon = normalize(state);
    for (const auto& snap : canon.snapshots) emit_snapshot(g, snap, "");
    return g.str();
}

namespace {

int count_consumed(const Rule& rule, const std::string& element) {
    int n = 0;
    for (const auto& e : rule.effects)
        if (const auto* c = std::get_if<ConsumeToken>(&e))
            if (c->element == element) n += c->count;
    return n;
}

bool sets_terminated(const Rule& rule) {
    for (const auto& e : rule.effects)
        if (std::holds_alternative<SetTerminated>(e)) return true;
    return false;
}

}  // namespace

std::string rule_gxl(const Rule& rule) {
    GxlGraph g("rule", rule.name);

    std::string focal = g.labeled_node("type:ProcessSnapshot");
    if (!rule.focal_process.empty())
        g.edge(focal, g.value_node(rule.focal_process), "processID");

    // Lifecycle handling: a terminating rule rewrites the state attribute,
    // a running guard alone reads it.
    bool terminated = sets_terminated(rule);
    bool running_guard = false;
    for (const auto& gd : rule.guards)
        if (std::holds_alternative<SnapshotRunning>(gd)) running_guard = true;
    if (terminated) {
        g.edge(focal, g.value_node("Running"), "del:state");
        g.edge(focal, g.value_node("Terminated"), "new:state");
    } else if (running_guard) {
        g.edge(focal, g.value_node("Running"), "state");
    }

    // Token guards: erased tokens come from the consume effects; guards
    // demanding more than is consumed add plain readers.
    for (const auto& gd : rule.guards) {
        if (const auto* t = std::get_if<TokenAt>(&gd)) {
            int erased = count_consumed(rule, t->element);
            for (int i = 0; i < erased; ++i) {
                std::string token = g.labeled_node("del:type:Token");
                g.edge(focal, token, "del:tokens");
                g.edge(token, g.value_node(t->element), "del:elementID");
            }
            for (int i = erased; i < t->min_count; ++i) {
                std::string token = g.labeled_node("type:Token");
                g.edge(focal, token, "tokens");
                g.edge(token, g.value_node(t->element), "elementID");
            }
        } else if (const auto* nt = std::get_if<NoTokenAt>(&gd)) {
            std::string token = g.labeled_node("not:type:Token");
            g.edge(focal, token, "not:tokens");
            g.edge(token, g.value_node(nt->element), "not:elementID");
        } else if (std::holds_alternative<NoTokensAtAll>(gd)) {
            std::string token = g.labeled_node("not:type:Token");
            g.edge(focal, token, "not:tokens");
        } else if (std::holds_alternative<NoChildren>(gd)) {
            std::string child = g.labeled_node("not:type:ProcessSnapshot");
            g.edge(focal, child, "not:subprocess");
        } else if (const auto* m = std::get_if<MessageAt>(&gd)) {
            std::string message = g.labeled_node("del:type:Message");
            g.edge(focal, message, "del:messages");
            g.edge(message, g.value_node(m->message_flow), "del:elementID");
        } else if (std::holds_alternative<ChildTerminated>(gd)) {
            std::string child = g.labeled_node("del:type:ProcessSnapshot");
            g.edge(focal, child, "del:subprocess");
            g.edge(child, g.value_node("Terminated"), "del:state");
        }
    }

    for (const auto& e : rule.effects) {
        if (const auto* p = std::get_if<ProduceToken>(&e)) {
            for (int i = 0; i < p->count; ++i) {
                std::string token = g.labeled_node("new:type:Token");
                g.edge(focal, token, "new:tokens");
                g.edge(token, g.value_node(p->element), "new:elementID");
            }
        } else if (std::holds_alternative<DeleteAllTokens>(e)) {
            std::string quant = g.labeled_node("forall:");
            std::string token = g.labeled_node("del:type:Token");
            g.edge(focal, token, "del:tokens");
            g.edge(token, quant, "@");
        } else if (std::holds_alternative<TerminateSubtree>(e)) {
            std::string quant = g.labeled_node("forall:");
            std::string child = g.labeled_node("del:type:ProcessSnapshot");
            g.edge(focal, child, "del:subprocess");
            g.edge(child, quant, "@");
        } else if (const auto* sc = std::get_if<SpawnChild>(&e)) {
            std::string child = g.labeled_node("new:type:ProcessSnapshot");
            g.edge(focal, child, "new:subprocess");
            g.edge(child, g.value_node(sc->process), "new:processID");
            g.edge(child, g.value_node("Running"), "new:state");
            for (const auto& [element, count] : sc->initial_tokens) {
                for (int i = 0; i < count; ++i) {
                    std::string token = g.labeled_node("new:type:Token");
                    g.edge(child, token, "new:tokens");
                    g.edge(token, g.value_node(element), "new:elementID");
                }
            }
        } else if (const auto* st = std::get_if<SpawnTopLevel>(&e)) {
            std::string snap = g.labeled_node("new:type:ProcessSnapshot");
            g.edge(snap, g.value_node(st->process), "new:processID");
            g.edge(snap, g.value_node("Running"), "new:state");
            for (const auto& [element, count] : st->initial_tokens) {
                for (int i = 0; i < count; ++i) {
                    std::string token = g.labeled_node("new:type:Token");
                    g.edge(snap, token, "new:tokens");
                    g.edge(token, g.value_node(element), "new:elementID");
                }
            }
        }
        // ConsumeToken / ConsumeMessage / SetTerminated are handled with
        // their guards above; DeleteTerminatedChild with ChildTerminated.
    }

    // One optional-existential block per (message flow, eligibility flow).
    for (const auto& send : rule.optional_sends) {
        for (const auto& sf : send.eligibility_tokens) {
            std::string quant = g.labeled_node("existsx:");
            std::string recipient = g.labeled_node("type:ProcessSnapshot");
            g.edge(recipient, quant, "@");
            g.edge(recipient, g.value_node(send.target_process), "processID");
            g.edge(recipient, g.value_node("Running"), "state");
            std::string token = g.labeled_node("type:Token");
            g.edge(recipient, token, "tokens");
            g.edge(token, g.value_node(sf), "elementID");
            g.edge(token, quant, "@");
            std::string message = g.labeled_node("new:type:Message");
            g.edge(recipient, message, "new:messages");
            g.edge(message, g.value_node(send.message_flow), "new:elementID");
            g.edge(message, quant, "@");
        }
    }

    for (const auto& block : rule.universal_blocks) {
        if (const auto* c = std::get_if<SignalCatch>(&block)) {
            std::string quant = g.labeled_node("forall:");
            std::string recipient = g.labeled_node("type:ProcessSnapshot");
            g.edge(recipient, quant, "@");
            std::string token = g.labeled_node("del:type:Token");
            g.edge(recipient, token, "del:tokens");
            g.edge(token, g.value_node(c->catch_incoming), "del:elementID");
            g.edge(token, quant, "@");
            for (const auto& out : c->catch_outgoing) {
                std::string produced = g.labeled_node("new:type:Token");
                g.edge(recipient, produced, "new:tokens");
                g.edge(produced, g.value_node(out), "new:elementID");
                g.edge(produced, quant, "@");
            }
        } else if (const auto* s = std::get_if<SignalSpawn>(&block)) {
            std::string snap = g.labeled_node("new:type:ProcessSnapshot");
            g.edge(snap, g.value_node(s->process), "new:processID");
            g.edge(snap, g.value_node("Running"), "new:state");
            for (const auto& sf : s->sse_outgoing) {
                std::string token = g.labeled_node("new:type:Token");
                g.edge(snap, token, "new:tokens");
                g.edge(token, g.value_node(sf), "new:elementID");
            }
        }
    }

    return g.str();
}

namespace {

namespace pt = boost::property_tree;

std::string parse_groove_string(const std::string& label) {
    // string:"..." with backslash escapes.
    std::string out;
    std::size_t i = label.find('"');
    if (i == std::string::npos) return out;
    for (++i; i < label.size() && label[i] != '"'; ++i) {
        if (label[i] == '\\' && i + 1 < label.size()) ++i;
        out += label[i];
    }
    return out;
}

}  // namespace

ExecutionState import_start_graph(const std::string& gxl_text) {
    pt::ptree doc;
    std::istringstream in(gxl_text);
    try {
        pt::read_xml(in, doc, pt::xml_parser::no_comments);
    } catch (const pt::xml_parser_error& e) {
        throw XmlMalformedError(std::string("not well-formed GXL: ") + e.what());
    }

    struct EdgeRec {
        std::string from, to, label;
    };
    std::vector<EdgeRec> edges;
    std::map<std::string, std::string> self_label;  // node id -> self-edge label

    const auto& graph = doc.get_child("gxl.graph");
    for (const auto& [tag, child] : graph) {
        if (tag != "edge") continue;
        EdgeRec e;
        e.from = child.get<std::string>("<xmlattr>.from");
        e.to = child.get<std::string>("<xmlattr>.to");
        e.label = child.get<std::string>("attr.string");
        if (e.from == e.to)
            self_label[e.from] = e.label;
        else
            edges.push_back(std::move(e));
    }

    std::map<std::string, ProcessSnapshot> snapshots;
    std::map<std::string, std::string> values;
    for (const auto& [node, label] : self_label) {
        if (label == "type:ProcessSnapshot")
            snapshots[node] = ProcessSnapshot{};
        else if (label.rfind("string:", 0) == 0)
            values[node] = parse_groove_string(label);
    }

    // Token/Message nodes: owner and element id arrive on separate edges.
    std::map<std::string, std::string> element_of;  // token/message node -> element id
    for (const auto& e : edges)
        if (e.label == "elementID") element_of[e.from] = values[e.to];

    std::map<std::string, std::string> child_of;  // snapshot -> parent snapshot
    for (const auto& e : edges) {
        if (e.label == "processID") {
            snapshots[e.from].process = values[e.to];
        } else if (e.label == "state") {
            snapshots[e.from].lifecycle =
                values[e.to] == "Terminated" ? Lifecycle::Terminated : Lifecycle::Running;
        } else if (e.label == "tokens") {
            snapshots[e.from].tokens[element_of[e.to]] += 1;
        } else if (e.label == "messages") {
            snapshots[e.from].messages[element_of[e.to]] += 1;
        } else if (e.label == "subprocess") {
            child_of[e.to] = e.from;
        }
    }

    // Attach children bottom-up. Node ids are creation-ordered ("n<k>") and
    // children are always created after their parent, so walking ids in
    // descending numeric order completes every child before its parent
    // consumes it.
    ExecutionState state;
    std::vector<std::string> order;
    for (const auto& [id, snap] : snapshots) order.push_back(id);
    auto numeric = [](const std::string& id) {
        return std::stol(id.substr(1));
    };
    std::sort(order.begin(), order.end(), [&](const std::string& a, const std::string& b) {
        return numeric(a) > numeric(b);
    });
    for (const auto& id : order) {
        auto parent = child_of.find(id);
        if (parent == child_of.end()) continue;
        snapshots[parent->second].children.push_back(snapshots[id]);
    }
    for (const auto& [id, snap] : snapshots)
        if (!child_of.count(id)) state.snapshots.push_back(snap);
    return normalize(state);
}

GrammarDir export_gps(const RuleSet& ruleset, const std::string& out_dir) {
    namespace fs = std::filesystem;
    std::string path = out_dir;
    if (path.size() < 4 || path.substr(path.size() - 4) != ".gps") path += ".gps";

    std::error_code ec;
    fs::create_directories(path, ec);
    if (ec) throw IoError("cannot create directory '" + path + "': " + ec.message());

    GrammarDir dir;
    dir.path = path;

    auto write_file = [&](const std::string& name, const std::string& content) {
        std::ofstream out(fs::path(path) / name, std::ios::binary);
        if (!out) throw IoError("cannot write '" + name + "' in '" + path + "'");
        out << content;
        dir.files.push_back(name);
    };

    write_file("start.gst", start_graph_gxl(ruleset.start_state));

    // Rule names become file names; unsafe characters are replaced and
    // collisions disambiguated deterministically.
    std::map<std::string, int> used;
    for (const auto& rule : ruleset.rules) {
        std::string base;
        for (char c : rule.name)
            base += (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
                     c == '.')
                        ? c
                        : '_';
        int& n = used[base];
        ++n;
        if (n > 1) base += "__" + std::to_string(n);
        write_file(base + ".gpr", rule_gxl(rule));
    }

    write_file("system.properties",
               "grooveVersion=6.1.0\ngrammarVersion=3.7\nstartGraph=start\n");
    return dir;
}

}  // namespace bpmncheck
