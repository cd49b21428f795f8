#include "bpmncheck/bpmn_xml.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "xml_writer.hpp"

namespace bpmncheck {

namespace {

namespace pt = boost::property_tree;

std::string local_name(const std::string& tag) {
    auto pos = tag.rfind(':');
    return pos == std::string::npos ? tag : tag.substr(pos + 1);
}

std::string get_attr(const pt::ptree& node, const std::string& name) {
    if (auto attrs = node.get_child_optional("<xmlattr>")) {
        if (auto v = attrs->get_optional<std::string>(name)) return *v;
    }
    return {};
}

std::string require_id(const pt::ptree& node, const std::string& tag) {
    std::string id = get_attr(node, "id");
    if (id.empty()) throw XmlMalformedError("<" + tag + "> element without id attribute");
    return id;
}

// Child tags that carry no execution semantics and are safe to skip.
bool is_ignorable(const std::string& name) {
    static const std::set<std::string> ignorable = {
        "documentation", "extensionElements", "laneSet", "textAnnotation",
        "association",   "group",             "auditing", "monitoring",
        "incoming",      "outgoing",          "<xmlattr>", "<xmlcomment>",
    };
    return ignorable.count(name) > 0;
}

struct EventDefs {
    int message = 0, link = 0, signal = 0, terminate = 0;
    std::vector<std::string> unsupported;
    int total() const { return message + link + signal + terminate; }
};

EventDefs scan_event_definitions(const pt::ptree& node) {
    EventDefs defs;
    for (const auto& [tag, child] : node) {
        (void)child;
        std::string name = local_name(tag);
        if (name == "messageEventDefinition") ++defs.message;
        else if (name == "linkEventDefinition") ++defs.link;
        else if (name == "signalEventDefinition") ++defs.signal;
        else if (name == "terminateEventDefinition") ++defs.terminate;
        else if (name.size() > 15 && name.substr(name.size() - 15) == "EventDefinition")
            defs.unsupported.push_back(name);
    }
    return defs;
}

FlowNodeKind classify_event(const std::string& tag, const std::string& id, const EventDefs& defs) {
    if (!defs.unsupported.empty()) throw UnsupportedElementError(defs.unsupported.front(), id);
    if (defs.total() > 1)
        throw UnsupportedElementError(tag + " with multiple event definitions", id);
    if (tag == "startEvent") {
        if (defs.message) return FlowNodeKind::MessageStartEvent;
        if (defs.signal) return FlowNodeKind::SignalStartEvent;
        if (defs.total() == 0) return FlowNodeKind::NoneStartEvent;
    } else if (tag == "endEvent") {
        if (defs.message) return FlowNodeKind::MessageEndEvent;
        if (defs.signal) return FlowNodeKind::SignalEndEvent;
        if (defs.terminate) return FlowNodeKind::TerminateEndEvent;
        if (defs.total() == 0) return FlowNodeKind::NoneEndEvent;
    } else if (tag == "intermediateThrowEvent") {
        if (defs.message) return FlowNodeKind::MessageIntermediateThrowEvent;
        if (defs.link) return FlowNodeKind::LinkThrowEvent;
        if (defs.signal) return FlowNodeKind::SignalIntermediateThrowEvent;
    } else if (tag == "intermediateCatchEvent") {
        if (defs.message) return FlowNodeKind::MessageIntermediateCatchEvent;
        if (defs.link) return FlowNodeKind::LinkCatchEvent;
        if (defs.signal) return FlowNodeKind::SignalIntermediateCatchEvent;
    }
    throw UnsupportedElementError(tag, id);
}

bool is_task_tag(const std::string& name) {
    return name == "task" || name == "userTask" || name == "serviceTask" ||
           name == "manualTask" || name == "scriptTask" || name == "sendTask";
}

struct PendingToken {
    std::string element_id;
    bool should_exist = true;
    std::string snapshot_ref;  // optional processSnapshot attribute
};

class Parser {
public:
    BpmnModel parse(const std::string& xml_text) {
        pt::ptree doc;
        std::istringstream in(xml_text);
        try {
            pt::read_xml(in, doc, pt::xml_parser::no_comments);
        } catch (const pt::xml_parser_error& e) {
            throw XmlMalformedError(std::string("not well-formed XML: ") + e.what());
        }

        const pt::ptree* definitions = nullptr;
        std::string definitions_name;
        for (const auto& [tag, child] : doc) {
            if (local_name(tag) == "definitions") {
                definitions = &child;
                definitions_name = get_attr(child, "name");
                if (definitions_name.empty()) definitions_name = get_attr(child, "id");
                break;
            }
        }
        if (!definitions) throw XmlMalformedError("no <definitions> root element found");

        model_.name = definitions_name;
        for (const auto& [tag, child] : *definitions) {
            std::string name = local_name(tag);
            if (name == "process") {
                parse_process(child);
            } else if (name == "collaboration") {
                parse_collaboration(child);
            }
            // Declarations (message, signal, ...) and diagram interchange are
            // inert for the token game and skipped.
        }

        check_unique_ids();
        wire_flows();
        resolve_extension_tokens();
        return std::move(model_);
    }

private:
    void parse_collaboration(const pt::ptree& collab) {
        if (model_.name.empty()) model_.name = get_attr(collab, "name");
        for (const auto& [tag, child] : collab) {
            std::string name = local_name(tag);
            if (name == "messageFlow") {
                MessageFlow mf;
                mf.id = require_id(child, "messageFlow");
                mf.source = get_attr(child, "sourceRef");
                mf.target = get_attr(child, "targetRef");
                if (mf.source.empty() || mf.target.empty())
                    throw XmlMalformedError("messageFlow '" + mf.id + "' without sourceRef/targetRef");
                model_.message_flows.push_back(std::move(mf));
            } else if (name == "participant" || is_ignorable(name)) {
                // Participants only mirror processRef; processes are parsed directly.
            } else {
                throw UnsupportedElementError(name, get_attr(child, "id"));
            }
        }
    }

    // Parses a <process> or (recursively) an inline <subProcess> body.
    void parse_process(const pt::ptree& proc_node, const std::string& forced_id = {},
                       const std::string& forced_name = {}) {
        Process proc;
        proc.id = forced_id.empty() ? require_id(proc_node, "process") : forced_id;
        proc.name = forced_name.empty() ? get_attr(proc_node, "name") : forced_name;

        std::vector<PendingToken> pending_tokens;
        std::vector<std::size_t> own_snapshots;
        std::map<std::string, std::size_t> snapshot_by_id;

        for (const auto& [tag, child] : proc_node) {
            std::string name = local_name(tag);
            if (name == "sequenceFlow") {
                SequenceFlow sf;
                sf.id = require_id(child, "sequenceFlow");
                sf.source = get_attr(child, "sourceRef");
                sf.target = get_attr(child, "targetRef");
                if (sf.source.empty() || sf.target.empty())
                    throw XmlMalformedError("sequenceFlow '" + sf.id + "' without sourceRef/targetRef");
                proc.sequence_flows.push_back(std::move(sf));
                continue;
            }
            if (name == "extensionElements") {
                parse_extension_elements(child, proc.id, "", snapshot_by_id, own_snapshots,
                                         pending_tokens);
                continue;
            }
            if (is_ignorable(name)) continue;

            if (name == "startEvent" || name == "endEvent" || name == "intermediateThrowEvent" ||
                name == "intermediateCatchEvent") {
                FlowNode node;
                node.id = require_id(child, name);
                node.name = get_attr(child, "name");
                node.kind = classify_event(name, node.id, scan_event_definitions(child));
                collect_node_extensions(child, proc.id, node.id, snapshot_by_id, own_snapshots,
                                        pending_tokens);
                proc.flow_nodes.push_back(std::move(node));
            } else if (is_task_tag(name)) {
                FlowNode node;
                node.id = require_id(child, name);
                node.name = get_attr(child, "name");
                node.kind = FlowNodeKind::Task;
                collect_node_extensions(child, proc.id, node.id, snapshot_by_id, own_snapshots,
                                        pending_tokens);
                proc.flow_nodes.push_back(std::move(node));
            } else if (name == "callActivity") {
                FlowNode node;
                node.id = require_id(child, name);
                node.name = get_attr(child, "name");
                node.kind = FlowNodeKind::SubProcessCall;
                std::string called = get_attr(child, "calledElement");
                if (!called.empty()) node.called_process = called;
                collect_node_extensions(child, proc.id, node.id, snapshot_by_id, own_snapshots,
                                        pending_tokens);
                proc.flow_nodes.push_back(std::move(node));
            } else if (name == "subProcess") {
                std::string id = require_id(child, name);
                if (get_attr(child, "triggeredByEvent") == "true")
                    throw UnsupportedElementError("subProcess (event subprocess)", id);
                std::string synthetic = unique_process_id(id + "_proc");
                std::string sub_name = get_attr(child, "name");
                parse_process(child, synthetic, sub_name.empty() ? id : sub_name);
                FlowNode node;
                node.id = id;
                node.name = sub_name;
                node.kind = FlowNodeKind::SubProcessCall;
                node.called_process = synthetic;
                proc.flow_nodes.push_back(std::move(node));
            } else if (name == "parallelGateway") {
                FlowNode node;
                node.id = require_id(child, name);
                node.name = get_attr(child, "name");
                node.kind = FlowNodeKind::ParallelGateway;
                proc.flow_nodes.push_back(std::move(node));
            } else if (name == "exclusiveGateway") {
                FlowNode node;
                node.id = require_id(child, name);
                node.name = get_attr(child, "name");
                node.kind = FlowNodeKind::ExclusiveGateway;
                proc.flow_nodes.push_back(std::move(node));
            } else {
                throw UnsupportedElementError(name, get_attr(child, "id"));
            }
        }

        // Tokens persisted on flow nodes attach to a snapshot of this process;
        // without an explicit reference or declared snapshot they form one
        // implicit snapshot per process.
        for (auto& tok : pending_tokens) {
            std::size_t idx;
            if (!tok.snapshot_ref.empty()) {
                auto it = snapshot_by_id.find(tok.snapshot_ref);
                if (it == snapshot_by_id.end())
                    throw DanglingReferenceError(tok.snapshot_ref);
                idx = it->second;
            } else if (!own_snapshots.empty()) {
                idx = own_snapshots.front();
            } else {
                ExtensionSnapshot snap;
                snap.name = synthesize_snapshot_name();
                snap.process_id = proc.id;
                model_.extension_snapshots.push_back(std::move(snap));
                idx = model_.extension_snapshots.size() - 1;
                own_snapshots.push_back(idx);
            }
            model_.extension_snapshots[idx].tokens.push_back({tok.element_id, tok.should_exist});
        }

        model_.processes.push_back(std::move(proc));
    }

    void collect_node_extensions(const pt::ptree& node, const std::string& process_id,
                                 const std::string& node_id,
                                 std::map<std::string, std::size_t>& snapshot_by_id,
                                 std::vector<std::size_t>& own_snapshots,
                                 std::vector<PendingToken>& pending_tokens) {
        for (const auto& [tag, child] : node) {
            if (local_name(tag) == "extensionElements")
                parse_extension_elements(child, process_id, node_id, snapshot_by_id, own_snapshots,
                                         pending_tokens);
        }
    }

    void parse_extension_elements(const pt::ptree& ext, const std::string& process_id,
                                  const std::string& enclosing_node,
                                  std::map<std::string, std::size_t>& snapshot_by_id,
                                  std::vector<std::size_t>& own_snapshots,
                                  std::vector<PendingToken>& pending_tokens) {
        for (const auto& [tag, child] : ext) {
            std::string name = local_name(tag);
            if (name == "processSnapshot") {
                ExtensionSnapshot snap;
                std::string snap_id = get_attr(child, "id");
                snap.name = get_attr(child, "name");
                if (snap.name.empty()) snap.name = snap_id;
                if (snap.name.empty()) snap.name = synthesize_snapshot_name();
                snap.process_id = process_id;
                for (const auto& [ttag, tchild] : child) {
                    if (local_name(ttag) != "token") continue;
                    std::string element = get_attr(tchild, "elementID");
                    if (element.empty())
                        throw XmlMalformedError("token element without elementID attribute");
                    snap.tokens.push_back({element, get_attr(tchild, "shouldExist") != "false"});
                }
                model_.extension_snapshots.push_back(std::move(snap));
                own_snapshots.push_back(model_.extension_snapshots.size() - 1);
                if (!snap_id.empty())
                    snapshot_by_id[snap_id] = model_.extension_snapshots.size() - 1;
            } else if (name == "token") {
                PendingToken tok;
                tok.element_id = get_attr(child, "elementID");
                if (tok.element_id.empty()) tok.element_id = enclosing_node;
                if (tok.element_id.empty())
                    throw XmlMalformedError("token element without elementID attribute");
                tok.should_exist = get_attr(child, "shouldExist") != "false";
                tok.snapshot_ref = get_attr(child, "processSnapshot");
                pending_tokens.push_back(std::move(tok));
            }
            // Foreign vendor extensions are skipped.
        }
    }

    std::string synthesize_snapshot_name() {
        return "snapshot" + std::to_string(++snapshot_counter_);
    }

    std::string unique_process_id(const std::string& base) {
        std::string id = base;
        int n = 1;
        while (used_synthetic_ids_.count(id)) id = base + std::to_string(++n);
        used_synthetic_ids_.insert(id);
        return id;
    }

    void check_unique_ids() {
        std::set<std::string> ids;
        auto add = [&](const std::string& id) {
            if (!ids.insert(id).second) throw XmlMalformedError("duplicate id '" + id + "'");
        };
        for (const auto& p : model_.processes) {
            add(p.id);
            for (const auto& n : p.flow_nodes) add(n.id);
            for (const auto& f : p.sequence_flows) add(f.id);
        }
        for (const auto& mf : model_.message_flows) add(mf.id);
    }

    // Derives incoming/outgoing lists from the sequence flows and checks
    // every reference resolves.
    void wire_flows() {
        for (auto& p : model_.processes) {
            std::map<std::string, FlowNode*> nodes;
            for (auto& n : p.flow_nodes) nodes[n.id] = &n;
            for (const auto& f : p.sequence_flows) {
                auto src = nodes.find(f.source);
                auto tgt = nodes.find(f.target);
                if (src == nodes.end()) throw DanglingReferenceError(f.source);
                if (tgt == nodes.end()) throw DanglingReferenceError(f.target);
                src->second->outgoing.push_back(f.id);
                tgt->second->incoming.push_back(f.id);
            }
        }
        for (const auto& mf : model_.message_flows) {
            if (!model_.find_node(mf.source)) throw DanglingReferenceError(mf.source);
            if (!model_.find_node(mf.target)) throw DanglingReferenceError(mf.target);
        }
    }

    void resolve_extension_tokens() {
        for (const auto& snap : model_.extension_snapshots) {
            for (const auto& tok : snap.tokens) {
                if (!model_.find_node(tok.element_id) && !model_.find_flow(tok.element_id))
                    throw DanglingReferenceError(tok.element_id);
            }
        }
    }

    BpmnModel model_;
    int snapshot_counter_ = 0;
    std::set<std::string> used_synthetic_ids_;
};

}  // namespace

BpmnModel parse_bpmn(const std::string& xml_text) {
    return Parser{}.parse(xml_text);
}

BpmnModel load_bpmn_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_bpmn(buf.str());
}

namespace {

void write_event(detail::XmlWriter& w, const FlowNode& n) {
    const char* tag = nullptr;
    const char* def = nullptr;
    switch (n.kind) {
        case FlowNodeKind::NoneStartEvent: tag = "startEvent"; break;
        case FlowNodeKind::MessageStartEvent: tag = "startEvent"; def = "messageEventDefinition"; break;
        case FlowNodeKind::SignalStartEvent: tag = "startEvent"; def = "signalEventDefinition"; break;
        case FlowNodeKind::NoneEndEvent: tag = "endEvent"; break;
        case FlowNodeKind::MessageEndEvent: tag = "endEvent"; def = "messageEventDefinition"; break;
        case FlowNodeKind::SignalEndEvent: tag = "endEvent"; def = "signalEventDefinition"; break;
        case FlowNodeKind::TerminateEndEvent: tag = "endEvent"; def = "terminateEventDefinition"; break;
        case FlowNodeKind::MessageIntermediateThrowEvent:
            tag = "intermediateThrowEvent"; def = "messageEventDefinition"; break;
        case FlowNodeKind::LinkThrowEvent:
            tag = "intermediateThrowEvent"; def = "linkEventDefinition"; break;
        case FlowNodeKind::SignalIntermediateThrowEvent:
            tag = "intermediateThrowEvent"; def = "signalEventDefinition"; break;
        case FlowNodeKind::MessageIntermediateCatchEvent:
            tag = "intermediateCatchEvent"; def = "messageEventDefinition"; break;
        case FlowNodeKind::LinkCatchEvent:
            tag = "intermediateCatchEvent"; def = "linkEventDefinition"; break;
        case FlowNodeKind::SignalIntermediateCatchEvent:
            tag = "intermediateCatchEvent"; def = "signalEventDefinition"; break;
        default: return;
    }
    w.open(tag).attr("id", n.id);
    if (!n.name.empty()) w.attr("name", n.name);
    if (def) w.open(def).close();
    w.close();
}

void write_extension_snapshots(detail::XmlWriter& w, const BpmnModel& model,
                               const std::string& process_id) {
    bool any = false;
    for (const auto& snap : model.extension_snapshots)
        if (snap.process_id == process_id) any = true;
    if (!any) return;
    w.open("extensionElements");
    for (const auto& snap : model.extension_snapshots) {
        if (snap.process_id != process_id) continue;
        w.open("processSnapshot").attr("name", snap.name);
        for (const auto& tok : snap.tokens) {
            w.open("token").attr("elementID", tok.element_id);
            if (!tok.should_exist) w.attr("shouldExist", "false");
            w.close();
        }
        w.close();
    }
    w.close();
}

}  // namespace

std::string serialize_bpmn(const BpmnModel& model) {
    detail::XmlWriter w;
    w.open("definitions")
        .attr("xmlns", "http://www.omg.org/spec/BPMN/20100524/MODEL")
        .attr("id", "definitions_1")
        .attr("targetNamespace", "http://bpmncheck/generated");
    if (!model.name.empty()) w.attr("name", model.name);

    if (!model.message_flows.empty()) {
        w.open("collaboration").attr("id", "collaboration_1");
        for (const auto& p : model.processes) {
            w.open("participant")
                .attr("id", p.id + "_participant")
                .attr("processRef", p.id)
                .close();
        }
        for (const auto& mf : model.message_flows) {
            w.open("messageFlow")
                .attr("id", mf.id)
                .attr("sourceRef", mf.source)
                .attr("targetRef", mf.target)
                .close();
        }
        w.close();
    }

    for (const auto& p : model.processes) {
        w.open("process").attr("id", p.id);
        if (!p.name.empty()) w.attr("name", p.name);
        write_extension_snapshots(w, model, p.id);
        for (const auto& n : p.flow_nodes) {
            switch (n.kind) {
                case FlowNodeKind::Task:
                    w.open("task").attr("id", n.id);
                    if (!n.name.empty()) w.attr("name", n.name);
                    w.close();
                    break;
                case FlowNodeKind::SubProcessCall:
                    w.open("callActivity").attr("id", n.id);
                    if (!n.name.empty()) w.attr("name", n.name);
                    if (n.called_process) w.attr("calledElement", *n.called_process);
                    w.close();
                    break;
                case FlowNodeKind::ParallelGateway:
                case FlowNodeKind::ExclusiveGateway:
                    w.open(n.kind == FlowNodeKind::ParallelGateway ? "parallelGateway"
                                                                   : "exclusiveGateway")
                        .attr("id", n.id);
                    if (!n.name.empty()) w.attr("name", n.name);
                    w.close();
                    break;
                default:
                    write_event(w, n);
            }
        }
        for (const auto& f : p.sequence_flows) {
            w.open("sequenceFlow")
                .attr("id", f.id)
                .attr("sourceRef", f.source)
                .attr("targetRef", f.target)
                .close();
        }
        w.close();
    }
    w.close();
    return w.str();
}

}  // namespace bpmncheck
