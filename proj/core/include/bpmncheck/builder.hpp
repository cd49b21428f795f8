#ifndef BPMNCHECK_BUILDER_HPP
#define BPMNCHECK_BUILDER_HPP

#include <string>
#include <utility>

#include "bpmncheck/model.hpp"

namespace bpmncheck {

// Convenience builder for programmatic models; wires the incoming/outgoing
// lists of the flow nodes from the sequence flows on build().
class ModelBuilder {
public:
    explicit ModelBuilder(std::string name = {}) { model_.name = std::move(name); }

    ModelBuilder& process(const std::string& id, const std::string& name = {}) {
        Process p;
        p.id = id;
        p.name = name;
        model_.processes.push_back(std::move(p));
        return *this;
    }

    ModelBuilder& node(const std::string& id, FlowNodeKind kind, const std::string& name = {}) {
        FlowNode n;
        n.id = id;
        n.name = name;
        n.kind = kind;
        current().flow_nodes.push_back(std::move(n));
        return *this;
    }

    ModelBuilder& call(const std::string& id, const std::string& called_process,
                       const std::string& name = {}) {
        FlowNode n;
        n.id = id;
        n.name = name;
        n.kind = FlowNodeKind::SubProcessCall;
        n.called_process = called_process;
        current().flow_nodes.push_back(std::move(n));
        return *this;
    }

    ModelBuilder& flow(const std::string& id, const std::string& source,
                       const std::string& target) {
        current().sequence_flows.push_back({id, source, target});
        return *this;
    }

    // Sequence flow with an id derived from its endpoints.
    ModelBuilder& flow(const std::string& source, const std::string& target) {
        return flow(source + "__" + target, source, target);
    }

    ModelBuilder& message_flow(const std::string& id, const std::string& source,
                               const std::string& target) {
        model_.message_flows.push_back({id, source, target});
        return *this;
    }

    BpmnModel build() {
        BpmnModel out = model_;
        for (auto& p : out.processes) {
            for (const auto& f : p.sequence_flows) {
                for (auto& n : p.flow_nodes) {
                    if (n.id == f.source) n.outgoing.push_back(f.id);
                    if (n.id == f.target) n.incoming.push_back(f.id);
                }
            }
        }
        return out;
    }

private:
    Process& current() { return model_.processes.back(); }

    BpmnModel model_;
};

}  // namespace bpmncheck

#endif
