#ifndef BPMNCHECK_GROOVE_HPP
#define BPMNCHECK_GROOVE_HPP

#include <string>
#include <vector>

#include "bpmncheck/generate.hpp"

namespace bpmncheck {

struct GrammarDir {
    std::string path;                // directory name ending in .gps
    std::vector<std::string> files;  // file names inside the directory
};

// GXL encoding of a state: nodes typed ProcessSnapshot/Token/Message with
// elementID/state attribute edges and tokens/messages/subprocess edges.
// Snapshot nodes additionally carry a processID attribute edge so the graph
// can be read back without the source model.
std::string start_graph_gxl(const ExecutionState& state);

// GXL rule encoding: readers unprefixed, creators with new:, erasers with
// del:, NACs with not:, universal quantification with forall: nodes and
// @-edges, optional existential parts with existsx: nodes.
std::string rule_gxl(const Rule& rule);

// Reads a start graph written by start_graph_gxl back into a state.
ExecutionState import_start_graph(const std::string& gxl_text);

// Writes <out_dir>.gps with start.gst, one <ruleName>.gpr per rule and
// system.properties. Re-exporting the same rule set yields byte-identical
// files. Throws IoError on filesystem failures.
GrammarDir export_gps(const RuleSet& ruleset, const std::string& out_dir);

}  // namespace bpmncheck

#endif
