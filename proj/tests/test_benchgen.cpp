#include <doctest.h>

#include "bpmncheck/benchgen.hpp"
#include "bpmncheck/bpmn_xml.hpp"
#include "bpmncheck/model.hpp"

using namespace bpmncheck;

namespace {

int gateway_count(const BpmnModel& model) {
    int n = 0;
    for (const auto& p : model.processes)
        for (const auto& node : p.flow_nodes)
            if (is_gateway(node.kind)) ++n;
    return n;
}

}  // namespace

TEST_CASE("parallel family node counts") {
    BpmnModel one = gen_parallel(1);
    CHECK(one.flow_node_count() == 5);
    CHECK(gateway_count(one) == 2);
    CHECK(one.sequence_flow_count() == 4);

    BpmnModel ten = gen_parallel(10);
    CHECK(ten.flow_node_count() == 14);
    CHECK(gateway_count(ten) == 2);

    CHECK_THROWS_AS(gen_parallel(0), std::invalid_argument);
}

TEST_CASE("block family reproduces the published element counts") {
    struct Row {
        int blocks, gateways;
        std::size_t nodes, flows, total;
    };
    // gateways / flow nodes / sequence flows / total elements
    const Row rows[] = {
        {1, 0, 5, 4, 9},
        {50, 66, 185, 217, 402},
        {100, 132, 368, 433, 801},
        {300, 400, 1102, 1301, 2403},
    };
    for (const Row& row : rows) {
        BpmnModel model = gen_blocks(row.blocks);
        CHECK(gateway_count(model) == row.gateways);
        CHECK(model.flow_node_count() == row.nodes);
        CHECK(model.sequence_flow_count() == row.flows);
        CHECK(model.flow_node_count() + model.sequence_flow_count() == row.total);
    }
    CHECK_THROWS_AS(gen_blocks(0), std::invalid_argument);
}

TEST_CASE("generated models validate cleanly") {
    for (int n = 1; n <= 10; ++n) CHECK(validate_model(gen_parallel(n)).empty());
    for (int k = 1; k <= 30; ++k) CHECK(validate_model(gen_blocks(k)).empty());
}

TEST_CASE("generated models round trip through the BPMN serializer") {
    for (int n : {1, 5, 10}) {
        BpmnModel model = gen_parallel(n);
        CHECK(structurally_equal(model, parse_bpmn(serialize_bpmn(model))));
    }
    for (int k : {1, 2, 3, 12}) {
        BpmnModel model = gen_blocks(k);
        CHECK(structurally_equal(model, parse_bpmn(serialize_bpmn(model))));
    }
}

TEST_CASE("generators are deterministic") {
    CHECK(serialize_bpmn(gen_parallel(4)) == serialize_bpmn(gen_parallel(4)));
    CHECK(serialize_bpmn(gen_blocks(9)) == serialize_bpmn(gen_blocks(9)));
}
