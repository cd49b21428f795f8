#include "bpmncheck/benchgen.hpp"

#include <stdexcept>

#include "bpmncheck/builder.hpp"

namespace bpmncheck {

BpmnModel gen_parallel(int branches) {
    if (branches < 1) throw std::invalid_argument("branch count must be >= 1");
    ModelBuilder b("parallel_" + std::to_string(branches));
    b.process("process");
    b.node("start", FlowNodeKind::NoneStartEvent, "Start");
    b.node("fork", FlowNodeKind::ParallelGateway);
    for (int i = 1; i <= branches; ++i)
        b.node("task" + std::to_string(i), FlowNodeKind::Task, "Task " + std::to_string(i));
    b.node("join", FlowNodeKind::ParallelGateway);
    b.node("end", FlowNodeKind::NoneEndEvent, "End");

    b.flow("start", "fork");
    for (int i = 1; i <= branches; ++i) {
        std::string task = "task" + std::to_string(i);
        b.flow("fork", task);
        b.flow(task, "join");
    }
    b.flow("join", "end");
    return b.build();
}

namespace {

// Appends block number `i` of the cycling type and returns its entry/exit
// node ids.
std::pair<std::string, std::string> append_block(ModelBuilder& b, int i) {
    std::string prefix = "b" + std::to_string(i) + "_";
    switch ((i - 1) % 3) {
        case 0: {  // three tasks in sequence
            b.node(prefix + "t1", FlowNodeKind::Task);
            b.node(prefix + "t2", FlowNodeKind::Task);
            b.node(prefix + "t3", FlowNodeKind::Task);
            b.flow(prefix + "t1", prefix + "t2");
            b.flow(prefix + "t2", prefix + "t3");
            return {prefix + "t1", prefix + "t3"};
        }
        case 1: {  // exclusive split/merge with two single-task branches
            b.node(prefix + "split", FlowNodeKind::ExclusiveGateway);
            b.node(prefix + "a", FlowNodeKind::Task);
            b.node(prefix + "b", FlowNodeKind::Task);
            b.node(prefix + "merge", FlowNodeKind::ExclusiveGateway);
            b.flow(prefix + "split", prefix + "a");
            b.flow(prefix + "split", prefix + "b");
            b.flow(prefix + "a", prefix + "merge");
            b.flow(prefix + "b", prefix + "merge");
            return {prefix + "split", prefix + "merge"};
        }
        default: {  // parallel fork/join with two single-task branches
            b.node(prefix + "fork", FlowNodeKind::ParallelGateway);
            b.node(prefix + "a", FlowNodeKind::Task);
            b.node(prefix + "b", FlowNodeKind::Task);
            b.node(prefix + "join", FlowNodeKind::ParallelGateway);
            b.flow(prefix + "fork", prefix + "a");
            b.flow(prefix + "fork", prefix + "b");
            b.flow(prefix + "a", prefix + "join");
            b.flow(prefix + "b", prefix + "join");
            return {prefix + "fork", prefix + "join"};
        }
    }
}

}  // namespace

BpmnModel gen_blocks(int blocks) {
    if (blocks < 1) throw std::invalid_argument("block count must be >= 1");
    ModelBuilder b("blocks_" + std::to_string(blocks));
    b.process("process");
    b.node("start", FlowNodeKind::NoneStartEvent, "Start");

    std::string previous_exit = "start";
    for (int i = 1; i <= blocks; ++i) {
        // Declare the block's nodes, then the connector from the previous
        // block.
        auto [entry, exit] = append_block(b, i);
        b.flow("c" + std::to_string(i - 1), previous_exit, entry);
        previous_exit = exit;
    }
    b.node("end", FlowNodeKind::NoneEndEvent, "End");
    b.flow("c" + std::to_string(blocks), previous_exit, "end");
    return b.build();
}

}  // namespace bpmncheck
