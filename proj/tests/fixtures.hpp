#ifndef BPMNCHECK_TESTS_FIXTURES_HPP
#define BPMNCHECK_TESTS_FIXTURES_HPP

#include "bpmncheck/builder.hpp"

// Small models used across the test suites.
namespace fixtures {

using bpmncheck::BpmnModel;
using bpmncheck::FlowNodeKind;
using bpmncheck::ModelBuilder;

// Parallel fork whose branches meet in an exclusive merge: unsafe (the merge
// forwards both tokens onto one flow).
inline BpmnModel fork_into_xor_merge() {
    ModelBuilder b("fork_into_xor_merge");
    b.process("p");
    b.node("start", FlowNodeKind::NoneStartEvent);
    b.node("fork", FlowNodeKind::ParallelGateway);
    b.node("merge", FlowNodeKind::ExclusiveGateway);
    b.node("end", FlowNodeKind::NoneEndEvent);
    b.flow("start", "fork");
    b.flow("fa", "fork", "merge");
    b.flow("fb", "fork", "merge");
    b.flow("merge", "end");
    return b.build();
}

// Exclusive split feeding a parallel join: one join input never gets a
// token, so the process cannot complete.
inline BpmnModel xor_split_into_parallel_join() {
    ModelBuilder b("xor_split_into_parallel_join");
    b.process("p");
    b.node("start", FlowNodeKind::NoneStartEvent);
    b.node("split", FlowNodeKind::ExclusiveGateway);
    b.node("join", FlowNodeKind::ParallelGateway);
    b.node("end", FlowNodeKind::NoneEndEvent);
    b.flow("start", "split");
    b.flow("fa", "split", "join");
    b.flow("fb", "split", "join");
    b.flow("join", "end");
    return b.build();
}

// Both parallel branches wired into the same end event: that end event
// fires twice on every complete run.
inline BpmnModel two_branches_one_end() {
    ModelBuilder b("two_branches_one_end");
    b.process("p");
    b.node("start", FlowNodeKind::NoneStartEvent);
    b.node("fork", FlowNodeKind::ParallelGateway);
    b.node("taskA", FlowNodeKind::Task);
    b.node("taskB", FlowNodeKind::Task);
    b.node("end", FlowNodeKind::NoneEndEvent);
    b.flow("start", "fork");
    b.flow("fork", "taskA");
    b.flow("fork", "taskB");
    b.flow("taskA", "end");
    b.flow("taskB", "end");
    return b.build();
}

// A reachable chain plus one task on an unreachable island.
inline BpmnModel disconnected_task() {
    ModelBuilder b("disconnected_task");
    b.process("p");
    b.node("start", FlowNodeKind::NoneStartEvent);
    b.node("task", FlowNodeKind::Task);
    b.node("task2", FlowNodeKind::Task);
    b.node("end", FlowNodeKind::NoneEndEvent);
    b.flow("start", "task");
    b.flow("task", "end");
    return b.build();
}

// Two-pool collaboration: a throw event that feeds a catch event in a
// running pool and instantiates a third pool via its message start event.
inline BpmnModel messaging_pair() {
    ModelBuilder b("messaging_pair");
    b.process("sender");
    b.node("s_start", FlowNodeKind::NoneStartEvent);
    b.node("s_throw", FlowNodeKind::MessageIntermediateThrowEvent);
    b.node("s_end", FlowNodeKind::NoneEndEvent);
    b.flow("s_start", "s_throw");
    b.flow("s_throw", "s_end");

    b.process("listener");
    b.node("l_start", FlowNodeKind::NoneStartEvent);
    b.node("l_catch", FlowNodeKind::MessageIntermediateCatchEvent);
    b.node("l_end", FlowNodeKind::NoneEndEvent);
    b.flow("l_start", "l_catch");
    b.flow("l_catch", "l_end");

    b.process("spawned");
    b.node("w_start", FlowNodeKind::MessageStartEvent);
    b.node("w_task", FlowNodeKind::Task);
    b.node("w_end", FlowNodeKind::NoneEndEvent);
    b.flow("w_start", "w_task");
    b.flow("w_task", "w_end");

    b.message_flow("mf_catch", "s_throw", "l_catch");
    b.message_flow("mf_spawn", "s_throw", "w_start");
    return b.build();
}

// Signal broadcast: one thrower, a catcher pool waiting on the signal, and
// a pool instantiated by a signal start event. Signal identity is the node
// name.
inline BpmnModel signal_broadcast() {
    ModelBuilder b("signal_broadcast");
    b.process("thrower");
    b.node("t_start", FlowNodeKind::NoneStartEvent);
    b.node("t_throw", FlowNodeKind::SignalIntermediateThrowEvent, "alarm");
    b.node("t_end", FlowNodeKind::NoneEndEvent);
    b.flow("t_start", "t_throw");
    b.flow("t_throw", "t_end");

    b.process("catcher");
    b.node("c_start", FlowNodeKind::NoneStartEvent);
    b.node("c_catch", FlowNodeKind::SignalIntermediateCatchEvent, "alarm");
    b.node("c_end", FlowNodeKind::NoneEndEvent);
    b.flow("c_start", "c_catch");
    b.flow("c_catch", "c_end");

    b.process("spawned");
    b.node("w_start", FlowNodeKind::SignalStartEvent, "alarm");
    b.node("w_end", FlowNodeKind::NoneEndEvent);
    b.flow("w_start", "w_end");
    return b.build();
}

// Call activity running a small subprocess to completion.
inline BpmnModel call_activity_chain() {
    ModelBuilder b("call_activity_chain");
    b.process("main");
    b.node("m_start", FlowNodeKind::NoneStartEvent);
    b.call("m_call", "sub");
    b.node("m_end", FlowNodeKind::NoneEndEvent);
    b.flow("m_start", "m_call");
    b.flow("m_call", "m_end");

    b.process("sub");
    b.node("u_start", FlowNodeKind::NoneStartEvent);
    b.node("u_task", FlowNodeKind::Task);
    b.node("u_end", FlowNodeKind::NoneEndEvent);
    b.flow("u_start", "u_task");
    b.flow("u_task", "u_end");
    return b.build();
}

// Terminate end event racing a slow parallel branch.
inline BpmnModel terminate_race() {
    ModelBuilder b("terminate_race");
    b.process("p");
    b.node("start", FlowNodeKind::NoneStartEvent);
    b.node("fork", FlowNodeKind::ParallelGateway);
    b.node("task", FlowNodeKind::Task);
    b.node("stop", FlowNodeKind::TerminateEndEvent);
    b.node("end", FlowNodeKind::NoneEndEvent);
    b.flow("start", "fork");
    b.flow("fork", "task");
    b.flow("task", "end");
    b.flow("fork", "stop");
    return b.build();
}

}  // namespace fixtures

#endif
