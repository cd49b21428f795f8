#include <doctest.h>

#include "bpmncheck/benchgen.hpp"
#include "bpmncheck/bpmn_xml.hpp"
#include "bpmncheck/builder.hpp"
#include "bpmncheck/model.hpp"
#include "fixtures.hpp"

using namespace bpmncheck;

namespace {

const char* kSimpleChain = R"(<?xml version="1.0" encoding="UTF-8"?>
<bpmn:definitions xmlns:bpmn="http://www.omg.org/spec/BPMN/20100524/MODEL" id="d1">
  <bpmn:process id="p1" name="Chain">
    <bpmn:startEvent id="start"/>
    <bpmn:task id="task" name="Do work">
      <bpmn:incoming>f1</bpmn:incoming>
      <bpmn:outgoing>f2</bpmn:outgoing>
    </bpmn:task>
    <bpmn:endEvent id="end"/>
    <bpmn:sequenceFlow id="f1" sourceRef="start" targetRef="task"/>
    <bpmn:sequenceFlow id="f2" sourceRef="task" targetRef="end"/>
  </bpmn:process>
</bpmn:definitions>
)";

}  // namespace

TEST_CASE("parse a start-task-end chain") {
    BpmnModel model = parse_bpmn(kSimpleChain);
    REQUIRE(model.processes.size() == 1);
    const Process& p = model.processes[0];
    CHECK(p.id == "p1");
    CHECK(p.name == "Chain");
    REQUIRE(p.flow_nodes.size() == 3);
    REQUIRE(p.sequence_flows.size() == 2);
    CHECK(p.find_node("start")->kind == FlowNodeKind::NoneStartEvent);
    CHECK(p.find_node("task")->kind == FlowNodeKind::Task);
    CHECK(p.find_node("task")->name == "Do work");
    CHECK(p.find_node("end")->kind == FlowNodeKind::NoneEndEvent);
    // incoming/outgoing derived from the flows, not the child elements
    CHECK(p.find_node("task")->incoming == std::vector<std::string>{"f1"});
    CHECK(p.find_node("task")->outgoing == std::vector<std::string>{"f2"});
    CHECK(p.find_node("start")->incoming.empty());
    CHECK(validate_model(model).empty());
}

TEST_CASE("parse is deterministic") {
    BpmnModel a = parse_bpmn(kSimpleChain);
    BpmnModel b = parse_bpmn(kSimpleChain);
    CHECK(structurally_equal(a, b));
    CHECK(serialize_bpmn(a) == serialize_bpmn(b));
}

TEST_CASE("unsupported elements are hard errors") {
    const char* xml = R"(<definitions><process id="p">
        <startEvent id="s"/><inclusiveGateway id="ig"/><endEvent id="e"/>
      </process></definitions>)";
    CHECK_THROWS_AS(parse_bpmn(xml), UnsupportedElementError);

    const char* boundary = R"(<definitions><process id="p">
        <startEvent id="s"/><boundaryEvent id="b" attachedToRef="t"/>
      </process></definitions>)";
    CHECK_THROWS_AS(parse_bpmn(boundary), UnsupportedElementError);

    const char* timer = R"(<definitions><process id="p">
        <startEvent id="s"><timerEventDefinition/></startEvent>
      </process></definitions>)";
    CHECK_THROWS_AS(parse_bpmn(timer), UnsupportedElementError);

    const char* receive = R"(<definitions><process id="p">
        <receiveTask id="r"/>
      </process></definitions>)";
    CHECK_THROWS_AS(parse_bpmn(receive), UnsupportedElementError);
}

TEST_CASE("malformed input") {
    CHECK_THROWS_AS(parse_bpmn("not xml at all <"), XmlMalformedError);
    CHECK_THROWS_AS(parse_bpmn("<definitions><process id='p'><task/></process></definitions>"),
                    XmlMalformedError);  // task without id
    CHECK_THROWS_AS(parse_bpmn("<other/>"), XmlMalformedError);
    const char* dup = R"(<definitions><process id="p">
        <task id="t"/><task id="t"/>
      </process></definitions>)";
    CHECK_THROWS_AS(parse_bpmn(dup), XmlMalformedError);
}

TEST_CASE("dangling references") {
    const char* xml = R"(<definitions><process id="p">
        <startEvent id="s"/>
        <sequenceFlow id="f" sourceRef="s" targetRef="ghost"/>
      </process></definitions>)";
    CHECK_THROWS_AS(parse_bpmn(xml), DanglingReferenceError);
}

TEST_CASE("task flavors all map to Task") {
    const char* xml = R"(<definitions><process id="p">
        <task id="a"/><userTask id="b"/><serviceTask id="c"/>
        <manualTask id="d"/><scriptTask id="e"/><sendTask id="f"/>
      </process></definitions>)";
    BpmnModel model = parse_bpmn(xml);
    for (const auto& n : model.processes[0].flow_nodes) CHECK(n.kind == FlowNodeKind::Task);
}

TEST_CASE("event definitions discriminate event kinds") {
    const char* xml = R"(<definitions>
      <collaboration id="c">
        <participant id="pa1" processRef="p"/>
        <messageFlow id="mf" sourceRef="mee" targetRef="mse"/>
      </collaboration>
      <process id="p">
        <startEvent id="nse"/>
        <intermediateThrowEvent id="mite"><messageEventDefinition/></intermediateThrowEvent>
        <intermediateCatchEvent id="mice"><messageEventDefinition/></intermediateCatchEvent>
        <intermediateThrowEvent id="lte"><linkEventDefinition/></intermediateThrowEvent>
        <intermediateCatchEvent id="lce"><linkEventDefinition/></intermediateCatchEvent>
        <intermediateThrowEvent id="site"><signalEventDefinition/></intermediateThrowEvent>
        <intermediateCatchEvent id="sice"><signalEventDefinition/></intermediateCatchEvent>
        <endEvent id="mee"><messageEventDefinition/></endEvent>
        <endEvent id="see"><signalEventDefinition/></endEvent>
        <endEvent id="tee"><terminateEventDefinition/></endEvent>
        <endEvent id="nee"/>
      </process>
      <process id="q">
        <startEvent id="mse"><messageEventDefinition/></startEvent>
        <startEvent id="sse"><signalEventDefinition/></startEvent>
      </process>
    </definitions>)";
    BpmnModel model = parse_bpmn(xml);
    auto kind = [&](const char* id) { return model.find_node(id)->kind; };
    CHECK(kind("nse") == FlowNodeKind::NoneStartEvent);
    CHECK(kind("mite") == FlowNodeKind::MessageIntermediateThrowEvent);
    CHECK(kind("mice") == FlowNodeKind::MessageIntermediateCatchEvent);
    CHECK(kind("lte") == FlowNodeKind::LinkThrowEvent);
    CHECK(kind("lce") == FlowNodeKind::LinkCatchEvent);
    CHECK(kind("site") == FlowNodeKind::SignalIntermediateThrowEvent);
    CHECK(kind("sice") == FlowNodeKind::SignalIntermediateCatchEvent);
    CHECK(kind("mee") == FlowNodeKind::MessageEndEvent);
    CHECK(kind("see") == FlowNodeKind::SignalEndEvent);
    CHECK(kind("tee") == FlowNodeKind::TerminateEndEvent);
    CHECK(kind("nee") == FlowNodeKind::NoneEndEvent);
    CHECK(kind("mse") == FlowNodeKind::MessageStartEvent);
    CHECK(kind("sse") == FlowNodeKind::SignalStartEvent);
    REQUIRE(model.message_flows.size() == 1);
    CHECK(model.message_flows[0].source == "mee");
}

TEST_CASE("inline subprocess is normalized into a call") {
    const char* xml = R"(<definitions><process id="p">
        <startEvent id="s"/>
        <subProcess id="sub" name="Inner">
          <startEvent id="is"/>
          <task id="it"/>
          <endEvent id="ie"/>
          <sequenceFlow id="if1" sourceRef="is" targetRef="it"/>
          <sequenceFlow id="if2" sourceRef="it" targetRef="ie"/>
        </subProcess>
        <endEvent id="e"/>
        <sequenceFlow id="f1" sourceRef="s" targetRef="sub"/>
        <sequenceFlow id="f2" sourceRef="sub" targetRef="e"/>
      </process></definitions>)";
    BpmnModel model = parse_bpmn(xml);
    REQUIRE(model.processes.size() == 2);
    const FlowNode* call = model.find_node("sub");
    REQUIRE(call);
    CHECK(call->kind == FlowNodeKind::SubProcessCall);
    REQUIRE(call->called_process.has_value());
    const Process* sub = model.find_process(*call->called_process);
    REQUIRE(sub);
    CHECK(sub->flow_nodes.size() == 3);
    CHECK(sub->find_node("it") != nullptr);
    CHECK(validate_model(model).empty());

    const char* event_sub = R"(<definitions><process id="p">
        <subProcess id="sub" triggeredByEvent="true"/>
      </process></definitions>)";
    CHECK_THROWS_AS(parse_bpmn(event_sub), UnsupportedElementError);
}

TEST_CASE("extension elements surface token snapshots") {
    const char* xml = R"(<definitions xmlns:tb="http://example.org/tokens">
      <process id="p">
        <extensionElements>
          <tb:processSnapshot id="ps1" name="shipTwice">
            <tb:token elementID="ship"/>
            <tb:token elementID="ship"/>
            <tb:token elementID="pay" shouldExist="false"/>
          </tb:processSnapshot>
        </extensionElements>
        <startEvent id="s"/>
        <task id="ship"/>
        <task id="pay"/>
        <endEvent id="e"/>
        <sequenceFlow id="f1" sourceRef="s" targetRef="ship"/>
        <sequenceFlow id="f2" sourceRef="ship" targetRef="e"/>
      </process>
    </definitions>)";
    BpmnModel model = parse_bpmn(xml);
    REQUIRE(model.extension_snapshots.size() == 1);
    const auto& snap = model.extension_snapshots[0];
    CHECK(snap.name == "shipTwice");
    CHECK(snap.process_id == "p");
    REQUIRE(snap.tokens.size() == 3);
    int forbidden = 0;
    for (const auto& t : snap.tokens)
        if (!t.should_exist) ++forbidden;
    CHECK(forbidden == 1);
}

TEST_CASE("token on a flow node defaults to that node") {
    const char* xml = R"(<definitions><process id="p">
        <startEvent id="s"/>
        <task id="work">
          <extensionElements><token/></extensionElements>
        </task>
        <sequenceFlow id="f1" sourceRef="s" targetRef="work"/>
      </process></definitions>)";
    BpmnModel model = parse_bpmn(xml);
    REQUIRE(model.extension_snapshots.size() == 1);
    REQUIRE(model.extension_snapshots[0].tokens.size() == 1);
    CHECK(model.extension_snapshots[0].tokens[0].element_id == "work");
}

TEST_CASE("validate flags implicit gateways") {
    ModelBuilder b;
    b.process("p");
    b.node("s", FlowNodeKind::NoneStartEvent);
    b.node("t", FlowNodeKind::Task);
    b.node("e1", FlowNodeKind::NoneEndEvent);
    b.node("e2", FlowNodeKind::NoneEndEvent);
    b.flow("s", "t");
    b.flow("t", "e1");
    b.flow("t", "e2");
    auto diags = validate_model(b.build());
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].severity == Severity::Warning);
    CHECK(diags[0].node_id == "t");
}

TEST_CASE("validate flags call cycles once") {
    ModelBuilder b;
    b.process("A");
    b.node("sa", FlowNodeKind::NoneStartEvent);
    b.call("ca", "B");
    b.node("ea", FlowNodeKind::NoneEndEvent);
    b.flow("sa", "ca");
    b.flow("ca", "ea");
    b.process("B");
    b.node("sb", FlowNodeKind::NoneStartEvent);
    b.call("cb", "A");
    b.node("eb", FlowNodeKind::NoneEndEvent);
    b.flow("sb", "cb");
    b.flow("cb", "eb");
    auto diags = validate_model(b.build());
    int errors = 0;
    for (const auto& d : diags)
        if (d.severity == Severity::Error) ++errors;
    CHECK(errors == 1);
}

TEST_CASE("validate flags bad message flow endpoints and missing processes") {
    ModelBuilder b;
    b.process("p");
    b.node("s", FlowNodeKind::NoneStartEvent);
    b.node("t", FlowNodeKind::Task);
    b.call("c", "nowhere");
    b.flow("s", "t");
    b.flow("t", "c");
    b.message_flow("mf", "t", "s");  // task may not send, start event may not receive
    auto diags = validate_model(b.build());
    CHECK(has_errors(diags));
    int errors = 0;
    for (const auto& d : diags)
        if (d.severity == Severity::Error) ++errors;
    CHECK(errors == 3);  // bad source kind, bad target kind, unknown called process
}

TEST_CASE("validate flags processes without start events") {
    ModelBuilder b;
    b.process("p");
    b.node("t", FlowNodeKind::Task);
    auto diags = validate_model(b.build());
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].severity == Severity::Warning);
}

TEST_CASE("validate flags miswired start and end events") {
    ModelBuilder b;
    b.process("p");
    b.node("s", FlowNodeKind::NoneStartEvent);
    b.node("e", FlowNodeKind::NoneEndEvent);
    b.flow("e", "s");
    auto diags = validate_model(b.build());
    int errors = 0;
    for (const auto& d : diags)
        if (d.severity == Severity::Error) ++errors;
    CHECK(errors == 2);
}

TEST_CASE("self-loop sequence flows are permitted") {
    ModelBuilder b;
    b.process("p");
    b.node("s", FlowNodeKind::NoneStartEvent);
    b.node("g", FlowNodeKind::ExclusiveGateway);
    b.node("e", FlowNodeKind::NoneEndEvent);
    b.flow("s", "g");
    b.flow("loop", "g", "g");
    b.flow("g", "e");
    CHECK(!has_errors(validate_model(b.build())));
}

TEST_CASE("serialize/parse round trip") {
    for (const BpmnModel& model :
         {gen_parallel(1), gen_parallel(3), gen_blocks(4), fixtures::messaging_pair(),
          fixtures::signal_broadcast(), fixtures::call_activity_chain(),
          fixtures::terminate_race()}) {
        BpmnModel reparsed = parse_bpmn(serialize_bpmn(model));
        CHECK(structurally_equal(model, reparsed));
    }
}

TEST_CASE("extension snapshots survive the round trip") {
    BpmnModel model = fixtures::disconnected_task();
    model.extension_snapshots.push_back({"busy", "p", {{"task", true}, {"task2", false}}});
    BpmnModel reparsed = parse_bpmn(serialize_bpmn(model));
    REQUIRE(reparsed.extension_snapshots.size() == 1);
    CHECK(reparsed.extension_snapshots[0].name == "busy");
    CHECK(reparsed.extension_snapshots[0].process_id == "p");
    CHECK(reparsed.extension_snapshots[0].tokens.size() == 2);
}
