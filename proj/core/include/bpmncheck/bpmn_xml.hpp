#ifndef BPMNCHECK_BPMN_XML_HPP
#define BPMNCHECK_BPMN_XML_HPP

#include <string>

#include "bpmncheck/model.hpp"

namespace bpmncheck {

// Parses a BPMN 2.0 interchange document into the supported model subset.
//
// Namespace prefixes are ignored; elements are matched by local name.
// Inline <subProcess> elements are normalized into a synthetic process plus
// a call-activity node, so the rest of the toolchain sees one uniform call
// mechanism. Elements outside the supported set are hard errors.
//
// Throws XmlMalformedError, UnsupportedElementError, DanglingReferenceError.
BpmnModel parse_bpmn(const std::string& xml_text);

// Reads a .bpmn file from disk. Throws IoError on top of the parse errors.
BpmnModel load_bpmn_file(const std::string& path);

// Emits the model as a BPMN 2.0 interchange document. parse_bpmn of the
// result is structurally equal to the input model.
std::string serialize_bpmn(const BpmnModel& model);

}  // namespace bpmncheck

#endif
