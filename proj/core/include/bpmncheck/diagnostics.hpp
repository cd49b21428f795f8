#ifndef BPMNCHECK_DIAGNOSTICS_HPP
#define BPMNCHECK_DIAGNOSTICS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace bpmncheck {

enum class Severity { Warning, Error };

struct Diagnostic {
    Severity severity = Severity::Warning;
    std::string node_id;  // offending element, empty if model-wide
    std::string message;
};

inline bool has_errors(const std::vector<Diagnostic>& diags) {
    for (const auto& d : diags)
        if (d.severity == Severity::Error) return true;
    return false;
}

// Thrown when the input text is not usable XML (also covers structurally
// broken BPMN such as missing mandatory ids).
class XmlMalformedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Thrown when an element outside the supported BPMN subset is encountered.
// Dropping such elements silently would change verification verdicts, so
// this is a hard error.
class UnsupportedElementError : public std::runtime_error {
public:
    UnsupportedElementError(const std::string& tag, const std::string& id)
        : std::runtime_error("unsupported BPMN element <" + tag + ">" +
                             (id.empty() ? "" : " (id=" + id + ")")),
          tag(tag),
          id(id) {}
    std::string tag;
    std::string id;
};

// Thrown when a flow references an element id that does not exist.
class DanglingReferenceError : public std::runtime_error {
public:
    explicit DanglingReferenceError(const std::string& id)
        : std::runtime_error("reference to unknown element id '" + id + "'"), id(id) {}
    std::string id;
};

class IllFormedRuleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace bpmncheck

#endif
