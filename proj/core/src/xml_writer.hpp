#ifndef BPMNCHECK_XML_WRITER_HPP
#define BPMNCHECK_XML_WRITER_HPP

#include <cassert>
#include <sstream>
#include <string>
#include <vector>

namespace bpmncheck::detail {

inline std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

// Minimal deterministic XML emitter. Attributes appear in the order they
// are added; output is byte-stable across runs.
class XmlWriter {
public:
    XmlWriter() { buf_ << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n"; }

    XmlWriter& open(const std::string& tag) {
        close_pending();
        indent();
        buf_ << '<' << tag;
        open_tags_.push_back(tag);
        pending_ = true;
        return *this;
    }

    XmlWriter& attr(const std::string& name, const std::string& value) {
        assert(pending_);
        buf_ << ' ' << name << "=\"" << xml_escape(value) << '"';
        return *this;
    }

    // Closes the most recent element. Elements without children collapse to
    // the self-closing form.
    XmlWriter& close() {
        assert(!open_tags_.empty());
        std::string tag = open_tags_.back();
        open_tags_.pop_back();
        if (pending_) {
            buf_ << "/>\n";
            pending_ = false;
        } else {
            indent();
            buf_ << "</" << tag << ">\n";
        }
        return *this;
    }

    XmlWriter& text_element(const std::string& tag, const std::string& text) {
        close_pending();
        indent();
        buf_ << '<' << tag << '>' << xml_escape(text) << "</" << tag << ">\n";
        return *this;
    }

    std::string str() {
        assert(open_tags_.empty());
        return buf_.str();
    }

private:
    void close_pending() {
        if (pending_) {
            buf_ << ">\n";
            pending_ = false;
        }
    }
    void indent() {
        for (std::size_t i = 0; i < open_tags_.size(); ++i) buf_ << "  ";
    }

    std::ostringstream buf_;
    std::vector<std::string> open_tags_;
    bool pending_ = false;
};

}  // namespace bpmncheck::detail

#endif
