#ifndef BPMNCHECK_CTL_HPP
#define BPMNCHECK_CTL_HPP

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "bpmncheck/explore.hpp"
#include "bpmncheck/properties.hpp"

namespace bpmncheck {

enum class CtlOp {
    True,
    False,
    Atom,
    Not,
    And,
    Or,
    Implies,
    EX,
    AX,
    EF,
    AF,
    EG,
    AG,
    EU,
    AU,
};

struct CtlFormula {
    CtlOp op = CtlOp::True;
    std::string atom;  // Atom only
    std::shared_ptr<const CtlFormula> lhs;
    std::shared_ptr<const CtlFormula> rhs;  // binary operators only
};

using CtlPtr = std::shared_ptr<const CtlFormula>;

class CtlSyntaxError : public std::runtime_error {
public:
    CtlSyntaxError(const std::string& message, std::size_t position)
        : std::runtime_error(message + " (at position " + std::to_string(position) + ")"),
          position(position) {}
    std::size_t position;
};

class UnknownAtomError : public std::runtime_error {
public:
    explicit UnknownAtomError(const std::string& name)
        : std::runtime_error("unknown atomic proposition '" + name + "'"), name(name) {}
    std::string name;
};

// Grammar:
//   phi ::= true | false | IDENT | !phi | phi & phi | phi | phi | phi -> phi
//         | AX phi | EX phi | AF phi | EF phi | AG phi | EG phi
//         | A[phi U phi] | E[phi U phi] | (phi)
// Precedence: ! > & > | > ->; temporal operators bind their immediate
// operand; -> is right-associative. true/false/U and the operator names are
// reserved words, not atoms.
CtlPtr parse_ctl(const std::string& text);

std::string to_string(const CtlFormula& formula);

struct CtlResult {
    bool holds = false;          // at the initial state
    std::vector<bool> sat;       // satisfaction set by state index
    std::vector<std::string> witness;  // refuted top-level AG/AF only
    std::string witness_note;
};

// Standard CTL fixpoint evaluation over the totalized LTS (deadlock states
// get an implicit self-loop). Throws UnknownAtomError for atoms outside the
// labeling.
CtlResult check_ctl(const Lts& lts, const Labeling& labeling, const CtlFormula& formula);

}  // namespace bpmncheck

#endif
