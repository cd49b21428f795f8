#include "bpmncheck/ctl.hpp"

#include <algorithm>
#include <cctype>
#include <deque>

namespace bpmncheck {

namespace {

CtlPtr make(CtlOp op, CtlPtr lhs = nullptr, CtlPtr rhs = nullptr) {
    auto f = std::make_shared<CtlFormula>();
    f->op = op;
    f->lhs = std::move(lhs);
    f->rhs = std::move(rhs);
    return f;
}

CtlPtr make_atom(std::string name) {
    auto f = std::make_shared<CtlFormula>();
    f->op = CtlOp::Atom;
    f->atom = std::move(name);
    return f;
}

struct Token {
    enum Kind { Ident, Bang, Amp, Pipe, Arrow, LParen, RParen, LBracket, RBracket, End } kind;
    std::string text;
    std::size_t pos;
};

std::vector<Token> lex(const std::string& text) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        std::size_t pos = i;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
                ++j;
            tokens.push_back({Token::Ident, text.substr(i, j - i), pos});
            i = j;
        } else if (c == '!') {
            tokens.push_back({Token::Bang, "!", pos});
            ++i;
        } else if (c == '&') {
            tokens.push_back({Token::Amp, "&", pos});
            ++i;
        } else if (c == '|') {
            tokens.push_back({Token::Pipe, "|", pos});
            ++i;
        } else if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
            tokens.push_back({Token::Arrow, "->", pos});
            i += 2;
        } else if (c == '(') {
            tokens.push_back({Token::LParen, "(", pos});
            ++i;
        } else if (c == ')') {
            tokens.push_back({Token::RParen, ")", pos});
            ++i;
        } else if (c == '[') {
            tokens.push_back({Token::LBracket, "[", pos});
            ++i;
        } else if (c == ']') {
            tokens.push_back({Token::RBracket, "]", pos});
            ++i;
        } else {
            throw CtlSyntaxError(std::string("unexpected character '") + c + "'", pos);
        }
    }
    tokens.push_back({Token::End, "", text.size()});
    return tokens;
}

class CtlParser {
public:
    explicit CtlParser(const std::string& text) : tokens_(lex(text)) {}

    CtlPtr parse() {
        CtlPtr f = parse_implies();
        if (peek().kind != Token::End)
            throw CtlSyntaxError("unexpected trailing input '" + peek().text + "'", peek().pos);
        return f;
    }

private:
    const Token& peek() const { return tokens_[pos_]; }
    Token advance() { return tokens_[pos_++]; }

    void expect(Token::Kind kind, const char* what) {
        if (peek().kind != kind) throw CtlSyntaxError(std::string("expected ") + what, peek().pos);
        ++pos_;
    }

    CtlPtr parse_implies() {
        CtlPtr lhs = parse_or();
        if (peek().kind == Token::Arrow) {
            advance();
            return make(CtlOp::Implies, lhs, parse_implies());
        }
        return lhs;
    }

    CtlPtr parse_or() {
        CtlPtr lhs = parse_and();
        while (peek().kind == Token::Pipe) {
            advance();
            lhs = make(CtlOp::Or, lhs, parse_and());
        }
        return lhs;
    }

    CtlPtr parse_and() {
        CtlPtr lhs = parse_unary();
        while (peek().kind == Token::Amp) {
            advance();
            lhs = make(CtlOp::And, lhs, parse_unary());
        }
        return lhs;
    }

    CtlPtr parse_unary() {
        const Token& tok = peek();
        if (tok.kind == Token::Bang) {
            advance();
            return make(CtlOp::Not, parse_unary());
        }
        if (tok.kind == Token::Ident) {
            const std::string& w = tok.text;
            if (w == "AX" || w == "EX" || w == "AF" || w == "EF" || w == "AG" || w == "EG") {
                advance();
                CtlOp op = w == "AX"   ? CtlOp::AX
                           : w == "EX" ? CtlOp::EX
                           : w == "AF" ? CtlOp::AF
                           : w == "EF" ? CtlOp::EF
                           : w == "AG" ? CtlOp::AG
                                       : CtlOp::EG;
                return make(op, parse_unary());
            }
            if ((w == "A" || w == "E") && tokens_[pos_ + 1].kind == Token::LBracket) {
                advance();
                expect(Token::LBracket, "'['");
                CtlPtr lhs = parse_implies();
                const Token& u = peek();
                if (u.kind != Token::Ident || u.text != "U")
                    throw CtlSyntaxError("expected 'U'", u.pos);
                advance();
                CtlPtr rhs = parse_implies();
                expect(Token::RBracket, "']'");
                return make(w == "A" ? CtlOp::AU : CtlOp::EU, lhs, rhs);
            }
        }
        return parse_primary();
    }

    CtlPtr parse_primary() {
        const Token& tok = peek();
        if (tok.kind == Token::LParen) {
            advance();
            CtlPtr f = parse_implies();
            expect(Token::RParen, "')'");
            return f;
        }
        if (tok.kind == Token::Ident) {
            if (tok.text == "true") {
                advance();
                return make(CtlOp::True);
            }
            if (tok.text == "false") {
                advance();
                return make(CtlOp::False);
            }
            if (tok.text == "U")
                throw CtlSyntaxError("'U' is reserved", tok.pos);
            Token t = advance();
            return make_atom(std::move(t.text));
        }
        throw CtlSyntaxError("expected a formula", tok.pos);
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

}  // namespace

CtlPtr parse_ctl(const std::string& text) {
    return CtlParser(text).parse();
}

namespace {

std::string wrap(const CtlFormula& f) {
    std::string s = to_string(f);
    if (f.op == CtlOp::Atom || f.op == CtlOp::True || f.op == CtlOp::False || f.op == CtlOp::Not)
        return s;
    return "(" + s + ")";
}

}  // namespace

std::string to_string(const CtlFormula& f) {
    switch (f.op) {
        case CtlOp::True: return "true";
        case CtlOp::False: return "false";
        case CtlOp::Atom: return f.atom;
        case CtlOp::Not: return "!" + wrap(*f.lhs);
        case CtlOp::And: return wrap(*f.lhs) + " & " + wrap(*f.rhs);
        case CtlOp::Or: return wrap(*f.lhs) + " | " + wrap(*f.rhs);
        case CtlOp::Implies: return wrap(*f.lhs) + " -> " + wrap(*f.rhs);
        case CtlOp::EX: return "EX " + wrap(*f.lhs);
        case CtlOp::AX: return "AX " + wrap(*f.lhs);
        case CtlOp::EF: return "EF " + wrap(*f.lhs);
        case CtlOp::AF: return "AF " + wrap(*f.lhs);
        case CtlOp::EG: return "EG " + wrap(*f.lhs);
        case CtlOp::AG: return "AG " + wrap(*f.lhs);
        case CtlOp::EU: return "E[" + to_string(*f.lhs) + " U " + to_string(*f.rhs) + "]";
        case CtlOp::AU: return "A[" + to_string(*f.lhs) + " U " + to_string(*f.rhs) + "]";
    }
    return "?";
}

namespace {

// Totalized successor view: deadlock states loop on themselves.
struct Graph {
    std::vector<std::vector<std::uint32_t>> succ;
    std::vector<std::vector<std::uint32_t>> pred;

    explicit Graph(const Lts& lts) : succ(lts.states.size()), pred(lts.states.size()) {
        for (const auto& t : lts.transitions) succ[t.source].push_back(t.target);
        for (auto& v : succ) {
            std::sort(v.begin(), v.end());
            v.erase(std::unique(v.begin(), v.end()), v.end());
        }
        for (std::uint32_t s = 0; s < succ.size(); ++s) {
            if (succ[s].empty()) succ[s].push_back(s);  // totalization
            for (auto t : succ[s]) pred[t].push_back(s);
        }
    }
};

using Sat = std::vector<bool>;

// Least fixpoint of "in target set or has a successor in X" restricted to
// `restrict_to` (EU semantics; EF with restrict_to = all-true).
Sat backward_lfp(const Graph& g, const Sat& target, const Sat& restrict_to) {
    Sat sat(target);
    std::deque<std::uint32_t> queue;
    for (std::uint32_t s = 0; s < sat.size(); ++s)
        if (sat[s]) queue.push_back(s);
    while (!queue.empty()) {
        std::uint32_t cur = queue.front();
        queue.pop_front();
        for (auto p : g.pred[cur]) {
            if (!sat[p] && restrict_to[p]) {
                sat[p] = true;
                queue.push_back(p);
            }
        }
    }
    return sat;
}

// Least fixpoint for AU: in target set, or in `restrict_to` with all
// successors already in X (successor-counting).
Sat all_paths_lfp(const Graph& g, const Sat& target, const Sat& restrict_to) {
    Sat sat(target);
    std::vector<std::size_t> remaining(g.succ.size());
    for (std::uint32_t s = 0; s < g.succ.size(); ++s) remaining[s] = g.succ[s].size();
    std::deque<std::uint32_t> queue;
    for (std::uint32_t s = 0; s < sat.size(); ++s)
        if (sat[s]) queue.push_back(s);
    while (!queue.empty()) {
        std::uint32_t cur = queue.front();
        queue.pop_front();
        for (auto p : g.pred[cur]) {
            if (sat[p]) continue;
            if (--remaining[p] == 0 && restrict_to[p]) {
                sat[p] = true;
                queue.push_back(p);
            }
        }
    }
    return sat;
}

// Greatest fixpoint of "in base and some successor in X" (EG).
Sat exists_gfp(const Graph& g, const Sat& base) {
    Sat sat(base);
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::uint32_t s = 0; s < sat.size(); ++s) {
            if (!sat[s]) continue;
            bool any = false;
            for (auto t : g.succ[s])
                if (sat[t]) any = true;
            if (!any) {
                sat[s] = false;
                changed = true;
            }
        }
    }
    return sat;
}

// Greatest fixpoint of "in base and all successors in X" (AG).
Sat all_gfp(const Graph& g, const Sat& base) {
    Sat sat(base);
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::uint32_t s = 0; s < sat.size(); ++s) {
            if (!sat[s]) continue;
            bool all = true;
            for (auto t : g.succ[s])
                if (!sat[t]) all = false;
            if (!all) {
                sat[s] = false;
                changed = true;
            }
        }
    }
    return sat;
}

Sat evaluate(const CtlFormula& f, const Graph& g, const Lts& lts, const Labeling& labeling) {
    const std::size_t n = lts.states.size();
    switch (f.op) {
        case CtlOp::True: return Sat(n, true);
        case CtlOp::False: return Sat(n, false);
        case CtlOp::Atom: {
            if (!labeling.names.count(f.atom)) throw UnknownAtomError(f.atom);
            Sat sat(n, false);
            for (std::size_t s = 0; s < n; ++s) sat[s] = labeling.has(s, f.atom);
            return sat;
        }
        case CtlOp::Not: {
            Sat sat = evaluate(*f.lhs, g, lts, labeling);
            sat.flip();
            return sat;
        }
        case CtlOp::And: {
            Sat a = evaluate(*f.lhs, g, lts, labeling);
            Sat b = evaluate(*f.rhs, g, lts, labeling);
            for (std::size_t s = 0; s < n; ++s) a[s] = a[s] && b[s];
            return a;
        }
        case CtlOp::Or: {
            Sat a = evaluate(*f.lhs, g, lts, labeling);
            Sat b = evaluate(*f.rhs, g, lts, labeling);
            for (std::size_t s = 0; s < n; ++s) a[s] = a[s] || b[s];
            return a;
        }
        case CtlOp::Implies: {
            Sat a = evaluate(*f.lhs, g, lts, labeling);
            Sat b = evaluate(*f.rhs, g, lts, labeling);
            for (std::size_t s = 0; s < n; ++s) a[s] = !a[s] || b[s];
            return a;
        }
        case CtlOp::EX: {
            Sat inner = evaluate(*f.lhs, g, lts, labeling);
            Sat sat(n, false);
            for (std::uint32_t s = 0; s < n; ++s)
                for (auto t : g.succ[s])
                    if (inner[t]) sat[s] = true;
            return sat;
        }
        case CtlOp::AX: {
            Sat inner = evaluate(*f.lhs, g, lts, labeling);
            Sat sat(n, true);
            for (std::uint32_t s = 0; s < n; ++s)
                for (auto t : g.succ[s])
                    if (!inner[t]) sat[s] = false;
            return sat;
        }
        case CtlOp::EF:
            return backward_lfp(g, evaluate(*f.lhs, g, lts, labeling), Sat(n, true));
        case CtlOp::AF:
            return all_paths_lfp(g, evaluate(*f.lhs, g, lts, labeling), Sat(n, true));
        case CtlOp::EU:
            return backward_lfp(g, evaluate(*f.rhs, g, lts, labeling),
                                evaluate(*f.lhs, g, lts, labeling));
        case CtlOp::AU:
            return all_paths_lfp(g, evaluate(*f.rhs, g, lts, labeling),
                                 evaluate(*f.lhs, g, lts, labeling));
        case CtlOp::EG:
            return exists_gfp(g, evaluate(*f.lhs, g, lts, labeling));
        case CtlOp::AG:
            return all_gfp(g, evaluate(*f.lhs, g, lts, labeling));
    }
    return Sat(n, false);
}

}  // namespace

CtlResult check_ctl(const Lts& lts, const Labeling& labeling, const CtlFormula& formula) {
    CtlResult result;
    if (lts.states.empty()) {
        result.holds = true;
        return result;
    }
    Graph g(lts);
    result.sat = evaluate(formula, g, lts, labeling);
    result.holds = result.sat[0];
    if (result.holds) return result;

    // Witnesses for the two report-friendly refutations: a finite path for
    // AG, a lasso for AF.
    if (formula.op == CtlOp::AG) {
        Sat inner = evaluate(*formula.lhs, g, lts, labeling);
        std::vector<std::int64_t> prev_state(lts.states.size(), -1);
        std::vector<std::uint32_t> prev_rule(lts.states.size(), 0);
        std::vector<bool> seen(lts.states.size(), false);
        std::deque<std::uint32_t> queue{0};
        seen[0] = true;
        while (!queue.empty()) {
            std::uint32_t cur = queue.front();
            queue.pop_front();
            if (!inner[cur]) {
                for (std::uint32_t s = cur; prev_state[s] >= 0;
                     s = static_cast<std::uint32_t>(prev_state[s]))
                    result.witness.push_back(lts.rule_names[prev_rule[s]]);
                std::reverse(result.witness.begin(), result.witness.end());
                result.witness_note = "path to a violating state";
                break;
            }
            for (const auto& t : lts.transitions) {
                if (t.source != cur || seen[t.target]) continue;
                seen[t.target] = true;
                prev_state[t.target] = cur;
                prev_rule[t.target] = t.rule;
                queue.push_back(t.target);
            }
        }
    } else if (formula.op == CtlOp::AF) {
        Sat inner = evaluate(*formula.lhs, g, lts, labeling);
        inner.flip();
        Sat lasso_set = exists_gfp(g, inner);
        if (!lasso_set.empty() && lasso_set[0]) {
            // Walk inside the set until a state repeats; labels need the
            // concrete transition, so pick the first matching one.
            std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> out(
                lts.states.size());
            for (const auto& t : lts.transitions) out[t.source].push_back({t.rule, t.target});
            std::vector<std::int64_t> visited_at(lts.states.size(), -1);
            std::uint32_t cur = 0;
            while (visited_at[cur] < 0) {
                visited_at[cur] = static_cast<std::int64_t>(result.witness.size());
                bool stepped = false;
                for (const auto& [rule, tgt] : out[cur]) {
                    if (lasso_set[tgt]) {
                        result.witness.push_back(lts.rule_names[rule]);
                        cur = tgt;
                        stepped = true;
                        break;
                    }
                }
                if (!stepped) {  // deadlock: implicit self-loop closes the lasso
                    result.witness_note = "ends in a deadlock state";
                    return result;
                }
            }
            result.witness_note =
                "lasso: loops back to step " + std::to_string(visited_at[cur] + 1);
        }
    }
    return result;
}

}  // namespace bpmncheck
