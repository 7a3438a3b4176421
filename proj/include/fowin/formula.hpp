#pragma once

// First-order formula AST (shared, immutable nodes), text grammar and the
// prenex view used by counting and compilation.

#include "fowin/error.hpp"
#include "fowin/sexpr.hpp"

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace fowin {

enum class Sort { element, number };

enum class Op { truth, falsity, atom, negation, conjunction, disjunction, exists, forall, count_bit };

struct Term {
    enum class Kind { variable, min, max };
    Kind kind = Kind::variable;
    std::string name;

    static Term var(std::string v) { return {Kind::variable, std::move(v)}; }
    static Term min() { return {Kind::min, {}}; }
    static Term max() { return {Kind::max, {}}; }
    bool is_var() const { return kind == Kind::variable; }
    friend bool operator==(const Term&, const Term&) = default;
    friend auto operator<=>(const Term&, const Term&) = default;
};

struct Node;
using Formula = std::shared_ptr<const Node>;

struct Node {
    Op op = Op::truth;
    std::string symbol;          // atom
    std::vector<Term> args;      // atom arguments, or the index tuple of a #-atom
    std::vector<Formula> kids;   // connective operands; quantifier body; #-atom sentence
    std::string var;             // bound variable of a quantifier
    Sort sort = Sort::element;   // sort of the bound variable
};

namespace f {

inline Formula make(Node n) { return std::make_shared<const Node>(std::move(n)); }

inline Formula truth() { return make({Op::truth}); }
inline Formula falsity() { return make({Op::falsity}); }

inline Formula atom(std::string symbol, std::vector<Term> args) {
    Node n{Op::atom};
    n.symbol = std::move(symbol);
    n.args = std::move(args);
    return make(std::move(n));
}

inline Formula atom(std::string symbol, std::initializer_list<std::string_view> vars) {
    std::vector<Term> args;
    for (auto v : vars) args.push_back(Term::var(std::string(v)));
    return atom(std::move(symbol), std::move(args));
}

inline Formula eq(Term a, Term b) { return atom("=", {std::move(a), std::move(b)}); }
inline Formula eq(std::string_view a, std::string_view b) { return atom("=", {a, b}); }
inline Formula le(std::string_view a, std::string_view b) { return atom("<=", {a, b}); }

inline Formula neg(Formula a) {
    if (a->op == Op::truth) return falsity();
    if (a->op == Op::falsity) return truth();
    Node n{Op::negation};
    n.kids = {std::move(a)};
    return make(std::move(n));
}

inline Formula junction(Op op, std::vector<Formula> xs) {
    if (xs.empty()) return op == Op::conjunction ? truth() : falsity();
    if (xs.size() == 1) return std::move(xs.front());
    Node n{op};
    n.kids = std::move(xs);
    return make(std::move(n));
}
inline Formula conj(std::vector<Formula> xs) { return junction(Op::conjunction, std::move(xs)); }
inline Formula disj(std::vector<Formula> xs) { return junction(Op::disjunction, std::move(xs)); }
inline Formula implies(Formula a, Formula b) { return disj({neg(std::move(a)), std::move(b)}); }

/// Strict order a < b spelled with <= and =.
inline Formula lt(Term a, Term b) { return conj({atom("<=", {a, b}), neg(eq(a, b))}); }
inline Formula lt(std::string_view a, std::string_view b) { return lt(Term::var(std::string(a)), Term::var(std::string(b))); }

inline Formula quant(Op op, std::string var, Formula body, Sort sort = Sort::element) {
    Node n{op};
    n.var = std::move(var);
    n.kids = {std::move(body)};
    n.sort = sort;
    return make(std::move(n));
}
inline Formula exists(std::string var, Formula body, Sort sort = Sort::element) {
    return quant(Op::exists, std::move(var), std::move(body), sort);
}
inline Formula forall(std::string var, Formula body, Sort sort = Sort::element) {
    return quant(Op::forall, std::move(var), std::move(body), sort);
}

inline Formula count_bit(Formula sentence, std::vector<Term> index) {
    Node n{Op::count_bit};
    n.kids = {std::move(sentence)};
    n.args = std::move(index);
    return make(std::move(n));
}

}  // namespace f

inline bool is_quantifier(Op op) { return op == Op::exists || op == Op::forall; }

inline bool is_quantifier_free(const Formula& phi) {
    if (is_quantifier(phi->op)) return false;
    if (phi->op == Op::count_bit) return true;  // the embedded sentence is closed
    for (const auto& k : phi->kids)
        if (!is_quantifier_free(k)) return false;
    return true;
}

namespace detail {
inline void collect_free(const Formula& phi, std::set<std::string>& bound, std::set<std::string>& out) {
    switch (phi->op) {
    case Op::atom:
    case Op::count_bit:
        for (const auto& t : phi->args)
            if (t.is_var() && !bound.count(t.name)) out.insert(t.name);
        return;
    case Op::exists:
    case Op::forall: {
        bool fresh = bound.insert(phi->var).second;
        collect_free(phi->kids[0], bound, out);
        if (fresh) bound.erase(phi->var);
        return;
    }
    default:
        for (const auto& k : phi->kids) collect_free(k, bound, out);
    }
}
inline void collect_names(const Formula& phi, std::set<std::string>& out) {
    for (const auto& t : phi->args)
        if (t.is_var()) out.insert(t.name);
    if (is_quantifier(phi->op)) out.insert(phi->var);
    if (phi->op == Op::count_bit) return;
    for (const auto& k : phi->kids) collect_names(k, out);
}
}  // namespace detail

inline std::set<std::string> free_variables(const Formula& phi) {
    std::set<std::string> bound, out;
    detail::collect_free(phi, bound, out);
    return out;
}

/// Every variable name occurring in phi, bound or free (embedded #-sentences excluded).
inline std::set<std::string> variable_names(const Formula& phi) {
    std::set<std::string> out;
    detail::collect_names(phi, out);
    return out;
}

/// Deterministic fresh names: base, then base_1, base_2, ... skipping names in use.
class NameSupply {
  public:
    NameSupply() = default;
    explicit NameSupply(std::set<std::string> used) : used_(std::move(used)) {}

    void reserve(const std::string& name) { used_.insert(name); }
    void reserve(const Formula& phi) {
        for (const auto& v : variable_names(phi)) used_.insert(v);
    }
    bool used(const std::string& name) const { return used_.count(name) > 0; }

    std::string fresh(const std::string& base) {
        std::string root = base;
        if (!used_.count(root)) {
            used_.insert(root);
            return root;
        }
        for (std::size_t k = counters_[base] + 1;; ++k) {
            std::string candidate = base + "_" + std::to_string(k);
            if (!used_.count(candidate)) {
                counters_[base] = k;
                used_.insert(candidate);
                return candidate;
            }
        }
    }

  private:
    std::set<std::string> used_;
    std::map<std::string, std::size_t> counters_;
};

/// Capture-avoiding substitution of free variables by terms.
inline Formula substitute(const Formula& phi, const std::map<std::string, Term>& sub, NameSupply& names) {
    switch (phi->op) {
    case Op::truth:
    case Op::falsity:
        return phi;
    case Op::atom:
    case Op::count_bit: {
        Node n = *phi;
        bool changed = false;
        for (auto& t : n.args)
            if (t.is_var())
                if (auto it = sub.find(t.name); it != sub.end()) {
                    t = it->second;
                    changed = true;
                }
        return changed ? f::make(std::move(n)) : phi;
    }
    case Op::exists:
    case Op::forall: {
        std::map<std::string, Term> inner = sub;
        inner.erase(phi->var);
        if (inner.empty()) return phi;
        bool captures = false;
        for (const auto& [from, to] : inner)
            if (to.is_var() && to.name == phi->var) captures = true;
        std::string var = phi->var;
        if (captures) {
            var = names.fresh(phi->var);
            inner[phi->var] = Term::var(var);
        }
        return f::quant(phi->op, var, substitute(phi->kids[0], inner, names), phi->sort);
    }
    default: {
        Node n = *phi;
        for (auto& k : n.kids) k = substitute(k, sub, names);
        return f::make(std::move(n));
    }
    }
}

inline Formula substitute(const Formula& phi, const std::map<std::string, Term>& sub) {
    NameSupply names;
    names.reserve(phi);
    for (const auto& [from, to] : sub)
        if (to.is_var()) names.reserve(to.name);
    return substitute(phi, sub, names);
}

// ---------------------------------------------------------------------------
// Prenex view

struct Quantifier {
    bool universal = false;
    std::string var;
    Sort sort = Sort::element;
    friend bool operator==(const Quantifier&, const Quantifier&) = default;
};

struct Prenex {
    std::vector<Quantifier> prefix;
    Formula matrix;
};

inline bool is_prenex(const Formula& phi) {
    const Node* n = phi.get();
    while (is_quantifier(n->op)) n = n->kids[0].get();
    for (const auto& k : n->kids)
        if (n->op != Op::count_bit && !is_quantifier_free(k)) return false;
    return true;
}

/// Splits a prenex formula; throws DomainError for non-prenex input.
inline Prenex as_prenex(const Formula& phi) {
    Prenex p;
    Formula cur = phi;
    while (is_quantifier(cur->op)) {
        p.prefix.push_back({cur->op == Op::forall, cur->var, cur->sort});
        cur = cur->kids[0];
    }
    if (!is_quantifier_free(cur)) throw DomainError("formula is not in prenex normal form");
    p.matrix = cur;
    return p;
}

inline Formula to_formula(const Prenex& p) {
    Formula out = p.matrix;
    for (std::size_t i = p.prefix.size(); i-- > 0;)
        out = f::quant(p.prefix[i].universal ? Op::forall : Op::exists, p.prefix[i].var, out, p.prefix[i].sort);
    return out;
}

/// Prenex sentence check used by the counting entry points.
inline Prenex as_prenex_sentence(const Formula& phi) {
    Prenex p = as_prenex(phi);
    std::set<std::string> seen;
    for (const auto& q : p.prefix)
        if (!seen.insert(q.var).second) throw DomainError("variable '" + q.var + "' is bound twice in the prefix");
    for (const auto& v : free_variables(phi)) throw DomainError("unbound variable '" + v + "'");
    return p;
}

// ---------------------------------------------------------------------------
// Text grammar:
//   (exists x F) (forall x F) (exists j :num F) (and F ...) (or F ...) (not F)
//   (true) (false) (S x) (<= x y) (= x y) (+ x y z) (* x y z) (bit x y) (R x ...)
//   (# <sentence> j1 j2 ...)   terms: identifiers, (min), (max)

inline std::string to_text(const Term& t) {
    switch (t.kind) {
    case Term::Kind::min: return "(min)";
    case Term::Kind::max: return "(max)";
    default: return t.name;
    }
}

inline std::string to_text(const Formula& phi) {
    switch (phi->op) {
    case Op::truth: return "(true)";
    case Op::falsity: return "(false)";
    case Op::atom:
    case Op::count_bit: {
        std::string s = "(" + (phi->op == Op::atom ? phi->symbol : "# " + to_text(phi->kids[0]));
        for (const auto& t : phi->args) s += " " + to_text(t);
        return s + ")";
    }
    case Op::negation: return "(not " + to_text(phi->kids[0]) + ")";
    case Op::conjunction:
    case Op::disjunction: {
        std::string s = phi->op == Op::conjunction ? "(and" : "(or";
        for (const auto& k : phi->kids) s += " " + to_text(k);
        return s + ")";
    }
    case Op::exists:
    case Op::forall:
        return std::string(phi->op == Op::exists ? "(exists " : "(forall ") + phi->var +
               (phi->sort == Sort::number ? " :num " : " ") + to_text(phi->kids[0]) + ")";
    }
    return {};
}

namespace detail {

inline bool is_identifier(const std::string& s) {
    if (s.empty() || s[0] == ':') return false;
    static const std::set<std::string> reserved{"exists", "forall", "and", "or", "not", "true", "false", "#", "min", "max"};
    return !reserved.count(s);
}

inline Term parse_term(const SExpr& e) {
    if (e.is_atom()) {
        if (!is_identifier(e.atom)) throw ParseError("expected a variable, got '" + e.atom + "'");
        return Term::var(e.atom);
    }
    if (e.size() == 1 && e.head() == "min") return Term::min();
    if (e.size() == 1 && e.head() == "max") return Term::max();
    throw ParseError("expected a term, got " + to_string(e));
}

inline Formula parse_formula(const SExpr& e) {
    if (!e.is_list() || e.size() == 0 || !e[0].is_atom()) throw ParseError("expected a formula, got " + to_string(e));
    const std::string& h = e[0].atom;
    auto expect = [&](bool ok) {
        if (!ok) throw ParseError("malformed '" + h + "' form: " + to_string(e));
    };
    if (h == "true" || h == "false") {
        expect(e.size() == 1);
        return h == "true" ? f::truth() : f::falsity();
    }
    if (h == "not") {
        expect(e.size() == 2);
        Node n{Op::negation};
        n.kids = {parse_formula(e[1])};
        return f::make(std::move(n));
    }
    if (h == "and" || h == "or") {
        expect(e.size() >= 2);
        Node n{h == "and" ? Op::conjunction : Op::disjunction};
        for (std::size_t i = 1; i < e.size(); ++i) n.kids.push_back(parse_formula(e[i]));
        return n.kids.size() == 1 ? n.kids[0] : f::make(std::move(n));
    }
    if (h == "exists" || h == "forall") {
        Op op = h == "exists" ? Op::exists : Op::forall;
        expect(e.size() == 3 || e.size() == 4);
        expect(e[1].is_atom() && is_identifier(e[1].atom));
        Sort sort = Sort::element;
        if (e.size() == 4) {
            expect(e[2].is_atom() && e[2].atom == ":num");
            sort = Sort::number;
        }
        return f::quant(op, e[1].atom, parse_formula(e[e.size() - 1]), sort);
    }
    if (h == "#") {
        expect(e.size() >= 2);
        std::vector<Term> idx;
        for (std::size_t i = 2; i < e.size(); ++i) idx.push_back(parse_term(e[i]));
        return f::count_bit(parse_formula(e[1]), std::move(idx));
    }
    if (h == "min" || h == "max") throw ParseError("term (" + h + ") used as a formula");
    std::vector<Term> args;
    for (std::size_t i = 1; i < e.size(); ++i) args.push_back(parse_term(e[i]));
    expect(!args.empty());
    return f::atom(h, std::move(args));
}

}  // namespace detail

inline Formula parse_formula(std::string_view text) { return detail::parse_formula(parse_sexpr(text)); }
inline Formula parse_formula(const SExpr& e) { return detail::parse_formula(e); }

/// Distinct atoms (including #-atoms) of a quantifier-free formula, in order of first occurrence.
inline std::vector<Formula> atoms_of(const Formula& phi) {
    std::vector<Formula> out;
    std::set<std::string> seen;
    auto walk = [&](auto&& self, const Formula& g) -> void {
        if (g->op == Op::atom || g->op == Op::count_bit) {
            if (seen.insert(to_text(g)).second) out.push_back(g);
            return;
        }
        for (const auto& k : g->kids) self(self, k);
    };
    walk(walk, phi);
    return out;
}

}  // namespace fowin
