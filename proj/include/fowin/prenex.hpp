#pragma once

#include "fowin/formula.hpp"

#include <set>
#include <string>
#include <vector>

namespace fowin {

/// Negation normal form: negations only directly above atoms.
inline Formula nnf(const Formula& phi, bool negate = false) {
    switch (phi->op) {
    case Op::truth: return negate ? f::falsity() : phi;
    case Op::falsity: return negate ? f::truth() : phi;
    case Op::atom:
    case Op::count_bit: return negate ? f::neg(phi) : phi;
    case Op::negation: return nnf(phi->kids[0], !negate);
    case Op::conjunction:
    case Op::disjunction: {
        std::vector<Formula> kids;
        for (const auto& k : phi->kids) kids.push_back(nnf(k, negate));
        bool conj = (phi->op == Op::conjunction) != negate;
        return conj ? f::conj(std::move(kids)) : f::disj(std::move(kids));
    }
    case Op::exists:
    case Op::forall: {
        bool universal = (phi->op == Op::forall) != negate;
        return f::quant(universal ? Op::forall : Op::exists, phi->var, nnf(phi->kids[0], negate), phi->sort);
    }
    }
    return phi;
}

namespace detail {

class Prenexer {
  public:
    explicit Prenexer(const Formula& phi) : free_(free_variables(phi)) { names_.reserve(phi); }

    Prenex pull(const Formula& phi) {
        switch (phi->op) {
        case Op::negation: {
            if (is_quantifier_free(phi->kids[0])) return {{}, phi};
            Prenex inner = pull(phi->kids[0]);
            for (auto& q : inner.prefix) q.universal = !q.universal;
            inner.matrix = f::neg(inner.matrix);
            return inner;
        }
        case Op::conjunction:
        case Op::disjunction: {
            Prenex out;
            std::vector<Formula> parts;
            for (const auto& k : phi->kids) {
                Prenex p = pull(k);
                out.prefix.insert(out.prefix.end(), p.prefix.begin(), p.prefix.end());
                parts.push_back(p.matrix);
            }
            out.matrix = f::junction(phi->op, std::move(parts));
            return out;
        }
        case Op::exists:
        case Op::forall: {
            std::string var = phi->var;
            Formula body = phi->kids[0];
            if (bound_.count(var) || free_.count(var)) {
                var = names_.fresh(phi->var);
                body = substitute(body, {{phi->var, Term::var(var)}}, names_);
            }
            bound_.insert(var);
            Prenex inner = pull(body);
            inner.prefix.insert(inner.prefix.begin(), Quantifier{phi->op == Op::forall, var, phi->sort});
            return inner;
        }
        default:
            return {{}, phi};
        }
    }

  private:
    std::set<std::string> free_;
    std::set<std::string> bound_;
    NameSupply names_;
};

inline bool prefix_names_distinct(const Formula& phi) {
    std::set<std::string> seen;
    const Node* n = phi.get();
    while (is_quantifier(n->op)) {
        if (!seen.insert(n->var).second) return false;
        n = n->kids[0].get();
    }
    for (const auto& v : free_variables(phi))
        if (seen.count(v)) return false;
    return true;
}

}  // namespace detail

/// Logically equivalent prenex form (over nonempty universes). Prenex input is
/// returned unchanged; quantifiers keep their left-to-right order and clashing
/// bound variables are renamed x -> x_1, x_2, ...
inline Formula to_prenex(const Formula& phi) {
    if (is_prenex(phi) && detail::prefix_names_distinct(phi)) return phi;
    detail::Prenexer p(phi);
    return to_formula(p.pull(phi));
}

}  // namespace fowin
