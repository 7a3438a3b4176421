#pragma once

// First-order interpretations: application to structures, count-preserving
// substitution into prenex sentences, composition, and reductions.

#include "fowin/counting.hpp"
#include "fowin/eval.hpp"
#include "fowin/formula.hpp"
#include "fowin/prenex.hpp"
#include "fowin/sexpr.hpp"
#include "fowin/structure.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace fowin {

struct RelationDefinition {
    std::string symbol;
    std::vector<std::string> vars;  // width * arity variables, one block per argument
    Formula formula;
};

/// Target elements are width-tuples of source elements satisfying `universe`;
/// each target relation is defined by a formula over argument blocks.
struct FOInterpretation {
    std::size_t width = 1;
    std::vector<std::string> universe_vars;
    Formula universe;
    std::vector<RelationDefinition> relations;
    bool witnesses_unique = false;

    const RelationDefinition* find(std::string_view symbol) const {
        for (const auto& r : relations)
            if (r.symbol == symbol) return &r;
        return nullptr;
    }

    Vocabulary target_vocabulary() const {
        Vocabulary v;
        for (const auto& r : relations) v.add(r.symbol, r.vars.size() / width);
        return v;
    }

    /// Throws DomainError unless widths, arities and free variables are consistent.
    void check() const {
        if (width == 0) throw DomainError("interpretation width must be positive");
        if (universe_vars.size() != width) throw DomainError("universe formula needs exactly width variables");
        auto check_free = [](const Formula& phi, const std::vector<std::string>& vars, const std::string& what) {
            std::set<std::string> declared(vars.begin(), vars.end());
            if (declared.size() != vars.size()) throw DomainError(what + ": repeated variable");
            for (const auto& v : free_variables(phi))
                if (!declared.count(v)) throw DomainError(what + ": free variable '" + v + "' is not declared");
        };
        check_free(universe, universe_vars, "universe");
        std::set<std::string> seen;
        for (const auto& r : relations) {
            if (!seen.insert(r.symbol).second) throw DomainError("relation " + r.symbol + " defined twice");
            if (r.symbol == "=") throw DomainError("equality cannot be redefined");
            if (r.vars.empty() || r.vars.size() % width != 0)
                throw DomainError("relation " + r.symbol + ": variable count is not a positive multiple of the width");
            check_free(r.formula, r.vars, "relation " + r.symbol);
        }
    }
};

/// Width-1 interpretation copying the listed symbols unchanged.
inline FOInterpretation identity_interpretation(const Vocabulary& v) {
    FOInterpretation I;
    I.universe_vars = {"x"};
    I.universe = f::truth();
    for (const auto& s : v.symbols()) {
        RelationDefinition d{s.name, {}, nullptr};
        std::vector<Term> args;
        for (std::size_t i = 0; i < s.arity; ++i) {
            d.vars.push_back("x" + std::to_string(i));
            args.push_back(Term::var(d.vars.back()));
        }
        d.formula = f::atom(s.name, args);
        I.relations.push_back(std::move(d));
    }
    return I;
}

// Text format:
//   (interpretation (width 2)
//     (universe (x1 x2) F)
//     (relation S (x1 x2) F)
//     (relation <= (x1 x2 y1 y2) F))

inline FOInterpretation read_interpretation(const SExpr& e) {
    if (e.head() != "interpretation") throw ParseError("expected (interpretation ...)");
    FOInterpretation I;
    bool have_universe = false;
    auto vars_of = [](const SExpr& list) {
        if (!list.is_list()) throw ParseError("expected a variable list");
        std::vector<std::string> out;
        for (const auto& v : list.items) {
            if (!v.is_atom() || !detail::is_identifier(v.atom)) throw ParseError("bad variable in list: " + to_string(v));
            out.push_back(v.atom);
        }
        return out;
    };
    for (std::size_t i = 1; i < e.size(); ++i) {
        const SExpr& item = e[i];
        if (item.head() == "width" && item.size() == 2) {
            I.width = parse_size(item[1], "width");
        } else if (item.head() == "universe" && item.size() == 3) {
            I.universe_vars = vars_of(item[1]);
            I.universe = parse_formula(item[2]);
            have_universe = true;
        } else if (item.head() == "relation" && item.size() == 4 && item[1].is_atom()) {
            I.relations.push_back({item[1].atom, vars_of(item[2]), parse_formula(item[3])});
        } else {
            throw ParseError("unexpected interpretation item: " + to_string(item));
        }
    }
    if (!have_universe) throw ParseError("interpretation lacks a universe formula");
    try {
        I.check();
    } catch (const DomainError& err) {
        throw ParseError(err.what());
    }
    return I;
}

inline FOInterpretation read_interpretation(std::string_view text) { return read_interpretation(parse_sexpr(text)); }

inline std::string write_interpretation(const FOInterpretation& I) {
    auto list = [](const std::vector<std::string>& vs) {
        std::string s = "(";
        for (std::size_t i = 0; i < vs.size(); ++i) s += (i ? " " : "") + vs[i];
        return s + ")";
    };
    std::string out = "(interpretation (width " + std::to_string(I.width) + ")\n  (universe " +
                      list(I.universe_vars) + " " + to_text(I.universe) + ")";
    for (const auto& r : I.relations) out += "\n  (relation " + r.symbol + " " + list(r.vars) + " " + to_text(r.formula) + ")";
    return out + ")\n";
}

struct InterpretedStructure {
    Structure structure;
    std::vector<Tuple> elements;  // element i of the result is elements[i] in the source
};

/// I(A): universe renumbered in lexicographic tuple order.
inline InterpretedStructure apply_interpretation(const FOInterpretation& I, const Structure& a,
                                                 const InterpretationFamily& aux = {}) {
    I.check();
    std::size_t n = a.universe_size();
    std::optional<Structure> aux_structure;
    if (!aux.empty()) aux_structure = aux.at(n);
    Model model(a, aux_structure ? &*aux_structure : nullptr);

    InterpretedStructure out;
    CompiledFormula uni(I.universe, model, I.universe_vars);
    Tuple t(I.width, 0);
    std::size_t total = 1;
    for (std::size_t i = 0; i < I.width; ++i) total *= n;
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rest = idx;
        for (std::size_t i = I.width; i-- > 0;) {
            t[i] = rest % n;
            rest /= n;
        }
        if (uni.eval(t)) out.elements.push_back(t);
    }
    if (out.elements.empty()) throw DomainError("interpretation defines an empty universe");

    std::size_t m = out.elements.size();
    out.structure = Structure(I.target_vocabulary(), m);
    for (const auto& def : I.relations) {
        std::size_t arity = def.vars.size() / I.width;
        CompiledFormula phi(def.formula, model, def.vars);
        Tuple target(arity, 0), source(def.vars.size());
        std::size_t cells = 1;
        for (std::size_t i = 0; i < arity; ++i) cells *= m;
        for (std::size_t idx = 0; idx < cells; ++idx) {
            std::size_t rest = idx;
            for (std::size_t i = arity; i-- > 0;) {
                target[i] = rest % m;
                rest /= m;
            }
            for (std::size_t i = 0; i < arity; ++i)
                std::copy(out.elements[target[i]].begin(), out.elements[target[i]].end(),
                          source.begin() + static_cast<long>(i * I.width));
            if (phi.eval(source)) out.structure.insert(def.symbol, target);
        }
    }
    return out;
}

/// Rewrites every existential body to admit only its least witness (w.r.t. <=);
/// the result is in negation normal form and equivalent to phi.
inline Formula make_witnesses_unique(const Formula& phi) {
    if (is_quantifier_free(phi)) return phi;
    NameSupply names;
    names.reserve(phi);
    auto go = [&](auto&& self, const Formula& g) -> Formula {
        switch (g->op) {
        case Op::exists: {
            Formula body = g->kids[0];
            std::string z = g->var;
            std::string z2 = names.fresh(z);
            Formula other = nnf(substitute(body, {{z, Term::var(z2)}}, names), true);
            Formula least = f::forall(z2, f::disj({f::neg(f::le(z2, z)), f::eq(z2, z), other}));
            return f::exists(z, f::conj({self(self, body), self(self, least)}));
        }
        case Op::forall: return f::forall(g->var, self(self, g->kids[0]), g->sort);
        case Op::conjunction:
        case Op::disjunction: {
            std::vector<Formula> kids;
            for (const auto& k : g->kids) kids.push_back(self(self, k));
            return f::make(Node{g->op, {}, {}, std::move(kids), {}, Sort::element});
        }
        default: return g;
        }
    };
    return go(go, nnf(phi));
}

inline FOInterpretation preprocess(FOInterpretation I) {
    I.universe = make_witnesses_unique(I.universe);
    for (auto& r : I.relations) r.formula = make_witnesses_unique(r.formula);
    I.witnesses_unique = true;
    return I;
}

/// Lexicographic order on blocks using the source order.
inline Formula lexicographic_le(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    // a <= b iff a = b, or at the first difference a_i < b_i.
    std::vector<Formula> options;
    std::vector<Formula> same;
    for (std::size_t i = 0; i < a.size(); ++i) {
        std::vector<Formula> here = same;
        here.push_back(f::lt(a[i], b[i]));
        options.push_back(here.size() == 1 ? here[0] : f::conj(here));
        same.push_back(f::eq(a[i], b[i]));
    }
    options.push_back(same.size() == 1 ? same[0] : f::conj(same));
    return f::disj(options);
}

namespace detail {

/// Strategy-count-exact prenexing of a formula in a context of free variables.
/// hat(chi) = (P, q, d): for every assignment of chi's free variables, the game
/// P (q and d) has exactly one winning strategy if chi holds and none otherwise;
/// d pins every existential of P to a unique value.
struct Hat {
    std::vector<Quantifier> prefix;
    Formula qf;
    Formula defs;
};

class Hatter {
  public:
    explicit Hatter(NameSupply& names) : names_(names) {}

    Hat operator()(const Formula& chi) {
        switch (chi->op) {
        case Op::truth:
        case Op::falsity:
        case Op::atom: return {{}, chi, f::truth()};
        case Op::count_bit: throw DomainError("#-atoms cannot be prenexed");
        case Op::negation: {
            Hat h = (*this)(chi->kids[0]);
            h.qf = f::neg(h.qf);
            return h;
        }
        case Op::conjunction:
        case Op::disjunction: {
            Hat out{{}, nullptr, nullptr};
            std::vector<Formula> qfs, defs;
            for (const auto& k : chi->kids) {
                Hat h = (*this)(k);
                out.prefix.insert(out.prefix.end(), h.prefix.begin(), h.prefix.end());
                qfs.push_back(h.qf);
                defs.push_back(h.defs);
            }
            out.qf = f::make(Node{chi->op, {}, {}, std::move(qfs), {}, Sort::element});
            out.defs = simplify_conj(std::move(defs));
            return out;
        }
        case Op::exists:
        case Op::forall: {
            // Pinned values depend only on the free variables, so repeated
            // subformulas reuse the first occurrence's witnesses.
            std::string key = to_text(chi);
            if (auto it = shared_.find(key); it != shared_.end()) return {{}, it->second, f::truth()};
            bool universal = chi->op == Op::forall;
            const std::string& z = chi->var;
            std::string w = names_.fresh(z);
            std::string u = names_.fresh(z);
            Hat h1 = (*this)(substitute(chi->kids[0], {{z, Term::var(w)}}, names_));
            Hat h2 = (*this)(substitute(chi->kids[0], {{z, Term::var(u)}}, names_));
            // w is the least element satisfying P, or the maximum if there is none,
            // where P is the body for exists and its negation for forall.
            Formula pw = universal ? f::neg(h1.qf) : h1.qf;
            Formula pu = universal ? f::neg(h2.qf) : h2.qf;
            Formula below_not = f::disj({f::neg(f::le(u, w)), f::eq(u, w), f::neg(pu)});
            Formula none_means_max = f::disj({pw, f::le(u, w)});
            Hat out;
            out.prefix.push_back({false, w, Sort::element});
            out.prefix.insert(out.prefix.end(), h1.prefix.begin(), h1.prefix.end());
            out.prefix.push_back({true, u, Sort::element});
            out.prefix.insert(out.prefix.end(), h2.prefix.begin(), h2.prefix.end());
            out.qf = h1.qf;
            out.defs = simplify_conj({h1.defs, below_not, none_means_max, h2.defs});
            shared_.emplace(std::move(key), out.qf);
            return out;
        }
        }
        throw DomainError("unexpected formula node");
    }

  private:
    static Formula simplify_conj(std::vector<Formula> xs) {
        std::vector<Formula> keep;
        for (auto& x : xs)
            if (x->op != Op::truth) keep.push_back(std::move(x));
        if (keep.empty()) return f::truth();
        if (keep.size() == 1) return keep[0];
        return f::conj(std::move(keep));
    }

    NameSupply& names_;
    std::map<std::string, Formula> shared_;
};

inline std::vector<Term> block(const std::vector<std::string>& vars) {
    std::vector<Term> out;
    for (const auto& v : vars) out.push_back(Term::var(v));
    return out;
}

/// Replaces every atom of a target-vocabulary formula by its definition over blocks.
/// `lookup` maps a target variable to its block; `quantify` is called for bound variables.
struct AtomReplacer {
    const FOInterpretation& I;
    NameSupply& names;
    /// When set, (min)/(max) map to these shared blocks instead of local quantifiers.
    std::map<bool, std::vector<std::string>>* hoisted = nullptr;

    /// uni(b) and every defined tuple is <= b (is_max) or >= b.
    Formula extreme(const std::vector<std::string>& b, bool is_max) {
        std::vector<std::string> z = fresh_block("other");
        Formula order = is_max ? lexicographic_le(z, b) : lexicographic_le(b, z);
        Formula bound = f::disj({f::neg(universe_of(z)), order});
        for (std::size_t j = z.size(); j-- > 0;) bound = f::forall(z[j], bound);
        return f::conj({universe_of(b), bound});
    }

    Formula instantiate(const Formula& def, const std::vector<std::string>& def_vars,
                        const std::vector<std::vector<std::string>>& blocks) {
        std::map<std::string, Term> sub;
        std::size_t k = 0;
        for (const auto& b : blocks)
            for (const auto& v : b) sub[def_vars[k++]] = Term::var(v);
        return substitute(def, sub, names);
    }

    Formula equal_blocks(const std::vector<std::string>& a, const std::vector<std::string>& b) {
        std::vector<Formula> parts;
        for (std::size_t i = 0; i < a.size(); ++i) parts.push_back(f::eq(a[i], b[i]));
        return parts.size() == 1 ? parts[0] : f::conj(std::move(parts));
    }

    Formula universe_of(const std::vector<std::string>& b) { return instantiate(I.universe, I.universe_vars, {b}); }

    Formula atom(const Formula& a, const std::map<std::string, std::vector<std::string>>& blocks,
                 const std::function<Formula(const std::string&, const std::vector<std::string>&)>& fallback) {
        std::vector<std::vector<std::string>> args;
        std::vector<std::pair<std::vector<std::string>, bool>> extremes;  // block, is_max
        for (const auto& t : a->args) {
            if (!t.is_var() && hoisted) {
                bool is_max = t.kind == Term::Kind::max;
                auto it = hoisted->find(is_max);
                if (it == hoisted->end()) it = hoisted->emplace(is_max, fresh_block(is_max ? "top" : "bottom")).first;
                args.push_back(it->second);
                continue;
            }
            if (!t.is_var()) {
                extremes.push_back({fresh_block(t.kind == Term::Kind::max ? "top" : "bottom"), t.kind == Term::Kind::max});
                args.push_back(extremes.back().first);
                continue;
            }
            auto it = blocks.find(t.name);
            if (it == blocks.end()) throw DomainError("unbound variable '" + t.name + "'");
            args.push_back(it->second);
        }
        Formula core;
        if (a->symbol == "=") {
            core = equal_blocks(args[0], args[1]);
        } else if (const RelationDefinition* def = I.find(a->symbol)) {
            if (def->vars.size() != args.size() * I.width)
                throw DomainError("arity mismatch for '" + a->symbol + "' in the interpretation");
            core = instantiate(def->formula, def->vars, args);
        } else {
            std::vector<std::string> flat;
            for (const auto& b : args) flat.insert(flat.end(), b.begin(), b.end());
            if (!fallback) throw DomainError("interpretation does not define '" + a->symbol + "'");
            core = fallback(a->symbol, flat);
        }
        // (min)/(max) denote the lexicographically least/greatest defined tuple.
        for (auto it = extremes.rbegin(); it != extremes.rend(); ++it) {
            const auto& [b, is_max] = *it;
            Formula body = f::conj({extreme(b, is_max), core});
            for (std::size_t j = b.size(); j-- > 0;) body = f::exists(b[j], body);
            core = body;
        }
        return core;
    }

    std::vector<std::string> fresh_block(const std::string& base) {
        std::vector<std::string> out;
        for (std::size_t j = 0; j < I.width; ++j) out.push_back(names.fresh(base + "_" + std::to_string(j + 1)));
        return out;
    }
};

}  // namespace detail

/// Sentence over the source vocabulary with
/// count_win(result, A) = count_win(phi, apply_interpretation(I, A)).
inline Formula substitute_interpretation(const Formula& phi, const FOInterpretation& I) {
    if (!I.witnesses_unique) throw DomainError("interpretation must be preprocessed with make_witnesses_unique");
    I.check();
    Prenex p = as_prenex_sentence(phi);
    NameSupply names;
    names.reserve(phi);
    names.reserve(I.universe);
    for (const auto& v : I.universe_vars) names.reserve(v);
    for (const auto& r : I.relations) {
        names.reserve(r.formula);
        for (const auto& v : r.vars) names.reserve(v);
    }
    std::map<bool, std::vector<std::string>> hoisted;
    detail::AtomReplacer rep{I, names, &hoisted};

    std::map<std::string, std::vector<std::string>> blocks;
    std::vector<std::vector<std::string>> order;
    for (const auto& q : p.prefix) {
        blocks[q.var] = rep.fresh_block(q.var);
        order.push_back(blocks[q.var]);
    }
    auto replace = [&](auto&& self, const Formula& g) -> Formula {
        switch (g->op) {
        case Op::atom: return rep.atom(g, blocks, nullptr);
        case Op::negation:
        case Op::conjunction:
        case Op::disjunction: {
            Node n = *g;
            for (auto& k : n.kids) k = self(self, k);
            return f::make(std::move(n));
        }
        case Op::truth:
        case Op::falsity: return g;
        default: throw DomainError("matrix must be quantifier-free and #-free");
        }
    };
    Formula matrix = replace(replace, p.matrix);

    auto is_max = [](const std::vector<std::string>& b) {
        std::vector<Formula> parts;
        for (const auto& v : b) parts.push_back(f::eq(Term::var(v), Term::max()));
        return parts.size() == 1 ? parts[0] : f::conj(std::move(parts));
    };
    std::vector<Formula> main{matrix};
    for (const auto& b : order) main.push_back(rep.universe_of(b));
    std::vector<Formula> cases{f::conj(main)};
    // A universal block outside the defined universe contributes the neutral factor:
    // every later existential block is pinned to the maximum tuple.
    for (std::size_t i = 0; i < p.prefix.size(); ++i) {
        if (!p.prefix[i].universal) continue;
        std::vector<Formula> guard;
        for (std::size_t j = 0; j < i; ++j) guard.push_back(rep.universe_of(order[j]));
        guard.push_back(f::neg(rep.universe_of(order[i])));
        for (std::size_t j = i + 1; j < p.prefix.size(); ++j)
            if (!p.prefix[j].universal) guard.push_back(is_max(order[j]));
        cases.push_back(guard.size() == 1 ? guard[0] : f::conj(guard));
    }
    Formula body = cases.size() == 1 ? cases[0] : f::disj(cases);
    // Extreme tuples become leading existential blocks with a unique valid value.
    std::vector<Formula> pins;
    for (const auto& [is_max, b] : hoisted) pins.push_back(rep.extreme(b, is_max));
    if (!pins.empty()) {
        pins.push_back(body);
        body = f::conj(pins);
    }

    detail::Hat h = detail::Hatter(names)(body);
    Prenex out;
    for (const auto& [is_max, b] : hoisted)
        for (const auto& v : b) out.prefix.push_back({false, v, Sort::element});
    for (std::size_t i = 0; i < p.prefix.size(); ++i)
        for (const auto& v : order[i]) out.prefix.push_back({p.prefix[i].universal, v, Sort::element});
    out.prefix.insert(out.prefix.end(), h.prefix.begin(), h.prefix.end());
    out.matrix = h.defs->op == Op::truth ? h.qf : f::conj({h.qf, h.defs});
    return to_formula(out);
}

/// I after J: apply(compose(I, J), A) = apply(I, apply(J, A)).
/// A target-side "<=" that J leaves undefined is J's lexicographic element order.
inline FOInterpretation compose_interpretations(const FOInterpretation& I, const FOInterpretation& J) {
    I.check();
    J.check();
    NameSupply names;
    for (const auto* def : {&I.universe, &J.universe}) names.reserve(*def);
    for (const auto& r : I.relations) names.reserve(r.formula);
    for (const auto& r : J.relations) names.reserve(r.formula);
    for (const auto& v : I.universe_vars) names.reserve(v);
    for (const auto& r : I.relations)
        for (const auto& v : r.vars) names.reserve(v);
    detail::AtomReplacer rep{J, names};
    auto fallback = [&](const std::string& symbol, const std::vector<std::string>& flat) -> Formula {
        if (symbol != "<=") throw DomainError("inner interpretation does not define '" + symbol + "'");
        std::vector<std::string> a(flat.begin(), flat.begin() + static_cast<long>(J.width));
        std::vector<std::string> b(flat.begin() + static_cast<long>(J.width), flat.end());
        return lexicographic_le(a, b);
    };

    // Translate a formula over J's target into one over J's source.
    auto translate = [&](const Formula& phi, std::map<std::string, std::vector<std::string>> blocks) {
        auto go = [&](auto&& self, const Formula& g,
                      std::map<std::string, std::vector<std::string>>& env) -> Formula {
            switch (g->op) {
            case Op::atom: return rep.atom(g, env, fallback);
            case Op::truth:
            case Op::falsity: return g;
            case Op::count_bit: throw DomainError("#-atoms cannot be carried through an interpretation");
            case Op::exists:
            case Op::forall: {
                auto saved = env.find(g->var) == env.end() ? std::optional<std::vector<std::string>>{}
                                                           : std::optional{env[g->var]};
                std::vector<std::string> b = rep.fresh_block(g->var);
                env[g->var] = b;
                Formula body = self(self, g->kids[0], env);
                Formula uni = rep.universe_of(b);
                Formula inner = g->op == Op::exists ? f::conj({uni, body}) : f::disj({f::neg(uni), body});
                for (std::size_t j = b.size(); j-- > 0;) inner = f::quant(g->op, b[j], inner);
                if (saved)
                    env[g->var] = *saved;
                else
                    env.erase(g->var);
                return inner;
            }
            default: {
                Node n = *g;
                for (auto& k : n.kids) k = self(self, k, env);
                return f::make(std::move(n));
            }
            }
        };
        return go(go, phi, blocks);
    };

    auto expand = [&](const std::vector<std::string>& vars, std::map<std::string, std::vector<std::string>>& blocks) {
        std::vector<std::string> flat;
        std::vector<std::vector<std::string>> per_var;
        for (const auto& v : vars) {
            std::vector<std::string> b;
            for (std::size_t j = 0; j < J.width; ++j) b.push_back(names.fresh(v + "_" + std::to_string(j + 1)));
            blocks[v] = b;
            per_var.push_back(b);
            flat.insert(flat.end(), b.begin(), b.end());
        }
        return std::make_pair(flat, per_var);
    };

    FOInterpretation out;
    out.width = I.width * J.width;
    {
        std::map<std::string, std::vector<std::string>> blocks;
        auto [flat, per_var] = expand(I.universe_vars, blocks);
        std::vector<Formula> parts;
        for (const auto& b : per_var) parts.push_back(rep.universe_of(b));
        parts.push_back(translate(I.universe, blocks));
        out.universe_vars = flat;
        out.universe = f::conj(parts);
    }
    for (const auto& r : I.relations) {
        std::map<std::string, std::vector<std::string>> blocks;
        auto [flat, per_var] = expand(r.vars, blocks);
        out.relations.push_back({r.symbol, flat, translate(r.formula, blocks)});
    }
    out.witnesses_unique = false;
    return out;
}

/// f(w) = count_win(substitute(g, I), w), checked against count_win(g, I(w)).
inline Count apply_reduction(const Formula& g, const FOInterpretation& I, std::string_view w) {
    FOInterpretation prepared = I.witnesses_unique ? I : preprocess(I);
    Structure a = word_model(w);
    Count direct = count_win(substitute_interpretation(g, prepared), a);
    Count via = count_win(g, apply_interpretation(prepared, a).structure);
    if (direct != via)
        throw ConsistencyError("reduction identity failed on '" + std::string(w) + "': " + to_decimal(direct) +
                               " != " + to_decimal(via));
    return direct;
}

}  // namespace fowin
