#pragma once

// Uniform circuit families. A prenex sentence is turned into an FO-interpretation
// that, read over the padded word model of length n + 1, defines the counting
// circuit for input length n.
//
// Gate names are tuples (x1..xk, b1..be) over the padded universe, where the
// padding element p is the maximum. Quantifier gates have a padding suffix in
// x (at least xk = p) and b all p; the gate at level i has i non-padding
// components. A tuple with no padding in x is an assignment to the prefix, and
// b (binary digits, most significant first) addresses a slot in the fixed matrix
// fragment at that assignment:
//
//   0                    fragment root (OR over minterms)
//   1..M                 minterm gates (AND over one literal per atom)
//   M+1+2j / M+2+2j      literal of atom j, positive / negative
//   M+1+2A, M+2+2A       y and not-y, children of constant literals
//
// Literals of S-atoms are input gates. Literals of numeric atoms are constants
// built as OR(y, not y) = 1 or AND(y, not y) = 0, so the kind of those gates is
// the only part of the fragment that depends on the assignment.

#include "fowin/circuit.hpp"
#include "fowin/compiler.hpp"
#include "fowin/interp.hpp"

#include <set>
#include <string>
#include <vector>

namespace fowin {

/// Interpretation of width 2 sending word_model(w) to the padded model of w:
/// one more element, the new maximum, which is not in S. Needs |w| >= 2.
inline FOInterpretation pad_msb_interpretation() {
    using namespace f;
    auto min = Term::min();
    auto max = Term::max();
    FOInterpretation I;
    I.width = 2;
    I.universe_vars = {"x", "y"};
    I.universe = disj({eq(Term::var("x"), min), conj({eq(Term::var("x"), max), eq(Term::var("y"), max)})});
    I.relations.push_back({"<=", {"x1", "x2", "y1", "y2"}, lexicographic_le({"x1", "x2"}, {"y1", "y2"})});
    I.relations.push_back({"S", {"x", "y"}, conj({eq(Term::var("x"), min), atom("S", {"y"})})});
    return I;
}

/// Word model of w with the padding element appended. Short words (|w| < 2,
/// where the interpretation degenerates) are built directly.
inline Structure pad_msb(std::string_view w) {
    if (w.size() < 2) return word_model(std::string(w) + "0");
    return apply_interpretation(pad_msb_interpretation(), word_model(w)).structure;
}

struct UniformFamilyDescription {
    Formula source;
    std::size_t quantifiers = 0;  // k
    std::size_t slot_bits = 0;    // e
    FOInterpretation padding;
    FOInterpretation circuit;

    std::size_t width() const { return quantifiers + slot_bits; }
};

namespace detail::uniform {

using namespace fowin::f;

class UniformBuilder {
  public:
    explicit UniformBuilder(const Formula& phi) : prefix_(as_prenex_sentence(phi)) {
        k_ = prefix_.prefix.size();
        if (k_ == 0) throw DomainError("uniform families need at least one quantifier");
        atoms_ = atoms_of(prefix_.matrix);
        for (const auto& a : atoms_) {
            if (a->op != Op::atom) throw DomainError("#-atoms have no uniform circuit");
            if (a->symbol == "S") {
                if (a->args.size() != 1) throw DomainError("arity mismatch for 'S': expected 1");
            } else if (!is_builtin_symbol(a->symbol)) {
                throw DomainError("uniform families admit only S and built-in symbols, found '" + a->symbol + "'");
            } else {
                numeric_ = true;
            }
        }
        fragment_ = matrix_to_minterm_circuit(prefix_.matrix, atoms_);
        minterms_ = fragment_[fragment_.root()].children.size();
        slots_ = minterms_ + 2 * atoms_.size() + 1 + (numeric_ ? 2 : 0);
        e_ = 1;
        while ((std::size_t{1} << e_) < slots_) ++e_;
    }

    UniformFamilyDescription build() const {
        UniformFamilyDescription d;
        d.source = to_formula(prefix_);
        d.quantifiers = k_;
        d.slot_bits = e_;
        d.padding = pad_msb_interpretation();
        FOInterpretation& I = d.circuit;
        I.width = k_ + e_;
        auto X = vars("x", "b"), Y = vars("y", "c"), Z = vars("i", "d");
        I.universe_vars = X;
        I.universe = disj({quantifier_gate("x", "b"), conj({full("x"), binary_below("b", slots_)})});
        I.relations.push_back({"E", cat(X, Y), edge()});
        I.relations.push_back({"Gand", X, kind(true)});
        I.relations.push_back({"Gor", X, kind(false)});
        I.relations.push_back({"Root", X, pad("x1")});
        I.relations.push_back({"Input", cat(X, Z), input(true)});
        I.relations.push_back({"NegInput", cat(X, Z), input(false)});
        I.check();
        return d;
    }

  private:
    std::vector<std::string> vars(const std::string& x, const std::string& b) const {
        std::vector<std::string> out;
        for (std::size_t i = 1; i <= k_; ++i) out.push_back(x + std::to_string(i));
        for (std::size_t i = 1; i <= e_; ++i) out.push_back(b + std::to_string(i));
        return out;
    }
    static std::vector<std::string> cat(std::vector<std::string> a, const std::vector<std::string>& b) {
        a.insert(a.end(), b.begin(), b.end());
        return a;
    }
    static Term v(const std::string& base, std::size_t i) { return Term::var(base + std::to_string(i)); }
    static Formula pad(const std::string& name) { return eq(Term::var(name), Term::max()); }
    static Formula pad(const std::string& base, std::size_t i) { return eq(v(base, i), Term::max()); }

    Formula all_pad(const std::string& base, std::size_t count) const {
        std::vector<Formula> xs;
        for (std::size_t i = 1; i <= count; ++i) xs.push_back(pad(base, i));
        return conj(std::move(xs));
    }

    /// No padding in x: an assignment to the whole prefix.
    Formula full(const std::string& x) const {
        std::vector<Formula> xs;
        for (std::size_t i = 1; i <= k_; ++i) xs.push_back(neg(pad(x, i)));
        return conj(std::move(xs));
    }

    /// Padding-suffix rule, at least the last component padded, b all padding.
    Formula quantifier_gate(const std::string& x, const std::string& b) const {
        std::vector<Formula> xs;
        for (std::size_t i = 1; i <= k_; ++i) {
            std::vector<Formula> later;
            for (std::size_t j = i + 1; j <= k_; ++j) later.push_back(pad(x, j));
            if (!later.empty()) xs.push_back(implies(pad(x, i), conj(std::move(later))));
        }
        xs.push_back(pad(x, k_));
        xs.push_back(all_pad(b, e_));
        return conj(std::move(xs));
    }

    /// Exactly the first `level` components of x are not padding.
    Formula level(const std::string& x, std::size_t lvl) const {
        std::vector<Formula> xs;
        for (std::size_t i = 1; i <= k_; ++i) xs.push_back(i <= lvl ? neg(pad(x, i)) : pad(x, i));
        return conj(std::move(xs));
    }

    static Formula zero(const Term& t) { return eq(t, Term::min()); }
    static Formula one(const Term& t) { return conj({atom("*", {t, t, t}), neg(eq(t, Term::min()))}); }

    Formula slot(const std::string& b, std::size_t s) const {
        std::vector<Formula> xs;
        for (std::size_t i = 1; i <= e_; ++i) {
            bool bit = (s >> (e_ - i)) & 1u;
            xs.push_back(bit ? one(v(b, i)) : zero(v(b, i)));
        }
        return conj(std::move(xs));
    }

    Formula binary_below(const std::string& b, std::size_t bound) const {
        std::vector<Formula> xs;
        for (std::size_t s = 0; s < bound; ++s) xs.push_back(slot(b, s));
        return disj(std::move(xs));
    }

    std::size_t literal_slot(std::size_t atom, bool positive) const {
        return minterms_ + 1 + 2 * atom + (positive ? 0 : 1);
    }
    std::size_t y_slot() const { return minterms_ + 1 + 2 * atoms_.size(); }

    /// t is the largest non-padding element, i.e. the last position of the word.
    static Formula last_position(const Term& t) {
        return conj({neg(eq(t, Term::max())), forall("z_", disj({pad("z_"), atom("<=", {Term::var("z_"), t})}))});
    }

    /// Prefix variable -> x component.
    Term component(const Term& t, const std::string& x) const {
        for (std::size_t i = 0; i < k_; ++i)
            if (prefix_.prefix[i].var == t.name) return v(x, i + 1);
        throw DomainError("unbound variable '" + t.name + "'");
    }

    /// Numeric atom at the assignment stored in x; (max) means the last position.
    Formula numeric_atom(const Formula& a, const std::string& x) const {
        std::vector<Term> args;
        bool uses_max = false;
        for (const auto& t : a->args) {
            if (t.kind == Term::Kind::variable) {
                args.push_back(component(t, x));
            } else if (t.kind == Term::Kind::max) {
                args.push_back(Term::var("m_"));
                uses_max = true;
            } else {
                args.push_back(t);
            }
        }
        Formula body = atom(a->symbol, std::move(args));
        if (!uses_max) return body;
        return exists("m_", conj({last_position(Term::var("m_")), body}));
    }

    /// u holds the value of the S-atom's position term at the assignment stored in x.
    Formula position_is(const Term& t, const std::string& x, const Term& u) const {
        if (t.kind == Term::Kind::variable) return eq(u, component(t, x));
        if (t.kind == Term::Kind::min) return eq(u, Term::min());
        return last_position(u);
    }

    std::vector<std::pair<std::size_t, std::size_t>> fragment_edges() const {
        std::vector<std::pair<std::size_t, std::size_t>> out;
        const auto& roots = fragment_[fragment_.root()].children;
        for (std::size_t m = 0; m < roots.size(); ++m) {
            out.emplace_back(0, m + 1);
            for (std::size_t l : fragment_[roots[m]].children) {
                const Gate& g = fragment_[l];
                out.emplace_back(m + 1, literal_slot(g.param, g.kind == GateKind::input));
            }
        }
        for (std::size_t j = 0; j < atoms_.size(); ++j) {
            if (atoms_[j]->symbol == "S") continue;
            for (bool pos : {true, false}) {
                out.emplace_back(literal_slot(j, pos), y_slot());
                out.emplace_back(literal_slot(j, pos), y_slot() + 1);
            }
        }
        return out;
    }

    Formula edge() const {
        // Quantifier part: y agrees with x on x's non-padding components and has
        // exactly one more. A full y is the fragment root of that assignment.
        std::vector<Formula> agree;
        for (std::size_t i = 1; i <= k_; ++i) agree.push_back(implies(neg(pad("x", i)), eq(v("x", i), v("y", i))));
        std::vector<Formula> step;
        {
            std::vector<Formula> first{neg(pad("y", 1)), pad("x", 1)};
            if (k_ >= 2) first.push_back(pad("y", 2));
            step.push_back(conj(std::move(first)));
        }
        for (std::size_t i = 2; i <= k_; ++i) {
            std::vector<Formula> xs{neg(pad("y", i)), pad("x", i), neg(pad("x", i - 1))};
            if (i < k_) xs.push_back(pad("y", i + 1));
            step.push_back(conj(std::move(xs)));
        }
        Formula target = disj({conj({neg(pad("y", k_)), slot("c", 0)}), conj({pad("y", k_), all_pad("c", e_)})});
        Formula quantifier_edge = conj({all_pad("b", e_), conj(std::move(agree)), disj(std::move(step)), target});

        // Fragment part: same assignment, fixed slot-to-slot edges.
        std::vector<Formula> same;
        for (std::size_t i = 1; i <= k_; ++i) same.push_back(eq(v("x", i), v("y", i)));
        std::map<std::size_t, std::vector<std::size_t>> by_source;
        for (auto [s, t] : fragment_edges()) by_source[s].push_back(t);
        std::vector<Formula> alts;
        for (const auto& [s, ts] : by_source) {
            std::vector<Formula> targets;
            for (std::size_t t : ts) targets.push_back(slot("c", t));
            alts.push_back(conj({slot("b", s), disj(std::move(targets))}));
        }
        same.push_back(neg(pad("x", k_)));
        same.push_back(disj(std::move(alts)));
        return disj({conj(std::move(same)), quantifier_edge});
    }

    Formula kind(bool conjunctive) const {
        std::vector<Formula> quantifier;
        for (std::size_t i = 0; i < k_; ++i)
            if (prefix_.prefix[i].universal == conjunctive) quantifier.push_back(level("x", i));
        std::vector<Formula> fragment;
        if (conjunctive) {
            for (std::size_t m = 1; m <= minterms_; ++m) fragment.push_back(slot("b", m));
        } else {
            fragment.push_back(slot("b", 0));
        }
        // Literal of a numeric atom is the constant 1 (OR) when it holds at x.
        for (std::size_t j = 0; j < atoms_.size(); ++j) {
            if (atoms_[j]->symbol == "S") continue;
            Formula holds = numeric_atom(atoms_[j], "x");
            fragment.push_back(conj({slot("b", literal_slot(j, true)), conjunctive ? neg(holds) : holds}));
            fragment.push_back(conj({slot("b", literal_slot(j, false)), conjunctive ? holds : neg(holds)}));
        }
        return disj({conj({all_pad("b", e_), disj(std::move(quantifier))}),
                     conj({full("x"), disj(std::move(fragment))})});
    }

    /// Position i of the input is named by the fragment root of the assignment (i, .., i).
    Formula input(bool positive) const {
        std::vector<Formula> position{neg(pad("i", 1))};
        for (std::size_t j = 2; j <= k_; ++j) position.push_back(eq(v("i", j), v("i", 1)));
        position.push_back(slot("d", 0));
        Term u = v("i", 1);
        std::vector<Formula> alts;
        for (std::size_t j = 0; j < atoms_.size(); ++j)
            if (atoms_[j]->symbol == "S")
                alts.push_back(conj({slot("b", literal_slot(j, positive)), position_is(atoms_[j]->args[0], "x", u)}));
        if (numeric_) alts.push_back(conj({slot("b", y_slot() + (positive ? 0 : 1)), eq(u, Term::min())}));
        return conj({full("x"), conj(std::move(position)), disj(std::move(alts))});
    }

    Prenex prefix_;
    std::size_t k_ = 0;
    std::vector<Formula> atoms_;
    bool numeric_ = false;
    Circuit fragment_;
    std::size_t minterms_ = 0;
    std::size_t slots_ = 0;
    std::size_t e_ = 1;
};

}  // namespace detail::uniform

/// Circuit interpretation for a prenex sentence over S and the built-ins.
inline UniformFamilyDescription uniform_family_for_formula(const Formula& phi) {
    return detail::uniform::UniformBuilder(phi).build();
}

/// Minimum input length the description supports: the slot digits 0 and 1
/// must differ from the padding element.
inline constexpr std::size_t uniform_min_n = 2;

/// Decodes a structure over the circuit vocabulary (one element per gate).
/// `elements` names the source tuple of each element, for diagnostics and for
/// reading input positions off the first component.
inline Circuit decode_circuit_structure(const InterpretedStructure& s, std::size_t n) {
    const Structure& st = s.structure;
    std::size_t m = st.universe_size();
    auto name = [&](std::size_t g) {
        std::string out = "(";
        for (std::size_t i = 0; i < s.elements[g].size(); ++i) out += (i ? " " : "") + std::to_string(s.elements[g][i]);
        return out + ")";
    };
    auto fail = [&](std::size_t g, const std::string& why) -> Circuit {
        throw ConsistencyError("decode failure at tuple " + name(g) + ": " + why);
    };
    const Relation& E = st.relation("E");
    const Relation& Gand = st.relation("Gand");
    const Relation& Gor = st.relation("Gor");
    const Relation& Root = st.relation("Root");
    const Relation& In = st.relation("Input");
    const Relation& NegIn = st.relation("NegInput");

    Circuit c;
    c.input_length = n;
    for (std::size_t g = 0; g < m; ++g) {
        std::vector<std::size_t> positions[2];
        for (std::size_t q = 0; q < m; ++q) {
            if (In.contains(Tuple{g, q})) positions[0].push_back(q);
            if (NegIn.contains(Tuple{g, q})) positions[1].push_back(q);
        }
        int kinds = Gand.contains(Tuple{g}) + Gor.contains(Tuple{g}) + !positions[0].empty() + !positions[1].empty();
        if (kinds != 1) return fail(g, "expected exactly one gate kind, found " + std::to_string(kinds));
        Gate gate;
        if (Gand.contains(Tuple{g}) || Gor.contains(Tuple{g})) {
            gate.kind = Gand.contains(Tuple{g}) ? GateKind::conj : GateKind::disj;
            for (std::size_t h = 0; h < m; ++h)
                if (E.contains(Tuple{g, h})) gate.children.push_back(h);
        } else {
            bool positive = !positions[0].empty();
            const auto& ps = positions[positive ? 0 : 1];
            if (ps.size() != 1) return fail(g, "input gate with " + std::to_string(ps.size()) + " positions");
            gate.kind = positive ? GateKind::input : GateKind::neg_input;
            gate.param = s.elements[ps[0]].at(0);
            if (gate.param >= n) return fail(g, "input position outside the word");
            for (std::size_t h = 0; h < m; ++h)
                if (E.contains(Tuple{g, h})) return fail(g, "input gate with children");
        }
        c.add(std::move(gate));
        if (Root.contains(Tuple{g})) c.roots.push_back(g);
    }
    if (c.roots.size() != 1) throw ConsistencyError("decode failure: " + std::to_string(c.roots.size()) + " root tuples");
    return c;
}

/// Circuit for input length n: pad, apply the circuit interpretation, decode.
inline Circuit instantiate_uniform(const UniformFamilyDescription& d, std::size_t n) {
    if (n < uniform_min_n)
        throw DomainError("uniform descriptions need n >= " + std::to_string(uniform_min_n) + ", got " + std::to_string(n));
    Structure padded = pad_msb(std::string(n, '0'));
    Circuit c = decode_circuit_structure(apply_interpretation(d.circuit, padded), n);
    require_valid(c);
    return c;
}

// Text form: the two interpretations plus a manifest naming each formula's role.
//   (uniform (source phi) (quantifiers k) (slot-bits e) (manifest ...) (padding I) (circuit J))

inline std::string write_uniform_description(const UniformFamilyDescription& d) {
    std::string out = "(uniform\n (source " + to_text(d.source) + ")\n (quantifiers " + std::to_string(d.quantifiers) +
                      ")\n (slot-bits " + std::to_string(d.slot_bits) + ")\n";
    out += " (manifest (universe gate-names) (E child) (Gand and-gate) (Gor or-gate) (Root root)"
           " (Input positive-literal) (NegInput negative-literal))\n";
    out += " (padding " + write_interpretation(d.padding) + ")\n";
    out += " (circuit " + write_interpretation(d.circuit) + "))\n";
    return out;
}

inline UniformFamilyDescription read_uniform_description(const SExpr& e) {
    if (e.head() != "uniform") throw ParseError("expected (uniform ...)");
    UniformFamilyDescription d;
    bool have[5] = {};
    for (std::size_t i = 1; i < e.size(); ++i) {
        const SExpr& item = e[i];
        auto h = item.head();
        if (item.size() != 2 && h != "manifest") throw ParseError("malformed uniform item: " + to_string(item));
        if (h == "source") {
            d.source = parse_formula(item[1]);
            have[0] = true;
        } else if (h == "quantifiers") {
            d.quantifiers = parse_size(item[1], "quantifiers");
            have[1] = true;
        } else if (h == "slot-bits") {
            d.slot_bits = parse_size(item[1], "slot-bits");
            have[2] = true;
        } else if (h == "padding") {
            d.padding = read_interpretation(item[1]);
            have[3] = true;
        } else if (h == "circuit") {
            d.circuit = read_interpretation(item[1]);
            have[4] = true;
        } else if (h != "manifest") {
            throw ParseError("unexpected uniform item: " + to_string(item));
        }
    }
    for (bool b : have)
        if (!b) throw ParseError("uniform description lacks source, quantifiers, slot-bits, padding or circuit");
    if (d.circuit.width != d.width()) throw ParseError("circuit interpretation width does not match k + slot-bits");
    return d;
}

inline UniformFamilyDescription read_uniform_description(std::string_view text) {
    return read_uniform_description(parse_sexpr(text));
}

}  // namespace fowin
