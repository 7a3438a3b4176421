#pragma once

// Formulas to circuits and back.
//
// formula_to_circuit builds an OR (exists) / AND (forall) tree over quantifier
// assignments whose leaves are minterm expansions of the matrix, so proof trees
// correspond one-to-one with winning strategies. extract_formula goes the other
// way: an alternating normal circuit becomes a structure over tuples of the input
// universe plus a fixed sentence whose strategy count equals the proof-tree count.

#include "fowin/circuit.hpp"
#include "fowin/eval.hpp"
#include "fowin/formula.hpp"
#include "fowin/structure.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fowin {

/// Truth of a quantifier-free formula given the truth value of each atom (indexed like `atoms`).
inline bool eval_propositional(const Formula& psi, const std::vector<Formula>& atoms, const std::vector<bool>& values) {
    switch (psi->op) {
    case Op::truth: return true;
    case Op::falsity: return false;
    case Op::atom:
    case Op::count_bit: {
        std::string key = to_text(psi);
        for (std::size_t i = 0; i < atoms.size(); ++i)
            if (to_text(atoms[i]) == key) return values[i];
        throw DomainError("atom " + key + " is not in the atom list");
    }
    case Op::negation: return !eval_propositional(psi->kids[0], atoms, values);
    case Op::conjunction:
        for (const auto& k : psi->kids)
            if (!eval_propositional(k, atoms, values)) return false;
        return true;
    case Op::disjunction:
        for (const auto& k : psi->kids)
            if (eval_propositional(k, atoms, values)) return true;
        return false;
    default: throw DomainError("expected a quantifier-free formula");
    }
}

/// OR over one full minterm per satisfying atom assignment. INPUT(i)/NEG_INPUT(i)
/// stand for atom i being true/false; input_length is the number of atoms.
/// Minterms appear in lexicographic order of assignments, atom 0 most significant.
inline Circuit matrix_to_minterm_circuit(const Formula& psi, const std::vector<Formula>& atoms) {
    if (!is_quantifier_free(psi)) throw DomainError("matrix must be quantifier-free");
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < atoms.size(); ++i)
        if (!index.emplace(to_text(atoms[i]), i).second) throw DomainError("duplicate atom " + to_text(atoms[i]));
    for (const auto& a : atoms_of(psi))
        if (!index.count(to_text(a))) throw DomainError("atom " + to_text(a) + " is not covered by the atom list");
    if (atoms.size() > 20) throw DomainError("too many atoms for a minterm expansion");
    Circuit c;
    c.input_length = atoms.size();
    std::vector<std::size_t> minterms;
    std::size_t m = atoms.size();
    std::vector<bool> values(m);
    for (std::size_t bits = 0; bits < (std::size_t{1} << m); ++bits) {
        for (std::size_t i = 0; i < m; ++i) values[i] = (bits >> (m - 1 - i)) & 1;
        if (!eval_propositional(psi, atoms, values)) continue;
        std::vector<std::size_t> lits;
        for (std::size_t i = 0; i < m; ++i) lits.push_back(values[i] ? c.input(i) : c.neg_input(i));
        minterms.push_back(c.add(GateKind::conj, std::move(lits)));
    }
    c.roots = {c.add(GateKind::disj, std::move(minterms))};
    return c;
}

namespace detail {

/// Circuit under construction with shared literal and constant gates.
struct SharedBuilder {
    Circuit c;
    std::map<std::pair<int, std::size_t>, std::size_t> literal;
    std::optional<std::size_t> one, zero;

    std::size_t lit(bool positive, std::size_t i) {
        auto key = std::make_pair(positive ? 1 : 0, i);
        auto it = literal.find(key);
        if (it != literal.end()) return it->second;
        std::size_t id = positive ? c.input(i) : c.neg_input(i);
        literal.emplace(key, id);
        return id;
    }
    std::size_t constant(bool v) {
        auto& slot = v ? one : zero;
        if (!slot) slot = c.constant(v);
        return *slot;
    }
    /// AND/OR that collapses to its only child.
    std::size_t gate(GateKind k, std::vector<std::size_t> kids) {
        if (kids.size() == 1) return kids[0];
        if (kids.empty()) return constant(k == GateKind::conj);
        return c.add(k, std::move(kids));
    }
};

}  // namespace detail

/// Counting circuit for input length n: count_proof_trees(C, w) = count_win(phi, word_model(w), aux).
/// S-atoms become literals; every other atom is decided at compile time.
inline Circuit formula_to_circuit(const Formula& phi, std::size_t n, const InterpretationFamily& aux = {}) {
    if (n == 0) throw DomainError("formula_to_circuit needs input length >= 1");
    Prenex p = as_prenex_sentence(phi);
    std::vector<Formula> atoms = atoms_of(p.matrix);
    Circuit fragment = matrix_to_minterm_circuit(p.matrix, atoms);

    Structure blank = word_model(std::string(n, '0'));
    std::optional<Structure> aux_structure;
    if (!aux.empty()) aux_structure = aux.at(n);
    Model model(blank, aux_structure ? &*aux_structure : nullptr);
    std::vector<std::string> order;
    for (const auto& q : p.prefix) order.push_back(q.var);

    // Live atoms read one input bit; numeric atoms are compiled for evaluation.
    struct AtomPlan {
        bool live = false;
        Term position;
        std::optional<CompiledFormula> numeric;
    };
    std::vector<AtomPlan> plan(atoms.size());
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        const Formula& a = atoms[i];
        if (a->op != Op::atom) throw DomainError("#-atoms cannot be compiled");
        if (a->symbol == "S") {
            if (a->args.size() != 1) throw DomainError("arity mismatch for 'S': expected 1");
            plan[i].live = true;
            plan[i].position = a->args[0];
        } else {
            plan[i].numeric.emplace(a, model, order);
        }
    }

    detail::SharedBuilder b;
    b.c.input_length = n;
    std::vector<std::size_t> values(p.prefix.size(), 0);
    auto position = [&](const Term& t) -> std::size_t {
        if (t.kind == Term::Kind::min) return 0;
        if (t.kind == Term::Kind::max) return n - 1;
        for (std::size_t i = 0; i < order.size(); ++i)
            if (order[i] == t.name) return values[i];
        throw DomainError("unbound variable '" + t.name + "'");
    };
    auto leaf = [&]() -> std::size_t {
        std::vector<std::size_t> minterms;
        for (std::size_t mt : fragment[fragment.root()].children) {
            std::vector<std::size_t> lits;
            bool dead = false;
            for (std::size_t l : fragment[mt].children) {
                const Gate& g = fragment[l];
                bool positive = g.kind == GateKind::input;
                const AtomPlan& ap = plan[g.param];
                if (ap.live) {
                    lits.push_back(b.lit(positive, position(ap.position)));
                } else if (ap.numeric->eval(values) != positive) {
                    dead = true;
                    break;
                }
            }
            if (!dead) minterms.push_back(b.gate(GateKind::conj, std::move(lits)));
        }
        return b.gate(GateKind::disj, std::move(minterms));
    };
    auto build = [&](auto&& self, std::size_t depth) -> std::size_t {
        if (depth == p.prefix.size()) return leaf();
        std::vector<std::size_t> kids;
        for (std::size_t v = 0; v < n; ++v) {
            values[depth] = v;
            kids.push_back(self(self, depth + 1));
        }
        // Quantifier gates keep all n children, even when n = 1.
        return b.c.add(p.prefix[depth].universal ? GateKind::conj : GateKind::disj, std::move(kids));
    };
    b.c.roots = {build(build, 0)};
    return b.c;
}

// ---------------------------------------------------------------------------
// Circuit as a structure over t-tuples of the input universe.

struct CircuitSymbols {
    static constexpr const char* edge = "E";          // E(parent block, child block), arity 2t
    static constexpr const char* and_gate = "Gand";   // arity t
    static constexpr const char* or_gate = "Gor";     // arity t
    static constexpr const char* root = "Root";       // arity t
    static constexpr const char* input = "Input";     // Input(gate block, i), arity t+1
    static constexpr const char* neg_input = "NegInput";
};

/// Least t with n^t >= gates.
inline std::size_t tuple_width(std::size_t gates, std::size_t n) {
    if (n < 2) throw DomainError("gate names need a universe of size >= 2");
    std::size_t t = 1;
    for (std::size_t cap = n; cap < gates; ++t) cap *= n;
    return t;
}

inline Vocabulary circuit_vocabulary(std::size_t t) {
    Vocabulary v;
    v.add(CircuitSymbols::edge, 2 * t);
    v.add(CircuitSymbols::and_gate, t);
    v.add(CircuitSymbols::or_gate, t);
    v.add(CircuitSymbols::root, t);
    v.add(CircuitSymbols::input, t + 1);
    v.add(CircuitSymbols::neg_input, t + 1);
    return v;
}

/// Gate id as a base-n tuple, most significant digit first.
inline Tuple gate_tuple(std::size_t id, std::size_t n, std::size_t t) {
    Tuple out(t, 0);
    for (std::size_t i = t; i-- > 0;) {
        out[i] = id % n;
        id /= n;
    }
    if (id != 0) throw DomainError("gate id does not fit in the tuple width");
    return out;
}

inline Structure circuit_structure(const Circuit& c, std::size_t n, std::size_t t) {
    require_valid(c);
    if (c.input_length != n) throw DomainError("circuit input length differs from the universe size");
    Structure s(circuit_vocabulary(t), n);
    auto cat = [](Tuple a, const Tuple& b) {
        a.insert(a.end(), b.begin(), b.end());
        return a;
    };
    for (std::size_t id = 0; id < c.size(); ++id) {
        const Gate& g = c.gates[id];
        Tuple me = gate_tuple(id, n, t);
        switch (g.kind) {
        case GateKind::conj: s.insert(CircuitSymbols::and_gate, me); break;
        case GateKind::disj: s.insert(CircuitSymbols::or_gate, me); break;
        case GateKind::input: s.insert(CircuitSymbols::input, cat(me, {g.param})); break;
        case GateKind::neg_input: s.insert(CircuitSymbols::neg_input, cat(me, {g.param})); break;
        default: throw DomainError("only AND/OR circuits can be turned into structures");
        }
        for (std::size_t ch : g.children) s.insert(CircuitSymbols::edge, cat(me, gate_tuple(ch, n, t)));
    }
    s.insert(CircuitSymbols::root, gate_tuple(c.root(), n, t));
    return s;
}

namespace detail {

inline std::vector<Term> block_terms(std::size_t level, std::size_t t) {
    std::vector<Term> out;
    for (std::size_t j = 0; j < t; ++j) out.push_back(Term::var("g" + std::to_string(level) + "_" + std::to_string(j)));
    return out;
}

inline std::vector<Term> concat_terms(std::vector<Term> a, const std::vector<Term>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

}  // namespace detail

/// Sentence for depth-k alternating normal circuits with gate names of width t.
/// Block g<i> is existential for even i, universal for odd i; a final
/// existential `pos` picks the input position of the reached literal.
inline Formula circuit_to_formula(std::size_t k, std::size_t t) {
    using detail::block_terms;
    using detail::concat_terms;
    if (t == 0) throw DomainError("tuple width must be positive");
    auto edge = [&](std::size_t i) {  // parent block i-1, child block i
        return f::atom(CircuitSymbols::edge, concat_terms(block_terms(i - 1, t), block_terms(i, t)));
    };
    auto root = [&](std::size_t i) { return f::atom(CircuitSymbols::root, block_terms(i, t)); };
    Term pos = Term::var("pos");
    std::vector<Term> leaf_args = concat_terms(block_terms(k, t), {pos});
    Formula true_literal =
        f::disj({f::conj({f::atom(CircuitSymbols::input, leaf_args), f::atom("S", {pos})}),
                 f::conj({f::atom(CircuitSymbols::neg_input, leaf_args), f::neg(f::atom("S", {pos}))})});

    std::vector<Formula> path;
    for (std::size_t i = 1; i <= k; ++i) path.push_back(edge(i));
    path.push_back(true_literal);
    std::vector<Formula> cases{f::conj(path)};
    // A universal move off the tree contributes the neutral factor 1: every later
    // existential block is pinned to the root and `pos` to the first root component.
    for (std::size_t i = 1; i <= k; i += 2) {
        std::vector<Formula> guard;
        for (std::size_t j = 1; j < i; ++j) guard.push_back(edge(j));
        guard.push_back(f::neg(edge(i)));
        for (std::size_t j = i + 1; j <= k; ++j)
            if (j % 2 == 0) guard.push_back(root(j));
        guard.push_back(f::eq(pos, block_terms(0, t)[0]));
        cases.push_back(f::conj(guard));
    }
    Formula phi = f::conj({root(0), f::disj(cases)});
    phi = f::exists("pos", phi);
    for (std::size_t i = k + 1; i-- > 0;) {
        auto block = block_terms(i, t);
        for (std::size_t j = t; j-- > 0;)
            phi = i % 2 == 0 ? f::exists(block[j].name, phi) : f::forall(block[j].name, phi);
    }
    return phi;
}

struct Extraction {
    Formula formula;
    Structure structure;  // circuit relations over the input universe
    std::size_t depth = 0;
    std::size_t width = 0;
};

/// Formula and circuit structure for an alternating normal circuit with literal leaves,
/// so that count_win(formula, word_model(w), structure) = count_proof_trees(c, w).
inline Extraction extract_formula(const Circuit& c) {
    if (!is_alternating_normal(c)) throw DomainError("circuit must be in alternating normal form");
    for (const auto& g : c.gates)
        if (is_leaf(g) && !g.is_literal()) throw DomainError("constant leaves are not supported; leaves must be literals");
    std::size_t n = c.input_length;
    Extraction e;
    e.depth = depth(c);
    e.width = tuple_width(c.size(), n);
    e.formula = circuit_to_formula(e.depth, e.width);
    e.structure = circuit_structure(c, n, e.width);
    return e;
}

}  // namespace fowin
