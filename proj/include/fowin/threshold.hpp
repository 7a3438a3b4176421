#pragma once

// Counting-threshold constructions: two-sorted formulas with #-atoms, the
// comparison of two counts, padded concatenation of counting families,
// compilation of #-atoms to oracle gates and inlining of oracle gates.
//
// Second-sort tuples are read little-endian in base n: val(j0..jm-1) = sum ji n^i.
// A #-atom (# psi j...) holds iff bit val(j) (bit 0 = least significant) of
// count_win(psi, word_model(w)) is set.

#include "fowin/circuit.hpp"
#include "fowin/compiler.hpp"
#include "fowin/counting.hpp"
#include "fowin/formula.hpp"

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace fowin {

namespace detail::focw {

inline bool element_only(const std::string& s) { return s == "S"; }
inline bool number_only(const std::string& s) { return s == "+" || s == "*" || s == "bit"; }

/// Truth of a non-# atom given its argument values over {0..n-1}.
inline bool atom_holds(const std::string& symbol, const std::vector<std::size_t>& a, std::string_view w) {
    auto need = [&](std::size_t k) {
        if (a.size() != k)
            throw DomainError("arity mismatch for '" + symbol + "': expected " + std::to_string(k) + ", got " +
                              std::to_string(a.size()));
    };
    if (symbol == "S") {
        need(1);
        return w[a[0]] == '1';
    }
    if (symbol == "=") {
        need(2);
        return a[0] == a[1];
    }
    if (symbol == "<=") {
        need(2);
        return a[0] <= a[1];
    }
    if (symbol == "+") {
        need(3);
        return a[0] + a[1] == a[2];
    }
    if (symbol == "*") {
        need(3);
        return a[0] * a[1] == a[2];
    }
    if (symbol == "bit") {
        need(2);
        return a[0] < 64 && ((a[1] >> a[0]) & 1u);
    }
    throw DomainError("unknown relation symbol '" + symbol + "'");
}

using Scope = std::vector<std::pair<std::string, Sort>>;

inline std::optional<Sort> sort_of(const Term& t, const Scope& scope) {
    if (!t.is_var()) return std::nullopt;
    for (auto it = scope.rbegin(); it != scope.rend(); ++it)
        if (it->first == t.name) return it->second;
    throw DomainError("unbound variable '" + t.name + "'");
}

/// Throws DomainError on any sort violation. Embedded sentences must be closed,
/// single-sorted (first sort) and free of #-atoms.
inline void check_sorts(const Formula& phi, Scope& scope) {
    switch (phi->op) {
    case Op::truth:
    case Op::falsity: return;
    case Op::atom: {
        std::optional<Sort> sort;
        for (const auto& t : phi->args) {
            auto s = sort_of(t, scope);
            if (!s) continue;
            if (sort && *sort != *s) throw DomainError("sort violation: " + to_text(phi) + " mixes the two sorts");
            sort = s;
        }
        if (sort == Sort::number && element_only(phi->symbol))
            throw DomainError("sort violation: " + phi->symbol + " takes first-sort arguments in " + to_text(phi));
        if (sort == Sort::element && number_only(phi->symbol))
            throw DomainError("sort violation: " + phi->symbol + " takes second-sort arguments in " + to_text(phi));
        if (!element_only(phi->symbol) && !is_builtin_symbol(phi->symbol))
            throw DomainError("unknown relation symbol '" + phi->symbol + "'");
        return;
    }
    case Op::count_bit: {
        for (const auto& t : phi->args)
            if (sort_of(t, scope) == Sort::element)
                throw DomainError("sort violation: #-atom index '" + t.name + "' is first-sort");
        const Formula& psi = phi->kids[0];
        as_prenex_sentence(psi);
        std::function<void(const Formula&)> walk = [&](const Formula& g) {
            if (g->op == Op::count_bit) throw DomainError("#-atoms cannot be nested");
            if (is_quantifier(g->op) && g->sort == Sort::number)
                throw DomainError("embedded sentences quantify over the first sort only");
            for (const auto& k : g->kids) walk(k);
        };
        walk(psi);
        return;
    }
    case Op::exists:
    case Op::forall:
        scope.emplace_back(phi->var, phi->sort);
        check_sorts(phi->kids[0], scope);
        scope.pop_back();
        return;
    default:
        for (const auto& k : phi->kids) check_sorts(k, scope);
    }
}

}  // namespace detail::focw

inline void check_focw(const Formula& phi) {
    detail::focw::Scope scope;
    detail::focw::check_sorts(phi, scope);
}

/// val(j) for little-endian base-n digits.
inline Count tuple_value(const std::vector<std::size_t>& digits, std::size_t n) {
    Count v = 0;
    for (std::size_t i = digits.size(); i-- > 0;) v = v * n + digits[i];
    return v;
}

/// Evaluates two-sorted formulas on one word, caching the counts of embedded sentences.
class FocwEvaluator {
  public:
    explicit FocwEvaluator(std::string_view w) : w_(w), model_(word_model(w)) {
        if (w.empty()) throw DomainError("two-sorted evaluation needs n >= 1");
    }

    std::size_t size() const { return w_.size(); }

    bool eval(const Formula& phi) {
        check_focw(phi);
        for (const auto& v : free_variables(phi)) throw DomainError("unbound variable '" + v + "'");
        env_.clear();
        return run(phi);
    }

    const Count& count(const Formula& sentence) {
        auto hit = by_node_.find(sentence.get());
        if (hit != by_node_.end()) return *hit->second;
        auto key = to_text(sentence);
        auto it = counts_.find(key);
        if (it == counts_.end()) it = counts_.emplace(key, count_win(sentence, model_)).first;
        by_node_.emplace(sentence.get(), &it->second);
        held_.push_back(sentence);
        return it->second;
    }

    /// Truth of a quantifier-free atom under explicit variable values.
    bool atom(const Formula& a, const std::map<std::string, std::size_t>& values) {
        env_.assign(values.begin(), values.end());
        return run(a);
    }

  private:
    std::size_t value(const Term& t) const {
        if (t.kind == Term::Kind::min) return 0;
        if (t.kind == Term::Kind::max) return w_.size() - 1;
        for (auto it = env_.rbegin(); it != env_.rend(); ++it)
            if (it->first == t.name) return it->second;
        throw DomainError("unbound variable '" + t.name + "'");
    }

    bool run(const Formula& phi) {
        switch (phi->op) {
        case Op::truth: return true;
        case Op::falsity: return false;
        case Op::atom: {
            std::vector<std::size_t> a;
            for (const auto& t : phi->args) a.push_back(value(t));
            return detail::focw::atom_holds(phi->symbol, a, w_);
        }
        case Op::count_bit: {
            std::vector<std::size_t> digits;
            for (const auto& t : phi->args) digits.push_back(value(t));
            Count v = tuple_value(digits, w_.size());
            const Count& c = count(phi->kids[0]);
            return v < bit_length(c) && test_bit(c, static_cast<std::size_t>(v));
        }
        case Op::negation: return !run(phi->kids[0]);
        case Op::conjunction:
            for (const auto& k : phi->kids)
                if (!run(k)) return false;
            return true;
        case Op::disjunction:
            for (const auto& k : phi->kids)
                if (run(k)) return true;
            return false;
        case Op::exists:
        case Op::forall: {
            bool universal = phi->op == Op::forall;
            env_.emplace_back(phi->var, 0);
            bool result = universal;
            for (std::size_t v = 0; v < w_.size(); ++v) {
                env_.back().second = v;
                if (run(phi->kids[0]) != universal) {
                    result = !universal;
                    break;
                }
            }
            env_.pop_back();
            return result;
        }
        }
        return false;
    }

    std::string w_;
    Structure model_;
    std::vector<std::pair<std::string, std::size_t>> env_;
    std::map<std::string, Count> counts_;
    std::map<const Node*, const Count*> by_node_;
    std::vector<Formula> held_;  // keeps cached nodes alive
};

inline bool focw_evaluate(const Formula& phi, std::string_view w) { return FocwEvaluator(w).eval(phi); }

// ---------------------------------------------------------------------------
// Comparing two counts

/// Largest possible count of a prenex sentence at size n (matrix replaced by true).
inline Count count_upper_bound(const Formula& psi, std::size_t n) {
    Prenex p = as_prenex_sentence(psi);
    p.matrix = f::truth();
    return count_win(to_formula(p), word_model(std::string(n, '0')));
}

/// Least tuple width m with n^m >= the bit length of both count bounds.
inline std::size_t comparison_width(const Formula& psi1, const Formula& psi2, std::size_t n) {
    if (n == 0) throw DomainError("comparison needs n >= 1");
    std::size_t bits = std::max(bit_length(count_upper_bound(psi1, n)), bit_length(count_upper_bound(psi2, n)));
    if (n == 1) {
        if (bits > 1) throw DomainError("no tuple width addresses " + std::to_string(bits) + " bits at n = 1");
        return 1;
    }
    std::size_t m = 1;
    for (Count cap = n; cap < bits; cap *= n) ++m;
    return m;
}

namespace detail::focw {

inline std::vector<Term> block(const std::string& base, std::size_t m) {
    std::vector<Term> out;
    for (std::size_t i = 0; i < m; ++i) out.push_back(Term::var(base + std::to_string(i)));
    return out;
}

/// a < b in the val order (component m-1 most significant).
inline Formula val_less(const std::vector<Term>& a, const std::vector<Term>& b) {
    using namespace f;
    std::vector<Formula> cases;
    for (std::size_t i = 0; i < a.size(); ++i) {
        std::vector<Formula> c{atom("<=", {a[i], b[i]}), neg(eq(a[i], b[i]))};
        for (std::size_t j = i + 1; j < a.size(); ++j) c.push_back(eq(a[j], b[j]));
        cases.push_back(conj(std::move(c)));
    }
    return disj(std::move(cases));
}

inline Formula val_equal(const std::vector<Term>& a, const std::vector<Term>& b) {
    std::vector<Formula> xs;
    for (std::size_t i = 0; i < a.size(); ++i) xs.push_back(f::eq(a[i], b[i]));
    return f::conj(std::move(xs));
}

}  // namespace detail::focw

/// Two-sorted sentence true iff count_win(psi1) > count_win(psi2), provided n^m
/// covers the bit lengths of both counts: p is the top bit of the first count,
/// nothing is set above it in either count, and d <= p is the highest bit where
/// the counts differ. Quantifiers stay nested so evaluation can prune early.
inline Formula build_comparison_focw(const Formula& psi1, const Formula& psi2, std::size_t m) {
    using namespace f;
    using detail::focw::block;
    using detail::focw::val_equal;
    using detail::focw::val_less;
    if (m == 0) throw DomainError("comparison tuple width must be positive");
    as_prenex_sentence(psi1);
    as_prenex_sentence(psi2);
    auto p = block("p", m), d = block("d", m), q = block("q", m), r = block("r", m);
    auto first = [&](const std::vector<Term>& t) { return count_bit(psi1, t); };
    auto second = [&](const std::vector<Term>& t) { return count_bit(psi2, t); };
    auto quantify = [&](bool universal, const std::vector<Term>& b, Formula body) {
        for (std::size_t i = m; i-- > 0;)
            body = universal ? forall(b[i].name, body, Sort::number) : exists(b[i].name, body, Sort::number);
        return body;
    };
    auto at_most = [&](const std::vector<Term>& a, const std::vector<Term>& b) {
        return disj({val_less(a, b), val_equal(a, b)});
    };
    Formula nothing_above = quantify(true, q, implies(val_less(p, q), conj({neg(first(q)), neg(second(q))})));
    Formula agree_between = quantify(true, r, implies(conj({val_less(d, r), at_most(r, p)}),
                                                      disj({conj({first(r), second(r)}),
                                                            conj({neg(first(r)), neg(second(r))})})));
    Formula differ = quantify(false, d, conj({at_most(d, p), first(d), neg(second(d)), agree_between}));
    return quantify(false, p, conj({first(p), nothing_above, differ}));
}

/// Evaluates the comparison sentence after checking that width m sees every bit.
/// The evaluator fixes the word and caches counts across calls.
inline bool compare_counts_focw(FocwEvaluator& ev, const Formula& psi1, const Formula& psi2, std::size_t m) {
    Count cap = pow(Count(ev.size()), m);
    for (const auto* psi : {&psi1, &psi2})
        if (Count(bit_length(ev.count(*psi))) > cap)
            throw DomainError("tuple width " + std::to_string(m) + " is too small: count " + to_decimal(ev.count(*psi)) +
                              " needs " + std::to_string(bit_length(ev.count(*psi))) + " bits, n^m = " + to_decimal(cap));
    return ev.eval(build_comparison_focw(psi1, psi2, m));
}

inline bool compare_counts_focw(const Formula& psi1, const Formula& psi2, std::size_t m, std::string_view w) {
    FocwEvaluator ev(w);
    return compare_counts_focw(ev, psi1, psi2, m);
}

/// x is accepted iff the first family has strictly more proof trees than the second.
inline bool pac0_accepts(const CircuitFamily& f_family, const CircuitFamily& h_family, std::string_view w) {
    return count_proof_trees(f_family.at(w.size()), w) > count_proof_trees(h_family.at(w.size()), w);
}

// ---------------------------------------------------------------------------
// Padded concatenation

/// Copies `part` into `into` (same input length) and returns the id of its root.
inline std::size_t embed_circuit(Circuit& into, const Circuit& part) {
    if (part.input_length != into.input_length) throw DomainError("embedded circuit has a different input length");
    std::size_t base = into.size();
    for (const Gate& g : part.gates) {
        Gate copy = g;
        for (auto& ch : copy.children) ch += base;
        into.add(std::move(copy));
    }
    return base + part.root();
}

/// Gate with exactly 2^p proof trees: a chain of ANDs, each step multiplying by
/// an OR over two constant-1 gates.
inline std::size_t power_of_two_gate(Circuit& c, std::size_t p) {
    std::size_t two = c.add(GateKind::disj, {c.constant(true), c.constant(true)});
    std::size_t acc = c.constant(true);
    for (std::size_t i = 0; i < p; ++i) acc = c.add(GateKind::conj, {acc, two});
    return acc;
}

/// Circuit over n inputs whose proof-tree count is `value` on every input.
inline Circuit constant_count_circuit(std::size_t n, std::size_t value) {
    Circuit c;
    c.input_length = n;
    std::vector<std::size_t> ones;
    for (std::size_t i = 0; i < value; ++i) ones.push_back(c.constant(true));
    c.roots = {c.add(GateKind::disj, std::move(ones))};
    return c;
}

/// p(n) for a coefficient list c0 + c1 n + c2 n^2 + ...
inline std::size_t polynomial_value(const std::vector<std::size_t>& coefficients, std::size_t n) {
    std::size_t v = 0;
    for (std::size_t i = coefficients.size(); i-- > 0;) v = v * n + coefficients[i];
    return v;
}

/// Bits needed for any count of c: the bit length of its all-true bound.
inline std::size_t padding_bound(const Circuit& c) { return bit_length(all_true_bound(c)); }

namespace detail {

inline Circuit padded_concat_at(const Circuit& f, const Circuit& g, std::size_t p) {
    std::size_t need = padding_bound(g);
    if (p < need)
        throw DomainError("padding bound violated: p(n) = " + std::to_string(p) + " but the second count may need " +
                          std::to_string(need) + " bits");
    Circuit c;
    c.input_length = f.input_length;
    std::size_t fr = embed_circuit(c, f);
    std::size_t gr = embed_circuit(c, g);
    std::size_t shifted = c.add(GateKind::conj, {fr, power_of_two_gate(c, p)});
    c.roots = {c.add(GateKind::disj, {shifted, gr})};
    return c;
}

}  // namespace detail

/// Family counting f(x) * 2^p(|x|) + g(x).
inline CircuitFamily padded_concat(CircuitFamily f, CircuitFamily g, std::vector<std::size_t> p) {
    return {[f = std::move(f), g = std::move(g), p = std::move(p)](std::size_t n) {
        return detail::padded_concat_at(f.at(n), g.at(n), polynomial_value(p, n));
    }};
}

/// Same, with p(n) derived from the all-true bound of g's circuit at n.
inline CircuitFamily padded_concat(CircuitFamily f, CircuitFamily g) {
    return {[f = std::move(f), g = std::move(g)](std::size_t n) {
        Circuit gc = g.at(n);
        return detail::padded_concat_at(f.at(n), gc, padding_bound(gc));
    }};
}

// ---------------------------------------------------------------------------
// Oracle circuits

/// Circuit with oracle gates plus the oracle it expects. Each embedded sentence s
/// owns two blocks of widths[s] bits in the oracle value: its count at
/// count_offsets[s] and the complement (2^widths[s] - 1 - count) at
/// complement_offsets[s], so negated #-literals also read a set bit.
struct OracleCircuit {
    Circuit circuit;
    Oracle oracle;
    std::vector<Formula> sentences;
    std::vector<std::size_t> widths;
    std::vector<std::size_t> count_offsets;
    std::vector<std::size_t> complement_offsets;
};

/// Oracle value for input x: blocks in order count_0, complement_0, count_1, ...
/// from the most significant end.
inline Oracle concatenated_count_oracle(std::vector<Formula> sentences, std::vector<std::size_t> widths,
                                        std::vector<std::size_t> count_offsets,
                                        std::vector<std::size_t> complement_offsets) {
    return [=](const std::string& x) {
        Structure a = word_model(x);
        Count out = 0;
        for (std::size_t s = 0; s < sentences.size(); ++s) {
            Count c = count_win(sentences[s], a);
            Count full = pow(Count(2), widths[s]);
            if (c >= full) throw ConsistencyError("count exceeds its oracle block");
            out += c * pow(Count(2), count_offsets[s]) + (full - 1 - c) * pow(Count(2), complement_offsets[s]);
        }
        return out;
    };
}

/// Compiles a prenex two-sorted sentence for input length n. Quantifiers of both
/// sorts become OR/AND gates with n children, the matrix is expanded into minterms,
/// S-atoms become literals, other atoms are decided, and each #-literal becomes an
/// oracle gate over the n input bits.
inline OracleCircuit focw_to_oracle_circuit(const Formula& phi, std::size_t n) {
    if (n == 0) throw DomainError("focw_to_oracle_circuit needs n >= 1");
    check_focw(phi);
    Prenex p = as_prenex_sentence(phi);
    std::vector<Formula> atoms = atoms_of(p.matrix);
    Circuit fragment = matrix_to_minterm_circuit(p.matrix, atoms);

    OracleCircuit out;
    std::map<std::string, std::size_t> sentence_index;
    for (const auto& a : atoms) {
        if (a->op != Op::count_bit) continue;
        auto key = to_text(a->kids[0]);
        if (sentence_index.emplace(key, out.sentences.size()).second) {
            out.sentences.push_back(a->kids[0]);
            out.widths.push_back(bit_length(count_upper_bound(a->kids[0], n)));
        }
    }
    std::size_t r = out.sentences.size();
    out.count_offsets.assign(r, 0);
    out.complement_offsets.assign(r, 0);
    std::size_t total = 0;
    for (std::size_t s = r; s-- > 0;) {
        out.complement_offsets[s] = total;
        total += out.widths[s];
        out.count_offsets[s] = total;
        total += out.widths[s];
    }
    out.oracle = concatenated_count_oracle(out.sentences, out.widths, out.count_offsets, out.complement_offsets);

    detail::SharedBuilder b;
    b.c.input_length = n;
    std::vector<std::size_t> inputs;
    std::map<std::size_t, std::size_t> oracle_gate;
    auto oracle = [&](std::size_t bit) {
        auto it = oracle_gate.find(bit);
        if (it != oracle_gate.end()) return it->second;
        if (inputs.empty())
            for (std::size_t i = 0; i < n; ++i) inputs.push_back(b.lit(true, i));
        std::size_t id = b.c.add(GateKind::oracle, inputs, bit);
        oracle_gate.emplace(bit, id);
        return id;
    };

    std::string blank(n, '0');
    FocwEvaluator numeric(blank);
    std::map<std::string, std::size_t> values;
    auto position = [&](const Term& t) -> std::size_t {
        if (t.kind == Term::Kind::min) return 0;
        if (t.kind == Term::Kind::max) return n - 1;
        return values.at(t.name);
    };
    auto leaf = [&]() -> std::size_t {
        std::vector<std::size_t> minterms;
        for (std::size_t mt : fragment[fragment.root()].children) {
            std::vector<std::size_t> lits;
            bool dead = false;
            for (std::size_t l : fragment[mt].children) {
                const Gate& g = fragment[l];
                bool positive = g.kind == GateKind::input;
                const Formula& a = atoms[g.param];
                if (a->op == Op::count_bit) {
                    std::vector<std::size_t> digits;
                    for (const auto& t : a->args) digits.push_back(position(t));
                    Count v = tuple_value(digits, n);
                    std::size_t s = sentence_index.at(to_text(a->kids[0]));
                    if (v >= out.widths[s]) {
                        // Beyond the block the bit is 0: the positive literal is false.
                        if (positive) dead = true;
                    } else {
                        auto bit = static_cast<std::size_t>(v);
                        lits.push_back(oracle((positive ? out.count_offsets[s] : out.complement_offsets[s]) + bit));
                    }
                } else if (a->symbol == "S") {
                    lits.push_back(b.lit(positive, position(a->args[0])));
                } else if (numeric.atom(a, values) != positive) {
                    dead = true;
                }
                if (dead) break;
            }
            if (!dead) minterms.push_back(b.gate(GateKind::conj, std::move(lits)));
        }
        return b.gate(GateKind::disj, std::move(minterms));
    };
    auto build = [&](auto&& self, std::size_t depth) -> std::size_t {
        if (depth == p.prefix.size()) return leaf();
        std::vector<std::size_t> kids;
        for (std::size_t v = 0; v < n; ++v) {
            values[p.prefix[depth].var] = v;
            kids.push_back(self(self, depth + 1));
        }
        values.erase(p.prefix[depth].var);
        return b.c.add(p.prefix[depth].universal ? GateKind::conj : GateKind::disj, std::move(kids));
    };
    b.c.roots = {build(build, 0)};
    out.circuit = std::move(b.c);
    return out;
}

/// OR over the full minterms of the true rows of a predicate on m bits.
inline Circuit dnf_circuit(std::size_t m, const std::function<bool(const std::string&)>& predicate) {
    if (m > 16) throw DomainError("dnf_circuit: too many inputs (" + std::to_string(m) + ")");
    Circuit c;
    c.input_length = m;
    std::vector<std::size_t> pos, negs;
    for (std::size_t i = 0; i < m; ++i) pos.push_back(c.input(i));
    for (std::size_t i = 0; i < m; ++i) negs.push_back(c.neg_input(i));
    std::vector<std::size_t> rows;
    std::string y(m, '0');
    for (std::size_t bits = 0; bits < (std::size_t{1} << m); ++bits) {
        for (std::size_t i = 0; i < m; ++i) y[i] = (bits >> (m - 1 - i)) & 1u ? '1' : '0';
        if (!predicate(y)) continue;
        std::vector<std::size_t> lits;
        for (std::size_t i = 0; i < m; ++i) lits.push_back(y[i] == '1' ? pos[i] : negs[i]);
        rows.push_back(c.add(GateKind::conj, std::move(lits)));
    }
    c.roots = {c.add(GateKind::disj, std::move(rows))};
    return c;
}

/// Subcircuit deciding one oracle bit: inputs are the gate's ordered child values.
using OracleDecider = std::function<Circuit(std::size_t arity, std::size_t bit)>;

/// Decider built as a DNF of the oracle's truth table.
inline OracleDecider dnf_decider(Oracle oracle) {
    return [oracle = std::move(oracle)](std::size_t arity, std::size_t bit) {
        return dnf_circuit(arity, [&](const std::string& y) { return test_bit(oracle(y), bit); });
    };
}

/// Replaces each oracle gate by the decider's subcircuit, its inputs wired to the
/// gate's children in order. Negated subcircuit inputs are fed by the De Morgan
/// dual of the child (MAJ dualizes with one extra constant-0 child).
inline Circuit inline_oracle(const Circuit& c, const OracleDecider& decider) {
    if (!has_kind(c, GateKind::oracle)) return c;
    require_valid(c);
    Circuit out;
    out.input_length = c.input_length;
    std::vector<std::size_t> map(c.size());
    std::map<std::size_t, std::size_t> dual;

    auto negate = [&](auto&& self, std::size_t id) -> std::size_t {
        auto it = dual.find(id);
        if (it != dual.end()) return it->second;
        Gate g = out[id];
        std::size_t result;
        switch (g.kind) {
        case GateKind::input: result = out.neg_input(g.param); break;
        case GateKind::neg_input: result = out.input(g.param); break;
        case GateKind::conj:
        case GateKind::disj:
        case GateKind::maj: {
            std::vector<std::size_t> kids;
            for (std::size_t ch : g.children) kids.push_back(self(self, ch));
            if (g.kind == GateKind::maj) kids.push_back(out.constant(false));
            GateKind k = g.kind == GateKind::conj ? GateKind::disj : g.kind == GateKind::disj ? GateKind::conj : GateKind::maj;
            result = out.add(k, std::move(kids));
            break;
        }
        default: throw DomainError("cannot negate an oracle gate");
        }
        dual.emplace(id, result);
        return result;
    };

    for (std::size_t id : topological_order(c)) {
        const Gate& g = c[id];
        if (g.kind != GateKind::oracle) {
            Gate copy = g;
            for (auto& ch : copy.children) ch = map[ch];
            map[id] = out.add(std::move(copy));
            continue;
        }
        Circuit d = decider(g.children.size(), g.param);
        require_valid(d);
        if (d.input_length != g.children.size())
            throw DomainError("oracle subcircuit reads " + std::to_string(d.input_length) + " inputs but gate " +
                              std::to_string(id) + " has " + std::to_string(g.children.size()) + " children");
        if (has_kind(d, GateKind::oracle)) throw DomainError("oracle subcircuits must be oracle-free");
        std::vector<std::size_t> sub(d.size());
        for (std::size_t did : topological_order(d)) {
            const Gate& dg = d[did];
            if (dg.kind == GateKind::input) {
                sub[did] = map[g.children[dg.param]];
            } else if (dg.kind == GateKind::neg_input) {
                sub[did] = negate(negate, map[g.children[dg.param]]);
            } else {
                Gate copy = dg;
                for (auto& ch : copy.children) ch = sub[ch];
                sub[did] = out.add(std::move(copy));
            }
        }
        map[id] = sub[d.root()];
    }
    out.roots = {map[c.root()]};
    return out;
}

}  // namespace fowin
