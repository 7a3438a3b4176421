#pragma once

// Seeded random sentences and circuits for differential testing. Draws use
// rng() % k only, so a seed yields the same corpus on every platform.

#include "fowin/circuit.hpp"
#include "fowin/formula.hpp"

#include <random>
#include <string>
#include <vector>

namespace fowin {

using Rng = std::mt19937_64;

struct SentenceOptions {
    std::size_t min_prefix = 1;
    std::size_t max_prefix = 3;
    std::size_t max_atoms = 4;
    bool arithmetic = true;  // allow +, *, bit atoms
};

namespace detail {

inline std::size_t draw(Rng& rng, std::size_t k) { return static_cast<std::size_t>(rng() % k); }

inline Term random_term(Rng& rng, const std::vector<std::string>& vars) {
    std::size_t r = draw(rng, 10);
    if (r == 0) return Term::min();
    if (r == 1) return Term::max();
    return Term::var(vars[draw(rng, vars.size())]);
}

inline Formula random_atom(Rng& rng, const std::vector<std::string>& vars, bool arithmetic) {
    auto t = [&] { return random_term(rng, vars); };
    std::size_t r = draw(rng, arithmetic ? 9 : 7);
    switch (r) {
    case 0:
    case 1:
    case 2: return f::atom("S", {t()});
    case 3:
    case 4: return f::atom("<=", {t(), t()});
    case 5:
    case 6: return f::atom("=", {t(), t()});
    case 7: return f::atom("bit", {t(), t()});
    default: return f::atom(draw(rng, 2) ? "+" : "*", {t(), t(), t()});
    }
}

}  // namespace detail

/// Prenex sentence over S, <=, = (and built-in arithmetic) with variables x0, x1, ...
inline Formula random_sentence(Rng& rng, const SentenceOptions& opt = {}) {
    std::size_t m = opt.min_prefix + detail::draw(rng, opt.max_prefix - opt.min_prefix + 1);
    std::vector<std::string> vars;
    for (std::size_t i = 0; i < m; ++i) vars.push_back("x" + std::to_string(i));
    std::size_t atom_count = 1 + detail::draw(rng, opt.max_atoms);
    std::vector<Formula> pool;
    for (std::size_t i = 0; i < atom_count; ++i) pool.push_back(detail::random_atom(rng, vars, opt.arithmetic));
    // Combine leaves (each atom used once or twice, possibly negated) into one matrix.
    std::vector<Formula> parts;
    for (const auto& a : pool) {
        parts.push_back(detail::draw(rng, 3) == 0 ? f::neg(a) : a);
        if (detail::draw(rng, 4) == 0) parts.push_back(detail::draw(rng, 2) ? f::neg(a) : a);
    }
    while (parts.size() > 1) {
        std::size_t i = detail::draw(rng, parts.size());
        Formula a = parts[i];
        parts.erase(parts.begin() + static_cast<long>(i));
        std::size_t j = detail::draw(rng, parts.size());
        Formula b = parts[j];
        Formula c = detail::draw(rng, 2) ? f::conj({a, b}) : f::disj({a, b});
        if (detail::draw(rng, 6) == 0) c = f::neg(c);
        parts[j] = c;
    }
    Formula phi = parts[0];
    for (std::size_t i = m; i-- > 0;)
        phi = detail::draw(rng, 2) ? f::exists(vars[i], phi) : f::forall(vars[i], phi);
    return phi;
}

/// Fixed sentences followed by `random_count` seeded random ones.
inline std::vector<Formula> sentence_corpus(std::uint64_t seed, std::size_t random_count,
                                            const SentenceOptions& opt = {}) {
    std::vector<Formula> out;
    for (const char* s : {
             "(exists x (S x))",
             "(forall x (S x))",
             "(forall x (exists y (S y)))",
             "(exists x (forall y (or (S x) (<= y x))))",
             "(exists x (forall y (exists z (and (<= x z) (S z)))))",
             "(exists y1 (forall z1 (exists y2 (or (not (<= y1 z1)) (S y2)))))",
             "(forall x (exists y (and (<= x y) (or (S y) (= y (max))))))",
             "(exists x (exists y (and (+ x x y) (S y) (not (S x)))))",
         })
        out.push_back(parse_formula(s));
    Rng rng(seed);
    for (std::size_t i = 0; i < random_count; ++i) out.push_back(random_sentence(rng, opt));
    return out;
}

/// Prenex sentences whose prefix is exists (forall exists)*.
inline Formula random_skolem_sentence(Rng& rng, std::size_t max_k, const SentenceOptions& opt = {}) {
    std::size_t k = 1 + detail::draw(rng, max_k);
    SentenceOptions o = opt;
    o.min_prefix = o.max_prefix = 2 * k - 1;
    Formula phi = random_sentence(rng, o);
    // Re-quantify with the alternating shape.
    Prenex p = as_prenex(phi);
    for (std::size_t i = 0; i < p.prefix.size(); ++i) p.prefix[i].universal = i % 2 == 1;
    return to_formula(p);
}

/// Prenex two-sorted sentence with 1..max_prefix variables of random sort. Matrix
/// atoms: S and <= over first-sort variables, <= and = over second-sort ones, and
/// #-atoms over sentences drawn from `embedded`, indexed by second-sort terms.
inline Formula random_focw(Rng& rng, const std::vector<Formula>& embedded, std::size_t max_prefix = 3,
                           std::size_t max_index = 1) {
    if (embedded.empty()) throw DomainError("random_focw needs embedded sentences");
    std::size_t m = 1 + detail::draw(rng, max_prefix);
    std::vector<std::string> elements, numbers;
    std::vector<Quantifier> prefix;
    for (std::size_t i = 0; i < m; ++i) {
        bool number = detail::draw(rng, 2) == 0;
        std::string v = (number ? "j" : "y") + std::to_string(i);
        (number ? numbers : elements).push_back(v);
        prefix.push_back({detail::draw(rng, 2) == 0, v, number ? Sort::number : Sort::element});
    }
    auto term = [&](const std::vector<std::string>& vars) {
        std::size_t r = detail::draw(rng, vars.empty() ? 2 : 6);
        if (r == 0) return Term::min();
        if (r == 1) return Term::max();
        return Term::var(vars[detail::draw(rng, vars.size())]);
    };
    auto atom = [&]() -> Formula {
        switch (detail::draw(rng, 5)) {
        case 0: return f::atom("S", {term(elements)});
        case 1: return f::atom("<=", {term(elements), term(elements)});
        case 2: return f::atom(detail::draw(rng, 2) ? "<=" : "=", {term(numbers), term(numbers)});
        default: {
            std::vector<Term> idx;
            std::size_t width = 1 + detail::draw(rng, max_index);
            for (std::size_t i = 0; i < width; ++i) idx.push_back(term(numbers));
            return f::count_bit(embedded[detail::draw(rng, embedded.size())], std::move(idx));
        }
        }
    };
    std::vector<Formula> parts;
    std::size_t count = 1 + detail::draw(rng, 3);
    for (std::size_t i = 0; i < count; ++i) parts.push_back(detail::draw(rng, 3) == 0 ? f::neg(atom()) : atom());
    while (parts.size() > 1) {
        Formula a = parts.back();
        parts.pop_back();
        std::size_t j = detail::draw(rng, parts.size());
        parts[j] = detail::draw(rng, 2) ? f::conj({parts[j], a}) : f::disj({parts[j], a});
    }
    return to_formula({prefix, parts[0]});
}

struct NamedInterpretation {
    std::string name;
    std::string text;  // interpretation text form
};

/// Word-to-word interpretations of width <= 2, including strict sub-universes.
inline const std::vector<NamedInterpretation>& sample_interpretations() {
    static const std::vector<NamedInterpretation> all{
        {"identity", "(interpretation (width 1) (universe (x) (true)) (relation <= (x y) (<= x y)) (relation S (x) (S x)))"},
        {"ones-only",
         "(interpretation (width 1) (universe (x) (S x)) (relation S (x) (S x)) (relation <= (x y) (<= x y)))"},
        {"square",
         "(interpretation (width 2) (universe (x1 x2) (true)) (relation S (x1 x2) (and (S x1) (S x2)))"
         " (relation <= (x1 x2 y1 y2) (or (and (<= x1 y1) (not (= x1 y1))) (and (= x1 y1) (<= x2 y2)))))"},
        {"reverse",
         "(interpretation (width 1) (universe (x) (true)) (relation S (x) (exists y (and (+ x y (max)) (S y))))"
         " (relation <= (x y) (<= x y)))"},
        {"pairs",
         "(interpretation (width 2) (universe (a b) (and (<= a b) (not (= a b))))"
         " (relation S (a b) (or (and (S a) (not (S b))) (and (S b) (not (S a)))))"
         " (relation <= (a b c d) (or (and (<= a c) (not (= a c))) (and (= a c) (<= b d)))))"},
        {"later-zero",
         "(interpretation (width 1) (universe (x) (and (S x) (exists y (and (<= x y) (not (S y))))))"
         " (relation S (x) (forall y (or (not (<= y x)) (S y)))) (relation <= (x y) (<= x y)))"},
    };
    return all;
}

struct CircuitOptions {
    std::size_t max_gates = 10;
    std::size_t max_depth = 3;
    std::size_t max_fanin = 3;
};

/// Random AND/OR DAG over literal leaves; the last gate is the root.
inline Circuit random_circuit(Rng& rng, std::size_t input_length, const CircuitOptions& opt = {}) {
    if (input_length == 0) throw DomainError("random circuits need at least one input");
    std::size_t total = 2 + detail::draw(rng, opt.max_gates - 1);
    std::size_t literals = 1 + detail::draw(rng, std::min<std::size_t>(4, total - 1));
    Circuit c;
    c.input_length = input_length;
    std::vector<std::size_t> height;
    for (std::size_t i = 0; i < literals; ++i) {
        std::size_t idx = detail::draw(rng, input_length);
        if (detail::draw(rng, 3) == 0)
            c.neg_input(idx);
        else
            c.input(idx);
        height.push_back(0);
    }
    while (c.size() < total) {
        std::vector<std::size_t> eligible;
        for (std::size_t id = 0; id < c.size(); ++id)
            if (height[id] + 1 <= opt.max_depth) eligible.push_back(id);
        std::size_t fanin = 1 + detail::draw(rng, opt.max_fanin);
        std::vector<std::size_t> kids;
        std::size_t h = 0;
        // Prefer the most recent gate so the DAG tends to stay connected.
        kids.push_back(eligible.back());
        for (std::size_t i = 1; i < fanin; ++i) kids.push_back(eligible[detail::draw(rng, eligible.size())]);
        for (std::size_t k : kids) h = std::max(h, height[k] + 1);
        c.add(detail::draw(rng, 2) ? GateKind::conj : GateKind::disj, std::move(kids));
        height.push_back(h);
    }
    c.roots = {c.size() - 1};
    return c;
}

}  // namespace fowin
