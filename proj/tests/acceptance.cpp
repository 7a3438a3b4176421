// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "fowin/difftest.hpp"

#include <chrono>
#include <functional>
#include <iostream>

namespace {

using namespace fowin;

constexpr std::uint64_t kSeed = 2024;

struct Verdict {
    bool pass = true;
    std::size_t cases = 0;
    std::string note;

    void expect(bool ok, const std::string& what) {
        ++cases;
        if (ok || !pass) {
            pass = pass && ok;
            return;
        }
        pass = false;
        note = what;
    }
};

std::vector<std::string> words(std::size_t lo, std::size_t hi) {
    std::vector<std::string> out;
    for (std::size_t n = lo; n <= hi; ++n)
        for (auto& w : words_of_length(n)) out.push_back(std::move(w));
    return out;
}

std::string on(const Formula& phi, const std::string& w) { return to_text(phi) + " on \"" + w + "\""; }

std::vector<Formula> corpus() { return sentence_corpus(kSeed, 22); }

std::vector<Circuit> circuit_corpus() {
    Rng rng(kSeed);
    std::vector<Circuit> out;
    for (int i = 0; i < 24; ++i) out.push_back(random_circuit(rng, 2 + i % 2));
    return out;
}

Verdict game_tree_agreement() {
    Verdict v;
    auto start = std::chrono::steady_clock::now();
    std::size_t sentences = 0;
    for (const auto& phi : corpus()) {
        if (as_prenex_sentence(phi).prefix.size() > 3) continue;
        ++sentences;
        for (const auto& w : words(1, 4)) {
            Structure a = word_model(w);
            v.expect(count_win(phi, a) == count_win_gametree(phi, a), on(phi, w));
        }
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    v.expect(sentences >= 30, "only " + std::to_string(sentences) + " sentences");
    v.expect(secs < 60, "took " + std::to_string(secs) + " s");
    return v;
}

Verdict skolem_agreement() {
    Verdict v;
    std::vector<Formula> pool;
    for (const auto& phi : corpus()) {
        Prenex p = as_prenex_sentence(phi);
        if (is_skolem_shaped(p) && p.prefix.size() <= 3) pool.push_back(phi);
    }
    Rng rng(kSeed);
    for (int i = 0; i < 12; ++i) pool.push_back(random_skolem_sentence(rng, 2));
    for (const auto& phi : pool)
        for (const auto& w : words(1, 3)) {
            Structure a = word_model(w);
            v.expect(count_skolem(phi, a) == count_win(phi, a), on(phi, w));
        }
    return v;
}

Verdict compiler_agreement() {
    Verdict v;
    for (const auto& phi : corpus())
        for (std::size_t n = 1; n <= 4; ++n) {
            Circuit c = formula_to_circuit(phi, n);
            for (const auto& w : words_of_length(n)) v.expect(count_proof_trees(c, w) == count_win(phi, word_model(w)), on(phi, w));
        }
    return v;
}

Verdict extraction_agreement() {
    Verdict v;
    std::size_t circuits = 0;
    for (const auto& raw : circuit_corpus()) {
        v.expect(raw.size() <= 10, "circuit with more than 10 gates");
        Circuit c = normalize_alternating(raw);
        Extraction e = extract_formula(c);
        auto aux = InterpretationFamily::constant(e.structure);
        ++circuits;
        for (const auto& w : words_of_length(c.input_length))
            v.expect(count_win(e.formula, word_model(w), aux) == count_proof_trees(c, w),
                     "circuit " + std::to_string(circuits) + " on \"" + w + "\"");
    }
    v.expect(circuits >= 20, "too few circuits");
    return v;
}

Verdict minterm_uniqueness() {
    Verdict v;
    for (const auto& phi : corpus()) {
        Prenex p = as_prenex_sentence(phi);
        auto atoms = atoms_of(p.matrix);
        if (atoms.size() > 4) continue;
        Circuit c = matrix_to_minterm_circuit(p.matrix, atoms);
        for (const auto& x : words_of_length(atoms.size())) {
            std::vector<bool> values;
            for (char ch : x) values.push_back(ch == '1');
            Count expect = eval_propositional(p.matrix, atoms, values) ? 1 : 0;
            v.expect(count_proof_trees(c, x) == expect, to_text(p.matrix) + " at " + x);
        }
    }
    return v;
}

Verdict substitution_identity() {
    Verdict v;
    std::vector<Formula> sentences;
    for (const char* text : {"(exists x (S x))", "(forall x (S x))", "(forall x (exists y (and (<= x y) (S y))))",
                             "(exists x (forall y (or (S x) (<= y x))))", "(forall x (forall y (or (<= x y) (S x))))"})
        sentences.push_back(parse_formula(text));
    std::size_t pairs = 0;
    bool strict_seen = false;
    for (const auto& ni : sample_interpretations()) {
        FOInterpretation I = preprocess(read_interpretation(ni.text));
        for (const auto& phi : sentences) {
            Formula sub = substitute_interpretation(phi, I);
            ++pairs;
            for (const auto& w : words(1, 4)) {
                Structure a = word_model(w);
                InterpretedStructure target;
                try {
                    target = apply_interpretation(I, a);
                } catch (const DomainError&) {
                    continue;  // empty target universe
                }
                std::size_t all_tuples = 1;
                for (std::size_t i = 0; i < I.width; ++i) all_tuples *= w.size();
                strict_seen = strict_seen || target.structure.universe_size() < all_tuples;
                v.expect(count_win(sub, a) == count_win(phi, target.structure), on(phi, w) + " via " + ni.name);
            }
        }
    }
    v.expect(pairs >= 15, "too few pairs");
    v.expect(strict_seen, "no strict sub-universe exercised");
    return v;
}

Verdict uniform_agreement() {
    Verdict v;
    for (const auto& phi : corpus()) {
        if (as_prenex_sentence(phi).prefix.size() > 2) continue;
        auto d = uniform_family_for_formula(phi);
        for (std::size_t n = 2; n <= 4; ++n) {
            Circuit u = instantiate_uniform(d, n), direct = formula_to_circuit(phi, n);
            for (const auto& w : words_of_length(n)) v.expect(count_proof_trees(u, w) == count_proof_trees(direct, w), on(phi, w));
        }
    }
    return v;
}

Verdict padded_concatenation() {
    Verdict v;
    Rng rng(kSeed);
    for (int pair = 0; pair < 12; ++pair) {
        std::uint64_t fs = rng(), gs = rng();
        CircuitFamily f{[fs](std::size_t n) {
            Rng r(fs);
            return random_circuit(r, n);
        }};
        CircuitFamily g{[gs](std::size_t n) {
            Rng r(gs);
            return random_circuit(r, n);
        }};
        CircuitFamily h = padded_concat(f, g);
        for (std::size_t n = 1; n <= 4; ++n) {
            Circuit fc = f.at(n), gc = g.at(n), hc = h.at(n);
            Count scale = pow(Count(2), padding_bound(gc));
            v.expect(all_true_bound(gc) < scale, "padding below the all-true bound");
            for (const auto& w : words_of_length(n)) {
                Count gv = count_proof_trees(gc, w);
                v.expect(gv < scale, "padding underflow on \"" + w + "\"");
                v.expect(count_proof_trees(hc, w) == count_proof_trees(fc, w) * scale + gv,
                         "pair " + std::to_string(pair) + " on \"" + w + "\"");
            }
        }
    }
    return v;
}

Verdict comparison_agreement() {
    Verdict v;
    auto pool = sentence_corpus(kSeed, 6);
    for (std::size_t n = 1; n <= 4; ++n) {
        std::vector<std::size_t> width;
        for (const auto& p : pool) width.push_back(comparison_width(p, p, n));
        for (const auto& w : words_of_length(n)) {
            FocwEvaluator ev(w);
            for (std::size_t i = 0; i < pool.size(); ++i)
                for (std::size_t j = 0; j < pool.size(); ++j) {
                    bool got = compare_counts_focw(ev, pool[i], pool[j], std::max(width[i], width[j]));
                    v.expect(got == (ev.count(pool[i]) > ev.count(pool[j])), on(pool[i], w) + " vs " + to_text(pool[j]));
                }
        }
    }
    return v;
}

Verdict oracle_circuits() {
    Verdict v;
    auto pool = sentence_corpus(kSeed, 4);
    Rng rng(kSeed);
    for (int trial = 0; trial < 25; ++trial) {
        Formula phi = random_focw(rng, pool);
        for (std::size_t n = 1; n <= 4; ++n) {
            auto oc = focw_to_oracle_circuit(phi, n);
            Circuit inlined = inline_oracle(oc.circuit, dnf_decider(oc.oracle));
            v.expect(!has_kind(inlined, GateKind::oracle), "oracle gate left after inlining");
            for (const auto& w : words_of_length(n)) {
                bool expect = focw_evaluate(phi, w);
                v.expect(evaluate_circuit(oc.circuit, w, oc.oracle) == expect, "oracle circuit for " + on(phi, w));
                v.expect(evaluate_circuit(inlined, w) == expect, "inlined circuit for " + on(phi, w));
            }
        }
    }
    // One oracle gate over 8 free children: all 256 child patterns.
    Circuit c;
    c.input_length = 8;
    std::vector<std::size_t> kids;
    for (std::size_t i = 0; i < 8; ++i) kids.push_back(i % 3 ? c.input(i) : c.neg_input(i));
    c.roots = {c.add(GateKind::oracle, kids, 1)};
    Oracle weight = [](const std::string& y) {
        Count s = 0;
        for (std::size_t i = 0; i < y.size(); ++i)
            if (y[i] == '1') s += i + 1;
        return s;
    };
    Circuit inlined = inline_oracle(c, dnf_decider(weight));
    for (const auto& w : words_of_length(8))
        v.expect(evaluate_circuit(inlined, w) == evaluate_circuit(c, w, weight), "child pattern " + w);
    return v;
}

Verdict normalization_neutrality() {
    Verdict v;
    std::vector<Circuit> circuits = circuit_corpus();
    Rng rng(kSeed + 1);
    for (int i = 0; i < 12; ++i) circuits.push_back(random_circuit(rng, 4));
    for (const auto& phi : sentence_corpus(kSeed, 4)) circuits.push_back(formula_to_circuit(phi, 2));
    for (std::size_t i = 0; i < circuits.size(); ++i) {
        const Circuit& c = circuits[i];
        Circuit norm = normalize_alternating(c), tree = unfold_to_tree(c);
        for (const auto& w : words_of_length(c.input_length)) {
            Count base = count_proof_trees(c, w);
            v.expect(count_proof_trees(norm, w) == base, "normalized circuit " + std::to_string(i) + " on \"" + w + "\"");
            v.expect(count_proof_trees(tree, w) == base, "unfolded circuit " + std::to_string(i) + " on \"" + w + "\"");
        }
    }
    return v;
}

}  // namespace

int main() {
    std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
        {"count_win matches the game tree", game_tree_agreement},
        {"Skolem tuples match winning strategies", skolem_agreement},
        {"compiled circuits match count_win", compiler_agreement},
        {"extracted formulas match proof trees", extraction_agreement},
        {"minterm fragments have at most one proof tree", minterm_uniqueness},
        {"substitution matches applying the interpretation", substitution_identity},
        {"uniform circuits match the direct compiler", uniform_agreement},
        {"padded concatenation counts f * 2^p + g", padded_concatenation},
        {"comparison formula matches integer comparison", comparison_agreement},
        {"oracle circuits and inlining match the evaluator", oracle_circuits},
        {"normalization and unfolding keep counts", normalization_neutrality},
    };
    bool all = true;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v.pass = false;
            v.note = std::string("exception: ") + e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        all = all && v.pass;
        std::cout << "criterion " << i + 1 << ": " << (v.pass ? "PASS" : "FAIL") << "  " << criteria[i].first << " ("
                  << v.cases << " checks, " << secs << " s)";
        if (!v.pass) std::cout << "  first failure: " << v.note;
        std::cout << std::endl;
    }
    return all ? 0 : 1;
}
