#pragma once

// Seeded cross-module differential checks. Every check runs exhaustively over
// the words of each tested length; the first failure of a check (shortest word
// first) is kept as its counterexample.

#include "fowin/compiler.hpp"
#include "fowin/corpus.hpp"
#include "fowin/counting.hpp"
#include "fowin/interp.hpp"
#include "fowin/threshold.hpp"
#include "fowin/uniform.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace fowin {

/// All bit strings of length n in lexicographic order.
inline std::vector<std::string> words_of_length(std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t bits = 0; bits < (std::size_t{1} << n); ++bits) {
        std::string w(n, '0');
        for (std::size_t i = 0; i < n; ++i) w[i] = (bits >> (n - 1 - i)) & 1u ? '1' : '0';
        out.push_back(std::move(w));
    }
    return out;
}

struct CheckResult {
    std::string name;
    std::size_t cases = 0;
    std::size_t failures = 0;
    std::string counterexample;
};

struct DifftestReport {
    std::uint64_t seed = 0;
    std::size_t budget = 0;
    std::vector<CheckResult> checks;

    bool ok() const {
        for (const auto& c : checks)
            if (c.failures) return false;
        return true;
    }
};

struct DifftestOptions {
    std::uint64_t seed = 1;
    std::size_t budget = 8;  // random items per corpus
    std::size_t max_n = 4;
    std::vector<Circuit> injected;  // extra circuits for the circuit checks
};

namespace detail {

class CheckRunner {
  public:
    explicit CheckRunner(CheckResult& r) : r_(r) {}

    /// One case; `body` returns an empty string on success or a description of the mismatch.
    void run(const std::function<std::string()>& body) {
        ++r_.cases;
        std::string why;
        try {
            why = body();
        } catch (const std::exception& e) {
            why = std::string("exception: ") + e.what();
        }
        if (why.empty()) return;
        if (!r_.failures) r_.counterexample = why;
        ++r_.failures;
    }

  private:
    CheckResult& r_;
};

inline std::string mismatch(const std::string& what, const Count& a, const Count& b) {
    if (a == b) return {};
    return what + ": " + to_decimal(a) + " != " + to_decimal(b);
}

}  // namespace detail

inline DifftestReport run_difftest(const DifftestOptions& opt) {
    DifftestReport report;
    report.seed = opt.seed;
    report.budget = opt.budget;
    report.checks.reserve(16);  // checks hold references into this vector
    auto check = [&](const std::string& name) -> CheckResult& {
        report.checks.push_back({name});
        return report.checks.back();
    };
    auto sentences = sentence_corpus(opt.seed, opt.budget);
    auto at = [](const Formula& phi, const std::string& w) { return to_text(phi) + " on \"" + w + "\""; };

    {
        CheckResult& r = check("win=nested");
        detail::CheckRunner run(r);
        for (const auto& phi : sentences)
            for (std::size_t n = 1; n <= opt.max_n; ++n)
                for (const auto& w : words_of_length(n))
                    run.run([&] {
                        Structure a = word_model(w);
                        auto m = detail::mismatch(at(phi, w), count_win(phi, a), count_win_nested(phi, a));
                        return m;
                    });
    }
    {
        CheckResult& r = check("win=gametree");
        detail::CheckRunner run(r);
        for (const auto& phi : sentences)
            for (std::size_t n = 1; n <= opt.max_n; ++n)
                for (const auto& w : words_of_length(n))
                    run.run([&] {
                        Structure a = word_model(w);
                        return detail::mismatch(at(phi, w), count_win(phi, a), count_win_gametree(phi, a));
                    });
    }
    {
        CheckResult& r = check("skolem=win");
        detail::CheckRunner run(r);
        Rng rng(opt.seed ^ 0x5c);
        for (std::size_t i = 0; i < opt.budget; ++i) {
            Formula phi = random_skolem_sentence(rng, 2);
            for (std::size_t n = 1; n <= std::min<std::size_t>(opt.max_n, 3); ++n)
                for (const auto& w : words_of_length(n))
                    run.run([&] {
                        Structure a = word_model(w);
                        return detail::mismatch(at(phi, w), count_skolem(phi, a), count_win(phi, a));
                    });
        }
    }
    {
        CheckResult& r = check("compile=win");
        detail::CheckRunner run(r);
        for (const auto& phi : sentences)
            for (std::size_t n = 1; n <= opt.max_n; ++n) {
                Circuit c = formula_to_circuit(phi, n);
                for (const auto& w : words_of_length(n))
                    run.run([&] {
                        return detail::mismatch(at(phi, w), count_proof_trees(c, w), count_win(phi, word_model(w)));
                    });
            }
    }
    {
        CheckResult& r = check("minterm-unique");
        detail::CheckRunner run(r);
        for (const auto& phi : sentences) {
            Prenex p = as_prenex(phi);
            auto atoms = atoms_of(p.matrix);
            Circuit c = matrix_to_minterm_circuit(p.matrix, atoms);
            for (const auto& x : words_of_length(atoms.size()))
                run.run([&] {
                    std::vector<bool> v;
                    for (char ch : x) v.push_back(ch == '1');
                    Count expect = eval_propositional(p.matrix, atoms, v) ? 1 : 0;
                    return detail::mismatch(to_text(p.matrix) + " at atoms " + x, count_proof_trees(c, x), expect);
                });
        }
    }

    // Circuits: seeded random ones per input length plus injected ones.
    std::vector<Circuit> circuits;
    {
        Rng rng(opt.seed ^ 0xc1);
        for (std::size_t n = 1; n <= std::min<std::size_t>(opt.max_n, 3); ++n)
            for (std::size_t i = 0; i < opt.budget; ++i) circuits.push_back(random_circuit(rng, n));
    }
    const std::size_t random_count = circuits.size();  // injected ones may have constant leaves
    if (!opt.injected.empty()) {
        CheckResult& r = check("injected-valid");
        detail::CheckRunner run(r);
        for (std::size_t i = 0; i < opt.injected.size(); ++i)
            run.run([&]() -> std::string {
                auto diags = validate(opt.injected[i]);
                if (diags.empty()) return {};
                return "injected circuit " + std::to_string(i) + ": " + to_string(diags.front());
            });
        for (const auto& c : opt.injected)
            if (validate(c).empty()) circuits.push_back(c);
    }
    auto circuit_text = [](const Circuit& c, const std::string& w) {
        return "circuit on \"" + w + "\":\n" + write_circuit(c);
    };
    {
        CheckResult& r = check("normalize-neutral");
        detail::CheckRunner run(r);
        for (const auto& c : circuits) {
            Circuit norm = normalize_alternating(c);
            Circuit tree = unfold_to_tree(c);
            for (const auto& w : words_of_length(c.input_length))
                run.run([&] {
                    Count base = count_proof_trees(c, w);
                    auto m = detail::mismatch("normalized " + circuit_text(c, w), count_proof_trees(norm, w), base);
                    if (m.empty()) m = detail::mismatch("unfolded " + circuit_text(c, w), count_proof_trees(tree, w), base);
                    return m;
                });
        }
    }
    {
        CheckResult& r = check("extract=prooftrees");
        detail::CheckRunner run(r);
        for (std::size_t i = 0; i < random_count; ++i) {
            const Circuit& c = circuits[i];
            if (c.input_length < 2) continue;
            Circuit norm = normalize_alternating(c);
            Extraction e = extract_formula(norm);
            auto aux = InterpretationFamily::constant(e.structure);
            for (const auto& w : words_of_length(c.input_length))
                run.run([&] {
                    return detail::mismatch(circuit_text(c, w), count_win(e.formula, word_model(w), aux),
                                            count_proof_trees(norm, w));
                });
        }
    }
    {
        CheckResult& r = check("substitute=apply");
        detail::CheckRunner run(r);
        // Fixed sentences: substitution multiplies the prefix by the interpretation width.
        std::vector<Formula> small;
        for (const char* text : {"(exists x (S x))", "(forall x (S x))", "(forall x (exists y (and (<= x y) (S y))))",
                                 "(exists x (forall y (or (S x) (<= y x))))", "(forall x (forall y (or (<= x y) (S x))))"})
            small.push_back(parse_formula(text));
        for (const auto& ni : sample_interpretations()) {
            FOInterpretation I = preprocess(read_interpretation(ni.text));
            for (const auto& phi : small) {
                Formula sub = substitute_interpretation(phi, I);
                for (std::size_t n = 1; n <= opt.max_n; ++n)
                    for (const auto& w : words_of_length(n)) {
                        Structure a = word_model(w);
                        std::optional<InterpretedStructure> target;
                        try {
                            target = apply_interpretation(I, a);
                        } catch (const DomainError&) {
                            continue;  // empty target universe
                        }
                        run.run([&] {
                            return detail::mismatch(at(phi, w) + " via " + ni.name, count_win(sub, a),
                                                    count_win(phi, target->structure));
                        });
                    }
            }
        }
    }
    {
        CheckResult& r = check("uniform=direct");
        detail::CheckRunner run(r);
        for (const auto& phi : sentences) {
            if (as_prenex_sentence(phi).prefix.size() > 2) continue;
            auto d = uniform_family_for_formula(phi);
            for (std::size_t n = uniform_min_n; n <= opt.max_n; ++n) {
                Circuit u = instantiate_uniform(d, n);
                Circuit direct = formula_to_circuit(phi, n);
                for (const auto& w : words_of_length(n))
                    run.run([&] { return detail::mismatch(at(phi, w), count_proof_trees(u, w), count_proof_trees(direct, w)); });
            }
        }
    }
    {
        CheckResult& r = check("padded-concat");
        detail::CheckRunner run(r);
        Rng rng(opt.seed ^ 0x9c);
        for (std::size_t i = 0; i < opt.budget; ++i) {
            std::uint64_t fs = rng(), gs = rng();
            CircuitFamily f{[fs](std::size_t n) {
                Rng x(fs);
                return random_circuit(x, n);
            }};
            CircuitFamily g{[gs](std::size_t n) {
                Rng x(gs);
                return random_circuit(x, n);
            }};
            CircuitFamily h = padded_concat(f, g);
            for (std::size_t n = 1; n <= opt.max_n; ++n) {
                Circuit fc = f.at(n), gc = g.at(n), hc = h.at(n);
                std::size_t p = padding_bound(gc);
                for (const auto& w : words_of_length(n))
                    run.run([&] {
                        Count gv = count_proof_trees(gc, w);
                        if (gv >= pow(Count(2), p)) return std::string("padding underflow on \"") + w + "\"";
                        return detail::mismatch("padded concat on \"" + w + "\"", count_proof_trees(hc, w),
                                                count_proof_trees(fc, w) * pow(Count(2), p) + gv);
                    });
            }
        }
    }
    {
        CheckResult& r = check("comparison");
        detail::CheckRunner run(r);
        std::vector<Formula> pool(sentences.begin(), sentences.begin() + static_cast<long>(std::min<std::size_t>(sentences.size(), 10)));
        for (std::size_t n = 1; n <= opt.max_n; ++n) {
            std::vector<std::size_t> width;
            for (const auto& p : pool) width.push_back(comparison_width(p, p, n));
            for (const auto& w : words_of_length(n)) {
                FocwEvaluator ev(w);
                for (std::size_t i = 0; i < pool.size(); ++i)
                    for (std::size_t j = 0; j < pool.size(); ++j)
                        run.run([&]() -> std::string {
                            bool got = compare_counts_focw(ev, pool[i], pool[j], std::max(width[i], width[j]));
                            if (got == (ev.count(pool[i]) > ev.count(pool[j]))) return {};
                            return "compare " + to_text(pool[i]) + " > " + to_text(pool[j]) + " on \"" + w + "\"";
                        });
            }
        }
    }
    {
        CheckResult& oc = check("oracle-circuit");
        CheckResult& il = check("inline-oracle");
        detail::CheckRunner run_oc(oc), run_il(il);
        std::vector<Formula> pool(sentences.begin(), sentences.begin() + static_cast<long>(std::min<std::size_t>(sentences.size(), 6)));
        Rng rng(opt.seed ^ 0x0c);
        for (std::size_t i = 0; i < opt.budget; ++i) {
            Formula phi = random_focw(rng, pool);
            for (std::size_t n = 1; n <= opt.max_n; ++n) {
                auto compiled = focw_to_oracle_circuit(phi, n);
                Circuit inlined = inline_oracle(compiled.circuit, dnf_decider(compiled.oracle));
                for (const auto& w : words_of_length(n)) {
                    bool expect = focw_evaluate(phi, w);
                    run_oc.run([&]() -> std::string {
                        if (evaluate_circuit(compiled.circuit, w, compiled.oracle) == expect) return {};
                        return "oracle circuit for " + at(phi, w);
                    });
                    run_il.run([&]() -> std::string {
                        if (evaluate_circuit(inlined, w) == expect) return {};
                        return "inlined circuit for " + at(phi, w);
                    });
                }
            }
        }
    }
    return report;
}

inline std::string format_report(const DifftestReport& r) {
    std::string out = "difftest seed " + std::to_string(r.seed) + " budget " + std::to_string(r.budget) + "\n";
    for (const auto& c : r.checks) {
        out += (c.failures ? "FAIL " : "pass ") + c.name + " " + std::to_string(c.cases - c.failures) + "/" +
               std::to_string(c.cases) + "\n";
        if (c.failures) out += "  counterexample: " + c.counterexample + "\n";
    }
    return out;
}

}  // namespace fowin
