#include "fowin/corpus.hpp"
#include "fowin/threshold.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

namespace {

using namespace fowin;
using fowin::test_support::words_up_to;

const char* kExistsS = "(exists x (S x))";

TEST(Focw, CountBitAtoms) {
    EXPECT_FALSE(focw_evaluate(parse_formula("(# (exists x (S x)) (min))"), "101"));
    EXPECT_TRUE(focw_evaluate(parse_formula("(exists j :num (# (exists x (S x)) j))"), "101"));
    EXPECT_TRUE(focw_evaluate(parse_formula("(# (exists x (S x)) (min))"), "100"));
}

TEST(Focw, LittleEndianTupleValue) {
    // forall x exists y: count 27 = 11011b at n = 3; (max)(min) is bit 2, (1 1) is bit 4.
    const char* psi = "(forall x (exists y (true)))";
    auto bit = [&](const char* idx) {
        return focw_evaluate(parse_formula(std::string("(# ") + psi + " " + idx + ")"), "000");
    };
    EXPECT_TRUE(bit("(min) (min)"));
    EXPECT_FALSE(bit("(max) (min)"));
    EXPECT_FALSE(bit("(min) (max)"));
    EXPECT_TRUE(focw_evaluate(parse_formula(std::string("(exists a :num (exists b :num (and (= a b) (not (= a (min))) (# ") +
                                            psi + " a b))))"),
                              "000"));
}

TEST(Focw, SortViolations) {
    EXPECT_THROW(focw_evaluate(parse_formula("(exists j :num (S j))"), "10"), DomainError);
    EXPECT_THROW(focw_evaluate(parse_formula("(exists x (exists j :num (<= x j)))"), "10"), DomainError);
    EXPECT_THROW(focw_evaluate(parse_formula("(exists x (# (exists y (S y)) x))"), "10"), DomainError);
    EXPECT_THROW(focw_evaluate(parse_formula("(exists x (+ x x x))"), "10"), DomainError);
    EXPECT_THROW(focw_evaluate(parse_formula("(# (S y) (min))"), "10"), DomainError);
    EXPECT_THROW(focw_evaluate(parse_formula("(# (exists y (S y)) (min))"), ""), DomainError);
}

TEST(Focw, AgreesWithCountBitsOnCorpus) {
    auto corpus = sentence_corpus(3, 6);
    for (const auto& w : words_up_to(3, 1)) {
        std::size_t n = w.size();
        for (const auto& psi : corpus) {
            Count c = count_win(psi, word_model(w));
            auto any_below = [&](std::size_t limit) {
                for (std::size_t i = 0; i < limit; ++i)
                    if (test_bit(c, i)) return true;
                return false;
            };
            std::string s = to_text(psi);
            EXPECT_EQ(focw_evaluate(parse_formula("(# " + s + " (min))"), w), test_bit(c, 0));
            EXPECT_EQ(focw_evaluate(parse_formula("(# " + s + " (max))"), w), test_bit(c, n - 1));
            EXPECT_EQ(focw_evaluate(parse_formula("(exists j :num (# " + s + " j))"), w), any_below(n));
            EXPECT_EQ(focw_evaluate(parse_formula("(exists j :num (exists k :num (# " + s + " j k)))"), w),
                      any_below(n * n));
        }
    }
}

TEST(Comparison, Examples) {
    Formula two = parse_formula(kExistsS);
    Formula one = parse_formula("(exists x (and (S x) (= x (min))))");
    EXPECT_TRUE(compare_counts_focw(two, one, 1, "101"));
    EXPECT_FALSE(compare_counts_focw(one, two, 1, "101"));
    for (const auto& w : words_up_to(4, 1)) EXPECT_FALSE(compare_counts_focw(two, two, comparison_width(two, two, w.size()), w));
}

TEST(Comparison, WidthTooSmallIsReported) {
    Formula big = parse_formula("(forall x (exists y (true)))");
    EXPECT_THROW(compare_counts_focw(big, big, 1, "0000"), DomainError);
    EXPECT_EQ(comparison_width(big, big, 4), 2u);  // 4^4 = 256 needs 9 bits
}

TEST(Comparison, AgreesWithBigIntegerComparison) {
    auto corpus = sentence_corpus(5, 6);
    for (std::size_t n = 1; n <= 4; ++n) {
        std::vector<std::size_t> width;
        for (const auto& p : corpus) width.push_back(comparison_width(p, p, n));
        for (const auto& w : words_up_to(n, n)) {
            FocwEvaluator ev(w);
            for (std::size_t i = 0; i < corpus.size(); ++i)
                for (std::size_t j = 0; j < corpus.size(); ++j) {
                    std::size_t m = std::max(width[i], width[j]);
                    ASSERT_EQ(compare_counts_focw(ev, corpus[i], corpus[j], m), ev.count(corpus[i]) > ev.count(corpus[j]))
                        << to_text(corpus[i]) << " vs " << to_text(corpus[j]) << " on " << w;
                }
        }
    }
}

TEST(Pac0, StrictComparison) {
    CircuitFamily six{[](std::size_t n) { return constant_count_circuit(n, 6); }};
    CircuitFamily five{[](std::size_t n) { return constant_count_circuit(n, 5); }};
    EXPECT_TRUE(pac0_accepts(six, five, "01"));
    EXPECT_FALSE(pac0_accepts(five, six, "01"));
    EXPECT_FALSE(pac0_accepts(six, six, "01"));
}

TEST(Pac0, AgreesWithComparisonFormula) {
    auto corpus = sentence_corpus(9, 4);
    for (const auto& p1 : corpus)
        for (const auto& p2 : corpus) {
            CircuitFamily f{[&](std::size_t n) { return formula_to_circuit(p1, n); }};
            CircuitFamily h{[&](std::size_t n) { return formula_to_circuit(p2, n); }};
            for (const auto& w : words_up_to(3, 1))
                ASSERT_EQ(pac0_accepts(f, h, w), compare_counts_focw(p1, p2, comparison_width(p1, p2, w.size()), w));
        }
}

TEST(PaddedConcat, ConstantToys) {
    CircuitFamily three{[](std::size_t n) { return constant_count_circuit(n, 3); }};
    CircuitFamily five{[](std::size_t n) { return constant_count_circuit(n, 5); }};
    CircuitFamily zero{[](std::size_t n) { return constant_count_circuit(n, 0); }};
    EXPECT_EQ(count_proof_trees(padded_concat(three, five, {4}).at(2), "01"), Count(53));
    EXPECT_EQ(count_proof_trees(padded_concat(three, zero, {4}).at(2), "01"), Count(48));
    EXPECT_EQ(count_proof_trees(padded_concat(three, five).at(2), "01"), Count(3 * 8 + 5));
    EXPECT_THROW(padded_concat(three, five, {2}).at(2), DomainError);
}

TEST(PaddedConcat, RandomFamilies) {
    Rng rng(17);
    for (int trial = 0; trial < 12; ++trial) {
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
        CircuitFamily h2 = padded_concat(f, g, {2, 1});
        for (const auto& w : words_up_to(4, 1)) {
            std::size_t n = w.size();
            Circuit gc = g.at(n);
            Count expect = count_proof_trees(f.at(n), w) * pow(Count(2), padding_bound(gc)) + count_proof_trees(gc, w);
            ASSERT_EQ(count_proof_trees(h.at(n), w), expect);
            ASSERT_LT(count_proof_trees(gc, w), pow(Count(2), padding_bound(gc)));
            if (padding_bound(gc) <= n + 2) {
                ASSERT_EQ(count_proof_trees(h2.at(n), w),
                          count_proof_trees(f.at(n), w) * pow(Count(2), n + 2) + count_proof_trees(gc, w));
            }
        }
    }
}

TEST(OracleCircuit, SingleSentence) {
    Formula phi = parse_formula("(# (exists x (S x)) (min))");
    auto oc = focw_to_oracle_circuit(phi, 3);
    EXPECT_FALSE(evaluate_circuit(oc.circuit, "110", oc.oracle));
    EXPECT_EQ(evaluate_circuit(oc.circuit, "110", oc.oracle), focw_evaluate(phi, "110"));
    EXPECT_TRUE(evaluate_circuit(oc.circuit, "100", oc.oracle));
}

TEST(OracleCircuit, TwoSentencesUseOffsetBlocks) {
    Formula phi = parse_formula("(and (# (exists x (S x)) (min)) (# (forall x (S x)) (min)))");
    auto oc = focw_to_oracle_circuit(phi, 3);
    ASSERT_EQ(oc.sentences.size(), 2u);
    std::vector<std::size_t> params;
    for (const auto& g : oc.circuit.gates)
        if (g.kind == GateKind::oracle) params.push_back(g.param);
    ASSERT_EQ(params.size(), 2u);
    EXPECT_EQ(oc.count_offsets[1], oc.widths[1]);
    EXPECT_EQ(oc.count_offsets[0], 2 * oc.widths[1] + oc.widths[0]);
    EXPECT_EQ(std::set<std::size_t>(params.begin(), params.end()),
              (std::set<std::size_t>{oc.count_offsets[0], oc.count_offsets[1]}));
    for (const auto& w : words_up_to(3, 3)) EXPECT_EQ(evaluate_circuit(oc.circuit, w, oc.oracle), focw_evaluate(phi, w));
}

TEST(OracleCircuit, AgreesWithEvaluatorOnRandomFormulas) {
    auto pool = sentence_corpus(21, 4);
    Rng rng(33);
    for (int trial = 0; trial < 25; ++trial) {
        Formula phi = random_focw(rng, pool);
        for (std::size_t n = 1; n <= 4; ++n) {
            auto oc = focw_to_oracle_circuit(phi, n);
            Circuit inlined = inline_oracle(oc.circuit, dnf_decider(oc.oracle));
            EXPECT_FALSE(has_kind(inlined, GateKind::oracle));
            for (const auto& w : words_up_to(n, n)) {
                bool expect = focw_evaluate(phi, w);
                ASSERT_EQ(evaluate_circuit(oc.circuit, w, oc.oracle), expect) << to_text(phi) << " on " << w;
                ASSERT_EQ(evaluate_circuit(inlined, w), expect) << to_text(phi) << " on " << w;
            }
        }
    }
}

TEST(Inline, ParityOracle) {
    Circuit c;
    c.input_length = 3;
    std::vector<std::size_t> kids{c.input(0), c.input(1), c.input(2)};
    c.roots = {c.add(GateKind::oracle, kids, 0)};
    Oracle parity = [](const std::string& y) { return Count(std::count(y.begin(), y.end(), '1') % 2); };
    Circuit parity_circuit = dnf_circuit(3, [](const std::string& y) { return std::count(y.begin(), y.end(), '1') % 2 == 1; });
    Circuit inlined = inline_oracle(c, [&](std::size_t arity, std::size_t bit) {
        EXPECT_EQ(arity, 3u);
        EXPECT_EQ(bit, 0u);
        return parity_circuit;
    });
    for (const auto& w : words_up_to(3, 3)) EXPECT_EQ(evaluate_circuit(inlined, w), evaluate_circuit(c, w, parity)) << w;
}

TEST(Inline, OracleFreeIsUnchanged) {
    Rng rng(4);
    Circuit c = random_circuit(rng, 3);
    EXPECT_EQ(inline_oracle(c, nullptr), c);
}

TEST(Inline, NegatedInputsUseDualOfChildren) {
    // Oracle over an AND, an OR and a MAJ child; the decider reads negated inputs.
    Rng rng(8);
    Oracle popcount = [](const std::string& y) { return Count(std::count(y.begin(), y.end(), '1')); };
    for (int trial = 0; trial < 20; ++trial) {
        Circuit c = random_circuit(rng, 3);
        std::size_t a = c.root();
        std::size_t m = c.add(GateKind::maj, {c.input(0), c.neg_input(1)});
        std::size_t o1 = c.add(GateKind::oracle, {a, m, c.input(2)}, 1);
        std::size_t o2 = c.add(GateKind::oracle, {o1, a}, 0);
        c.roots = {c.add(GateKind::disj, {o2, c.add(GateKind::conj, {o1, m})})};
        Circuit inlined = inline_oracle(c, dnf_decider(popcount));
        for (const auto& w : words_up_to(3, 3)) ASSERT_EQ(evaluate_circuit(inlined, w), evaluate_circuit(c, w, popcount));
    }
}

TEST(Inline, ArityMismatch) {
    Circuit c;
    c.input_length = 2;
    c.roots = {c.add(GateKind::oracle, {c.input(0), c.input(1)}, 0)};
    EXPECT_THROW(inline_oracle(c, [](std::size_t, std::size_t) { return dnf_circuit(3, [](const std::string&) { return true; }); }),
                 DomainError);
}

TEST(Inline, ExhaustiveChildPatterns) {
    // 8 free children: the inlined circuit must agree on all 2^8 patterns.
    Circuit c;
    c.input_length = 8;
    std::vector<std::size_t> kids;
    for (std::size_t i = 0; i < 8; ++i) kids.push_back(c.input(i));
    std::size_t o = c.add(GateKind::oracle, kids, 2);
    c.roots = {c.add(GateKind::conj, {o, c.add(GateKind::oracle, {kids[0], kids[7]}, 0)})};
    Oracle weight = [](const std::string& y) {
        Count v = 0;
        for (std::size_t i = 0; i < y.size(); ++i)
            if (y[i] == '1') v += i + 1;
        return v;
    };
    Circuit inlined = inline_oracle(c, dnf_decider(weight));
    for (const auto& w : words_up_to(8, 8)) ASSERT_EQ(evaluate_circuit(inlined, w), evaluate_circuit(c, w, weight)) << w;
}

}  // namespace
