#include "fowin/eval.hpp"
#include "fowin/formula.hpp"
#include "fowin/prenex.hpp"
#include "fowin/structure.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace fowin;

TEST(WordModel, Bits) {
    Structure a = word_model("101");
    EXPECT_EQ(a.universe_size(), 3u);
    EXPECT_TRUE(a.holds("S", {0}));
    EXPECT_FALSE(a.holds("S", {1}));
    EXPECT_TRUE(a.holds("S", {2}));
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(a.holds("<=", {i, j}), i <= j);

    Structure b = word_model("0110");
    EXPECT_EQ(b.relation("S").tuples(), (std::vector<Tuple>{{1}, {2}}));
    EXPECT_EQ(word_model("").universe_size(), 0u);
    EXPECT_THROW(word_model("012"), ParseError);
}

TEST(WordModel, EncodeRoundTrip) {
    for (const auto& w : test_support::words_up_to(5)) {
        EXPECT_EQ(encode_structure(word_model(w)), w);
        EXPECT_TRUE(is_word_model(word_model(w)));
    }
}

TEST(Structure, RowMajorEncoding) {
    Vocabulary v;
    v.add("R", 2);
    Structure a(v, 2);
    a.insert("R", {0, 1});
    EXPECT_EQ(encode_structure(a), "0100");
}

TEST(Structure, TextRoundTrip) {
    Structure a = word_model("1101");
    Structure b = read_structure(write_structure(a));
    EXPECT_EQ(encode_structure(b), "1101");
    EXPECT_THROW(read_structure("(structure (universe 2) (relation S 1 (5)))"), ParseError);
}

TEST(Vocabulary, Invariants) {
    Vocabulary v;
    v.add("R", 2);
    EXPECT_THROW(v.add("R", 1), DomainError);
    EXPECT_THROW(v.add("Q", 0), DomainError);
}

TEST(Builtins, Arithmetic) {
    Structure a = builtin_arithmetic(4);
    EXPECT_TRUE(a.holds("+", {1, 2, 3}));
    EXPECT_FALSE(a.holds("+", {2, 3, 1}));
    EXPECT_FALSE(a.holds("*", {2, 2, 0}));
    EXPECT_TRUE(a.holds("bit", {1, 2}));
    EXPECT_FALSE(a.holds("bit", {0, 2}));
    for (std::size_t n = 0; n <= 5; ++n) {
        Structure s = builtin_arithmetic(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                int plus = 0, times = 0;
                for (std::size_t k = 0; k < n; ++k) {
                    plus += s.holds("+", {i, j, k});
                    times += s.holds("*", {i, j, k});
                }
                EXPECT_LE(plus, 1);
                EXPECT_LE(times, 1);
            }
    }
}

TEST(Evaluate, Basics) {
    EXPECT_TRUE(evaluate(parse_formula("(exists x (S x))"), word_model("10")));
    EXPECT_FALSE(evaluate(parse_formula("(forall x (S x))"), word_model("10")));
    auto phi = parse_formula("(forall x (exists y (<= x y)))");
    for (const auto& w : test_support::words_up_to(4, 1)) EXPECT_TRUE(evaluate(phi, word_model(w)));
    EXPECT_TRUE(evaluate(phi, word_model("")));
    EXPECT_FALSE(evaluate(parse_formula("(exists x (S x))"), word_model("")));
}

TEST(Evaluate, Errors) {
    Structure a = word_model("10");
    EXPECT_THROW(evaluate(parse_formula("(S x)"), a), DomainError);
    EXPECT_THROW(evaluate(parse_formula("(exists x (R x))"), a), DomainError);
    EXPECT_THROW(evaluate(parse_formula("(exists x (S x x))"), a), DomainError);
    EXPECT_TRUE(evaluate(parse_formula("(S x)"), a, Assignment{{"x", 0}}));
    EXPECT_THROW(parse_formula("(exists x"), ParseError);
}

TEST(Evaluate, AuxiliaryFamily) {
    Vocabulary v;
    v.add("P", 1);
    InterpretationFamily aux{v, [v](std::size_t n) {
                                 Structure s(v, n);
                                 if (n > 0) s.insert("P", {n - 1});
                                 return s;
                             }};
    auto phi = parse_formula("(exists x (and (P x) (S x)))");
    EXPECT_TRUE(evaluate(phi, word_model("01"), aux));
    EXPECT_FALSE(evaluate(phi, word_model("10"), aux));
}

TEST(Formula, TextRoundTrip) {
    for (const char* s : {"(exists x (forall y (or (S x) (not (<= y x)))))", "(and (= x y) (+ x y z) (bit x y))",
                          "(exists x (and (<= (min) x) (<= x (max))))"}) {
        auto phi = parse_formula(s);
        EXPECT_EQ(to_text(parse_formula(to_text(phi))), to_text(phi));
    }
}

TEST(Prenex, Examples) {
    auto p = parse_formula("(exists x (forall y (<= x y)))");
    EXPECT_EQ(to_prenex(p), p);
    EXPECT_EQ(to_text(to_prenex(parse_formula("(not (exists x (S x)))"))), to_text(parse_formula("(forall x (not (S x)))")));
    auto q = to_prenex(parse_formula("(and (exists x (S x)) (exists x (not (S x))))"));
    EXPECT_EQ(to_text(q), to_text(parse_formula("(exists x (exists x_1 (and (S x) (not (S x_1)))))")));
}

TEST(Prenex, Equivalence) {
    const char* cases[] = {
        "(or (forall x (S x)) (exists y (and (S y) (forall x (<= x y)))))",
        "(not (and (exists x (S x)) (forall y (not (S y)))))",
        "(exists x (or (S x) (forall x (not (S x)))))",
        "(and (S z) (exists z (not (S z))))",
    };
    for (const char* c : cases) {
        auto phi = parse_formula(c);
        auto p = to_prenex(phi);
        EXPECT_TRUE(is_prenex(p)) << c;
        EXPECT_EQ(free_variables(p), free_variables(phi));
        for (const auto& w : test_support::words_up_to(4)) {
            Structure a = word_model(w);
            if (free_variables(phi).empty()) {
                EXPECT_EQ(evaluate(p, a), evaluate(phi, a)) << c << " on " << w;
            } else {
                for (std::size_t z = 0; z < a.universe_size(); ++z)
                    EXPECT_EQ(evaluate(p, a, Assignment{{"z", z}}), evaluate(phi, a, Assignment{{"z", z}}));
            }
        }
    }
}
