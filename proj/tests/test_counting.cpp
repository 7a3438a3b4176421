#include "fowin/counting.hpp"
#include "fowin/eval.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace fowin;

namespace {

Count win(const char* phi, const char* w) { return count_win(parse_formula(phi), word_model(w)); }

}  // namespace

TEST(CountWin, Examples) {
    EXPECT_EQ(win("(exists x (S x))", "101"), 2);
    EXPECT_EQ(win("(forall x (S x))", "11"), 1);
    EXPECT_EQ(win("(forall x (S x))", "10"), 0);
    EXPECT_EQ(win("(forall x (exists y (S y)))", "110"), 8);
}

TEST(CountWin, HandComputed) {
    // x=1: y ranges over 0..3, S(1) true -> 1 strategy; x=3: S(3) true -> 1; x=0,2 fail.
    EXPECT_EQ(win("(exists x (forall y (or (S x) (<= y x))))", "0101"), 2);
    auto phi = parse_formula("(exists x (forall y (or (S x) (<= y x))))");
    EXPECT_EQ(count_win_gametree(phi, word_model("0101")), 2);
}

TEST(CountWin, EmptyPrefixAndEmptyUniverse) {
    EXPECT_EQ(win("(or (S (min)) (not (S (min))))", "1"), 1);
    EXPECT_EQ(win("(true)", ""), 1);
    EXPECT_EQ(win("(false)", ""), 0);
    EXPECT_THROW(win("(exists x (S x))", ""), DomainError);
}

TEST(CountWin, Errors) {
    EXPECT_THROW(win("(and (S x) (exists x (S x)))", "10"), DomainError);
    EXPECT_THROW(win("(exists x (S y))", "10"), DomainError);
    EXPECT_THROW(win("(exists x (exists x (S x)))", "10"), DomainError);
}

TEST(CountWin, LargeCountsAreExact) {
    // forall^3 exists: (n)^(n^3) winning strategies with a true matrix.
    auto phi = parse_formula("(forall a (forall b (forall c (exists d (<= a (max))))))");
    Count expect = pow(Count(4), 64);
    EXPECT_EQ(count_win(phi, word_model("0000")), expect);
    EXPECT_EQ(to_decimal(expect), "340282366920938463463374607431768211456");
}

TEST(CountWin, MatchesNestedLoopAndGameTree) {
    const char* cases[] = {
        "(exists x (forall y (exists z (and (<= x z) (S z)))))",
        "(forall x (exists y (or (and (S x) (= x y)) (and (not (S x)) (<= x y)))))",
        "(exists x (exists y (and (<= x y) (not (= x y)) (S x) (not (S y)))))",
        "(forall x (forall y (exists z (or (<= z x) (<= z y)))))",
        "(exists x (forall y (forall z (or (not (S y)) (S z) (= x x)))))",
        "(forall x (exists y (forall z (exists u (or (= y z) (= u x) (S u))))))",
    };
    for (const char* c : cases) {
        auto phi = parse_formula(c);
        for (const auto& w : test_support::words_up_to(4, 1)) {
            Structure a = word_model(w);
            Count lemma = count_win(phi, a);
            EXPECT_EQ(lemma, count_win_nested(phi, a)) << c << " on " << w;
            EXPECT_EQ(lemma, count_win_gametree(phi, a)) << c << " on " << w;
            EXPECT_EQ(lemma > 0, evaluate(phi, a)) << c << " on " << w;
        }
    }
}

TEST(GameTree, EnumerationAndRecursionAgree) {
    auto phi = parse_formula("(exists x (forall y (exists z (or (<= x z) (S y)))))");
    Guards enumerate_all;
    enumerate_all.gametree_enumeration_limit = std::size_t{1} << 30;
    Guards never;
    never.gametree_enumeration_limit = 0;
    for (const auto& w : test_support::words_up_to(3, 1)) {
        auto a = count_win_gametree_report(phi, word_model(w), {}, enumerate_all);
        auto b = count_win_gametree_report(phi, word_model(w), {}, never);
        EXPECT_TRUE(a.enumerated);
        EXPECT_FALSE(b.enumerated);
        EXPECT_EQ(a.count, b.count);
    }
}

TEST(GameTree, Guard) {
    auto phi = parse_formula("(exists x (S x))");
    EXPECT_THROW(count_win_gametree(phi, word_model("10101")), DomainError);
    Guards g;
    g.gametree_max_n = 5;
    EXPECT_EQ(count_win_gametree(phi, word_model("10101"), {}, g), 3);
    EXPECT_THROW(count_win_gametree(parse_formula("(exists a (exists b (exists c (exists d (exists e (S a))))))"),
                                    word_model("1")),
                 DomainError);
}

TEST(Skolem, Examples) {
    EXPECT_EQ(count_skolem(parse_formula("(exists y1 (S y1))"), word_model("101")), 2);
    EXPECT_EQ(count_skolem(parse_formula("(exists y1 (forall z1 (exists y2 (or (S y2) (not (S y2))))))"),
                           word_model("10")),
              8);
    auto phi = parse_formula("(exists y1 (forall z1 (exists y2 (or (not (<= y1 z1)) (S y2)))))");
    EXPECT_EQ(count_skolem(phi, word_model("010")), count_win(phi, word_model("010")));
}

TEST(Skolem, ShapeAndGuard) {
    EXPECT_THROW(count_skolem(parse_formula("(forall z (exists y (S y)))"), word_model("10")), DomainError);
    EXPECT_THROW(count_skolem(parse_formula("(exists y (exists u (S y)))"), word_model("10")), DomainError);
    EXPECT_THROW(count_skolem(parse_formula("(exists y1 (S y1))"), word_model("1010")), DomainError);
    auto k3 = parse_formula("(exists a (forall b (exists c (forall d (exists e (S e))))))");
    EXPECT_THROW(count_skolem(k3, word_model("10")), DomainError);
    Guards g;
    g.skolem_max_k = 3;
    EXPECT_EQ(count_skolem(k3, word_model("10"), {}, g), count_win(k3, word_model("10")));
}

TEST(Monotone, TrueMatrixBound) {
    auto phi = parse_formula("(forall x (exists y (forall z (or (S y) (<= z x)))))");
    auto top = parse_formula("(forall x (exists y (forall z (true))))");
    for (const auto& w : test_support::words_up_to(4, 1))
        EXPECT_LE(count_win(phi, word_model(w)), count_win(top, word_model(w)));
}
