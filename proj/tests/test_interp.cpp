#include "fowin/corpus.hpp"
#include "fowin/counting.hpp"
#include "fowin/interp.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace fowin;
using test_support::words_up_to;

namespace {

FOInterpretation interp(const char* text) { return read_interpretation(text); }

const char* kIdentity = "(interpretation (width 1) (universe (x) (true)) (relation <= (x y) (<= x y)) "
                        "(relation S (x) (S x)))";
const char* kOnesOnly = "(interpretation (width 1) (universe (x) (S x)) (relation S (x) (S x)) "
                        "(relation <= (x y) (<= x y)))";
const char* kSquare = "(interpretation (width 2) (universe (x1 x2) (true))"
                      " (relation S (x1 x2) (and (S x1) (S x2)))"
                      " (relation <= (x1 x2 y1 y2) (or (and (<= x1 y1) (not (= x1 y1))) (and (= x1 y1) (<= x2 y2)))))";
const char* kReverse = "(interpretation (width 1) (universe (x) (true))"
                       " (relation S (x) (exists y (and (+ x y (max)) (S y))))"
                       " (relation <= (x y) (<= x y)))";
// Pairs (a, b) with a < b; S holds where exactly one end is a one.
const char* kPairs = "(interpretation (width 2) (universe (a b) (and (<= a b) (not (= a b))))"
                     " (relation S (a b) (or (and (S a) (not (S b))) (and (S b) (not (S a)))))"
                     " (relation <= (a b c d) (or (and (<= a c) (not (= a c))) (and (= a c) (<= b d)))))";
// Positions holding a one that have a later zero.
const char* kLaterZero = "(interpretation (width 1) (universe (x) (and (S x) (exists y (and (<= x y) (not (S y))))))"
                         " (relation S (x) (forall y (or (not (<= y x)) (S y))))"
                         " (relation <= (x y) (<= x y)))";

/// Every existential subformula has at most one witness under every assignment of its free variables.
bool witnesses_unique(const Formula& phi, const Structure& a) {
    bool ok = true;
    auto walk = [&](auto&& self, const Formula& g) -> void {
        if (g->op == Op::exists) {
            auto free = free_variables(g);
            std::vector<std::string> fv(free.begin(), free.end());
            std::size_t n = a.universe_size();
            std::size_t total = 1;
            for (std::size_t i = 0; i < fv.size(); ++i) total *= n;
            for (std::size_t idx = 0; idx < total && ok; ++idx) {
                Assignment asg;
                std::size_t rest = idx;
                for (const auto& v : fv) {
                    asg[v] = rest % n;
                    rest /= n;
                }
                std::size_t witnesses = 0;
                for (std::size_t z = 0; z < n; ++z) {
                    asg[g->var] = z;
                    witnesses += evaluate(g->kids[0], a, asg) ? 1 : 0;
                }
                ok = witnesses <= 1;
            }
        }
        for (const auto& k : g->kids) self(self, k);
    };
    walk(walk, phi);
    return ok;
}

}  // namespace

TEST(ApplyInterpretation, Examples) {
    for (const auto& w : words_up_to(4, 1)) {
        auto r = apply_interpretation(interp(kIdentity), word_model(w));
        EXPECT_EQ(r.structure, word_model(w));
    }
    EXPECT_EQ(apply_interpretation(interp(kOnesOnly), word_model("101")).structure.universe_size(), 2u);
    auto sq = apply_interpretation(interp(kSquare), word_model("101"));
    EXPECT_EQ(sq.structure.universe_size(), 9u);
    EXPECT_EQ(sq.elements[4], (Tuple{1, 1}));
    EXPECT_TRUE(sq.structure.holds("S", {0}));   // (0,0)
    EXPECT_FALSE(sq.structure.holds("S", {1}));  // (0,1)
    EXPECT_THROW(apply_interpretation(interp(kOnesOnly), word_model("00")), DomainError);
    EXPECT_EQ(encode_structure(apply_interpretation(interp(kReverse), word_model("1100")).structure), "0011");
}

TEST(ApplyInterpretation, TextRoundTrip) {
    auto I = interp(kPairs);
    auto J = read_interpretation(write_interpretation(I));
    EXPECT_EQ(write_interpretation(J), write_interpretation(I));
    EXPECT_THROW(read_interpretation("(interpretation (width 2) (universe (x) (true)))"), ParseError);
    EXPECT_THROW(read_interpretation("(interpretation (width 1) (universe (x) (S y)))"), ParseError);
    EXPECT_THROW(read_interpretation("(interpretation (width 2) (universe (x y) (true)) (relation S (x) (S x)))"),
                 ParseError);
}

TEST(WitnessUniqueness, Examples) {
    auto phi = parse_formula("(exists x (S x))");
    auto u = make_witnesses_unique(phi);
    ASSERT_EQ(u->op, Op::exists);
    Structure a = word_model("101");
    EXPECT_TRUE(evaluate(u->kids[0], a, Assignment{{"x", 0}}));
    EXPECT_FALSE(evaluate(u->kids[0], a, Assignment{{"x", 2}}));
    auto qf = parse_formula("(and (S x) (not (<= x y)))");
    EXPECT_EQ(make_witnesses_unique(qf), qf);

    auto two = make_witnesses_unique(parse_formula("(exists x (exists y (and (S x) (S y))))"));
    EXPECT_TRUE(witnesses_unique(two, word_model("110")));
    EXPECT_FALSE(witnesses_unique(parse_formula("(exists x (exists y (and (S x) (S y))))"), word_model("110")));
}

TEST(WitnessUniqueness, EquivalentAndUnique) {
    Rng rng(17);
    SentenceOptions opt;
    opt.arithmetic = false;
    for (int i = 0; i < 25; ++i) {
        Formula phi = random_sentence(rng, opt);
        Formula u = make_witnesses_unique(phi);
        for (const auto& w : words_up_to(3, 1)) {
            EXPECT_EQ(evaluate(u, word_model(w)), evaluate(phi, word_model(w))) << to_text(phi);
            EXPECT_TRUE(witnesses_unique(u, word_model(w))) << to_text(phi);
        }
    }
}

TEST(Substitute, RequiresPreprocessing) {
    EXPECT_THROW(substitute_interpretation(parse_formula("(exists x (S x))"), interp(kIdentity)), DomainError);
}

TEST(Substitute, SimpleDefinition) {
    auto I = preprocess(interp("(interpretation (width 1) (universe (u) (true)) (relation T (u) (and (S u) (S u))))"));
    auto phi = parse_formula("(exists u (T u))");
    auto sub = substitute_interpretation(phi, I);
    EXPECT_TRUE(is_prenex(sub));
    for (const auto& w : words_up_to(4, 1))
        EXPECT_EQ(count_win(sub, word_model(w)), count_win(phi, apply_interpretation(I, word_model(w)).structure));
}

TEST(Substitute, CountsMatchAppliedInterpretation) {
    std::vector<const char*> interps{kIdentity, kOnesOnly, kSquare, kReverse, kPairs, kLaterZero};
    std::vector<const char*> sentences{
        "(exists x (S x))",
        "(forall x (S x))",
        "(forall x (exists y (and (<= x y) (S y))))",
        "(exists x (forall y (or (S x) (<= y x))))",
        "(forall x (forall y (or (<= x y) (S x))))",
    };
    int pairs = 0;
    for (const char* it : interps) {
        auto I = preprocess(interp(it));
        for (const char* s : sentences) {
            auto phi = parse_formula(s);
            auto sub = substitute_interpretation(phi, I);
            std::size_t max_len = 4;
            for (const auto& w : words_up_to(max_len, 1)) {
                Structure a = word_model(w);
                InterpretedStructure target;
                try {
                    target = apply_interpretation(I, a);
                } catch (const DomainError&) {
                    continue;
                }
                EXPECT_EQ(count_win(sub, a), count_win(phi, target.structure)) << s << " via " << it << " on " << w;
            }
            ++pairs;
        }
    }
    EXPECT_GE(pairs, 15);
}

TEST(Compose, IdentityAndSquares) {
    auto id = interp(kIdentity);
    auto c = compose_interpretations(id, id);
    for (const auto& w : words_up_to(3, 1))
        EXPECT_EQ(apply_interpretation(c, word_model(w)).structure, word_model(w));
    auto sq = interp(kSquare);
    auto sq2 = compose_interpretations(sq, sq);
    EXPECT_EQ(sq2.width, 4u);
    EXPECT_EQ(apply_interpretation(sq2, word_model("10")).structure.universe_size(), 16u);
}

TEST(Compose, Coherence) {
    std::vector<const char*> all{kIdentity, kOnesOnly, kSquare, kReverse, kPairs, kLaterZero};
    for (const char* outer : all)
        for (const char* inner : all) {
            auto I = interp(outer), J = interp(inner);
            if (I.width * J.width > 2) continue;
            if (outer == kReverse) {
                // + on the middle structure is not definable from the inner interpretation
                EXPECT_THROW(compose_interpretations(I, J), DomainError);
                continue;
            }
            auto c = compose_interpretations(I, J);
            for (const auto& w : words_up_to(3, 1)) {
                Structure a = word_model(w);
                std::optional<Structure> stepwise, direct;
                try {
                    stepwise = apply_interpretation(I, apply_interpretation(J, a).structure).structure;
                } catch (const DomainError&) {
                }
                try {
                    direct = apply_interpretation(c, a).structure;
                } catch (const DomainError&) {
                }
                EXPECT_EQ(stepwise, direct) << outer << " after " << inner << " on " << w;
            }
        }
}

TEST(Compose, UndefinedOrderIsLexicographic) {
    auto J = interp("(interpretation (width 2) (universe (a b) (true)) (relation S (a b) (S b)))");
    auto I = interp("(interpretation (width 1) (universe (x) (true)) (relation S (x) (exists y (and (<= x y) (S y)))))");
    auto c = compose_interpretations(I, J);
    for (const auto& w : words_up_to(3, 1)) {
        Structure a = word_model(w);
        EXPECT_EQ(apply_interpretation(c, a).structure,
                  apply_interpretation(I, apply_interpretation(J, a).structure).structure);
    }
    auto bad = interp("(interpretation (width 1) (universe (x) (true)) (relation S (x) (exists y (+ x x y))))");
    EXPECT_THROW(compose_interpretations(bad, J), DomainError);
}

TEST(Reduction, ReverseCountsOnes) {
    auto I = interp(kReverse);
    auto g = parse_formula("(exists x (S x))");
    for (const auto& w : words_up_to(4, 1)) {
        Count ones = static_cast<long>(std::count(w.begin(), w.end(), '1'));
        EXPECT_EQ(apply_reduction(g, I, w), ones);
    }
    auto id = interp(kIdentity);
    for (const auto& w : words_up_to(3, 1)) EXPECT_EQ(apply_reduction(g, id, w), count_win(g, word_model(w)));
}

TEST(Substitute, ExtremeTermsFollowTheDefinedUniverse) {
    auto I = preprocess(interp(kPairs));
    for (const char* s : {"(exists x (and (S x) (<= x (max))))", "(forall x (or (S (min)) (<= (min) x)))",
                          "(exists x (= x (max)))"}) {
        auto phi = parse_formula(s);
        auto sub = substitute_interpretation(phi, I);
        for (const auto& w : words_up_to(4, 2))
            EXPECT_EQ(count_win(sub, word_model(w)), count_win(phi, apply_interpretation(I, word_model(w)).structure))
                << s << " on " << w;
    }
}
