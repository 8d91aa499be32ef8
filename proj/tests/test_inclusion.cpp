#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"

using namespace quasi;

namespace {

Nfa sample(const char* name) { return parse_nfa(read_file(std::string(SAMPLES) + "/" + name)); }

std::vector<Word> sorted(std::vector<Word> v) {
    std::sort(v.begin(), v.end());
    return v;
}

void expect_witness(const Verdict& v, const std::function<bool(const Word&)>& left, const std::function<bool(const Word&)>& right) {
    if (v.included) return;
    ASSERT_TRUE(v.witness.has_value());
    EXPECT_TRUE(left(*v.witness)) << *v.witness;
    EXPECT_FALSE(right(*v.witness)) << *v.witness;
}

}  // namespace

class TwoAutomata : public ::testing::Test {
protected:
    Nfa n1 = sample("star_abc.nfa");
    Nfa n2 = sample("five_state.nfa");
    Membership member = [this](const Word& w) { return n2.member(w); };
};

TEST_F(TwoAutomata, NerodeFixpoint) {
    auto r = fa_inc_word(n1, NerodeOrder(n2, Side::Left, n1.alphabet()), member);
    EXPECT_EQ(r.fixpoint[0], std::vector<Word>{"c"});
    EXPECT_EQ(r.fixpoint[1], std::vector<Word>{""});
    EXPECT_FALSE(r.verdict.included);
    EXPECT_EQ(r.verdict.witness, Word("c"));
}

TEST_F(TwoAutomata, StateFixpoint) {
    auto r = fa_inc_word(n1, StateOrder(n2, Side::Left), member);
    EXPECT_EQ(sorted(r.fixpoint[0]), (std::vector<Word>{"a", "ab", "b", "c"}));
    EXPECT_EQ(r.fixpoint[1], std::vector<Word>{""});
    EXPECT_FALSE(r.verdict.included);
    expect_witness(r.verdict, [&](const Word& w) { return n1.member(w); }, member);
}

TEST_F(TwoAutomata, SimulationFixpoint) {
    auto r = fa_inc_word(n1, SimOrder(n2, Side::Left), member);
    EXPECT_EQ(r.fixpoint[0], std::vector<Word>{"c"});
    EXPECT_EQ(r.fixpoint[1], std::vector<Word>{""});
    EXPECT_EQ(r.iterations, 3u);
    EXPECT_EQ(r.verdict.witness, Word("c"));
}

TEST_F(TwoAutomata, StateBasedAlgorithmsRejectWithVerifiedWitness) {
    for (auto v : {AntichainVariant::Forward, AntichainVariant::Backward}) {
        auto r = fa_inc_antichain(n1, n2, v);
        EXPECT_FALSE(r.verdict.included);
        expect_witness(r.verdict, [&](const Word& w) { return n1.member(w); }, member);
    }
    EXPECT_FALSE(fa_inc_gfp(n1, minimal_dfa(n2)).verdict.included);
    EXPECT_FALSE(naive_inclusion(n1, n2).included);
}

TEST(FaInc, DeterminizedSelfInclusion) {
    std::mt19937 g(21);
    for (int it = 0; it < 50; ++it) {
        Nfa n = oracle::random_nfa(g, 5, 3);
        Nfa d = to_nfa(determinize(n));
        EXPECT_TRUE(fa_inc_antichain(n, d, AntichainVariant::Forward).verdict.included);
        EXPECT_TRUE(fa_inc_antichain(n, d, AntichainVariant::Backward).verdict.included);
        EXPECT_TRUE(fa_inc_word(d, n, WordOrder::State).verdict.included);
    }
}

TEST(FaInc, NoFinalStatesIsIncluded) {
    Nfa n1(2);
    n1.add_symbol('a');
    n1.set_initial(0);
    n1.add_transition(0, 'a', 1);
    Nfa n2(1);
    n2.add_symbol('a');
    EXPECT_TRUE(fa_inc_gfp(n1, determinize(n2)).verdict.included);
    EXPECT_TRUE(fa_inc_antichain(n1, n2, AntichainVariant::Forward).verdict.included);
    EXPECT_TRUE(fa_inc_word(n1, n2, WordOrder::Nerode).verdict.included);
}

TEST(FaInc, AllAlgorithmsAgreeWithNaive) {
    std::mt19937 g(22);
    for (int it = 0; it < 500; ++it) {
        Nfa a = oracle::random_nfa(g, 6, 3), b = oracle::random_nfa(g, 6, 3);
        bool want = naive_inclusion(a, b).included;
        auto lhs = [&](const Word& w) { return oracle::accepts(a, w); };
        auto rhs = [&](const Word& w) { return oracle::accepts(b, w); };
        for (auto v : {AntichainVariant::Forward, AntichainVariant::Backward}) {
            auto r = fa_inc_antichain(a, b, v);
            EXPECT_EQ(r.verdict.included, want);
            expect_witness(r.verdict, lhs, rhs);
        }
        for (auto o : {WordOrder::Nerode, WordOrder::State, WordOrder::Simulation})
            for (auto s : {Side::Left, Side::Right}) {
                auto r = fa_inc_word(a, b, o, s);
                EXPECT_EQ(r.verdict.included, want) << it;
                expect_witness(r.verdict, lhs, rhs);
            }
        EXPECT_EQ(fa_inc_gfp(a, determinize(b)).verdict.included, want);
        if (want) EXPECT_FALSE(oracle::bounded_counterexample(a, b, 5));
    }
}

TEST(FaInc, FixpointsAreAntichainsAndNerodeIsCoarsest) {
    std::mt19937 g(23);
    for (int it = 0; it < 200; ++it) {
        Nfa a = oracle::random_nfa(g, 5, 2), b = oracle::random_nfa(g, 5, 2);
        auto member = [&](const Word& w) { return b.member(w); };
        NerodeOrder ner(b, Side::Left, a.alphabet());
        StateOrder st(b, Side::Left);
        auto rn = fa_inc_word(a, ner, member);
        auto rs = fa_inc_word(a, st, member);
        auto key = [&](const Word& w) { return state_key(b, w, Side::Left); };
        auto nleq = [&](const Word& x, const Word& y) { return ner.leq(x, y); };
        for (int q = 0; q < a.size(); ++q) {
            auto& xs = rs.fixpoint[q];
            for (std::size_t i = 0; i < xs.size(); ++i)
                for (std::size_t j = 0; j < xs.size(); ++j)
                    if (i != j) EXPECT_FALSE(key(xs[i]).subset_of(key(xs[j])));
            EXPECT_TRUE(ac_below(rs.fixpoint[q], rn.fixpoint[q], nleq));
        }
        auto ra = fa_inc_antichain(a, b, AntichainVariant::Forward);
        for (auto& comp : ra.fixpoint)
            for (std::size_t i = 0; i < comp.size(); ++i)
                for (std::size_t j = 0; j < comp.size(); ++j)
                    if (i != j) EXPECT_FALSE(comp[i].subset_of(comp[j]));
    }
}

TEST(CfgInc, StarBStarWithContexts) {
    auto g = parse_cnf(read_file(SAMPLES "/a_star_b_a_star.cnf"));
    Nfa n = sample("b_or_aba.nfa");
    auto r = cfg_inc_word(g, CtxOrder(n), [&](const Word& w) { return n.member(w); });
    EXPECT_EQ(sorted(r.fixpoint[0]), (std::vector<Word>{"ab", "b", "ba"}));
    EXPECT_EQ(r.fixpoint[1], std::vector<Word>{"a"});
    EXPECT_EQ(r.iterations, 3u);
    EXPECT_FALSE(r.verdict.included);
    EXPECT_EQ(r.verdict.witness, Word("ab"));

    auto s = cfg_inc_antichain(g, n);
    EXPECT_FALSE(s.verdict.included);
    EXPECT_EQ(sorted(s.words[0]), (std::vector<Word>{"ab", "b", "ba"}));
    EXPECT_EQ(s.verdict.witness, Word("ab"));
}

TEST(CfgInc, StarBStarWithMyhill) {
    auto g = parse_cnf(read_file(SAMPLES "/a_star_b_a_star.cnf"));
    Nfa n = sample("b_or_aba.nfa");
    auto r = cfg_inc_word(g, MyhillOrder(n, g.alphabet()), [&](const Word& w) { return n.member(w); });
    EXPECT_EQ(sorted(r.fixpoint[0]), (std::vector<Word>{"ab", "b"}));
    EXPECT_EQ(r.fixpoint[1], std::vector<Word>{"a"});
    EXPECT_EQ(r.verdict.witness, Word("ab"));
}

TEST(CfgInc, SingleWordGrammar) {
    CnfGrammar g(1);
    g.add_term(0, 'b');
    Nfa n(2);
    n.add_symbol('b');
    n.set_initial(0);
    n.set_final(1);
    n.add_transition(0, 'b', 1);
    EXPECT_TRUE(cfg_inc_antichain(g, n).verdict.included);
    EXPECT_TRUE(cfg_inc_word(g, CtxOrder(n), [&](const Word& w) { return n.member(w); }).verdict.included);
}

TEST(CfgInc, AgreesWithProductOracle) {
    std::mt19937 gen(24);
    for (int it = 0; it < 300; ++it) {
        auto g = oracle::random_cnf(gen, 5, 2);
        Nfa n = oracle::random_nfa(gen, 5, 2);
        bool want = cfg_in_regular_oracle(g, determinize(n)).included;
        auto lhs = [&](const Word& w) { return oracle::cyk(g, w); };
        auto rhs = [&](const Word& w) { return oracle::accepts(n, w); };
        auto s = cfg_inc_antichain(g, n);
        EXPECT_EQ(s.verdict.included, want) << it;
        expect_witness(s.verdict, lhs, rhs);
        auto w = cfg_inc_word(g, CtxOrder(n), rhs);
        EXPECT_EQ(w.verdict.included, want);
        expect_witness(w.verdict, lhs, rhs);
        auto m = cfg_inc_word(g, MyhillOrder(n, g.alphabet()), rhs);
        EXPECT_EQ(m.verdict.included, want);
        expect_witness(m.verdict, lhs, rhs);
        if (want)
            for (auto& x : oracle::words_upto(merge_alphabets(g.alphabet(), n.alphabet()), 6))
                if (oracle::cyk(g, x)) EXPECT_TRUE(rhs(x)) << x;
    }
}

TEST(OcnInc, CounterExamples) {
    auto f = parse_ocn(read_file(SAMPLES "/counter.ocn"));
    Nfa ab = sample("ab_star.nfa");
    EXPECT_TRUE(nfa_in_ocn(ab, f.net, f.start, f.counter).verdict.included);
    for (auto& w : oracle::words_upto({'a', 'b'}, 10))
        if (ab.member(w)) EXPECT_TRUE(oracle::ocn_trace(f.net, 0, 0, w)) << w;

    auto r = nfa_in_ocn(sample("a_star_b_star.nfa"), f.net, f.start, f.counter);
    EXPECT_FALSE(r.verdict.included);
    EXPECT_EQ(r.verdict.witness, Word("b"));
    EXPECT_FALSE(oracle::ocn_trace(f.net, 0, 0, "b"));

    Nfa empty(1);
    empty.add_symbol('a');
    empty.set_initial(0);
    EXPECT_TRUE(nfa_in_ocn(empty, f.net, 0, 0).verdict.included);
}
