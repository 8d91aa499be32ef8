#include <gtest/gtest.h>

#include <map>
#include <random>

#include "oracles.hpp"

using namespace quasi;

namespace {

std::string random_text(std::mt19937& g, std::size_t maxlen, const std::string& alphabet) {
    std::string t(2 + g() % (maxlen - 1), 'a');
    for (auto& c : t) c = alphabet[g() % alphabet.size()];
    return t;
}

}  // namespace

TEST(Slp, DoublingGrammar) {
    Slp p = oracle::power_slp("a", 4);
    EXPECT_EQ(decompress(p), std::string(16, 'a'));
    EXPECT_EQ(p.rules.size(), 3u);
    EXPECT_EQ(p.text_length(), 16u);

    Slp big = oracle::power_slp("ab", 40);
    EXPECT_EQ(big.text_length(), std::uint64_t{2} << 40);
    EXPECT_THROW(decompress(big, 1 << 20), OutputCapExceeded);
}

TEST(Slp, AxiomOnly) {
    Slp p;
    p.axiom = {'a', 'b'};
    EXPECT_EQ(decompress(p), "ab");
}

TEST(Slp, ValidateRejectsBadShapes) {
    Slp fwd;
    fwd.rules = {{'a', Slp::rule_id(2)}, {'a', 'b'}};
    fwd.axiom = {Slp::rule_id(1), 'a'};
    EXPECT_THROW(fwd.validate(), std::invalid_argument);
    Slp shortax;
    shortax.axiom = {'a'};
    EXPECT_THROW(shortax.validate(), std::invalid_argument);
    Slp unknown;
    unknown.axiom = {'a', Slp::rule_id(3)};
    EXPECT_THROW(unknown.validate(), std::invalid_argument);
}

TEST(Repair, Abab) {
    Slp p = repair_compress("abab");
    ASSERT_EQ(p.rules.size(), 1u);
    EXPECT_EQ(p.rules[0], (std::array<std::uint32_t, 2>{'a', 'b'}));
    EXPECT_EQ(p.axiom, (std::vector<std::uint32_t>{Slp::rule_id(1), Slp::rule_id(1)}));
}

TEST(Repair, DistinctBytesGiveAxiomOnly) {
    Slp p = repair_compress("abcdef");
    EXPECT_TRUE(p.rules.empty());
    EXPECT_EQ(p.axiom.size(), 6u);
    EXPECT_THROW(repair_compress("a"), std::invalid_argument);
}

TEST(Repair, RoundTripAndNoRepeatedPairLeft) {
    std::mt19937 g(51);
    for (int it = 0; it < 300; ++it) {
        std::string t = random_text(g, 400, it % 2 ? "ab" : "abc\nxyz ");
        Slp p = repair_compress(t);
        p.validate();
        EXPECT_EQ(decompress(p), t);
        // non-overlapping occurrences, counted greedily from the left
        std::map<std::pair<std::uint32_t, std::uint32_t>, std::pair<int, std::size_t>> pairs;
        for (std::size_t i = 0; i + 1 < p.axiom.size(); ++i) {
            auto [it2, fresh] = pairs.try_emplace({p.axiom[i], p.axiom[i + 1]}, 1, i);
            if (!fresh && it2->second.second + 1 < i) {
                ++it2->second.first;
                it2->second.second = i;
            }
        }
        for (auto& [k, c] : pairs) EXPECT_LT(c.first, 2);
        EXPECT_LE(p.rules.size() + p.axiom.size(), t.size());
    }
}

TEST(SlpFormats, BinaryAndTextRoundTrip) {
    std::mt19937 g(52);
    for (int it = 0; it < 100; ++it) {
        std::string t = random_text(g, 300, "ab\n'\" #");
        Slp p = repair_compress(t);
        Slp b = load_slp(slp_to_binary(p));
        Slp x = load_slp(format_slp_text(p));
        EXPECT_EQ(b.rules, p.rules);
        EXPECT_EQ(b.axiom, p.axiom);
        EXPECT_EQ(x.rules, p.rules);
        EXPECT_EQ(x.axiom, p.axiom);
    }
}

TEST(SlpFormats, ParseErrors) {
    EXPECT_THROW(parse_slp_text("rule X1 a b\n"), ParseError);
    EXPECT_THROW(parse_slp_text("rule X2 a b\naxiom X1 X1\n"), ParseError);
    EXPECT_THROW(parse_slp_text("rule X1 a X1\naxiom X1 X1\n"), ParseError);
    EXPECT_THROW(parse_slp_text("axiom a\n"), ParseError);
    EXPECT_THROW(parse_slp_text("axiom a b\nrule X1 a b\n"), ParseError);
    EXPECT_THROW(load_slp(std::string("SLP1\x01", 5)), ParseError);
    Slp ok = parse_slp_text("rule X1 a b\naxiom X1 X1 c\n");
    EXPECT_EQ(decompress(ok), "ababc");
}
