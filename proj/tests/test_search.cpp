#include <gtest/gtest.h>

#include <random>
#include <regex>
#include <set>

#include "oracles.hpp"

using namespace quasi;

namespace {

const std::vector<std::string> kSuite{"what", "HTTP", ".", "I .* you", "[a-z]{4}", "[a-z]*[a-z]{3}", "[0-9]{4}",
                                      "[0-9]{2}/(Jun|Jul|Aug)/[0-9]{4}"};

// Text made of suite-relevant tokens and noise.
std::string random_text(std::mt19937& g, std::size_t maxlen) {
    static const std::vector<std::string> tokens{"what", "HTTP", "I ", " you", "love", "12/Jun/2023", "7/Aug/19",
                                                 "2024", "ab", "Z", " ", "\n", "\n", "x", "GET /", "99"};
    std::string t;
    std::size_t len = 2 + g() % maxlen;
    while (t.size() < len) t += tokens[g() % tokens.size()];
    return t;
}

// Counting information of a word by its definition.
CountingInfo definition_info(const std::string& w, const std::regex& re) {
    auto lines = oracle::lines_of(w + "\n");  // a trailing newline leaves an empty last line
    auto hit = [&](const std::string& l) { return std::regex_search(l, re); };
    CountingInfo c;
    c.N = w.find('\n') != std::string::npos;
    c.L = hit(lines.front());
    c.R = hit(lines.back());
    for (std::size_t i = 1; i + 1 < lines.size(); ++i) c.M += hit(lines[i]);
    return c;
}

std::string first_line(const std::string& w) { return w.substr(0, w.find('\n')); }
std::string last_line(const std::string& w) {
    auto k = w.rfind('\n');
    return k == std::string::npos ? w : w.substr(k + 1);
}

Nfa nfa_of(const std::string& pat) { return compile_regex(pat); }

}  // namespace

TEST(Counting, Combination) {
    CountingInfo a{true, true, false, 0}, b{true, false, true, 0};
    EXPECT_EQ(combine_counting(a, b, true), (CountingInfo{true, true, true, 1}));
    EXPECT_EQ(combine_counting({}, {}, false), CountingInfo{});
    EXPECT_EQ(combine_counting({false, true, true, 0}, {}, false), (CountingInfo{false, true, true, 0}));
}

TEST(Counting, FoldMatchesDefinition) {
    std::mt19937 g(61);
    for (auto& pat : kSuite) {
        std::regex re(pat);
        for (int it = 0; it < 150; ++it) {
            std::string t = random_text(g, 80);
            std::size_t i = g() % (t.size() + 1), j = g() % (t.size() + 1);
            if (i > j) std::swap(i, j);
            std::string x = t.substr(0, i), y = t.substr(i, j - i), z = t.substr(j);
            if (x.empty() || y.empty() || z.empty()) continue;
            auto m = [&](const std::string& u, const std::string& v) { return std::regex_search(last_line(u) + first_line(v), re); };
            auto xy = combine_counting(definition_info(x, re), definition_info(y, re), m(x, y));
            auto left = combine_counting(xy, definition_info(z, re), m(x + y, z));
            auto yz = combine_counting(definition_info(y, re), definition_info(z, re), m(y, z));
            auto right = combine_counting(definition_info(x, re), yz, m(x, y + z));
            auto want = definition_info(t, re);
            EXPECT_EQ(left, want) << pat;
            EXPECT_EQ(right, want) << pat;
            EXPECT_EQ(want.total(), oracle::scan_count(t, pat));
            if (!want.N) EXPECT_EQ(want.L, want.R);
        }
    }
}

TEST(CountLines, ThreeLineExample) {
    Slp p = repair_compress("ab\na\nbab\n");
    EXPECT_EQ(count_lines(p, nfa_of("ba")), 1u);
    EXPECT_EQ(report_lines(p, nfa_of("ba")), (std::vector<MatchLine>{{3, "bab"}}));
    EXPECT_TRUE(slp_match_exists(p, nfa_of("ba")));
}

TEST(CountLines, NoMatch) {
    Slp p = repair_compress("aa");
    EXPECT_EQ(count_lines(p, nfa_of("b")), 0u);
    EXPECT_TRUE(report_lines(p, nfa_of("b")).empty());
    EXPECT_FALSE(slp_match_exists(p, nfa_of("b")));
}

TEST(MatchExists, SmallCases) {
    Slp ab;
    ab.axiom = {'a', 'b'};
    EXPECT_TRUE(slp_match_exists(ab, nfa_of("ab")));
    // a match across a newline counts as a factor but not as a line
    Slp cross = repair_compress("xa\nbx");
    EXPECT_TRUE(slp_match_exists(cross, nfa_of("a\\nb")));
    EXPECT_EQ(count_lines(cross, nfa_of("a\\nb")), 0u);
    // factors of {ab, bb}
    EXPECT_TRUE(slp_match_exists(repair_compress("$a$bb$"), nfa_of("ab|bb")));
    EXPECT_FALSE(slp_match_exists(repair_compress("$a$ba$b"), nfa_of("ab|bb")));
}

TEST(CountLines, SuiteAgreesWithScanOnRandomTexts) {
    std::mt19937 g(62);
    for (int it = 0; it < 120; ++it) {
        std::string t = random_text(g, it < 100 ? 400 : 6000);
        Slp p = repair_compress(t);
        for (auto& pat : kSuite) {
            Nfa n = nfa_of(pat);
            auto want = oracle::scan_lines(t, pat);
            ASSERT_EQ(count_lines(p, n), want.size()) << pat << "\n" << t;
            auto got = report_lines(p, n);
            ASSERT_EQ(got.size(), want.size()) << pat;
            for (std::size_t i = 0; i < got.size(); ++i) {
                EXPECT_EQ(got[i].number, want[i].first);
                EXPECT_EQ(got[i].text, want[i].second);
            }
            EXPECT_EQ(slp_match_exists(p, n), std::regex_search(t, std::regex(pat)));
        }
    }
}

TEST(CountLines, HomogeneousDfaGivesSameCounts) {
    std::mt19937 g(63);
    for (int it = 0; it < 60; ++it) {
        std::string t;
        for (std::size_t len = 2 + g() % 300; t.size() < len;) t.push_back("abc\n"[g() % 4]);
        Slp p = repair_compress(t);
        for (const char* pat : {"a+bb+a+c+", "(a|b)(a|c)(b|c)(a|c)", "ab+c", "b+a"}) {
            Regex r = parse_regex(pat);
            Nfa d = detail::trim(to_nfa(homogeneous_dfa(r, homogeneous_kind(r))));
            EXPECT_EQ(count_lines(p, d), oracle::scan_count(t, pat)) << pat;
            EXPECT_EQ(count_lines(p, d), count_lines(p, compile_regex(r))) << pat;
        }
    }
}

TEST(CountLines, RepeatedLineGrammar) {
    for (int k = 1; k <= 20; ++k) {
        Slp p = oracle::power_slp("I love you\n", k);
        EXPECT_EQ(count_lines(p, nfa_of("I .* you")), std::uint64_t{1} << k);
        EXPECT_EQ(count_lines(p, nfa_of("HTTP")), 0u);
        EXPECT_EQ(count_lines(p, nfa_of("[a-z]{4}")), std::uint64_t{1} << k);
    }
}

TEST(Tables, InfoMatchesDefinitionPerSymbolAndEdgesAreUnique) {
    std::mt19937 g(64);
    for (int it = 0; it < 40; ++it) {
        std::string t = random_text(g, 500);
        Slp p = repair_compress(t);
        for (const std::string pat : {"what", "[a-z]{4}", "I .* you", "[0-9]{2}/(Jun|Jul|Aug)/[0-9]{4}"}) {
            std::regex re(pat);
            Nfa a = prepare_search_nfa(nfa_of(pat), true);
            SlpTables tb(p, a, true);
            auto lens = p.lengths();
            for (std::size_t i = 1; i <= p.rules.size(); ++i) {
                std::uint32_t x = Slp::rule_id(i);
                auto& es = tb.edges(x);
                std::set<std::pair<int, int>> uniq(es.begin(), es.end());
                EXPECT_EQ(uniq.size(), es.size());
                if (lens[x] > 4096) continue;
                std::string w;
                expand_symbol(p, x, w);
                EXPECT_EQ(tb.info(x), definition_info(w, re)) << pat << " on " << w;
            }
        }
    }
}

TEST(Tables, OperationCountBounds) {
    std::mt19937 g(65);
    for (int it = 0; it < 40; ++it) {
        std::string t = random_text(g, 3000);
        Slp p = repair_compress(t);
        for (auto& pat : kSuite) {
            SearchStats st;
            Nfa n = nfa_of(pat);
            count_lines(p, n, &st);
            double ts = static_cast<double>(st.effective_rules) * st.states;
            EXPECT_LE(static_cast<double>(st.inner_iterations), 8.0 * ts * st.states * st.states) << pat;
            SearchStats sd;
            count_lines(p, detail::trim(to_nfa(minimal_dfa(n))), &sd);
            EXPECT_LE(static_cast<double>(sd.inner_iterations), 8.0 * static_cast<double>(sd.effective_rules) * sd.states) << pat;
        }
    }
}
