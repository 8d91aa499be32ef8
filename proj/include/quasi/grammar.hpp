#pragma once

#include <limits>
#include <optional>
#include <string>
#include <tuple>
#include <stdexcept>
#include <utility>
#include <vector>

#include "automata.hpp"

namespace quasi {

// Context-free grammar in Chomsky normal form. Variable 0 is the axiom.
struct CnfGrammar {
    int vars = 0;
    std::vector<std::vector<Symbol>> term;               // X -> a
    std::vector<std::vector<std::pair<int, int>>> bin;  // X -> Y Z
    bool axiom_eps = false;                              // X0 -> ε

    explicit CnfGrammar(int n = 0) : vars(n), term(n), bin(n) {}

    void add_term(int x, Symbol a) {
        check(x);
        for (Symbol s : term[x])
            if (s == a) return;
        term[x].push_back(a);
    }
    void add_bin(int x, int y, int z) {
        check(x);
        check(y);
        check(z);
        for (auto& p : bin[x])
            if (p == std::make_pair(y, z)) return;
        bin[x].emplace_back(y, z);
    }

    std::vector<Symbol> alphabet() const {
        Nfa tmp(0);
        for (auto& v : term)
            for (Symbol s : v) tmp.add_symbol(s);
        return tmp.alphabet();
    }

    // Throws std::invalid_argument when some variable has no rule.
    void validate() const {
        for (int x = 0; x < vars; ++x)
            if (term[x].empty() && bin[x].empty() && !(x == 0 && axiom_eps))
                throw std::invalid_argument("variable X" + std::to_string(x) + " has no rule");
    }

private:
    void check(int x) const {
        if (x < 0 || x >= vars) throw std::out_of_range("variable index out of range");
    }
};

// Decides L(g) ⊆ L(d) through emptiness of the product grammar with the complement of d.
// The witness is a shortest word of L(g) \ L(d).
inline Verdict cfg_in_regular_oracle(const CnfGrammar& g, const Dfa& din) {
    Dfa d = complete(determinize(to_nfa(din), merge_alphabets(din.sigma, g.alphabet())));
    const int n = d.n, V = g.vars;
    const long long INF = std::numeric_limits<long long>::max() / 4;
    auto at = [&](int x, int p, int q) { return (static_cast<std::size_t>(x) * n + p) * n + q; };
    std::vector<long long> len(static_cast<std::size_t>(V) * n * n, INF);
    // back pointer: -1 terminal (or ε when eps is set), otherwise (rule index, split state)
    struct Back {
        int rule = -1, mid = -1;
        Symbol sym = 0;
        bool eps = false;
    };
    std::vector<Back> back(len.size());
    // X0 -> ε may be used inside derivations too, since X0 can occur on right-hand sides.
    if (g.axiom_eps)
        for (int p = 0; p < n; ++p) {
            len[at(0, p, p)] = 0;
            back[at(0, p, p)].eps = true;
        }
    for (int x = 0; x < V; ++x)
        for (Symbol a : g.term[x])
            for (int p = 0; p < n; ++p) {
                int q = d.next(p, a);
                if (len[at(x, p, q)] > 1) {
                    len[at(x, p, q)] = 1;
                    back[at(x, p, q)] = {-1, -1, a, false};
                }
            }
    bool changed = true;
    while (changed) {
        changed = false;
        for (int x = 0; x < V; ++x)
            for (int r = 0; r < static_cast<int>(g.bin[x].size()); ++r) {
                auto [y, z] = g.bin[x][r];
                for (int p = 0; p < n; ++p)
                    for (int m = 0; m < n; ++m) {
                        long long a = len[at(y, p, m)];
                        if (a >= INF) continue;
                        for (int q = 0; q < n; ++q) {
                            long long b = len[at(z, m, q)];
                            if (b >= INF) continue;
                            if (a + b < len[at(x, p, q)]) {
                                len[at(x, p, q)] = a + b;
                                back[at(x, p, q)] = {r, m, 0, false};
                                changed = true;
                            }
                        }
                    }
            }
    }
    int best = -1;
    for (int q = 0; q < n; ++q)
        if (!d.fin[q] && len[at(0, d.init, q)] < INF && (best < 0 || len[at(0, d.init, q)] < len[at(0, d.init, best)])) best = q;
    if (best < 0) return {true, std::nullopt};
    Word w;
    std::vector<std::tuple<int, int, int>> stack{{0, d.init, best}};
    while (!stack.empty()) {
        auto [x, p, q] = stack.back();
        stack.pop_back();
        const Back& b = back[at(x, p, q)];
        if (b.eps) continue;
        if (b.rule < 0) {
            w.push_back(static_cast<char>(b.sym));
            continue;
        }
        auto [y, z] = g.bin[x][b.rule];
        stack.emplace_back(z, b.mid, q);
        stack.emplace_back(y, p, b.mid);
    }
    return {false, w};
}

}  // namespace quasi
