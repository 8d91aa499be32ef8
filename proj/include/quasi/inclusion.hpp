#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "automata.hpp"
#include "fixpoint.hpp"
#include "grammar.hpp"
#include "quasiorder.hpp"

namespace quasi {

using Membership = std::function<bool(const Word&)>;

struct WordIncResult {
    Verdict verdict;
    std::vector<std::vector<Word>> fixpoint;  // surviving generating words per state or variable
    std::size_t iterations = 0;
};

struct KeyIncResult {
    Verdict verdict;
    std::vector<std::vector<Bits>> fixpoint;
    std::vector<std::vector<Word>> words;  // generating word of each key
    std::size_t iterations = 0;
};

namespace detail {

template <class Key>
struct Entry {
    Word word;
    Key key;
};

template <class Key>
using EntryVec = std::vector<Antichain<Entry<Key>>>;

template <class Key, class Leq>
bool vec_abs_eq(const EntryVec<Key>& x, const EntryVec<Key>& y, const Leq& leq) {
    auto l = [&](const Entry<Key>& a, const Entry<Key>& b) { return leq(a.key, b.key); };
    for (std::size_t i = 0; i < x.size(); ++i)
        if (!ac_below(x[i], y[i], l) || !ac_below(y[i], x[i], l)) return false;
    return true;
}

template <class Key>
std::vector<std::vector<Word>> words_of(const EntryVec<Key>& v) {
    std::vector<std::vector<Word>> r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        for (auto& e : v[i]) r[i].push_back(e.word);
    return r;
}

inline bool shortlex_less(const Word& a, const Word& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
}

}  // namespace detail

// Word-based inclusion L(n1) ⊆ L2 for an L2-consistent quasiorder handle.
// Left handles iterate X_q = ε^F ∪ ⋃ a·X_{q'} over q -a-> q' and check the
// components of initial states; right handles iterate over predecessors and
// check the components of final states.
template <class QO>
WordIncResult fa_inc_word(const Nfa& n1, const QO& qo, const Membership& member,
                          std::size_t cap = kDefaultIterationCap) {
    using Key = typename QO::Key;
    using E = detail::Entry<Key>;
    const bool left = qo.side() == Side::Left;
    const int n = n1.size();
    auto leq = [&](const E& a, const E& b) { return qo.leq(a.key, b.key); };
    const Bits& seed = left ? n1.final_states() : n1.initial();

    auto step = [&](const detail::EntryVec<Key>& x) {
        detail::EntryVec<Key> y(n);
        for (int q = 0; q < n; ++q) {
            if (seed.test(q)) y[q].insert(E{Word{}, qo.eps()}, leq);
            const auto& edges = left ? n1.out(q) : n1.in(q);
            for (auto& e : edges)
                for (auto& w : x[e.to]) {
                    Word nw = left ? static_cast<char>(e.sym) + w.word : w.word + static_cast<char>(e.sym);
                    y[q].insert(E{std::move(nw), qo.extend(w.key, e.sym)}, leq);
                }
        }
        return y;
    };
    auto eq = [&](const detail::EntryVec<Key>& a, const detail::EntryVec<Key>& b) {
        return detail::vec_abs_eq(a, b, [&](const Key& u, const Key& v) { return qo.leq(u, v); });
    };
    auto res = kleene(step, detail::EntryVec<Key>(n), eq, cap);

    WordIncResult out;
    out.iterations = res.iterations;
    out.fixpoint = detail::words_of(res.value);
    const Bits& check = left ? n1.initial() : n1.final_states();
    for (int q = 0; q < n && out.verdict.included; ++q) {
        if (!check.test(q)) continue;
        for (auto& e : res.value[q])
            if (!member(e.word)) {
                out.verdict = {false, e.word};
                break;
            }
    }
    return out;
}

enum class AntichainVariant { Forward, Backward };

// State-based antichains algorithm. Forward keeps ⊆-minimal sets pre_w(F2);
// backward keeps ⊆-maximal complements, i.e. cpre_w(F2^c).
inline KeyIncResult fa_inc_antichain(const Nfa& n1, const Nfa& n2, AntichainVariant variant,
                                     std::size_t cap = kDefaultIterationCap) {
    using E = detail::Entry<Bits>;
    const bool fwd = variant == AntichainVariant::Forward;
    const int n = n1.size();
    auto leq = [&](const E& a, const E& b) { return fwd ? a.key.subset_of(b.key) : b.key.subset_of(a.key); };
    const Bits start = fwd ? n2.final_states() : ~n2.final_states();
    auto pre = [&](const Bits& s, Symbol a) { return fwd ? n2.pre(s, a) : ~n2.pre(~s, a); };

    auto step = [&](const detail::EntryVec<Bits>& x) {
        detail::EntryVec<Bits> y(n);
        for (int q = 0; q < n; ++q) {
            if (n1.final_states().test(q)) y[q].insert(E{Word{}, start}, leq);
            for (auto& e : n1.out(q))
                for (auto& w : x[e.to]) y[q].insert(E{static_cast<char>(e.sym) + w.word, pre(w.key, e.sym)}, leq);
        }
        return y;
    };
    auto eq = [&](const detail::EntryVec<Bits>& a, const detail::EntryVec<Bits>& b) {
        return detail::vec_abs_eq(a, b, [&](const Bits& u, const Bits& v) {
            return fwd ? u.subset_of(v) : v.subset_of(u);
        });
    };
    auto res = kleene(step, detail::EntryVec<Bits>(n), eq, cap);

    KeyIncResult out;
    out.iterations = res.iterations;
    out.fixpoint.resize(n);
    out.words.resize(n);
    std::optional<Word> witness;
    for (int q = 0; q < n; ++q)
        for (auto& e : res.value[q]) {
            out.fixpoint[q].push_back(e.key);
            out.words[q].push_back(e.word);
            if (!n1.initial().test(q)) continue;
            bool bad = fwd ? !e.key.intersects(n2.initial()) : n2.initial().subset_of(e.key);
            if (bad && (!witness || detail::shortlex_less(e.word, *witness))) witness = e.word;
        }
    if (witness) out.verdict = {false, witness};
    return out;
}

struct GfpResult {
    Verdict verdict;
    std::size_t iterations = 0;
};

// Greatest fixpoint check. Component q is the intersection of the residuals
// of L2 named by a set of states of its complete minimal DFA (∅ denotes Σ*).
inline GfpResult fa_inc_gfp(const Nfa& n1, const Dfa& l2, std::size_t cap = kDefaultIterationCap) {
    auto sigma = merge_alphabets(n1.alphabet(), l2.sigma);
    Dfa d = minimize(determinize(to_nfa(l2), sigma));
    const int n = n1.size(), m = d.n;
    using Vec = std::vector<Bits>;

    auto step = [&](const Vec& x) {
        Vec y(n, Bits(m));
        for (int q = 0; q < n; ++q) {
            if (n1.initial().test(q)) y[q].set(d.init);
            for (auto& e : n1.in(q))
                x[e.to].for_each([&](std::size_t p) { y[q].set(d.next(static_cast<int>(p), e.sym)); });
        }
        return y;
    };
    // Language equality of two intersections of residuals.
    auto same = [&](const Bits& a, const Bits& b) {
        auto all_final = [&](const Bits& s) {
            bool ok = true;
            s.for_each([&](std::size_t p) { ok = ok && d.fin[p]; });
            return ok;
        };
        auto next = [&](const Bits& s, Symbol c) {
            Bits r(m);
            s.for_each([&](std::size_t p) { r.set(d.next(static_cast<int>(p), c)); });
            return r;
        };
        std::vector<std::pair<Bits, Bits>> todo{{a, b}};
        std::unordered_map<Bits, std::vector<Bits>, BitsHash> seen;
        seen[a].push_back(b);
        while (!todo.empty()) {
            auto [s, t] = todo.back();
            todo.pop_back();
            if (all_final(s) != all_final(t)) return false;
            for (Symbol c : d.sigma) {
                Bits s2 = next(s, c), t2 = next(t, c);
                auto& v = seen[s2];
                if (std::find(v.begin(), v.end(), t2) != v.end()) continue;
                v.push_back(t2);
                todo.emplace_back(std::move(s2), std::move(t2));
            }
        }
        return true;
    };
    auto eq = [&](const Vec& a, const Vec& b) {
        for (int q = 0; q < n; ++q)
            if (a[q] != b[q] && !same(a[q], b[q])) return false;
        return true;
    };
    std::size_t bound = m < 30 ? (std::size_t{1} << m) : cap;
    bound = std::max(bound, static_cast<std::size_t>(n) * m) + 2;
    auto res = kleene(step, Vec(n, Bits(m)), eq, std::min(cap, bound));

    GfpResult out;
    out.iterations = res.iterations;
    n1.final_states().for_each([&](std::size_t q) {
        res.value[q].for_each([&](std::size_t p) {
            if (!d.fin[p]) out.verdict.included = false;
        });
    });
    return out;
}

// Antichains algorithm for L(g) ⊆ L(n) over sets of state pairs.
inline KeyIncResult cfg_inc_antichain(const CnfGrammar& g, const Nfa& n, std::size_t cap = kDefaultIterationCap) {
    using E = detail::Entry<Bits>;
    const int s = n.size();
    auto leq = [](const E& a, const E& b) { return a.key.subset_of(b.key); };
    Bits accept(static_cast<std::size_t>(s) * s);
    n.initial().for_each([&](std::size_t p) {
        n.final_states().for_each([&](std::size_t q) { accept.set(p * s + q); });
    });

    auto step = [&](const detail::EntryVec<Bits>& x) {
        detail::EntryVec<Bits> y(g.vars);
        for (int v = 0; v < g.vars; ++v) {
            if (v == 0 && g.axiom_eps) y[v].insert(E{Word{}, ctx_identity(s)}, leq);
            for (Symbol a : g.term[v]) y[v].insert(E{Word(1, static_cast<char>(a)), ctx_letter(n, a)}, leq);
            for (auto [j, k] : g.bin[v])
                for (auto& u : x[j])
                    for (auto& w : x[k]) y[v].insert(E{u.word + w.word, ctx_compose(u.key, w.key, s)}, leq);
        }
        return y;
    };
    auto eq = [&](const detail::EntryVec<Bits>& a, const detail::EntryVec<Bits>& b) {
        return detail::vec_abs_eq(a, b, [](const Bits& u, const Bits& v) { return u.subset_of(v); });
    };
    auto res = kleene(step, detail::EntryVec<Bits>(g.vars), eq, cap);

    KeyIncResult out;
    out.iterations = res.iterations;
    out.fixpoint.resize(g.vars);
    out.words.resize(g.vars);
    std::optional<Word> witness;
    for (int v = 0; v < g.vars; ++v)
        for (auto& e : res.value[v]) {
            out.fixpoint[v].push_back(e.key);
            out.words[v].push_back(e.word);
            if (v == 0 && !e.key.intersects(accept) && (!witness || detail::shortlex_less(e.word, *witness)))
                witness = e.word;
        }
    if (witness) out.verdict = {false, witness};
    return out;
}

// Word-based algorithm for L(g) ⊆ L2 with a two-sided quasiorder handle.
template <class QO>
WordIncResult cfg_inc_word(const CnfGrammar& g, const QO& qo, const Membership& member,
                           std::size_t cap = kDefaultIterationCap) {
    using Key = typename QO::Key;
    using E = detail::Entry<Key>;
    auto leq = [&](const E& a, const E& b) { return qo.leq(a.key, b.key); };

    auto step = [&](const detail::EntryVec<Key>& x) {
        detail::EntryVec<Key> y(g.vars);
        for (int v = 0; v < g.vars; ++v) {
            if (v == 0 && g.axiom_eps) y[v].insert(E{Word{}, qo.eps()}, leq);
            for (Symbol a : g.term[v]) y[v].insert(E{Word(1, static_cast<char>(a)), qo.letter(a)}, leq);
            for (auto [j, k] : g.bin[v])
                for (auto& u : x[j])
                    for (auto& w : x[k]) y[v].insert(E{u.word + w.word, qo.concat(u.key, w.key)}, leq);
        }
        return y;
    };
    auto eq = [&](const detail::EntryVec<Key>& a, const detail::EntryVec<Key>& b) {
        return detail::vec_abs_eq(a, b, [&](const Key& u, const Key& v) { return qo.leq(u, v); });
    };
    auto res = kleene(step, detail::EntryVec<Key>(g.vars), eq, cap);

    WordIncResult out;
    out.iterations = res.iterations;
    out.fixpoint = detail::words_of(res.value);
    if (g.vars > 0)
        for (auto& e : res.value[0])
            if (!member(e.word)) {
                out.verdict = {false, e.word};
                break;
            }
    return out;
}

// L(n) ⊆ T(start, counter): word-based right algorithm on OCN macro states.
inline WordIncResult nfa_in_ocn(const Nfa& n, const Ocn& o, int start, long long counter,
                                std::size_t cap = kDefaultIterationCap) {
    MacroOrder qo(o, start, counter);
    auto member = [&](const Word& w) { return macro_nonempty(ocn_macro(o, start, counter, w)); };
    return fa_inc_word(n, qo, member, cap);
}

// Convenience instantiations of the word-based algorithm against an NFA n2.
enum class WordOrder { Nerode, State, Simulation };

inline WordIncResult fa_inc_word(const Nfa& n1, const Nfa& n2, WordOrder order, Side side = Side::Left,
                                 std::size_t cap = kDefaultIterationCap) {
    auto member = [&](const Word& w) { return n2.member(w); };
    switch (order) {
        case WordOrder::Nerode:
            return fa_inc_word(n1, NerodeOrder(n2, side, n1.alphabet()), member, cap);
        case WordOrder::State:
            return fa_inc_word(n1, StateOrder(n2, side), member, cap);
        case WordOrder::Simulation:
        default:
            return fa_inc_word(n1, SimOrder(n2, side), member, cap);
    }
}

}  // namespace quasi
