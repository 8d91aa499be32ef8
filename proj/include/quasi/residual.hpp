#pragma once

#include <deque>
#include <functional>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "automata.hpp"
#include "quasiorder.hpp"

namespace quasi {

struct Principal {
    Bits key;   // post_u(I) (right) or pre_u(F) (left)
    Word word;  // shortest representative u
    bool composite = false;
};

struct PrincipalSet {
    Side side = Side::Right;
    std::vector<Principal> items;  // items[0] is the principal of ε
};

using KeyOrder = std::function<bool(const Bits&, const Bits&)>;

namespace detail {

inline const Nfa& oriented(const Nfa& n, Side side, Nfa& storage) {
    if (side == Side::Right) return n;
    storage = reverse(n);
    return storage;
}

// Composite iff W_{key} equals the union of W_{k} over keys strictly below key.
inline bool composite_in(const Nfa& a, const Bits& key, const std::vector<Principal>& items, const KeyOrder& leq) {
    Bits below(a.size());
    for (auto& p : items)
        if (leq(p.key, key) && !leq(key, p.key)) below |= p.key;
    return sets_language_equal(a, key, below);
}

}  // namespace detail

inline KeyOrder subset_order() {
    return [](const Bits& x, const Bits& y) { return x.subset_of(y); };
}

// Reachable post-sets (right) or pre-sets (left) with shortest representatives,
// in breadth-first order. The empty set is included when reachable.
inline PrincipalSet principals(const Nfa& n, Side side) {
    Nfa storage;
    const Nfa& a = detail::oriented(n, side, storage);
    PrincipalSet ps;
    ps.side = side;
    std::unordered_map<Bits, int, BitsHash> seen;
    ps.items.push_back({a.initial(), Word{}, false});
    seen.emplace(a.initial(), 0);
    for (std::size_t i = 0; i < ps.items.size(); ++i)
        for (Symbol s : a.alphabet()) {
            Bits k = a.post(ps.items[i].key, s);
            if (seen.count(k)) continue;
            seen.emplace(k, static_cast<int>(ps.items.size()));
            Word w = ps.items[i].word;
            if (side == Side::Right)
                w.push_back(static_cast<char>(s));
            else
                w.insert(w.begin(), static_cast<char>(s));
            ps.items.push_back({std::move(k), std::move(w), false});
        }
    auto leq = subset_order();
    for (auto& p : ps.items) p.composite = detail::composite_in(a, p.key, ps.items, leq);
    return ps;
}

inline bool is_composite(const Nfa& n, const Bits& key, const PrincipalSet& ps, Side side) {
    Nfa storage;
    return detail::composite_in(detail::oriented(n, side, storage), key, ps.items, subset_order());
}

// Automaton H over the principals of ps ordered by leq, for the language of lang.
// Principals equivalent under leq are merged (first one kept); composites are dropped.
inline Nfa build_H(const PrincipalSet& ps, const KeyOrder& leq, const Nfa& lang) {
    const Side side = ps.side;
    Nfa storage;
    const Nfa& a = detail::oriented(lang, side, storage);
    std::vector<const Principal*> states;
    for (std::size_t i = 0; i < ps.items.size(); ++i) {
        const auto& p = ps.items[i];
        bool dup = false;
        for (std::size_t j = 0; j < i && !dup; ++j) dup = leq(ps.items[j].key, p.key) && leq(p.key, ps.items[j].key);
        if (dup || detail::composite_in(a, p.key, ps.items, leq)) continue;
        states.push_back(&p);
    }
    const int m = static_cast<int>(states.size());
    const Bits& eps = ps.items[0].key;
    Nfa h(m);
    for (Symbol s : lang.alphabet()) h.add_symbol(s);
    for (int i = 0; i < m; ++i) {
        const Bits& k = states[i]->key;
        bool at_eps = leq(k, eps);
        bool in_lang = k.intersects(a.final_states());
        if (side == Side::Right) {
            if (at_eps) h.set_initial(i);
            if (in_lang) h.set_final(i);
        } else {
            if (in_lang) h.set_initial(i);
            if (at_eps) h.set_final(i);
        }
        for (Symbol s : lang.alphabet()) {
            Bits ka = a.post(k, s);  // key of ua (right) or au (left)
            for (int j = 0; j < m; ++j)
                if (leq(states[j]->key, ka)) {
                    if (side == Side::Right)
                        h.add_transition(i, s, j);
                    else
                        h.add_transition(j, s, i);
                }
        }
    }
    return h;
}

// Res^r(n) = H^r over post-sets ordered by ⊆; Res^ℓ(n) over pre-sets.
inline Nfa res(const Nfa& n, Side side) { return build_H(principals(n, side), subset_order(), n); }

// Nerode order on keys: inclusion of the quotients they denote.
inline KeyOrder nerode_key_order(const Nfa& n, Side side) {
    auto a = std::make_shared<Nfa>(side == Side::Right ? n : reverse(n));
    return [a](const Bits& x, const Bits& y) { return sets_language_included(*a, x, y); };
}

// Canonical RFA from the prime states of the minimal DFA. The left variant is
// the reverse of the canonical RFA of the reversed language.
inline Nfa canonical(const Nfa& lang, Side side) {
    if (side == Side::Left) return reverse(canonical(reverse(lang), Side::Right));
    Dfa d = minimal_dfa(lang);
    const int n = d.n, k = d.k();
    auto incl = residual_inclusion(d);
    auto le = [&](int p, int q) { return incl[static_cast<std::size_t>(p) * n + q] != 0; };
    Nfa dn = to_nfa(d);
    std::vector<int> prime;
    for (int p = 0; p < n; ++p) {
        Bits self(n), below(n);
        self.set(p);
        for (int q = 0; q < n; ++q)
            if (le(q, p) && !le(p, q)) below.set(q);
        if (!sets_language_equal(dn, self, below)) prime.push_back(p);
    }
    const int m = static_cast<int>(prime.size());
    Nfa r(m);
    for (Symbol s : lang.alphabet()) r.add_symbol(s);
    for (int i = 0; i < m; ++i) {
        int p = prime[i];
        if (le(p, d.init)) r.set_initial(i);
        if (d.fin[p]) r.set_final(i);
        for (int j = 0; j < k; ++j) {
            int t = d.delta[static_cast<std::size_t>(p) * k + j];
            for (int x = 0; x < m; ++x)
                if (le(prime[x], t)) r.add_transition(i, d.sigma[j], x);
        }
    }
    return r;
}

// Residualization of Denis et al.: non-coverable reachable subsets with
// saturated transitions.
inline Nfa denis_residualize(const Nfa& n) {
    Dfa d = determinize(n);
    std::vector<int> keep;
    for (int i = 0; i < d.n; ++i) {
        const Bits& s = d.subsets[i];
        if (s.none()) continue;
        Bits cover(n.size());
        for (int j = 0; j < d.n; ++j)
            if (j != i && d.subsets[j].subset_of(s)) cover |= d.subsets[j];
        if (cover != s) keep.push_back(i);
    }
    const int m = static_cast<int>(keep.size());
    Nfa r(m);
    for (Symbol s : n.alphabet()) r.add_symbol(s);
    for (int i = 0; i < m; ++i) {
        const Bits& s = d.subsets[keep[i]];
        if (s.subset_of(n.initial())) r.set_initial(i);
        if (s.intersects(n.final_states())) r.set_final(i);
        for (Symbol a : n.alphabet()) {
            Bits t = n.post(s, a);
            for (int j = 0; j < m; ++j)
                if (d.subsets[keep[j]].subset_of(t)) r.add_transition(i, a, j);
        }
    }
    return r;
}

inline Nfa double_reversal_canonical(const Nfa& n) { return res(reverse(res(reverse(n), Side::Right)), Side::Right); }

// True iff the left language of every state is upward closed for the right
// Nerode order of L(n).
inline bool check_dr_condition(const Nfa& n) {
    Dfa d = minimal_dfa(n);
    const int m = d.n;
    auto incl = residual_inclusion(d);
    // pairs (q, p) reachable in the product of n with d
    std::vector<char> seen(static_cast<std::size_t>(n.size()) * m, 0);
    std::vector<std::pair<int, int>> todo;
    n.initial().for_each([&](std::size_t q) {
        seen[q * m + d.init] = 1;
        todo.emplace_back(static_cast<int>(q), d.init);
    });
    while (!todo.empty()) {
        auto [q, p] = todo.back();
        todo.pop_back();
        for (auto& e : n.out(q)) {
            int p2 = d.next(p, e.sym);
            auto& s = seen[static_cast<std::size_t>(e.to) * m + p2];
            if (!s) {
                s = 1;
                todo.emplace_back(e.to, p2);
            }
        }
    }
    Nfa dn = to_nfa(d);
    for (int q = 0; q < n.size(); ++q) {
        Bits up(m);
        for (int p = 0; p < m; ++p) {
            if (!seen[static_cast<std::size_t>(q) * m + p]) continue;
            for (int p2 = 0; p2 < m; ++p2)
                if (incl[static_cast<std::size_t>(p) * m + p2]) up.set(p2);
        }
        Bits fq(n.size());
        fq.set(q);
        if (!language_included(with_final(dn, up), with_final(n, fq))) return false;
    }
    return true;
}

// Every state's right language is a residual of L(n).
inline bool is_rfa(const Nfa& n) {
    Dfa d = minimal_dfa(n);
    for (int q = 0; q < n.size(); ++q) {
        Bits iq(n.size());
        iq.set(q);
        Nfa nq = with_initial(n, iq);
        bool found = false;
        for (int p = 0; p < d.n && !found; ++p) found = language_equal(nq, dfa_state_language(d, p));
        if (!found) return false;
    }
    return true;
}

// Isomorphism of automata whose states are told apart by right languages first.
inline bool isomorphic(const Nfa& a, const Nfa& b) {
    if (a.size() != b.size() || a.transition_count() != b.transition_count()) return false;
    if (a.initial().count() != b.initial().count() || a.final_states().count() != b.final_states().count()) return false;
    const int n = a.size();
    // label[i] for states of a, then of b: index of the first state with the same right language
    std::vector<Nfa> right;
    for (int q = 0; q < n; ++q) right.push_back(with_initial(a, Bits::of(n, {q})));
    for (int q = 0; q < n; ++q) right.push_back(with_initial(b, Bits::of(n, {q})));
    std::vector<int> label(2 * n, -1);
    for (int i = 0; i < 2 * n; ++i) {
        if (label[i] >= 0) continue;
        label[i] = i;
        for (int j = i + 1; j < 2 * n; ++j)
            if (label[j] < 0 && language_equal(right[i], right[j])) label[j] = i;
    }
    std::vector<int> f(n, -1);
    std::vector<char> used(n, 0);
    auto consistent = [&](int p) {
        int fp = f[p];
        if (a.initial().test(p) != b.initial().test(fp) || a.final_states().test(p) != b.final_states().test(fp)) return false;
        if (a.out(p).size() != b.out(fp).size()) return false;
        for (int q = 0; q <= p; ++q) {
            int fq = f[q];
            for (Symbol s : merge_alphabets(a.alphabet(), b.alphabet())) {
                if (a.has_transition(p, s, q) != b.has_transition(fp, s, fq)) return false;
                if (a.has_transition(q, s, p) != b.has_transition(fq, s, fp)) return false;
            }
        }
        return true;
    };
    std::function<bool(int)> go = [&](int p) {
        if (p == n) return true;
        for (int c = 0; c < n; ++c) {
            if (used[c] || label[n + c] != label[p]) continue;
            f[p] = c;
            used[c] = 1;
            if (consistent(p) && go(p + 1)) return true;
            used[c] = 0;
            f[p] = -1;
        }
        return false;
    };
    return go(0);
}

}  // namespace quasi
