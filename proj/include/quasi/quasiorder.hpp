#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

#include "automata.hpp"

namespace quasi {

// Side of the concatenation a quasiorder is monotone for. Left orders extend
// words by prepending letters, right orders by appending.
enum class Side { Left, Right };

inline Bits state_key(const Nfa& n, const Word& w, Side s) {
    return n.run(w, s == Side::Right ? Dir::Forward : Dir::Backward);
}

// ---- simulations -----------------------------------------------------------

struct SimRelation {
    int n = 0;
    std::vector<char> rel;
    bool operator()(int p, int q) const { return rel[static_cast<std::size_t>(p) * n + q] != 0; }
};

// Coarsest simulation on n (right) or on reverse(n) (left).
inline SimRelation max_simulation(const Nfa& in, Side side) {
    const Nfa a = side == Side::Right ? in : reverse(in);
    const int n = a.size();
    SimRelation s{n, std::vector<char>(static_cast<std::size_t>(n) * n, 1)};
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
            if (a.final_states().test(p) && !a.final_states().test(q)) s.rel[static_cast<std::size_t>(p) * n + q] = 0;
    bool changed = true;
    while (changed) {
        changed = false;
        for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q) {
                auto& r = s.rel[static_cast<std::size_t>(p) * n + q];
                if (!r) continue;
                for (auto& e : a.out(p)) {
                    bool matched = false;
                    for (auto& f : a.out(q))
                        if (f.sym == e.sym && s(e.to, f.to)) {
                            matched = true;
                            break;
                        }
                    if (!matched) {
                        r = 0;
                        changed = true;
                        break;
                    }
                }
            }
    }
    return s;
}

// ∀x ∈ u ∃y ∈ v with x simulated by y.
inline bool sim_leq(const Bits& u, const Bits& v, const SimRelation& sim) {
    bool ok = true;
    u.for_each([&](std::size_t x) {
        if (!ok) return;
        bool found = false;
        v.for_each([&](std::size_t y) {
            if (!found && sim(static_cast<int>(x), static_cast<int>(y))) found = true;
        });
        ok = found;
    });
    return ok;
}

// ---- Nerode and Myhill -----------------------------------------------------

// Nerode quasiorder of L(lang). Right keys are states of the minimal DFA of L;
// left keys are states of the minimal DFA of L^R reached on the reversed word.
class NerodeOrder {
public:
    NerodeOrder(const Nfa& lang, Side side, std::optional<std::vector<Symbol>> sigma = std::nullopt)
        : side_(side) {
        auto s = sigma ? merge_alphabets(*sigma, lang.alphabet()) : lang.alphabet();
        dfa_ = minimal_dfa(side == Side::Right ? lang : reverse(lang), s);
        incl_ = residual_inclusion(dfa_);
    }

    using Key = int;
    Side side() const { return side_; }
    const Dfa& dfa() const { return dfa_; }

    Key eps() const { return dfa_.init; }
    Key extend(Key k, Symbol a) const {
        int q = dfa_.next(k, a);
        return q < 0 ? sink() : q;
    }
    Key key(const Word& w) const {
        Key k = eps();
        if (side_ == Side::Right)
            for (unsigned char c : w) k = extend(k, c);
        else
            for (auto it = w.rbegin(); it != w.rend(); ++it) k = extend(k, static_cast<Symbol>(*it));
        return k;
    }
    bool leq(Key a, Key b) const {
        if (a < 0) return true;
        if (b < 0) return false;
        return incl_[static_cast<std::size_t>(a) * dfa_.n + b] != 0;
    }
    bool leq(const Word& u, const Word& v) const { return leq(key(u), key(v)); }

private:
    // Letters outside the DFA alphabet lead to the empty residual; -1 stands for it.
    static int sink() { return -1; }

    Side side_;
    Dfa dfa_;
    std::vector<char> incl_;
};

// u ≤ v iff u^{-1}L ⊆ v^{-1}L (right) or Lu^{-1} ⊆ Lv^{-1} (left).
// For the left order min_dfa must be the minimal DFA of L^R.
inline bool nerode_leq(const Dfa& min_dfa, const Word& u, const Word& v, Side side) {
    Dfa d = complete(min_dfa);
    auto incl = residual_inclusion(d);
    auto target = [&](const Word& w) {
        if (side == Side::Right) return d.run(w, d.init);
        Word r(w.rbegin(), w.rend());
        return d.run(r, d.init);
    };
    int p = target(u), q = target(v);
    if (p < 0) return true;
    if (q < 0) return false;
    return incl[static_cast<std::size_t>(p) * d.n + q] != 0;
}

// Myhill quasiorder: ctx_L(u) ⊆ ctx_L(v). Keys are state maps of the minimal DFA.
class MyhillOrder {
public:
    explicit MyhillOrder(const Nfa& lang, std::optional<std::vector<Symbol>> sigma = std::nullopt) {
        auto s = sigma ? merge_alphabets(*sigma, lang.alphabet()) : lang.alphabet();
        dfa_ = minimal_dfa(lang, s);
        incl_ = residual_inclusion(dfa_);
    }

    using Key = std::vector<int>;
    const Dfa& dfa() const { return dfa_; }

    Key eps() const {
        Key k(dfa_.n);
        for (int p = 0; p < dfa_.n; ++p) k[p] = p;
        return k;
    }
    Key letter(Symbol a) const {
        Key k(dfa_.n, -1);
        for (int p = 0; p < dfa_.n; ++p) k[p] = dfa_.next(p, a);
        return k;
    }
    // key(uv) from key(u), key(v): first u then v.
    Key concat(const Key& u, const Key& v) const {
        Key k(dfa_.n, -1);
        for (int p = 0; p < dfa_.n; ++p) k[p] = u[p] < 0 ? -1 : v[u[p]];
        return k;
    }
    Key key(const Word& w) const {
        Key k = eps();
        for (unsigned char c : w) k = concat(k, letter(c));
        return k;
    }
    bool leq(const Key& u, const Key& v) const {
        for (int p = 0; p < dfa_.n; ++p) {
            if (u[p] < 0) continue;
            if (v[p] < 0) return false;
            if (!incl_[static_cast<std::size_t>(u[p]) * dfa_.n + v[p]]) return false;
        }
        return true;
    }
    bool leq(const Word& u, const Word& v) const { return leq(key(u), key(v)); }

private:
    Dfa dfa_;
    std::vector<char> incl_;
};

inline bool myhill_leq(const Dfa& min_dfa, const Word& u, const Word& v) {
    Dfa d = complete(min_dfa);
    auto incl = residual_inclusion(d);
    for (int p = 0; p < d.n; ++p) {
        int a = d.run(u, p), b = d.run(v, p);
        if (a < 0) continue;
        if (b < 0 || !incl[static_cast<std::size_t>(a) * d.n + b]) return false;
    }
    return true;
}

// ---- contexts over an NFA --------------------------------------------------

// Pair (p, q) is bit p * n + q.
inline Bits ctx_identity(int n) {
    Bits r(static_cast<std::size_t>(n) * n);
    for (int q = 0; q < n; ++q) r.set(static_cast<std::size_t>(q) * n + q);
    return r;
}

inline Bits ctx_letter(const Nfa& a, Symbol s) {
    const int n = a.size();
    Bits r(static_cast<std::size_t>(n) * n);
    for (int p = 0; p < n; ++p)
        for (auto& e : a.out(p))
            if (e.sym == s) r.set(static_cast<std::size_t>(p) * n + e.to);
    return r;
}

inline Bits ctx_compose(const Bits& x, const Bits& y, int n) {
    Bits r(static_cast<std::size_t>(n) * n);
    for (int p = 0; p < n; ++p)
        for (int m = 0; m < n; ++m) {
            if (!x.test(static_cast<std::size_t>(p) * n + m)) continue;
            for (int q = 0; q < n; ++q)
                if (y.test(static_cast<std::size_t>(m) * n + q)) r.set(static_cast<std::size_t>(p) * n + q);
        }
    return r;
}

inline Bits ctx_key(const Nfa& a, const Word& w) {
    Bits r = ctx_identity(a.size());
    for (unsigned char c : w) r = ctx_compose(r, ctx_letter(a, c), a.size());
    return r;
}

// ---- one-counter nets ------------------------------------------------------

struct OcnTransition {
    int from;
    Symbol sym;
    int delta;  // -1, 0 or +1
    int to;
};

struct Ocn {
    int n = 0;
    std::vector<Symbol> sigma;
    std::vector<OcnTransition> trans;

    explicit Ocn(int states = 0) : n(states) {}

    void add(int p, Symbol a, int d, int q) {
        if (p < 0 || p >= n || q < 0 || q >= n) throw std::out_of_range("state index out of range");
        if (d < -1 || d > 1) throw std::invalid_argument("counter delta must be -1, 0 or +1");
        trans.push_back({p, a, d, q});
        auto it = std::lower_bound(sigma.begin(), sigma.end(), a);
        if (it == sigma.end() || *it != a) sigma.insert(it, a);
    }
};

// Per-state maximum reachable counter; -1 encodes ⊥ (unreachable).
using MacroState = std::vector<long long>;

inline MacroState ocn_macro_start(const Ocn& o, int state, long long counter) {
    if (counter < 0) throw std::invalid_argument("counter must be nonnegative");
    MacroState m(o.n, -1);
    m[state] = counter;
    return m;
}

inline MacroState ocn_macro_step(const Ocn& o, const MacroState& m, Symbol a) {
    MacroState r(o.n, -1);
    for (auto& t : o.trans) {
        if (t.sym != a || m[t.from] < 0) continue;
        long long c = m[t.from] + t.delta;
        if (c < 0) continue;
        r[t.to] = std::max(r[t.to], c);
    }
    return r;
}

inline MacroState ocn_macro(const Ocn& o, int state, long long counter, const Word& w) {
    MacroState m = ocn_macro_start(o, state, counter);
    for (unsigned char c : w) m = ocn_macro_step(o, m, c);
    return m;
}

inline bool macro_leq(const MacroState& a, const MacroState& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] >= 0 && (b[i] < 0 || a[i] > b[i])) return false;
    return true;
}

inline bool macro_nonempty(const MacroState& m) {
    return std::any_of(m.begin(), m.end(), [](long long x) { return x >= 0; });
}

// ---- handles for the word-based algorithms ---------------------------------

// Inclusion in one NFA, key = post_u(I) (right) or pre_u(F) (left), compared by ⊆.
class StateOrder {
public:
    StateOrder(const Nfa& n, Side side) : n_(n), side_(side) {}
    using Key = Bits;
    Side side() const { return side_; }
    Key eps() const { return side_ == Side::Right ? n_.initial() : n_.final_states(); }
    Key extend(const Key& k, Symbol a) const { return side_ == Side::Right ? n_.post(k, a) : n_.pre(k, a); }
    bool leq(const Key& a, const Key& b) const { return a.subset_of(b); }

private:
    Nfa n_;
    Side side_;
};

// Same keys as StateOrder, compared by the ∀∃ lift of the maximal simulation.
class SimOrder {
public:
    SimOrder(const Nfa& n, Side side) : states_(n, side), sim_(max_simulation(n, side)) {}
    using Key = Bits;
    Side side() const { return states_.side(); }
    Key eps() const { return states_.eps(); }
    Key extend(const Key& k, Symbol a) const { return states_.extend(k, a); }
    bool leq(const Key& a, const Key& b) const { return sim_leq(a, b, sim_); }
    const SimRelation& relation() const { return sim_; }

private:
    StateOrder states_;
    SimRelation sim_;
};

// Right order on words given by the OCN macro state from a fixed configuration.
class MacroOrder {
public:
    MacroOrder(const Ocn& o, int state, long long counter) : o_(o), start_(ocn_macro_start(o, state, counter)) {}
    using Key = MacroState;
    Side side() const { return Side::Right; }
    Key eps() const { return start_; }
    Key extend(const Key& k, Symbol a) const { return ocn_macro_step(o_, k, a); }
    bool leq(const Key& a, const Key& b) const { return macro_leq(a, b); }

private:
    Ocn o_;
    MacroState start_;
};

// Two-sided order on contexts of an NFA: ctx_N(u) ⊆ ctx_N(v).
class CtxOrder {
public:
    explicit CtxOrder(const Nfa& n) : n_(n) {}
    using Key = Bits;
    Key eps() const { return ctx_identity(n_.size()); }
    Key letter(Symbol a) const { return ctx_letter(n_, a); }
    Key concat(const Key& u, const Key& v) const { return ctx_compose(u, v, n_.size()); }
    bool leq(const Key& a, const Key& b) const { return a.subset_of(b); }

private:
    Nfa n_;
};

}  // namespace quasi
