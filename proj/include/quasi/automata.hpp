#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bits.hpp"

namespace quasi {

using Symbol = std::uint8_t;
using Word = std::string;

enum class Dir { Forward, Backward };

struct Verdict {
    bool included = true;
    std::optional<Word> witness;
};

struct Edge {
    Symbol sym;
    int to;
    bool operator<(const Edge& o) const { return sym != o.sym ? sym < o.sym : to < o.to; }
    bool operator==(const Edge& o) const { return sym == o.sym && to == o.to; }
};

inline std::vector<Symbol> merge_alphabets(const std::vector<Symbol>& a, const std::vector<Symbol>& b) {
    std::vector<Symbol> r;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
    return r;
}

class Nfa {
public:
    Nfa() = default;
    explicit Nfa(int n) : n_(n), out_(n), in_(n), init_(n), fin_(n) {}

    int size() const { return n_; }
    const std::vector<Symbol>& alphabet() const { return sigma_; }
    const Bits& initial() const { return init_; }
    const Bits& final_states() const { return fin_; }
    const std::vector<Edge>& out(int p) const { return out_[p]; }
    // Edges into q; Edge::to holds the source state.
    const std::vector<Edge>& in(int q) const { return in_[q]; }

    int add_state() {
        ++n_;
        out_.emplace_back();
        in_.emplace_back();
        init_ = resize(init_, n_);
        fin_ = resize(fin_, n_);
        return n_ - 1;
    }

    void add_symbol(Symbol a) {
        auto it = std::lower_bound(sigma_.begin(), sigma_.end(), a);
        if (it == sigma_.end() || *it != a) sigma_.insert(it, a);
    }

    void add_transition(int p, Symbol a, int q) {
        check(p);
        check(q);
        add_symbol(a);
        insert_sorted(out_[p], Edge{a, q});
        insert_sorted(in_[q], Edge{a, p});
    }

    void set_initial(int q, bool v = true) {
        check(q);
        v ? init_.set(q) : init_.reset(q);
    }
    void set_final(int q, bool v = true) {
        check(q);
        v ? fin_.set(q) : fin_.reset(q);
    }
    void set_initial(const Bits& b) { init_ = b; }
    void set_final(const Bits& b) { fin_ = b; }

    bool has_transition(int p, Symbol a, int q) const {
        return std::binary_search(out_[p].begin(), out_[p].end(), Edge{a, q});
    }

    std::size_t transition_count() const {
        std::size_t c = 0;
        for (auto& v : out_) c += v.size();
        return c;
    }

    Bits post(const Bits& s, Symbol a) const {
        Bits r(n_);
        s.for_each([&](std::size_t p) {
            auto& v = out_[p];
            auto it = std::lower_bound(v.begin(), v.end(), Edge{a, -1});
            for (; it != v.end() && it->sym == a; ++it) r.set(it->to);
        });
        return r;
    }

    Bits pre(const Bits& s, Symbol a) const {
        Bits r(n_);
        s.for_each([&](std::size_t q) {
            auto& v = in_[q];
            auto it = std::lower_bound(v.begin(), v.end(), Edge{a, -1});
            for (; it != v.end() && it->sym == a; ++it) r.set(it->to);
        });
        return r;
    }

    Bits step(const Bits& s, Symbol a, Dir d) const { return d == Dir::Forward ? post(s, a) : pre(s, a); }

    // Forward: post_w(I). Backward: pre_w(F), reading w right to left.
    Bits run(const Word& w, Dir d) const {
        if (d == Dir::Forward) {
            Bits s = init_;
            for (unsigned char c : w) s = post(s, c);
            return s;
        }
        Bits s = fin_;
        for (auto it = w.rbegin(); it != w.rend(); ++it) s = pre(s, static_cast<Symbol>(*it));
        return s;
    }

    bool member(const Word& w) const { return run(w, Dir::Forward).intersects(fin_); }

    bool is_deterministic() const {
        if (init_.count() != 1) return false;
        for (auto& v : out_)
            for (std::size_t i = 1; i < v.size(); ++i)
                if (v[i].sym == v[i - 1].sym) return false;
        return true;
    }

    bool operator==(const Nfa& o) const {
        return n_ == o.n_ && sigma_ == o.sigma_ && out_ == o.out_ && init_ == o.init_ && fin_ == o.fin_;
    }

private:
    static Bits resize(const Bits& b, int n) {
        Bits r(n);
        b.for_each([&](std::size_t i) { r.set(i); });
        return r;
    }
    static void insert_sorted(std::vector<Edge>& v, Edge e) {
        auto it = std::lower_bound(v.begin(), v.end(), e);
        if (it == v.end() || !(*it == e)) v.insert(it, e);
    }
    void check(int q) const {
        if (q < 0 || q >= n_) throw std::out_of_range("state index out of range");
    }

    int n_ = 0;
    std::vector<Symbol> sigma_;
    std::vector<std::vector<Edge>> out_, in_;
    Bits init_, fin_;
};

// Copy of n with a different set of initial (or final) states.
inline Nfa with_initial(const Nfa& n, const Bits& init) {
    Nfa r = n;
    r.set_initial(init);
    return r;
}
inline Nfa with_final(const Nfa& n, const Bits& fin) {
    Nfa r = n;
    r.set_final(fin);
    return r;
}

inline Nfa reverse(const Nfa& a) {
    Nfa r(a.size());
    for (Symbol s : a.alphabet()) r.add_symbol(s);
    for (int p = 0; p < a.size(); ++p)
        for (auto& e : a.out(p)) r.add_transition(e.to, e.sym, p);
    r.set_initial(a.final_states());
    r.set_final(a.initial());
    return r;
}

// Dense DFA; delta is -1 where undefined.
struct Dfa {
    int n = 0;
    int init = 0;
    std::vector<Symbol> sigma;
    std::array<int, 256> idx{};
    std::vector<int> delta;
    std::vector<char> fin;
    std::vector<Bits> subsets;  // originating NFA subset per state when built by determinize

    int k() const { return static_cast<int>(sigma.size()); }

    void reset_alphabet(const std::vector<Symbol>& s) {
        sigma = s;
        idx.fill(-1);
        for (std::size_t i = 0; i < s.size(); ++i) idx[s[i]] = static_cast<int>(i);
    }

    int next(int p, Symbol a) const {
        int j = idx[a];
        return j < 0 ? -1 : delta[static_cast<std::size_t>(p) * sigma.size() + j];
    }

    int run(const Word& w, int from) const {
        int p = from;
        for (unsigned char c : w) {
            if (p < 0) return -1;
            p = next(p, c);
        }
        return p;
    }

    bool member(const Word& w) const {
        int p = run(w, init);
        return p >= 0 && fin[p];
    }

    bool is_complete() const {
        return std::all_of(delta.begin(), delta.end(), [](int x) { return x >= 0; });
    }
};

inline Nfa to_nfa(const Dfa& d) {
    Nfa r(d.n);
    for (Symbol s : d.sigma) r.add_symbol(s);
    for (int p = 0; p < d.n; ++p) {
        for (int j = 0; j < d.k(); ++j) {
            int q = d.delta[static_cast<std::size_t>(p) * d.k() + j];
            if (q >= 0) r.add_transition(p, d.sigma[j], q);
        }
        if (d.fin[p]) r.set_final(p);
    }
    if (d.n > 0) r.set_initial(d.init);
    return r;
}

// Reachable subset construction over sigma (defaults to the NFA alphabet).
// State 0 is the initial subset; the empty subset appears as a state when reachable.
inline Dfa determinize(const Nfa& a, std::optional<std::vector<Symbol>> sigma = std::nullopt) {
    Dfa d;
    d.reset_alphabet(sigma ? *sigma : a.alphabet());
    std::unordered_map<Bits, int, BitsHash> index;
    std::deque<int> queue;
    auto intern = [&](const Bits& s) {
        auto it = index.find(s);
        if (it != index.end()) return it->second;
        int id = static_cast<int>(d.subsets.size());
        index.emplace(s, id);
        d.subsets.push_back(s);
        d.fin.push_back(s.intersects(a.final_states()) ? 1 : 0);
        d.delta.resize(d.delta.size() + d.sigma.size(), -1);
        queue.push_back(id);
        return id;
    };
    intern(a.initial());
    while (!queue.empty()) {
        int p = queue.front();
        queue.pop_front();
        for (int j = 0; j < d.k(); ++j) {
            Bits t = a.post(d.subsets[p], d.sigma[j]);
            int q = intern(t);
            d.delta[static_cast<std::size_t>(p) * d.k() + j] = q;
        }
    }
    d.n = static_cast<int>(d.subsets.size());
    d.init = 0;
    return d;
}

// Adds an explicit sink if some transition is missing.
inline Dfa complete(const Dfa& in) {
    if (in.is_complete() && in.n > 0) return in;
    Dfa d = in;
    int sink = d.n++;
    d.fin.push_back(0);
    d.delta.resize(static_cast<std::size_t>(d.n) * d.k(), -1);
    if (!d.subsets.empty()) d.subsets.emplace_back();
    for (auto& x : d.delta)
        if (x < 0) x = sink;
    if (in.n == 0) d.init = sink;
    return d;
}

// Minimal complete DFA; states numbered in BFS order from the initial state.
inline Dfa minimize(const Dfa& in) {
    Dfa d = complete(in);
    const int k = d.k();
    // reachable part
    std::vector<int> reach(d.n, -1), order;
    reach[d.init] = 0;
    order.push_back(d.init);
    for (std::size_t i = 0; i < order.size(); ++i)
        for (int j = 0; j < k; ++j) {
            int q = d.delta[static_cast<std::size_t>(order[i]) * k + j];
            if (reach[q] < 0) {
                reach[q] = static_cast<int>(order.size());
                order.push_back(q);
            }
        }
    const int m = static_cast<int>(order.size());
    // Moore refinement
    std::vector<int> cls(m), next_cls(m);
    for (int i = 0; i < m; ++i) cls[i] = d.fin[order[i]] ? 1 : 0;
    int classes = 0;
    for (;;) {
        std::map<std::vector<int>, int> sig_ids;
        for (int i = 0; i < m; ++i) {
            std::vector<int> sig;
            sig.reserve(k + 1);
            sig.push_back(cls[i]);
            for (int j = 0; j < k; ++j) sig.push_back(cls[reach[d.delta[static_cast<std::size_t>(order[i]) * k + j]]]);
            auto [it, fresh] = sig_ids.emplace(std::move(sig), static_cast<int>(sig_ids.size()));
            next_cls[i] = it->second;
        }
        int nc = static_cast<int>(sig_ids.size());
        cls.swap(next_cls);
        if (nc == classes) break;
        classes = nc;
    }
    // renumber classes in BFS order
    std::vector<int> rep(classes, -1), num(classes, -1);
    for (int i = 0; i < m; ++i)
        if (rep[cls[i]] < 0) rep[cls[i]] = i;
    Dfa r;
    r.reset_alphabet(d.sigma);
    std::vector<int> q{cls[0]};
    num[cls[0]] = 0;
    for (std::size_t i = 0; i < q.size(); ++i)
        for (int j = 0; j < k; ++j) {
            int c = cls[reach[d.delta[static_cast<std::size_t>(order[rep[q[i]]]) * k + j]]];
            if (num[c] < 0) {
                num[c] = static_cast<int>(q.size());
                q.push_back(c);
            }
        }
    r.n = static_cast<int>(q.size());
    r.init = 0;
    r.delta.assign(static_cast<std::size_t>(r.n) * k, -1);
    r.fin.assign(r.n, 0);
    for (int s = 0; s < r.n; ++s) {
        int i = rep[q[s]];
        r.fin[s] = d.fin[order[i]];
        for (int j = 0; j < k; ++j)
            r.delta[static_cast<std::size_t>(s) * k + j] = num[cls[reach[d.delta[static_cast<std::size_t>(order[i]) * k + j]]]];
    }
    return r;
}

inline Dfa minimal_dfa(const Nfa& a, std::optional<std::vector<Symbol>> sigma = std::nullopt) {
    return minimize(determinize(a, std::move(sigma)));
}

// Residual inclusion between states of a complete DFA: incl[p*n+q] iff L(p) ⊆ L(q).
inline std::vector<char> residual_inclusion(const Dfa& d) {
    const int n = d.n, k = d.k();
    std::vector<char> rel(static_cast<std::size_t>(n) * n, 1);
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
            if (d.fin[p] && !d.fin[q]) rel[static_cast<std::size_t>(p) * n + q] = 0;
    bool changed = true;
    while (changed) {
        changed = false;
        for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q) {
                auto& r = rel[static_cast<std::size_t>(p) * n + q];
                if (!r) continue;
                for (int j = 0; j < k; ++j) {
                    int p2 = d.delta[static_cast<std::size_t>(p) * k + j];
                    int q2 = d.delta[static_cast<std::size_t>(q) * k + j];
                    if (!rel[static_cast<std::size_t>(p2) * n + q2]) {
                        r = 0;
                        changed = true;
                        break;
                    }
                }
            }
    }
    return rel;
}

namespace detail {

// Shortest word over sigma leading from (A, B) to a pair of subsets satisfying pred,
// where A evolves in a and B in b. Words are found in shortlex order.
template <class Pred>
std::optional<Word> subset_pair_search(const Nfa& a, const Bits& A, const Nfa& b, const Bits& B,
                                       const std::vector<Symbol>& sigma, Pred pred) {
    struct Node {
        Bits x, y;
        int parent;
        Symbol sym;
    };
    struct KeyHash {
        std::size_t operator()(const std::pair<Bits, Bits>& k) const { return k.first.hash() * 31 + k.second.hash(); }
    };
    std::vector<Node> nodes;
    std::unordered_map<std::pair<Bits, Bits>, int, KeyHash> seen;
    nodes.push_back({A, B, -1, 0});
    seen.emplace(std::make_pair(A, B), 0);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        bool fa = nodes[i].x.intersects(a.final_states());
        bool fb = nodes[i].y.intersects(b.final_states());
        if (pred(fa, fb)) {
            Word w;
            for (int j = static_cast<int>(i); nodes[j].parent >= 0; j = nodes[j].parent) w.push_back(static_cast<char>(nodes[j].sym));
            std::reverse(w.begin(), w.end());
            return w;
        }
        for (Symbol s : sigma) {
            Bits x = a.post(nodes[i].x, s);
            Bits y = b.post(nodes[i].y, s);
            auto key = std::make_pair(x, y);
            if (seen.count(key)) continue;
            seen.emplace(key, static_cast<int>(nodes.size()));
            nodes.push_back({std::move(x), std::move(y), static_cast<int>(i), s});
        }
    }
    return std::nullopt;
}

}  // namespace detail

// Decides L(a) ⊆ L(b) by product of a with the complement of determinize(b).
inline Verdict naive_inclusion(const Nfa& a, const Nfa& b) {
    auto sigma = merge_alphabets(a.alphabet(), b.alphabet());
    Dfa d = complete(determinize(b, sigma));
    const int k = d.k();
    struct Node {
        int q, p, parent;
        Symbol sym;
    };
    std::vector<Node> nodes;
    std::vector<char> seen(static_cast<std::size_t>(a.size()) * d.n, 0);
    a.initial().for_each([&](std::size_t q) {
        seen[q * d.n + d.init] = 1;
        nodes.push_back({static_cast<int>(q), d.init, -1, 0});
    });
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        auto [q, p, parent, sym] = nodes[i];
        if (a.final_states().test(q) && !d.fin[p]) {
            Word w;
            for (int j = static_cast<int>(i); nodes[j].parent >= 0; j = nodes[j].parent) w.push_back(static_cast<char>(nodes[j].sym));
            std::reverse(w.begin(), w.end());
            return {false, w};
        }
        for (auto& e : a.out(q)) {
            int p2 = d.delta[static_cast<std::size_t>(p) * k + d.idx[e.sym]];
            auto& s = seen[static_cast<std::size_t>(e.to) * d.n + p2];
            if (s) continue;
            s = 1;
            nodes.push_back({e.to, p2, static_cast<int>(i), e.sym});
        }
    }
    return {true, std::nullopt};
}

// Shortest word in the symmetric difference of L(a) and L(b), if any.
inline std::optional<Word> equivalence_counterexample(const Nfa& a, const Nfa& b) {
    auto sigma = merge_alphabets(a.alphabet(), b.alphabet());
    return detail::subset_pair_search(a, a.initial(), b, b.initial(), sigma, [](bool x, bool y) { return x != y; });
}

inline bool language_equal(const Nfa& a, const Nfa& b) { return !equivalence_counterexample(a, b); }

inline bool language_included(const Nfa& a, const Nfa& b) { return naive_inclusion(a, b).included; }

// W_{A,F} = W_{B,F} within one automaton.
inline bool sets_language_equal(const Nfa& n, const Bits& A, const Bits& B) {
    return !detail::subset_pair_search(n, A, n, B, n.alphabet(), [](bool x, bool y) { return x != y; });
}

// W_{A,F} ⊆ W_{B,F} within one automaton.
inline bool sets_language_included(const Nfa& n, const Bits& A, const Bits& B) {
    return !detail::subset_pair_search(n, A, n, B, n.alphabet(), [](bool x, bool y) { return x && !y; });
}

// Right language of state p in d, as an NFA.
inline Nfa dfa_state_language(const Dfa& d, int p) {
    Nfa r = to_nfa(d);
    Bits i(d.n);
    i.set(p);
    r.set_initial(i);
    return r;
}

}  // namespace quasi
