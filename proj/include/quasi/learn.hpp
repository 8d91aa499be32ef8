#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "automata.hpp"
#include "fixpoint.hpp"

namespace quasi {

// Minimally adequate teacher. Equivalence answers with a counterexample or nothing.
struct Teacher {
    std::function<bool(const Word&)> member;
    std::function<std::optional<Word>(const Nfa&)> equivalent;
};

inline Teacher nfa_teacher(const Nfa& target) {
    auto t = std::make_shared<Nfa>(target);
    return {[t](const Word& w) { return t->member(w); },
            [t](const Nfa& h) { return equivalence_counterexample(h, *t); }};
}

// Observation table over prefixes P and suffixes S; cells are membership answers.
class ObservationTable {
public:
    ObservationTable(std::function<bool(const Word&)> member, std::vector<Symbol> sigma)
        : member_(std::move(member)), sigma_(std::move(sigma)) {}

    const std::vector<Symbol>& sigma() const { return sigma_; }

    bool cell(const Word& u, const Word& x) const {
        Word w = u + x;
        auto it = cache_.find(w);
        if (it != cache_.end()) return it->second;
        ++queries_;
        bool r = member_(w);
        cache_.emplace(std::move(w), r);
        return r;
    }

    Bits row(const Word& u) const {
        Bits r(S.size());
        for (std::size_t i = 0; i < S.size(); ++i)
            if (cell(u, S[i])) r.set(i);
        return r;
    }

    // r is the join of the P-rows strictly below it.
    bool composite(const Bits& r) const {
        Bits join(S.size());
        for (auto& u : P) {
            Bits x = row(u);
            if (x.subset_of(r) && x != r) join |= x;
        }
        return join == r;
    }

    std::size_t membership_queries() const { return queries_; }

    std::vector<Word> P{Word{}}, S{Word{}};

private:
    std::function<bool(const Word&)> member_;
    std::vector<Symbol> sigma_;
    mutable std::map<Word, bool> cache_;
    mutable std::size_t queries_ = 0;
};

// Conjecture from the table: one state per distinct prime P-row.
inline Nfa table_hypothesis(const ObservationTable& t) {
    std::vector<Bits> rows;
    std::vector<Word> reps;
    for (auto& u : t.P) {
        Bits r = t.row(u);
        if (t.composite(r)) continue;
        bool dup = false;
        for (auto& x : rows) dup = dup || x == r;
        if (dup) continue;
        rows.push_back(r);
        reps.push_back(u);
    }
    const int n = static_cast<int>(rows.size());
    Nfa h(n);
    for (Symbol a : t.sigma()) h.add_symbol(a);
    Bits eps = t.row(Word{});
    for (int i = 0; i < n; ++i) {
        if (rows[i].subset_of(eps)) h.set_initial(i);
        if (rows[i].test(0)) h.set_final(i);
        for (Symbol a : t.sigma()) {
            Bits ra = t.row(reps[i] + static_cast<char>(a));
            for (int j = 0; j < n; ++j)
                if (rows[j].subset_of(ra)) h.add_transition(i, a, j);
        }
    }
    return h;
}

struct LearnResult {
    Nfa automaton;
    std::size_t rounds = 0;  // equivalence queries
    std::size_t iterations = 0;
    std::size_t membership_queries = 0;
    std::size_t prefixes = 0, suffixes = 0;
};

using TableObserver = std::function<void(const ObservationTable&)>;

inline LearnResult nl_learn(const Teacher& teacher, std::vector<Symbol> sigma, const TableObserver& observe = {},
                            std::size_t cap = kDefaultIterationCap) {
    ObservationTable t(teacher.member, std::move(sigma));
    LearnResult res;
    auto has = [](const std::vector<Word>& v, const Word& w) {
        for (auto& x : v)
            if (x == w) return true;
        return false;
    };
    auto close = [&]() {
        for (std::size_t i = 0; i < t.P.size(); ++i)
            for (Symbol a : t.sigma()) {
                Word ua = t.P[i] + static_cast<char>(a);
                Bits r = t.row(ua);
                bool present = false;
                for (auto& v : t.P) present = present || t.row(v) == r;
                if (!present && !t.composite(r)) {
                    t.P.push_back(ua);
                    return true;
                }
            }
        return false;
    };
    auto make_consistent = [&]() {
        for (std::size_t i = 0; i < t.P.size(); ++i)
            for (std::size_t j = 0; j < t.P.size(); ++j) {
                if (i == j || !t.row(t.P[i]).subset_of(t.row(t.P[j]))) continue;
                for (Symbol a : t.sigma())
                    for (std::size_t k = 0; k < t.S.size(); ++k) {
                        const Word& x = t.S[k];
                        if (t.cell(t.P[i] + static_cast<char>(a), x) && !t.cell(t.P[j] + static_cast<char>(a), x)) {
                            t.S.push_back(static_cast<char>(a) + x);
                            return true;
                        }
                    }
            }
        return false;
    };
    for (;;) {
        if (++res.iterations > cap) throw IterationCapExceeded(cap);
        if (observe) observe(t);
        if (close() || make_consistent()) continue;
        Nfa h = table_hypothesis(t);
        ++res.rounds;
        auto cex = teacher.equivalent(h);
        if (!cex) {
            res.automaton = std::move(h);
            break;
        }
        bool grew = false;
        for (std::size_t k = cex->size() + 1; k-- > 0;) {
            Word x = cex->substr(k);
            if (!has(t.S, x)) {
                t.S.push_back(x);
                grew = true;
            }
        }
        if (!grew) throw std::logic_error("counterexample adds no suffix");
    }
    res.membership_queries = t.membership_queries();
    res.prefixes = t.P.size();
    res.suffixes = t.S.size();
    return res;
}

inline LearnResult nl_learn(const Nfa& target, const TableObserver& observe = {}, std::size_t cap = kDefaultIterationCap) {
    return nl_learn(nfa_teacher(target), target.alphabet(), observe, cap);
}

}  // namespace quasi
