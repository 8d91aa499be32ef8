#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "automata.hpp"
#include "slp.hpp"

namespace quasi {

struct CountingInfo {
    bool N = false;  // contains a newline
    bool L = false;  // first line matches
    bool R = false;  // last line matches
    std::uint64_t M = 0;  // closed matching lines

    bool operator==(const CountingInfo&) const = default;

    // Matching lines of a word carrying this information.
    std::uint64_t total() const { return M + (N ? (L ? 1 : 0) + (R ? 1 : 0) : (L ? 1 : 0)); }
};

inline CountingInfo combine_counting(const CountingInfo& a, const CountingInfo& b, bool m) {
    CountingInfo r;
    r.N = a.N || b.N;
    r.L = !a.N ? (a.L || b.L || m) : a.L;
    r.R = !b.N ? (a.R || b.R || m) : b.R;
    r.M = a.M + b.M + ((a.N && b.N && (a.R || b.L || m)) ? 1 : 0);
    return r;
}

struct SearchStats {
    std::uint64_t inner_iterations = 0;  // executions of the innermost composition loop
    std::uint64_t rules = 0;             // t
    std::uint64_t effective_rules = 0;   // binary rules plus axiom fold steps
    int states = 0;                      // s, after preparation
    std::size_t max_edges = 0;           // largest relation stored for a symbol
};

// Search automaton: the pattern without edges leaving final states (this keeps
// Σ*·L·Σ* unchanged) and, for line search, without newline transitions.
inline Nfa prepare_search_nfa(const Nfa& n, bool drop_newline) {
    if (n.initial().intersects(n.final_states())) throw std::invalid_argument("pattern accepts the empty word");
    Nfa r(n.size());
    r.set_initial(n.initial());
    r.set_final(n.final_states());
    for (Symbol s : n.alphabet())
        if (!(drop_newline && s == '\n')) r.add_symbol(s);
    for (int p = 0; p < n.size(); ++p) {
        if (n.final_states().test(p)) continue;
        for (auto& e : n.out(p))
            if (!(drop_newline && e.sym == '\n')) r.add_transition(p, e.sym, e.to);
    }
    return r;
}

// Per-symbol relations of an SLP against a search automaton, computed bottom-up.
// (q1, q2) ∈ E_X iff some run reads X from q1 to q2 in the automaton extended
// with self-loops on every byte at initial and final states, excluding runs
// that only use those loops.
class SlpTables {
public:
    SlpTables(const Slp& p, const Nfa& n, bool counting) : p_(p), n_(n), s_(n.size()) {
        const std::size_t t = p.rules.size();
        const std::size_t total = Slp::kFirstRule + t + 1;
        edges_.resize(total);
        info_.resize(total);
        m_.assign(total, 0);
        for (int q = 0; q < s_; ++q) {
            if (n.initial().test(q)) init_.push_back(q);
            is_if_.push_back(n.initial().test(q) || n.final_states().test(q));
        }
        for (int q1 = 0; q1 < s_; ++q1)
            for (auto& e : n.out(q1)) edges_[e.sym].emplace_back(q1, e.to);
        for (int a = 0; a < 256; ++a) {
            auto& ci = info_[a];
            ci.N = a == '\n';
            if (!ci.N)
                for (auto [q1, q2] : edges_[a])
                    if (n.initial().test(q1) && n.final_states().test(q2)) ci.L = ci.R = true;
        }
        last_.assign(static_cast<std::size_t>(s_) * s_, 0);
        stamp_.assign(static_cast<std::size_t>(s_) * s_, 0);
        rows_.assign(s_, {});
        stats_.rules = t + 1;
        stats_.effective_rules = t + (p.axiom.size() - 1);
        stats_.states = s_;
        for (std::size_t i = 0; i < t; ++i) {
            std::uint32_t x = Slp::rule_id(i + 1);
            auto [a, b] = p.rules[i];
            bool m = compose(a, b, static_cast<std::uint32_t>(i + 1), edges_[x]);
            m_[x] = m;
            if (counting) info_[x] = combine_counting(info_[a], info_[b], m);
            stats_.max_edges = std::max(stats_.max_edges, edges_[x].size());
        }
        fold_axiom(counting);
    }

    const CountingInfo& info(std::uint32_t x) const { return info_[x]; }
    bool boundary_match(std::uint32_t x) const { return m_[x]; }
    const std::vector<std::pair<int, int>>& edges(std::uint32_t x) const { return edges_[x]; }
    // Boundary flag before axiom position i (i >= 1).
    bool axiom_boundary(std::size_t i) const { return axiom_m_[i]; }
    const CountingInfo& axiom_info() const { return axiom_info_; }
    bool match_exists() const { return match_; }
    const SearchStats& stats() const { return stats_; }

private:
    void load_rows(std::uint32_t b) {
        for (auto& r : rows_) r.clear();
        for (auto [q1, q2] : edges_[b]) rows_[q1].push_back(q2);
        for (int q = 0; q < s_; ++q)
            if (n_.final_states().test(q)) rows_[q].push_back(q);
    }

    // E_{ab} into out; returns the boundary-match flag.
    bool compose(std::uint32_t a, std::uint32_t b, std::uint32_t writer, std::vector<std::pair<int, int>>& out) {
        load_rows(b);
        bool m = false;
        auto visit = [&](int q1, int mid) {
            for (int q2 : rows_[mid]) {
                ++stats_.inner_iterations;
                auto& w = last_[static_cast<std::size_t>(q1) * s_ + q2];
                if (w != writer) {
                    w = writer;
                    out.emplace_back(q1, q2);
                }
                if (!m && n_.initial().test(q1) && !is_if_[mid] && n_.final_states().test(q2)) m = true;
            }
        };
        ++stamp_gen_;
        for (auto [q1, mid] : edges_[a]) {
            if (q1 == mid) stamp_[static_cast<std::size_t>(q1) * s_ + mid] = stamp_gen_;
            visit(q1, mid);
        }
        for (int q : init_)
            if (stamp_[static_cast<std::size_t>(q) * s_ + q] != stamp_gen_) visit(q, q);
        return m;
    }

    // Left-to-right fold of the axiom keeping only rows reachable from I.
    void fold_axiom(bool counting) {
        const auto& ax = p_.axiom;
        std::vector<char> row(s_, 0), next(s_, 0);
        for (auto [q1, q2] : edges_[ax[0]])
            if (n_.initial().test(q1)) row[q2] = 1;
        axiom_m_.assign(ax.size(), 0);
        axiom_info_ = info_[ax[0]];
        for (std::size_t i = 1; i < ax.size(); ++i) {
            load_rows(ax[i]);
            std::fill(next.begin(), next.end(), 0);
            bool m = false;
            for (int mid = 0; mid < s_; ++mid) {
                if (!row[mid] && !n_.initial().test(mid)) continue;
                for (int q2 : rows_[mid]) {
                    ++stats_.inner_iterations;
                    next[q2] = 1;
                    if (row[mid] && !is_if_[mid] && n_.final_states().test(q2)) m = true;
                }
            }
            row.swap(next);
            axiom_m_[i] = m;
            if (counting) axiom_info_ = combine_counting(axiom_info_, info_[ax[i]], m);
        }
        match_ = false;
        for (int q = 0; q < s_; ++q)
            if (row[q] && n_.final_states().test(q)) match_ = true;
    }

    const Slp& p_;
    const Nfa& n_;
    int s_;
    std::vector<int> init_;
    std::vector<char> is_if_;
    std::vector<std::vector<std::pair<int, int>>> edges_;
    std::vector<CountingInfo> info_;
    std::vector<char> m_, axiom_m_;
    std::vector<std::uint32_t> last_;  // last writer of each state pair
    std::vector<std::uint64_t> stamp_;
    std::uint64_t stamp_gen_ = 0;
    std::vector<std::vector<int>> rows_;
    CountingInfo axiom_info_;
    bool match_ = false;
    SearchStats stats_;
};

// Does the text of p contain a factor in L(n)?
inline bool slp_match_exists(const Slp& p, const Nfa& n, SearchStats* stats = nullptr) {
    p.validate();
    if (n.initial().intersects(n.final_states())) return true;
    Nfa a = prepare_search_nfa(n, false);
    SlpTables t(p, a, false);
    if (stats) *stats = t.stats();
    return t.match_exists();
}

// Number of newline-delimited lines of the text of p containing a factor in L(n).
inline std::uint64_t count_lines(const Slp& p, const Nfa& n, SearchStats* stats = nullptr) {
    p.validate();
    Nfa a = prepare_search_nfa(n, true);
    SlpTables t(p, a, true);
    if (stats) *stats = t.stats();
    return t.axiom_info().total();
}

struct MatchLine {
    std::uint64_t number;  // 1-based
    std::string text;      // without the newline

    bool operator==(const MatchLine&) const = default;
};

// Emits the matching lines in order, expanding only the parts of the grammar
// that overlap a matching line.
inline void report_lines(const Slp& p, const Nfa& n, const std::function<void(const MatchLine&)>& emit) {
    p.validate();
    Nfa a = prepare_search_nfa(n, true);
    SlpTables t(p, a, true);
    const std::size_t total = Slp::kFirstRule + p.rules.size() + 1;
    std::vector<std::uint64_t> nl(total, 0);
    for (std::size_t i = 0; i < p.rules.size(); ++i) {
        auto [x, y] = p.rules[i];
        nl[Slp::rule_id(i + 1)] = (Slp::is_terminal(x) ? x == '\n' : nl[x]) + (Slp::is_terminal(y) ? y == '\n' : nl[y]);
    }
    nl['\n'] = 1;
    auto N = [&](std::uint32_t x) { return nl[x] > 0; };

    // Bytes before the first newline / after the last newline of x.
    std::function<void(std::uint32_t, std::string&)> prefix = [&](std::uint32_t x, std::string& out) {
        if (Slp::is_terminal(x)) {
            if (x != '\n') out.push_back(static_cast<char>(x));
            return;
        }
        auto [l, r] = p.rule(x);
        if (N(l)) return prefix(l, out);
        expand_symbol(p, l, out);
        prefix(r, out);
    };
    std::function<void(std::uint32_t, std::string&)> suffix = [&](std::uint32_t x, std::string& out) {
        if (Slp::is_terminal(x)) {
            if (x != '\n') out.push_back(static_cast<char>(x));
            return;
        }
        auto [l, r] = p.rule(x);
        if (N(r)) return suffix(r, out);
        suffix(l, out);
        expand_symbol(p, r, out);
    };
    // Lines strictly between the first and last newline of x; base numbers the first of them.
    std::function<void(std::uint32_t, std::uint64_t)> closed = [&](std::uint32_t x, std::uint64_t base) {
        if (Slp::is_terminal(x) || t.info(x).M == 0) return;
        auto [l, r] = p.rule(x);
        if (N(l) && N(r)) {
            closed(l, base);
            if (t.info(l).R || t.info(r).L || t.boundary_match(x)) {
                std::string s;
                suffix(l, s);
                prefix(r, s);
                emit({base + nl[l] - 1, std::move(s)});
            }
            closed(r, base + nl[l]);
        } else if (N(l)) {
            closed(l, base);
        } else {
            closed(r, base);
        }
    };

    enum class Piece { Whole, Prefix, Suffix };
    std::vector<std::pair<std::uint32_t, Piece>> open;
    bool open_match = false;
    std::uint64_t line = 1;
    auto flush = [&] {
        if (open_match) {
            std::string s;
            for (auto [x, k] : open) {
                if (k == Piece::Whole) expand_symbol(p, x, s);
                else if (k == Piece::Prefix) prefix(x, s);
                else suffix(x, s);
            }
            emit({line, std::move(s)});
        }
    };
    for (std::size_t i = 0; i < p.axiom.size(); ++i) {
        std::uint32_t x = p.axiom[i];
        const CountingInfo& ci = t.info(x);
        if (i > 0 && t.axiom_boundary(i)) open_match = true;
        if (!N(x)) {
            open_match = open_match || ci.L;
            open.emplace_back(x, Piece::Whole);
            continue;
        }
        open_match = open_match || ci.L;
        open.emplace_back(x, Piece::Prefix);
        flush();
        closed(x, line + 1);
        line += nl[x];
        open.assign(1, {x, Piece::Suffix});
        open_match = ci.R;
    }
    flush();
}

inline std::vector<MatchLine> report_lines(const Slp& p, const Nfa& n) {
    std::vector<MatchLine> out;
    report_lines(p, n, [&](const MatchLine& m) { out.push_back(m); });
    return out;
}

}  // namespace quasi
