#pragma once

#include <array>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "automata.hpp"
#include "io.hpp"

namespace quasi {

inline constexpr Symbol kNewline = '\n';

struct RegexError : ParseError {
    using ParseError::ParseError;
};

struct Regex {
    enum class Kind { Literal, Class, Any, Concat, Alt, Star, Plus, Opt, Repeat, Group };
    Kind kind = Kind::Literal;
    Symbol lit = 0;
    std::array<bool, 256> cls{};  // Class only
    int lo = 0, hi = 0;           // Repeat only
    std::vector<Regex> kids;
    std::size_t offset = 0;

    // Number of leaves (literals, classes and dots).
    std::size_t leaves() const {
        if (kids.empty()) return 1;
        std::size_t n = 0;
        for (auto& k : kids) n += k.leaves();
        return n;
    }
};

namespace detail {

class RegexParser {
public:
    explicit RegexParser(std::string_view s) : s_(s) {}

    Regex parse() {
        if (s_.empty()) throw RegexError(0, "empty pattern");
        Regex r = alt();
        if (i_ < s_.size()) throw RegexError(i_, s_[i_] == ')' ? "unbalanced ')'" : "unexpected character");
        return r;
    }

private:
    static constexpr int kMaxRepeat = 1000;

    bool at_end() const { return i_ >= s_.size(); }
    char peek() const { return s_[i_]; }

    Regex alt() {
        std::size_t start = i_;
        std::vector<Regex> branches;
        branches.push_back(concat());
        while (!at_end() && peek() == '|') {
            ++i_;
            branches.push_back(concat());
        }
        if (branches.size() == 1) return std::move(branches[0]);
        Regex r;
        r.kind = Regex::Kind::Alt;
        r.kids = std::move(branches);
        r.offset = start;
        return r;
    }

    Regex concat() {
        std::size_t start = i_;
        std::vector<Regex> items;
        while (!at_end() && peek() != '|' && peek() != ')') items.push_back(postfix());
        if (items.empty()) throw RegexError(start, "empty alternation branch");
        if (items.size() == 1) return std::move(items[0]);
        Regex r;
        r.kind = Regex::Kind::Concat;
        r.kids = std::move(items);
        r.offset = start;
        return r;
    }

    Regex postfix() {
        Regex a = atom();
        while (!at_end()) {
            char c = peek();
            Regex w;
            w.offset = i_;
            if (c == '*') {
                w.kind = Regex::Kind::Star;
            } else if (c == '+') {
                w.kind = Regex::Kind::Plus;
            } else if (c == '?') {
                w.kind = Regex::Kind::Opt;
            } else if (c == '{') {
                w.kind = Regex::Kind::Repeat;
                ++i_;
                w.lo = number();
                w.hi = w.lo;
                if (!at_end() && peek() == ',') {
                    ++i_;
                    w.hi = number();
                }
                if (at_end() || peek() != '}') throw RegexError(i_, "expected '}'");
                if (w.lo > w.hi) throw RegexError(w.offset, "repetition with m > n");
            } else {
                break;
            }
            ++i_;
            w.kids.push_back(std::move(a));
            a = std::move(w);
        }
        return a;
    }

    int number() {
        std::size_t start = i_;
        long v = 0;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
            v = v * 10 + (peek() - '0');
            if (v > kMaxRepeat) throw RegexError(start, "repetition bound too large");
            ++i_;
        }
        if (i_ == start) throw RegexError(start, "expected number");
        return static_cast<int>(v);
    }

    Regex atom() {
        Regex r;
        r.offset = i_;
        char c = peek();
        switch (c) {
            case '(': {
                ++i_;
                if (at_end()) throw RegexError(r.offset, "unbalanced '('");
                if (peek() == ')') throw RegexError(i_, "empty group");
                Regex inner = alt();
                if (at_end() || peek() != ')') throw RegexError(r.offset, "unbalanced '('");
                ++i_;
                r.kind = Regex::Kind::Group;
                r.kids.push_back(std::move(inner));
                return r;
            }
            case '[':
                return klass();
            case '.':
                ++i_;
                r.kind = Regex::Kind::Any;
                return r;
            case '\\':
                return escape(false);
            case '*':
            case '+':
            case '?':
            case '{':
                throw RegexError(i_, "nothing to repeat");
            default:
                ++i_;
                r.kind = Regex::Kind::Literal;
                r.lit = static_cast<Symbol>(c);
                return r;
        }
    }

    static Regex make_class(std::initializer_list<std::pair<int, int>> ranges, bool negate, std::size_t off) {
        Regex r;
        r.kind = Regex::Kind::Class;
        r.offset = off;
        for (auto [a, b] : ranges)
            for (int x = a; x <= b; ++x) r.cls[x] = true;
        if (negate)
            for (auto& x : r.cls) x = !x;
        r.cls[kNewline] = false;
        return r;
    }

    // Escape at s_[i_] == '\\'. Returns a literal or a class.
    Regex escape(bool in_class) {
        std::size_t start = i_++;
        if (at_end()) throw RegexError(start, "dangling escape");
        char c = s_[i_++];
        Regex r;
        r.offset = start;
        r.kind = Regex::Kind::Literal;
        switch (c) {
            case 'n': r.lit = '\n'; return r;
            case 't': r.lit = '\t'; return r;
            case 'r': r.lit = '\r'; return r;
            case 'd': return make_class({{'0', '9'}}, false, start);
            case 'D': return make_class({{'0', '9'}}, true, start);
            case 'w': return make_class({{'a', 'z'}, {'A', 'Z'}, {'0', '9'}, {'_', '_'}}, false, start);
            case 'W': return make_class({{'a', 'z'}, {'A', 'Z'}, {'0', '9'}, {'_', '_'}}, true, start);
            case 's': return make_class({{' ', ' '}, {'\t', '\t'}, {'\r', '\r'}, {'\v', '\v'}, {'\f', '\f'}}, false, start);
            case 'S': return make_class({{' ', ' '}, {'\t', '\t'}, {'\r', '\r'}, {'\v', '\v'}, {'\f', '\f'}}, true, start);
            case 'x': {
                if (i_ + 2 > s_.size()) throw RegexError(start, "bad hex escape");
                unsigned v = 0;
                auto [p, ec] = std::from_chars(s_.data() + i_, s_.data() + i_ + 2, v, 16);
                if (ec != std::errc{} || p != s_.data() + i_ + 2) throw RegexError(start, "bad hex escape");
                i_ += 2;
                r.lit = static_cast<Symbol>(v);
                return r;
            }
            default:
                if (std::isalnum(static_cast<unsigned char>(c)) && !in_class) throw RegexError(start, "unknown escape");
                r.lit = static_cast<Symbol>(c);
                return r;
        }
    }

    Regex klass() {
        std::size_t start = i_++;
        Regex r;
        r.kind = Regex::Kind::Class;
        r.offset = start;
        bool negate = false;
        if (!at_end() && peek() == '^') {
            negate = true;
            ++i_;
        }
        bool first = true;
        for (;;) {
            if (at_end()) throw RegexError(start, "unterminated class");
            if (peek() == ']' && !first) break;
            first = false;
            int lo;
            if (peek() == '\\') {
                Regex e = escape(true);
                if (e.kind == Regex::Kind::Class) {
                    for (int x = 0; x < 256; ++x) r.cls[x] = r.cls[x] || e.cls[x];
                    continue;
                }
                lo = e.lit;
            } else {
                lo = static_cast<unsigned char>(s_[i_++]);
            }
            int hi = lo;
            if (i_ + 1 < s_.size() && peek() == '-' && s_[i_ + 1] != ']') {
                ++i_;
                if (peek() == '\\') {
                    Regex e = escape(true);
                    if (e.kind != Regex::Kind::Literal) throw RegexError(start, "bad class range");
                    hi = e.lit;
                } else {
                    hi = static_cast<unsigned char>(s_[i_++]);
                }
                if (hi < lo) throw RegexError(start, "bad class range");
            }
            for (int x = lo; x <= hi; ++x) r.cls[x] = true;
        }
        ++i_;
        if (negate)
            for (auto& x : r.cls) x = !x;
        r.cls[kNewline] = false;
        bool any = false;
        for (bool x : r.cls) any = any || x;
        if (!any) throw RegexError(start, "empty class");
        return r;
    }

    std::string_view s_;
    std::size_t i_ = 0;
};

}  // namespace detail

inline Regex parse_regex(std::string_view text) { return detail::RegexParser(text).parse(); }

inline bool nullable(const Regex& r) {
    using K = Regex::Kind;
    switch (r.kind) {
        case K::Literal:
        case K::Class:
        case K::Any:
            return false;
        case K::Concat:
            for (auto& k : r.kids)
                if (!nullable(k)) return false;
            return true;
        case K::Alt:
            for (auto& k : r.kids)
                if (nullable(k)) return true;
            return false;
        case K::Star:
        case K::Opt:
            return true;
        case K::Repeat:
            return r.lo == 0 || nullable(r.kids[0]);
        case K::Plus:
        case K::Group:
        default:
            return nullable(r.kids[0]);
    }
}

namespace detail {

// Thompson automaton with ε-moves.
struct EpsNfa {
    struct Move {
        int sym;  // -1 for ε
        int to;
    };
    std::vector<std::vector<Move>> out;
    int add() {
        out.emplace_back();
        return static_cast<int>(out.size()) - 1;
    }
    void eps(int p, int q) { out[p].push_back({-1, q}); }
    void sym(int p, int a, int q) { out[p].push_back({a, q}); }
};

struct Frag {
    int in, out;
};

inline Frag thompson(EpsNfa& g, const Regex& r) {
    using K = Regex::Kind;
    switch (r.kind) {
        case K::Literal: {
            int a = g.add(), b = g.add();
            g.sym(a, r.lit, b);
            return {a, b};
        }
        case K::Class:
        case K::Any: {
            int a = g.add(), b = g.add();
            for (int x = 0; x < 256; ++x)
                if (r.kind == K::Any ? x != kNewline : r.cls[x]) g.sym(a, x, b);
            return {a, b};
        }
        case K::Group:
            return thompson(g, r.kids[0]);
        case K::Concat: {
            Frag f = thompson(g, r.kids[0]);
            for (std::size_t i = 1; i < r.kids.size(); ++i) {
                Frag h = thompson(g, r.kids[i]);
                g.eps(f.out, h.in);
                f.out = h.out;
            }
            return f;
        }
        case K::Alt: {
            int a = g.add(), b = g.add();
            for (auto& k : r.kids) {
                Frag h = thompson(g, k);
                g.eps(a, h.in);
                g.eps(h.out, b);
            }
            return {a, b};
        }
        case K::Star:
        case K::Plus:
        case K::Opt: {
            int a = g.add(), b = g.add();
            Frag h = thompson(g, r.kids[0]);
            g.eps(a, h.in);
            g.eps(h.out, b);
            if (r.kind != K::Plus) g.eps(a, b);
            if (r.kind != K::Opt) g.eps(h.out, h.in);
            return {a, b};
        }
        case K::Repeat:
        default: {
            int a = g.add();
            Frag f{a, a};
            for (int i = 0; i < r.lo; ++i) {
                Frag h = thompson(g, r.kids[0]);
                g.eps(f.out, h.in);
                f.out = h.out;
            }
            int end = g.add();
            for (int i = r.lo; i < r.hi; ++i) {
                g.eps(f.out, end);
                Frag h = thompson(g, r.kids[0]);
                g.eps(f.out, h.in);
                f.out = h.out;
            }
            g.eps(f.out, end);
            return {a, end};
        }
    }
}

// Drops states that are unreachable or cannot reach a final state, keeping state 0.
inline Nfa trim(const Nfa& a) {
    const int n = a.size();
    std::vector<char> fwd(n, 0), bwd(n, 0);
    std::vector<int> stack;
    a.initial().for_each([&](std::size_t q) {
        fwd[q] = 1;
        stack.push_back(static_cast<int>(q));
    });
    while (!stack.empty()) {
        int p = stack.back();
        stack.pop_back();
        for (auto& e : a.out(p))
            if (!fwd[e.to]) fwd[e.to] = 1, stack.push_back(e.to);
    }
    a.final_states().for_each([&](std::size_t q) {
        bwd[q] = 1;
        stack.push_back(static_cast<int>(q));
    });
    while (!stack.empty()) {
        int p = stack.back();
        stack.pop_back();
        for (auto& e : a.in(p))
            if (!bwd[e.to]) bwd[e.to] = 1, stack.push_back(e.to);
    }
    std::vector<int> id(n, -1);
    int m = 0;
    for (int q = 0; q < n; ++q)
        if ((fwd[q] && bwd[q]) || q == 0) id[q] = m++;
    Nfa r(m);
    for (Symbol s : a.alphabet()) r.add_symbol(s);
    for (int p = 0; p < n; ++p) {
        if (id[p] < 0) continue;
        if (a.initial().test(p)) r.set_initial(id[p]);
        if (a.final_states().test(p)) r.set_final(id[p]);
        for (auto& e : a.out(p))
            if (id[e.to] >= 0) r.add_transition(id[p], e.sym, id[e.to]);
    }
    return r;
}

}  // namespace detail

// Thompson construction followed by ε-removal. The kept states are the start
// state and the targets of symbol moves. Patterns matching ε are rejected
// unless allow_empty is set.
inline Nfa compile_regex(const Regex& ast, bool allow_empty = false) {
    if (!allow_empty && nullable(ast)) throw RegexError(ast.offset, "pattern matches the empty string");
    detail::EpsNfa g;
    detail::Frag f = detail::thompson(g, ast);
    const int n = static_cast<int>(g.out.size());

    std::vector<int> id(n, -1);
    std::vector<int> kept{f.in};
    id[f.in] = 0;
    for (int p = 0; p < n; ++p)
        for (auto& m : g.out[p])
            if (m.sym >= 0 && id[m.to] < 0) {
                id[m.to] = static_cast<int>(kept.size());
                kept.push_back(m.to);
            }
    Nfa r(static_cast<int>(kept.size()));
    r.set_initial(0);
    std::vector<int> mark(n, -1), stack;
    for (int i = 0; i < static_cast<int>(kept.size()); ++i) {
        stack.assign(1, kept[i]);
        mark[kept[i]] = i;
        while (!stack.empty()) {
            int p = stack.back();
            stack.pop_back();
            if (p == f.out) r.set_final(i);
            for (auto& m : g.out[p]) {
                if (m.sym >= 0) {
                    r.add_transition(i, static_cast<Symbol>(m.sym), id[m.to]);
                } else if (mark[m.to] != i) {
                    mark[m.to] = i;
                    stack.push_back(m.to);
                }
            }
        }
    }
    return detail::trim(r);
}

inline Nfa compile_regex(std::string_view pattern, bool allow_empty = false) {
    return compile_regex(parse_regex(pattern), allow_empty);
}

// ---- homogeneous expressions ----------------------------------------------

enum class Homogeneous { None, Plus, Star, Alt };

namespace detail {

inline const Regex& strip(const Regex& r) {
    const Regex* p = &r;
    while (p->kind == Regex::Kind::Group) p = &p->kids[0];
    return *p;
}

inline std::vector<const Regex*> items_of(const Regex& r) {
    const Regex& s = strip(r);
    std::vector<const Regex*> v;
    if (s.kind == Regex::Kind::Concat)
        for (auto& k : s.kids) v.push_back(&strip(k));
    else
        v.push_back(&s);
    return v;
}

inline bool is_lit(const Regex& r) { return strip(r).kind == Regex::Kind::Literal; }

// Letters of an alternation of literals, or empty if r is something else.
inline std::vector<Symbol> alt_letters(const Regex& r) {
    const Regex& s = strip(r);
    std::vector<Symbol> out;
    if (s.kind == Regex::Kind::Literal) return {s.lit};
    if (s.kind != Regex::Kind::Alt) return {};
    for (auto& k : s.kids) {
        if (!is_lit(k)) return {};
        out.push_back(strip(k).lit);
    }
    return out;
}

}  // namespace detail

inline Homogeneous homogeneous_kind(const Regex& ast) {
    using K = Regex::Kind;
    auto items = detail::items_of(ast);
    bool plus = true, star = true, alt = true;
    bool any_plus = false, any_alt = false;
    for (const Regex* it : items) {
        bool lit = it->kind == K::Literal;
        bool p = it->kind == K::Plus && detail::is_lit(it->kids[0]);
        bool s = it->kind == K::Star && detail::is_lit(it->kids[0]);
        bool a = it->kind == K::Alt && !detail::alt_letters(*it).empty();
        plus = plus && (lit || p);
        star = star && s;
        alt = alt && (lit || a);
        any_plus = any_plus || p;
        any_alt = any_alt || a;
    }
    if (plus && any_plus) return Homogeneous::Plus;
    if (star) return Homogeneous::Star;
    if (alt && any_alt) return Homogeneous::Alt;
    return Homogeneous::None;
}

// Direct DFA construction for homogeneous expressions.
inline Dfa homogeneous_dfa(const Regex& ast, Homogeneous kind) {
    using K = Regex::Kind;
    if (kind == Homogeneous::None || homogeneous_kind(ast) != kind) throw std::invalid_argument("expression is not of the given homogeneous kind");
    auto items = detail::items_of(ast);
    Nfa a(0);
    if (kind == Homogeneous::Plus) {
        // a+a is rewritten to aa+: within a run of one letter only the last item loops.
        const int n = static_cast<int>(items.size());
        std::vector<Symbol> letter(n);
        std::vector<bool> loop(n, false);
        for (int i = 0; i < n; ++i) letter[i] = items[i]->kind == K::Literal ? items[i]->lit : detail::strip(items[i]->kids[0]).lit;
        for (int i = 0; i < n;) {
            int j = i;
            bool any = false;
            for (; j < n && letter[j] == letter[i]; ++j) any = any || items[j]->kind == K::Plus;
            loop[j - 1] = any;
            i = j;
        }
        a = Nfa(n + 1);
        for (int i = 1; i <= n; ++i) {
            a.add_transition(i - 1, letter[i - 1], i);
            if (loop[i - 1]) a.add_transition(i, letter[i - 1], i);
        }
        a.set_final(n);
    } else if (kind == Homogeneous::Star) {
        // a*a* is rewritten to a*.
        std::vector<Symbol> letter;
        for (const Regex* it : items) {
            Symbol c = detail::strip(it->kids[0]).lit;
            if (letter.empty() || letter.back() != c) letter.push_back(c);
        }
        const int n = static_cast<int>(letter.size());
        a = Nfa(n + 1);
        // From q_i a letter x leads to q_j with j the least index ≥ max(i,1) where a_j = x.
        for (int i = 0; i <= n; ++i) {
            a.set_final(i);
            std::vector<bool> done(256, false);
            for (int j = std::max(i, 1); j <= n; ++j)
                if (!done[letter[j - 1]]) {
                    done[letter[j - 1]] = true;
                    a.add_transition(i, letter[j - 1], j);
                }
        }
    } else {
        const int n = static_cast<int>(items.size());
        a = Nfa(n + 1);
        for (int i = 1; i <= n; ++i)
            for (Symbol c : detail::alt_letters(*items[i - 1])) a.add_transition(i - 1, c, i);
        a.set_final(n);
    }
    a.set_initial(0);
    Dfa d;
    d.reset_alphabet(a.alphabet());
    d.n = a.size();
    d.init = 0;
    d.delta.assign(static_cast<std::size_t>(d.n) * d.k(), -1);
    d.fin.assign(d.n, 0);
    for (int p = 0; p < d.n; ++p) {
        d.fin[p] = a.final_states().test(p);
        for (auto& e : a.out(p)) {
            auto& slot = d.delta[static_cast<std::size_t>(p) * d.k() + d.idx[e.sym]];
            if (slot >= 0 && slot != e.to) throw std::logic_error("homogeneous construction is not deterministic");
            slot = e.to;
        }
    }
    return d;
}

}  // namespace quasi
