#pragma once

#include <cctype>
#include <charconv>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "automata.hpp"
#include "grammar.hpp"
#include "quasiorder.hpp"

namespace quasi {

struct ParseError : std::runtime_error {
    std::size_t offset;
    ParseError(std::size_t off, const std::string& msg)
        : std::runtime_error("byte " + std::to_string(off) + ": " + msg), offset(off) {}
};

namespace io {

struct Token {
    std::string text;
    std::size_t offset;
    bool quoted = false;
};

// Splits text into lines of whitespace-separated tokens. '#' outside quotes
// starts a comment. A quoted token keeps its quotes so symbols can tell them apart.
inline std::vector<std::vector<Token>> tokenize(std::string_view src) {
    std::vector<std::vector<Token>> lines;
    std::vector<Token> cur;
    std::size_t i = 0;
    auto flush = [&] {
        if (!cur.empty()) lines.push_back(std::move(cur));
        cur.clear();
    };
    while (i < src.size()) {
        char c = src[i];
        if (c == '\n') {
            flush();
            ++i;
        } else if (c == '#') {
            while (i < src.size() && src[i] != '\n') ++i;
        } else if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
        } else if (c == '\'') {
            std::size_t start = i++;
            while (i < src.size() && src[i] != '\'' && src[i] != '\n') {
                if (src[i] == '\\') ++i;
                ++i;
            }
            if (i >= src.size() || src[i] != '\'') throw ParseError(start, "unterminated quote");
            ++i;
            cur.push_back({std::string(src.substr(start, i - start)), start, true});
        } else {
            std::size_t start = i;
            while (i < src.size() && !std::isspace(static_cast<unsigned char>(src[i])) && src[i] != '#') ++i;
            cur.push_back({std::string(src.substr(start, i - start)), start, false});
        }
    }
    flush();
    return lines;
}

inline long long parse_int(const Token& t, long long lo, long long hi) {
    long long v = 0;
    const char* b = t.text.data();
    const char* e = b + t.text.size();
    if (!t.text.empty() && *b == '+') ++b;
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc{} || p != e) throw ParseError(t.offset, "expected integer, got '" + t.text + "'");
    if (v < lo || v > hi) throw ParseError(t.offset, "value " + t.text + " out of range");
    return v;
}

// 97, 'a', '\n', '\x0a' or a bare non-digit character.
inline Symbol parse_symbol(const Token& t) {
    const std::string& s = t.text;
    if (t.quoted) {
        std::string body = s.substr(1, s.size() - 2);
        if (body.size() == 1 && body[0] != '\\') return static_cast<Symbol>(body[0]);
        if (body.size() >= 2 && body[0] == '\\') {
            if (body.size() == 2) {
                switch (body[1]) {
                    case 'n': return '\n';
                    case 't': return '\t';
                    case 'r': return '\r';
                    case '0': return 0;
                    case 's': return ' ';
                    case '\\': return '\\';
                    case '\'': return '\'';
                    default: break;
                }
            }
            if (body.size() == 4 && body[1] == 'x') {
                unsigned v = 0;
                auto [p, ec] = std::from_chars(body.data() + 2, body.data() + 4, v, 16);
                if (ec == std::errc{} && p == body.data() + 4) return static_cast<Symbol>(v);
            }
        }
        throw ParseError(t.offset, "bad symbol " + s);
    }
    if (!s.empty() && std::isdigit(static_cast<unsigned char>(s[0]))) return static_cast<Symbol>(parse_int(t, 0, 255));
    if (s.size() == 1) return static_cast<Symbol>(s[0]);
    throw ParseError(t.offset, "bad symbol " + s);
}

inline std::string format_symbol(Symbol a) {
    if (std::isalpha(a)) return std::string(1, static_cast<char>(a));
    if (std::isgraph(a) && a != '\'' && a != '\\' && a != '#') return "'" + std::string(1, static_cast<char>(a)) + "'";
    return std::to_string(a);
}

inline void expect_args(const std::vector<Token>& line, std::size_t n) {
    if (line.size() != n + 1)
        throw ParseError(line[0].offset, "'" + line[0].text + "' expects " + std::to_string(n) + " argument(s)");
}

inline std::size_t end_offset(std::string_view src) { return src.size(); }

}  // namespace io

// ---- NFA -------------------------------------------------------------------

inline Nfa parse_nfa(std::string_view src) {
    auto lines = io::tokenize(src);
    if (lines.empty() || lines[0][0].text != "states") throw ParseError(0, "expected 'states N' first");
    io::expect_args(lines[0], 1);
    const int n = static_cast<int>(io::parse_int(lines[0][1], 0, 1 << 24));
    Nfa a(n);
    auto state = [&](const io::Token& t) { return static_cast<int>(io::parse_int(t, 0, n - 1)); };
    for (std::size_t l = 1; l < lines.size(); ++l) {
        auto& ln = lines[l];
        const std::string& kw = ln[0].text;
        if (kw == "alphabet") {
            for (std::size_t i = 1; i < ln.size(); ++i) a.add_symbol(io::parse_symbol(ln[i]));
        } else if (kw == "initial") {
            for (std::size_t i = 1; i < ln.size(); ++i) a.set_initial(state(ln[i]));
        } else if (kw == "final") {
            for (std::size_t i = 1; i < ln.size(); ++i) a.set_final(state(ln[i]));
        } else if (kw == "trans") {
            io::expect_args(ln, 3);
            a.add_transition(state(ln[1]), io::parse_symbol(ln[2]), state(ln[3]));
        } else {
            throw ParseError(ln[0].offset, "unknown directive '" + kw + "'");
        }
    }
    return a;
}

inline std::string format_nfa(const Nfa& a) {
    std::ostringstream o;
    o << "states " << a.size() << "\nalphabet";
    for (Symbol s : a.alphabet()) o << ' ' << io::format_symbol(s);
    o << "\ninitial";
    a.initial().for_each([&](std::size_t q) { o << ' ' << q; });
    o << "\nfinal";
    a.final_states().for_each([&](std::size_t q) { o << ' ' << q; });
    o << '\n';
    for (int p = 0; p < a.size(); ++p)
        for (auto& e : a.out(p)) o << "trans " << p << ' ' << io::format_symbol(e.sym) << ' ' << e.to << '\n';
    return o.str();
}

// ---- CNF grammar -----------------------------------------------------------

inline CnfGrammar parse_cnf(std::string_view src) {
    auto lines = io::tokenize(src);
    if (lines.empty() || lines[0][0].text != "vars") throw ParseError(0, "expected 'vars N' first");
    io::expect_args(lines[0], 1);
    const int n = static_cast<int>(io::parse_int(lines[0][1], 1, 1 << 20));
    CnfGrammar g(n);
    auto var = [&](const io::Token& t) {
        std::string s = t.text;
        if (!s.empty() && (s[0] == 'X' || s[0] == 'x')) s = s.substr(1);
        return static_cast<int>(io::parse_int({s, t.offset}, 0, n - 1));
    };
    for (std::size_t l = 1; l < lines.size(); ++l) {
        auto& ln = lines[l];
        const std::string& kw = ln[0].text;
        if (kw == "term") {
            io::expect_args(ln, 2);
            g.add_term(var(ln[1]), io::parse_symbol(ln[2]));
        } else if (kw == "bin") {
            io::expect_args(ln, 3);
            g.add_bin(var(ln[1]), var(ln[2]), var(ln[3]));
        } else if (kw == "eps") {
            io::expect_args(ln, 0);
            g.axiom_eps = true;
        } else {
            throw ParseError(ln[0].offset, "unknown directive '" + kw + "'");
        }
    }
    try {
        g.validate();
    } catch (const std::invalid_argument& e) {
        throw ParseError(io::end_offset(src), e.what());
    }
    return g;
}

inline std::string format_cnf(const CnfGrammar& g) {
    std::ostringstream o;
    o << "vars " << g.vars << '\n';
    if (g.axiom_eps) o << "eps\n";
    for (int x = 0; x < g.vars; ++x) {
        for (Symbol a : g.term[x]) o << "term X" << x << ' ' << io::format_symbol(a) << '\n';
        for (auto [y, z] : g.bin[x]) o << "bin X" << x << " X" << y << " X" << z << '\n';
    }
    return o.str();
}

// ---- OCN -------------------------------------------------------------------

struct OcnFile {
    Ocn net;
    int start = 0;
    long long counter = 0;
};

// `states N`, `trans p <sym> <-1|0|+1> q`, optional `start q n`.
inline OcnFile parse_ocn(std::string_view src) {
    auto lines = io::tokenize(src);
    if (lines.empty() || lines[0][0].text != "states") throw ParseError(0, "expected 'states N' first");
    io::expect_args(lines[0], 1);
    const int n = static_cast<int>(io::parse_int(lines[0][1], 1, 1 << 20));
    OcnFile f{Ocn(n)};
    auto state = [&](const io::Token& t) { return static_cast<int>(io::parse_int(t, 0, n - 1)); };
    for (std::size_t l = 1; l < lines.size(); ++l) {
        auto& ln = lines[l];
        const std::string& kw = ln[0].text;
        if (kw == "trans") {
            io::expect_args(ln, 4);
            f.net.add(state(ln[1]), io::parse_symbol(ln[2]), static_cast<int>(io::parse_int(ln[3], -1, 1)), state(ln[4]));
        } else if (kw == "start") {
            io::expect_args(ln, 2);
            f.start = state(ln[1]);
            f.counter = io::parse_int(ln[2], 0, 1LL << 40);
        } else if (kw == "alphabet") {
            for (std::size_t i = 1; i < ln.size(); ++i) {
                Symbol s = io::parse_symbol(ln[i]);
                auto it = std::lower_bound(f.net.sigma.begin(), f.net.sigma.end(), s);
                if (it == f.net.sigma.end() || *it != s) f.net.sigma.insert(it, s);
            }
        } else {
            throw ParseError(ln[0].offset, "unknown directive '" + kw + "'");
        }
    }
    return f;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace quasi
