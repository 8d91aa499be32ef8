#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "automata.hpp"
#include "io.hpp"

namespace quasi {

// Straight-line program. Symbol ids below 256 are bytes; 256 + i is rule i
// (1-based). Rules 1..t-1 are binary; the axiom (rule t) has arity >= 2.
struct Slp {
    static constexpr std::uint32_t kFirstRule = 256;

    std::vector<std::array<std::uint32_t, 2>> rules;
    std::vector<std::uint32_t> axiom;

    std::size_t rule_count() const { return rules.size() + 1; }
    static bool is_terminal(std::uint32_t x) { return x < kFirstRule; }
    static std::uint32_t rule_id(std::size_t i) { return static_cast<std::uint32_t>(kFirstRule + i); }  // 1-based
    const std::array<std::uint32_t, 2>& rule(std::uint32_t id) const { return rules[id - kFirstRule - 1]; }

    void validate() const {
        for (std::size_t i = 0; i < rules.size(); ++i)
            for (auto x : rules[i])
                if (!is_terminal(x) && x >= rule_id(i + 1)) throw std::invalid_argument("rule X" + std::to_string(i + 1) + " references a later symbol");
        if (axiom.size() < 2) throw std::invalid_argument("axiom must have at least two symbols");
        for (auto x : axiom)
            if (!is_terminal(x) && x >= rule_id(rule_count())) throw std::invalid_argument("axiom references an unknown rule");
    }

    // Expansion length of every symbol id below 256 + t. Saturates at UINT64_MAX.
    std::vector<std::uint64_t> lengths() const {
        std::vector<std::uint64_t> len(kFirstRule + rules.size() + 1, 1);
        for (std::size_t i = 0; i < rules.size(); ++i) {
            auto [a, b] = rules[i];
            std::uint64_t x = len[a], y = len[b];
            len[kFirstRule + i + 1] = x > std::numeric_limits<std::uint64_t>::max() - y ? std::numeric_limits<std::uint64_t>::max() : x + y;
        }
        return len;
    }

    std::uint64_t text_length() const {
        auto len = lengths();
        std::uint64_t t = 0;
        for (auto x : axiom) t = len[x] > std::numeric_limits<std::uint64_t>::max() - t ? std::numeric_limits<std::uint64_t>::max() : t + len[x];
        return t;
    }
};

struct OutputCapExceeded : std::runtime_error {
    explicit OutputCapExceeded(std::uint64_t cap)
        : std::runtime_error("decompressed output exceeds " + std::to_string(cap) + " bytes") {}
};

constexpr std::uint64_t kDefaultOutputCap = std::uint64_t{1} << 32;

// Appends the expansion of symbol x to out.
inline void expand_symbol(const Slp& p, std::uint32_t x, std::string& out) {
    std::vector<std::uint32_t> stack{x};
    while (!stack.empty()) {
        std::uint32_t y = stack.back();
        stack.pop_back();
        if (Slp::is_terminal(y)) {
            out.push_back(static_cast<char>(y));
        } else {
            auto& r = p.rule(y);
            stack.push_back(r[1]);
            stack.push_back(r[0]);
        }
    }
}

inline std::string decompress(const Slp& p, std::uint64_t cap = kDefaultOutputCap) {
    std::uint64_t n = p.text_length();
    if (n > cap) throw OutputCapExceeded(cap);
    std::string out;
    out.reserve(n);
    for (auto x : p.axiom) expand_symbol(p, x, out);
    return out;
}

// ---- RePair ----------------------------------------------------------------

// Replaces a most frequent adjacent pair (frequency >= 2, non-overlapping
// occurrences) by a fresh rule until no pair repeats.
inline Slp repair_compress(std::string_view text) {
    if (text.size() < 2) throw std::invalid_argument("text must have at least two bytes");
    const int n = static_cast<int>(text.size());
    std::vector<std::uint32_t> sym(n);
    std::vector<int> next(n), prev(n);
    std::vector<char> live(n, 1);
    for (int i = 0; i < n; ++i) {
        sym[i] = static_cast<unsigned char>(text[i]);
        next[i] = i + 1 < n ? i + 1 : -1;
        prev[i] = i - 1;
    }
    auto key = [](std::uint32_t a, std::uint32_t b) { return (static_cast<std::uint64_t>(a) << 32) | b; };
    std::unordered_map<std::uint64_t, std::vector<int>> occ;
    using Item = std::pair<std::size_t, std::uint64_t>;
    // Ties broken by smaller pair key, i.e. the pair seen with the smaller symbols.
    auto cmp = [](const Item& x, const Item& y) { return x.first != y.first ? x.first < y.first : x.second > y.second; };
    std::priority_queue<Item, std::vector<Item>, decltype(cmp)> heap(cmp);
    auto note = [&](int i) {
        if (i < 0 || next[i] < 0) return;
        auto& v = occ[key(sym[i], sym[next[i]])];
        v.push_back(i);
        if (v.size() >= 2) heap.emplace(v.size(), key(sym[i], sym[next[i]]));
    };
    for (int i = 0; i + 1 < n; ++i) note(i);

    auto valid = [&](int i, std::uint32_t a, std::uint32_t b) {
        return live[i] && sym[i] == a && next[i] >= 0 && sym[next[i]] == b;
    };
    // Live non-overlapping occurrences in text order.
    auto occurrences = [&](std::uint64_t k) {
        std::uint32_t a = static_cast<std::uint32_t>(k >> 32), b = static_cast<std::uint32_t>(k);
        auto& v = occ[k];
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        // Stale positions are dropped; overlapped ones stay listed, they may become usable later.
        std::erase_if(v, [&](int i) { return !valid(i, a, b); });
        std::vector<int> out;
        int blocked = -1;
        for (int i : v) {
            if (i == blocked) continue;
            out.push_back(i);
            blocked = next[i];
        }
        return out;
    };

    Slp slp;
    while (!heap.empty()) {
        auto [count, k] = heap.top();
        heap.pop();
        auto it = occ.find(k);
        if (it == occ.end()) continue;
        auto pos = occurrences(k);
        if (pos.size() < 2) {
            occ.erase(k);
            continue;
        }
        if (pos.size() != count) {
            heap.emplace(pos.size(), k);
            continue;
        }
        occ.erase(k);
        std::uint32_t a = static_cast<std::uint32_t>(k >> 32), b = static_cast<std::uint32_t>(k);
        slp.rules.push_back({a, b});
        std::uint32_t x = Slp::rule_id(slp.rules.size());
        for (int i : pos) {
            if (!valid(i, a, b)) continue;
            int j = next[i];
            sym[i] = x;
            live[j] = 0;
            next[i] = next[j];
            if (next[j] >= 0) prev[next[j]] = i;
            note(prev[i]);
            note(i);
        }
    }
    for (int i = 0; i >= 0; i = next[i]) slp.axiom.push_back(sym[i]);
    return slp;
}

// ---- serialization ---------------------------------------------------------

inline std::string slp_to_binary(const Slp& p) {
    std::string out = "SLP1";
    auto put = [&](std::uint32_t v) {
        for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    };
    put(static_cast<std::uint32_t>(p.rule_count()));
    put(static_cast<std::uint32_t>(p.axiom.size()));
    for (auto& r : p.rules) {
        put(r[0]);
        put(r[1]);
    }
    for (auto x : p.axiom) put(x);
    return out;
}

inline Slp slp_from_binary(std::string_view b) {
    if (b.size() < 12 || b.substr(0, 4) != "SLP1") throw ParseError(0, "missing SLP1 header");
    std::size_t off = 4;
    auto get = [&]() {
        if (off + 4 > b.size()) throw ParseError(off, "truncated SLP");
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(b[off + i])) << (8 * i);
        off += 4;
        return v;
    };
    std::uint32_t t = get(), k = get();
    if (t == 0) throw ParseError(4, "rule count must be positive");
    if ((static_cast<std::uint64_t>(t - 1) * 2 + k) * 4 + 12 != b.size()) throw ParseError(8, "size does not match header");
    Slp p;
    p.rules.resize(t - 1);
    for (std::uint32_t i = 0; i + 1 < t; ++i) {
        std::size_t at = off;
        p.rules[i] = {get(), get()};
        for (auto x : p.rules[i])
            if (!Slp::is_terminal(x) && x >= Slp::rule_id(i + 1)) throw ParseError(at, "rule references a later symbol");
    }
    for (std::uint32_t i = 0; i < k; ++i) {
        std::size_t at = off;
        auto x = get();
        if (!Slp::is_terminal(x) && x >= Slp::rule_id(t)) throw ParseError(at, "axiom references an unknown rule");
        p.axiom.push_back(x);
    }
    if (p.axiom.size() < 2) throw ParseError(8, "axiom must have at least two symbols");
    return p;
}

// Text form: `rule X<i> <sym> <sym>` in order, then `axiom <sym> ...`.
// A symbol is X<j> for a rule or a byte in the automaton syntax.
inline Slp parse_slp_text(std::string_view src) {
    auto lines = io::tokenize(src);
    Slp p;
    bool have_axiom = false;
    auto symbol = [&](const io::Token& t, std::uint32_t limit) -> std::uint32_t {
        if (!t.quoted && t.text.size() > 1 && t.text[0] == 'X') {
            auto v = io::parse_int({t.text.substr(1), t.offset + 1}, 1, limit - 1);
            return Slp::rule_id(static_cast<std::size_t>(v));
        }
        return io::parse_symbol(t);
    };
    for (auto& ln : lines) {
        if (have_axiom) throw ParseError(ln[0].offset, "axiom must be the last rule");
        if (ln[0].text == "rule") {
            io::expect_args(ln, 3);
            std::size_t id = p.rules.size() + 1;
            if (ln[1].text != "X" + std::to_string(id)) throw ParseError(ln[1].offset, "expected X" + std::to_string(id));
            p.rules.push_back({symbol(ln[2], static_cast<std::uint32_t>(id)), symbol(ln[3], static_cast<std::uint32_t>(id))});
        } else if (ln[0].text == "axiom") {
            if (ln.size() < 3) throw ParseError(ln[0].offset, "axiom needs at least two symbols");
            for (std::size_t i = 1; i < ln.size(); ++i) p.axiom.push_back(symbol(ln[i], static_cast<std::uint32_t>(p.rules.size() + 1)));
            have_axiom = true;
        } else {
            throw ParseError(ln[0].offset, "unknown directive '" + ln[0].text + "'");
        }
    }
    if (!have_axiom) throw ParseError(src.size(), "missing axiom");
    return p;
}

inline std::string format_slp_text(const Slp& p) {
    auto sym = [](std::uint32_t x) {
        return Slp::is_terminal(x) ? io::format_symbol(static_cast<Symbol>(x)) : "X" + std::to_string(x - Slp::kFirstRule);
    };
    std::ostringstream o;
    for (std::size_t i = 0; i < p.rules.size(); ++i) o << "rule X" << i + 1 << ' ' << sym(p.rules[i][0]) << ' ' << sym(p.rules[i][1]) << '\n';
    o << "axiom";
    for (auto x : p.axiom) o << ' ' << sym(x);
    o << '\n';
    return o.str();
}

// Accepts either serialization.
inline Slp load_slp(std::string_view bytes) {
    if (bytes.substr(0, 4) == "SLP1") return slp_from_binary(bytes);
    return parse_slp_text(bytes);
}

}  // namespace quasi
