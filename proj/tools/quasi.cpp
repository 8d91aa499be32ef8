// quasi: inclusion checking, compressed search, residual automata, learning.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "quasi/quasi.hpp"

using namespace quasi;
using json = nlohmann::json;

namespace {

enum Exit { kOk = 0, kMiss = 1, kUsage = 2, kBadInput = 3, kCap = 4 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InputError : std::runtime_error {
    InputError(const std::string& path, const std::string& what) : std::runtime_error(path + ": " + what) {}
};

struct Options {
    bool json = false;
    bool stats = false;
    bool fail_on_miss = false;
    std::size_t cap = kDefaultIterationCap;
};

std::size_t iteration_cap() {
    const char* env = std::getenv("TOOL_ITER_CAP");
    if (!env || !*env) return kDefaultIterationCap;
    try {
        std::size_t pos = 0;
        unsigned long long v = std::stoull(env, &pos);
        if (pos != std::string(env).size() || v == 0) throw std::invalid_argument(env);
        return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
        throw UsageError(std::string("TOOL_ITER_CAP must be a positive integer, got '") + env + "'");
    }
}

template <class F>
auto load(const std::string& path, F&& parse) {
    std::string src;
    try {
        src = read_file(path);
    } catch (const std::exception& e) {
        throw InputError(path, e.what());
    }
    try {
        return parse(src);
    } catch (const ParseError& e) {
        throw InputError(path, e.what());
    } catch (const std::invalid_argument& e) {
        throw InputError(path, e.what());
    }
}

Nfa load_nfa(const std::string& path) {
    return load(path, [](const std::string& s) { return parse_nfa(s); });
}

std::string escape(const Word& w) {
    std::string out;
    for (unsigned char c : w) {
        if (c >= 0x21 && c < 0x7f && c != '\\')
            out.push_back(static_cast<char>(c));
        else
            out += io::format_symbol(c);
    }
    return out;
}

json witness_json(const Verdict& v) { return v.witness ? json(*v.witness) : json(nullptr); }

int verdict_out(const Options& o, const std::string& kind, const std::string& algo, const Verdict& v,
                std::size_t iterations, const json& extra_stats = json::object()) {
    if (o.json) {
        json j = {{"command", "include"}, {"kind", kind}, {"algo", algo},
                  {"verdict", v.included ? "included" : "not included"}, {"witness", witness_json(v)}};
        json st = {{"iterations", iterations}};
        st.update(extra_stats);
        j["stats"] = st;
        std::cout << j.dump() << '\n';
    } else {
        if (v.included)
            std::cout << "INCLUDED\n";
        else if (v.witness)
            std::cout << "NOT INCLUDED witness=" << escape(*v.witness) << '\n';
        else
            std::cout << "NOT INCLUDED\n";
        if (o.stats) {
            std::cout << "iterations " << iterations << '\n';
            for (auto& [k, val] : extra_stats.items()) std::cout << k << ' ' << val.dump() << '\n';
        }
    }
    return !v.included && o.fail_on_miss ? kMiss : kOk;
}

json fixpoint_size(const std::vector<std::vector<Word>>& fp) {
    std::size_t total = 0;
    for (auto& v : fp) total += v.size();
    return {{"antichain_words", total}};
}

int include_nfa(const Options& o, const std::string& a, const std::string& b, const std::string& algo) {
    Nfa n1 = load_nfa(a), n2 = load_nfa(b);
    if (algo == "word-nerode" || algo == "word-state" || algo == "word-sim") {
        WordOrder ord = algo == "word-nerode" ? WordOrder::Nerode : algo == "word-state" ? WordOrder::State : WordOrder::Simulation;
        auto r = fa_inc_word(n1, n2, ord, Side::Left, o.cap);
        return verdict_out(o, "nfa", algo, r.verdict, r.iterations, fixpoint_size(r.fixpoint));
    }
    if (algo == "antichain-fwd" || algo == "antichain-bwd") {
        auto r = fa_inc_antichain(n1, n2, algo == "antichain-fwd" ? AntichainVariant::Forward : AntichainVariant::Backward, o.cap);
        std::size_t total = 0;
        for (auto& v : r.fixpoint) total += v.size();
        return verdict_out(o, "nfa", algo, r.verdict, r.iterations, {{"antichain_words", total}});
    }
    auto r = fa_inc_gfp(n1, minimal_dfa(n2, merge_alphabets(n1.alphabet(), n2.alphabet())), o.cap);
    return verdict_out(o, "nfa", algo, r.verdict, r.iterations);
}

int include_cfg(const Options& o, const std::string& g, const std::string& b, const std::string& algo) {
    CnfGrammar gr = load(g, [](const std::string& s) { return parse_cnf(s); });
    Nfa n = load_nfa(b);
    if (algo == "antichain") {
        auto r = cfg_inc_antichain(gr, n, o.cap);
        return verdict_out(o, "cfg", algo, r.verdict, r.iterations);
    }
    MyhillOrder qo(n, merge_alphabets(gr.alphabet(), n.alphabet()));
    auto r = cfg_inc_word(gr, qo, [&](const Word& w) { return n.member(w); }, o.cap);
    return verdict_out(o, "cfg", algo, r.verdict, r.iterations, fixpoint_size(r.fixpoint));
}

int include_ocn(const Options& o, const std::string& a, const std::string& net) {
    Nfa n = load_nfa(a);
    OcnFile f = load(net, [](const std::string& s) { return parse_ocn(s); });
    auto r = nfa_in_ocn(n, f.net, f.start, f.counter, o.cap);
    return verdict_out(o, "ocn", "word-macro", r.verdict, r.iterations, fixpoint_size(r.fixpoint));
}

Slp load_input_slp(const std::string& path, bool raw) {
    std::string bytes;
    try {
        bytes = read_file(path);
    } catch (const std::exception& e) {
        throw InputError(path, e.what());
    }
    if (raw) {
        // RePair needs two bytes; a trailing newline adds no matching line
        while (bytes.size() < 2 || bytes.back() != '\n') bytes.push_back('\n');
        return repair_compress(bytes);
    }
    try {
        Slp p = load_slp(bytes);
        p.validate();
        return p;
    } catch (const ParseError& e) {
        throw InputError(path, e.what());
    } catch (const std::invalid_argument& e) {
        throw InputError(path, e.what());
    }
}

int search(const Options& o, const std::string& pattern, const std::vector<std::string>& files, bool report, bool raw) {
    Nfa n;
    try {
        n = compile_regex(pattern);
    } catch (const RegexError& e) {
        throw UsageError(std::string("pattern ") + e.what());
    }
    json results = json::array();
    for (auto& f : files) {
        Slp p = load_input_slp(f, raw);
        SearchStats st;
        std::uint64_t count = count_lines(p, n, &st);
        std::vector<MatchLine> lines;
        if (report) lines = report_lines(p, n);
        if (o.json) {
            json j = {{"file", f}, {"count", count}};
            if (report) {
                json arr = json::array();
                for (auto& m : lines) arr.push_back({{"line", m.number}, {"text", m.text}});
                j["lines"] = arr;
            }
            j["stats"] = {{"inner_iterations", st.inner_iterations}, {"rules", st.rules},
                          {"effective_rules", st.effective_rules}, {"states", st.states}};
            results.push_back(j);
            continue;
        }
        std::string prefix = files.size() > 1 ? f + ":" : "";
        std::cout << prefix << count << '\n';
        for (auto& m : lines) std::cout << prefix << m.number << ':' << m.text << '\n';
        if (o.stats)
            std::cout << "inner_iterations " << st.inner_iterations << "\nrules " << st.rules << "\neffective_rules "
                      << st.effective_rules << "\nstates " << st.states << '\n';
    }
    if (o.json) {
        json j = {{"command", "search"}, {"pattern", pattern}};
        if (results.size() == 1) {
            j.update(results[0]);
        } else {
            std::uint64_t total = 0;
            for (auto& r : results) total += r["count"].get<std::uint64_t>();
            j["count"] = total;
            j["files"] = results;
        }
        std::cout << j.dump() << '\n';
    }
    return kOk;
}

void write_out(const std::string& path, const std::string& bytes) {
    if (path.empty() || path == "-") {
        std::cout << bytes;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out || !out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()))) throw std::runtime_error("cannot write " + path);
}

int compress(const Options& o, const std::string& in, const std::string& out, bool text) {
    std::string bytes;
    try {
        bytes = read_file(in);
    } catch (const std::exception& e) {
        throw InputError(in, e.what());
    }
    if (bytes.size() < 2) throw InputError(in, "need at least two bytes to compress");
    Slp p = repair_compress(bytes);
    write_out(out, text ? format_slp_text(p) : slp_to_binary(p));
    if (o.json) {
        json j = {{"command", "compress"}, {"bytes", bytes.size()}, {"rules", p.rule_count()}, {"axiom", p.axiom.size()}};
        std::cerr << j.dump() << '\n';
    } else if (o.stats) {
        std::cerr << "bytes " << bytes.size() << "\nrules " << p.rule_count() << "\naxiom " << p.axiom.size() << '\n';
    }
    return kOk;
}

int decompress_cmd(const std::string& in, const std::string& out) {
    Slp p = load_input_slp(in, false);
    write_out(out, decompress(p));
    return kOk;
}

int automaton_out(const Options& o, const std::string& command, const Nfa& input, const Nfa& result,
                  json extra = json::object()) {
    if (o.json) {
        json j = {{"command", command}, {"states", result.size()}, {"transitions", result.transition_count()},
                  {"input_states", input.size()}, {"automaton", format_nfa(result)}};
        j.update(extra);
        std::cout << j.dump() << '\n';
    } else {
        std::cout << format_nfa(result);
        if (o.stats) {
            std::cout << "# input_states " << input.size() << "\n# states " << result.size() << "\n# transitions "
                      << result.transition_count() << '\n';
            for (auto& [k, v] : extra.items()) std::cout << "# " << k << ' ' << v.dump() << '\n';
        }
    }
    return kOk;
}

Side parse_side(const std::string& s) { return s == "left" ? Side::Left : Side::Right; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quasi: quasiorder-based language inclusion, compressed search and residual automata"};
    app.require_subcommand(1);
    Options o;
    app.add_flag("--json", o.json, "emit one JSON object");
    app.add_flag("--stats", o.stats, "print iteration and operation counters");

    auto* inc = app.add_subcommand("include", "decide language inclusion");
    inc->require_subcommand(1);
    inc->add_flag("--fail-on-miss", o.fail_on_miss, "exit 1 when the inclusion does not hold");
    std::string a, b, algo = "antichain-fwd", cfg_algo = "antichain";
    auto* inc_nfa = inc->add_subcommand("nfa", "L(A) included in L(B)");
    inc_nfa->add_option("A", a, "NFA file")->required();
    inc_nfa->add_option("B", b, "NFA file")->required();
    inc_nfa->add_option("--algo", algo, "algorithm")
        ->check(CLI::IsMember({"word-nerode", "word-state", "word-sim", "antichain-fwd", "antichain-bwd", "gfp"}));
    auto* inc_cfg = inc->add_subcommand("cfg", "L(G) included in L(B)");
    inc_cfg->add_option("G", a, "CNF grammar file")->required();
    inc_cfg->add_option("B", b, "NFA file")->required();
    inc_cfg->add_option("--algo", cfg_algo, "algorithm")->check(CLI::IsMember({"antichain", "word-myhill"}));
    auto* inc_ocn = inc->add_subcommand("ocn", "L(A) included in the traces of a one-counter net");
    inc_ocn->add_option("A", a, "NFA file")->required();
    inc_ocn->add_option("NET", b, "OCN file")->required();
    for (auto* s : {inc_nfa, inc_cfg, inc_ocn}) {
        s->add_flag("--fail-on-miss", o.fail_on_miss, "exit 1 when the inclusion does not hold");
        s->add_flag("--json", o.json, "emit one JSON object");
        s->add_flag("--stats", o.stats, "print counters");
    }

    auto* srch = app.add_subcommand("search", "count lines of compressed text matching a regex");
    std::string pattern;
    std::vector<std::string> files;
    bool report = false, raw = false;
    srch->add_option("-e,--regexp", pattern, "pattern")->required();
    srch->add_option("FILE", files, "SLP files (binary or text)")->required();
    srch->add_flag("--report", report, "also print matching lines");
    srch->add_flag("--raw", raw, "inputs are uncompressed text");

    auto* comp = app.add_subcommand("compress", "RePair compression to an SLP");
    std::string in, out;
    bool text_slp = false;
    comp->add_option("IN", in, "input file")->required();
    comp->add_option("-o,--output", out, "output file (default stdout)");
    comp->add_flag("--text", text_slp, "write the text SLP format");

    auto* decomp = app.add_subcommand("decompress", "expand an SLP");
    decomp->add_option("IN", in, "SLP file")->required();
    decomp->add_option("-o,--output", out, "output file (default stdout)");

    std::string method = "res", side = "right";
    auto* resid = app.add_subcommand("residualize", "residual automaton of an NFA");
    resid->add_option("IN", in, "NFA file")->required();
    resid->add_option("--method", method, "res or denis")->check(CLI::IsMember({"res", "denis"}));
    resid->add_option("--side", side, "right or left")->check(CLI::IsMember({"right", "left"}));

    auto* canon = app.add_subcommand("canonical", "canonical RFA of the language of an NFA");
    canon->add_option("IN", in, "NFA file")->required();
    canon->add_option("--side", side, "right or left")->check(CLI::IsMember({"right", "left"}));

    auto* dr = app.add_subcommand("double-reversal", "canonical RFA by double reversal");
    dr->add_option("IN", in, "NFA file")->required();

    auto* cdr = app.add_subcommand("check-dr", "does residualizing this NFA give the canonical RFA's order");
    cdr->add_option("IN", in, "NFA file")->required();

    auto* learn = app.add_subcommand("learn", "learn the canonical RFA with an NFA as teacher");
    learn->add_option("IN", in, "target NFA file")->required();

    for (auto* s : {srch, comp, decomp, resid, canon, dr, cdr, learn}) {
        s->add_flag("--json", o.json, "emit one JSON object");
        s->add_flag("--stats", o.stats, "print counters");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        o.cap = iteration_cap();
        if (*inc_nfa) return include_nfa(o, a, b, algo);
        if (*inc_cfg) return include_cfg(o, a, b, cfg_algo);
        if (*inc_ocn) return include_ocn(o, a, b);
        if (*srch) return search(o, pattern, files, report, raw);
        if (*comp) return compress(o, in, out, text_slp);
        if (*decomp) return decompress_cmd(in, out);
        if (*resid) {
            Nfa n = load_nfa(in);
            Nfa r = method == "denis" ? denis_residualize(side == "left" ? reverse(n) : n) : res(n, parse_side(side));
            if (method == "denis" && side == "left") r = reverse(r);
            return automaton_out(o, "residualize", n, r, {{"method", method}, {"side", side}});
        }
        if (*canon) {
            Nfa n = load_nfa(in);
            return automaton_out(o, "canonical", n, canonical(n, parse_side(side)), {{"side", side}});
        }
        if (*dr) {
            Nfa n = load_nfa(in);
            return automaton_out(o, "double-reversal", n, double_reversal_canonical(n));
        }
        if (*cdr) {
            Nfa n = load_nfa(in);
            bool holds = check_dr_condition(n);
            if (o.json)
                std::cout << json{{"command", "check-dr"}, {"holds", holds}}.dump() << '\n';
            else
                std::cout << (holds ? "HOLDS" : "FAILS") << '\n';
            return kOk;
        }
        if (*learn) {
            Nfa n = load_nfa(in);
            auto r = nl_learn(n, {}, o.cap);
            return automaton_out(o, "learn", n, r.automaton,
                                 {{"equivalence_queries", r.rounds}, {"membership_queries", r.membership_queries},
                                  {"prefixes", r.prefixes}, {"suffixes", r.suffixes}});
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kBadInput;
    } catch (const IterationCapExceeded& e) {
        std::cerr << "error: " << e.what() << " (raise TOOL_ITER_CAP)\n";
        return kCap;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kBadInput;
    }
    return kUsage;
}
