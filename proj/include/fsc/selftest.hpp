#ifndef FSC_SELFTEST_HPP
#define FSC_SELFTEST_HPP

// Named acceptance checks, runnable via `fsc selftest` and from the test
// suite. Every check is independent and builds its own symbol table.

#include <array>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <fsc/apply.hpp>
#include <fsc/oracle.hpp>
#include <fsc/regex.hpp>

namespace fsc::selftest {

struct Options {
    std::string filter;               // substring match on check names
    std::string recipes_dir = "recipes";
    std::size_t oracle_regexes = 200;
    std::size_t markup_specs = 50;
    std::size_t markup_inputs = 500;
    unsigned seed = 20260823;
};

namespace detail {

struct Fail : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error(ErrorKind::Io, "cannot read '" + path + "'");
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

inline Network compile_str(const std::string& src, SymbolTable& table) {
    return compile(*parse(src), {}, table);
}

inline Network load_recipe(const Options& opt, const std::string& name, SymbolTable& table) {
    return load_program(read_file(opt.recipes_dir + "/" + name), table).second;
}

inline oracle::Word to_word(SymbolTable& table, const std::string& s) {
    oracle::Word w;
    std::size_t i = 0;
    while (i < s.size()) {
        std::size_t j = i + 1;
        while (j < s.size() && (static_cast<unsigned char>(s[j]) & 0xC0) == 0x80) ++j;
        w.push_back(table.intern(s.substr(i, j - i)));
        i = j;
    }
    return w;
}

inline std::set<oracle::Word> down_words(const Network& net, const SymbolTable& table,
                                         const oracle::Word& w, std::size_t limit = 200) {
    InputTokenization tok;
    for (SymbolId s : w) {
        tok.symbols.push_back(s);
        tok.rendered.push_back(table.name(s));
    }
    ApplyResult r = apply_down(net, table, tok, limit);
    std::set<oracle::Word> out;
    for (auto& ow : r.words) {
        oracle::Word x;
        for (auto& o : ow) x.push_back(o.id);
        out.insert(x);
    }
    return out;
}

inline std::set<std::string> down_strings(const Network& net, SymbolTable& table,
                                          const std::string& text,
                                          const RenderMap& render = {}) {
    InputTokenization tok = tokenize_input(net, table, text);
    ApplyResult r = apply_down(net, table, tok, 200, render);
    return {r.outputs.begin(), r.outputs.end()};
}

inline std::string show(const SymbolTable& table, const oracle::Word& w) {
    std::string s;
    for (SymbolId x : w) s += table.name(x);
    return s.empty() ? "(empty)" : s;
}

inline void expect(bool cond, const std::string& msg) {
    if (!cond) throw Fail(msg);
}

inline void expect_set(const std::set<std::string>& got, const std::set<std::string>& want,
                       const std::string& what) {
    if (got == want) return;
    std::string msg = what + ": got {";
    for (auto& s : got) msg += " \"" + s + "\"";
    msg += " }, want {";
    for (auto& s : want) msg += " \"" + s + "\"";
    throw Fail(msg + " }");
}

inline std::vector<oracle::Word> all_words(std::vector<SymbolId> alpha, std::size_t max_len) {
    std::vector<oracle::Word> out{{}};
    std::size_t lo = 0;
    for (std::size_t len = 1; len <= max_len; ++len) {
        std::size_t hi = out.size();
        for (std::size_t i = lo; i < hi; ++i)
            for (SymbolId s : alpha) {
                oracle::Word w = out[i];
                w.push_back(s);
                out.push_back(w);
            }
        lo = hi;
    }
    return out;
}

// Random epsilon-free UPPER languages over {a, b}, depth-bounded trees.
struct Gen {
    std::mt19937 rng;
    SymbolId a, b;

    Network tree(int depth) {
        std::uniform_int_distribution<int> pick(0, depth == 0 ? 1 : 7);
        switch (pick(rng)) {
            case 0: return atom(a);
            case 1: return atom(b);
            case 2: return union_net(tree(depth - 1), tree(depth - 1));
            case 3:
            case 4: return concat(tree(depth - 1), tree(depth - 1));
            case 5: return star(tree(depth - 1));
            case 6: return plus(tree(depth - 1));
            default: return optional(tree(depth - 1));
        }
    }

    Network upper() {
        for (;;) {
            Network n = minimize(difference(minimize(tree(4)), empty_string_language()));
            if (!oracle::enumerate_strings(n, 7).empty()) return n;
        }
    }
};

// Shared corpus run for the equivalence and unambiguity checks.
struct CorpusResult {
    bool done = false;
    std::vector<std::string> equiv_failures;
    std::vector<std::string> ambig_failures;
};

inline void run_corpus(const Options& opt, CorpusResult& res) {
    SymbolTable table;
    SymbolId a = table.intern("a"), b = table.intern("b"), x = table.intern("x");
    Gen gen{std::mt19937(opt.seed), a, b};
    auto words = all_words({a, b}, 7);
    const std::array<std::pair<Direction, LengthMode>, 4> ops{{
        {Direction::LeftToRight, LengthMode::Longest},
        {Direction::LeftToRight, LengthMode::Shortest},
        {Direction::RightToLeft, LengthMode::Longest},
        {Direction::RightToLeft, LengthMode::Shortest},
    }};
    const char* opname[] = {"@->", "@>", "->@", ">@"};
    for (std::size_t i = 0; i < opt.oracle_regexes; ++i) {
        Network u = gen.upper();
        for (std::size_t k = 0; k < ops.size(); ++k) {
            ReplaceSpec spec{u, LowerAction{atom(x)}, ops[k].first, ops[k].second};
            Network net = replace_directed(spec);
            for (auto& w : words) {
                auto want = oracle::rewrite(spec, w);
                auto got = down_words(net, table, w, 20);
                if (got != want && res.equiv_failures.size() < 5)
                    res.equiv_failures.push_back("regex #" + std::to_string(i) + " " +
                                                 opname[k] + " on \"" + show(table, w) +
                                                 "\": transducer and oracle disagree");
                if (got.size() != 1 && res.ambig_failures.size() < 5)
                    res.ambig_failures.push_back("regex #" + std::to_string(i) + " " +
                                                 opname[k] + " on \"" + show(table, w) +
                                                 "\": " + std::to_string(got.size()) +
                                                 " outputs");
            }
        }
    }
    res.done = true;
}

inline bool isomorphic(Network a, Network b) {
    a.sort_arcs();
    b.sort_arcs();
    return a.start == b.start && a.finals == b.finals && a.states == b.states;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// The checks

inline void check_simple_replace(const Options&) {
    SymbolTable t;
    Network net = detail::compile_str("a b|b|b a|a b a -> x", t);
    detail::expect_set(detail::down_strings(net, t, "aba"), {"axa", "ax", "xa", "x"},
                       "simple replace on \"aba\"");
}

inline void check_directed_unique(const Options&) {
    SymbolTable t;
    Network net = detail::compile_str("a b|b|b a|a b a @-> x", t);
    detail::expect_set(detail::down_strings(net, t, "aba"), {"x"}, "directed on \"aba\"");
    SymbolId a = t.intern("a"), b = t.intern("b");
    for (auto& w : detail::all_words({a, b}, 8)) {
        auto outs = detail::down_words(net, t, w);
        detail::expect(outs.size() == 1, "not functional on \"" + detail::show(t, w) + "\" (" +
                                             std::to_string(outs.size()) + " outputs)");
    }
}

inline void check_nonsequential(const Options&) {
    SymbolTable t;
    Network net = detail::compile_str("a+ b @-> x", t);
    for (auto& [in, out] : std::vector<std::pair<std::string, std::string>>{
             {"ab", "x"}, {"aab", "x"}, {"aaab", "x"}, {"a", "a"}, {"aa", "aa"}, {"aaa", "aaa"}})
        detail::expect_set(detail::down_strings(net, t, in), {out}, "a+ b @-> x on \"" + in + "\"");
}

inline void check_markup_np(const Options&) {
    SymbolTable t;
    Network net = detail::compile_str("(d) a* n+ @-> %[ ... %]", t);
    detail::expect_set(detail::down_strings(net, t, "dannvaan"), {"[dann]v[aan]"},
                       "markup on \"dannvaan\"");
    detail::expect_set(detail::down_strings(net, t, "n"), {"[n]"}, "markup on \"n\"");
    detail::expect_set(detail::down_strings(net, t, "v"), {"v"}, "markup on \"v\"");
}

inline void check_filters(const Options& opt) {
    const std::string input = "<B>one</B><A>two</A><C>three</C><A>four</A>";
    {
        SymbolTable t;
        Network pos = detail::load_recipe(opt, "filter_pos.fsc", t);
        detail::expect_set(detail::down_strings(pos, t, input), {"<A>two</A><A>four</A>"},
                           "positive filter");
    }
    {
        SymbolTable t;
        Network neg = detail::load_recipe(opt, "filter_neg.fsc", t);
        detail::expect_set(detail::down_strings(neg, t, input), {"<B>one</B><C>three</C>"},
                           "negative filter");
    }
}

inline void check_np_vp(const Options& opt) {
    SymbolTable t;
    Network net = detail::load_recipe(opt, "np_vp.fsc", t);
    InputTokenization tok = tokenize_input(net, t, "dannvaan");
    ApplyResult r = apply_down(net, t, tok, 10);
    detail::expect(r.words.size() == 1,
                   "NP-VP parse not unique (" + std::to_string(r.words.size()) + " outputs)");
    std::vector<std::string> got;
    for (auto& o : r.words[0]) got.push_back(o.raw.empty() ? t.name(o.id) : o.raw);
    std::vector<std::string> want{"[NP", "d", "a", "n", "n", "]",
                                  "[VP", "v", "[NP", "a", "a", "n", "]", "]"};
    if (got != want) {
        std::string s;
        for (auto& g : got) s += g + " ";
        throw detail::Fail("NP-VP symbols: got " + s);
    }
}

inline void check_parallel(const Options& opt) {
    SymbolTable t;
    Network net = detail::load_recipe(opt, "parallel_ab.fsc", t);
    for (auto& [in, out] : std::vector<std::pair<std::string, std::string>>{
             {"aaa", "b"}, {"bb", "a"}, {"aaabba", "bab"}})
        detail::expect_set(detail::down_strings(net, t, in), {out},
                           "parallel swap on \"" + in + "\"");
}

inline void check_tokenizer(const Options& opt) {
    SymbolTable t;
    Network net = detail::load_recipe(opt, "tokenizer.fsc", t);
    RenderMap render{{"END_OF_TOKEN", "|"}};
    for (auto& [in, out] : std::vector<std::pair<std::string, std::string>>{
             {"we are at  least here", "we|are|at least|here|"},
             {"de plus on y va", "de plus|on|y|va|"},
             {"on y va de plus en plus", "on|y|va|de plus en plus|"}})
        detail::expect_set(detail::down_strings(net, t, in, render), {out},
                           "tokenizer on \"" + in + "\"");
}

inline void check_corpus_equiv(const Options&, const detail::CorpusResult& corpus) {
    if (corpus.equiv_failures.empty()) return;
    std::string msg = "oracle disagreements:";
    for (auto& f : corpus.equiv_failures) msg += "\n    " + f;
    throw detail::Fail(msg);
}

inline void check_corpus_unambiguous(const Options&, const detail::CorpusResult& corpus) {
    if (corpus.ambig_failures.empty()) return;
    std::string msg = "ambiguous outputs:";
    for (auto& f : corpus.ambig_failures) msg += "\n    " + f;
    throw detail::Fail(msg);
}

inline void check_algebra(const Options&) {
    SymbolTable t;
    SymbolId c = t.intern("c");
    std::vector<SymbolId> probes{c};
    auto equiv = [&](const Network& x, const Network& y, std::size_t len,
                     const std::string& what) {
        auto rep = oracle::assert_equivalent(x, y, len, probes);
        if (!rep.equivalent) throw detail::Fail(what + " violated");
    };
    std::vector<Network> langs;
    for (const char* src : {"[a|b]* a [a|b]*", "a* b*", "[a b]+ | b", "~[a b]", "$[b a]"})
        langs.push_back(detail::compile_str(src, t));
    for (auto& A : langs) {
        equiv(determinize(A), A, 5, "determinize preserves the language");
        equiv(minimize(A), A, 5, "minimize preserves the language");
        equiv(complement(complement(A)), minimize(determinize(A)), 5, "double complement");
        detail::expect(oracle::enumerate_strings(intersect(A, complement(A)), 6, probes).empty(),
                       "A & ~A must be empty");
        // same sigma on both sides so the probe instantiation lines up
        equiv(union_net(A, complement(A)), detail::compile_str("[a|b|?]*", t), 4,
              "A | ~A must be universal");
    }
    detail::expect(detail::isomorphic(minimize(detail::compile_str("[a|b]*", t)),
                                      minimize(detail::compile_str("[a* b*]*", t))),
                   "equivalent regexes must minimize to isomorphic networks");
    Network r1 = detail::compile_str("a -> b", t);
    Network r2 = detail::compile_str("b -> c", t);
    Network r3 = detail::compile_str("[c|a] -> a b", t);
    equiv(compose(compose(r1, r2), r3), compose(r1, compose(r2, r3)), 4,
          "composition associativity");
    equiv(inverse(inverse(r1)), r1, 4, "inverse involution");
    equiv(reverse(reverse(r1)), r1, 4, "reverse involution");
}

inline void check_markup_inverse(const Options& opt) {
    SymbolTable t;
    SymbolId a = t.intern("a"), b = t.intern("b");
    SymbolId p = t.intern("p"), q = t.intern("q");
    detail::Gen gen{std::mt19937(opt.seed + 1), a, b};
    std::mt19937 rng(opt.seed + 2);
    std::size_t per_spec = std::max<std::size_t>(1, opt.markup_inputs / opt.markup_specs);
    const std::array<std::pair<Direction, LengthMode>, 4> ops{{
        {Direction::LeftToRight, LengthMode::Longest},
        {Direction::LeftToRight, LengthMode::Shortest},
        {Direction::RightToLeft, LengthMode::Longest},
        {Direction::RightToLeft, LengthMode::Shortest},
    }};
    for (std::size_t i = 0; i < opt.markup_specs; ++i) {
        auto [dir, len] = ops[i % ops.size()];
        ReplaceSpec spec{gen.upper(), MarkupAction{atom(p), atom(q)}, dir, len};
        Network net = markup_directed(spec);
        for (std::size_t k = 0; k < per_spec; ++k) {
            std::uniform_int_distribution<std::size_t> wl(0, 10);
            std::uniform_int_distribution<int> ab(0, 1);
            oracle::Word w;
            for (std::size_t j = wl(rng); j > 0; --j) w.push_back(ab(rng) ? a : b);
            auto got = detail::down_words(net, t, w, 20);
            detail::expect(got.size() == 1, "markup spec #" + std::to_string(i) +
                                                " not functional on \"" + detail::show(t, w) +
                                                "\"");
            detail::expect(got == oracle::rewrite(spec, w),
                           "markup spec #" + std::to_string(i) + " disagrees with oracle on \"" +
                               detail::show(t, w) + "\"");
            oracle::Word stripped;
            for (SymbolId s : *got.begin())
                if (s != p && s != q) stripped.push_back(s);
            detail::expect(stripped == w, "stripping markup must recover \"" +
                                              detail::show(t, w) + "\"");
        }
    }
}

// ---------------------------------------------------------------------------

inline int run(const Options& opt, std::ostream& out) {
    detail::CorpusResult corpus;
    auto with_corpus = [&](auto fn) {
        return [&, fn] {
            if (!corpus.done) detail::run_corpus(opt, corpus);
            fn(opt, corpus);
        };
    };
    std::vector<std::pair<std::string, std::function<void()>>> checks{
        {"simple-replace-four-results", [&] { check_simple_replace(opt); }},
        {"directed-unique-functional", [&] { check_directed_unique(opt); }},
        {"nonsequential-aplus-b", [&] { check_nonsequential(opt); }},
        {"markup-dannvaan", [&] { check_markup_np(opt); }},
        {"positive-negative-filters", [&] { check_filters(opt); }},
        {"np-vp-parser", [&] { check_np_vp(opt); }},
        {"parallel-replacement", [&] { check_parallel(opt); }},
        {"tokenizer-multiwords", [&] { check_tokenizer(opt); }},
        {"oracle-equivalence-200", with_corpus(check_corpus_equiv)},
        {"unambiguity-property", with_corpus(check_corpus_unambiguous)},
        {"algebra-invariants", [&] { check_algebra(opt); }},
        {"markup-inverse-property", [&] { check_markup_inverse(opt); }},
    };
    int failures = 0, ran = 0;
    for (auto& [name, fn] : checks) {
        if (!opt.filter.empty() && name.find(opt.filter) == std::string::npos) continue;
        ++ran;
        try {
            fn();
            out << "PASS  " << name << "\n";
        } catch (const std::exception& e) {
            ++failures;
            out << "FAIL  " << name << ": " << e.what() << "\n";
        }
    }
    out << (failures ? "FAILED " : "OK ") << ran - failures << "/" << ran << " checks\n";
    return failures ? 1 : 0;
}

}  // namespace fsc::selftest

#endif
