#ifndef FSC_APPLY_HPP
#define FSC_APPLY_HPP

// Application of a network to text: greedy symbol tokenization of raw input
// against the network alphabet, apply down/up, and line-buffered stream
// transduction for functional transducers.

#include <algorithm>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <fsc/network.hpp>
#include <fsc/symbols.hpp>

namespace fsc {

struct InputTokenization {
    std::vector<SymbolId> symbols;
    std::vector<std::string> rendered;  // raw text per symbol; concatenation == input
};

// Greedy longest-match segmentation of `text` into names of net.sigma.
// Characters matching no alphabet symbol become fresh symbols outside sigma,
// which application binds to OTHER arcs.
inline InputTokenization tokenize_input(const Network& net, SymbolTable& table,
                                        const std::string& text) {
    std::vector<std::pair<std::string, SymbolId>> names;
    for (SymbolId s : net.sigma) {
        if (s.raw < FIRST_USER_SYMBOL) continue;
        names.emplace_back(table.name(s), s);
    }
    std::sort(names.begin(), names.end(),
              [](auto& a, auto& b) { return a.first.size() > b.first.size(); });
    InputTokenization out;
    std::size_t i = 0;
    while (i < text.size()) {
        bool hit = false;
        for (auto& [nm, id] : names) {
            if (!nm.empty() && text.compare(i, nm.size(), nm) == 0) {
                out.symbols.push_back(id);
                out.rendered.push_back(nm);
                i += nm.size();
                hit = true;
                break;
            }
        }
        if (hit) continue;
        std::size_t j = i + 1;
        while (j < text.size() && (static_cast<unsigned char>(text[j]) & 0xC0) == 0x80) ++j;
        std::string ch = text.substr(i, j - i);
        out.symbols.push_back(table.intern_any(ch));
        out.rendered.push_back(ch);
        i = j;
    }
    return out;
}

// One output symbol: the network symbol plus the raw text it was bound to
// (nonempty only for input characters carried through OTHER/UNKNOWN arcs).
struct OutSym {
    SymbolId id;
    std::string raw;
    auto operator<=>(const OutSym&) const = default;
};

using OutWord = std::vector<OutSym>;

struct ApplyResult {
    std::vector<std::string> outputs;  // rendered, sorted
    std::vector<OutWord> words;        // same order, symbol level
    bool truncated = false;
};

using RenderMap = std::map<std::string, std::string>;

namespace detail {

struct Applier {
    const Network& net;
    const InputTokenization& in;
    std::size_t limit;
    std::set<OutWord> found;
    bool truncated = false;

    bool known(SymbolId s) const { return net.sigma.count(s) != 0; }

    void walk(std::uint32_t q, std::size_t pos, OutWord& out,
              std::set<std::pair<std::uint32_t, std::size_t>>& eps_guard) {
        if (found.size() > limit) {
            truncated = true;
            return;
        }
        if (pos == in.symbols.size() && net.is_final(q)) found.insert(out);
        for (const Arc& a : net.states[q]) {
            if (a.upper == EPSILON) {
                auto key = std::make_pair(a.target, pos);
                if (eps_guard.count(key)) continue;
                eps_guard.insert(key);
                std::size_t n = emit(a.lower, EPSILON, "", out);
                walk(a.target, pos, out, eps_guard);
                out.resize(out.size() - n);
                eps_guard.erase(key);
                continue;
            }
            if (pos >= in.symbols.size()) continue;
            SymbolId s = in.symbols[pos];
            bool matches = a.upper == s && s != OTHER && s != UNKNOWN;
            bool wild = !known(s) && (a.upper == OTHER || a.upper == UNKNOWN);
            if (!matches && !wild) continue;
            std::set<std::pair<std::uint32_t, std::size_t>> fresh{{a.target, pos + 1}};
            std::size_t n = emit(a.lower, wild ? s : EPSILON,
                                 wild ? in.rendered[pos] : "", out);
            walk(a.target, pos + 1, out, fresh);
            out.resize(out.size() - n);
        }
    }

    // Returns the number of symbols appended (0 for an epsilon output).
    // Unknown-side outputs are resolved to the input symbol they bound to.
    std::size_t emit(SymbolId lower, SymbolId bound_sym, const std::string& bound,
                     OutWord& out) {
        if (lower == EPSILON) return 0;
        if ((lower == OTHER || lower == UNKNOWN) && bound_sym != EPSILON)
            out.push_back(OutSym{bound_sym, bound});
        else if (lower == OTHER || lower == UNKNOWN)
            out.push_back(OutSym{lower, ""});
        else
            out.push_back(OutSym{lower, ""});
        return 1;
    }
};

}  // namespace detail

inline std::string render_word(const OutWord& w, const SymbolTable& table,
                               const RenderMap& render = {}) {
    std::string s;
    for (const OutSym& o : w) {
        if (!o.raw.empty()) {
            s += o.raw;
            continue;
        }
        std::string nm = table.name(o.id);
        auto it = render.find(nm);
        s += it != render.end() ? it->second : nm;
    }
    return s;
}

inline ApplyResult apply_down(const Network& net, const SymbolTable& table,
                              const InputTokenization& input, std::size_t limit = 1000,
                              const RenderMap& render = {}) {
    detail::Applier ap{net, input, limit};
    OutWord out;
    std::set<std::pair<std::uint32_t, std::size_t>> guard{{net.start, 0}};
    if (!net.states.empty()) ap.walk(net.start, 0, out, guard);
    ApplyResult res;
    res.truncated = ap.truncated || ap.found.size() > limit;
    std::size_t n = 0;
    for (auto& w : ap.found) {
        if (n++ == limit) break;
        res.words.push_back(w);
        res.outputs.push_back(render_word(w, table, render));
    }
    std::sort(res.outputs.begin(), res.outputs.end());
    return res;
}

inline ApplyResult apply_up(const Network& net, const SymbolTable& table,
                            const InputTokenization& input, std::size_t limit = 1000,
                            const RenderMap& render = {}) {
    return apply_down(inverse(net), table, input, limit, render);
}

// ---------------------------------------------------------------------------
// Line-buffered stream transduction. The network must be functional on every
// chunk; anything else is a rule bug surfaced as AmbiguousOutput.

struct StreamStats {
    std::size_t chunks = 0;
    std::size_t symbols_in = 0;
    std::size_t symbols_out = 0;
};

inline StreamStats transduce_stream(const Network& net, SymbolTable& table,
                                    std::istream& in, std::ostream& out,
                                    const RenderMap& render = {}) {
    StreamStats st;
    std::string line;
    while (std::getline(in, line)) {
        InputTokenization tok = tokenize_input(net, table, line);
        ApplyResult r = apply_down(net, table, tok, 2, render);
        if (r.outputs.size() != 1)
            throw Error(ErrorKind::AmbiguousOutput,
                        "network is not a function on chunk " +
                            std::to_string(st.chunks + 1) + " (" +
                            std::to_string(r.truncated ? 2 : r.outputs.size()) + " outputs)");
        out << r.outputs[0] << '\n';
        ++st.chunks;
        st.symbols_in += tok.symbols.size();
        st.symbols_out += r.words[0].size();
    }
    return st;
}

}  // namespace fsc

#endif
