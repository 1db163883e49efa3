#ifndef FSC_TEST_HELPERS_HPP
#define FSC_TEST_HELPERS_HPP

// Shared helpers for the unit tests: compile a regex snippet, enumerate the
// language/relation of a network as plain strings, and run apply on text.

#include <set>
#include <string>
#include <utility>
#include <vector>

#include <fsc/apply.hpp>
#include <fsc/oracle.hpp>
#include <fsc/regex.hpp>

namespace t {

inline fsc::Network net(const std::string& expr, fsc::SymbolTable& table) {
    auto [defs, n] = fsc::load_program(expr + " ;", table);
    return n;
}

inline fsc::oracle::Word word(const std::string& chars, fsc::SymbolTable& table) {
    fsc::oracle::Word w;
    for (char c : chars) w.push_back(table.intern(std::string(1, c)));
    return w;
}

inline std::string render(const fsc::oracle::Word& w, const fsc::SymbolTable& table) {
    std::string s;
    for (fsc::SymbolId id : w) s += table.name(id);
    return s;
}

// The language of an automaton up to max_len, rendered. `probes` supplies
// instantiations for OTHER arcs.
inline std::set<std::string> lang(const fsc::Network& n, const fsc::SymbolTable& table,
                                  std::size_t max_len, const std::string& probes = "") {
    std::vector<fsc::SymbolId> ps;
    for (char c : probes)
        ps.push_back(const_cast<fsc::SymbolTable&>(table).intern(std::string(1, c)));
    std::set<std::string> out;
    for (auto& w : fsc::oracle::enumerate_strings(n, max_len, ps)) out.insert(render(w, table));
    return out;
}

// The relation of a network up to max_len per side, rendered as "u -> v".
inline std::set<std::string> pairs(const fsc::Network& n, const fsc::SymbolTable& table,
                                   std::size_t max_len, const std::string& probes = "") {
    std::vector<fsc::SymbolId> ps;
    for (char c : probes)
        ps.push_back(const_cast<fsc::SymbolTable&>(table).intern(std::string(1, c)));
    std::set<std::string> out;
    for (auto& [u, v] : fsc::oracle::enumerate_pairs(n, max_len, ps))
        out.insert(render(u, table) + " -> " + render(v, table));
    return out;
}

// Outputs of apply_down on raw text.
inline std::set<std::string> down(const fsc::Network& n, fsc::SymbolTable& table,
                                  const std::string& text) {
    fsc::InputTokenization tok = fsc::tokenize_input(n, table, text);
    fsc::ApplyResult r = fsc::apply_down(n, table, tok, 1000);
    return {r.outputs.begin(), r.outputs.end()};
}

inline bool accepts_str(const fsc::Network& n, fsc::SymbolTable& table,
                        const std::string& chars) {
    return fsc::accepts(n, word(chars, table));
}

// All strings over `alpha` with length <= max_len, shortest first.
inline std::vector<std::string> all_strings(const std::string& alpha, std::size_t max_len) {
    std::vector<std::string> cur{""}, out{""};
    for (std::size_t n = 1; n <= max_len; ++n) {
        std::vector<std::string> next;
        for (auto& s : cur)
            for (char c : alpha) next.push_back(s + c);
        out.insert(out.end(), next.begin(), next.end());
        cur = std::move(next);
    }
    return out;
}

}  // namespace t

#endif
