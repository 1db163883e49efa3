#ifndef FSC_NETWORK_HPP
#define FSC_NETWORK_HPP

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <set>
#include <span>
#include <tuple>
#include <utility>
#include <vector>

#include <fsc/error.hpp>
#include <fsc/symbols.hpp>

namespace fsc {

struct Arc {
    SymbolId upper;
    SymbolId lower;
    std::uint32_t target;
    friend auto operator<=>(const Arc&, const Arc&) = default;
};

// A finite-state transducer. Automata are the special case where every arc
// is an identity pair. Networks are immutable once built by the operations
// below; every operation returns a fresh network.
struct Network {
    std::vector<std::vector<Arc>> states;  // arcs per state, kept sorted
    std::vector<char> finals;
    std::uint32_t start = 0;
    std::set<SymbolId> sigma;  // declared alphabet; never EPSILON/OTHER/UNKNOWN
    bool deterministic = false;
    bool minimized = false;

    std::uint32_t add_state(bool fin = false) {
        states.emplace_back();
        finals.push_back(fin ? 1 : 0);
        return static_cast<std::uint32_t>(states.size() - 1);
    }

    void add_arc(std::uint32_t src, SymbolId up, SymbolId low, std::uint32_t dst) {
        states[src].push_back(Arc{up, low, dst});
        if (!is_reserved(up) || up == CARET || up == LBRACKET || up == RBRACKET || up == BOUNDARY)
            sigma.insert(up);
        if (!is_reserved(low) || low == CARET || low == LBRACKET || low == RBRACKET || low == BOUNDARY)
            sigma.insert(low);
    }

    bool is_final(std::uint32_t s) const { return finals[s] != 0; }
    void set_final(std::uint32_t s, bool f = true) { finals[s] = f ? 1 : 0; }

    std::size_t state_count() const { return states.size(); }
    std::size_t arc_count() const {
        std::size_t n = 0;
        for (auto& a : states) n += a.size();
        return n;
    }

    bool is_automaton() const {
        for (auto& arcs : states)
            for (auto& a : arcs)
                if (a.upper != a.lower || a.upper == UNKNOWN) return false;
        return true;
    }

    void sort_arcs() {
        for (auto& arcs : states) {
            std::sort(arcs.begin(), arcs.end());
            arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());
        }
    }
};

inline void require_automaton(const Network& n, const char* op) {
    if (!n.is_automaton())
        throw Error(ErrorKind::NotAnAutomaton,
                    std::string(op) + " is only defined on automata, not relations");
}

// ---------------------------------------------------------------------------
// Construction primitives

inline Network empty_network() {
    Network n;
    n.add_state(false);
    n.deterministic = true;
    n.minimized = true;
    return n;
}

inline Network atom(SymbolId upper, SymbolId lower) {
    if (upper == BOUNDARY && lower == BOUNDARY)
        throw Error(ErrorKind::SyntaxError, ".#. is only meaningful at a context edge");
    Network n;
    n.add_state(false);
    n.add_state(true);
    if (upper == EPSILON && lower == EPSILON) {
        // atom(0,0): the empty-string language, a single final state
        n = Network{};
        n.add_state(true);
        n.deterministic = true;
        return n;
    }
    n.add_arc(0, upper, lower, 1);
    n.deterministic = true;
    return n;
}

inline Network atom(SymbolId s) { return atom(s, s); }

// Used internally for context anchors only.
inline Network boundary_atom() {
    Network n;
    n.add_state(false);
    n.add_state(true);
    n.add_arc(0, BOUNDARY, BOUNDARY, 1);
    n.deterministic = true;
    return n;
}

inline Network empty_string_language() { return atom(EPSILON, EPSILON); }

// One final state with an OTHER self-loop plus identity loops over `extra`.
// Denotes ?* relative to the given alphabet.
inline Network universal_language(const std::set<SymbolId>& extra = {}) {
    Network n;
    n.add_state(true);
    n.add_arc(0, OTHER, OTHER, 0);
    for (SymbolId s : extra) n.add_arc(0, s, s, 0);
    return n;
}

// Identity on single symbols: every symbol of `include` plus OTHER, except
// those in `exclude`. Excluded symbols are still added to sigma so that the
// OTHER arc does not cover them.
inline Network any_symbol_except(const std::set<SymbolId>& include,
                                 const std::set<SymbolId>& exclude) {
    Network n;
    n.add_state(false);
    n.add_state(true);
    n.add_arc(0, OTHER, OTHER, 1);
    for (SymbolId s : include)
        if (!exclude.count(s)) n.add_arc(0, s, s, 1);
    n.sigma.insert(exclude.begin(), exclude.end());
    n.sigma.insert(include.begin(), include.end());
    return n;
}

// Identity loop over all symbols except `exclude`; ?* restricted away from
// the excluded symbols.
inline Network copy_free_of(const std::set<SymbolId>& include,
                            const std::set<SymbolId>& exclude) {
    Network n;
    n.add_state(true);
    n.add_arc(0, OTHER, OTHER, 0);
    for (SymbolId s : include)
        if (!exclude.count(s)) n.add_arc(0, s, s, 0);
    n.sigma.insert(exclude.begin(), exclude.end());
    n.sigma.insert(include.begin(), include.end());
    return n;
}

// ---------------------------------------------------------------------------
// Harmonization of OTHER across alphabets

namespace detail {

// Make `n` equivalent over sigma extended with `added`: every arc involving
// OTHER/UNKNOWN is supplemented with explicit arcs for each newly known
// symbol. Symbols are folded in one at a time so that pairs of new symbols
// are also covered on UNKNOWN:UNKNOWN arcs.
inline void extend_sigma(Network& n, const std::set<SymbolId>& added) {
    for (SymbolId s : added) {
        if (n.sigma.count(s) || is_reserved(s)) {
            if (s != CARET && s != LBRACKET && s != RBRACKET && s != BOUNDARY) continue;
            if (n.sigma.count(s)) continue;
        }
        for (auto& arcs : n.states) {
            std::size_t count = arcs.size();
            for (std::size_t i = 0; i < count; ++i) {
                Arc a = arcs[i];
                if (a.upper == OTHER && a.lower == OTHER) {
                    arcs.push_back(Arc{s, s, a.target});
                } else if (a.upper == UNKNOWN && a.lower == UNKNOWN) {
                    arcs.push_back(Arc{s, UNKNOWN, a.target});
                    arcs.push_back(Arc{UNKNOWN, s, a.target});
                    arcs.push_back(Arc{s, s, a.target});
                } else if (a.upper == UNKNOWN) {
                    arcs.push_back(Arc{s, a.lower, a.target});
                } else if (a.lower == UNKNOWN) {
                    arcs.push_back(Arc{a.upper, s, a.target});
                }
            }
        }
        n.sigma.insert(s);
    }
    n.sort_arcs();
}

}  // namespace detail

inline std::pair<Network, Network> harmonize(const Network& a, const Network& b) {
    if (a.sigma == b.sigma) return {a, b};
    Network ha = a, hb = b;
    detail::extend_sigma(ha, b.sigma);
    detail::extend_sigma(hb, a.sigma);
    ha.deterministic = a.deterministic;
    hb.deterministic = b.deterministic;
    ha.minimized = hb.minimized = false;
    return {ha, hb};
}

// ---------------------------------------------------------------------------
// Pruning: drop states not on a path from start to a final state.

inline Network prune(const Network& n) {
    std::size_t ns = n.state_count();
    std::vector<char> fwd(ns, 0), bwd(ns, 0);
    // forward reachability
    std::deque<std::uint32_t> q{n.start};
    fwd[n.start] = 1;
    while (!q.empty()) {
        auto s = q.front();
        q.pop_front();
        for (auto& a : n.states[s])
            if (!fwd[a.target]) {
                fwd[a.target] = 1;
                q.push_back(a.target);
            }
    }
    // backward from finals
    std::vector<std::vector<std::uint32_t>> rev(ns);
    for (std::uint32_t s = 0; s < ns; ++s)
        for (auto& a : n.states[s]) rev[a.target].push_back(s);
    for (std::uint32_t s = 0; s < ns; ++s)
        if (n.is_final(s) && fwd[s]) {
            bwd[s] = 1;
            q.push_back(s);
        }
    while (!q.empty()) {
        auto s = q.front();
        q.pop_front();
        for (auto p : rev[s])
            if (fwd[p] && !bwd[p]) {
                bwd[p] = 1;
                q.push_back(p);
            }
    }
    std::vector<std::uint32_t> remap(ns, UINT32_MAX);
    Network out;
    out.sigma = n.sigma;
    for (std::uint32_t s = 0; s < ns; ++s)
        if (fwd[s] && bwd[s]) remap[s] = out.add_state(n.is_final(s));
    if (remap[n.start] == UINT32_MAX) {
        // empty language
        Network e = empty_network();
        e.sigma = n.sigma;
        return e;
    }
    // remap with start first
    if (remap[n.start] != 0) {
        // rebuild with start at index 0 for canonical numbering
        std::vector<std::uint32_t> order;
        order.push_back(n.start);
        std::vector<char> seen(ns, 0);
        seen[n.start] = 1;
        for (std::uint32_t s = 0; s < ns; ++s)
            if (remap[s] != UINT32_MAX && !seen[s]) order.push_back(s);
        Network out2;
        out2.sigma = n.sigma;
        std::vector<std::uint32_t> remap2(ns, UINT32_MAX);
        for (auto s : order) remap2[s] = out2.add_state(n.is_final(s));
        for (auto s : order)
            for (auto& a : n.states[s])
                if (remap2[a.target] != UINT32_MAX)
                    out2.states[remap2[s]].push_back(Arc{a.upper, a.lower, remap2[a.target]});
        out2.start = 0;
        out2.sort_arcs();
        out2.deterministic = n.deterministic;
        return out2;
    }
    for (std::uint32_t s = 0; s < ns; ++s) {
        if (remap[s] == UINT32_MAX) continue;
        for (auto& a : n.states[s])
            if (remap[a.target] != UINT32_MAX)
                out.states[remap[s]].push_back(Arc{a.upper, a.lower, remap[a.target]});
    }
    out.start = remap[n.start];
    out.sort_arcs();
    out.deterministic = n.deterministic;
    return out;
}

// ---------------------------------------------------------------------------
// Rational operations (Thompson style, epsilon-pair glue)

inline Network union_net(const Network& a0, const Network& b0) {
    auto [a, b] = harmonize(a0, b0);
    Network n;
    n.sigma = a.sigma;
    std::uint32_t st = n.add_state(false);
    std::uint32_t offa = static_cast<std::uint32_t>(n.state_count());
    for (std::uint32_t s = 0; s < a.state_count(); ++s) n.add_state(a.is_final(s));
    std::uint32_t offb = static_cast<std::uint32_t>(n.state_count());
    for (std::uint32_t s = 0; s < b.state_count(); ++s) n.add_state(b.is_final(s));
    for (std::uint32_t s = 0; s < a.state_count(); ++s)
        for (auto& arc : a.states[s])
            n.states[offa + s].push_back(Arc{arc.upper, arc.lower, offa + arc.target});
    for (std::uint32_t s = 0; s < b.state_count(); ++s)
        for (auto& arc : b.states[s])
            n.states[offb + s].push_back(Arc{arc.upper, arc.lower, offb + arc.target});
    n.states[st].push_back(Arc{EPSILON, EPSILON, offa + a.start});
    n.states[st].push_back(Arc{EPSILON, EPSILON, offb + b.start});
    n.start = st;
    n.sort_arcs();
    return prune(n);
}

inline Network concat(const Network& a0, const Network& b0) {
    auto [a, b] = harmonize(a0, b0);
    Network n;
    n.sigma = a.sigma;
    for (std::uint32_t s = 0; s < a.state_count(); ++s) n.add_state(false);
    std::uint32_t offb = static_cast<std::uint32_t>(n.state_count());
    for (std::uint32_t s = 0; s < b.state_count(); ++s) n.add_state(b.is_final(s));
    for (std::uint32_t s = 0; s < a.state_count(); ++s)
        for (auto& arc : a.states[s])
            n.states[s].push_back(Arc{arc.upper, arc.lower, arc.target});
    for (std::uint32_t s = 0; s < b.state_count(); ++s)
        for (auto& arc : b.states[s])
            n.states[offb + s].push_back(Arc{arc.upper, arc.lower, offb + arc.target});
    for (std::uint32_t s = 0; s < a.state_count(); ++s)
        if (a.is_final(s)) n.states[s].push_back(Arc{EPSILON, EPSILON, offb + b.start});
    n.start = a.start;
    n.sort_arcs();
    return prune(n);
}

inline Network star(const Network& a) {
    Network n;
    n.sigma = a.sigma;
    std::uint32_t st = n.add_state(true);
    for (std::uint32_t s = 0; s < a.state_count(); ++s) n.add_state(a.is_final(s));
    for (std::uint32_t s = 0; s < a.state_count(); ++s)
        for (auto& arc : a.states[s])
            n.states[1 + s].push_back(Arc{arc.upper, arc.lower, 1 + arc.target});
    n.states[st].push_back(Arc{EPSILON, EPSILON, 1 + a.start});
    for (std::uint32_t s = 0; s < a.state_count(); ++s)
        if (a.is_final(s)) n.states[1 + s].push_back(Arc{EPSILON, EPSILON, st});
    n.start = st;
    n.sort_arcs();
    return prune(n);
}

inline Network plus(const Network& a) { return concat(a, star(a)); }

inline Network optional(const Network& a) { return union_net(a, empty_string_language()); }

inline Network reverse(const Network& a) {
    Network n;
    n.sigma = a.sigma;
    std::uint32_t st = n.add_state(false);
    for (std::uint32_t s = 0; s < a.state_count(); ++s) n.add_state(false);
    n.set_final(1 + a.start, true);
    for (std::uint32_t s = 0; s < a.state_count(); ++s)
        for (auto& arc : a.states[s])
            n.states[1 + arc.target].push_back(Arc{arc.upper, arc.lower, 1 + s});
    for (std::uint32_t s = 0; s < a.state_count(); ++s)
        if (a.is_final(s)) n.states[st].push_back(Arc{EPSILON, EPSILON, 1 + s});
    n.start = st;
    n.sort_arcs();
    return prune(n);
}

inline Network inverse(const Network& a) {
    Network n = a;
    for (auto& arcs : n.states)
        for (auto& arc : arcs) std::swap(arc.upper, arc.lower);
    n.sort_arcs();
    n.deterministic = false;
    n.minimized = false;
    return n;
}

enum class Side { Upper, Lower };

inline Network project(const Network& a, Side side) {
    Network n = a;
    for (auto& arcs : n.states)
        for (auto& arc : arcs) {
            SymbolId s = side == Side::Upper ? arc.upper : arc.lower;
            if (s == UNKNOWN) s = OTHER;
            arc.upper = arc.lower = s;
        }
    n.sort_arcs();
    n.deterministic = false;
    n.minimized = false;
    return n;
}

// ---------------------------------------------------------------------------
// Determinization and minimization over pair labels

namespace detail {

inline std::vector<std::uint32_t> eps_closure(const Network& n,
                                              std::vector<std::uint32_t> seed) {
    std::vector<char> in(n.state_count(), 0);
    std::deque<std::uint32_t> q;
    for (auto s : seed)
        if (!in[s]) {
            in[s] = 1;
            q.push_back(s);
        }
    std::vector<std::uint32_t> out;
    while (!q.empty()) {
        auto s = q.front();
        q.pop_front();
        out.push_back(s);
        for (auto& a : n.states[s])
            if (a.upper == EPSILON && a.lower == EPSILON && !in[a.target]) {
                in[a.target] = 1;
                q.push_back(a.target);
            }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace detail

// Subset construction over whole pair labels; the result has no
// epsilon-pair arcs and at most one transition per (upper,lower) label.
inline Network determinize(const Network& n) {
    using Subset = std::vector<std::uint32_t>;
    std::map<Subset, std::uint32_t> ids;
    Network out;
    out.sigma = n.sigma;
    std::deque<Subset> work;
    auto intern_subset = [&](Subset s) -> std::uint32_t {
        auto it = ids.find(s);
        if (it != ids.end()) return it->second;
        bool fin = false;
        for (auto q : s)
            if (n.is_final(q)) fin = true;
        std::uint32_t id = out.add_state(fin);
        ids.emplace(s, id);
        work.push_back(std::move(s));
        return id;
    };
    intern_subset(detail::eps_closure(n, {n.start}));
    out.start = 0;
    while (!work.empty()) {
        Subset cur = work.front();
        work.pop_front();
        std::uint32_t curid = ids[cur];
        std::map<std::pair<SymbolId, SymbolId>, Subset> moves;
        for (auto q : cur)
            for (auto& a : n.states[q]) {
                if (a.upper == EPSILON && a.lower == EPSILON) continue;
                moves[{a.upper, a.lower}].push_back(a.target);
            }
        for (auto& [label, tgts] : moves) {
            Subset t = detail::eps_closure(n, tgts);
            std::uint32_t tid = intern_subset(std::move(t));
            out.states[curid].push_back(Arc{label.first, label.second, tid});
        }
    }
    out.sort_arcs();
    out.deterministic = true;
    return prune(out);
}

// Moore partition refinement on the determinized network; canonical BFS
// numbering so equal relations over equal sigmas yield identical nets
// (for automata this is the minimal DFA up to isomorphism).
inline Network minimize(const Network& n0) {
    Network d = n0.deterministic ? prune(n0) : determinize(n0);
    std::size_t ns = d.state_count();
    if (ns <= 1) {
        d.minimized = true;
        return d;
    }
    std::vector<std::uint32_t> block(ns);
    bool any_final = false, any_nonfinal = false;
    for (std::uint32_t s = 0; s < ns; ++s) {
        block[s] = d.is_final(s) ? 1 : 0;
        (d.is_final(s) ? any_final : any_nonfinal) = true;
    }
    std::size_t nblocks = any_final && any_nonfinal ? 2 : 1;
    for (;;) {
        std::map<std::vector<std::uint32_t>, std::uint32_t> sig_ids;
        std::vector<std::uint32_t> next(ns);
        for (std::uint32_t s = 0; s < ns; ++s) {
            std::vector<std::uint32_t> sig{block[s]};
            for (auto& a : d.states[s]) {
                sig.push_back(a.upper.raw);
                sig.push_back(a.lower.raw);
                sig.push_back(block[a.target]);
            }
            auto [it, fresh] = sig_ids.emplace(std::move(sig),
                                               static_cast<std::uint32_t>(sig_ids.size()));
            next[s] = it->second;
        }
        if (sig_ids.size() == nblocks) {
            block = next;
            break;
        }
        nblocks = sig_ids.size();
        block = next;
    }
    // one representative per block, BFS order from start's block
    std::vector<std::int64_t> rep(nblocks, -1);
    for (std::uint32_t s = 0; s < ns; ++s)
        if (rep[block[s]] < 0) rep[block[s]] = s;
    Network out;
    out.sigma = d.sigma;
    std::vector<std::int64_t> newid(nblocks, -1);
    std::deque<std::uint32_t> q{block[d.start]};
    newid[block[d.start]] = out.add_state(d.is_final(d.start));
    while (!q.empty()) {
        auto b = q.front();
        q.pop_front();
        auto s = static_cast<std::uint32_t>(rep[b]);
        for (auto& a : d.states[s]) {
            auto tb = block[a.target];
            if (newid[tb] < 0) {
                newid[tb] = out.add_state(d.is_final(a.target));
                q.push_back(tb);
            }
        }
    }
    for (std::uint32_t b = 0; b < nblocks; ++b) {
        if (newid[b] < 0) continue;
        auto s = static_cast<std::uint32_t>(rep[b]);
        for (auto& a : d.states[s])
            out.states[newid[b]].push_back(
                Arc{a.upper, a.lower, static_cast<std::uint32_t>(newid[block[a.target]])});
    }
    out.start = 0;
    out.sort_arcs();
    out.deterministic = true;
    out.minimized = true;
    return prune(out);
}

// ---------------------------------------------------------------------------
// Boolean operations (automata only)

namespace detail {

// Complete a deterministic automaton with a sink over sigma + OTHER.
inline void complete_dfa(Network& d) {
    std::uint32_t sink = UINT32_MAX;
    auto ensure_sink = [&]() {
        if (sink == UINT32_MAX) {
            sink = d.add_state(false);
            d.states[sink].push_back(Arc{OTHER, OTHER, sink});
            for (SymbolId s : d.sigma) d.states[sink].push_back(Arc{s, s, sink});
        }
        return sink;
    };
    std::size_t ns = d.state_count();
    for (std::uint32_t s = 0; s < ns; ++s) {
        std::set<SymbolId> have;
        for (auto& a : d.states[s]) have.insert(a.upper);
        if (!have.count(OTHER)) {
            std::uint32_t t = ensure_sink();  // may reallocate d.states
            d.states[s].push_back(Arc{OTHER, OTHER, t});
        }
        for (SymbolId sym : d.sigma)
            if (!have.count(sym)) {
                std::uint32_t t = ensure_sink();
                d.states[s].push_back(Arc{sym, sym, t});
            }
    }
    d.sort_arcs();
}

}  // namespace detail

inline Network complement(const Network& a) {
    require_automaton(a, "complement");
    Network d = determinize(a);
    detail::complete_dfa(d);
    for (std::uint32_t s = 0; s < d.state_count(); ++s) d.set_final(s, !d.is_final(s));
    return minimize(d);
}

inline Network intersect(const Network& a0, const Network& b0) {
    require_automaton(a0, "intersection");
    require_automaton(b0, "intersection");
    auto [ah, bh] = harmonize(a0, b0);
    Network a = determinize(ah), b = determinize(bh);
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> ids;
    Network out;
    out.sigma = a.sigma;
    std::deque<std::pair<std::uint32_t, std::uint32_t>> work;
    auto intern_pair = [&](std::uint32_t p, std::uint32_t q) {
        auto it = ids.find({p, q});
        if (it != ids.end()) return it->second;
        std::uint32_t id = out.add_state(a.is_final(p) && b.is_final(q));
        ids.emplace(std::make_pair(p, q), id);
        work.emplace_back(p, q);
        return id;
    };
    intern_pair(a.start, b.start);
    while (!work.empty()) {
        auto [p, q] = work.front();
        work.pop_front();
        std::uint32_t cur = ids[{p, q}];
        for (auto& aa : a.states[p])
            for (auto& ba : b.states[q])
                if (aa.upper == ba.upper) {
                    std::uint32_t t = intern_pair(aa.target, ba.target);  // may reallocate
                    out.states[cur].push_back(Arc{aa.upper, aa.lower, t});
                }
    }
    out.sort_arcs();
    out.deterministic = true;
    return minimize(out);
}

inline Network difference(const Network& a0, const Network& b0) {
    require_automaton(a0, "difference");
    require_automaton(b0, "difference");
    auto [ah, bh] = harmonize(a0, b0);
    return intersect(ah, complement(bh));
}

inline Network contains(const Network& a) {
    require_automaton(a, "contains ($)");
    return concat(concat(universal_language(), a), universal_language());
}

enum class IgnoreMode { Everywhere, Nonfinal };

inline Network ignore(const Network& a, const std::set<SymbolId>& syms,
                      IgnoreMode mode = IgnoreMode::Everywhere) {
    require_automaton(a, "ignore (/)");
    Network n = a;
    for (std::uint32_t s = 0; s < n.state_count(); ++s)
        for (SymbolId sym : syms) n.states[s].push_back(Arc{sym, sym, s});
    n.sigma.insert(syms.begin(), syms.end());
    n.sort_arcs();
    n.deterministic = false;
    n.minimized = false;
    if (mode == IgnoreMode::Nonfinal && !syms.empty()) {
        Network anysym = empty_network();
        bool first = true;
        for (SymbolId sym : syms) {
            Network at = atom(sym);
            anysym = first ? at : union_net(anysym, at);
            first = false;
        }
        Network ends_with = concat(universal_language(), anysym);
        n = difference(n, ends_with);
    }
    return minimize(n);
}

// ---------------------------------------------------------------------------
// Crossproduct and composition

inline Network crossproduct(const Network& a0, const Network& b0) {
    require_automaton(a0, "crossproduct (.x.)");
    require_automaton(b0, "crossproduct (.x.)");
    auto [a, b] = harmonize(a0, b0);
    // Interleave upper-side moves of a with lower-side moves of b; the
    // relation is the full cartesian product of the two languages.
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> ids;
    Network out;
    out.sigma = a.sigma;
    std::deque<std::pair<std::uint32_t, std::uint32_t>> work;
    auto intern_pair = [&](std::uint32_t p, std::uint32_t q) {
        auto it = ids.find({p, q});
        if (it != ids.end()) return it->second;
        std::uint32_t id = out.add_state(a.is_final(p) && b.is_final(q));
        ids.emplace(std::make_pair(p, q), id);
        work.emplace_back(p, q);
        return id;
    };
    intern_pair(a.start, b.start);
    auto as_unknown = [](SymbolId s) { return s == OTHER ? UNKNOWN : s; };
    while (!work.empty()) {
        auto [p, q] = work.front();
        work.pop_front();
        std::uint32_t cur = ids[{p, q}];
        for (auto& aa : a.states[p]) {
            SymbolId up = aa.upper == EPSILON ? EPSILON : as_unknown(aa.upper);
            std::uint32_t t = intern_pair(aa.target, q);  // may reallocate out.states
            out.states[cur].push_back(Arc{up, EPSILON, t});
        }
        for (auto& ba : b.states[q]) {
            SymbolId low = ba.lower == EPSILON ? EPSILON : as_unknown(ba.lower);
            std::uint32_t t = intern_pair(p, ba.target);
            out.states[cur].push_back(Arc{EPSILON, low, t});
        }
    }
    out.sort_arcs();
    return prune(out);
}

namespace detail {

// Label matching on the shared middle tape of a composition. Both sides are
// harmonized beforehand, so OTHER/UNKNOWN denote the same symbol set.
// Returns true and the composed label when the middle symbols can agree.
inline bool compose_labels(const Arc& a, const Arc& b, SymbolId& up, SymbolId& low) {
    SymbolId m1 = a.lower, m2 = b.upper;
    if (m1 == EPSILON || m2 == EPSILON) return false;  // handled as one-sided moves
    bool un1 = (m1 == OTHER || m1 == UNKNOWN);
    bool un2 = (m2 == OTHER || m2 == UNKNOWN);
    if (!un1 && !un2) {
        if (m1 != m2) return false;
        up = a.upper;
        low = b.lower;
        return true;
    }
    if (un1 && un2) {
        // middle symbol is some unknown
        if (m1 == OTHER && m2 == OTHER) {
            up = a.upper;  // OTHER
            low = b.lower;
            return true;
        }
        up = (m1 == OTHER) ? UNKNOWN : a.upper;
        low = (m2 == OTHER) ? UNKNOWN : b.lower;
        if (up == OTHER) up = UNKNOWN;
        if (low == OTHER) low = UNKNOWN;
        return true;
    }
    return false;  // one concrete, one unknown: cannot denote the same symbol
}

}  // namespace detail

inline Network compose(const Network& a0, const Network& b0) {
    auto [a, b] = harmonize(a0, b0);
    // Three-way epsilon filter keeps one canonical interleaving of
    // one-sided epsilon moves.
    std::map<std::tuple<std::uint32_t, std::uint32_t, int>, std::uint32_t> ids;
    Network out;
    out.sigma = a.sigma;
    std::deque<std::tuple<std::uint32_t, std::uint32_t, int>> work;
    auto intern_triple = [&](std::uint32_t p, std::uint32_t q, int f) {
        auto key = std::make_tuple(p, q, f);
        auto it = ids.find(key);
        if (it != ids.end()) return it->second;
        std::uint32_t id = out.add_state(a.is_final(p) && b.is_final(q));
        ids.emplace(key, id);
        work.push_back(key);
        return id;
    };
    intern_triple(a.start, b.start, 0);
    while (!work.empty()) {
        auto [p, q, f] = work.front();
        work.pop_front();
        std::uint32_t cur = ids[{p, q, f}];
        for (auto& aa : a.states[p]) {
            if (aa.lower == EPSILON) {
                if (f != 2) {
                    std::uint32_t t = intern_triple(aa.target, q, 1);  // may reallocate
                    out.states[cur].push_back(Arc{aa.upper, EPSILON, t});
                }
                continue;
            }
            for (auto& ba : b.states[q]) {
                SymbolId up, low;
                if (ba.upper != EPSILON && detail::compose_labels(aa, ba, up, low)) {
                    std::uint32_t t = intern_triple(aa.target, ba.target, 0);
                    out.states[cur].push_back(Arc{up, low, t});
                }
            }
        }
        // b-side epsilon moves may follow a-side ones but not precede them
        // within one block, which keeps the interleaving unique.
        for (auto& ba : b.states[q]) {
            if (ba.upper == EPSILON) {
                std::uint32_t t = intern_triple(p, ba.target, 2);
                out.states[cur].push_back(Arc{EPSILON, ba.lower, t});
            }
        }
    }
    out.sort_arcs();
    return prune(out);
}

// ---------------------------------------------------------------------------
// Membership (upper-side NFA simulation; symbols outside sigma match OTHER)

inline bool accepts(const Network& n, std::span<const SymbolId> word) {
    auto cur = detail::eps_closure(n, {n.start});
    for (SymbolId sym : word) {
        std::vector<std::uint32_t> next;
        bool unknown = !n.sigma.count(sym) && !is_reserved(sym);
        for (auto s : cur)
            for (auto& a : n.states[s]) {
                if (a.upper == EPSILON) continue;
                if (a.upper == sym || (unknown && (a.upper == OTHER || a.upper == UNKNOWN)))
                    next.push_back(a.target);
            }
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        if (next.empty()) return false;
        cur = detail::eps_closure(n, next);
    }
    for (auto s : cur)
        if (n.is_final(s)) return true;
    return false;
}

}  // namespace fsc

#endif
