#ifndef FSC_ORACLE_HPP
#define FSC_ORACLE_HPP

// Brute-force reference implementations. These deliberately avoid the
// transducer constructions they are used to validate: matching is plain
// NFA simulation per position, rewriting is direct string surgery.

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <fsc/network.hpp>
#include <fsc/replace_spec.hpp>

namespace fsc::oracle {

using Word = std::vector<SymbolId>;
using WordPair = std::pair<Word, Word>;

// One factor of a directed factorization; spans tile [0, |w|).
struct MatchSpan {
    std::size_t start = 0;
    std::size_t end = 0;  // exclusive
    bool matched = false;
    friend auto operator<=>(const MatchSpan&, const MatchSpan&) = default;
};

namespace detail {

// All end offsets j such that w[i..j) is accepted by the automaton.
inline std::vector<std::size_t> match_ends(const Network& upper, std::span<const SymbolId> w,
                                           std::size_t i) {
    std::vector<std::size_t> ends;
    auto cur = fsc::detail::eps_closure(upper, {upper.start});
    auto has_final = [&](const std::vector<std::uint32_t>& ss) {
        for (auto s : ss)
            if (upper.is_final(s)) return true;
        return false;
    };
    if (has_final(cur)) ends.push_back(i);
    for (std::size_t j = i; j < w.size(); ++j) {
        SymbolId sym = w[j];
        bool unknown = !upper.sigma.count(sym) && !is_reserved(sym);
        std::vector<std::uint32_t> next;
        for (auto s : cur)
            for (auto& a : upper.states[s]) {
                if (a.upper == EPSILON) continue;
                if (a.upper == sym || (unknown && a.upper == OTHER)) next.push_back(a.target);
            }
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        if (next.empty()) return ends;
        cur = fsc::detail::eps_closure(upper, next);
        if (has_final(cur)) ends.push_back(j + 1);
    }
    return ends;
}

}  // namespace detail

// The directed factorization: scan per direction, pick the longest/shortest
// match at each point, copy one symbol where nothing matches.
inline std::vector<MatchSpan> match_spans(const Network& upper, std::span<const SymbolId> w,
                                          Direction dir, LengthMode len) {
    require_automaton(upper, "match_spans");
    if (accepts(upper, {}))
        throw Error(ErrorKind::EpsilonInUpper, "UPPER must not accept the empty string");
    std::vector<MatchSpan> spans;
    auto push_copy = [&](std::size_t i, std::size_t j) {
        if (i == j) return;
        spans.push_back(MatchSpan{i, j, false});
    };
    if (dir == Direction::LeftToRight) {
        std::size_t i = 0, copy_from = 0;
        while (i < w.size()) {
            auto ends = detail::match_ends(upper, w, i);
            std::erase(ends, i);  // nonempty matches only
            if (ends.empty()) {
                ++i;
                continue;
            }
            std::size_t j = (len == LengthMode::Longest) ? ends.back() : ends.front();
            push_copy(copy_from, i);
            spans.push_back(MatchSpan{i, j, true});
            i = copy_from = j;
        }
        push_copy(copy_from, w.size());
    } else {
        // mirror scan from the right: matches ending at j, preferring the
        // leftmost start (longest) or rightmost start (shortest)
        std::vector<MatchSpan> rev;
        std::size_t j = w.size(), copy_to = w.size();
        while (j > 0) {
            std::optional<std::size_t> best;
            for (std::size_t i = 0; i < j; ++i) {
                auto ends = detail::match_ends(upper, w, i);
                bool hit = std::find(ends.begin(), ends.end(), j) != ends.end();
                if (!hit) continue;
                if (!best) {
                    best = i;
                } else if (len == LengthMode::Longest) {
                    best = std::min(*best, i);
                } else {
                    best = std::max(*best, i);
                }
                if (len == LengthMode::Longest) break;  // first i found is leftmost
            }
            if (!best) {
                --j;
                continue;
            }
            if (j != copy_to) rev.push_back(MatchSpan{j, copy_to, false});
            rev.push_back(MatchSpan{*best, j, true});
            j = copy_to = *best;
        }
        if (copy_to != 0) rev.push_back(MatchSpan{0, copy_to, false});
        spans.assign(rev.rbegin(), rev.rend());
    }
    return spans;
}

// ---------------------------------------------------------------------------
// Language enumeration

// All strings of an automaton with length <= max_len. OTHER arcs are
// instantiated with each probe symbol outside the net's sigma.
inline std::set<Word> enumerate_strings(const Network& n, std::size_t max_len,
                                        std::span<const SymbolId> probes = {}) {
    require_automaton(n, "enumerate_strings");
    std::set<Word> out;
    std::set<std::pair<std::uint32_t, Word>> seen;
    std::vector<std::pair<std::uint32_t, Word>> stack{{n.start, {}}};
    while (!stack.empty()) {
        auto [s, u] = stack.back();
        stack.pop_back();
        if (!seen.insert({s, u}).second) continue;
        if (n.is_final(s)) out.insert(u);
        if (u.size() >= max_len) {
            // still follow epsilon arcs
            for (auto& a : n.states[s])
                if (a.upper == EPSILON) stack.push_back({a.target, u});
            continue;
        }
        for (auto& a : n.states[s]) {
            if (a.upper == EPSILON) {
                stack.push_back({a.target, u});
            } else if (a.upper == OTHER) {
                for (SymbolId p : probes)
                    if (!n.sigma.count(p)) {
                        Word v = u;
                        v.push_back(p);
                        stack.push_back({a.target, v});
                    }
            } else {
                Word v = u;
                v.push_back(a.upper);
                stack.push_back({a.target, v});
            }
        }
    }
    return out;
}

// All pairs of a relation with both sides <= max_len.
inline std::set<WordPair> enumerate_pairs(const Network& n, std::size_t max_len,
                                          std::span<const SymbolId> probes = {}) {
    std::set<WordPair> out;
    std::set<std::tuple<std::uint32_t, Word, Word>> seen;
    std::vector<std::tuple<std::uint32_t, Word, Word>> stack{{n.start, {}, {}}};
    auto fresh_probes = [&](std::vector<SymbolId>& dst) {
        for (SymbolId p : probes)
            if (!n.sigma.count(p)) dst.push_back(p);
    };
    std::vector<SymbolId> ps;
    fresh_probes(ps);
    while (!stack.empty()) {
        auto [s, u, v] = stack.back();
        stack.pop_back();
        if (!seen.insert({s, u, v}).second) continue;
        if (n.is_final(s)) out.insert({u, v});
        for (auto& a : n.states[s]) {
            bool grow_u = a.upper != EPSILON, grow_v = a.lower != EPSILON;
            if ((grow_u && u.size() >= max_len) || (grow_v && v.size() >= max_len)) continue;
            auto push = [&](SymbolId us, SymbolId ls) {
                Word nu = u, nv = v;
                if (us != EPSILON) nu.push_back(us);
                if (ls != EPSILON) nv.push_back(ls);
                stack.push_back({a.target, nu, nv});
            };
            if (a.upper == OTHER && a.lower == OTHER) {
                for (SymbolId p : ps) push(p, p);
            } else if (a.upper == UNKNOWN && a.lower == UNKNOWN) {
                for (SymbolId p : ps)
                    for (SymbolId q : ps) push(p, q);
            } else if (a.upper == UNKNOWN) {
                for (SymbolId p : ps) push(p, a.lower);
            } else if (a.lower == UNKNOWN) {
                for (SymbolId p : ps) push(a.upper, p);
            } else {
                push(a.upper, a.lower);
            }
        }
    }
    return out;
}

// Enumerates an action language fully; refuses if it has strings beyond the
// bound (the rewrite oracle needs the whole language).
inline std::set<Word> action_language(const Network& n, std::size_t bound = 12) {
    auto upto = enumerate_strings(n, bound + 1);
    for (auto& w : upto)
        if (w.size() > bound)
            throw Error(ErrorKind::ActionLanguageInfinite,
                        "action language exceeds the enumeration bound");
    return upto;
}

// ---------------------------------------------------------------------------
// Directed rewrite by direct string surgery

inline std::set<Word> rewrite(const ReplaceSpec& spec, std::span<const SymbolId> w,
                              std::size_t action_bound = 12) {
    auto spans = match_spans(spec.upper, w, spec.direction, spec.length);
    std::set<Word> outs{{}};
    auto extend_each = [&](const std::set<Word>& tails) {
        std::set<Word> next;
        for (auto& head : outs)
            for (auto& tail : tails) {
                Word joined = head;
                joined.insert(joined.end(), tail.begin(), tail.end());
                next.insert(joined);
            }
        outs = std::move(next);
    };
    std::set<Word> lower_lang, prefix_lang, suffix_lang;
    if (auto* la = std::get_if<LowerAction>(&spec.action)) {
        lower_lang = action_language(la->lower, action_bound);
    } else {
        auto& ma = std::get<MarkupAction>(spec.action);
        prefix_lang = action_language(ma.prefix, action_bound);
        suffix_lang = action_language(ma.suffix, action_bound);
    }
    for (auto& sp : spans) {
        Word piece(w.begin() + sp.start, w.begin() + sp.end);
        if (!sp.matched) {
            extend_each({piece});
        } else if (std::holds_alternative<LowerAction>(spec.action)) {
            extend_each(lower_lang);
        } else {
            std::set<Word> options;
            for (auto& p : prefix_lang)
                for (auto& s : suffix_lang) {
                    Word o = p;
                    o.insert(o.end(), piece.begin(), piece.end());
                    o.insert(o.end(), s.begin(), s.end());
                    options.insert(o);
                }
            extend_each(options);
        }
    }
    return outs;
}

// Directed parallel rewrite: spans are selected against the union of the
// UPPER languages, then every rule whose UPPER matches contributes outputs.
inline std::set<Word> rewrite_parallel(std::span<const ReplaceSpec> rules,
                                       std::span<const SymbolId> w,
                                       std::size_t action_bound = 12) {
    if (rules.empty()) throw Error(ErrorKind::EmptyRuleSet, "no rules");
    Network all = rules[0].upper;
    for (std::size_t i = 1; i < rules.size(); ++i) all = union_net(all, rules[i].upper);
    auto spans = match_spans(all, w, rules[0].direction, rules[0].length);
    std::set<Word> outs{{}};
    for (auto& sp : spans) {
        Word piece(w.begin() + sp.start, w.begin() + sp.end);
        std::set<Word> options;
        if (!sp.matched) {
            options.insert(piece);
        } else {
            for (auto& r : rules) {
                if (!accepts(r.upper, piece)) continue;
                if (auto* la = std::get_if<LowerAction>(&r.action)) {
                    auto lang = action_language(la->lower, action_bound);
                    options.insert(lang.begin(), lang.end());
                } else {
                    auto& ma = std::get<MarkupAction>(r.action);
                    for (auto& p : action_language(ma.prefix, action_bound))
                        for (auto& s : action_language(ma.suffix, action_bound)) {
                            Word o = p;
                            o.insert(o.end(), piece.begin(), piece.end());
                            o.insert(o.end(), s.begin(), s.end());
                            options.insert(o);
                        }
                }
            }
        }
        std::set<Word> next;
        for (auto& head : outs)
            for (auto& opt : options) {
                Word j = head;
                j.insert(j.end(), opt.begin(), opt.end());
                next.insert(j);
            }
        outs = std::move(next);
    }
    return outs;
}

// ---------------------------------------------------------------------------
// Undirected rewrite (simple and minimal conditional replace)

namespace detail {

inline bool left_ok(const std::optional<Network>& left, std::span<const SymbolId> w,
                    std::size_t i) {
    if (!left) return true;
    for (std::size_t k = 0; k <= i; ++k) {
        Word part(w.begin() + k, w.begin() + i);
        if (accepts(*left, part)) return true;
        if (k == 0) {
            Word anchored{BOUNDARY};
            anchored.insert(anchored.end(), part.begin(), part.end());
            if (accepts(*left, anchored)) return true;
        }
    }
    return false;
}

inline bool right_ok(const std::optional<Network>& right, std::span<const SymbolId> w,
                     std::size_t j) {
    if (!right) return true;
    for (std::size_t m = j; m <= w.size(); ++m) {
        Word part(w.begin() + j, w.begin() + m);
        if (accepts(*right, part)) return true;
        if (m == w.size()) {
            Word anchored = part;
            anchored.push_back(BOUNDARY);
            if (accepts(*right, anchored)) return true;
        }
    }
    return false;
}

}  // namespace detail

// Obligatory (conditional) replacement: every selection of pairwise-disjoint
// properly-contexted instances such that no unselected instance lies entirely
// in a gap. Passing no contexts gives simple replace.
inline std::set<Word> rewrite_undirected(const Network& upper, const Network& lower,
                                         const ContextSpec& ctx, std::span<const SymbolId> w,
                                         std::size_t action_bound = 12) {
    auto lower_lang = action_language(lower, action_bound);
    // candidate instances, nonempty only
    std::vector<std::pair<std::size_t, std::size_t>> cand;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (!detail::left_ok(ctx.left, w, i)) continue;
        for (std::size_t j : detail::match_ends(upper, w, i)) {
            if (j == i) continue;
            if (detail::right_ok(ctx.right, w, j)) cand.emplace_back(i, j);
        }
    }
    std::set<Word> outs;
    std::size_t n = cand.size();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        std::vector<std::pair<std::size_t, std::size_t>> chosen;
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i)
            if (mask & (std::uint64_t{1} << i)) {
                for (auto& c : chosen)
                    if (cand[i].first < c.second && c.first < cand[i].second) ok = false;
                if (ok) chosen.push_back(cand[i]);
            }
        if (!ok) continue;
        // obligatoriness: every candidate must intersect a chosen span
        for (std::size_t i = 0; i < n && ok; ++i) {
            bool touches = false;
            for (auto& c : chosen)
                if (cand[i].first < c.second && c.first < cand[i].second) touches = true;
            if (!touches) ok = false;
        }
        if (!ok) continue;
        std::sort(chosen.begin(), chosen.end());
        std::set<Word> partial{{}};
        std::size_t pos = 0;
        for (auto& [i, j] : chosen) {
            Word gap(w.begin() + pos, w.begin() + i);
            std::set<Word> next;
            for (auto& h : partial)
                for (auto& b : lower_lang) {
                    Word o = h;
                    o.insert(o.end(), gap.begin(), gap.end());
                    o.insert(o.end(), b.begin(), b.end());
                    next.insert(o);
                }
            partial = std::move(next);
            pos = j;
        }
        for (auto& h : partial) {
            Word o = h;
            o.insert(o.end(), w.begin() + pos, w.end());
            outs.insert(o);
        }
    }
    return outs;
}

// ---------------------------------------------------------------------------
// Equivalence report

struct EquivalenceReport {
    bool equivalent = true;
    // pairs present in exactly one of the two networks, at most 10
    std::vector<std::pair<WordPair, int>> counterexamples;  // int: 1 = only in a, 2 = only in b
};

inline EquivalenceReport assert_equivalent(const Network& a, const Network& b,
                                           std::size_t max_len,
                                           std::span<const SymbolId> probes = {}) {
    auto pa = enumerate_pairs(a, max_len, probes);
    auto pb = enumerate_pairs(b, max_len, probes);
    EquivalenceReport rep;
    for (auto& p : pa)
        if (!pb.count(p) && rep.counterexamples.size() < 10) {
            rep.equivalent = false;
            rep.counterexamples.push_back({p, 1});
        }
    for (auto& p : pb)
        if (!pa.count(p) && rep.counterexamples.size() < 10) {
            rep.equivalent = false;
            rep.counterexamples.push_back({p, 2});
        }
    if (pa != pb) rep.equivalent = false;
    return rep;
}

}  // namespace fsc::oracle

#endif
