#ifndef FSC_REPLACE_HPP
#define FSC_REPLACE_HPP

// Replacement transducers: simple `->`, minimal conditional `-> || L _ R`,
// the four directed operators, markup insertion, and directed parallel
// replacement. Directed replacement is built as a composition cascade:
// initial match (caret insertion), left-to-right constraint, length
// constraint, rewrite of the bracketed regions.

#include <optional>
#include <set>
#include <span>
#include <variant>
#include <vector>

#include <fsc/network.hpp>
#include <fsc/replace_spec.hpp>

namespace fsc {

namespace detail {

inline const std::set<SymbolId> AUX_MARKS{CARET, LBRACKET, RBRACKET};

inline void check_upper(const Network& upper) {
    require_automaton(upper, "replacement UPPER");
    if (accepts(upper, {}))
        throw Error(ErrorKind::EpsilonInUpper,
                    "UPPER of a directed or conditional rule must not accept the empty string");
}

inline void strip_internal_sigma(Network& n) {
    n.sigma.erase(CARET);
    n.sigma.erase(LBRACKET);
    n.sigma.erase(RBRACKET);
    n.sigma.erase(BOUNDARY);
}

// Identity on strings containing no auxiliary mark.
inline Network aux_free_filter() {
    Network marks = union_net(union_net(atom(CARET), atom(LBRACKET)), atom(RBRACKET));
    return complement(contains(marks));
}

// Deterministic completed DFA recognizing `?* L`, stepped once over BOUNDARY
// so that edge-anchored contexts resolve against the string start/end.
// Returns the DFA and its effective start state.
inline std::pair<Network, std::uint32_t> prefix_match_dfa(const Network& lang) {
    std::set<SymbolId> loops = lang.sigma;
    loops.insert(BOUNDARY);
    Network p = concat(copy_free_of(loops, {}), lang);
    Network d = determinize(p);
    complete_dfa(d);
    std::uint32_t st = d.start;
    for (auto& a : d.states[st])
        if (a.upper == BOUNDARY) {
            st = a.target;
            break;
        }
    return {d, st};
}

inline Network trivial_match_dfa() {
    Network d;
    d.add_state(true);
    d.add_arc(0, OTHER, OTHER, 0);
    d.deterministic = true;
    return d;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Simple unconditional replace: UPPER -> LOWER

inline Network replace_simple(const Network& upper, const Network& lower) {
    require_automaton(upper, "replace upper");
    require_automaton(lower, "replace lower");
    Network nonempty_upper = difference(upper, empty_string_language());
    Network no_u = complement(contains(nonempty_upper));
    Network unit = concat(no_u, crossproduct(upper, lower));
    return minimize(concat(star(unit), no_u));
}

// ---------------------------------------------------------------------------
// Initial match: insert exactly one caret before every position where a
// member of UPPER begins. Built from the suffix-match DFA of the reversed
// input, so the transducer has exactly one output per input string.

inline Network insert_single_caret(const Network& upper) {
    detail::check_upper(upper);
    Network d = determinize(concat(universal_language(), reverse(upper)));
    detail::complete_dfa(d);
    std::size_t ns = d.state_count();
    Network t;
    t.sigma = d.sigma;
    t.sigma.insert(CARET);
    // base states 0..ns-1, primed (caret emitted) ns..2ns-1
    for (std::uint32_t q = 0; q < ns; ++q) t.add_state(!d.is_final(q));
    for (std::uint32_t q = 0; q < ns; ++q) t.add_state(d.is_final(q));
    for (std::uint32_t q = 0; q < ns; ++q) {
        std::uint32_t from = d.is_final(q) ? static_cast<std::uint32_t>(ns + q) : q;
        if (d.is_final(q))
            t.states[q].push_back(Arc{EPSILON, CARET, static_cast<std::uint32_t>(ns + q)});
        for (auto& a : d.states[q]) t.states[from].push_back(Arc{a.upper, a.upper, a.target});
    }
    t.start = d.start;
    t.sort_arcs();
    return minimize(reverse(t));
}

// ---------------------------------------------------------------------------
// Left-to-right constraint: carets become opening brackets, each bracketed
// region spans a member of UPPER (internal carets allowed and deleted), a
// closing bracket is added, and no caret survives outside brackets.

inline Network l2r_constraint(const Network& upper) {
    detail::check_upper(upper);
    Network upper_ic = ignore(upper, {CARET}, IgnoreMode::Nonfinal);
    Network deleter = star(union_net(atom(CARET, EPSILON),
                                     any_symbol_except(upper.sigma, detail::AUX_MARKS)));
    Network region_body = compose(upper_ic, deleter);
    Network gap = copy_free_of(upper.sigma, detail::AUX_MARKS);
    Network unit = concat(concat(concat(gap, atom(CARET, LBRACKET)), region_body),
                          atom(EPSILON, RBRACKET));
    return minimize(concat(star(unit), gap));
}

// ---------------------------------------------------------------------------
// Length constraint: identity on bracket-marked strings.
// Longest: no opening bracket may be followed by a member of UPPER (internal
// brackets ignored) containing a nonfinal closing bracket.
// Shortest: no region may continue past a completed match.

inline Network length_constraint(const Network& upper, LengthMode mode) {
    detail::check_upper(upper);
    if (mode == LengthMode::Longest) {
        Network upper_ib = ignore(upper, {LBRACKET, RBRACKET}, IgnoreMode::Nonfinal);
        Network bad = concat(atom(LBRACKET), intersect(upper_ib, contains(atom(RBRACKET))));
        return complement(contains(bad));
    }
    std::set<SymbolId> inc = upper.sigma;
    inc.insert(LBRACKET);
    Network not_rbracket = any_symbol_except(inc, {RBRACKET});
    Network bad = concat(concat(atom(LBRACKET), upper), not_rbracket);
    return complement(contains(bad));
}

// ---------------------------------------------------------------------------
// Rewrite of the bracketed regions.

inline Network rewrite_brackets(const ReplaceAction& action,
                                const std::set<SymbolId>& sigma_basis) {
    if (auto* la = std::get_if<LowerAction>(&action)) {
        Network content = star(any_symbol_except(sigma_basis, detail::AUX_MARKS));
        Network region = concat(concat(atom(LBRACKET, EPSILON),
                                       crossproduct(content, la->lower)),
                                atom(RBRACKET, EPSILON));
        Network gap = copy_free_of(sigma_basis, detail::AUX_MARKS);
        return minimize(concat(star(concat(gap, region)), gap));
    }
    auto& ma = std::get<MarkupAction>(action);
    Network unit = union_net(
        union_net(any_symbol_except(sigma_basis, detail::AUX_MARKS),
                  crossproduct(atom(LBRACKET), ma.prefix)),
        crossproduct(atom(RBRACKET), ma.suffix));
    return minimize(star(unit));
}

// ---------------------------------------------------------------------------
// Directed replacement

namespace detail {

inline Network reverse_min(const Network& n) { return minimize(reverse(n)); }

inline ReplaceSpec reverse_spec(const ReplaceSpec& spec) {
    ReplaceSpec r;
    r.upper = reverse_min(spec.upper);
    r.direction = Direction::LeftToRight;
    r.length = spec.length;
    if (auto* la = std::get_if<LowerAction>(&spec.action)) {
        r.action = LowerAction{reverse_min(la->lower)};
    } else {
        auto& ma = std::get<MarkupAction>(spec.action);
        r.action = MarkupAction{reverse_min(ma.suffix), reverse_min(ma.prefix)};
    }
    return r;
}

inline std::set<SymbolId> action_sigma(const ReplaceAction& action) {
    if (auto* la = std::get_if<LowerAction>(&action)) return la->lower.sigma;
    auto& ma = std::get<MarkupAction>(action);
    std::set<SymbolId> s = ma.prefix.sigma;
    s.insert(ma.suffix.sigma.begin(), ma.suffix.sigma.end());
    return s;
}

inline Network directed_pipeline(const Network& upper, LengthMode mode,
                                 const Network& rewrite_stage) {
    Network t = compose(aux_free_filter(), insert_single_caret(upper));
    t = minimize(t);
    t = minimize(compose(t, l2r_constraint(upper)));
    t = minimize(compose(t, length_constraint(upper, mode)));
    t = minimize(compose(t, rewrite_stage));
    strip_internal_sigma(t);
    return t;
}

}  // namespace detail

inline Network replace_directed(const ReplaceSpec& spec) {
    if (spec.direction == Direction::RightToLeft) {
        Network t = replace_directed(detail::reverse_spec(spec));
        t = detail::reverse_min(t);
        detail::strip_internal_sigma(t);
        return t;
    }
    detail::check_upper(spec.upper);
    std::set<SymbolId> basis = spec.upper.sigma;
    auto act = detail::action_sigma(spec.action);
    basis.insert(act.begin(), act.end());
    return detail::directed_pipeline(spec.upper, spec.length,
                                     rewrite_brackets(spec.action, basis));
}

inline Network markup_directed(const ReplaceSpec& spec) { return replace_directed(spec); }

// ---------------------------------------------------------------------------
// Directed parallel replacement: sites are selected against the union of the
// UPPER languages, each rewritten by the rules whose UPPER matched it.

inline Network replace_parallel_directed(std::span<const ReplaceSpec> rules) {
    if (rules.empty()) throw Error(ErrorKind::EmptyRuleSet, "parallel replacement needs rules");
    for (auto& r : rules) detail::check_upper(r.upper);
    if (rules[0].direction == Direction::RightToLeft) {
        std::vector<ReplaceSpec> rev;
        rev.reserve(rules.size());
        for (auto& r : rules) rev.push_back(detail::reverse_spec(r));
        Network t = detail::reverse_min(replace_parallel_directed(rev));
        detail::strip_internal_sigma(t);
        return t;
    }
    Network all = rules[0].upper;
    std::set<SymbolId> basis = rules[0].upper.sigma;
    for (std::size_t i = 1; i < rules.size(); ++i) {
        all = union_net(all, rules[i].upper);
        basis.insert(rules[i].upper.sigma.begin(), rules[i].upper.sigma.end());
    }
    for (auto& r : rules) {
        auto act = detail::action_sigma(r.action);
        basis.insert(act.begin(), act.end());
    }
    all = minimize(all);
    // content-sensitive region rewrite
    Network region;
    bool first = true;
    for (auto& r : rules) {
        Network body;
        if (auto* la = std::get_if<LowerAction>(&r.action)) {
            body = crossproduct(r.upper, la->lower);
        } else {
            auto& ma = std::get<MarkupAction>(r.action);
            body = concat(concat(crossproduct(empty_string_language(), ma.prefix), r.upper),
                          crossproduct(empty_string_language(), ma.suffix));
        }
        Network one = concat(concat(atom(LBRACKET, EPSILON), body), atom(RBRACKET, EPSILON));
        region = first ? one : union_net(region, one);
        first = false;
    }
    Network gap = copy_free_of(basis, detail::AUX_MARKS);
    Network rewrite_stage = minimize(concat(star(concat(gap, region)), gap));
    return detail::directed_pipeline(all, rules[0].length, rewrite_stage);
}

// ---------------------------------------------------------------------------
// Minimal conditional replace: A -> B || L _ R, contexts on the input side.
// Pipeline: deterministically mark every position whose left/right input
// context is satisfied, nondeterministically select disjoint bracketed
// instances, filter factorizations that skip a replaceable instance, rewrite.

namespace detail {

// Forward marker: one LBRACKET before every position p with w[:p] in ?* L.
inline Network left_context_marker(const std::optional<Network>& left) {
    Network d;
    std::uint32_t st;
    if (left) {
        require_automaton(*left, "left context");
        auto [dd, s] = prefix_match_dfa(*left);
        d = dd;
        st = s;
    } else {
        d = trivial_match_dfa();
        st = 0;
    }
    std::size_t ns = d.state_count();
    Network t;
    t.sigma = d.sigma;
    t.sigma.insert(LBRACKET);
    for (std::uint32_t q = 0; q < ns; ++q) t.add_state(!d.is_final(q));
    for (std::uint32_t q = 0; q < ns; ++q) t.add_state(d.is_final(q));
    for (std::uint32_t q = 0; q < ns; ++q) {
        std::uint32_t from = d.is_final(q) ? static_cast<std::uint32_t>(ns + q) : q;
        if (d.is_final(q))
            t.states[q].push_back(Arc{EPSILON, LBRACKET, static_cast<std::uint32_t>(ns + q)});
        for (auto& a : d.states[q])
            if (a.upper != BOUNDARY) t.states[from].push_back(Arc{a.upper, a.upper, a.target});
    }
    t.start = st;
    t.sort_arcs();
    return minimize(prune(t));
}

// Right marker, built in the reversed world: one RBRACKET at every position p
// with w[p:] in R ?*, emitted after (in forward order, before) the LBRACKET
// already present at that position.
inline Network right_context_marker(const std::optional<Network>& right) {
    Network d;
    std::uint32_t st;
    if (right) {
        require_automaton(*right, "right context");
        auto [dd, s] = prefix_match_dfa(reverse(*right));
        d = dd;
        st = s;
    } else {
        d = trivial_match_dfa();
        st = 0;
    }
    std::size_t ns = d.state_count();
    Network t;
    t.sigma = d.sigma;
    t.sigma.insert(LBRACKET);
    t.sigma.insert(RBRACKET);
    // layout: base q, mid ns+q (LBRACKET copied, RBRACKET pending),
    // handled 2*ns+q (this position done)
    for (std::uint32_t q = 0; q < ns; ++q) t.add_state(!d.is_final(q));
    for (std::uint32_t q = 0; q < ns; ++q) t.add_state(false);
    for (std::uint32_t q = 0; q < ns; ++q) t.add_state(true);
    auto mid = [&](std::uint32_t q) { return static_cast<std::uint32_t>(ns + q); };
    auto han = [&](std::uint32_t q) { return static_cast<std::uint32_t>(2 * ns + q); };
    for (std::uint32_t q = 0; q < ns; ++q) {
        if (d.is_final(q)) {
            t.states[q].push_back(Arc{LBRACKET, LBRACKET, mid(q)});
            t.states[mid(q)].push_back(Arc{EPSILON, RBRACKET, han(q)});
            t.states[q].push_back(Arc{EPSILON, RBRACKET, han(q)});
        } else {
            t.states[q].push_back(Arc{LBRACKET, LBRACKET, han(q)});
        }
        for (auto& a : d.states[q]) {
            if (a.upper == BOUNDARY) continue;
            t.states[han(q)].push_back(Arc{a.upper, a.upper, a.target});
            if (!d.is_final(q)) t.states[q].push_back(Arc{a.upper, a.upper, a.target});
        }
    }
    t.start = st;
    t.sort_arcs();
    return minimize(reverse(prune(t)));
}

}  // namespace detail

inline Network replace_conditional(const Network& upper, const Network& lower,
                                   const ContextSpec& ctx) {
    detail::check_upper(upper);
    require_automaton(lower, "replace lower");
    std::set<SymbolId> basis = upper.sigma;
    basis.insert(lower.sigma.begin(), lower.sigma.end());
    if (ctx.left) basis.insert(ctx.left->sigma.begin(), ctx.left->sigma.end());
    if (ctx.right) basis.insert(ctx.right->sigma.begin(), ctx.right->sigma.end());
    basis.erase(BOUNDARY);

    Network marked = compose(detail::aux_free_filter(),
                             compose(detail::left_context_marker(ctx.left),
                                     detail::right_context_marker(ctx.right)));
    marked = minimize(marked);

    // selection of disjoint properly-contexted instances
    Network upper_im = ignore(upper, {LBRACKET, RBRACKET}, IgnoreMode::Everywhere);
    Network del_marks = star(union_net(
        union_net(atom(LBRACKET, EPSILON), atom(RBRACKET, EPSILON)),
        any_symbol_except(basis, detail::AUX_MARKS)));
    Network chosen = concat(concat(atom(LBRACKET, CARET), compose(upper_im, del_marks)),
                            atom(RBRACKET, CARET));
    std::set<SymbolId> with_marks = basis;
    with_marks.insert(LBRACKET);
    with_marks.insert(RBRACKET);
    Network keep = copy_free_of(with_marks, {CARET});
    Network select = minimize(concat(star(concat(keep, chosen)), keep));

    // obligatoriness: outside chosen regions no replaceable instance survives
    Network cand = concat(concat(atom(LBRACKET), upper_im), atom(RBRACKET));
    Network outside = intersect(complement(contains(cand)), complement(contains(atom(CARET))));
    Network caret_free = copy_free_of(with_marks, {CARET});
    Network chosen_region = concat(concat(atom(CARET), caret_free), atom(CARET));
    Network filter = minimize(concat(star(concat(outside, chosen_region)), outside));

    // replacement and cleanup
    Network gap = star(union_net(
        union_net(atom(LBRACKET, EPSILON), atom(RBRACKET, EPSILON)),
        any_symbol_except(basis, detail::AUX_MARKS)));
    Network region = concat(concat(atom(CARET, EPSILON), crossproduct(upper, lower)),
                            atom(CARET, EPSILON));
    Network rewrite = minimize(concat(star(concat(gap, region)), gap));

    Network t = minimize(compose(marked, select));
    t = minimize(compose(t, filter));
    t = minimize(compose(t, rewrite));
    detail::strip_internal_sigma(t);
    return t;
}

}  // namespace fsc

#endif
