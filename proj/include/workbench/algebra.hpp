#pragma once

#include <map>
#include <utility>
#include <vector>

#include "workbench/automaton.hpp"

namespace workbench {

namespace detail {

inline void require_same_shape(const SafetyAutomaton& a, const SafetyAutomaton& b) {
    if (a.base() != b.base())
        throw invalid_argument_error("operand base mismatch");
    if (a.arity() != b.arity())
        throw invalid_argument_error("operand arity mismatch");
}

// Per-track state of the expansion-equality relation between the stream
// read from the operand (u) and the stream emitted (v):
//   0  streams identical so far
//   1  u committed to the larger digit; from now on u reads 0, v emits b-1
//   2  u committed to the smaller digit; u reads b-1, v emits 0
// Two streams are value-equal iff they are identical, or agree up to one
// position where they differ by exactly 1 and the tails are forced as above.
inline void twin_options(int rel, int du, int base,
                         std::vector<std::pair<int, int>>& out) {
    out.clear();
    switch (rel) {
    case 0:
        out.emplace_back(du, 0);
        if (du >= 1) out.emplace_back(du - 1, 1);
        if (du <= base - 2) out.emplace_back(du + 1, 2);
        break;
    case 1:
        if (du == 0) out.emplace_back(base - 1, 1);
        break;
    default:
        if (du == base - 1) out.emplace_back(0, 2);
        break;
    }
}

} // namespace detail

// Denotes A union B: nondeterministic initial choice between the two
// operands, then subset construction.
inline SafetyAutomaton set_union(const SafetyAutomaton& lhs, const SafetyAutomaton& rhs,
                                 std::size_t state_cap = kDefaultStateCap) {
    detail::require_same_shape(lhs, rhs);
    SafetyAutomaton a = trim(lhs), b = trim(rhs);
    NondetAutomaton nfa(a.base(), a.arity());
    int off_a = 0;
    for (int q = 0; q < a.num_states(); ++q) nfa.add_state();
    int off_b = a.num_states();
    for (int q = 0; q < b.num_states(); ++q) nfa.add_state();
    for (int q = 0; q < a.num_states(); ++q)
        for (int l = 0; l < a.alphabet_size(); ++l)
            if (int t = a.target(q, l); t >= 0) nfa.add_transition(off_a + q, l, off_a + t);
    for (int q = 0; q < b.num_states(); ++q)
        for (int l = 0; l < b.alphabet_size(); ++l)
            if (int t = b.target(q, l); t >= 0) nfa.add_transition(off_b + q, l, off_b + t);
    if (!a.is_empty_automaton()) nfa.add_initial(off_a + a.initial());
    if (!b.is_empty_automaton()) nfa.add_initial(off_b + b.initial());
    return determinize(nfa, state_cap);
}

// Synchronized product of live runs; language-level intersection. Exact as a
// set intersection on saturated operands: two boundary points sharing no
// common expansion require an explicit saturate() first.
inline SafetyAutomaton set_intersection(const SafetyAutomaton& lhs, const SafetyAutomaton& rhs,
                                        std::size_t state_cap = kDefaultStateCap) {
    detail::require_same_shape(lhs, rhs);
    SafetyAutomaton a = trim(lhs), b = trim(rhs);
    SafetyAutomaton out(a.base(), a.arity());
    if (a.is_empty_automaton() || b.is_empty_automaton()) return out;

    std::map<std::pair<int, int>, int> ids;
    std::vector<std::pair<int, int>> frontier;
    auto id_of = [&](std::pair<int, int> pq) {
        auto [it, inserted] = ids.emplace(pq, out.num_states());
        if (inserted) {
            out.add_state();
            if (static_cast<std::size_t>(out.num_states()) > state_cap)
                throw resource_limit_error("intersection: state cap exceeded");
            frontier.push_back(pq);
        }
        return it->second;
    };
    id_of({a.initial(), b.initial()});
    out.set_initial(0);
    for (std::size_t i = 0; i < frontier.size(); ++i) {
        auto [p, q] = frontier[i];
        int sid = ids.at({p, q});
        for (int l = 0; l < a.alphabet_size(); ++l) {
            int tp = a.target(p, l), tq = b.target(q, l);
            if (tp >= 0 && tq >= 0) out.set_transition(sid, l, id_of({tp, tq}));
        }
    }
    return trim(out);
}

// Denotes the cartesian product; the letter of the result concatenates the
// digit tuples of the operands (lhs tracks first).
inline SafetyAutomaton set_product(const SafetyAutomaton& lhs, const SafetyAutomaton& rhs,
                                   std::size_t state_cap = kDefaultStateCap) {
    if (lhs.base() != rhs.base()) throw invalid_argument_error("operand base mismatch");
    SafetyAutomaton a = trim(lhs), b = trim(rhs);
    SafetyAutomaton out(a.base(), a.arity() + b.arity());
    if (a.is_empty_automaton() || b.is_empty_automaton()) return out;

    std::map<std::pair<int, int>, int> ids;
    std::vector<std::pair<int, int>> frontier;
    auto id_of = [&](std::pair<int, int> pq) {
        auto [it, inserted] = ids.emplace(pq, out.num_states());
        if (inserted) {
            out.add_state();
            if (static_cast<std::size_t>(out.num_states()) > state_cap)
                throw resource_limit_error("product: state cap exceeded");
            frontier.push_back(pq);
        }
        return it->second;
    };
    id_of({a.initial(), b.initial()});
    out.set_initial(0);
    for (std::size_t i = 0; i < frontier.size(); ++i) {
        auto [p, q] = frontier[i];
        int sid = ids.at({p, q});
        for (int la = 0; la < a.alphabet_size(); ++la) {
            int tp = a.target(p, la);
            if (tp < 0) continue;
            for (int lb = 0; lb < b.alphabet_size(); ++lb) {
                int tq = b.target(q, lb);
                if (tq < 0) continue;
                int l = la * b.alphabet_size() + lb;
                out.set_transition(sid, l, id_of({tp, tq}));
            }
        }
    }
    return trim(out);
}

// Image under the coordinate projection selecting `coords` (1-based, in the
// requested output order). Language projection equals set projection here:
// a point lies in the projected compact set iff each of its prefixes extends
// to a live pair prefix, by Koenig's lemma on the run tree.
inline SafetyAutomaton project(const SafetyAutomaton& input, const std::vector<int>& coords,
                               std::size_t state_cap = kDefaultStateCap) {
    if (coords.empty()) throw invalid_argument_error("project: empty coordinate list");
    for (int c : coords)
        if (c < 1 || c > input.arity())
            throw invalid_argument_error("project: coordinate index out of range");
    SafetyAutomaton a = trim(input);
    NondetAutomaton nfa(a.base(), static_cast<int>(coords.size()));
    if (a.is_empty_automaton()) return determinize(nfa, state_cap);
    for (int q = 0; q < a.num_states(); ++q) nfa.add_state();
    nfa.add_initial(a.initial());
    for (int q = 0; q < a.num_states(); ++q)
        for (int l = 0; l < a.alphabet_size(); ++l) {
            int t = a.target(q, l);
            if (t < 0) continue;
            auto digits = a.decode_letter(l);
            int code = 0;
            for (int c : coords) code = code * a.base() + digits[static_cast<std::size_t>(c - 1)];
            nfa.add_transition(q, code, t);
        }
    return determinize(nfa, state_cap);
}

// Closes the language under value equality of expansions, per track: after
// saturation the language is exactly the set of all expansions of all
// denoted points, so language equality becomes set equality.
inline SafetyAutomaton saturate(const SafetyAutomaton& input,
                                std::size_t state_cap = kDefaultStateCap) {
    SafetyAutomaton a = trim(input);
    if (a.is_empty_automaton()) return a;
    const int n = a.arity();
    const int b = a.base();
    int rel_count = 1;
    for (int i = 0; i < n; ++i) rel_count *= 3;

    NondetAutomaton nfa(b, n);
    for (int s = 0; s < a.num_states() * rel_count; ++s) nfa.add_state();
    nfa.add_initial(a.initial() * rel_count); // relation state 0 = all-EQ

    std::vector<std::vector<std::pair<int, int>>> options(static_cast<std::size_t>(n));
    std::vector<int> rel(static_cast<std::size_t>(n));
    for (int q = 0; q < a.num_states(); ++q) {
        for (int lu = 0; lu < a.alphabet_size(); ++lu) {
            int qt = a.target(q, lu);
            if (qt < 0) continue;
            auto du = a.decode_letter(lu);
            for (int r = 0; r < rel_count; ++r) {
                int rr = r;
                for (int i = n - 1; i >= 0; --i) { rel[static_cast<std::size_t>(i)] = rr % 3; rr /= 3; }
                bool feasible = true;
                for (int i = 0; i < n && feasible; ++i) {
                    detail::twin_options(rel[static_cast<std::size_t>(i)], du[static_cast<std::size_t>(i)], b,
                                         options[static_cast<std::size_t>(i)]);
                    feasible = !options[static_cast<std::size_t>(i)].empty();
                }
                if (!feasible) continue;
                // cartesian product of per-track options
                std::vector<std::size_t> pick(static_cast<std::size_t>(n), 0);
                while (true) {
                    int lv = 0, rnext = 0;
                    for (int i = 0; i < n; ++i) {
                        auto [dv, rt] = options[static_cast<std::size_t>(i)][pick[static_cast<std::size_t>(i)]];
                        lv = lv * b + dv;
                        rnext = rnext * 3 + rt;
                    }
                    nfa.add_transition(q * rel_count + r, lv, qt * rel_count + rnext);
                    int i = n - 1;
                    while (i >= 0 && ++pick[static_cast<std::size_t>(i)] ==
                                         options[static_cast<std::size_t>(i)].size()) {
                        pick[static_cast<std::size_t>(i)] = 0;
                        --i;
                    }
                    if (i < 0) break;
                }
            }
        }
    }
    return determinize(nfa, state_cap);
}

// Set equality: isomorphism of minimized saturated automata. The minimized
// automata come out of canonical_form in BFS numbering, so isomorphism is
// plain structural equality.
inline bool canonical_equal(const SafetyAutomaton& a, const SafetyAutomaton& b,
                            std::size_t state_cap = kDefaultStateCap) {
    detail::require_same_shape(a, b);
    return canonical_form(saturate(a, state_cap)) == canonical_form(saturate(b, state_cap));
}

// A subseteq B, decided canonically via A = A intersect B on saturations.
inline bool subset_of(const SafetyAutomaton& a, const SafetyAutomaton& b,
                      std::size_t state_cap = kDefaultStateCap) {
    detail::require_same_shape(a, b);
    SafetyAutomaton sa = saturate(a, state_cap);
    SafetyAutomaton sb = saturate(b, state_cap);
    return canonical_form(set_intersection(sa, sb, state_cap)) == canonical_form(sa);
}

} // namespace workbench
