#pragma once

#include <map>
#include <vector>

#include "workbench/algebra.hpp"
#include "workbench/automaton.hpp"
#include "workbench/rational.hpp"

namespace workbench {

// One-state automaton looping on the given digit tuples.
inline SafetyAutomaton make_digit_set(int base, int arity,
                                      const std::vector<std::vector<int>>& allowed) {
    if (allowed.empty()) throw invalid_argument_error("make_digit_set: empty digit set");
    SafetyAutomaton a(base, arity);
    int s = a.add_state();
    a.set_initial(s);
    for (const auto& tuple : allowed)
        a.set_transition(s, std::span<const int>(tuple), s);
    return a;
}

inline SafetyAutomaton full_box(int base, int arity) {
    SafetyAutomaton a(base, arity);
    int s = a.add_state();
    a.set_initial(s);
    for (int l = 0; l < a.alphabet_size(); ++l) a.set_transition(s, l, s);
    return a;
}

// Middle-thirds Cantor set: base-3 digits 0 and 2.
inline SafetyAutomaton cantor_set() { return make_digit_set(3, 1, {{0}, {2}}); }

// Sierpinski carpet: all base-3 digit pairs except (1,1).
inline SafetyAutomaton sierpinski_carpet() {
    std::vector<std::vector<int>> allowed;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (!(i == 1 && j == 1)) allowed.push_back({i, j});
    return make_digit_set(3, 2, allowed);
}

// Menger sponge: base-3 digit triples with at most one coordinate equal to 1.
inline SafetyAutomaton menger_sponge() {
    std::vector<std::vector<int>> allowed;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                if ((i == 1) + (j == 1) + (k == 1) <= 1) allowed.push_back({i, j, k});
    return make_digit_set(3, 3, allowed);
}

namespace detail {

// Automaton of the canonical greedy expansion of q in [0,1]; states are the
// remainders of the digit recursion, so the result is a lasso.
inline SafetyAutomaton canonical_expansion(int base, const Rational& q) {
    if (q < 0 || q > 1) throw invalid_argument_error("singleton coordinate outside [0,1]");
    SafetyAutomaton a(base, 1);
    std::map<Rational, int> seen;
    Rational r = q;
    int s = a.add_state();
    a.set_initial(s);
    seen.emplace(r, s);
    while (true) {
        Rational scaled = r * base;
        BigInt d = floor_rat(scaled);
        if (d == base) d = base - 1; // r == 1: the all-(b-1) stream
        Rational next = scaled - Rational(d);
        int digit = d.convert_to<int>();
        auto it = seen.find(next);
        if (it != seen.end()) {
            a.set_transition(s, digit, it->second);
            break;
        }
        int t = a.add_state();
        seen.emplace(next, t);
        a.set_transition(s, digit, t);
        s = t;
        r = next;
    }
    return a;
}

} // namespace detail

// Singleton {q} for a rational point of [0,1]^n; accepts exactly the
// eventually periodic expansion(s) of q, saturated by construction.
inline SafetyAutomaton singleton(int base, const std::vector<Rational>& coords) {
    if (coords.empty()) throw invalid_argument_error("singleton: empty coordinate vector");
    SafetyAutomaton acc = detail::canonical_expansion(base, coords[0]);
    for (std::size_t i = 1; i < coords.size(); ++i)
        acc = set_product(acc, detail::canonical_expansion(base, coords[i]));
    return saturate(acc);
}

namespace detail {

inline void check_track_pair(int n, int i, int j) {
    if (i < 1 || j < 1 || i > n || j > n || i == j)
        throw invalid_argument_error("relation: need distinct track indices in 1..arity");
}

} // namespace detail

// {x in [0,1]^n : x_i = x_j} as value equality, not digit-string equality.
// Three states track the expansion-equality relation between tracks i and j;
// all other tracks are free.
inline SafetyAutomaton relation_eq(int base, int n, int i, int j) {
    detail::check_track_pair(n, i, j);
    SafetyAutomaton a(base, n);
    int eq = a.add_state(), hi = a.add_state(), lo = a.add_state();
    a.set_initial(eq);
    for (int l = 0; l < a.alphabet_size(); ++l) {
        auto d = a.decode_letter(l);
        int di = d[static_cast<std::size_t>(i - 1)], dj = d[static_cast<std::size_t>(j - 1)];
        if (di == dj) a.set_transition(eq, l, eq);
        else if (di == dj + 1) a.set_transition(eq, l, hi);
        else if (dj == di + 1) a.set_transition(eq, l, lo);
        if (di == 0 && dj == base - 1) a.set_transition(hi, l, hi);
        if (di == base - 1 && dj == 0) a.set_transition(lo, l, lo);
    }
    return trim(a);
}

// {x in [0,1]^n : x_i <= x_j}, closed counterpart of the strict order.
inline SafetyAutomaton relation_le(int base, int n, int i, int j) {
    detail::check_track_pair(n, i, j);
    SafetyAutomaton a(base, n);
    int eq = a.add_state(), all = a.add_state(), force = a.add_state();
    a.set_initial(eq);
    for (int l = 0; l < a.alphabet_size(); ++l) {
        auto d = a.decode_letter(l);
        int di = d[static_cast<std::size_t>(i - 1)], dj = d[static_cast<std::size_t>(j - 1)];
        if (di == dj) a.set_transition(eq, l, eq);
        else if (di < dj) a.set_transition(eq, l, all);
        else if (di == dj + 1) a.set_transition(eq, l, force); // equal values via twin tails
        a.set_transition(all, l, all);
        if (di == 0 && dj == base - 1) a.set_transition(force, l, force);
    }
    return trim(a);
}

// Z-affine map with a power-of-b denominator: x -> (sum c_i x_i + p) / b^e.
struct AffineSpec {
    std::vector<long long> coeffs;
    long long offset = 0;
    int scale_exp = 0;
};

// Image of the denoted set under the affine map, clipped to [0,1] (points
// outside have no digit expansion and simply do not appear).
//
// Synchronous carry construction: reading input tuple d and emitting output
// digit o keeps the integer residual T with T' = b*T + c.d - b^e * o. A pair
// of streams satisfies y = (c.x+p)/b^e exactly when every residual stays in
// [-sum(max(c_i,0)), b^e - sum(min(c_i,0))], since the undecided tails can
// absorb exactly that much. Every expansion of every image point survives,
// so the result is saturated as built.
inline SafetyAutomaton affine_image(const SafetyAutomaton& input, const AffineSpec& spec,
                                    std::size_t state_cap = kDefaultStateCap) {
    SafetyAutomaton a = trim(input);
    if (static_cast<int>(spec.coeffs.size()) != a.arity())
        throw invalid_argument_error("affine_image: coefficient count != arity");
    if (spec.scale_exp < 0) throw invalid_argument_error("affine_image: negative scale exponent");

    const int b = a.base();
    long long bpow = 1;
    for (int i = 0; i < spec.scale_exp; ++i) {
        bpow *= b;
        if (bpow > 1'000'000'000LL) throw resource_limit_error("affine_image: scale too large");
    }
    long long sum_pos = 0, sum_neg = 0;
    for (long long c : spec.coeffs) {
        if (c > 0) sum_pos += c;
        else sum_neg += c;
    }
    const long long t_lo = -sum_pos;
    const long long t_hi = bpow - sum_neg;

    SafetyAutomaton out(b, 1);
    if (a.is_empty_automaton() || spec.offset < t_lo || spec.offset > t_hi)
        return determinize(NondetAutomaton(b, 1), state_cap);

    // lazily numbered NFA states (q, T)
    NondetAutomaton nfa(b, 1);
    std::map<std::pair<int, long long>, int> ids;
    std::vector<std::pair<int, long long>> frontier;
    auto id_of = [&](int q, long long t) {
        auto [it, inserted] = ids.emplace(std::make_pair(q, t), nfa.num_states());
        if (inserted) {
            nfa.add_state();
            if (static_cast<std::size_t>(nfa.num_states()) > state_cap)
                throw resource_limit_error("affine_image: state cap exceeded");
            frontier.emplace_back(q, t);
        }
        return it->second;
    };
    nfa.add_initial(id_of(a.initial(), spec.offset));
    for (std::size_t i = 0; i < frontier.size(); ++i) {
        auto [q, t] = frontier[i];
        int sid = ids.at({q, t});
        for (int l = 0; l < a.alphabet_size(); ++l) {
            int qt = a.target(q, l);
            if (qt < 0) continue;
            auto d = a.decode_letter(l);
            long long dot = 0;
            for (int k = 0; k < a.arity(); ++k)
                dot += spec.coeffs[static_cast<std::size_t>(k)] * d[static_cast<std::size_t>(k)];
            for (int o = 0; o < b; ++o) {
                long long tn = b * t + dot - bpow * o;
                if (tn < t_lo || tn > t_hi) continue;
                nfa.add_transition(sid, o, id_of(qt, tn));
            }
        }
    }
    return saturate(determinize(nfa, state_cap), state_cap);
}

namespace detail {

// [lo, hi] inside [0,1], composed from the order relation against rational
// singletons so all expansions of boundary points are present.
inline SafetyAutomaton interval_1d(int base, const Rational& lo, const Rational& hi,
                                   std::size_t state_cap) {
    if (lo > hi) throw invalid_argument_error("box: lower endpoint exceeds upper");
    SafetyAutomaton one = full_box(base, 1);
    SafetyAutomaton ge = project(
        set_intersection(set_product(singleton(base, {lo}), one, state_cap),
                         relation_le(base, 2, 1, 2), state_cap),
        {2}, state_cap);
    SafetyAutomaton le = project(
        set_intersection(set_product(one, singleton(base, {hi}), state_cap),
                         relation_le(base, 2, 1, 2), state_cap),
        {1}, state_cap);
    return set_intersection(ge, le, state_cap);
}

} // namespace detail

// Product of closed intervals with rational endpoints.
inline SafetyAutomaton box(int base, const std::vector<std::pair<Rational, Rational>>& sides,
                           std::size_t state_cap = kDefaultStateCap) {
    if (sides.empty()) throw invalid_argument_error("box: no sides");
    SafetyAutomaton acc = detail::interval_1d(base, sides[0].first, sides[0].second, state_cap);
    for (std::size_t i = 1; i < sides.size(); ++i)
        acc = set_product(acc, detail::interval_1d(base, sides[i].first, sides[i].second, state_cap),
                          state_cap);
    return acc;
}

} // namespace workbench
