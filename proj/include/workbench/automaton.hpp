#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <span>
#include <vector>

#include "workbench/errors.hpp"
#include "workbench/rational.hpp"

namespace workbench {

// Default cap for state-producing constructions (subset construction,
// products, carry composition). Exceeding it raises resource_limit_error.
inline constexpr std::size_t kDefaultStateCap = 1'000'000;

namespace detail {
inline int checked_alphabet_size(int base, int arity) {
    if (base < 2) throw invalid_argument_error("base must be >= 2");
    if (arity < 1) throw invalid_argument_error("arity must be >= 1");
    std::int64_t n = 1;
    for (int i = 0; i < arity; ++i) {
        n *= base;
        if (n > (1 << 20)) throw resource_limit_error("alphabet too large (base^arity)");
    }
    return static_cast<int>(n);
}
} // namespace detail

// Deterministic safety automaton over tuple-digit letters. A letter is an
// arity-tuple of digits in [0, base), encoded as the base-b number whose
// most significant digit is track 0. The automaton denotes the compact set
// of points of [0,1]^arity having at least one synchronous digit expansion
// that labels an infinite run from the initial state; the point 1 is the
// all-(base-1) stream. Zero states denote the empty set.
//
// There is no acceptance condition: a run is accepted by surviving. The
// trim() normal form guarantees every state is reachable and every finite
// run extends forever.
class SafetyAutomaton {
public:
    SafetyAutomaton() : SafetyAutomaton(2, 1) {}
    SafetyAutomaton(int base, int arity)
        : base_(base), arity_(arity),
          alphabet_(detail::checked_alphabet_size(base, arity)) {}

    int base() const { return base_; }
    int arity() const { return arity_; }
    int alphabet_size() const { return alphabet_; }
    int num_states() const { return static_cast<int>(rows_.size()); }
    int initial() const { return initial_; }
    bool is_empty_automaton() const { return rows_.empty(); }

    int add_state() {
        rows_.emplace_back(alphabet_, -1);
        return num_states() - 1;
    }

    void set_initial(int s) {
        if (s < 0 || s >= num_states()) throw invalid_argument_error("initial out of range");
        initial_ = s;
    }

    void set_transition(int from, int letter, int to) {
        rows_.at(from).at(static_cast<std::size_t>(letter)) = to;
    }

    void set_transition(int from, std::span<const int> digits, int to) {
        set_transition(from, encode_letter(digits), to);
    }

    // -1 when undefined.
    int target(int state, int letter) const {
        return rows_[static_cast<std::size_t>(state)][static_cast<std::size_t>(letter)];
    }

    int encode_letter(std::span<const int> digits) const {
        if (static_cast<int>(digits.size()) != arity_)
            throw invalid_argument_error("digit tuple has wrong arity");
        int code = 0;
        for (int d : digits) {
            if (d < 0 || d >= base_) throw invalid_argument_error("digit out of range");
            code = code * base_ + d;
        }
        return code;
    }

    std::vector<int> decode_letter(int letter) const {
        std::vector<int> digits(static_cast<std::size_t>(arity_));
        for (int i = arity_ - 1; i >= 0; --i) {
            digits[static_cast<std::size_t>(i)] = letter % base_;
            letter /= base_;
        }
        return digits;
    }

    friend bool operator==(const SafetyAutomaton&, const SafetyAutomaton&) = default;

private:
    int base_;
    int arity_;
    int alphabet_;
    int initial_ = -1;
    std::vector<std::vector<std::int32_t>> rows_; // state x letter -> target or -1
};

// Nondeterministic variant; intermediate result of projection, saturation
// and union before the subset construction.
class NondetAutomaton {
public:
    NondetAutomaton(int base, int arity)
        : base_(base), arity_(arity),
          alphabet_(detail::checked_alphabet_size(base, arity)) {}

    int base() const { return base_; }
    int arity() const { return arity_; }
    int alphabet_size() const { return alphabet_; }
    int num_states() const { return static_cast<int>(rows_.size()); }

    int add_state() {
        rows_.emplace_back(static_cast<std::size_t>(alphabet_));
        return num_states() - 1;
    }

    void add_initial(int s) { initials_.push_back(s); }
    const std::vector<int>& initials() const { return initials_; }

    void add_transition(int from, int letter, int to) {
        rows_.at(static_cast<std::size_t>(from)).at(static_cast<std::size_t>(letter)).push_back(to);
    }

    const std::vector<int>& targets(int state, int letter) const {
        return rows_[static_cast<std::size_t>(state)][static_cast<std::size_t>(letter)];
    }

private:
    int base_;
    int arity_;
    int alphabet_;
    std::vector<int> initials_;
    std::vector<std::vector<std::vector<int>>> rows_;
};

// Greatest-fixpoint liveness pruning followed by reachability restriction.
// Iteratively drops states with no outgoing transition, then drops states
// unreachable from the initial state. Result is empty or trim.
inline SafetyAutomaton trim(const SafetyAutomaton& a) {
    const int m = a.num_states();
    if (m == 0 || a.initial() < 0) return SafetyAutomaton(a.base(), a.arity());

    std::vector<bool> alive(static_cast<std::size_t>(m), true);
    bool changed = true;
    while (changed) {
        changed = false;
        for (int q = 0; q < m; ++q) {
            if (!alive[static_cast<std::size_t>(q)]) continue;
            bool has_out = false;
            for (int l = 0; l < a.alphabet_size(); ++l) {
                int t = a.target(q, l);
                if (t >= 0 && alive[static_cast<std::size_t>(t)]) { has_out = true; break; }
            }
            if (!has_out) {
                alive[static_cast<std::size_t>(q)] = false;
                changed = true;
            }
        }
    }
    if (!alive[static_cast<std::size_t>(a.initial())])
        return SafetyAutomaton(a.base(), a.arity());

    // BFS over live states
    std::vector<int> renum(static_cast<std::size_t>(m), -1);
    std::deque<int> queue;
    SafetyAutomaton out(a.base(), a.arity());
    renum[static_cast<std::size_t>(a.initial())] = out.add_state();
    queue.push_back(a.initial());
    std::vector<int> order{a.initial()};
    while (!queue.empty()) {
        int q = queue.front();
        queue.pop_front();
        for (int l = 0; l < a.alphabet_size(); ++l) {
            int t = a.target(q, l);
            if (t < 0 || !alive[static_cast<std::size_t>(t)]) continue;
            if (renum[static_cast<std::size_t>(t)] < 0) {
                renum[static_cast<std::size_t>(t)] = out.add_state();
                queue.push_back(t);
                order.push_back(t);
            }
        }
    }
    for (int q : order) {
        for (int l = 0; l < a.alphabet_size(); ++l) {
            int t = a.target(q, l);
            if (t < 0 || !alive[static_cast<std::size_t>(t)]) continue;
            out.set_transition(renum[static_cast<std::size_t>(q)], l, renum[static_cast<std::size_t>(t)]);
        }
    }
    out.set_initial(0);
    return out;
}

inline bool is_empty(const SafetyAutomaton& a) { return trim(a).is_empty_automaton(); }

// Subset construction. Safety semantics make this sound: a stream labels an
// infinite run of the input iff all its prefixes label ever-extendable
// finite runs, which the subsets track exactly (Koenig's lemma on the
// finitely branching run tree).
inline SafetyAutomaton determinize(const NondetAutomaton& n,
                                   std::size_t state_cap = kDefaultStateCap) {
    SafetyAutomaton out(n.base(), n.arity());
    std::vector<int> start(n.initials());
    std::sort(start.begin(), start.end());
    start.erase(std::unique(start.begin(), start.end()), start.end());
    if (start.empty()) return out;

    std::map<std::vector<int>, int> ids;
    std::deque<std::vector<int>> queue;
    ids.emplace(start, out.add_state());
    out.set_initial(0);
    queue.push_back(start);
    while (!queue.empty()) {
        std::vector<int> s = std::move(queue.front());
        queue.pop_front();
        int sid = ids.at(s);
        for (int l = 0; l < n.alphabet_size(); ++l) {
            std::vector<int> next;
            for (int q : s)
                for (int t : n.targets(q, l)) next.push_back(t);
            if (next.empty()) continue;
            std::sort(next.begin(), next.end());
            next.erase(std::unique(next.begin(), next.end()), next.end());
            auto [it, inserted] = ids.emplace(next, out.num_states());
            if (inserted) {
                out.add_state();
                if (static_cast<std::size_t>(out.num_states()) > state_cap)
                    throw resource_limit_error("determinize: state cap exceeded");
                queue.push_back(next);
            }
            out.set_transition(sid, l, it->second);
        }
    }
    return trim(out);
}

// Number of length-k letter strings labeling runs that extend forever.
inline BigInt count_prefixes(const SafetyAutomaton& a, int k) {
    if (k < 0) throw invalid_argument_error("count_prefixes: negative depth");
    SafetyAutomaton t = trim(a);
    if (t.is_empty_automaton()) return 0;
    std::vector<BigInt> v(static_cast<std::size_t>(t.num_states()), BigInt(0));
    v[static_cast<std::size_t>(t.initial())] = 1;
    for (int step = 0; step < k; ++step) {
        std::vector<BigInt> w(v.size(), BigInt(0));
        for (int q = 0; q < t.num_states(); ++q) {
            if (v[static_cast<std::size_t>(q)] == 0) continue;
            for (int l = 0; l < t.alphabet_size(); ++l) {
                int tgt = t.target(q, l);
                if (tgt >= 0) w[static_cast<std::size_t>(tgt)] += v[static_cast<std::size_t>(q)];
            }
        }
        v = std::move(w);
    }
    BigInt total = 0;
    for (const BigInt& x : v) total += x;
    return total;
}

// Moore partition refinement on a trim automaton. The initial partition
// separates states by their sets of defined letters; refinement by successor
// classes reaches the coarsest congruence, whose quotient is the unique
// minimal automaton for the residual safety language.
inline SafetyAutomaton minimize(const SafetyAutomaton& input) {
    SafetyAutomaton a = trim(input);
    const int m = a.num_states();
    if (m == 0) return a;

    std::vector<int> cls(static_cast<std::size_t>(m));
    {
        std::map<std::vector<std::int8_t>, int> keys;
        for (int q = 0; q < m; ++q) {
            std::vector<std::int8_t> key(static_cast<std::size_t>(a.alphabet_size()));
            for (int l = 0; l < a.alphabet_size(); ++l)
                key[static_cast<std::size_t>(l)] = a.target(q, l) >= 0 ? 1 : 0;
            auto [it, _] = keys.emplace(std::move(key), static_cast<int>(keys.size()));
            cls[static_cast<std::size_t>(q)] = it->second;
        }
    }
    // Each round's key contains the old class, so rounds only split classes;
    // the partition is stable exactly when the class count stops growing.
    while (true) {
        int old_count = *std::max_element(cls.begin(), cls.end()) + 1;
        std::map<std::vector<int>, int> keys;
        std::vector<int> next(static_cast<std::size_t>(m));
        for (int q = 0; q < m; ++q) {
            std::vector<int> key;
            key.reserve(static_cast<std::size_t>(a.alphabet_size()) + 1);
            key.push_back(cls[static_cast<std::size_t>(q)]);
            for (int l = 0; l < a.alphabet_size(); ++l) {
                int t = a.target(q, l);
                key.push_back(t < 0 ? -1 : cls[static_cast<std::size_t>(t)]);
            }
            auto [it, _] = keys.emplace(std::move(key), static_cast<int>(keys.size()));
            next[static_cast<std::size_t>(q)] = it->second;
        }
        cls = std::move(next);
        if (static_cast<int>(keys.size()) == old_count) break;
    }

    int num_classes = *std::max_element(cls.begin(), cls.end()) + 1;
    SafetyAutomaton out(a.base(), a.arity());
    for (int c = 0; c < num_classes; ++c) out.add_state();
    for (int q = 0; q < m; ++q)
        for (int l = 0; l < a.alphabet_size(); ++l) {
            int t = a.target(q, l);
            if (t >= 0)
                out.set_transition(cls[static_cast<std::size_t>(q)], l, cls[static_cast<std::size_t>(t)]);
        }
    out.set_initial(cls[static_cast<std::size_t>(a.initial())]);
    return trim(out); // renumbers in BFS order
}

// BFS renumbering makes isomorphism a structural equality; trim() already
// emits states in BFS discovery order, so canonical form is minimize alone.
inline SafetyAutomaton canonical_form(const SafetyAutomaton& a) { return minimize(a); }

// Per-coordinate integer cell indices of all accepted depth-k prefixes,
// sorted. Cell (c_1..c_n) stands for the closed box prod [c_i, c_i+1]/b^k.
inline std::vector<std::vector<std::int64_t>> enumerate_cells(const SafetyAutomaton& a, int k,
                                                              std::size_t cap = kDefaultStateCap) {
    SafetyAutomaton t = trim(a);
    std::vector<std::vector<std::int64_t>> cells;
    if (t.is_empty_automaton()) return cells;

    std::vector<std::int64_t> cell(static_cast<std::size_t>(t.arity()), 0);
    auto dfs = [&](auto&& self, int state, int depth) -> void {
        if (depth == k) {
            cells.push_back(cell);
            if (cells.size() > cap) throw resource_limit_error("enumerate_cells: too many cells");
            return;
        }
        for (int l = 0; l < t.alphabet_size(); ++l) {
            int tgt = t.target(state, l);
            if (tgt < 0) continue;
            auto digits = t.decode_letter(l);
            for (int i = 0; i < t.arity(); ++i)
                cell[static_cast<std::size_t>(i)] =
                    cell[static_cast<std::size_t>(i)] * t.base() + digits[static_cast<std::size_t>(i)];
            self(self, tgt, depth + 1);
            for (int i = 0; i < t.arity(); ++i)
                cell[static_cast<std::size_t>(i)] =
                    (cell[static_cast<std::size_t>(i)] - digits[static_cast<std::size_t>(i)]) / t.base();
        }
    };
    dfs(dfs, t.initial(), 0);
    std::sort(cells.begin(), cells.end());
    return cells;
}

} // namespace workbench
