#pragma once

#include <utility>
#include <vector>

#include "workbench/automaton.hpp"
#include "workbench/rational.hpp"

namespace workbench {

// a_0 = 2, a_{n+1} = 2^{a_n}; returns [a_0 .. a_{levels-1}]. Level 6 ends at
// a_5 = 2^65536 (a 65537-bit integer); beyond that the numbers stop being
// representable, so the call refuses.
inline std::vector<BigInt> tower_sequence(int levels) {
    if (levels < 1) throw invalid_argument_error("tower_sequence: need levels >= 1");
    if (levels > 6) throw invalid_argument_error("tower_sequence: levels > 6 not representable");
    std::vector<BigInt> a{BigInt(2)};
    for (int n = 1; n < levels; ++n) {
        unsigned shift = a.back().convert_to<unsigned>();
        a.push_back(BigInt(1) << shift);
    }
    return a;
}

// Finite description of a set S of positive integers: the digit positions
// of [0,1] reals that are allowed to be nonzero.
struct DensityDescriptor {
    enum class Kind { EventuallyPeriodic, Tower, Explicit };

    Kind kind = Kind::EventuallyPeriodic;
    int base = 2; // digit base of the produced automata
    std::vector<bool> preperiod;
    std::vector<bool> period;
    int levels = 0;              // Tower: S = union of [a_n, 2a_n], n < levels
    std::vector<bool> members;   // Explicit: positions 1..bound

    static DensityDescriptor eventually_periodic(std::vector<bool> pre, std::vector<bool> per,
                                                 int base = 2) {
        DensityDescriptor d;
        d.kind = Kind::EventuallyPeriodic;
        d.base = base;
        d.preperiod = std::move(pre);
        d.period = std::move(per);
        return d;
    }
    static DensityDescriptor tower(int levels, int base = 2) {
        DensityDescriptor d;
        d.kind = Kind::Tower;
        d.base = base;
        d.levels = levels;
        tower_sequence(levels); // validates the level count
        return d;
    }
    static DensityDescriptor explicit_set(std::vector<bool> members, int base = 2) {
        DensityDescriptor d;
        d.kind = Kind::Explicit;
        d.base = base;
        d.members = std::move(members);
        return d;
    }

    bool contains(const BigInt& m) const {
        if (m < 1) return false;
        switch (kind) {
        case Kind::EventuallyPeriodic: {
            BigInt pre_len(preperiod.size());
            if (m <= pre_len) return preperiod[(m - 1).convert_to<std::size_t>()];
            if (period.empty()) return false;
            BigInt idx = (m - pre_len - 1) % BigInt(period.size());
            return period[idx.convert_to<std::size_t>()];
        }
        case Kind::Tower: {
            for (const BigInt& a : tower_sequence(levels))
                if (a <= m && m <= 2 * a) return true;
            return false;
        }
        case Kind::Explicit:
            if (m > BigInt(members.size())) throw invalid_argument_error("position beyond explicit bound");
            return members[(m - 1).convert_to<std::size_t>()];
        }
        return false;
    }

    // |S intersect [1, m]|, exact
    BigInt count_upto(const BigInt& m) const {
        if (m < 1) return 0;
        switch (kind) {
        case Kind::EventuallyPeriodic: {
            BigInt total = 0;
            BigInt pre_len(preperiod.size());
            for (std::size_t i = 0; i < preperiod.size() && BigInt(i) < m; ++i)
                if (preperiod[i]) ++total;
            if (m <= pre_len || period.empty()) return total;
            BigInt tail = m - pre_len;
            BigInt per_len(period.size());
            BigInt full = tail / per_len, rest = tail % per_len;
            BigInt ones = 0;
            for (bool b : period)
                if (b) ++ones;
            total += full * ones;
            for (std::size_t i = 0; BigInt(i) < rest; ++i)
                if (period[i]) ++total;
            return total;
        }
        case Kind::Tower: {
            // the first two intervals [2,4] and [4,8] overlap in the single
            // point 4; merge before counting
            std::vector<std::pair<BigInt, BigInt>> merged;
            for (const BigInt& a : tower_sequence(levels)) {
                BigInt lo = a, hi = 2 * a;
                if (!merged.empty() && lo <= merged.back().second + 1)
                    merged.back().second = std::max(merged.back().second, hi);
                else
                    merged.emplace_back(lo, hi);
            }
            BigInt total = 0;
            for (const auto& [lo, hi] : merged) {
                BigInt h = std::min(hi, m);
                if (h >= lo) total += h - lo + 1;
            }
            return total;
        }
        case Kind::Explicit: {
            BigInt total = 0;
            for (std::size_t i = 0; i < members.size() && BigInt(i) < m; ++i)
                if (members[i]) ++total;
            return total;
        }
        }
        return 0;
    }
};

struct Checkpoint {
    BigInt m;
    Rational ratio;
    bool lower_side; // true: estimates liminf; false: estimates limsup
};

struct DensityBounds {
    Rational lower;
    Rational upper;
    std::vector<Checkpoint> checkpoints;
};

// Exact density information. Eventually periodic sets have a true limit
// (the period average). For towers the ratios are evaluated at the telltale
// points m = a_n - 1 (just before an interval, estimating the liminf) and
// m = 2 a_n (right after one, estimating the limsup); the reported bounds
// are the deepest checkpoints. Explicit descriptors give the empirical
// min/max of the running ratio.
inline DensityBounds density_bounds(const DensityDescriptor& s) {
    DensityBounds out;
    switch (s.kind) {
    case DensityDescriptor::Kind::EventuallyPeriodic: {
        Rational avg(0);
        if (!s.period.empty()) {
            int ones = 0;
            for (bool b : s.period)
                if (b) ++ones;
            avg = Rational(ones, static_cast<int>(s.period.size()));
        }
        out.lower = out.upper = avg;
        BigInt pre_len(s.preperiod.size()), per_len(std::max<std::size_t>(s.period.size(), 1));
        for (int j = 1; j <= 4; ++j) {
            BigInt m = pre_len + j * per_len;
            out.checkpoints.push_back({m, Rational(s.count_upto(m), m), j % 2 == 1});
        }
        break;
    }
    case DensityDescriptor::Kind::Tower: {
        std::vector<BigInt> a = tower_sequence(s.levels);
        for (int n = 0; n < s.levels; ++n) {
            if (n >= 1) {
                BigInt m = a[static_cast<std::size_t>(n)] - 1;
                out.checkpoints.push_back({m, Rational(s.count_upto(m), m), true});
            }
            BigInt m2 = 2 * a[static_cast<std::size_t>(n)];
            out.checkpoints.push_back({m2, Rational(s.count_upto(m2), m2), false});
        }
        Rational last_lower(1), last_upper(0);
        for (const Checkpoint& c : out.checkpoints)
            (c.lower_side ? last_lower : last_upper) = c.ratio;
        out.lower = last_lower;
        out.upper = last_upper;
        break;
    }
    case DensityDescriptor::Kind::Explicit: {
        if (s.members.empty()) throw invalid_argument_error("density_bounds: empty explicit descriptor");
        Rational lo(1), hi(0);
        for (std::size_t m = 1; m <= s.members.size(); ++m) {
            Rational r(s.count_upto(BigInt(m)), BigInt(m));
            lo = std::min(lo, r);
            hi = std::max(hi, r);
            if (m == s.members.size() / 2 || m == s.members.size())
                out.checkpoints.push_back({BigInt(m), r, m != s.members.size()});
        }
        out.lower = lo;
        out.upper = hi;
        break;
    }
    }
    return out;
}

struct EsDimensions {
    Rational lower; // Hausdorff dimension of E_S (multiply by k for powers)
    Rational upper; // packing dimension of E_S
    bool exact;
};

// The dimension pair (liminf density, limsup density). Eventually periodic
// and tower descriptors have exact limits; the infinite tower's limits are
// 0 and 1/2 regardless of the representable level count. Explicit
// descriptors only support estimates.
inline EsDimensions es_dimensions(const DensityDescriptor& s) {
    switch (s.kind) {
    case DensityDescriptor::Kind::EventuallyPeriodic: {
        DensityBounds b = density_bounds(s);
        return {b.lower, b.upper, true};
    }
    case DensityDescriptor::Kind::Tower:
        return {Rational(0), Rational(1, 2), true};
    case DensityDescriptor::Kind::Explicit: {
        DensityBounds b = density_bounds(s);
        return {b.lower, b.upper, false};
    }
    }
    return {Rational(0), Rational(0), false};
}

// Depth-k inner approximation of E_S: digit positions <= k follow S, all
// later positions are forced to 0, so the truncation is a finite subset of
// E_S whose depth-k boxes coincide with those of E_S.
inline SafetyAutomaton es_truncate(const DensityDescriptor& s, int depth) {
    if (depth < 1) throw invalid_argument_error("es_truncate: depth must be >= 1");
    if (s.kind == DensityDescriptor::Kind::Explicit &&
        static_cast<std::size_t>(depth) > s.members.size())
        throw invalid_argument_error("es_truncate: depth beyond explicit bound");
    SafetyAutomaton a(s.base, 1);
    for (int i = 0; i <= depth; ++i) a.add_state();
    a.set_initial(0);
    for (int i = 0; i < depth; ++i) {
        a.set_transition(i, 0, i + 1);
        if (s.contains(BigInt(i + 1)))
            for (int d = 1; d < s.base; ++d) a.set_transition(i, d, i + 1);
    }
    a.set_transition(depth, 0, depth);
    return a;
}

} // namespace workbench
