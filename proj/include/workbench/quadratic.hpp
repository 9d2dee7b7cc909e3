#pragma once

#include <cmath>
#include <string>

#include "workbench/rational.hpp"

namespace workbench {

// Element of the quadratic field Q(sqrt 2), stored as p + q*sqrt(2) with
// rational p, q. The representation is unique, so equality is componentwise
// and ordering reduces to exact sign computations on rationals.
struct Quadratic {
    Rational p; // rational part
    Rational q; // coefficient of sqrt(2)

    Quadratic() = default;
    Quadratic(Rational rational_part, Rational sqrt2_part)
        : p(std::move(rational_part)), q(std::move(sqrt2_part)) {}
    explicit Quadratic(const Rational& r) : p(r), q(0) {}

    static Quadratic sqrt2() { return Quadratic(Rational(0), Rational(1)); }

    bool is_rational() const { return q == 0; }

    // sign of p + q*sqrt(2): when p and q disagree in sign the comparison
    // p^2 vs 2q^2 decides, since sqrt(2) is irrational.
    int sign() const {
        int sp = p.sign();
        int sq = q.sign();
        if (sq == 0) return sp;
        if (sp == 0) return sq;
        if (sp == sq) return sp;
        // opposite signs: |p| vs |q|*sqrt(2)  <=>  p^2 vs 2 q^2
        Rational lhs = p * p;
        Rational rhs = 2 * q * q;
        if (lhs == rhs) return 0; // impossible for q != 0, kept for totality
        return (lhs > rhs) ? sp : sq;
    }

    double to_double() const {
        return workbench::to_double(p) + workbench::to_double(q) * std::sqrt(2.0);
    }

    friend Quadratic operator+(const Quadratic& a, const Quadratic& b) {
        return {a.p + b.p, a.q + b.q};
    }
    friend Quadratic operator-(const Quadratic& a, const Quadratic& b) {
        return {a.p - b.p, a.q - b.q};
    }
    friend Quadratic operator-(const Quadratic& a) { return {-a.p, -a.q}; }
    friend Quadratic operator*(const Quadratic& a, const Quadratic& b) {
        return {a.p * b.p + 2 * a.q * b.q, a.p * b.q + a.q * b.p};
    }
    friend Quadratic operator*(const Rational& r, const Quadratic& a) {
        return {r * a.p, r * a.q};
    }

    friend bool operator==(const Quadratic& a, const Quadratic& b) {
        return a.p == b.p && a.q == b.q;
    }
    friend bool operator!=(const Quadratic& a, const Quadratic& b) { return !(a == b); }
    friend bool operator<(const Quadratic& a, const Quadratic& b) {
        return (a - b).sign() < 0;
    }
    friend bool operator>(const Quadratic& a, const Quadratic& b) { return b < a; }
    friend bool operator<=(const Quadratic& a, const Quadratic& b) { return !(b < a); }
    friend bool operator>=(const Quadratic& a, const Quadratic& b) { return !(a < b); }
};

inline Quadratic abs(const Quadratic& a) { return a.sign() < 0 ? -a : a; }

// |a| < |b|, decided on squares (both squares are again in Q(sqrt 2)).
inline bool abs_less(const Quadratic& a, const Quadratic& b) {
    return (a * a - b * b).sign() < 0;
}

inline std::string to_string(const Quadratic& a) {
    if (a.q == 0) return to_string(a.p);
    std::string s;
    if (a.p != 0) s += to_string(a.p) + " + ";
    s += to_string(a.q) + "*sqrt(2)";
    return s;
}

// Some rational strictly inside the open interval (lo, hi). Scans dyadic
// grids of increasing resolution; exact verification at every candidate.
inline Rational rational_between(const Quadratic& lo, const Quadratic& hi) {
    if ((hi - lo).sign() <= 0) throw invalid_argument_error("rational_between: empty interval");
    double mid = (lo.to_double() + hi.to_double()) / 2.0;
    for (int m = 1; m < 4096; m *= 2) {
        BigInt denom = pow_int(2, static_cast<unsigned>(m));
        BigInt j(std::llround(mid * std::pow(2.0, m)));
        for (BigInt cand = j - 2; cand <= j + 2; ++cand) {
            Quadratic r{Rational(cand, denom), Rational(0)};
            if ((r - lo).sign() > 0 && (hi - r).sign() > 0) return r.p;
        }
        if (m > 60) {
            // beyond double resolution: bisect exactly on the dyadic grid
            break;
        }
    }
    // exact fallback: refine a dyadic bracket around the interval
    BigInt denom = 2;
    while (true) {
        // any multiple of 1/denom strictly inside works once 2/denom < hi-lo
        Quadratic width = hi - lo;
        Quadratic two_over(Rational(2, denom), Rational(0));
        if ((width - two_over).sign() > 0) {
            // find j with lo < j/denom < hi by exact search from floor(lo*denom)
            BigInt j = floor_rat(lo.p + Rational(1)) * denom; // coarse start
            // walk down then up; bounded because the interval has positive width
            Quadratic step{Rational(1, denom), Rational(0)};
            Quadratic cand{Rational(j, denom), Rational(0)};
            while ((cand - lo).sign() > 0) { cand = cand - step; --j; }
            while (!((cand - lo).sign() > 0 && (hi - cand).sign() > 0)) { cand = cand + step; ++j; }
            return cand.p;
        }
        denom *= 2;
    }
}

} // namespace workbench
