#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "workbench/quadratic.hpp"
#include "workbench/rational.hpp"

namespace workbench {

// A finite prefix of a set enumerated in an order of type omega: the list
// position of an element is exactly its number of predecessors.
struct OrderedEnumeration {
    enum class OrderName { CantorEndpoint, ProductOrder, ImageOrder };
    OrderName order_name = OrderName::CantorEndpoint;
    std::vector<Rational> elements;
    // CantorEndpoint only: length of the complementary interval whose right
    // endpoint the element is; nullopt stands for the infinite left ray.
    std::vector<std::optional<Rational>> deltas;

    std::size_t size() const { return elements.size(); }
};

// Right endpoints of the complementary intervals of the middle-thirds
// Cantor set, ordered by decreasing interval length delta, then by value:
// 0 (the ray), 2/3, 2/9, 8/9, 2/27, 8/27, 20/27, 26/27, ...
// Generation g contributes 2^(g-1) endpoints, each with delta = 3^-g.
inline OrderedEnumeration cantor_endpoints(std::size_t count) {
    if (count < 1) throw invalid_argument_error("cantor_endpoints: need count >= 1");
    OrderedEnumeration e;
    e.order_name = OrderedEnumeration::OrderName::CantorEndpoint;
    e.elements.push_back(Rational(0));
    e.deltas.push_back(std::nullopt);
    for (int g = 1; e.elements.size() < count; ++g) {
        // surviving generation-(g-1) intervals have left endpoints
        // 0.d_1...d_{g-1} with ternary digits in {0,2}, ascending
        BigInt denom = pow_int(3, static_cast<unsigned>(g));
        Rational delta(1, denom);
        std::uint64_t intervals = std::uint64_t{1} << (g - 1);
        for (std::uint64_t i = 0; i < intervals && e.elements.size() < count; ++i) {
            BigInt num = 0;
            for (int bit = g - 2; bit >= 0; --bit)
                num = num * 3 + ((i >> bit) & 1u ? 2 : 0);
            e.elements.emplace_back(num * 3 + 2, denom);
            e.deltas.push_back(delta);
        }
    }
    return e;
}

// The declared order on endpoints, evaluated from the (delta, value) data
// rather than from list positions.
inline bool cantor_endpoint_precedes(const OrderedEnumeration& e, std::size_t i, std::size_t j) {
    const auto& di = e.deltas.at(i);
    const auto& dj = e.deltas.at(j);
    if (!di && !dj) return false;      // both infinite: same element
    if (!di) return true;              // infinite delta precedes everything
    if (!dj) return false;
    if (*di != *dj) return *di > *dj;  // longer complementary interval first
    return e.elements[i] < e.elements[j];
}

// Order of type omega on index tuples: compare the maximum entry first,
// then lexicographically. Tuples index an underlying omega-ordered set.
inline bool product_order_less(const std::vector<std::size_t>& a,
                               const std::vector<std::size_t>& b) {
    std::size_t ma = *std::max_element(a.begin(), a.end());
    std::size_t mb = *std::max_element(b.begin(), b.end());
    if (ma != mb) return ma < mb;
    return a < b;
}

// First `count` index tuples of the n-fold product order.
inline std::vector<std::vector<std::size_t>> product_order_prefix(std::size_t dims,
                                                                  std::size_t count) {
    if (dims < 1) throw invalid_argument_error("product_order_prefix: need dims >= 1");
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t m = 0; out.size() < count; ++m) {
        // all tuples over {0..m} containing m, in lexicographic order
        std::vector<std::size_t> t(dims, 0);
        while (true) {
            if (std::find(t.begin(), t.end(), m) != t.end()) {
                out.push_back(t);
                if (out.size() == count) break;
            }
            std::size_t i = dims;
            while (i > 0 && t[i - 1] == m) t[--i] = 0;
            if (i == 0) break;
            ++t[i - 1];
        }
    }
    return out;
}

// Image of the enumeration under f, ordered by first preimage: the rank of
// a value is the product-order position of the earliest tuple mapping to it.
// The base enumeration is grown on demand via `grow`.
template <typename F, typename Grow>
inline OrderedEnumeration image_order_prefix(std::size_t dims, F&& f, Grow&& grow,
                                             std::size_t count) {
    if (count < 1) throw invalid_argument_error("image_order_prefix: need count >= 1");
    if (dims < 1) throw invalid_argument_error("image_order_prefix: need dims >= 1");
    OrderedEnumeration out;
    out.order_name = OrderedEnumeration::OrderName::ImageOrder;
    OrderedEnumeration d = grow(1);
    std::set<Rational> seen;
    std::vector<Rational> args(dims);
    for (std::size_t m = 0; out.elements.size() < count; ++m) {
        if (d.size() <= m) d = grow(m + 1);
        // tuples over {0..m} containing m, lexicographic
        std::vector<std::size_t> t(dims, 0);
        while (out.elements.size() < count) {
            if (std::find(t.begin(), t.end(), m) != t.end()) {
                for (std::size_t i = 0; i < dims; ++i) args[i] = d.elements[t[i]];
                Rational v = f(args);
                if (seen.insert(v).second) out.elements.push_back(v);
            }
            std::size_t i = dims;
            while (i > 0 && t[i - 1] == m) t[--i] = 0;
            if (i == 0) break;
            ++t[i - 1];
        }
    }
    return out;
}

// First `count` distinct differences e - e' over pairs of Cantor endpoints,
// in the image of the product order.
inline OrderedEnumeration dense_difference_set(std::size_t count) {
    return image_order_prefix(
        2, [](const std::vector<Rational>& p) { return Rational(p[0] - p[1]); },
        [](std::size_t n) { return cantor_endpoints(n); }, count);
}

namespace detail {

inline void require_scaling(const Quadratic& lambda) {
    if (lambda.q == 0 || lambda.sign() <= 0)
        throw invalid_argument_error("gadget: scaling factor must be positive and irrational");
}

} // namespace detail

// First point of lambda*D (in enumeration order, which transports the order
// of D through the scaling) that lies in the open window (e, e+u) and has no
// element of D up to index d_idx in (e, x]. Throws when the enumerated
// prefix cannot certify a witness.
inline Quadratic min_window_point(const OrderedEnumeration& d, const Quadratic& lambda,
                                  const Rational& u, std::size_t d_idx, std::size_t e_idx) {
    detail::require_scaling(lambda);
    if (u <= 0) throw invalid_argument_error("min_window_point: window width must be positive");
    if (d_idx >= d.size() || e_idx >= d.size())
        throw invalid_argument_error("min_window_point: index beyond enumerated prefix");
    const Rational& e = d.elements[e_idx];
    Quadratic window_hi(e + u);
    for (std::size_t k = 0; k < d.size(); ++k) {
        Quadratic x = lambda * Quadratic(d.elements[k]);
        if (!((x - Quadratic(e)).sign() > 0 && (window_hi - x).sign() > 0)) continue;
        bool blocked = false;
        for (std::size_t j = 0; j <= d_idx; ++j) {
            const Rational& other = d.elements[j];
            if (other > e && (x - Quadratic(other)).sign() >= 0) { blocked = true; break; }
        }
        if (!blocked) return x;
    }
    throw refusal_error("min_window_point: no witness within the enumerated prefix of " +
                        std::to_string(d.size()) + " elements");
}

// Offset of the window witness from the window base; exactly injective in
// e over indices <= d_idx because the scaling factor is irrational.
inline Quadratic window_offset(const OrderedEnumeration& d, const Quadratic& lambda,
                               const Rational& u, std::size_t d_idx, std::size_t e_idx) {
    return min_window_point(d, lambda, u, d_idx, e_idx) - Quadratic(d.elements[e_idx]);
}

inline bool offsets_injective(const OrderedEnumeration& d, const Quadratic& lambda,
                              const Rational& u, std::size_t d_idx) {
    std::vector<Quadratic> seen;
    for (std::size_t e = 0; e <= d_idx; ++e) {
        Quadratic v = window_offset(d, lambda, u, d_idx, e);
        for (const Quadratic& w : seen)
            if (w == v) return false;
        seen.push_back(v);
    }
    return true;
}

// Decoder: the element (index) of D up to d_idx whose window offset is
// nearest to c - a; ties pick the earlier element. b <= a yields the first
// element of the enumeration. The probe point c may be any element of
// Q(sqrt 2), so exact hits on an offset are expressible.
inline std::size_t nearest_offset_element(const OrderedEnumeration& d, const Quadratic& lambda,
                                          const Quadratic& c, const Rational& a, const Rational& b,
                                          std::size_t d_idx) {
    if (b <= a) return 0;
    if (d_idx >= d.size())
        throw invalid_argument_error("nearest_offset_element: index beyond enumerated prefix");
    Rational u = b - a;
    Quadratic target = c - Quadratic(a);
    std::size_t best = 0;
    Quadratic best_dist;
    bool have = false;
    for (std::size_t e = 0; e <= d_idx; ++e) {
        Quadratic dist = abs(target - window_offset(d, lambda, u, d_idx, e));
        if (!have || (dist - best_dist).sign() < 0) {
            best = e;
            best_dist = dist;
            have = true;
        }
    }
    return best;
}

inline std::size_t nearest_offset_element(const OrderedEnumeration& d, const Quadratic& lambda,
                                          const Rational& c, const Rational& a, const Rational& b,
                                          std::size_t d_idx) {
    return nearest_offset_element(d, lambda, Quadratic(c), a, b, d_idx);
}

struct ProbeIIResult {
    enum class Status { Interval, EmptyWindow, PreconditionViolated };
    Status status = Status::EmptyWindow;
    Rational lo;
    Rational hi;
    std::string detail;

    bool ok() const { return status == Status::Interval; }
};

// Exhibits a rational-endpoint subinterval of (a, b) on which the decoder
// constantly returns e_idx: the window offsets of the elements up to d_idx
// partition the offset line into cells around each offset value, and any
// rational bracket strictly inside the cell of e_idx works. Degenerate
// windows and violated preconditions are reported as values, not errors.
inline ProbeIIResult constancy_interval(const OrderedEnumeration& d, const Quadratic& lambda,
                                        const Rational& a, const Rational& b, std::size_t d_idx,
                                        std::size_t e_idx) {
    ProbeIIResult res;
    if (a >= b) {
        res.status = ProbeIIResult::Status::EmptyWindow;
        res.detail = "window (a,b) is empty";
        return res;
    }
    if (e_idx > d_idx) {
        res.status = ProbeIIResult::Status::PreconditionViolated;
        res.detail = "element index exceeds the bound index";
        return res;
    }
    Rational u = b - a;
    Quadratic mine = window_offset(d, lambda, u, d_idx, e_idx);
    // nearest competing offsets on either side
    std::optional<Quadratic> below, above;
    for (std::size_t e = 0; e <= d_idx; ++e) {
        if (e == e_idx) continue;
        Quadratic v = window_offset(d, lambda, u, d_idx, e);
        if ((v - mine).sign() < 0) {
            if (!below || (v - *below).sign() > 0) below = v;
        } else {
            if (!above || (v - *above).sign() < 0) above = v;
        }
    }
    Quadratic cell_lo = below ? Rational(1, 2) * (*below + mine) : Quadratic(Rational(0));
    Quadratic cell_hi = above ? Rational(1, 2) * (*above + mine) : Quadratic(u);
    Rational t_lo = rational_between(cell_lo, mine);
    Rational t_hi = rational_between(mine, cell_hi);
    res.lo = a + t_lo;
    res.hi = a + t_hi;
    res.status = ProbeIIResult::Status::Interval;
    // defensive: the decoder agrees at both ends and in the middle
    for (const Rational& c : {res.lo, res.hi, Rational((res.lo + res.hi) / 2)})
        if (nearest_offset_element(d, lambda, c, a, b, d_idx) != e_idx) {
            res.status = ProbeIIResult::Status::PreconditionViolated;
            res.detail = "decoder disagreed on the certified interval";
            return res;
        }
    return res;
}

} // namespace workbench
