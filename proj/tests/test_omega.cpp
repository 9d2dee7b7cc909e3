#include <catch2/catch_amalgamated.hpp>

#include "workbench/omega_order.hpp"

using namespace workbench;

TEST_CASE("the first Cantor endpoints in order") {
    OrderedEnumeration e = cantor_endpoints(8);
    std::vector<Rational> expected{Rational(0),     Rational(2, 3),  Rational(2, 9),
                                   Rational(8, 9),  Rational(2, 27), Rational(8, 27),
                                   Rational(20, 27), Rational(26, 27)};
    CHECK(e.elements == expected);
    CHECK_FALSE(e.deltas[0].has_value()); // the infinite left ray
    CHECK(*e.deltas[1] == Rational(1, 3));
    CHECK(*e.deltas[2] == Rational(1, 9));
    CHECK(*e.deltas[3] == Rational(1, 9));
    CHECK(cantor_endpoints(1).elements == std::vector<Rational>{Rational(0)});
}

TEST_CASE("generation counts: 2^(g-1) endpoints at delta 3^-g") {
    OrderedEnumeration e = cantor_endpoints(1 + 1 + 2 + 4 + 8 + 16);
    for (int g = 1; g <= 5; ++g) {
        std::size_t with_delta = 0;
        for (const auto& d : e.deltas)
            if (d && *d == Rational(1, pow_int(3, static_cast<unsigned>(g)))) ++with_delta;
        CHECK(with_delta == (std::size_t{1} << (g - 1)));
    }
}

TEST_CASE("the enumeration is sound for its declared order") {
    OrderedEnumeration e = cantor_endpoints(64);
    for (std::size_t k = 0; k < e.size(); ++k) {
        std::size_t predecessors = 0;
        for (std::size_t j = 0; j < e.size(); ++j)
            if (j != k && cantor_endpoint_precedes(e, j, k)) ++predecessors;
        CHECK(predecessors == k);
    }
    // deltas weakly decrease after the first element
    for (std::size_t k = 2; k < e.size(); ++k)
        CHECK(*e.deltas[k] <= *e.deltas[k - 1]);
}

TEST_CASE("product order: maxima first, then lexicographic") {
    auto tuples = product_order_prefix(2, 9);
    std::vector<std::vector<std::size_t>> expected{
        {0, 0}, {0, 1}, {1, 0}, {1, 1}, {0, 2}, {1, 2}, {2, 0}, {2, 1}, {2, 2}};
    CHECK(tuples == expected);
    // (0, 2/3) precedes (2/3, 0): indices (0,1) vs (1,0)
    CHECK(product_order_less({0, 1}, {1, 0}));
    CHECK_FALSE(product_order_less({1, 0}, {0, 1}));
    // soundness: position = predecessor count
    auto prefix = product_order_prefix(3, 100);
    for (std::size_t k = 0; k < prefix.size(); ++k) {
        std::size_t predecessors = 0;
        for (std::size_t j = 0; j < prefix.size(); ++j)
            if (j != k && product_order_less(prefix[j], prefix[k])) ++predecessors;
        CHECK(predecessors == k);
    }
}

TEST_CASE("the image order under the identity reproduces the base order") {
    auto id = image_order_prefix(
        1, [](const std::vector<Rational>& p) { return p[0]; },
        [](std::size_t n) { return cantor_endpoints(n); }, 12);
    CHECK(id.elements == cantor_endpoints(12).elements);
}

TEST_CASE("difference enumeration starts at zero and reaches both signs quickly") {
    OrderedEnumeration diff = dense_difference_set(10);
    CHECK(diff.elements[0] == Rational(0));
    bool pos = false, neg = false;
    for (const Rational& v : diff.elements) {
        if (v == Rational(2, 3)) pos = true;
        if (v == Rational(-2, 3)) neg = true;
    }
    CHECK(pos);
    CHECK(neg);
    // image order: the identity image of the first pair comes first
    CHECK(diff.elements[1] == Rational(0) - Rational(2, 3));
}

TEST_CASE("differences become dense in [-1, 1]") {
    OrderedEnumeration diff = dense_difference_set(2000);
    std::vector<Rational> sorted = diff.elements;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted.front() >= Rational(-1));
    CHECK(sorted.back() <= Rational(1));
    Rational mesh(1, 10);
    CHECK(sorted.front() - Rational(-1) < mesh);
    CHECK(Rational(1) - sorted.back() < mesh);
    Rational max_gap(0);
    for (std::size_t i = 1; i < sorted.size(); ++i)
        max_gap = std::max(max_gap, Rational(sorted[i] - sorted[i - 1]));
    CHECK(max_gap < mesh);
}

TEST_CASE("window witnesses stay in the window and avoid the blocked set") {
    // the gadgets run over the dense difference enumeration
    OrderedEnumeration d = dense_difference_set(512);
    Quadratic lambda = Quadratic::sqrt2();
    for (std::size_t e_idx : {0u, 1u, 2u, 5u}) {
        for (const Rational& u : {Rational(1, 2), Rational(1, 5)}) {
            Quadratic x = min_window_point(d, lambda, u, 6, e_idx);
            const Rational& e = d.elements[e_idx];
            CHECK((x - Quadratic(e)).sign() > 0);
            CHECK((Quadratic(e + u) - x).sign() > 0);
            // genuinely irrational: the zero element blocks itself, so the
            // witness is a nonzero scaled element
            CHECK(x.q != 0);
            for (std::size_t j = 0; j <= 6; ++j)
                if (d.elements[j] > e) CHECK((x - Quadratic(d.elements[j])).sign() < 0);
        }
    }
}

TEST_CASE("window witness errors") {
    OrderedEnumeration d = dense_difference_set(8);
    Quadratic lambda = Quadratic::sqrt2();
    CHECK_THROWS_AS(min_window_point(d, lambda, Rational(-1), 2, 1), invalid_argument_error);
    CHECK_THROWS_AS(min_window_point(d, lambda, Rational(1, 2), 20, 1), invalid_argument_error);
    // a rational scaling factor is rejected
    CHECK_THROWS_AS(min_window_point(d, Quadratic(Rational(2)), Rational(1, 2), 2, 1),
                    invalid_argument_error);
    // a tiny window with a short prefix cannot produce a witness
    CHECK_THROWS_AS(min_window_point(d, lambda, Rational(1, 1000000), 2, 1), refusal_error);
}

TEST_CASE("window offsets are injective, exactly") {
    OrderedEnumeration d = dense_difference_set(512);
    Quadratic lambda = Quadratic::sqrt2();
    CHECK(offsets_injective(d, lambda, Rational(1, 2), 5));
    CHECK(offsets_injective(d, lambda, Rational(1, 3), 8));
    for (std::size_t e = 0; e <= 5; ++e) {
        Quadratic off = window_offset(d, lambda, Rational(1, 2), 5, e);
        CHECK(off.sign() > 0);
        CHECK((Quadratic(Rational(1, 2)) - off).sign() > 0);
    }
}

TEST_CASE("the decoder inverts window offsets") {
    OrderedEnumeration d = dense_difference_set(512);
    Quadratic lambda = Quadratic::sqrt2();
    Rational a(-1, 2), b(1, 2);
    // an exact hit (distance zero) returns its element: injectivity makes it unique
    for (std::size_t e = 0; e <= 4; ++e) {
        Quadratic c = Quadratic(a) + window_offset(d, lambda, b - a, 4, e);
        CHECK(nearest_offset_element(d, lambda, c, a, b, 4) == e);
    }
    // a rational c just below a + offset(e) decodes back to e
    for (std::size_t e = 0; e <= 4; ++e) {
        Quadratic off = window_offset(d, lambda, b - a, 4, e);
        Rational c = a + rational_between(off - Quadratic(Rational(1, 1000000)), off);
        CHECK(nearest_offset_element(d, lambda, c, a, b, 4) == e);
    }
    // default element on an empty window
    CHECK(nearest_offset_element(d, lambda, Rational(0), Rational(1, 2), Rational(1, 3), 4) == 0);
}

TEST_CASE("constancy intervals certify the decoder level sets") {
    OrderedEnumeration d = dense_difference_set(512);
    Quadratic lambda = Quadratic::sqrt2();
    Rational a(-1, 2), b(1, 2);
    for (std::size_t e_idx = 0; e_idx <= 3; ++e_idx) {
        ProbeIIResult r = constancy_interval(d, lambda, a, b, 3, e_idx);
        REQUIRE(r.ok());
        CHECK(r.lo < r.hi);
        CHECK(r.lo > a);
        CHECK(r.hi < b);
        // g is constantly e_idx on a grid over the certified interval
        for (int t = 0; t <= 4; ++t) {
            Rational c = r.lo + (r.hi - r.lo) * Rational(t, 4);
            CHECK(nearest_offset_element(d, lambda, c, a, b, 3) == e_idx);
        }
    }
}

TEST_CASE("probe failure modes are values") {
    OrderedEnumeration d = dense_difference_set(64);
    Quadratic lambda = Quadratic::sqrt2();
    ProbeIIResult empty = constancy_interval(d, lambda, Rational(1, 2), Rational(1, 2), 3, 1);
    CHECK(empty.status == ProbeIIResult::Status::EmptyWindow);
    ProbeIIResult bad = constancy_interval(d, lambda, Rational(0), Rational(1), 2, 5);
    CHECK(bad.status == ProbeIIResult::Status::PreconditionViolated);
}
