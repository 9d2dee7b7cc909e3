#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "workbench/algebra.hpp"
#include "workbench/builders.hpp"
#include "workbench/digit_restriction.hpp"
#include "workbench/numerics.hpp"

using namespace workbench;

namespace {

// base-b digits of a sampled point, recovered through exact integer scaling
std::vector<int> recover_digits(double x, int base, int depth) {
    double scaled = x * std::pow(static_cast<double>(base), depth);
    auto cell = static_cast<long long>(std::llround(scaled));
    std::vector<int> digits(static_cast<std::size_t>(depth));
    for (int i = depth - 1; i >= 0; --i) {
        digits[static_cast<std::size_t>(i)] = static_cast<int>(cell % base);
        cell /= base;
    }
    return digits;
}

} // namespace

TEST_CASE("samples of the Cantor set only use digits 0 and 2") {
    PointSample s = sample_points(cantor_set(), 1000, 12, 7);
    REQUIRE(s.points.size() == 1000);
    for (const auto& p : s.points)
        for (int d : recover_digits(p[0], 3, 12)) CHECK((d == 0 || d == 2));
}

TEST_CASE("samples of the full box land on the grid") {
    PointSample s = sample_points(full_box(3, 1), 10, 4, 1);
    for (const auto& p : s.points) {
        double scaled = p[0] * 81.0;
        CHECK(scaled == Catch::Approx(std::round(scaled)).margin(1e-9));
    }
}

TEST_CASE("sampling is a pure function of the seed") {
    PointSample a = sample_points(sierpinski_carpet(), 500, 9, 12345);
    PointSample b = sample_points(sierpinski_carpet(), 500, 9, 12345);
    CHECK(a.points == b.points);
    PointSample c = sample_points(sierpinski_carpet(), 500, 9, 54321);
    CHECK(a.points != c.points);
}

TEST_CASE("sampling rejects empty sets and bad arguments") {
    CHECK_THROWS_AS(sample_points(SafetyAutomaton(3, 1), 10, 4, 0), invalid_argument_error);
    CHECK_THROWS_AS(sample_points(cantor_set(), 0, 4, 0), invalid_argument_error);
}

TEST_CASE("box-count slopes approach the spectral dimension") {
    PointSample cs = sample_points(cantor_set(), 20000, 12, 3);
    double cantor_dim = std::log(2.0) / std::log(3.0);
    CHECK(box_count_estimate(cs, 4, 10).slope == Catch::Approx(cantor_dim).margin(0.05));

    // depths where the sample comfortably saturates every box
    PointSample fs = sample_points(full_box(3, 1), 20000, 12, 4);
    CHECK(box_count_estimate(fs, 4, 7).slope == Catch::Approx(1.0).margin(0.05));

    PointSample ss = sample_points(singleton(3, {Rational(1, 4)}), 100, 12, 5);
    CHECK(box_count_estimate(ss, 2, 10).slope == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("box-count estimator validates depth ranges") {
    PointSample s = sample_points(cantor_set(), 100, 6, 9);
    CHECK_THROWS_AS(box_count_estimate(s, 3, 3), invalid_argument_error);
    CHECK_THROWS_AS(box_count_estimate(s, 2, 7), invalid_argument_error);
}

TEST_CASE("the diagonal projection of the Cantor square fills its range") {
    SafetyAutomaton cc = set_product(cantor_set(), cantor_set());
    PointSample s = sample_points(cc, 100000, 9, 20260811);
    ProjectionReport rep = project_measure_estimate(s, {0.5, 0.5}, std::pow(3.0, -8));
    CHECK(rep.covered_fraction >= 0.95);
}

TEST_CASE("projection of a repeated singleton covers nothing") {
    SafetyAutomaton pp = set_product(singleton(3, {Rational(1, 4)}), singleton(3, {Rational(1, 4)}));
    PointSample s = sample_points(pp, 50, 8, 1);
    ProjectionReport rep = project_measure_estimate(s, {0.5, 0.5}, 1e-3);
    CHECK(rep.covered_fraction == 0.0);
}

TEST_CASE("scan reports reproduce bit-identically under the same seed") {
    SafetyAutomaton cc = set_product(cantor_set(), cantor_set());
    PointSample s = sample_points(cc, 2000, 9, 99);
    auto r1 = marstrand_scan(s, 5, 1e-3, 7);
    auto r2 = marstrand_scan(s, 5, 1e-3, 7);
    REQUIRE(r1.size() == r2.size());
    for (std::size_t i = 0; i < r1.size(); ++i) {
        CHECK(r1[i].covered_fraction == r2[i].covered_fraction);
        CHECK(r1[i].direction == r2[i].direction);
    }
    auto r3 = marstrand_scan(s, 5, 1e-3, 8);
    CHECK(r1[0].direction != r3[0].direction);
    CHECK_THROWS_AS(marstrand_scan(sample_points(cantor_set(), 10, 5, 0), 5, 1e-3, 7),
                    invalid_argument_error);
}

TEST_CASE("projection coverage separates full-dimensional sets from thin ones") {
    // equal sample sizes and resolution; the square of a sparse truncation
    // (digit positions 1, 17, 33 free, so 64 points with a wide box-count
    // plateau) occupies an order of magnitude fewer cells than the Cantor
    // square at every scanned angle
    const double delta = std::pow(2.0, -12);
    const int n = 4000;
    SafetyAutomaton cc = set_product(cantor_set(), cantor_set());
    PointSample sq = sample_points(cc, n, 30, 5);
    double max_square = 0;
    for (const auto& rep : marstrand_scan(sq, 25, delta, 17))
        max_square = std::max(max_square, rep.covered_fraction);

    std::vector<bool> period(16, false);
    period[0] = true;
    SafetyAutomaton sparse = es_truncate(DensityDescriptor::eventually_periodic({}, period), 40);
    SafetyAutomaton thin = set_product(sparse, sparse);
    PointSample ts = sample_points(thin, n, 40, 5);
    double max_thin = 0;
    for (const auto& rep : marstrand_scan(ts, 25, delta, 17))
        max_thin = std::max(max_thin, rep.covered_fraction);

    CHECK(max_square > max_thin);
    CHECK(max_thin < 0.1);
    CHECK(max_square > 0.3);
}

TEST_CASE("difference sets of positive-measure automata have interior") {
    SafetyAutomaton half = box(2, {{Rational(0), Rational(1, 2)}});
    SteinhausResult r1 = steinhaus_check(half, 1e-6);
    CHECK(r1.holds);
    CHECK_FALSE(r1.vacuous);

    SafetyAutomaton two_chunks = set_union(box(2, {{Rational(0), Rational(1, 5)}}),
                                           box(2, {{Rational(2, 5), Rational(1, 2)}}));
    SteinhausResult r2 = steinhaus_check(two_chunks, 1e-6);
    CHECK(r2.holds);
    CHECK_FALSE(r2.vacuous);
    CHECK(r2.measure_value == Catch::Approx(0.3).margin(1e-6));

    SteinhausResult r3 = steinhaus_check(cantor_set(), 1e-6);
    CHECK(r3.holds);
    CHECK(r3.vacuous);

    CHECK_THROWS_AS(steinhaus_check(full_box(2, 2), 1e-6), invalid_argument_error);
}
