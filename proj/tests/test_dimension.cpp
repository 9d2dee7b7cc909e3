#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "oracle_helpers.hpp"
#include "workbench/algebra.hpp"
#include "workbench/builders.hpp"
#include "workbench/dimension.hpp"

using namespace workbench;

namespace {

// least-squares slope of log3(count_prefixes) against k; oracle for the
// spectral dimension on exactly self-similar counts
double prefix_slope(const SafetyAutomaton& a, int k1, int k2) {
    double sx = 0, sy = 0, sxy = 0, sxx = 0;
    int n = 0;
    for (int k = k1; k <= k2; ++k) {
        double x = static_cast<double>(k);
        double y = std::log(to_double(count_prefixes(a, k))) / std::log(3.0);
        sx += x; sy += y; sxy += x * y; sxx += x * x; ++n;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

SafetyAutomaton at_most_one_one() {
    // base-2 strings with at most one digit 1: prefix counts k+1, rho = 1
    SafetyAutomaton a(2, 1);
    int s0 = a.add_state(), s1 = a.add_state();
    a.set_initial(s0);
    a.set_transition(s0, 0, s0);
    a.set_transition(s0, 1, s1);
    a.set_transition(s1, 0, s1);
    return a;
}

} // namespace

TEST_CASE("spectral dimension of the classic fractals") {
    const double log3 = std::log(3.0);
    DimensionResult c = box_dimension(cantor_set());
    CHECK(c.value == Catch::Approx(std::log(2.0) / log3).epsilon(1e-12));
    CHECK(c.rho_lo == c.rho_hi); // equal row sums give the exact radius
    CHECK(prefix_slope(cantor_set(), 1, 20) == Catch::Approx(c.value).epsilon(1e-12));

    DimensionResult carpet = box_dimension(sierpinski_carpet());
    CHECK(carpet.value == Catch::Approx(std::log(8.0) / log3).epsilon(1e-12));
    CHECK(prefix_slope(sierpinski_carpet(), 1, 12) == Catch::Approx(carpet.value).epsilon(1e-12));

    DimensionResult menger = box_dimension(menger_sponge());
    CHECK(menger.value == Catch::Approx(std::log(20.0) / log3).epsilon(1e-12));

    CHECK(box_dimension(full_box(3, 1)).value == Catch::Approx(1.0));
    CHECK(box_dimension(full_box(3, 2)).value == Catch::Approx(2.0));
    CHECK(box_dimension(full_box(2, 3)).value == Catch::Approx(3.0));
}

TEST_CASE("dimension of the empty set is zero with an explicit flag") {
    DimensionResult d = box_dimension(SafetyAutomaton(3, 1));
    CHECK(d.empty_set);
    CHECK(d.value == 0.0);
    CHECK(d.scc_witness.empty());
}

TEST_CASE("product dimension adds exactly in log form") {
    SafetyAutomaton cc = set_product(cantor_set(), cantor_set());
    DimensionResult d = box_dimension(cc);
    CHECK(d.rho_lo == 4.0);
    CHECK(d.rho_hi == 4.0);
    CHECK(d.value == Catch::Approx(2 * box_dimension(cantor_set()).value).epsilon(1e-13));

    oracle::DetRng rng(5150);
    for (int trial = 0; trial < 25; ++trial) {
        SafetyAutomaton a = oracle::random_automaton(rng, 3, 1, 5, 3);
        SafetyAutomaton b = oracle::random_automaton(rng, 3, 1, 5, 3);
        DimensionResult da = box_dimension(a), db = box_dimension(b);
        DimensionResult dp = box_dimension(set_product(a, b));
        CHECK(dp.rho() == Catch::Approx(da.rho() * db.rho()).margin(1e-10));
    }
}

TEST_CASE("projection does not raise dimension") {
    oracle::DetRng rng(606);
    for (int trial = 0; trial < 25; ++trial) {
        SafetyAutomaton a = oracle::random_automaton(rng, 2, 2, 6, 3);
        DimensionResult da = box_dimension(a);
        DimensionResult dp = box_dimension(project(a, {1}));
        CHECK(dp.rho_lo <= da.rho_hi * (1 + 1e-12));
    }
}

TEST_CASE("measure of simple sets") {
    CHECK(measure(full_box(3, 1), 1e-9) == 1.0);
    CHECK(measure(cantor_set(), 1e-9) < 1e-9);
    CHECK(measure(box(3, {{Rational(0), Rational(2, 3)}}), 1e-9) ==
          Catch::Approx(2.0 / 3.0).margin(1e-9));
    CHECK(measure(SafetyAutomaton(3, 1), 1e-9) == 0.0);
    CHECK_THROWS_AS(measure(cantor_set(), 0.0), invalid_argument_error);
    CHECK_THROWS_AS(measure(cantor_set(), -1.0), invalid_argument_error);
}

TEST_CASE("positive measure forces full dimension and interior") {
    oracle::DetRng rng(707);
    int positive_seen = 0;
    for (int trial = 0; trial < 40; ++trial) {
        SafetyAutomaton a = oracle::random_automaton(rng, 2, 1, 5, 2);
        double m = measure(a, 1e-10);
        bool interior = has_interior(a);
        CHECK((m > 0) == interior);
        if (m > 1e-6) {
            ++positive_seen;
            CHECK(box_dimension(a).value == Catch::Approx(static_cast<double>(a.arity())));
        }
    }
    CHECK(positive_seen > 0);
}

TEST_CASE("interior and nowhere-dense answers on named sets") {
    CHECK_FALSE(has_interior(cantor_set()));
    CHECK(is_nowhere_dense(cantor_set()));
    SafetyAutomaton with_chunk = set_union(cantor_set(), box(3, {{Rational(0), Rational(1, 9)}}));
    CHECK(has_interior(with_chunk));
    CHECK_FALSE(is_nowhere_dense(with_chunk));

    SafetyAutomaton cc = set_product(cantor_set(), cantor_set());
    SafetyAutomaton diff = affine_image(cc, {{1, -1}, 1, 1});
    CHECK(has_interior(diff));
    CHECK_FALSE(has_interior(SafetyAutomaton(3, 1)));
}

TEST_CASE("dimension reaches the arity exactly on sets with interior") {
    oracle::DetRng rng(808);
    for (int trial = 0; trial < 25; ++trial) {
        SafetyAutomaton a = saturate(oracle::random_automaton(rng, 2, 1, 5, 2));
        DimensionResult d = box_dimension(a);
        CHECK(d.value >= -1e-15);
        CHECK(d.value <= a.arity() + 1e-12);
        bool full_dim = std::abs(d.value - a.arity()) < 1e-12;
        CHECK(full_dim == has_interior(a));
    }
}

TEST_CASE("disconnectedness probe on the named sets") {
    ProbeReport c3 = totally_disconnected_probe(cantor_set(), 3);
    CHECK(c3.disconnected);
    CHECK(c3.num_boxes == 8);
    CHECK(c3.num_components == 8);

    for (int k = 1; k <= 4; ++k)
        CHECK_FALSE(totally_disconnected_probe(full_box(3, 1), k).disconnected);
    CHECK_FALSE(totally_disconnected_probe(sierpinski_carpet(), 4).disconnected);
    CHECK(totally_disconnected_probe(singleton(3, {Rational(1, 3)}), 3).disconnected);
    CHECK_THROWS_AS(totally_disconnected_probe(cantor_set(), 0), invalid_argument_error);
}

TEST_CASE("verdicts of the compact-set dichotomy") {
    Verdict vc = avoids_compact_verdict(cantor_set());
    CHECK(vc.tag == Verdict::Tag::DefinesAllCompactSets);
    CHECK(vc.dimension.value > 0.6);

    Verdict vs = avoids_compact_verdict(singleton(3, {Rational(1, 3)}));
    CHECK(vs.tag == Verdict::Tag::AvoidsCompactSet);

    SafetyAutomaton sparse = at_most_one_one();
    for (int k = 1; k <= 6; ++k) CHECK(count_prefixes(sparse, k) == k + 1);
    Verdict vo = avoids_compact_verdict(sparse);
    CHECK(vo.tag == Verdict::Tag::AvoidsCompactSet);
    CHECK(vo.dimension.rho_exactly_one);

    CHECK_THROWS_AS(avoids_compact_verdict(sierpinski_carpet()), refusal_error);
    CHECK(avoids_compact_verdict(SafetyAutomaton(3, 1)).tag == Verdict::Tag::AvoidsCompactSet);
}
