#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "oracle_helpers.hpp"
#include "workbench/algebra.hpp"
#include "workbench/builders.hpp"

using namespace workbench;
using Cells = std::set<std::vector<std::int64_t>>;

namespace {

Cells cells_of(const SafetyAutomaton& a, int k) {
    return oracle::words_to_cells(a, oracle::live_words(a, k));
}

// expansion-closed cell set of the denoted point set at depth k, computed
// from the saturated operand at a fixed deeper refinement
Cells geometric_cells(const SafetyAutomaton& saturated, int k, int extra = 5) {
    Cells fine = cells_of(saturated, k + extra);
    return oracle::coarsen_cells(fine, saturated.base(), k + extra, k);
}

SafetyAutomaton chain_word_automaton(int base, const std::vector<int>& digits, int loop_digit) {
    // accepts exactly digits . (loop_digit)^omega
    SafetyAutomaton a(base, 1);
    int s = a.add_state();
    a.set_initial(s);
    for (int d : digits) {
        int t = a.add_state();
        int tuple[1] = {d};
        a.set_transition(s, std::span<const int>(tuple), t);
        s = t;
    }
    int tuple[1] = {loop_digit};
    a.set_transition(s, std::span<const int>(tuple), s);
    return a;
}

} // namespace

TEST_CASE("union is idempotent on the Cantor set") {
    SafetyAutomaton c = cantor_set();
    CHECK(canonical_equal(set_union(c, c), c));
}

TEST_CASE("union language is the union of the operand languages") {
    oracle::DetRng rng(101);
    for (int trial = 0; trial < 25; ++trial) {
        SafetyAutomaton a = oracle::random_automaton(rng, 3, 1, 5, 2);
        SafetyAutomaton b = oracle::random_automaton(rng, 3, 1, 5, 2);
        SafetyAutomaton u = set_union(a, b);
        for (int k = 1; k <= 4; ++k) {
            auto wa = oracle::live_words(a, k);
            auto wb = oracle::live_words(b, k);
            wa.insert(wb.begin(), wb.end());
            CHECK(oracle::live_words(u, k) == wa);
        }
    }
}

TEST_CASE("intersection with the left third of [0,1]") {
    SafetyAutomaton left_third = box(3, {{Rational(0), Rational(1, 3)}});
    SafetyAutomaton i = set_intersection(cantor_set(), left_third);
    for (int k = 1; k <= 6; ++k)
        CHECK(count_prefixes(i, k) == pow_int(2, static_cast<unsigned>(k - 1)));
}

TEST_CASE("intersection with the empty set is empty") {
    SafetyAutomaton empty(3, 1);
    CHECK(set_intersection(cantor_set(), empty).is_empty_automaton());
}

TEST_CASE("intersection of saturated operands matches the brute-force cell oracle") {
    oracle::DetRng rng(42);
    for (int trial = 0; trial < 25; ++trial) {
        SafetyAutomaton a = saturate(oracle::random_automaton(rng, 3, 1, 4, 2));
        SafetyAutomaton b = saturate(oracle::random_automaton(rng, 3, 1, 4, 2));
        SafetyAutomaton i = set_intersection(a, b);
        // the coarsened common-cell sets only shrink with refinement; a
        // fixed deep refinement is the oracle
        const int k = 3, K = k + 6;
        Cells got = cells_of(i, k);
        Cells ca = cells_of(a, K), cb = cells_of(b, K);
        Cells common;
        std::set_intersection(ca.begin(), ca.end(), cb.begin(), cb.end(),
                              std::inserter(common, common.begin()));
        Cells expected = oracle::coarsen_cells(common, 3, K, k);
        CHECK(got == expected);
    }
}

TEST_CASE("product multiplies prefix counts") {
    SafetyAutomaton cc = set_product(cantor_set(), cantor_set());
    for (int k = 1; k <= 5; ++k)
        CHECK(count_prefixes(cc, k) == pow_int(4, static_cast<unsigned>(k)));

    oracle::DetRng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        SafetyAutomaton a = oracle::random_automaton(rng, 2, 1, 5, 2);
        SafetyAutomaton b = oracle::random_automaton(rng, 2, 1, 5, 2);
        SafetyAutomaton p = set_product(a, b);
        for (int k = 0; k <= 5; ++k)
            CHECK(count_prefixes(p, k) == count_prefixes(a, k) * count_prefixes(b, k));
    }
}

TEST_CASE("product with the empty set is empty") {
    CHECK(set_product(SafetyAutomaton(3, 1), cantor_set()).is_empty_automaton());
}

TEST_CASE("product letters interleave the operand words") {
    oracle::DetRng rng(12);
    SafetyAutomaton a = oracle::random_automaton(rng, 3, 1, 4, 2);
    SafetyAutomaton b = oracle::random_automaton(rng, 3, 1, 4, 2);
    SafetyAutomaton p = set_product(a, b);
    const int k = 3;
    std::set<std::vector<int>> expected;
    for (const auto& wa : oracle::live_words(a, k))
        for (const auto& wb : oracle::live_words(b, k)) {
            std::vector<int> w;
            for (int i = 0; i < k; ++i)
                w.push_back(wa[static_cast<std::size_t>(i)] * 3 + wb[static_cast<std::size_t>(i)]);
            expected.insert(w);
        }
    CHECK(oracle::live_words(p, k) == expected);
}

TEST_CASE("projecting a product back gives the factor") {
    SafetyAutomaton c = cantor_set();
    SafetyAutomaton cc = set_product(c, c);
    CHECK(canonical_equal(project(cc, {1}), c));
    CHECK(canonical_equal(project(set_product(c, full_box(3, 1)), {1}), c));
}

TEST_CASE("projecting the diagonal fills the interval") {
    SafetyAutomaton diag = relation_eq(3, 2, 1, 2);
    CHECK(canonical_equal(project(diag, {1}), full_box(3, 1)));
}

TEST_CASE("projection equals the word-level projection oracle") {
    oracle::DetRng rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        SafetyAutomaton a = oracle::random_automaton(rng, 2, 2, 5, 3);
        SafetyAutomaton p = project(a, {1});
        for (int k = 1; k <= 4; ++k) {
            std::set<std::vector<int>> expected;
            for (const auto& w : oracle::live_words(a, k)) {
                std::vector<int> proj;
                for (int letter : w) proj.push_back(a.decode_letter(letter)[0]);
                expected.insert(proj);
            }
            CHECK(oracle::live_words(p, k) == expected);
        }
    }
}

TEST_CASE("projection never increases prefix counts") {
    oracle::DetRng rng(14);
    for (int trial = 0; trial < 20; ++trial) {
        SafetyAutomaton a = oracle::random_automaton(rng, 2, 2, 6, 3);
        SafetyAutomaton p = project(a, {2});
        for (int k = 0; k <= 5; ++k)
            CHECK(count_prefixes(p, k) <= count_prefixes(a, k));
    }
}

TEST_CASE("the two expansions of 1/3 are canonically equal after saturation") {
    SafetyAutomaton third_a = chain_word_automaton(3, {1}, 0); // 0.1000...
    SafetyAutomaton third_b = chain_word_automaton(3, {0}, 2); // 0.0222...
    CHECK(canonical_equal(third_a, third_b));
    CHECK_FALSE(minimize(third_a) == minimize(third_b));
    // saturation really adds the twin expansion
    CHECK(count_prefixes(saturate(third_a), 2) == 2);
}

TEST_CASE("saturate is idempotent") {
    CHECK(saturate(SafetyAutomaton(3, 1)).is_empty_automaton());
    SafetyAutomaton sc = saturate(cantor_set());
    CHECK(minimize(saturate(sc)) == minimize(sc));
    CHECK(canonical_equal(sc, cantor_set()));

    oracle::DetRng rng(15);
    for (int trial = 0; trial < 25; ++trial) {
        SafetyAutomaton a = oracle::random_automaton(rng, 3, 1, 5, 2);
        SafetyAutomaton s1 = saturate(a);
        SafetyAutomaton s2 = saturate(s1);
        CHECK(minimize(s1) == minimize(s2));
    }
    // a two-track case
    SafetyAutomaton cc = set_product(cantor_set(), cantor_set());
    CHECK(minimize(saturate(saturate(cc))) == minimize(saturate(cc)));
}

TEST_CASE("boolean laws hold canonically") {
    oracle::DetRng rng(16);
    SafetyAutomaton full = full_box(3, 1);
    for (int trial = 0; trial < 10; ++trial) {
        SafetyAutomaton a = oracle::random_automaton(rng, 3, 1, 4, 2);
        SafetyAutomaton b = oracle::random_automaton(rng, 3, 1, 4, 2);
        SafetyAutomaton c = oracle::random_automaton(rng, 3, 1, 4, 2);
        CHECK(canonical_equal(set_union(a, b), set_union(b, a)));
        CHECK(canonical_equal(set_union(set_union(a, b), c), set_union(a, set_union(b, c))));
        SafetyAutomaton sa = saturate(a), sb = saturate(b), sc = saturate(c);
        CHECK(canonical_equal(set_intersection(sa, sb), set_intersection(sb, sa)));
        CHECK(canonical_equal(set_intersection(set_intersection(sa, sb), sc),
                              set_intersection(sa, set_intersection(sb, sc))));
        CHECK(canonical_equal(set_intersection(sa, full), a));
    }
}

TEST_CASE("shape mismatches are rejected") {
    CHECK_THROWS_AS(set_union(cantor_set(), full_box(3, 2)), invalid_argument_error);
    CHECK_THROWS_AS(set_union(cantor_set(), full_box(2, 1)), invalid_argument_error);
    CHECK_THROWS_AS(set_intersection(cantor_set(), full_box(2, 1)), invalid_argument_error);
    CHECK_THROWS_AS(set_product(cantor_set(), full_box(2, 1)), invalid_argument_error);
    CHECK_THROWS_AS(project(cantor_set(), {}), invalid_argument_error);
    CHECK_THROWS_AS(project(cantor_set(), {2}), invalid_argument_error);
    CHECK_THROWS_AS(canonical_equal(cantor_set(), full_box(3, 2)), invalid_argument_error);
}

TEST_CASE("subset_of agrees with cell containment") {
    SafetyAutomaton c = cantor_set();
    SafetyAutomaton full = full_box(3, 1);
    CHECK(subset_of(c, full));
    CHECK_FALSE(subset_of(full, c));
    CHECK(subset_of(c, c));
    SafetyAutomaton left = box(3, {{Rational(0), Rational(1, 3)}});
    CHECK(subset_of(set_intersection(saturate(c), left), c));
}

TEST_CASE("saturated cell sets stabilize to the geometric cells") {
    // {1/3} as 0.1000... only: geometric cells at depth 2 are {02, 10}
    SafetyAutomaton third = chain_word_automaton(3, {1}, 0);
    Cells got = geometric_cells(saturate(third), 2);
    Cells expected{{3}, {2}};
    CHECK(got == expected);
}

namespace {

// cells whose closed boxes the denoted set touches, from deep raw prefixes:
// a depth-K cell contributes its coarsening and, where it sits on a cell
// boundary, the boundary neighbor (the supersets shrink to the truth as K
// grows, by compactness of the denoted set)
Cells touched_cells_oracle(const SafetyAutomaton& raw, int k, int K) {
    Cells out;
    std::int64_t ratio = 1;
    for (int i = 0; i < K - k; ++i) ratio *= raw.base();
    std::int64_t limit = 1;
    for (int i = 0; i < k; ++i) limit *= raw.base();
    std::vector<std::vector<std::int64_t>> options;
    for (const auto& fine : oracle::words_to_cells(raw, oracle::live_words(raw, K))) {
        options.assign(fine.size(), {});
        for (std::size_t j = 0; j < fine.size(); ++j) {
            std::int64_t c = fine[j] / ratio;
            options[j].push_back(c);
            if (fine[j] % ratio == 0 && c > 0) options[j].push_back(c - 1);
            if ((fine[j] + 1) % ratio == 0 && c + 1 < limit) options[j].push_back(c + 1);
        }
        std::vector<std::size_t> pick(fine.size(), 0);
        while (true) {
            std::vector<std::int64_t> cell(fine.size());
            for (std::size_t j = 0; j < fine.size(); ++j) cell[j] = options[j][pick[j]];
            out.insert(std::move(cell));
            std::size_t j = fine.size();
            while (j > 0 && ++pick[j - 1] == options[j - 1].size()) pick[--j] = 0;
            if (j == 0) break;
        }
    }
    return out;
}

} // namespace

TEST_CASE("saturation produces exactly the touched cells of the denoted set") {
    oracle::DetRng rng(90125);
    for (int trial = 0; trial < 20; ++trial) {
        SafetyAutomaton a = oracle::random_automaton(rng, 3, 1, 4, 2);
        SafetyAutomaton s = saturate(a);
        const int k = 3;
        Cells got = cells_of(s, k);
        CHECK(got == touched_cells_oracle(a, k, k + 6));
    }
    for (int trial = 0; trial < 10; ++trial) {
        SafetyAutomaton a = oracle::random_automaton(rng, 2, 2, 4, 2);
        SafetyAutomaton s = saturate(a);
        const int k = 2;
        Cells got = cells_of(s, k);
        CHECK(got == touched_cells_oracle(a, k, k + 6));
    }
}
