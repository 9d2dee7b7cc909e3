#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "workbench/automaton.hpp"
#include "workbench/builders.hpp"
#include "workbench/dimension.hpp"

namespace workbench {

// mt19937_64 is bit-reproducible across standard libraries; the standard
// distributions are not, so draws below are hand-rolled.
struct SeededRng {
    explicit SeededRng(std::uint64_t seed) : eng(seed) {}
    std::uint64_t next() { return eng(); }
    std::uint32_t below(std::uint32_t n) {
        std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
        std::uint64_t x;
        do { x = eng(); } while (x >= limit);
        return static_cast<std::uint32_t>(x % n);
    }
    double unit() { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }
    std::mt19937_64 eng;
};

// Stable per-task seed derivation (splitmix64 step), so independent scan
// angles can be evaluated in any order or in parallel.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

struct PointSample {
    std::vector<std::vector<double>> points; // in [0,1]^arity
    int base = 2;
    int arity = 1;
    int depth = 0;          // digits of precision in every coordinate
    std::uint64_t seed = 0;
    std::string source;
};

// Uniform random walks through live transitions; each point is the left
// endpoint of the depth-`depth` box the walk reaches. Pure function of
// (automaton, count, depth, seed).
inline PointSample sample_points(const SafetyAutomaton& input, int count, int depth,
                                 std::uint64_t seed, std::string source = {}) {
    if (count < 1) throw invalid_argument_error("sample_points: count must be >= 1");
    if (depth < 1) throw invalid_argument_error("sample_points: depth must be >= 1");
    SafetyAutomaton a = trim(input);
    if (a.is_empty_automaton()) throw invalid_argument_error("sample_points: empty set");

    std::vector<std::vector<int>> letters(static_cast<std::size_t>(a.num_states()));
    for (int q = 0; q < a.num_states(); ++q)
        for (int l = 0; l < a.alphabet_size(); ++l)
            if (a.target(q, l) >= 0) letters[static_cast<std::size_t>(q)].push_back(l);

    PointSample sample;
    sample.base = a.base();
    sample.arity = a.arity();
    sample.depth = depth;
    sample.seed = seed;
    sample.source = std::move(source);
    sample.points.reserve(static_cast<std::size_t>(count));

    SeededRng rng(seed);
    for (int i = 0; i < count; ++i) {
        int q = a.initial();
        std::vector<double> x(static_cast<std::size_t>(a.arity()), 0.0);
        double scale = 1.0;
        for (int step = 0; step < depth; ++step) {
            const auto& ls = letters[static_cast<std::size_t>(q)];
            int l = ls[rng.below(static_cast<std::uint32_t>(ls.size()))];
            auto digits = a.decode_letter(l);
            scale /= a.base();
            for (int j = 0; j < a.arity(); ++j)
                x[static_cast<std::size_t>(j)] += digits[static_cast<std::size_t>(j)] * scale;
            q = a.target(q, l);
        }
        sample.points.push_back(std::move(x));
    }
    return sample;
}

struct BoxCountEstimate {
    double slope = 0.0;    // estimated dimension
    double residual = 0.0; // root mean squared residual of the fit
    std::vector<std::pair<int, std::size_t>> counts; // (depth, occupied boxes)
};

// Least-squares slope of log(occupied b^-k boxes) against k log b.
inline BoxCountEstimate box_count_estimate(const PointSample& sample, int k1, int k2) {
    if (k2 < k1 || k2 - k1 < 1) throw invalid_argument_error("box_count_estimate: need at least 2 depths");
    if (k2 > sample.depth) throw invalid_argument_error("box_count_estimate: depth exceeds sample precision");
    BoxCountEstimate est;
    double sx = 0, sy = 0, sxy = 0, sxx = 0;
    int n = 0;
    for (int k = k1; k <= k2; ++k) {
        double bk = std::pow(static_cast<double>(sample.base), k);
        // sample points are box left endpoints, so scaled coordinates are
        // either exact integers or at least one depth-level sub-cell above
        // one; the half sub-cell nudge makes flooring immune to rounding
        double nudge = 0.5 * std::pow(static_cast<double>(sample.base), k - sample.depth);
        std::set<std::vector<std::int64_t>> boxes;
        std::vector<std::int64_t> cell(static_cast<std::size_t>(sample.arity));
        for (const auto& p : sample.points) {
            for (std::size_t j = 0; j < p.size(); ++j) {
                auto c = static_cast<std::int64_t>(p[j] * bk + nudge);
                cell[j] = std::clamp<std::int64_t>(c, 0, static_cast<std::int64_t>(bk) - 1);
            }
            boxes.insert(cell);
        }
        est.counts.emplace_back(k, boxes.size());
        double x = k * std::log(static_cast<double>(sample.base));
        double y = std::log(static_cast<double>(boxes.size()));
        sx += x; sy += y; sxy += x * y; sxx += x * x; ++n;
    }
    est.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    double intercept = (sy - est.slope * sx) / n;
    double ss = 0;
    for (const auto& [k, cnt] : est.counts) {
        double x = k * std::log(static_cast<double>(sample.base));
        double r = std::log(static_cast<double>(cnt)) - (est.slope * x + intercept);
        ss += r * r;
    }
    est.residual = std::sqrt(ss / n);
    return est;
}

struct ProjectionReport {
    std::vector<double> direction;
    double resolution = 0.0;       // delta
    double covered_fraction = 0.0; // occupied cells * delta / range length
    double range_lo = 0.0;
    double range_hi = 0.0;
    std::size_t occupied = 0;
};

// Fraction of left-closed delta-cells of the projected range that contain a
// sample point; a sample-based lower-bound proxy for the projection measure.
inline ProjectionReport project_measure_estimate(const PointSample& sample,
                                                 const std::vector<double>& direction,
                                                 double delta) {
    if (!(delta > 0)) throw invalid_argument_error("project_measure_estimate: delta must be > 0");
    if (direction.size() != static_cast<std::size_t>(sample.arity))
        throw invalid_argument_error("project_measure_estimate: direction arity mismatch");
    ProjectionReport rep;
    rep.direction = direction;
    rep.resolution = delta;

    std::vector<double> t;
    t.reserve(sample.points.size());
    for (const auto& p : sample.points) {
        double acc = 0;
        for (std::size_t j = 0; j < p.size(); ++j) acc += direction[j] * p[j];
        t.push_back(acc);
    }
    auto [lo_it, hi_it] = std::minmax_element(t.begin(), t.end());
    rep.range_lo = *lo_it;
    rep.range_hi = *hi_it;
    double range = rep.range_hi - rep.range_lo;
    if (range <= 0) return rep; // a single value covers nothing measurable

    std::set<std::int64_t> cells;
    for (double v : t)
        cells.insert(static_cast<std::int64_t>(std::floor((v - rep.range_lo) / delta)));
    rep.occupied = cells.size();
    rep.covered_fraction = std::min(1.0, static_cast<double>(cells.size()) * delta / range);
    return rep;
}

// Random-direction projection scan. Directions are derived deterministically
// from (seed, angle index); in the plane they are unit vectors at a uniform
// angle in [0, pi), in higher arity rejection-sampled unit vectors.
inline std::vector<ProjectionReport> marstrand_scan(const PointSample& sample, int num_angles,
                                                    double delta, std::uint64_t seed) {
    if (sample.arity < 2) throw invalid_argument_error("marstrand_scan: need arity >= 2");
    if (num_angles < 1) throw invalid_argument_error("marstrand_scan: need at least one angle");
    std::vector<ProjectionReport> reports;
    reports.reserve(static_cast<std::size_t>(num_angles));
    for (int i = 0; i < num_angles; ++i) {
        SeededRng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
        std::vector<double> dir(static_cast<std::size_t>(sample.arity));
        if (sample.arity == 2) {
            double theta = rng.unit() * 3.14159265358979323846;
            dir[0] = std::cos(theta);
            dir[1] = std::sin(theta);
        } else {
            while (true) {
                double norm2 = 0;
                for (auto& d : dir) {
                    d = 2 * rng.unit() - 1;
                    norm2 += d * d;
                }
                if (norm2 > 0.01 && norm2 <= 1.0) {
                    double inv = 1.0 / std::sqrt(norm2);
                    for (auto& d : dir) d *= inv;
                    break;
                }
            }
        }
        reports.push_back(project_measure_estimate(sample, dir, delta));
    }
    return reports;
}

struct SteinhausResult {
    bool holds = false;
    bool vacuous = false; // measure below the threshold: hypothesis unmet
    double measure_value = 0.0;
};

// Positive-measure sets have difference sets with interior. The check is
// symbolic: D = (A - A + 1)/b as an affine image, then the exact interior
// test. Inputs of measure <= tol return vacuous-true.
inline SteinhausResult steinhaus_check(const SafetyAutomaton& a, double tol) {
    if (a.arity() != 1) throw invalid_argument_error("steinhaus_check: arity must be 1");
    SteinhausResult res;
    res.measure_value = measure(a, tol > 0 ? tol : 1e-9);
    if (!(res.measure_value > tol)) {
        res.holds = true;
        res.vacuous = true;
        return res;
    }
    SafetyAutomaton diff = affine_image(set_product(a, a), {{1, -1}, 1, 1});
    res.holds = has_interior(diff);
    return res;
}

} // namespace workbench
