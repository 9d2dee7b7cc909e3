#pragma once

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include "workbench/algebra.hpp"
#include "workbench/builders.hpp"
#include "workbench/digit_restriction.hpp"
#include "workbench/dimension.hpp"
#include "workbench/expr.hpp"
#include "workbench/io.hpp"
#include "workbench/numerics.hpp"
#include "workbench/omega_order.hpp"
#include "workbench/parser.hpp"
#include "workbench/version.hpp"

namespace workbench {

struct RunOptions {
    double tol = 1e-9;                 // default tolerance for measure-like queries
    std::uint64_t seed = 0;            // default seed for randomized queries
    int prefix = 512;                  // enumeration prefix for the order gadgets
    int sample_count = 100000;         // sample size for scans and box counts
    std::size_t state_cap = kDefaultStateCap;
    std::string csv_path;              // optional scan table output
};

inline SafetyAutomaton evaluate(const Expr& e, const RunOptions& opt = {}) {
    check_types(e);
    auto rec = [&](auto&& self, const Expr& x) -> SafetyAutomaton {
        switch (x.kind) {
        case Expr::Kind::Cantor: return cantor_set();
        case Expr::Kind::Carpet: return sierpinski_carpet();
        case Expr::Kind::Menger: return menger_sponge();
        case Expr::Kind::Full: return full_box(3, x.arity);
        case Expr::Kind::Digits: return make_digit_set(x.base, x.arity, x.tuples);
        case Expr::Kind::Singleton: return singleton(x.base, x.coords);
        case Expr::Kind::Box: return box(x.base, x.sides, opt.state_cap);
        case Expr::Kind::Es: return es_truncate(*x.descriptor, x.es_depth);
        case Expr::Kind::Union:
            return set_union(self(self, x.children[0]), self(self, x.children[1]), opt.state_cap);
        case Expr::Kind::Inter:
            return set_intersection(self(self, x.children[0]), self(self, x.children[1]),
                                    opt.state_cap);
        case Expr::Kind::Product:
            return set_product(self(self, x.children[0]), self(self, x.children[1]), opt.state_cap);
        case Expr::Kind::Proj:
            return project(self(self, x.children[0]), x.proj_coords, opt.state_cap);
        case Expr::Kind::Affine:
            return affine_image(self(self, x.children[0]), x.affine, opt.state_cap);
        case Expr::Kind::Saturate:
            return saturate(self(self, x.children[0]), opt.state_cap);
        case Expr::Kind::Load: return load_file(x.path);
        }
        throw invalid_argument_error("unreachable expression kind");
    };
    return rec(rec, e);
}

namespace detail {

inline std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(12) << v;
    return os.str();
}

inline void header(std::ostringstream& os, const std::string& query_text, const RunOptions& opt) {
    os << "workbench " << kVersion << '\n';
    os << "query: " << query_text << '\n';
    os << "seed: " << opt.seed << "  tol: " << fmt(opt.tol) << "  prefix: " << opt.prefix
       << "  samples: " << opt.sample_count << "  cap: " << opt.state_cap << '\n';
    os << "---\n";
}

inline void dimension_lines(std::ostringstream& os, const DimensionResult& d) {
    os << "dim " << fmt(d.value) << " = log(" << fmt(d.rho()) << ")/log(" << d.base << ")\n";
    if (d.empty_set) {
        os << "witness: empty set\n";
        return;
    }
    os << "rho bracket: [" << fmt(d.rho_lo) << ", " << fmt(d.rho_hi) << "]"
       << (d.rho_exactly_one ? " (exactly 1)" : "") << '\n';
    os << "witness states: [";
    for (std::size_t i = 0; i < d.scc_witness.size(); ++i) {
        if (i) os << ',';
        os << d.scc_witness[i];
    }
    os << "]\n";
}

// marstrand sample depth: fine enough that box left-endpoints resolve delta
inline int scan_depth(int base, double delta) {
    int depth = 1;
    double cell = 1.0;
    while (cell > delta / 4 && depth < 48) {
        cell /= base;
        ++depth;
    }
    return depth;
}

} // namespace detail

inline std::string run(const Query& q, const RunOptions& opt = {}) {
    check_types(q);
    std::ostringstream os;
    detail::header(os, print(q), opt);
    switch (q.kind) {
    case Query::Kind::Empty:
        os << "empty: " << (is_empty(evaluate(q.exprs[0], opt)) ? "true" : "false") << '\n';
        break;
    case Query::Kind::Equal:
        os << "equal: "
           << (canonical_equal(evaluate(q.exprs[0], opt), evaluate(q.exprs[1], opt), opt.state_cap)
                   ? "true"
                   : "false")
           << '\n';
        break;
    case Query::Kind::Subset:
        os << "subset: "
           << (subset_of(evaluate(q.exprs[0], opt), evaluate(q.exprs[1], opt), opt.state_cap)
                   ? "true"
                   : "false")
           << '\n';
        break;
    case Query::Kind::Interior:
        os << "interior: " << (has_interior(evaluate(q.exprs[0], opt)) ? "true" : "false") << '\n';
        break;
    case Query::Kind::NowhereDense:
        os << "nowhere_dense: " << (is_nowhere_dense(evaluate(q.exprs[0], opt)) ? "true" : "false")
           << '\n';
        break;
    case Query::Kind::Dim:
        detail::dimension_lines(os, box_dimension(evaluate(q.exprs[0], opt)));
        break;
    case Query::Kind::Measure: {
        double tol = q.tol.value_or(opt.tol);
        os << "measure: " << detail::fmt(measure(evaluate(q.exprs[0], opt), tol)) << " (tol "
           << detail::fmt(tol) << ")\n";
        break;
    }
    case Query::Kind::Boxes:
        os << "boxes(" << q.depth << "): " << count_prefixes(evaluate(q.exprs[0], opt), q.depth)
           << '\n';
        break;
    case Query::Kind::Verdict: {
        Verdict v = avoids_compact_verdict(evaluate(q.exprs[0], opt));
        os << "verdict: "
           << (v.tag == Verdict::Tag::AvoidsCompactSet ? "AvoidsCompactSet"
                                                       : "DefinesAllCompactSets")
           << '\n';
        detail::dimension_lines(os, v.dimension);
        os << "probe: depth " << v.probe.depth << ", boxes " << v.probe.num_boxes << ", components "
           << v.probe.num_components << '\n';
        os << "rational-scalar column: AvoidsCompactSet (every automatic input)\n";
        break;
    }
    case Query::Kind::Densities: {
        DensityBounds b = density_bounds(*q.descriptor);
        os << "m, count/m, side\n";
        for (const Checkpoint& c : b.checkpoints)
            os << c.m << ", " << to_string(c.ratio) << " (~" << detail::fmt(to_double(c.ratio))
               << "), " << (c.lower_side ? "lower" : "upper") << '\n';
        os << "lower: " << to_string(b.lower) << "  upper: " << to_string(b.upper) << '\n';
        EsDimensions d = es_dimensions(*q.descriptor);
        if (d.exact)
            os << "limits: lower " << to_string(d.lower) << ", upper " << to_string(d.upper)
               << '\n';
        break;
    }
    case Query::Kind::EsDims: {
        EsDimensions d = es_dimensions(*q.descriptor);
        os << "dim_H: " << to_string(d.lower) << "  dim_P: " << to_string(d.upper)
           << "  exact: " << (d.exact ? "true" : "false") << '\n';
        break;
    }
    case Query::Kind::Steinhaus: {
        double tol = q.tol.value_or(opt.tol);
        SteinhausResult r = steinhaus_check(evaluate(q.exprs[0], opt), tol);
        os << "steinhaus: " << (r.holds ? "holds" : "failed") << " (measure "
           << detail::fmt(r.measure_value) << (r.vacuous ? ", vacuous)" : ")") << '\n';
        break;
    }
    case Query::Kind::Endpoints: {
        OrderedEnumeration e = cantor_endpoints(q.count);
        for (std::size_t i = 0; i < e.size(); ++i) {
            os << i << ": " << to_string(e.elements[i]) << " (delta ";
            if (e.deltas[i]) os << to_string(*e.deltas[i]);
            else os << "infinite";
            os << ")\n";
        }
        break;
    }
    case Query::Kind::ProbeII: {
        OrderedEnumeration d = dense_difference_set(static_cast<std::size_t>(opt.prefix));
        ProbeIIResult r =
            constancy_interval(d, Quadratic::sqrt2(), q.a, q.b, q.d_idx, q.e_idx);
        switch (r.status) {
        case ProbeIIResult::Status::Interval:
            os << "element " << q.e_idx << ": " << to_string(d.elements[q.e_idx])
               << ", window offset "
               << to_string(window_offset(d, Quadratic::sqrt2(), Rational(q.b - q.a), q.d_idx,
                                          q.e_idx))
               << '\n';
            os << "interval: [" << to_string(r.lo) << ", " << to_string(r.hi) << "] (length "
               << to_string(Rational(r.hi - r.lo)) << ")\n";
            break;
        case ProbeIIResult::Status::EmptyWindow:
            os << "failure: empty window (" << r.detail << ")\n";
            break;
        case ProbeIIResult::Status::PreconditionViolated:
            os << "failure: precondition violated (" << r.detail << ")\n";
            break;
        }
        break;
    }
    case Query::Kind::Marstrand: {
        SafetyAutomaton a = evaluate(q.exprs[0], opt);
        int depth = detail::scan_depth(a.base(), q.delta);
        std::uint64_t seed = q.seed.value_or(opt.seed);
        PointSample sample = sample_points(a, opt.sample_count, depth, seed, print(q.exprs[0]));
        auto reports = marstrand_scan(sample, q.angles, q.delta, seed);
        os << "sample: " << opt.sample_count << " points, depth " << depth << ", seed " << seed
           << '\n';
        os << "angle, direction, covered, occupied, range\n";
        double max_covered = 0;
        for (std::size_t i = 0; i < reports.size(); ++i) {
            const ProjectionReport& r = reports[i];
            os << i << ", (";
            for (std::size_t j = 0; j < r.direction.size(); ++j) {
                if (j) os << ' ';
                os << detail::fmt(r.direction[j]);
            }
            os << "), " << detail::fmt(r.covered_fraction) << ", " << r.occupied << ", ["
               << detail::fmt(r.range_lo) << ", " << detail::fmt(r.range_hi) << "]\n";
            max_covered = std::max(max_covered, r.covered_fraction);
        }
        os << "max covered_fraction: " << detail::fmt(max_covered) << '\n';
        if (!opt.csv_path.empty()) {
            std::ofstream csv(opt.csv_path);
            if (!csv) throw io_error("cannot open '" + opt.csv_path + "' for writing");
            csv << "angle_index,covered_fraction,occupied,range_lo,range_hi\n";
            for (std::size_t i = 0; i < reports.size(); ++i)
                csv << i << ',' << detail::fmt(reports[i].covered_fraction) << ','
                    << reports[i].occupied << ',' << detail::fmt(reports[i].range_lo) << ','
                    << detail::fmt(reports[i].range_hi) << '\n';
            os << "csv: " << opt.csv_path << '\n';
        }
        break;
    }
    case Query::Kind::BoxCount: {
        SafetyAutomaton a = evaluate(q.exprs[0], opt);
        PointSample sample =
            sample_points(a, opt.sample_count, q.k2, opt.seed, print(q.exprs[0]));
        BoxCountEstimate est = box_count_estimate(sample, q.k1, q.k2);
        os << "sample: " << opt.sample_count << " points, depth " << q.k2 << ", seed " << opt.seed
           << '\n';
        os << "k, boxes\n";
        for (const auto& [k, cnt] : est.counts) os << k << ", " << cnt << '\n';
        os << "slope: " << detail::fmt(est.slope) << "  residual: " << detail::fmt(est.residual)
           << '\n';
        if (!opt.csv_path.empty()) {
            std::ofstream csv(opt.csv_path);
            if (!csv) throw io_error("cannot open '" + opt.csv_path + "' for writing");
            csv << "depth,boxes\n";
            for (const auto& [k, cnt] : est.counts) csv << k << ',' << cnt << '\n';
            os << "csv: " << opt.csv_path << '\n';
        }
        break;
    }
    }
    return os.str();
}

} // namespace workbench
