#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "workbench/builders.hpp"
#include "workbench/digit_restriction.hpp"
#include "workbench/rational.hpp"

namespace workbench {

// Abstract syntax of the set-expression language. Value semantics; children
// live in a plain vector.
struct Expr {
    enum class Kind {
        Cantor, Carpet, Menger, Full, Digits, Singleton, Box, Es,
        Union, Inter, Product, Proj, Affine, Saturate, Load
    };

    Kind kind = Kind::Cantor;
    int base = 3;
    int arity = 1;
    std::vector<std::vector<int>> tuples;                 // Digits
    std::vector<Rational> coords;                         // Singleton
    std::vector<std::pair<Rational, Rational>> sides;     // Box
    std::optional<DensityDescriptor> descriptor;          // Es
    std::string descriptor_path;                          // Es explicit file
    int es_depth = 0;                                     // Es
    std::vector<int> proj_coords;                         // Proj
    AffineSpec affine;                                    // Affine
    std::string path;                                     // Load
    std::vector<Expr> children;
};

// Query syntax: one operation over expressions plus its own parameters.
struct Query {
    enum class Kind {
        Empty, Equal, Subset, Interior, NowhereDense, Dim, Measure, Boxes,
        Verdict, Densities, EsDims, Steinhaus, Endpoints, ProbeII, Marstrand,
        BoxCount
    };

    Kind kind = Kind::Empty;
    std::vector<Expr> exprs;
    std::optional<double> tol;                  // measure, steinhaus
    int depth = 0;                              // boxes
    std::size_t count = 0;                      // endpoints
    Rational a, b;                              // probe_ii window
    std::size_t d_idx = 0, e_idx = 0;           // probe_ii indices
    int angles = 0;                             // marstrand
    double delta = 0.0;                         // marstrand
    std::optional<std::uint64_t> seed;          // marstrand
    int k1 = 0, k2 = 0;                         // boxcount depth range
    std::optional<DensityDescriptor> descriptor; // densities / es_dims
    std::string descriptor_path;
};

namespace detail {

inline std::string print_double(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

inline void print_bits(std::ostringstream& os, const std::vector<bool>& bits) {
    os << '[';
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (i) os << ',';
        os << (bits[i] ? 1 : 0);
    }
    os << ']';
}

inline void print_descriptor(std::ostringstream& os, const DensityDescriptor& d,
                             const std::string& explicit_path) {
    switch (d.kind) {
    case DensityDescriptor::Kind::Tower:
        os << "tower(" << d.levels << ")";
        break;
    case DensityDescriptor::Kind::EventuallyPeriodic:
        os << "periodic(";
        if (!d.preperiod.empty()) {
            print_bits(os, d.preperiod);
            os << ',';
        }
        print_bits(os, d.period);
        os << ')';
        break;
    case DensityDescriptor::Kind::Explicit:
        os << "explicit(" << explicit_path << ")";
        break;
    }
}

} // namespace detail

inline std::string print(const Expr& e) {
    std::ostringstream os;
    auto rec = [&](auto&& self, const Expr& x) -> void {
        switch (x.kind) {
        case Expr::Kind::Cantor: os << "cantor"; return;
        case Expr::Kind::Carpet: os << "carpet"; return;
        case Expr::Kind::Menger: os << "menger"; return;
        case Expr::Kind::Full:
            os << "full(" << x.arity << ")";
            return;
        case Expr::Kind::Digits: {
            os << "digits(" << x.base << ", " << x.arity << ", {";
            for (std::size_t i = 0; i < x.tuples.size(); ++i) {
                if (i) os << ", ";
                if (x.arity == 1) {
                    os << x.tuples[i][0];
                } else {
                    os << '(';
                    for (std::size_t j = 0; j < x.tuples[i].size(); ++j) {
                        if (j) os << ',';
                        os << x.tuples[i][j];
                    }
                    os << ')';
                }
            }
            os << "})";
            return;
        }
        case Expr::Kind::Singleton:
            os << "singleton(" << x.base;
            for (const Rational& q : x.coords) os << ", " << to_string(q);
            os << ')';
            return;
        case Expr::Kind::Box:
            os << "box(" << x.base;
            for (const auto& [lo, hi] : x.sides)
                os << ", [" << to_string(lo) << ", " << to_string(hi) << "]";
            os << ')';
            return;
        case Expr::Kind::Es:
            os << "es(";
            detail::print_descriptor(os, *x.descriptor, x.descriptor_path);
            os << ", " << x.es_depth << ')';
            return;
        case Expr::Kind::Union:
        case Expr::Kind::Inter:
        case Expr::Kind::Product: {
            os << (x.kind == Expr::Kind::Union ? "union"
                   : x.kind == Expr::Kind::Inter ? "inter" : "product")
               << '(';
            self(self, x.children[0]);
            os << ", ";
            self(self, x.children[1]);
            os << ')';
            return;
        }
        case Expr::Kind::Proj: {
            os << "proj(";
            self(self, x.children[0]);
            os << ", [";
            for (std::size_t i = 0; i < x.proj_coords.size(); ++i) {
                if (i) os << ',';
                os << x.proj_coords[i];
            }
            os << "])";
            return;
        }
        case Expr::Kind::Affine: {
            os << "affine(";
            self(self, x.children[0]);
            os << ", [";
            for (std::size_t i = 0; i < x.affine.coeffs.size(); ++i) {
                if (i) os << ',';
                os << x.affine.coeffs[i];
            }
            os << "], " << x.affine.offset << ", " << x.affine.scale_exp << ')';
            return;
        }
        case Expr::Kind::Saturate:
            os << "saturate(";
            self(self, x.children[0]);
            os << ')';
            return;
        case Expr::Kind::Load:
            os << "load(" << x.path << ")";
            return;
        }
    };
    rec(rec, e);
    return os.str();
}

inline std::string print(const Query& q) {
    std::ostringstream os;
    auto expr_arg = [&](std::size_t i) { os << print(q.exprs[i]); };
    switch (q.kind) {
    case Query::Kind::Empty: os << "empty("; expr_arg(0); os << ')'; break;
    case Query::Kind::Equal: os << "equal("; expr_arg(0); os << ", "; expr_arg(1); os << ')'; break;
    case Query::Kind::Subset: os << "subset("; expr_arg(0); os << ", "; expr_arg(1); os << ')'; break;
    case Query::Kind::Interior: os << "interior("; expr_arg(0); os << ')'; break;
    case Query::Kind::NowhereDense: os << "nowhere_dense("; expr_arg(0); os << ')'; break;
    case Query::Kind::Dim: os << "dim("; expr_arg(0); os << ')'; break;
    case Query::Kind::Measure:
        os << "measure(";
        expr_arg(0);
        if (q.tol) os << ", " << detail::print_double(*q.tol);
        os << ')';
        break;
    case Query::Kind::Boxes: os << "boxes("; expr_arg(0); os << ", " << q.depth << ')'; break;
    case Query::Kind::Verdict: os << "verdict("; expr_arg(0); os << ')'; break;
    case Query::Kind::Densities:
        os << "densities(es(";
        detail::print_descriptor(os, *q.descriptor, q.descriptor_path);
        os << "))";
        break;
    case Query::Kind::EsDims:
        os << "es_dims(es(";
        detail::print_descriptor(os, *q.descriptor, q.descriptor_path);
        os << "))";
        break;
    case Query::Kind::Steinhaus:
        os << "steinhaus(";
        expr_arg(0);
        if (q.tol) os << ", " << detail::print_double(*q.tol);
        os << ')';
        break;
    case Query::Kind::Endpoints: os << "endpoints(" << q.count << ')'; break;
    case Query::Kind::ProbeII:
        os << "probe_ii(" << to_string(q.a) << ", " << to_string(q.b) << ", " << q.d_idx << ", "
           << q.e_idx << ')';
        break;
    case Query::Kind::Marstrand:
        os << "marstrand(";
        expr_arg(0);
        os << ", " << q.angles << ", " << detail::print_double(q.delta);
        if (q.seed) os << ", " << *q.seed;
        os << ')';
        break;
    case Query::Kind::BoxCount:
        os << "boxcount(";
        expr_arg(0);
        os << ", " << q.k1 << ", " << q.k2 << ')';
        break;
    }
    return os.str();
}

} // namespace workbench
