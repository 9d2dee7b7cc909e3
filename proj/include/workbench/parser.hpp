#pragma once

#include <cctype>
#include <string>
#include <vector>

#include "workbench/expr.hpp"
#include "workbench/io.hpp"

namespace workbench {

namespace detail {

struct Token {
    enum class Kind { Ident, Number, LParen, RParen, LBracket, RBracket, LBrace, RBrace, Comma, Junk, End };
    Kind kind = Kind::End;
    std::string text;
    int line = 1;
    int col = 1;
};

inline const char* token_name(Token::Kind k) {
    switch (k) {
    case Token::Kind::Ident: return "identifier";
    case Token::Kind::Number: return "number";
    case Token::Kind::LParen: return "'('";
    case Token::Kind::RParen: return "')'";
    case Token::Kind::LBracket: return "'['";
    case Token::Kind::RBracket: return "']'";
    case Token::Kind::LBrace: return "'{'";
    case Token::Kind::RBrace: return "'}'";
    case Token::Kind::Comma: return "','";
    case Token::Kind::Junk: return "text";
    case Token::Kind::End: return "end of input";
    }
    return "?";
}

// On-demand lexer over the raw source; '#' starts a comment to end of line.
class Cursor {
public:
    explicit Cursor(std::string text) : src_(std::move(text)) { advance(); }

    const Token& peek() const { return tok_; }

    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

    Token expect(Token::Kind kind, const std::string& context) {
        if (tok_.kind != kind)
            throw parse_error("expected " + std::string(token_name(kind)) + " in " + context +
                                  ", found " + describe(tok_),
                              tok_.line, tok_.col);
        return take();
    }

    // Raw capture for file paths: everything up to the next ')' or ','.
    // Rewinds over the already-peeked token first.
    std::string capture_path() {
        pos_ = tok_start_;
        line_ = tok_.line;
        col_ = tok_.col;
        skip_space();
        std::size_t start = pos_;
        while (pos_ < src_.size() && src_[pos_] != ')' && src_[pos_] != ',') step();
        std::size_t end = pos_;
        while (end > start && std::isspace(static_cast<unsigned char>(src_[end - 1]))) --end;
        if (end == start) throw parse_error("expected a file path", line_, col_);
        std::string path = src_.substr(start, end - start);
        advance();
        return path;
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw parse_error(msg + ", found " + describe(tok_), tok_.line, tok_.col);
    }

    static std::string describe(const Token& t) {
        if (t.kind == Token::Kind::End) return "end of input";
        return "'" + t.text + "'";
    }

private:
    void step() {
        if (pos_ < src_.size() && src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_space() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') step();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                step();
            } else {
                break;
            }
        }
    }

    void advance() {
        skip_space();
        tok_start_ = pos_;
        tok_.line = line_;
        tok_.col = col_;
        if (pos_ >= src_.size()) {
            tok_ = {Token::Kind::End, "", line_, col_};
            return;
        }
        char c = src_[pos_];
        auto single = [&](Token::Kind k) {
            tok_ = {k, std::string(1, c), line_, col_};
            step();
        };
        switch (c) {
        case '(': single(Token::Kind::LParen); return;
        case ')': single(Token::Kind::RParen); return;
        case '[': single(Token::Kind::LBracket); return;
        case ']': single(Token::Kind::RBracket); return;
        case '{': single(Token::Kind::LBrace); return;
        case '}': single(Token::Kind::RBrace); return;
        case ',': single(Token::Kind::Comma); return;
        default: break;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                step();
            tok_ = {Token::Kind::Ident, src_.substr(start, pos_ - start), tok_.line, tok_.col};
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '-') {
            std::size_t start = pos_;
            step();
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) step();
            if (pos_ < src_.size() && (src_[pos_] == '/' || src_[pos_] == '.')) {
                step();
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) step();
            }
            if (pos_ < src_.size() && src_[pos_] == 'e') { // scientific floats: 1e-9
                step();
                if (pos_ < src_.size() && (src_[pos_] == '-' || src_[pos_] == '+')) step();
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) step();
            }
            tok_ = {Token::Kind::Number, src_.substr(start, pos_ - start), tok_.line, tok_.col};
            return;
        }
        // unknown characters become junk tokens; they are legal inside
        // raw path captures and rejected with diagnostics anywhere else
        tok_ = {Token::Kind::Junk, std::string(1, c), line_, col_};
        step();
    }

    std::string src_;
    std::size_t pos_ = 0;
    std::size_t tok_start_ = 0;
    int line_ = 1;
    int col_ = 1;
    Token tok_;
};

class Parser {
public:
    explicit Parser(std::string text) : cur_(std::move(text)) {}

    Expr parse_expr_complete() {
        Expr e = expr();
        if (cur_.peek().kind != Token::Kind::End) cur_.fail("expected end of expression");
        return e;
    }

    Query parse_query_complete() {
        Query q = query();
        if (cur_.peek().kind != Token::Kind::End) cur_.fail("expected end of query");
        return q;
    }

private:
    long long integer(const std::string& context) {
        Token t = cur_.expect(Token::Kind::Number, context);
        try {
            std::size_t used = 0;
            long long v = std::stoll(t.text, &used);
            if (used != t.text.size()) throw std::invalid_argument("trailing");
            return v;
        } catch (const std::exception&) {
            throw parse_error("expected an integer in " + context, t.line, t.col);
        }
    }

    Rational rational(const std::string& context) {
        Token t = cur_.expect(Token::Kind::Number, context);
        try {
            return parse_rational(t.text);
        } catch (const invalid_argument_error&) {
            throw parse_error("expected a rational (p or p/q) in " + context, t.line, t.col);
        }
    }

    double floating(const std::string& context) {
        Token t = cur_.expect(Token::Kind::Number, context);
        try {
            if (t.text.find('/') != std::string::npos) return to_double(parse_rational(t.text));
            return std::stod(t.text);
        } catch (const std::exception&) {
            throw parse_error("expected a numeric value in " + context, t.line, t.col);
        }
    }

    std::vector<bool> bit_list(const std::string& context) {
        cur_.expect(Token::Kind::LBracket, context);
        std::vector<bool> bits;
        if (cur_.peek().kind != Token::Kind::RBracket) {
            while (true) {
                long long v = integer(context);
                if (v != 0 && v != 1)
                    cur_.fail("expected 0 or 1 in " + context);
                bits.push_back(v == 1);
                if (cur_.peek().kind != Token::Kind::Comma) break;
                cur_.take();
            }
        }
        cur_.expect(Token::Kind::RBracket, context);
        return bits;
    }

    void descriptor_into(DensityDescriptor& out, std::string& path_out) {
        Token t = cur_.expect(Token::Kind::Ident, "digit-set descriptor");
        if (t.text == "tower") {
            cur_.expect(Token::Kind::LParen, "tower");
            long long levels = integer("tower levels");
            cur_.expect(Token::Kind::RParen, "tower");
            try {
                out = DensityDescriptor::tower(static_cast<int>(levels));
            } catch (const invalid_argument_error& e) {
                throw parse_error(e.what(), t.line, t.col);
            }
            return;
        }
        if (t.text == "periodic") {
            cur_.expect(Token::Kind::LParen, "periodic");
            std::vector<bool> first = bit_list("periodic");
            std::vector<bool> pre, per;
            if (cur_.peek().kind == Token::Kind::Comma) {
                cur_.take();
                pre = std::move(first);
                per = bit_list("periodic");
            } else {
                per = std::move(first);
            }
            cur_.expect(Token::Kind::RParen, "periodic");
            if (per.empty())
                throw parse_error("periodic descriptor needs a nonempty period", t.line, t.col);
            out = DensityDescriptor::eventually_periodic(std::move(pre), std::move(per));
            return;
        }
        if (t.text == "explicit") {
            cur_.expect(Token::Kind::LParen, "explicit");
            path_out = cur_.capture_path();
            cur_.expect(Token::Kind::RParen, "explicit");
            out = load_explicit_descriptor(path_out);
            return;
        }
        throw parse_error("unknown descriptor '" + t.text + "', expected tower, periodic or explicit",
                          t.line, t.col);
    }

    // file format: first line M, then the member positions
    static DensityDescriptor load_explicit_descriptor(const std::string& path) {
        std::ifstream f(path);
        if (!f) throw io_error("cannot open '" + path + "'");
        long long bound = 0;
        if (!(f >> bound) || bound < 1) throw io_error(path + ": expected the position bound");
        std::vector<bool> members(static_cast<std::size_t>(bound), false);
        long long m = 0;
        while (f >> m) {
            if (m < 1 || m > bound) throw io_error(path + ": member position out of range");
            members[static_cast<std::size_t>(m - 1)] = true;
        }
        return DensityDescriptor::explicit_set(std::move(members));
    }

    Expr expr() {
        Token t = cur_.expect(Token::Kind::Ident, "set expression");
        Expr e;
        if (t.text == "cantor") { e.kind = Expr::Kind::Cantor; e.base = 3; e.arity = 1; return e; }
        if (t.text == "carpet") { e.kind = Expr::Kind::Carpet; e.base = 3; e.arity = 2; return e; }
        if (t.text == "menger") { e.kind = Expr::Kind::Menger; e.base = 3; e.arity = 3; return e; }
        if (t.text == "full") {
            e.kind = Expr::Kind::Full;
            cur_.expect(Token::Kind::LParen, "full");
            e.base = 3;
            e.arity = static_cast<int>(integer("full arity"));
            cur_.expect(Token::Kind::RParen, "full");
            return e;
        }
        if (t.text == "digits") {
            e.kind = Expr::Kind::Digits;
            cur_.expect(Token::Kind::LParen, "digits");
            e.base = static_cast<int>(integer("digits base"));
            cur_.expect(Token::Kind::Comma, "digits");
            e.arity = static_cast<int>(integer("digits arity"));
            cur_.expect(Token::Kind::Comma, "digits");
            cur_.expect(Token::Kind::LBrace, "digit set");
            while (true) {
                std::vector<int> tuple;
                if (cur_.peek().kind == Token::Kind::LParen) {
                    cur_.take();
                    while (true) {
                        tuple.push_back(static_cast<int>(integer("digit tuple")));
                        if (cur_.peek().kind != Token::Kind::Comma) break;
                        cur_.take();
                    }
                    cur_.expect(Token::Kind::RParen, "digit tuple");
                } else {
                    tuple.push_back(static_cast<int>(integer("digit")));
                }
                e.tuples.push_back(std::move(tuple));
                if (cur_.peek().kind != Token::Kind::Comma) break;
                cur_.take();
            }
            cur_.expect(Token::Kind::RBrace, "digit set");
            cur_.expect(Token::Kind::RParen, "digits");
            return e;
        }
        if (t.text == "singleton") {
            e.kind = Expr::Kind::Singleton;
            cur_.expect(Token::Kind::LParen, "singleton");
            e.base = static_cast<int>(integer("singleton base"));
            while (cur_.peek().kind == Token::Kind::Comma) {
                cur_.take();
                e.coords.push_back(rational("singleton coordinate"));
            }
            cur_.expect(Token::Kind::RParen, "singleton");
            if (e.coords.empty()) cur_.fail("singleton needs at least one coordinate");
            e.arity = static_cast<int>(e.coords.size());
            return e;
        }
        if (t.text == "box") {
            e.kind = Expr::Kind::Box;
            cur_.expect(Token::Kind::LParen, "box");
            e.base = static_cast<int>(integer("box base"));
            while (cur_.peek().kind == Token::Kind::Comma) {
                cur_.take();
                cur_.expect(Token::Kind::LBracket, "box side");
                Rational lo = rational("box endpoint");
                cur_.expect(Token::Kind::Comma, "box side");
                Rational hi = rational("box endpoint");
                cur_.expect(Token::Kind::RBracket, "box side");
                e.sides.emplace_back(std::move(lo), std::move(hi));
            }
            cur_.expect(Token::Kind::RParen, "box");
            if (e.sides.empty()) cur_.fail("box needs at least one side");
            e.arity = static_cast<int>(e.sides.size());
            return e;
        }
        if (t.text == "es") {
            e.kind = Expr::Kind::Es;
            cur_.expect(Token::Kind::LParen, "es");
            DensityDescriptor d;
            descriptor_into(d, e.descriptor_path);
            e.descriptor = std::move(d);
            cur_.expect(Token::Kind::Comma, "es: expected a truncation depth");
            e.es_depth = static_cast<int>(integer("es depth"));
            cur_.expect(Token::Kind::RParen, "es");
            e.base = e.descriptor->base;
            e.arity = 1;
            return e;
        }
        if (t.text == "union" || t.text == "inter" || t.text == "product") {
            e.kind = t.text == "union" ? Expr::Kind::Union
                     : t.text == "inter" ? Expr::Kind::Inter : Expr::Kind::Product;
            cur_.expect(Token::Kind::LParen, t.text);
            e.children.push_back(expr());
            cur_.expect(Token::Kind::Comma, t.text);
            e.children.push_back(expr());
            cur_.expect(Token::Kind::RParen, t.text);
            return e;
        }
        if (t.text == "proj") {
            e.kind = Expr::Kind::Proj;
            cur_.expect(Token::Kind::LParen, "proj");
            e.children.push_back(expr());
            cur_.expect(Token::Kind::Comma, "proj");
            cur_.expect(Token::Kind::LBracket, "proj coordinates");
            while (true) {
                e.proj_coords.push_back(static_cast<int>(integer("proj coordinate")));
                if (cur_.peek().kind != Token::Kind::Comma) break;
                cur_.take();
            }
            cur_.expect(Token::Kind::RBracket, "proj coordinates");
            cur_.expect(Token::Kind::RParen, "proj");
            return e;
        }
        if (t.text == "affine") {
            e.kind = Expr::Kind::Affine;
            cur_.expect(Token::Kind::LParen, "affine");
            e.children.push_back(expr());
            cur_.expect(Token::Kind::Comma, "affine");
            cur_.expect(Token::Kind::LBracket, "affine coefficients");
            while (true) {
                e.affine.coeffs.push_back(integer("affine coefficient"));
                if (cur_.peek().kind != Token::Kind::Comma) break;
                cur_.take();
            }
            cur_.expect(Token::Kind::RBracket, "affine coefficients");
            cur_.expect(Token::Kind::Comma, "affine");
            e.affine.offset = integer("affine offset");
            cur_.expect(Token::Kind::Comma, "affine");
            e.affine.scale_exp = static_cast<int>(integer("affine scale exponent"));
            cur_.expect(Token::Kind::RParen, "affine");
            return e;
        }
        if (t.text == "saturate") {
            e.kind = Expr::Kind::Saturate;
            cur_.expect(Token::Kind::LParen, "saturate");
            e.children.push_back(expr());
            cur_.expect(Token::Kind::RParen, "saturate");
            return e;
        }
        if (t.text == "load") {
            e.kind = Expr::Kind::Load;
            cur_.expect(Token::Kind::LParen, "load");
            e.path = cur_.capture_path();
            cur_.expect(Token::Kind::RParen, "load");
            return e;
        }
        throw parse_error("unknown constructor '" + t.text +
                              "', expected one of cantor, carpet, menger, full, digits, singleton, "
                              "box, es, union, inter, product, proj, affine, saturate, load",
                          t.line, t.col);
    }

    Query query() {
        Token t = cur_.expect(Token::Kind::Ident, "query");
        Query q;
        auto unary = [&](Query::Kind k) {
            q.kind = k;
            cur_.expect(Token::Kind::LParen, t.text);
            q.exprs.push_back(expr());
            cur_.expect(Token::Kind::RParen, t.text);
        };
        if (t.text == "empty") { unary(Query::Kind::Empty); return q; }
        if (t.text == "interior") { unary(Query::Kind::Interior); return q; }
        if (t.text == "nowhere_dense") { unary(Query::Kind::NowhereDense); return q; }
        if (t.text == "dim") { unary(Query::Kind::Dim); return q; }
        if (t.text == "verdict") { unary(Query::Kind::Verdict); return q; }
        if (t.text == "equal" || t.text == "subset") {
            q.kind = t.text == "equal" ? Query::Kind::Equal : Query::Kind::Subset;
            cur_.expect(Token::Kind::LParen, t.text);
            q.exprs.push_back(expr());
            cur_.expect(Token::Kind::Comma, t.text);
            q.exprs.push_back(expr());
            cur_.expect(Token::Kind::RParen, t.text);
            return q;
        }
        if (t.text == "measure" || t.text == "steinhaus") {
            q.kind = t.text == "measure" ? Query::Kind::Measure : Query::Kind::Steinhaus;
            cur_.expect(Token::Kind::LParen, t.text);
            q.exprs.push_back(expr());
            if (cur_.peek().kind == Token::Kind::Comma) {
                cur_.take();
                q.tol = floating(t.text + " tolerance");
            }
            cur_.expect(Token::Kind::RParen, t.text);
            return q;
        }
        if (t.text == "boxes") {
            q.kind = Query::Kind::Boxes;
            cur_.expect(Token::Kind::LParen, "boxes");
            q.exprs.push_back(expr());
            cur_.expect(Token::Kind::Comma, "boxes");
            q.depth = static_cast<int>(integer("boxes depth"));
            cur_.expect(Token::Kind::RParen, "boxes");
            return q;
        }
        if (t.text == "densities" || t.text == "es_dims") {
            q.kind = t.text == "densities" ? Query::Kind::Densities : Query::Kind::EsDims;
            cur_.expect(Token::Kind::LParen, t.text);
            Token es = cur_.expect(Token::Kind::Ident, t.text);
            if (es.text != "es")
                throw parse_error(t.text + " takes an es(...) descriptor", es.line, es.col);
            cur_.expect(Token::Kind::LParen, "es");
            DensityDescriptor d;
            descriptor_into(d, q.descriptor_path);
            q.descriptor = std::move(d);
            cur_.expect(Token::Kind::RParen, "es");
            cur_.expect(Token::Kind::RParen, t.text);
            return q;
        }
        if (t.text == "endpoints") {
            q.kind = Query::Kind::Endpoints;
            cur_.expect(Token::Kind::LParen, "endpoints");
            long long n = integer("endpoint count");
            if (n < 1) cur_.fail("endpoint count must be positive");
            q.count = static_cast<std::size_t>(n);
            cur_.expect(Token::Kind::RParen, "endpoints");
            return q;
        }
        if (t.text == "probe_ii") {
            q.kind = Query::Kind::ProbeII;
            cur_.expect(Token::Kind::LParen, "probe_ii");
            q.a = rational("probe window endpoint");
            cur_.expect(Token::Kind::Comma, "probe_ii");
            q.b = rational("probe window endpoint");
            cur_.expect(Token::Kind::Comma, "probe_ii");
            q.d_idx = static_cast<std::size_t>(integer("probe bound index"));
            cur_.expect(Token::Kind::Comma, "probe_ii");
            q.e_idx = static_cast<std::size_t>(integer("probe element index"));
            cur_.expect(Token::Kind::RParen, "probe_ii");
            return q;
        }
        if (t.text == "marstrand") {
            q.kind = Query::Kind::Marstrand;
            cur_.expect(Token::Kind::LParen, "marstrand");
            q.exprs.push_back(expr());
            cur_.expect(Token::Kind::Comma, "marstrand");
            q.angles = static_cast<int>(integer("angle count"));
            cur_.expect(Token::Kind::Comma, "marstrand");
            q.delta = floating("marstrand resolution");
            if (cur_.peek().kind == Token::Kind::Comma) {
                cur_.take();
                q.seed = static_cast<std::uint64_t>(integer("marstrand seed"));
            }
            cur_.expect(Token::Kind::RParen, "marstrand");
            return q;
        }
        if (t.text == "boxcount") {
            q.kind = Query::Kind::BoxCount;
            cur_.expect(Token::Kind::LParen, "boxcount");
            q.exprs.push_back(expr());
            cur_.expect(Token::Kind::Comma, "boxcount");
            q.k1 = static_cast<int>(integer("boxcount first depth"));
            cur_.expect(Token::Kind::Comma, "boxcount");
            q.k2 = static_cast<int>(integer("boxcount last depth"));
            cur_.expect(Token::Kind::RParen, "boxcount");
            return q;
        }
        throw parse_error(
            "unknown query '" + t.text +
                "', expected one of empty, equal, subset, interior, nowhere_dense, dim, measure, "
                "boxes, verdict, densities, es_dims, steinhaus, endpoints, probe_ii, marstrand, "
                "boxcount",
            t.line, t.col);
    }

    Cursor cur_;
};

} // namespace detail

inline Expr parse_expr(const std::string& text) {
    return detail::Parser(text).parse_expr_complete();
}

inline Query parse_query(const std::string& text) {
    return detail::Parser(text).parse_query_complete();
}

// Shape inference and agreement checks; runs before any evaluation. Error
// messages carry the offending subterms.
struct Shape {
    int base;
    int arity;
};

inline Shape check_types(const Expr& e) {
    auto rec = [&](auto&& self, const Expr& x) -> Shape {
        switch (x.kind) {
        case Expr::Kind::Cantor: return {3, 1};
        case Expr::Kind::Carpet: return {3, 2};
        case Expr::Kind::Menger: return {3, 3};
        case Expr::Kind::Full:
            if (x.arity < 1) throw type_error("full: arity must be >= 1 in " + print(x));
            return {3, x.arity};
        case Expr::Kind::Digits:
            if (x.base < 2) throw type_error("digits: base must be >= 2 in " + print(x));
            if (x.arity < 1) throw type_error("digits: arity must be >= 1 in " + print(x));
            for (const auto& tuple : x.tuples) {
                if (static_cast<int>(tuple.size()) != x.arity)
                    throw type_error("digits: tuple arity mismatch in " + print(x));
                for (int d : tuple)
                    if (d < 0 || d >= x.base)
                        throw type_error("digits: digit out of range in " + print(x));
            }
            return {x.base, x.arity};
        case Expr::Kind::Singleton:
            if (x.base < 2) throw type_error("singleton: base must be >= 2 in " + print(x));
            return {x.base, static_cast<int>(x.coords.size())};
        case Expr::Kind::Box:
            if (x.base < 2) throw type_error("box: base must be >= 2 in " + print(x));
            return {x.base, static_cast<int>(x.sides.size())};
        case Expr::Kind::Es:
            return {x.descriptor->base, 1};
        case Expr::Kind::Union:
        case Expr::Kind::Inter: {
            Shape l = self(self, x.children[0]);
            Shape r = self(self, x.children[1]);
            if (l.base != r.base || l.arity != r.arity)
                throw type_error("operands disagree: " + print(x.children[0]) + " is base " +
                                 std::to_string(l.base) + " arity " + std::to_string(l.arity) +
                                 " but " + print(x.children[1]) + " is base " +
                                 std::to_string(r.base) + " arity " + std::to_string(r.arity));
            return l;
        }
        case Expr::Kind::Product: {
            Shape l = self(self, x.children[0]);
            Shape r = self(self, x.children[1]);
            if (l.base != r.base)
                throw type_error("product operands disagree in base: " + print(x.children[0]) +
                                 " vs " + print(x.children[1]));
            return {l.base, l.arity + r.arity};
        }
        case Expr::Kind::Proj: {
            Shape s = self(self, x.children[0]);
            if (x.proj_coords.empty())
                throw type_error("proj: empty coordinate list in " + print(x));
            for (int c : x.proj_coords)
                if (c < 1 || c > s.arity)
                    throw type_error("proj: coordinate " + std::to_string(c) +
                                     " out of range for " + print(x.children[0]));
            return {s.base, static_cast<int>(x.proj_coords.size())};
        }
        case Expr::Kind::Affine: {
            Shape s = self(self, x.children[0]);
            if (static_cast<int>(x.affine.coeffs.size()) != s.arity)
                throw type_error("affine: " + std::to_string(x.affine.coeffs.size()) +
                                 " coefficients for arity " + std::to_string(s.arity) + " operand " +
                                 print(x.children[0]));
            if (x.affine.scale_exp < 0)
                throw type_error("affine: negative scale exponent in " + print(x));
            return {s.base, 1};
        }
        case Expr::Kind::Saturate:
            return self(self, x.children[0]);
        case Expr::Kind::Load: {
            auto [base, arity] = peek_shape(x.path);
            return {base, arity};
        }
        }
        throw type_error("unreachable expression kind");
    };
    return rec(rec, e);
}

inline void check_types(const Query& q) {
    for (const Expr& e : q.exprs) check_types(e);
    if (q.kind == Query::Kind::Equal || q.kind == Query::Kind::Subset) {
        Shape l = check_types(q.exprs[0]);
        Shape r = check_types(q.exprs[1]);
        if (l.base != r.base || l.arity != r.arity)
            throw type_error("operands disagree: " + print(q.exprs[0]) + " is base " +
                             std::to_string(l.base) + " arity " + std::to_string(l.arity) + " but " +
                             print(q.exprs[1]) + " is base " + std::to_string(r.base) + " arity " +
                             std::to_string(r.arity));
    }
    if (q.kind == Query::Kind::Steinhaus || q.kind == Query::Kind::Measure) {
        if (q.tol && !(*q.tol > 0)) throw type_error("tolerance must be positive");
    }
    if (q.kind == Query::Kind::Steinhaus && check_types(q.exprs[0]).arity != 1)
        throw type_error("steinhaus needs an arity-1 set: " + print(q.exprs[0]));
    if (q.kind == Query::Kind::Marstrand) {
        if (check_types(q.exprs[0]).arity < 2)
            throw type_error("marstrand needs arity >= 2: " + print(q.exprs[0]));
        if (q.angles < 1) throw type_error("marstrand needs at least one angle");
        if (!(q.delta > 0)) throw type_error("marstrand resolution must be positive");
    }
    if (q.kind == Query::Kind::BoxCount && q.k2 - q.k1 < 1)
        throw type_error("boxcount needs at least two depths");
    if (q.kind == Query::Kind::Boxes && q.depth < 0) throw type_error("boxes depth must be >= 0");
    if (q.kind == Query::Kind::ProbeII && q.e_idx > q.d_idx)
        throw type_error("probe_ii: element index must not exceed the bound index");
}

} // namespace workbench
