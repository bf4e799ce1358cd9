#pragma once

// Tiny arithmetic-expression language over the variable t:
//   + - * / ^  parentheses, numeric literals, exp sin cos sqrt abs.
// Recursive descent with standard precedence (^ right-assoc, binding tighter
// than unary minus, then * /, then + -). Parse errors carry the byte offset.

#include <charconv>
#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pqlab/errors.hpp"
#include "pqlab/operators.hpp"

namespace pqlab {

class syntax_error : public validation_error {
public:
    syntax_error(size_t offset, const std::string& expected)
        : validation_error("syntax error at offset " + std::to_string(offset) +
                           ": expected " + expected),
          offset_(offset), expected_(expected) {}
    size_t offset() const noexcept { return offset_; }
    const std::string& expected() const noexcept { return expected_; }

private:
    size_t offset_;
    std::string expected_;
};

class unknown_identifier : public validation_error {
public:
    unknown_identifier(size_t offset, const std::string& name)
        : validation_error("unknown identifier '" + name + "' at offset " +
                           std::to_string(offset)),
          offset_(offset) {}
    size_t offset() const noexcept { return offset_; }

private:
    size_t offset_;
};

namespace ast {

enum class builtin { exp_fn, sin_fn, cos_fn, sqrt_fn, abs_fn };

inline const char* name(builtin b) {
    switch (b) {
        case builtin::exp_fn: return "exp";
        case builtin::sin_fn: return "sin";
        case builtin::cos_fn: return "cos";
        case builtin::sqrt_fn: return "sqrt";
        case builtin::abs_fn: return "abs";
    }
    return "?";
}

struct node;
using node_ptr = std::unique_ptr<node>;

enum class kind { number, variable, negate, add, sub, mul, div, pow, call };

struct node {
    kind k;
    double value = 0.0;       // number
    builtin fn = builtin::exp_fn;  // call
    node_ptr lhs;             // unary child / left operand / call argument
    node_ptr rhs;

    explicit node(kind kk) : k(kk) {}
};

inline node_ptr number(double v) {
    auto n = std::make_unique<node>(kind::number);
    n->value = v;
    return n;
}
inline node_ptr variable() { return std::make_unique<node>(kind::variable); }
inline node_ptr unary(node_ptr c) {
    auto n = std::make_unique<node>(kind::negate);
    n->lhs = std::move(c);
    return n;
}
inline node_ptr binary(kind k, node_ptr a, node_ptr b) {
    auto n = std::make_unique<node>(k);
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return n;
}
inline node_ptr call(builtin f, node_ptr a) {
    auto n = std::make_unique<node>(kind::call);
    n->fn = f;
    n->lhs = std::move(a);
    return n;
}

inline bool equal(const node& a, const node& b) {
    if (a.k != b.k) return false;
    switch (a.k) {
        case kind::number: return a.value == b.value;
        case kind::variable: return true;
        case kind::negate: return equal(*a.lhs, *b.lhs);
        case kind::call: return a.fn == b.fn && equal(*a.lhs, *b.lhs);
        default: return equal(*a.lhs, *b.lhs) && equal(*a.rhs, *b.rhs);
    }
}

inline double eval(const node& n, double t) {
    switch (n.k) {
        case kind::number: return n.value;
        case kind::variable: return t;
        case kind::negate: return -eval(*n.lhs, t);
        case kind::add: return eval(*n.lhs, t) + eval(*n.rhs, t);
        case kind::sub: return eval(*n.lhs, t) - eval(*n.rhs, t);
        case kind::mul: return eval(*n.lhs, t) * eval(*n.rhs, t);
        case kind::div: {
            const double d = eval(*n.rhs, t);
            if (d == 0.0) throw domain_error("division by zero", t);
            return eval(*n.lhs, t) / d;
        }
        case kind::pow: {
            const double b = eval(*n.lhs, t);
            const double e = eval(*n.rhs, t);
            if (b < 0.0 && e != std::floor(e))
                throw domain_error("negative base with non-integer exponent", t);
            if (b == 0.0 && e < 0.0) throw domain_error("zero to a negative power", t);
            return std::pow(b, e);
        }
        case kind::call: {
            const double a = eval(*n.lhs, t);
            switch (n.fn) {
                case builtin::exp_fn: return std::exp(a);
                case builtin::sin_fn: return std::sin(a);
                case builtin::cos_fn: return std::cos(a);
                case builtin::sqrt_fn:
                    if (a < 0.0) throw domain_error("sqrt of a negative value", t);
                    return std::sqrt(a);
                case builtin::abs_fn: return std::abs(a);
            }
            throw domain_error("unreachable builtin", t);
        }
    }
    throw domain_error("unreachable node kind", t);
}

inline node_ptr clone(const node& n) {
    auto c = std::make_unique<node>(n.k);
    c->value = n.value;
    c->fn = n.fn;
    if (n.lhs) c->lhs = clone(*n.lhs);
    if (n.rhs) c->rhs = clone(*n.rhs);
    return c;
}

// precedence levels used by both parser and printer
inline int precedence(kind k) {
    switch (k) {
        case kind::add:
        case kind::sub: return 1;
        case kind::mul:
        case kind::div: return 2;
        case kind::negate: return 3;
        case kind::pow: return 4;
        default: return 5;
    }
}

inline std::string number_to_string(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, ptr);
}

// Minimal-paren printer: the output reparses to a structurally equal tree.
inline void print(const node& n, std::string& out, int parent, bool right_side) {
    const int prec = precedence(n.k);
    const bool parens =
        prec < parent ||
        (prec == parent && right_side && (n.k == kind::sub || n.k == kind::add ||
                                          n.k == kind::div || n.k == kind::mul)) ||
        (n.k == kind::pow && parent == 4 && !right_side);
    if (parens) out += '(';
    switch (n.k) {
        case kind::number: out += number_to_string(n.value); break;
        case kind::variable: out += 't'; break;
        case kind::negate:
            out += '-';
            print(*n.lhs, out, 3, false);
            break;
        case kind::add:
        case kind::sub:
        case kind::mul:
        case kind::div: {
            const char op = n.k == kind::add ? '+' : n.k == kind::sub ? '-'
                            : n.k == kind::mul ? '*' : '/';
            print(*n.lhs, out, prec, false);
            out += op;
            print(*n.rhs, out, prec, true);
            break;
        }
        case kind::pow:
            print(*n.lhs, out, 4, false);
            out += '^';
            print(*n.rhs, out, 3, true);  // exponent may be a unary chain
            break;
        case kind::call:
            out += name(n.fn);
            out += '(';
            print(*n.lhs, out, 0, false);
            out += ')';
            break;
    }
    if (parens) out += ')';
}

inline std::string to_string(const node& n) {
    std::string out;
    print(n, out, 0, false);
    return out;
}

}  // namespace ast

namespace detail {

class parser {
public:
    explicit parser(std::string_view src) : src_(src) {}

    ast::node_ptr parse() {
        auto e = parse_expr();
        skip_ws();
        if (pos_ != src_.size()) throw syntax_error(pos_, "end of input");
        return e;
    }

private:
    void skip_ws() {
        while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t')) ++pos_;
    }
    char peek() {
        skip_ws();
        return pos_ < src_.size() ? src_[pos_] : '\0';
    }
    bool accept(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c, const char* what) {
        if (!accept(c)) throw syntax_error(pos_, what);
    }

    ast::node_ptr parse_expr() {
        auto lhs = parse_term();
        while (true) {
            if (accept('+')) lhs = ast::binary(ast::kind::add, std::move(lhs), parse_term());
            else if (accept('-')) lhs = ast::binary(ast::kind::sub, std::move(lhs), parse_term());
            else return lhs;
        }
    }

    ast::node_ptr parse_term() {
        auto lhs = parse_unary();
        while (true) {
            if (accept('*')) lhs = ast::binary(ast::kind::mul, std::move(lhs), parse_unary());
            else if (accept('/')) lhs = ast::binary(ast::kind::div, std::move(lhs), parse_unary());
            else return lhs;
        }
    }

    ast::node_ptr parse_unary() {
        if (accept('-')) return ast::unary(parse_unary());
        return parse_power();
    }

    ast::node_ptr parse_power() {
        auto base = parse_primary();
        if (accept('^'))  // right-assoc; exponent admits unary minus
            return ast::binary(ast::kind::pow, std::move(base), parse_unary());
        return base;
    }

    ast::node_ptr parse_primary() {
        skip_ws();
        if (pos_ >= src_.size())
            throw syntax_error(pos_, "number, 't', function call or '('");
        const char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            auto e = parse_expr();
            expect(')', "')'");
            return e;
        }
        if ((c >= '0' && c <= '9') || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
        throw syntax_error(pos_, "number, 't', function call or '('");
    }

    ast::node_ptr parse_number() {
        const size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
            ++pos_;
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            size_t e = pos_ + 1;
            if (e < src_.size() && (src_[e] == '+' || src_[e] == '-')) ++e;
            if (e < src_.size() && std::isdigit(static_cast<unsigned char>(src_[e]))) {
                pos_ = e;
                while (pos_ < src_.size() &&
                       std::isdigit(static_cast<unsigned char>(src_[pos_])))
                    ++pos_;
            }
        }
        double v = 0.0;
        const auto res = std::from_chars(src_.data() + start, src_.data() + pos_, v);
        if (res.ec != std::errc() || res.ptr != src_.data() + pos_)
            throw syntax_error(start, "a numeric literal");
        return ast::number(v);
    }

    ast::node_ptr parse_ident() {
        const size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
            ++pos_;
        const std::string name(src_.substr(start, pos_ - start));
        if (name == "t") return ast::variable();
        for (auto b : {ast::builtin::exp_fn, ast::builtin::sin_fn, ast::builtin::cos_fn,
                       ast::builtin::sqrt_fn, ast::builtin::abs_fn}) {
            if (name == ast::name(b)) {
                expect('(', "'(' after function name");
                auto arg = parse_expr();
                expect(')', "')'");
                return ast::call(b, std::move(arg));
            }
        }
        throw unknown_identifier(start, name);
    }

    std::string_view src_;
    size_t pos_ = 0;
};

}  // namespace detail

/// A parsed test function: expression AST plus optional analytic first and
/// second derivatives (needed by the Voronovskaja experiment).
struct function_spec {
    std::string source;
    ast::node_ptr expr;
    ast::node_ptr d1;
    ast::node_ptr d2;

    scalar_fn to_scalar_fn(growth_tag g = growth_tag::bounded, int degree = 0) const {
        auto shared = std::shared_ptr<ast::node>(ast::clone(*expr));
        return scalar_fn([shared](double t) { return ast::eval(*shared, t); }, g, degree);
    }
    scalar_fn deriv1() const {
        if (!d1) throw validation_error("function_spec: d1 was not supplied");
        auto shared = std::shared_ptr<ast::node>(ast::clone(*d1));
        return scalar_fn([shared](double t) { return ast::eval(*shared, t); });
    }
    scalar_fn deriv2() const {
        if (!d2) throw validation_error("function_spec: d2 was not supplied");
        auto shared = std::shared_ptr<ast::node>(ast::clone(*d2));
        return scalar_fn([shared](double t) { return ast::eval(*shared, t); });
    }
};

/// Parse an expression over t; throws syntax_error / unknown_identifier.
inline function_spec parse_function(const std::string& expr,
                                    const std::optional<std::string>& d1 = {},
                                    const std::optional<std::string>& d2 = {}) {
    function_spec fs;
    fs.source = expr;
    fs.expr = detail::parser(expr).parse();
    if (d1) fs.d1 = detail::parser(*d1).parse();
    if (d2) fs.d2 = detail::parser(*d2).parse();
    return fs;
}

}  // namespace pqlab
