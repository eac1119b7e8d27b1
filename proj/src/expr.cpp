#include "solab/expr.hpp"

#include "solab/errors.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <optional>

namespace solab {

namespace {

struct FuncEntry {
    const char* name;
    Func func;
};

constexpr FuncEntry kFunctions[] = {
    {"sin", Func::Sin},   {"cos", Func::Cos},   {"tan", Func::Tan},   {"atan", Func::Atan},
    {"exp", Func::Exp},   {"log", Func::Log},   {"sqrt", Func::Sqrt}, {"sinh", Func::Sinh},
    {"cosh", Func::Cosh}, {"tanh", Func::Tanh},
};

std::optional<Func> lookup_function(std::string_view name) {
    for (const auto& f : kFunctions) {
        if (name == f.name) {
            return f.func;
        }
    }
    return std::nullopt;
}

class Parser {
public:
    Parser(std::string_view text, std::span<const std::string> coords) : text_(text), coords_(coords) {}

    Expr run() {
        skip_ws();
        if (pos_ == text_.size()) {
            throw ParseError("empty expression", pos_);
        }
        Expr e = expr();
        skip_ws();
        if (pos_ != text_.size()) {
            throw ParseError(std::string("unexpected character '") + text_[pos_] + "'", pos_);
        }
        return e;
    }

private:
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Expr expr() {
        Expr lhs = term();
        for (;;) {
            if (accept('+')) {
                lhs = Expr::binary(ExprKind::Add, lhs, term());
            } else if (accept('-')) {
                lhs = Expr::binary(ExprKind::Sub, lhs, term());
            } else {
                return lhs;
            }
        }
    }

    Expr term() {
        Expr lhs = factor();
        for (;;) {
            if (accept('*')) {
                lhs = Expr::binary(ExprKind::Mul, lhs, factor());
            } else if (accept('/')) {
                lhs = Expr::binary(ExprKind::Div, lhs, factor());
            } else {
                return lhs;
            }
        }
    }

    Expr factor() {
        if (accept('-')) {
            return Expr::neg(factor());
        }
        return power();
    }

    Expr power() {
        Expr base = atom();
        if (accept('^')) {
            return Expr::binary(ExprKind::Pow, base, factor());
        }
        return base;
    }

    Expr atom() {
        skip_ws();
        if (pos_ == text_.size()) {
            throw ParseError("unexpected end of input", pos_);
        }
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Expr inner = expr();
            if (!accept(')')) {
                throw ParseError("expected ')'", pos_);
            }
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            return number();
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            return name();
        }
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    Expr number() {
        const std::size_t start = pos_;
        auto digits = [&] {
            std::size_t n = 0;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
                ++n;
            }
            return n;
        };
        std::size_t mantissa = digits();
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            mantissa += digits();
        }
        if (mantissa == 0) {
            throw ParseError("malformed number", start);
        }
        // Exponent only when a digit follows, so "2e" is not swallowed.
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t look = pos_ + 1;
            if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) {
                ++look;
            }
            if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look]))) {
                pos_ = look;
                digits();
            }
        }
        const std::string literal(text_.substr(start, pos_ - start));
        return Expr::number(std::strtod(literal.c_str(), nullptr));
    }

    Expr name() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            ++pos_;
        }
        const std::string id(text_.substr(start, pos_ - start));
        skip_ws();
        const bool call = pos_ < text_.size() && text_[pos_] == '(';
        if (call) {
            auto f = lookup_function(id);
            if (!f) {
                throw ParseError("unknown function '" + id + "'", start);
            }
            ++pos_;
            Expr arg = expr();
            if (!accept(')')) {
                throw ParseError("expected ')'", pos_);
            }
            return Expr::call(*f, arg);
        }
        for (std::size_t i = 0; i < coords_.size(); ++i) {
            if (coords_[i] == id) {
                return Expr::variable(i, id);
            }
        }
        if (id == "pi" || id == "e") {
            return Expr::constant(id);
        }
        if (lookup_function(id)) {
            throw ParseError("function '" + id + "' requires parentheses", start);
        }
        throw ParseError("unknown identifier '" + id + "'", start);
    }

    std::string_view text_;
    std::span<const std::string> coords_;
    std::size_t pos_ = 0;
};

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    if (std::strtod(buf, nullptr) != v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
    }
    return buf;
}

const char* op_symbol(ExprKind k) {
    switch (k) {
    case ExprKind::Add: return "+";
    case ExprKind::Sub: return "-";
    case ExprKind::Mul: return "*";
    case ExprKind::Div: return "/";
    case ExprKind::Pow: return "^";
    default: return "?";
    }
}

} // namespace

const char* func_name(Func f) noexcept {
    for (const auto& e : kFunctions) {
        if (e.func == f) {
            return e.name;
        }
    }
    return "?";
}

Expr Expr::number(double v) {
    auto n = std::make_shared<Node>();
    n->kind = ExprKind::Number;
    n->value = v;
    return Expr(std::move(n));
}

Expr Expr::constant(std::string name) {
    auto n = std::make_shared<Node>();
    n->kind = ExprKind::Constant;
    n->value = name == "pi" ? std::numbers::pi : std::numbers::e;
    n->name = std::move(name);
    return Expr(std::move(n));
}

Expr Expr::variable(std::size_t index, std::string name) {
    auto n = std::make_shared<Node>();
    n->kind = ExprKind::Variable;
    n->index = index;
    n->name = std::move(name);
    return Expr(std::move(n));
}

Expr Expr::neg(Expr a) {
    auto n = std::make_shared<Node>();
    n->kind = ExprKind::Neg;
    n->a = std::move(a);
    return Expr(std::move(n));
}

Expr Expr::binary(ExprKind op, Expr a, Expr b) {
    auto n = std::make_shared<Node>();
    n->kind = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return Expr(std::move(n));
}

Expr Expr::call(Func f, Expr arg) {
    auto n = std::make_shared<Node>();
    n->kind = ExprKind::Call;
    n->func = f;
    n->a = std::move(arg);
    return Expr(std::move(n));
}

ExprKind Expr::kind() const { return node_->kind; }
double Expr::number_value() const { return node_->value; }
const std::string& Expr::name() const { return node_->name; }
std::size_t Expr::var_index() const { return node_->index; }
Func Expr::func() const { return node_->func; }
const Expr& Expr::lhs() const { return node_->a; }
const Expr& Expr::rhs() const { return node_->b; }

bool Expr::integer_literal(long& out) const {
    if (!node_) {
        return false;
    }
    if (node_->kind == ExprKind::Neg) {
        long inner = 0;
        if (node_->a.integer_literal(inner)) {
            out = -inner;
            return true;
        }
        return false;
    }
    if (node_->kind != ExprKind::Number) {
        return false;
    }
    const double v = node_->value;
    if (std::trunc(v) != v || std::fabs(v) > 1e9) {
        return false;
    }
    out = static_cast<long>(v);
    return true;
}

bool operator==(const Expr& x, const Expr& y) {
    if (x.node_ == y.node_) {
        return true;
    }
    if (!x.node_ || !y.node_) {
        return false;
    }
    const Expr::Node& a = *x.node_;
    const Expr::Node& b = *y.node_;
    if (a.kind != b.kind) {
        return false;
    }
    switch (a.kind) {
    case ExprKind::Number: return a.value == b.value;
    case ExprKind::Constant: return a.name == b.name;
    case ExprKind::Variable: return a.index == b.index && a.name == b.name;
    case ExprKind::Neg: return a.a == b.a;
    case ExprKind::Call: return a.func == b.func && a.a == b.a;
    default: return a.a == b.a && a.b == b.b;
    }
}

Expr parse_expr(std::string_view text, std::span<const std::string> coords) {
    return Parser(text, coords).run();
}

std::string unparse(const Expr& e) {
    switch (e.kind()) {
    case ExprKind::Number: return format_number(e.number_value());
    case ExprKind::Constant:
    case ExprKind::Variable: return e.name();
    case ExprKind::Neg: return "(-" + unparse(e.lhs()) + ")";
    case ExprKind::Call: return std::string(func_name(e.func())) + "(" + unparse(e.lhs()) + ")";
    default: return "(" + unparse(e.lhs()) + op_symbol(e.kind()) + unparse(e.rhs()) + ")";
    }
}

namespace {

template <class R>
R evaluate_as(const Expr& e, std::span<const R> p) {
    switch (e.kind()) {
    case ExprKind::Number:
    case ExprKind::Constant: return static_cast<R>(e.number_value());
    case ExprKind::Variable: return p[e.var_index()];
    case ExprKind::Neg: return -evaluate_as<R>(e.lhs(), p);
    case ExprKind::Add: return evaluate_as<R>(e.lhs(), p) + evaluate_as<R>(e.rhs(), p);
    case ExprKind::Sub: return evaluate_as<R>(e.lhs(), p) - evaluate_as<R>(e.rhs(), p);
    case ExprKind::Mul: return evaluate_as<R>(e.lhs(), p) * evaluate_as<R>(e.rhs(), p);
    case ExprKind::Div: {
        const R den = evaluate_as<R>(e.rhs(), p);
        if (den == R(0)) {
            throw DomainError("division by zero", unparse(e));
        }
        return evaluate_as<R>(e.lhs(), p) / den;
    }
    case ExprKind::Pow: {
        const R base = evaluate_as<R>(e.lhs(), p);
        long k = 0;
        if (e.rhs().integer_literal(k)) {
            if (k < 0 && base == R(0)) {
                throw DomainError("division by zero", unparse(e));
            }
            return std::pow(base, static_cast<R>(k));
        }
        if (base <= R(0)) {
            throw DomainError("non-integer power of non-positive base", unparse(e));
        }
        return std::pow(base, evaluate_as<R>(e.rhs(), p));
    }
    case ExprKind::Call: {
        const R a = evaluate_as<R>(e.lhs(), p);
        switch (e.func()) {
        case Func::Sin: return std::sin(a);
        case Func::Cos: return std::cos(a);
        case Func::Tan: {
            if (std::cos(a) == R(0)) {
                throw DomainError("tan at a pole", unparse(e));
            }
            return std::tan(a);
        }
        case Func::Atan: return std::atan(a);
        case Func::Exp: return std::exp(a);
        case Func::Log:
            if (a <= R(0)) {
                throw DomainError("log of non-positive value", unparse(e));
            }
            return std::log(a);
        case Func::Sqrt:
            if (a < R(0)) {
                throw DomainError("sqrt of negative value", unparse(e));
            }
            return std::sqrt(a);
        case Func::Sinh: return std::sinh(a);
        case Func::Cosh: return std::cosh(a);
        case Func::Tanh: return std::tanh(a);
        }
    }
    }
    throw Error("corrupt expression node");
}

} // namespace

double evaluate(const Expr& e, std::span<const double> p) { return evaluate_as<double>(e, p); }

long double evaluate_extended(const Expr& e, std::span<const long double> p) { return evaluate_as<long double>(e, p); }

} // namespace solab
