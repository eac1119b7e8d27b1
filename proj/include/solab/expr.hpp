#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace solab {

enum class ExprKind { Number, Constant, Variable, Neg, Add, Sub, Mul, Div, Pow, Call };

enum class Func { Sin, Cos, Tan, Atan, Exp, Log, Sqrt, Sinh, Cosh, Tanh };

const char* func_name(Func f) noexcept;

/// Immutable expression tree over the coordinates of a chart.
///
/// Variables are resolved to coordinate indices at parse time, so an Expr is only
/// meaningful together with the coordinate list it was parsed against.
class Expr {
public:
    struct Node;

    Expr() = default;

    static Expr number(double v);
    static Expr constant(std::string name);  // "pi" or "e"
    static Expr variable(std::size_t index, std::string name);
    static Expr neg(Expr a);
    static Expr binary(ExprKind op, Expr a, Expr b);
    static Expr call(Func f, Expr arg);

    bool empty() const noexcept { return !node_; }
    ExprKind kind() const;
    double number_value() const;
    const std::string& name() const;  // constant or variable name
    std::size_t var_index() const;
    Func func() const;
    const Expr& lhs() const;  // operand of Neg/Call, left operand of binaries
    const Expr& rhs() const;

    /// Integer value when this node is an integer literal, possibly negated.
    bool integer_literal(long& out) const;

    friend bool operator==(const Expr& a, const Expr& b);

private:
    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

struct Expr::Node {
    ExprKind kind = ExprKind::Number;
    double value = 0.0;
    std::string name;
    std::size_t index = 0;
    Func func = Func::Sin;
    Expr a;
    Expr b;
};

/// Recursive-descent parser:
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := '-' factor | power
///   power  := atom ('^' factor)?
///   atom   := number | name | name '(' expr ')' | '(' expr ')'
/// Throws ParseError with the byte offset of the offending token.
Expr parse_expr(std::string_view text, std::span<const std::string> coords);

/// Canonical text form. Re-parsing it yields a structurally identical tree.
std::string unparse(const Expr& e);

/// Plain double evaluation (no derivatives). Throws DomainError.
double evaluate(const Expr& e, std::span<const double> point);
/// Same as evaluate, carried out in extended precision.
long double evaluate_extended(const Expr& e, std::span<const long double> point);

} // namespace solab
