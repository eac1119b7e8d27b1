#include "solab/field.hpp"

#include "solab/errors.hpp"

#include <algorithm>
#include <cmath>

namespace solab {

ChartPtr make_chart(std::vector<std::string> coords) {
    return std::make_shared<const Chart>(Chart{std::move(coords)});
}

Point::Point(std::vector<double> coords) : x_(std::move(coords)) {
    for (double v : x_) {
        if (!std::isfinite(v)) throw InvalidArgument("point coordinates must be finite");
    }
}

namespace {

Jet3 ipow_jet(const Jet3& base, long k) {
    if (k < 0) {
        if (base.value() == 0.0) throw InvalidArgument("zero base");
        return reciprocal(ipow_jet(base, -k));
    }
    Jet3 result = Jet3::constant(base.dim(), base.order(), 1.0);
    Jet3 b = base;
    while (k > 0) {
        if (k & 1) result = result * b;
        k >>= 1;
        if (k > 0) b = b * b;
    }
    return result;
}

Jet3 jet_rec(const Expr& e, const Point& p, int order) {
    const std::size_t n = p.dim();
    switch (e.kind()) {
    case ExprKind::Number:
    case ExprKind::Constant: return Jet3::constant(n, order, e.number_value());
    case ExprKind::Variable: return Jet3::variable(n, order, e.var_index(), p[e.var_index()]);
    case ExprKind::Neg: return -jet_rec(e.lhs(), p, order);
    case ExprKind::Add: return jet_rec(e.lhs(), p, order) + jet_rec(e.rhs(), p, order);
    case ExprKind::Sub: return jet_rec(e.lhs(), p, order) - jet_rec(e.rhs(), p, order);
    case ExprKind::Mul: return jet_rec(e.lhs(), p, order) * jet_rec(e.rhs(), p, order);
    case ExprKind::Div: {
        Jet3 den = jet_rec(e.rhs(), p, order);
        if (den.value() == 0.0) throw DomainError("division by zero", unparse(e));
        return jet_rec(e.lhs(), p, order) * reciprocal(den);
    }
    case ExprKind::Pow: {
        Jet3 base = jet_rec(e.lhs(), p, order);
        long k = 0;
        if (e.rhs().integer_literal(k)) {
            if (k < 0 && base.value() == 0.0) throw DomainError("division by zero", unparse(e));
            return ipow_jet(base, k);
        }
        if (base.value() <= 0.0) throw DomainError("non-integer power of non-positive base", unparse(e));
        const double b0 = base.value();
        Jet3 log_base = base.compose(std::log(b0), 1.0 / b0, -1.0 / (b0 * b0), 2.0 / (b0 * b0 * b0));
        Jet3 arg = jet_rec(e.rhs(), p, order) * log_base;
        const double ex = std::exp(arg.value());
        return arg.compose(ex, ex, ex, ex);
    }
    case ExprKind::Call: {
        Jet3 a = jet_rec(e.lhs(), p, order);
        const double x = a.value();
        switch (e.func()) {
        case Func::Sin: {
            const double s = std::sin(x), c = std::cos(x);
            return a.compose(s, c, -s, -c);
        }
        case Func::Cos: {
            const double s = std::sin(x), c = std::cos(x);
            return a.compose(c, -s, -c, s);
        }
        case Func::Tan: {
            if (std::cos(x) == 0.0) throw DomainError("tan at a pole", unparse(e));
            const double t = std::tan(x), s = 1.0 + t * t;
            return a.compose(t, s, 2.0 * t * s, s * (2.0 + 6.0 * t * t));
        }
        case Func::Atan: {
            const double q = 1.0 / (1.0 + x * x);
            return a.compose(std::atan(x), q, -2.0 * x * q * q, (6.0 * x * x - 2.0) * q * q * q);
        }
        case Func::Exp: {
            const double ex = std::exp(x);
            return a.compose(ex, ex, ex, ex);
        }
        case Func::Log: {
            if (x <= 0.0) throw DomainError("log of non-positive value", unparse(e));
            return a.compose(std::log(x), 1.0 / x, -1.0 / (x * x), 2.0 / (x * x * x));
        }
        case Func::Sqrt: {
            if (x < 0.0) throw DomainError("sqrt of negative value", unparse(e));
            if (x == 0.0 && order > 0) throw DomainError("sqrt is not differentiable at zero", unparse(e));
            const double s = std::sqrt(x);
            if (order == 0) return a.compose(s, 0.0, 0.0, 0.0);
            return a.compose(s, 0.5 / s, -0.25 / (s * x), 0.375 / (s * x * x));
        }
        case Func::Sinh: {
            const double sh = std::sinh(x), ch = std::cosh(x);
            return a.compose(sh, ch, sh, ch);
        }
        case Func::Cosh: {
            const double sh = std::sinh(x), ch = std::cosh(x);
            return a.compose(ch, sh, ch, sh);
        }
        case Func::Tanh: {
            const double t = std::tanh(x), s = 1.0 - t * t;
            return a.compose(t, s, -2.0 * t * s, s * (6.0 * t * t - 2.0));
        }
        }
    }
    }
    throw Error("corrupt expression node");
}

} // namespace

Jet3 eval_jet(const Expr& e, const Point& p, int order) {
    if (order < 0 || order > Jet3::kMaxOrder) throw InvalidArgument("jet order must be in 0..3");
    return jet_rec(e, p, order);
}

ScalarField::ScalarField(ChartPtr chart, Expr body) : chart_(std::move(chart)), body_(std::move(body)) {}

ScalarField::ScalarField(ChartPtr chart, std::string_view text)
    : chart_(std::move(chart)), body_(parse_expr(text, chart_->coords)) {}

Jet3 ScalarField::eval_jet(const Point& p, int order) const {
    if (p.dim() != dim()) throw InvalidArgument("point dimension does not match chart");
    return solab::eval_jet(body_, p, order);
}

double ScalarField::eval(const Point& p) const {
    if (p.dim() != dim()) throw InvalidArgument("point dimension does not match chart");
    return evaluate(body_, p.coords());
}

double finite_diff_oracle(const ScalarField& f, const Point& p, const MultiIndex& mi) {
    if (mi.empty() || mi.size() > 3) throw InvalidArgument("finite differences support orders 1..3");
    for (std::size_t i : mi) {
        if (i >= p.dim()) throw InvalidArgument("multi-index out of range");
    }
    // Extended precision keeps the rounding noise (~eps/h^k) well below the tolerances.
    std::vector<long double> base(p.coords().begin(), p.coords().end());
    // Product of fourth-order central first differences (offsets -2h..2h per index), so the
    // truncation error is O(h^4) and does not swamp the tolerances near zero.
    const long double h = mi.size() == 3 ? 1e-3L : 1e-4L;
    static constexpr int offsets[4] = {-2, -1, 1, 2};
    static constexpr long double weights[4] = {1.0L / 12.0L, -8.0L / 12.0L, 8.0L / 12.0L, -1.0L / 12.0L};
    const std::size_t k = mi.size();
    std::size_t combos = 1;
    for (std::size_t i = 0; i < k; ++i) combos *= 4;
    long double acc = 0.0L;
    for (std::size_t code = 0; code < combos; ++code) {
        std::vector<long double> x = base;
        long double w = 1.0L;
        std::size_t rest = code;
        for (std::size_t i = 0; i < k; ++i) {
            const std::size_t c = rest % 4;
            rest /= 4;
            x[mi[i]] += offsets[c] * h;
            w *= weights[c];
        }
        acc += w * evaluate_extended(f.body(), x);
    }
    long double scale = 1.0L;
    for (std::size_t i = 0; i < k; ++i) scale *= h;
    return static_cast<double>(acc / scale);
}

double finite_diff_tolerance(int order, double exact) {
    if (order == 3) return 1e-4 * std::max(std::fabs(exact), 0.1);
    return 1e-6 * std::max(std::fabs(exact), 1e-2);
}

TensorField::TensorField(std::size_t dim, Variance variance, Evaluator eval)
    : dim_(dim), variance_(std::move(variance)), eval_(std::make_shared<const Evaluator>(std::move(eval))) {}

TensorField TensorField::from_exprs(const ChartPtr& chart, Variance variance, std::vector<Expr> comps) {
    const std::size_t n = chart->dim();
    if (comps.size() != ipow(n, variance.size())) throw InvalidArgument("wrong number of component expressions");
    Variance v = variance;
    return TensorField(n, std::move(variance), [n, v, comps = std::move(comps)](const Point& p, int order) {
        if (p.dim() != n) throw InvalidArgument("point dimension does not match chart");
        std::vector<Jet3> out;
        out.reserve(comps.size());
        for (const Expr& e : comps) out.push_back(eval_jet(e, p, order));
        return JetTensor(n, v, std::move(out));
    });
}

TensorField TensorField::from_strings(const ChartPtr& chart, Variance variance, const std::vector<std::string>& comps) {
    std::vector<Expr> exprs;
    exprs.reserve(comps.size());
    for (const auto& s : comps) exprs.push_back(parse_expr(s, chart->coords));
    return from_exprs(chart, std::move(variance), std::move(exprs));
}

TensorField TensorField::constant(const TensorAtPoint& value) {
    const std::size_t n = value.dim();
    return TensorField(n, value.variance(), [value](const Point&, int order) {
        std::vector<Jet3> out;
        out.reserve(value.size());
        for (double c : value.components()) out.push_back(Jet3::constant(value.dim(), order, c));
        return JetTensor(value.dim(), value.variance(), std::move(out));
    });
}

TensorField TensorField::zero(std::size_t dim, Variance variance) {
    return constant(TensorAtPoint(dim, std::move(variance)));
}

TensorField TensorField::identity(std::size_t dim) { return constant(TensorAtPoint::identity(dim)); }

TensorField TensorField::differential(const ScalarField& f) {
    const std::size_t n = f.dim();
    return TensorField(n, {Slot::Down}, [f, n](const Point& p, int order) {
        if (order + 1 > Jet3::kMaxOrder) throw InvalidArgument("differential needs one more jet order than available");
        const Jet3 j = f.eval_jet(p, order + 1);
        std::vector<Jet3> out;
        out.reserve(n);
        for (std::size_t i = 0; i < n; ++i) out.push_back(j.derivative(i));
        return JetTensor(n, {Slot::Down}, std::move(out));
    });
}

JetTensor TensorField::jets(const Point& p, int order) const {
    if (!eval_) throw InvalidArgument("evaluating an empty tensor field");
    return (*eval_)(p, order);
}

JetTensor jet_zeros(std::size_t dim, Variance variance, int order) {
    std::vector<Jet3> z(ipow(dim, variance.size()), Jet3::constant(dim, order, 0.0));
    return JetTensor(dim, std::move(variance), std::move(z));
}

} // namespace solab
