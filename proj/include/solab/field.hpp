#pragma once

#include "solab/expr.hpp"
#include "solab/jet.hpp"
#include "solab/tensor.hpp"

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace solab {

/// Coordinate chart: an ordered list of coordinate names. Single-chart manifolds only.
struct Chart {
    std::vector<std::string> coords;
    std::size_t dim() const noexcept { return coords.size(); }
};

using ChartPtr = std::shared_ptr<const Chart>;

ChartPtr make_chart(std::vector<std::string> coords);

/// Coordinates of a point in a chart. All entries finite.
class Point {
public:
    Point() = default;
    explicit Point(std::vector<double> coords);
    Point(std::initializer_list<double> coords) : Point(std::vector<double>(coords)) {}

    std::size_t dim() const noexcept { return x_.size(); }
    double operator[](std::size_t i) const { return x_[i]; }
    std::span<const double> coords() const noexcept { return x_; }

private:
    std::vector<double> x_;
};

/// Jet of an expression at `p`. Throws DomainError naming the offending subexpression.
Jet3 eval_jet(const Expr& e, const Point& p, int order);

/// A smooth function on a chart, given by an expression.
class ScalarField {
public:
    ScalarField() = default;
    ScalarField(ChartPtr chart, Expr body);
    ScalarField(ChartPtr chart, std::string_view text);

    const ChartPtr& chart() const noexcept { return chart_; }
    const Expr& body() const noexcept { return body_; }
    std::size_t dim() const noexcept { return chart_->dim(); }

    Jet3 eval_jet(const Point& p, int order) const;
    double eval(const Point& p) const;

private:
    ChartPtr chart_;
    Expr body_;
};

/// Multi-index of a partial derivative, e.g. {0,0,1} = d^3/dx dx dy.
using MultiIndex = std::vector<std::size_t>;

/// Central finite-difference estimate of a partial derivative of order 1..3, built only
/// on plain evaluation. Step 1e-4 for orders 1-2, 1e-3 for order 3.
double finite_diff_oracle(const ScalarField& f, const Point& p, const MultiIndex& mi);

/// Acceptance band for comparing an exact partial of order 1..3 against finite_diff_oracle:
/// relative 1e-6 for orders 1-2 (absolute 1e-8 below magnitude 1e-2), relative 1e-4 for
/// order 3 (absolute 1e-5 below magnitude 0.1, where the h^2 f^(5) stencil error dominates).
double finite_diff_tolerance(int order, double exact);

/// A tensor field whose components can be expanded as jets at any point.
///
/// Fields built from expressions, and fields derived from other fields by jet algebra
/// (raising with a metric, covariant derivatives, curvature) share this type. The jet
/// order a field can deliver depends on its inputs; requesting too much throws.
class TensorField {
public:
    using Evaluator = std::function<JetTensor(const Point&, int order)>;

    TensorField() = default;
    TensorField(std::size_t dim, Variance variance, Evaluator eval);

    static TensorField from_exprs(const ChartPtr& chart, Variance variance, std::vector<Expr> comps);
    static TensorField from_strings(const ChartPtr& chart, Variance variance, const std::vector<std::string>& comps);
    static TensorField constant(const TensorAtPoint& value);
    static TensorField zero(std::size_t dim, Variance variance);
    static TensorField identity(std::size_t dim);
    /// Covector field df.
    static TensorField differential(const ScalarField& f);

    bool empty() const noexcept { return !eval_; }
    std::size_t dim() const noexcept { return dim_; }
    const Variance& variance() const noexcept { return variance_; }

    JetTensor jets(const Point& p, int order) const;
    TensorAtPoint at(const Point& p) const { return values_of(jets(p, 0)); }

    /// Identity of the underlying evaluator (two copies of one field compare equal).
    bool same_as(const TensorField& o) const noexcept { return eval_ && eval_ == o.eval_; }

private:
    std::size_t dim_ = 0;
    Variance variance_;
    std::shared_ptr<const Evaluator> eval_;
};

/// Componentwise jet combination helpers used when deriving fields.
JetTensor jet_zeros(std::size_t dim, Variance variance, int order);

} // namespace solab
