#pragma once

#include "solab/connection.hpp"

#include <optional>

namespace solab {

/// Curvature of a connection at one point.
///
/// Conventions: riemann(l, k, i, j) is the d_l component of R(d_i, d_j) d_k with
/// R(X,Y) = nabla_X nabla_Y - nabla_Y nabla_X - nabla_[X,Y];
/// ricci(i, j) = riemann(l, i, l, j), i.e. Ric(Y, Z) = trace(X -> R(X, Z) Y);
/// Q is defined by Ric(X, Y) = g(QX, Y). The unit 2-sphere has scalar curvature +2.
struct CurvatureAtPoint {
    TensorAtPoint riemann;  // (1,3)
    TensorAtPoint ricci;    // (0,2); empty for riemann_at
    TensorAtPoint Q;        // (1,1); empty for riemann_at
    double scalar = 0.0;
    std::optional<double> gauss;  // K = R / 2 when n = 2
};

/// Riemann tensor as a field; jets of order r need connection jets of order r + 1.
TensorField riemann_field(const ConnectionField& conn);
TensorField ricci_field(const ConnectionField& conn);
/// Q^a_i with Ric(X, Y) = g(QX, Y).
TensorField ricci_endomorphism_field(const ConnectionField& conn, const MetricField& g);

CurvatureAtPoint riemann_at(const ConnectionField& conn, const Point& p);
CurvatureAtPoint ricci_at(const ConnectionField& conn, const MetricField& g, const Point& p);

/// The vector-valued 2-form (X, Y) -> R(X, Y) xi, components (l, i, j).
TensorAtPoint riemann_apply(const TensorAtPoint& riemann, const TensorAtPoint& xi);

/// (X, Y) -> sum_k (nabla_{e_k} Riem)(X, Y) e_k over a g-orthonormal frame, components (l, i, j).
/// The frame defaults to the Cholesky frame e_k = L^{-T} d_k; `frame` columns override it.
TensorAtPoint div_riemann_at(const ConnectionField& conn, const MetricField& g, const Point& p,
                             const std::optional<Matrix>& frame = std::nullopt);

/// Exterior covariant derivative.
///  - endomorphism field F: (X, Y) -> (nabla_X F) Y - (nabla_Y F) X + F(T(X, Y)), components (a, i, j);
///  - vector field xi: the endomorphism X -> nabla_X xi.
TensorAtPoint ext_cov_deriv_at(const ConnectionField& conn, const TensorField& f, const Point& p);

} // namespace solab
