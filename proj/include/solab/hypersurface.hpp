#pragma once

#include "solab/connection.hpp"
#include "solab/soliton.hpp"

#include <vector>

namespace solab {

/// Hypersurface X: chart -> Euclidean (n+1)-space.
struct Immersion {
    ChartPtr chart;
    std::vector<Expr> components;  // n + 1 entries
    int orientation = 1;           // +1 or -1; flips the unit normal

    Immersion() = default;
    Immersion(ChartPtr chart, std::vector<Expr> components, int orientation = 1);
    static Immersion from_strings(const ChartPtr& chart, const std::vector<std::string>& comps, int orientation = 1);

    std::size_t dim() const noexcept { return chart->dim(); }
};

/// g_ij = <d_i X, d_j X>. Metric jets of order r use component jets of order r + 1.
/// Evaluation throws RankDeficient where the Jacobian loses rank.
MetricField induced_metric(const Immersion& imm);

/// Unit normal with det[d_1X ... d_nX nu] > 0, times the orientation.
std::vector<double> unit_normal(const Immersion& imm, const Point& p);

/// A = g^{-1} II with II_ij = <d_i d_j X, nu>; the outward unit sphere has A = -I.
TensorAtPoint shape_operator_at(const Immersion& imm, const Point& p);

/// nabla xi + A + lambda I with nabla the Levi-Civita connection of the induced metric.
Residual shape_soliton_residual(const Immersion& imm, const TensorField& xi, double lambda, const Point& p);

struct EtaUmbilical {
    double sigma = 0.0;
    double rho = 0.0;
    TensorAtPoint xi;  // unit eigenvector of rho; zero when A is umbilical
    bool umbilical = false;
    double reconstruction_error = 0.0;
};

/// Splits a g-self-adjoint A as sigma I + (rho - sigma) eta (x) xi. Eigenvalues within 1e-8
/// form one cluster. With two simple eigenvalues (n = 2) sigma is the smaller one.
/// Throws NotEtaUmbilical, or AsymmetricTensor when g A is not symmetric within 1e-9.
EtaUmbilical eta_umbilical_decompose(const TensorAtPoint& A, const MetricAtPoint& m);

/// -(lambda + sigma) I + (sigma - rho) eta (x) xi.
TensorAtPoint torse_forming_from_shape(const EtaUmbilical& e, const MetricAtPoint& m, double lambda);

} // namespace solab
