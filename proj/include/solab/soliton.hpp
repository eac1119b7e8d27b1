#pragma once

#include "solab/connection.hpp"
#include "solab/curvature.hpp"

#include <optional>
#include <string>
#include <vector>

namespace solab {

/// Soliton data (g, f or xi, lambda, mu, F, connection).
///
/// Sign convention: H_f + Ric + lambda g = 0, so lambda < 0 is shrinking.
struct SolitonData {
    MetricField g;
    std::optional<ScalarField> f;
    std::optional<TensorField> xi;          // vector field; grad f when f is given
    double lambda = 0.0;
    std::optional<double> mu;
    std::optional<TensorField> F;           // endomorphism; Q of the active connection when absent
    std::optional<ConnectionField> connection;  // Levi-Civita of g when absent

    ConnectionField active_connection() const;
    TensorField vector_field() const;
};

struct Residual {
    TensorAtPoint tensor;
    double norm2 = 0.0;
};

/// H_f + Ric + lambda g (0,2). Requires a potential and the Levi-Civita connection.
Residual gradient_residual(const SolitonData& d, const Point& p);

/// Hessian tensor (H_f)_ij = d_i d_j f - Gamma^k_ij d_k f.
TensorAtPoint hessian_at(const MetricField& g, const ScalarField& f, const Point& p);

/// Real roots of a x^2 + 2 b x + c with reduced discriminant b^2 - a c.
struct Quadratic {
    double a = 0.0, b = 0.0, c = 0.0;
    double disc = 0.0;
    std::vector<double> roots;  // ascending; one entry for a double root
    bool double_root = false;
};
Quadratic solve_reduced_quadratic(double a, double b, double c);

struct LambdaAnalysis {
    Quadratic q11;  // n l^2 + 2 Lap(f) l + (|H|^2 - |Ric|^2)
    Quadratic q17;  // n l^2 + 2 R l + (|Ric|^2 - |H|^2)
    double companion11 = 0.0;  // -2 Lap(f)/n - lambda
    double companion17 = 0.0;  // -2 R/n - lambda
    double trace16_residual = 0.0;  // Lap(f) + R + n lambda
    /// Norm^2 of the tensor residual with lambda replaced by companion11. Data only.
    double companion11_tensor_residual = 0.0;
};

enum class Classification { Shrinking, Steady, Expanding };
const char* to_string(Classification c);
Classification classify(double lambda);

struct SolitonReport {
    double residual6_norm2 = 0.0;
    FrameSpectrum spectrum;
    double laplacian = 0.0;
    double normH2 = 0.0;
    double normRic2 = 0.0;
    double scalarR = 0.0;
    std::optional<double> gauss;
    double identity10_residual = 0.0;
    LambdaAnalysis lambda_analysis;
    double margin13 = 0.0;
    double margin19 = 0.0;
    double double20[3] = {0.0, 0.0, 0.0};  // |H|^2 - Lap^2/n <= |Ric|^2 <= |H|^2 + R^2/n
    bool hessian_equals_ricci = false;
    bool hessian_equals_minus_ricci = false;
    bool harmonic = false;     // Lap(f) = 0
    bool scalar_flat = false;  // R = 0
    Classification classification = Classification::Steady;
};

SolitonReport soliton_report(const SolitonData& d, const Point& p);

/// Roots of q11 present at every point within 1e-8 (max - min), i.e. candidate soliton constants.
std::vector<double> constant_roots(const std::vector<LambdaAnalysis>& per_point);

/// nabla~ xi + F + lambda I + mu eta (x) xi as a (1,1) tensor, eta = xi flat.
Residual generalized_residual(const SolitonData& d, const Point& p);

struct TorseForming {
    std::vector<double> f;                // per point
    std::vector<TensorAtPoint> gamma;     // covector per point
    double max_relative_residual = 0.0;
};

/// Fits nabla xi = f I + gamma (x) xi per point. Throws ZeroVector or NotTorseForming.
TorseForming torse_forming_check(const MetricField& g, const TensorField& xi, const std::vector<Point>& points);

/// Q + (lambda + f) I + eta (x) xi for the Levi-Civita connection.
Residual eta_einstein_residual(const MetricField& g, const TensorField& xi, double lambda, double f, const Point& p);

struct VaismanPoint {
    Point p;
    double soliton_norm2 = 0.0;        // nabla~ V + J
    double recurrence_error = 0.0;     // max |fitted factor - 2u|
    double recurrence_fit = 0.0;       // relative residual of the recurrence fit
    double torsion_error = 0.0;        // max |T~ - formula|
    double torsion_UV = 0.0;           // max |T~(U, V)|
};

struct VaismanReport {
    double premise_J2 = 0.0;
    double premise_hermitian = 0.0;
    double premise_unit_u = 0.0;
    double premise_covariant_V = 0.0;
    std::vector<VaismanPoint> points;
    bool passed = false;  // all three conclusions within 1e-9
};

/// nabla~ = nabla - u (x) I - v (x) J for Vaisman data (g, J, u) with c = 1.
ConnectionField vaisman_connection(const MetricField& g, const TensorField& J, const TensorField& u);

/// Checks the premises at every point (PremiseViolated names the failure and the worst point),
/// then reports the soliton, recurrence and torsion conclusions.
VaismanReport vaisman_verify(const MetricField& g, const TensorField& J, const TensorField& u,
                             const std::vector<Point>& points);

struct WeylShift {
    double delta_lambda = 0.0;
    double delta_mu = 0.0;
    double fit_residual = 0.0;       // max |D - a I - b eta (x) xi|
    double identity_residual = 0.0;  // max |res~(lambda, mu) - res(lambda + a, mu + b)|
    double xi_norm2 = 0.0;
    double stated_delta_mu = 0.5;    // the shift in mu as published
    bool mu_matches_stated = false;
};

/// Compares the Weyl connection of (g, eta) with Levi-Civita on xi = eta sharp. F defaults to Q of Levi-Civita.
WeylShift weyl_shift_probe(const MetricField& g, const TensorField& eta, const std::optional<TensorField>& F,
                           double lambda, double mu, const std::vector<Point>& points);

struct StatisticalPoint {
    Point p;
    double duality_residual = 0.0;
    double mean_identity_residual = 0.0;  // max |(conn + dual)/2 - Levi-Civita|
    double ricci_asymmetry = 0.0;
    double residual_conn = 0.0;
    double residual_dual = 0.0;
    double residual_mean = 0.0;
};

struct StatisticalReport {
    std::vector<StatisticalPoint> points;
    bool self_dual = false;
    bool ricci_symmetric = false;
    bool statistical_soliton = false;
};

StatisticalReport statistical_check(const MetricField& g, const ConnectionField& conn, const TensorField& xi,
                                    double lambda, const std::vector<Point>& points);

struct WeakResidual {
    TensorAtPoint tensor;     // (l, i, j)
    double norm2 = 0.0;
    double route_difference = 0.0;  // max |curvature route - literal double exterior derivative|
};

/// Riem(X, Y) xi - sum_k (nabla_{e_k} Riem)(X, Y) e_k for the Levi-Civita connection of g.
WeakResidual weak_soliton_residual(const MetricField& g, const TensorField& xi, const Point& p);

} // namespace solab
