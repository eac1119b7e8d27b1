#pragma once

#include "solab/field.hpp"
#include "solab/pointwise.hpp"

#include <optional>
#include <string>
#include <vector>

namespace solab {

/// Linear connection given by coefficients Gamma^k_ij with nabla_{d_i} d_j = Gamma^k_ij d_k.
///
/// Coefficient jets are stored as a (1,2) JetTensor indexed (k, i, j). Connections are lazy:
/// derived connections hold their inputs and evaluate on demand.
class ConnectionField {
public:
    using Evaluator = TensorField::Evaluator;

    ConnectionField() = default;
    ConnectionField(std::size_t dim, bool symmetric, Evaluator eval, std::string label);

    std::size_t dim() const noexcept { return coeffs_.dim(); }
    /// Set when the lower indices are symmetric by construction.
    bool symmetric() const noexcept { return symmetric_; }
    const std::string& label() const noexcept { return label_; }

    JetTensor jets(const Point& p, int order) const { return coeffs_.jets(p, order); }
    TensorAtPoint at(const Point& p) const { return coeffs_.at(p); }
    const TensorField& coefficients() const noexcept { return coeffs_; }

    bool same_as(const ConnectionField& o) const noexcept { return coeffs_.same_as(o.coeffs_); }
    /// True when this object is the Levi-Civita connection built from exactly this metric field.
    bool is_levi_civita_of(const MetricField& g) const noexcept { return lc_metric_ && lc_metric_->same_as(g); }

private:
    friend ConnectionField levi_civita(const MetricField& g);

    TensorField coeffs_;
    bool symmetric_ = false;
    std::string label_;
    std::optional<MetricField> lc_metric_;
};

ConnectionField levi_civita(const MetricField& g);

/// Connection with coefficients given directly as a (1,2) field (k, i, j).
ConnectionField explicit_connection(const TensorField& gamma, std::string label = "explicit");

/// base + delta, delta a (1,2) field.
ConnectionField add_coefficients(const ConnectionField& base, const TensorField& delta, std::string label);

/// One algebraic deformation term; see deform_connection.
struct DeformTerm {
    enum class Kind { AlphaTensorF, IdTensorAlpha, GTensorXi };

    Kind kind = Kind::AlphaTensorF;
    double coeff = 1.0;
    TensorField alpha;  // covector, for the first two kinds
    TensorField F;      // endomorphism for AlphaTensorF; empty means the identity
    TensorField xi;     // vector, for GTensorXi
    std::optional<MetricField> g;

    /// (X, Y) -> alpha(X) F(Y)
    static DeformTerm alpha_tensor_F(double coeff, TensorField alpha, TensorField F = {});
    /// (X, Y) -> alpha(Y) X
    static DeformTerm id_tensor_alpha(double coeff, TensorField alpha);
    /// (X, Y) -> g(X, Y) xi
    static DeformTerm g_tensor_xi(double coeff, MetricField g, TensorField xi);
};

/// nabla~_X Y = base_X Y + sum coeff * term(X, Y). The symmetric flag survives only when
/// base is symmetric and the terms pair up symmetrically.
ConnectionField deform_connection(const ConnectionField& base, std::vector<DeformTerm> terms);

/// Torsion-free connection with nabla~ g = eta (x) g:
/// nabla - 1/2 eta(X) Y - 1/2 eta(Y) X + 1/2 g(X,Y) eta^sharp.
ConnectionField weyl_connection(const MetricField& g, const TensorField& eta);

/// T^k_ij = Gamma^k_ij - Gamma^k_ji.
TensorAtPoint torsion_at(const ConnectionField& conn, const Point& p);

/// Covariant derivative as a field. The derivative index is the first slot of the result:
/// (nabla T)(m, ...) = (nabla_m T)(...).
TensorField covariant_derivative(const ConnectionField& conn, const TensorField& t);
TensorAtPoint cov_deriv_at(const ConnectionField& conn, const TensorField& t, const Point& p);

/// The endomorphism X -> nabla_X xi, components M^a_i = nabla_i xi^a.
TensorField vector_derivative_endomorphism(const ConnectionField& conn, const TensorField& xi);

struct Recurrence {
    bool recurrent = false;
    std::vector<double> eta;  // fitted factor (populated either way)
    double residual = 0.0;    // relative residual of the fit
};

/// Fits (nabla_k g)_ij = eta_k g_ij by least squares per direction k; recurrent when the
/// relative residual is at most 1e-8.
Recurrence recurrence_factor(const ConnectionField& conn, const MetricField& g, const Point& p);

/// Connection determined by d_k g_ij = Gamma^l_ki g_lj + g_il Gamma*^l_kj.
/// The Levi-Civita connection of g is returned unchanged.
ConnectionField dual_connection(const MetricField& g, const ConnectionField& conn);

/// (a + b) / 2; returns a itself when a and b are the same object.
ConnectionField mean_connection(const ConnectionField& a, const ConnectionField& b);

/// Max over (k, i, j) of |d_k g_ij - Gamma^l_ki g_lj - g_il Gamma*^l_kj|.
double duality_residual(const MetricField& g, const ConnectionField& conn, const ConnectionField& dual,
                        const Point& p);

} // namespace solab
