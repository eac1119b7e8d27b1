#pragma once

#include "solab/field.hpp"
#include "solab/linalg.hpp"
#include "solab/tensor.hpp"

#include <memory>
#include <vector>

namespace solab {

/// Riemannian metric evaluated at one point: g, its inverse, and its Cholesky factor.
struct MetricAtPoint {
    Matrix g;
    Matrix g_inv;
    Matrix chol;  // lower triangular, g = chol * chol^T

    std::size_t dim() const noexcept { return g.rows(); }
    /// Builds the inverse and factor from a symmetric positive-definite matrix.
    static MetricAtPoint from_matrix(const Matrix& g);
    TensorAtPoint as_tensor() const;
};

/// A metric field g_ij. Components must be symmetric; positivity is checked at evaluation.
class MetricField {
public:
    MetricField() = default;
    explicit MetricField(TensorField components);
    static MetricField from_strings(const ChartPtr& chart, const std::vector<std::string>& comps);

    std::size_t dim() const noexcept { return g_.dim(); }
    const TensorField& field() const noexcept { return g_; }
    bool same_as(const MetricField& o) const noexcept { return g_.same_as(o.g_); }

private:
    TensorField g_;
};

struct MetricJets {
    MetricAtPoint metric;
    JetTensor g;  // (0,2) component jets to the requested order
};

/// Evaluates g at p with component jets to `order`. Throws NotPositiveDefinite or
/// AsymmetricTensor (asymmetry beyond 1e-10).
MetricJets metric_at(const MetricField& g, const Point& p, int order);

/// Jets of the inverse metric g^{ij} from jets of g_ij (truncated Neumann series, exact to the jet order).
JetTensor inverse_jets(const JetTensor& g);

/// Full metric contraction T.T; one g^{-1} per lower slot and one g per upper slot. Rank <= 4.
double norm2(const TensorAtPoint& t, const MetricAtPoint& m);

/// Contracts slot `slot` with g^{-1} (to Up) or g (to Down).
TensorAtPoint raise_lower(const TensorAtPoint& t, const MetricAtPoint& m, std::size_t slot, Slot to);

/// Eigenvalues (ascending) and g-orthonormal eigenvectors of the endomorphism g^{-1} H.
struct FrameSpectrum {
    std::vector<double> eigenvalues;
    std::vector<std::vector<double>> frame;  // frame[i] = components of E_i

    /// Matrix whose column i is E_i.
    Matrix frame_matrix() const;
};

/// Solves H v = lambda g v for symmetric H via Cholesky reduction and Jacobi rotations.
FrameSpectrum generalized_eigen(const TensorAtPoint& h, const MetricAtPoint& m);

/// Metric trace g^{ij} H_ij of a (0,2) tensor, or the plain trace of a (1,1) tensor.
double trace(const TensorAtPoint& t, const MetricAtPoint& m);

/// Endomorphism X -> alpha(X) xi, components xi^a alpha_i.
TensorAtPoint outer_endomorphism(const TensorAtPoint& alpha, const TensorAtPoint& xi);

// Field-level index gymnastics (jets propagate through the metric).
TensorField sharp(const MetricField& g, const TensorField& covector);
TensorField flat(const MetricField& g, const TensorField& vector);
/// Applies an endomorphism field to a vector field.
TensorField apply_endomorphism(const TensorField& f, const TensorField& vector);
/// Gradient vector field of a scalar field.
TensorField gradient(const MetricField& g, const ScalarField& f);

} // namespace solab
