#include "solab/pointwise.hpp"

#include "solab/errors.hpp"

#include <algorithm>
#include <cmath>

namespace solab {

MetricAtPoint MetricAtPoint::from_matrix(const Matrix& g) {
    const std::size_t n = g.rows();
    MetricAtPoint m;
    m.g = g;
    m.chol = cholesky(g);
    const Matrix linv = lower_triangular_inverse(m.chol);
    m.g_inv = linv.transpose() * linv;
    // Symmetrize away roundoff.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double s = 0.5 * (m.g_inv(i, j) + m.g_inv(j, i));
            m.g_inv(i, j) = s;
            m.g_inv(j, i) = s;
        }
    return m;
}

TensorAtPoint MetricAtPoint::as_tensor() const {
    const std::size_t n = dim();
    return TensorAtPoint(n, {Slot::Down, Slot::Down}, std::vector<double>(g.data().begin(), g.data().end()));
}

MetricField::MetricField(TensorField components) : g_(std::move(components)) {
    if (g_.variance() != Variance{Slot::Down, Slot::Down}) throw InvalidArgument("metric must be a (0,2) field");
}

MetricField MetricField::from_strings(const ChartPtr& chart, const std::vector<std::string>& comps) {
    return MetricField(TensorField::from_strings(chart, {Slot::Down, Slot::Down}, comps));
}

MetricJets metric_at(const MetricField& gf, const Point& p, int order) {
    JetTensor jets = gf.field().jets(p, order);
    const std::size_t n = gf.dim();
    Matrix g(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) g(i, j) = jets(i, j).value();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double scale = std::max(1.0, std::max(std::fabs(g(i, j)), std::fabs(g(j, i))));
            if (std::fabs(g(i, j) - g(j, i)) > 1e-10 * scale) {
                throw AsymmetricTensor("metric is not symmetric at the evaluation point");
            }
        }
    return MetricJets{MetricAtPoint::from_matrix(g), std::move(jets)};
}

JetTensor inverse_jets(const JetTensor& g) {
    const std::size_t n = g.dim();
    const int order = g[0].order();
    Matrix g0(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) g0(i, j) = g(i, j).value();
    const Matrix inv0 = MetricAtPoint::from_matrix(g0).g_inv;

    // inverse = sum_k (-N D)^k N with N = g0^{-1}, D = g - g0; D^k vanishes beyond jet order k.
    std::vector<Jet3> nd(n * n, Jet3::constant(n, order, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Jet3 acc = Jet3::constant(n, order, 0.0);
            for (std::size_t k = 0; k < n; ++k) {
                Jet3 d = g(k, j);
                d = d + (-d.value());
                acc += inv0(i, k) * d;
            }
            nd[i * n + j] = -acc;
        }
    std::vector<Jet3> term(n * n), sum(n * n);
    for (std::size_t t = 0; t < n * n; ++t) {
        term[t] = Jet3::constant(n, order, inv0(t / n, t % n));
        sum[t] = term[t];
    }
    for (int k = 1; k <= order; ++k) {
        std::vector<Jet3> next(n * n, Jet3::constant(n, order, 0.0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t m = 0; m < n; ++m) next[i * n + j].add_product(1.0, nd[i * n + m], term[m * n + j]);
        term = std::move(next);
        for (std::size_t t = 0; t < n * n; ++t) sum[t] += term[t];
    }
    return JetTensor(n, {Slot::Up, Slot::Up}, std::move(sum));
}

namespace {

/// Contracts slot `slot` of t with matrix m: out[..a..] = sum_b m(a,b) t[..b..].
TensorAtPoint apply_to_slot(const TensorAtPoint& t, const Matrix& m, std::size_t slot, Slot kind) {
    const std::size_t n = t.dim();
    const std::size_t r = t.rank();
    Variance v = t.variance();
    v[slot] = kind;
    TensorAtPoint out(n, v);
    const std::size_t stride = ipow(n, r - 1 - slot);
    for (std::size_t f = 0; f < t.size(); ++f) {
        const std::size_t b = (f / stride) % n;
        const std::size_t base = f - b * stride;
        const double val = t[f];
        if (val == 0.0) continue;
        for (std::size_t a = 0; a < n; ++a) out[base + a * stride] += m(a, b) * val;
    }
    return out;
}

} // namespace

TensorAtPoint raise_lower(const TensorAtPoint& t, const MetricAtPoint& m, std::size_t slot, Slot to) {
    if (slot >= t.rank()) throw InvalidArgument("invalid slot " + std::to_string(slot));
    if (t.variance()[slot] == to) throw InvalidArgument("slot already has the requested variance");
    if (t.dim() != m.dim()) throw InvalidArgument("tensor and metric dimensions differ");
    return apply_to_slot(t, to == Slot::Up ? m.g_inv : m.g, slot, to);
}

double norm2(const TensorAtPoint& t, const MetricAtPoint& m) {
    if (t.rank() > 4) throw InvalidArgument("norm2 supports rank <= 4");
    TensorAtPoint flipped = t;
    for (std::size_t s = 0; s < t.rank(); ++s) {
        flipped = raise_lower(flipped, m, s, t.variance()[s] == Slot::Up ? Slot::Down : Slot::Up);
    }
    double acc = 0.0;
    for (std::size_t f = 0; f < t.size(); ++f) acc += t[f] * flipped[f];
    return acc;
}

Matrix FrameSpectrum::frame_matrix() const {
    const std::size_t n = eigenvalues.size();
    Matrix e(n, n);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i) e(i, k) = frame[k][i];
    return e;
}

FrameSpectrum generalized_eigen(const TensorAtPoint& h, const MetricAtPoint& m) {
    const std::size_t n = m.dim();
    if (h.variance() != Variance{Slot::Down, Slot::Down} || h.dim() != n) {
        throw InvalidArgument("generalized_eigen expects a (0,2) tensor of the metric's dimension");
    }
    Matrix hm(n, n);
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            hm(i, j) = h(i, j);
            scale = std::max(scale, std::fabs(h(i, j)));
        }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::fabs(hm(i, j) - hm(j, i)) > 1e-10 * std::max(1.0, scale)) {
                throw AsymmetricTensor("Hessian-type tensor is not symmetric");
            }
    const Matrix linv = lower_triangular_inverse(m.chol);
    Matrix c = linv * hm * linv.transpose();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double s = 0.5 * (c(i, j) + c(j, i));
            c(i, j) = s;
            c(j, i) = s;
        }
    const SymmetricEigen eig = jacobi_eigen(c);
    const Matrix e = linv.transpose() * eig.vectors;
    FrameSpectrum out;
    out.eigenvalues = eig.values;
    out.frame.assign(n, std::vector<double>(n));
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i) out.frame[k][i] = e(i, k);
    return out;
}

double trace(const TensorAtPoint& t, const MetricAtPoint& m) {
    const std::size_t n = t.dim();
    if (t.rank() != 2) throw InvalidArgument("trace expects a rank-2 tensor");
    double s = 0.0;
    if (t.variance() == Variance{Slot::Down, Slot::Down}) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) s += m.g_inv(i, j) * t(i, j);
    } else if (t.variance() == Variance{Slot::Up, Slot::Up}) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) s += m.g(i, j) * t(i, j);
    } else {
        for (std::size_t i = 0; i < n; ++i) s += t(i, i);
    }
    return s;
}

TensorAtPoint outer_endomorphism(const TensorAtPoint& alpha, const TensorAtPoint& xi) {
    const std::size_t n = xi.dim();
    TensorAtPoint out(n, {Slot::Up, Slot::Down});
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t i = 0; i < n; ++i) out(a, i) = xi(a) * alpha(i);
    return out;
}

TensorField sharp(const MetricField& g, const TensorField& covector) {
    if (covector.variance() != Variance{Slot::Down}) throw InvalidArgument("sharp expects a covector field");
    const std::size_t n = g.dim();
    return TensorField(n, {Slot::Up}, [g, covector, n](const Point& p, int order) {
        const JetTensor ginv = inverse_jets(g.field().jets(p, order));
        const JetTensor a = covector.jets(p, order);
        JetTensor out = jet_zeros(n, {Slot::Up}, order);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) out(i).add_product(1.0, ginv(i, j), a(j));
        return out;
    });
}

TensorField flat(const MetricField& g, const TensorField& vector) {
    if (vector.variance() != Variance{Slot::Up}) throw InvalidArgument("flat expects a vector field");
    const std::size_t n = g.dim();
    return TensorField(n, {Slot::Down}, [g, vector, n](const Point& p, int order) {
        const JetTensor gj = g.field().jets(p, order);
        const JetTensor v = vector.jets(p, order);
        JetTensor out = jet_zeros(n, {Slot::Down}, order);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) out(i).add_product(1.0, gj(i, j), v(j));
        return out;
    });
}

TensorField apply_endomorphism(const TensorField& f, const TensorField& vector) {
    if (f.variance() != Variance{Slot::Up, Slot::Down} || vector.variance() != Variance{Slot::Up}) {
        throw InvalidArgument("apply_endomorphism expects a (1,1) field and a vector field");
    }
    const std::size_t n = f.dim();
    return TensorField(n, {Slot::Up}, [f, vector, n](const Point& p, int order) {
        const JetTensor fj = f.jets(p, order);
        const JetTensor v = vector.jets(p, order);
        JetTensor out = jet_zeros(n, {Slot::Up}, order);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) out(a).add_product(1.0, fj(a, b), v(b));
        return out;
    });
}

TensorField gradient(const MetricField& g, const ScalarField& f) { return sharp(g, TensorField::differential(f)); }

} // namespace solab
