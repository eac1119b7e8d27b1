#include "solab/curvature.hpp"

#include "solab/errors.hpp"

namespace solab {

namespace {

const Variance kRiemannVariance{Slot::Up, Slot::Down, Slot::Down, Slot::Down};

} // namespace

TensorField riemann_field(const ConnectionField& conn) {
    const std::size_t n = conn.dim();
    return TensorField(n, kRiemannVariance, [conn, n](const Point& p, int order) {
        if (order + 1 > Jet3::kMaxOrder) throw InvalidArgument("Riemann jets need one more connection jet order");
        const JetTensor gamma = conn.jets(p, order + 1);
        // dg(m, k, i, j) = d_m Gamma^k_ij
        std::vector<Jet3> dgamma;
        dgamma.reserve(n * gamma.size());
        for (std::size_t m = 0; m < n; ++m)
            for (std::size_t f = 0; f < gamma.size(); ++f) dgamma.push_back(gamma[f].derivative(m));
        auto dg = [&](std::size_t m, std::size_t k, std::size_t i, std::size_t j) -> const Jet3& {
            return dgamma[((m * n + k) * n + i) * n + j];
        };
        JetTensor out = jet_zeros(n, kRiemannVariance, order);
        for (std::size_t l = 0; l < n; ++l)
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = i + 1; j < n; ++j) {
                        Jet3 r = dg(i, l, j, k) - dg(j, l, i, k);
                        for (std::size_t m = 0; m < n; ++m) {
                            r.add_product(1.0, gamma(l, i, m), gamma(m, j, k));
                            r.add_product(-1.0, gamma(l, j, m), gamma(m, i, k));
                        }
                        out(l, k, j, i) = -r;
                        out(l, k, i, j) = std::move(r);
                    }
        return out;
    });
}

TensorField ricci_field(const ConnectionField& conn) {
    const std::size_t n = conn.dim();
    const TensorField riem = riemann_field(conn);
    return TensorField(n, {Slot::Down, Slot::Down}, [riem, n](const Point& p, int order) {
        const JetTensor r = riem.jets(p, order);
        JetTensor out = jet_zeros(n, {Slot::Down, Slot::Down}, order);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t l = 0; l < n; ++l) out(i, j) += r(l, i, l, j);
        return out;
    });
}

TensorField ricci_endomorphism_field(const ConnectionField& conn, const MetricField& g) {
    const std::size_t n = conn.dim();
    const TensorField ric = ricci_field(conn);
    return TensorField(n, {Slot::Up, Slot::Down}, [ric, g, n](const Point& p, int order) {
        const JetTensor r = ric.jets(p, order);
        const JetTensor ginv = inverse_jets(g.field().jets(p, order));
        JetTensor out = jet_zeros(n, {Slot::Up, Slot::Down}, order);
        // Ric(X, Y) = g(QX, Y)  =>  Q^a_i = ric_ij g^ja
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) out(a, i).add_product(1.0, r(i, j), ginv(j, a));
        return out;
    });
}

CurvatureAtPoint riemann_at(const ConnectionField& conn, const Point& p) {
    CurvatureAtPoint c;
    c.riemann = riemann_field(conn).at(p);
    return c;
}

CurvatureAtPoint ricci_at(const ConnectionField& conn, const MetricField& g, const Point& p) {
    const std::size_t n = conn.dim();
    CurvatureAtPoint c = riemann_at(conn, p);
    const MetricAtPoint m = metric_at(g, p, 0).metric;
    c.ricci = TensorAtPoint(n, {Slot::Down, Slot::Down});
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t l = 0; l < n; ++l) c.ricci(i, j) += c.riemann(l, i, l, j);
    c.Q = TensorAtPoint(n, {Slot::Up, Slot::Down});
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) c.Q(a, i) += c.ricci(i, j) * m.g_inv(j, a);
    c.scalar = 0.0;
    for (std::size_t a = 0; a < n; ++a) c.scalar += c.Q(a, a);
    if (n == 2) c.gauss = c.scalar / 2.0;
    return c;
}

TensorAtPoint riemann_apply(const TensorAtPoint& riemann, const TensorAtPoint& xi) {
    const std::size_t n = riemann.dim();
    TensorAtPoint out(n, {Slot::Up, Slot::Down, Slot::Down});
    for (std::size_t l = 0; l < n; ++l)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < n; ++k) out(l, i, j) += riemann(l, k, i, j) * xi(k);
    return out;
}

TensorAtPoint div_riemann_at(const ConnectionField& conn, const MetricField& g, const Point& p,
                             const std::optional<Matrix>& frame) {
    const std::size_t n = conn.dim();
    Matrix e;
    if (frame) {
        e = *frame;
    } else {
        const MetricAtPoint m = metric_at(g, p, 0).metric;
        e = lower_triangular_inverse(m.chol).transpose();
    }
    if (e.rows() != n || e.cols() != n) throw InvalidArgument("frame must be n x n");
    // sum_k e_k^m e_k^c
    Matrix w(n, n);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t m = 0; m < n; ++m)
            for (std::size_t c = 0; c < n; ++c) w(m, c) += e(m, k) * e(c, k);
    const TensorAtPoint dr = cov_deriv_at(conn, riemann_field(conn), p);  // (m, l, c, i, j)
    TensorAtPoint out(n, {Slot::Up, Slot::Down, Slot::Down});
    for (std::size_t l = 0; l < n; ++l)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                double acc = 0.0;
                for (std::size_t m = 0; m < n; ++m)
                    for (std::size_t c = 0; c < n; ++c) acc += w(m, c) * dr(m, l, c, i, j);
                out(l, i, j) = acc;
            }
    return out;
}

TensorAtPoint ext_cov_deriv_at(const ConnectionField& conn, const TensorField& f, const Point& p) {
    const std::size_t n = conn.dim();
    if (f.variance() == Variance{Slot::Up}) return vector_derivative_endomorphism(conn, f).at(p);
    if (f.variance() != Variance{Slot::Up, Slot::Down}) {
        throw InvalidArgument("exterior covariant derivative supports vector and endomorphism fields, got " +
                              variance_string(f.variance()));
    }
    const TensorAtPoint df = cov_deriv_at(conn, f, p);  // (m, a, b) = (nabla_m F)^a_b
    const TensorAtPoint fv = f.at(p);
    const TensorAtPoint t = torsion_at(conn, p);
    TensorAtPoint out(n, {Slot::Up, Slot::Down, Slot::Down});
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                double v = df(i, a, j) - df(j, a, i);
                for (std::size_t b = 0; b < n; ++b) v += fv(a, b) * t(b, i, j);
                out(a, i, j) = v;
            }
    return out;
}

} // namespace solab
