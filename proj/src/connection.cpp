#include "solab/connection.hpp"

#include "solab/errors.hpp"

#include <algorithm>
#include <cmath>

namespace solab {

namespace {

const Variance kGammaVariance{Slot::Up, Slot::Down, Slot::Down};

void require_order(int order, int extra, const char* what) {
    if (order + extra > Jet3::kMaxOrder) {
        throw InvalidArgument(std::string(what) + ": jet order " + std::to_string(order) + " needs " +
                              std::to_string(extra) + " more derivative levels than available");
    }
}

} // namespace

ConnectionField::ConnectionField(std::size_t dim, bool symmetric, Evaluator eval, std::string label)
    : coeffs_(dim, kGammaVariance, std::move(eval)), symmetric_(symmetric), label_(std::move(label)) {}

ConnectionField levi_civita(const MetricField& g) {
    const std::size_t n = g.dim();
    ConnectionField c(
        n, true,
        [g, n](const Point& p, int order) {
            require_order(order, 1, "Levi-Civita coefficients");
            const JetTensor gj = g.field().jets(p, order + 1);
            const JetTensor ginv = inverse_jets(gj);
            // Christoffel symbols of the first kind: [ij, l] = 1/2 (d_i g_jl + d_j g_il - d_l g_ij).
            std::vector<Jet3> first(n * n * n, Jet3::constant(n, order, 0.0));
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i; j < n; ++j)
                    for (std::size_t l = 0; l < n; ++l) {
                        Jet3 v = gj(j, l).derivative(i) + gj(i, l).derivative(j) - gj(i, j).derivative(l);
                        v *= 0.5;
                        first[(i * n + j) * n + l] = v;
                        first[(j * n + i) * n + l] = v;
                    }
            JetTensor out = jet_zeros(n, kGammaVariance, order);
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = i; j < n; ++j) {
                        Jet3 acc = Jet3::constant(n, order, 0.0);
                        for (std::size_t l = 0; l < n; ++l) acc.add_product(1.0, ginv(k, l), first[(i * n + j) * n + l]);
                        out(k, i, j) = acc;
                        out(k, j, i) = acc;
                    }
            return out;
        },
        "levi_civita");
    c.lc_metric_ = g;
    return c;
}

ConnectionField explicit_connection(const TensorField& gamma, std::string label) {
    if (gamma.variance() != kGammaVariance) throw InvalidArgument("connection coefficients must be a (1,2) field");
    return ConnectionField(gamma.dim(), false, [gamma](const Point& p, int order) { return gamma.jets(p, order); },
                           std::move(label));
}

ConnectionField add_coefficients(const ConnectionField& base, const TensorField& delta, std::string label) {
    if (delta.variance() != kGammaVariance || delta.dim() != base.dim()) {
        throw InvalidArgument("connection correction must be a (1,2) field on the same chart");
    }
    return ConnectionField(
        base.dim(), false,
        [base, delta](const Point& p, int order) {
            JetTensor out = base.jets(p, order);
            const JetTensor d = delta.jets(p, order);
            for (std::size_t f = 0; f < out.size(); ++f) out[f] += d[f];
            return out;
        },
        std::move(label));
}

DeformTerm DeformTerm::alpha_tensor_F(double coeff, TensorField alpha, TensorField F) {
    DeformTerm t;
    t.kind = Kind::AlphaTensorF;
    t.coeff = coeff;
    t.alpha = std::move(alpha);
    t.F = std::move(F);
    return t;
}

DeformTerm DeformTerm::id_tensor_alpha(double coeff, TensorField alpha) {
    DeformTerm t;
    t.kind = Kind::IdTensorAlpha;
    t.coeff = coeff;
    t.alpha = std::move(alpha);
    return t;
}

DeformTerm DeformTerm::g_tensor_xi(double coeff, MetricField g, TensorField xi) {
    DeformTerm t;
    t.kind = Kind::GTensorXi;
    t.coeff = coeff;
    t.g = std::move(g);
    t.xi = std::move(xi);
    return t;
}

namespace {

void validate_term(const DeformTerm& t, std::size_t n) {
    auto check = [n](const TensorField& f, const Variance& v, const char* what) {
        if (f.empty()) throw InvalidArgument(std::string("deformation term is missing its ") + what);
        if (f.dim() != n) throw InvalidArgument(std::string("deformation ") + what + " lives on a different chart");
        if (f.variance() != v) throw InvalidArgument(std::string("deformation ") + what + " has the wrong valence");
    };
    switch (t.kind) {
    case DeformTerm::Kind::AlphaTensorF:
        check(t.alpha, {Slot::Down}, "covector");
        if (!t.F.empty()) check(t.F, {Slot::Up, Slot::Down}, "endomorphism");
        break;
    case DeformTerm::Kind::IdTensorAlpha: check(t.alpha, {Slot::Down}, "covector"); break;
    case DeformTerm::Kind::GTensorXi:
        check(t.xi, {Slot::Up}, "vector field");
        if (!t.g || t.g->dim() != n) throw InvalidArgument("g_tensor_xi term needs a metric on the same chart");
        break;
    }
}

bool terms_symmetric(const std::vector<DeformTerm>& terms) {
    std::vector<bool> used(terms.size(), false);
    for (std::size_t a = 0; a < terms.size(); ++a) {
        const DeformTerm& t = terms[a];
        if (t.kind == DeformTerm::Kind::GTensorXi || used[a]) continue;
        if (t.kind == DeformTerm::Kind::AlphaTensorF && !t.F.empty()) return false;
        const auto partner_kind = t.kind == DeformTerm::Kind::AlphaTensorF ? DeformTerm::Kind::IdTensorAlpha
                                                                           : DeformTerm::Kind::AlphaTensorF;
        bool matched = false;
        for (std::size_t b = a + 1; b < terms.size() && !matched; ++b) {
            const DeformTerm& u = terms[b];
            if (used[b] || u.kind != partner_kind || u.coeff != t.coeff || !u.alpha.same_as(t.alpha)) continue;
            if (u.kind == DeformTerm::Kind::AlphaTensorF && !u.F.empty()) continue;
            used[b] = true;
            matched = true;
        }
        if (!matched) return false;
        used[a] = true;
    }
    return true;
}

} // namespace

ConnectionField deform_connection(const ConnectionField& base, std::vector<DeformTerm> terms) {
    const std::size_t n = base.dim();
    for (const auto& t : terms) validate_term(t, n);
    if (terms.empty()) return base;
    const bool symmetric = base.symmetric() && terms_symmetric(terms);
    return ConnectionField(
        n, symmetric,
        [base, terms, n](const Point& p, int order) {
            JetTensor out = base.jets(p, order);
            for (const DeformTerm& t : terms) {
                switch (t.kind) {
                case DeformTerm::Kind::AlphaTensorF: {
                    const JetTensor a = t.alpha.jets(p, order);
                    if (t.F.empty()) {
                        for (std::size_t k = 0; k < n; ++k)
                            for (std::size_t i = 0; i < n; ++i) out(k, i, k) += t.coeff * a(i);
                    } else {
                        const JetTensor f = t.F.jets(p, order);
                        for (std::size_t k = 0; k < n; ++k)
                            for (std::size_t i = 0; i < n; ++i)
                                for (std::size_t j = 0; j < n; ++j) out(k, i, j).add_product(t.coeff, a(i), f(k, j));
                    }
                    break;
                }
                case DeformTerm::Kind::IdTensorAlpha: {
                    const JetTensor a = t.alpha.jets(p, order);
                    for (std::size_t k = 0; k < n; ++k)
                        for (std::size_t j = 0; j < n; ++j) out(k, k, j) += t.coeff * a(j);
                    break;
                }
                case DeformTerm::Kind::GTensorXi: {
                    const JetTensor gj = t.g->field().jets(p, order);
                    const JetTensor x = t.xi.jets(p, order);
                    for (std::size_t k = 0; k < n; ++k)
                        for (std::size_t i = 0; i < n; ++i)
                            for (std::size_t j = 0; j < n; ++j) out(k, i, j).add_product(t.coeff, gj(i, j), x(k));
                    break;
                }
                }
            }
            return out;
        },
        base.label() + "+deformation");
}

ConnectionField weyl_connection(const MetricField& g, const TensorField& eta) {
    const TensorField xi = sharp(g, eta);
    auto c = deform_connection(levi_civita(g), {DeformTerm::alpha_tensor_F(-0.5, eta), DeformTerm::id_tensor_alpha(-0.5, eta),
                                                DeformTerm::g_tensor_xi(0.5, g, xi)});
    return ConnectionField(c.dim(), c.symmetric(), [c](const Point& p, int order) { return c.jets(p, order); }, "weyl");
}

TensorAtPoint torsion_at(const ConnectionField& conn, const Point& p) {
    const TensorAtPoint gamma = conn.at(p);
    const std::size_t n = conn.dim();
    TensorAtPoint t(n, kGammaVariance);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) t(k, i, j) = gamma(k, i, j) - gamma(k, j, i);
    return t;
}

TensorField covariant_derivative(const ConnectionField& conn, const TensorField& t) {
    const std::size_t n = conn.dim();
    if (t.dim() != n) throw InvalidArgument("tensor field and connection live on different charts");
    Variance out_var{Slot::Down};
    out_var.insert(out_var.end(), t.variance().begin(), t.variance().end());
    return TensorField(n, out_var, [conn, t, n, out_var](const Point& p, int order) {
        require_order(order, 1, "covariant derivative");
        const JetTensor tj = t.jets(p, order + 1);
        const JetTensor gamma = conn.jets(p, order);
        const std::size_t r = tj.rank();
        const std::size_t block = tj.size();
        JetTensor out = jet_zeros(n, out_var, order);
        std::vector<std::size_t> idx(r);
        for (std::size_t f = 0; f < block; ++f) {
            std::size_t rem = f;
            for (std::size_t s = r; s-- > 0;) {
                idx[s] = rem % n;
                rem /= n;
            }
            for (std::size_t m = 0; m < n; ++m) {
                Jet3 acc = tj[f].derivative(m);
                for (std::size_t s = 0; s < r; ++s) {
                    const std::size_t stride = ipow(n, r - 1 - s);
                    const std::size_t base = f - idx[s] * stride;
                    for (std::size_t c = 0; c < n; ++c) {
                        const Jet3& tc = tj[base + c * stride];
                        if (tj.variance()[s] == Slot::Up) {
                            acc.add_product(1.0, gamma(idx[s], m, c), tc);
                        } else {
                            acc.add_product(-1.0, gamma(c, m, idx[s]), tc);
                        }
                    }
                }
                out[m * block + f] = std::move(acc);
            }
        }
        return out;
    });
}

TensorAtPoint cov_deriv_at(const ConnectionField& conn, const TensorField& t, const Point& p) {
    return covariant_derivative(conn, t).at(p);
}

TensorField vector_derivative_endomorphism(const ConnectionField& conn, const TensorField& xi) {
    if (xi.variance() != Variance{Slot::Up}) throw InvalidArgument("expected a vector field");
    const TensorField d = covariant_derivative(conn, xi);
    const std::size_t n = conn.dim();
    return TensorField(n, {Slot::Up, Slot::Down}, [d, n](const Point& p, int order) {
        const JetTensor dj = d.jets(p, order);  // (m, a)
        JetTensor out = jet_zeros(n, {Slot::Up, Slot::Down}, order);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t m = 0; m < n; ++m) out(a, m) = dj(m, a);
        return out;
    });
}

Recurrence recurrence_factor(const ConnectionField& conn, const MetricField& g, const Point& p) {
    const std::size_t n = conn.dim();
    const TensorAtPoint c = cov_deriv_at(conn, g.field(), p);  // (k, i, j)
    const TensorAtPoint gm = g.field().at(p);
    double gg = 0.0;
    for (double v : gm.components()) gg += v * v;
    Recurrence out;
    out.eta.assign(n, 0.0);
    double resid2 = 0.0, c2 = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        double cg = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) cg += c(k, i, j) * gm(i, j);
        out.eta[k] = cg / gg;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const double r = c(k, i, j) - out.eta[k] * gm(i, j);
                resid2 += r * r;
                c2 += c(k, i, j) * c(k, i, j);
            }
    }
    out.residual = std::sqrt(resid2) / std::max(std::sqrt(c2), std::sqrt(gg));
    out.recurrent = out.residual <= 1e-8;
    return out;
}

ConnectionField dual_connection(const MetricField& g, const ConnectionField& conn) {
    if (conn.is_levi_civita_of(g)) return conn;
    const std::size_t n = g.dim();
    if (conn.dim() != n) throw InvalidArgument("connection and metric live on different charts");
    return ConnectionField(
        n, false,
        [g, conn, n](const Point& p, int order) {
            require_order(order, 1, "dual connection");
            const JetTensor gj = g.field().jets(p, order + 1);
            const JetTensor ginv = inverse_jets(gj);
            const JetTensor gamma = conn.jets(p, order);
            // b(k, i, j) = d_k g_ij - Gamma^l_ki g_lj
            std::vector<Jet3> b(n * n * n, Jet3::constant(n, order, 0.0));
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < n; ++j) {
                        Jet3 acc = gj(i, j).derivative(k);
                        for (std::size_t l = 0; l < n; ++l) acc.add_product(-1.0, gamma(l, k, i), gj(l, j));
                        b[(k * n + i) * n + j] = std::move(acc);
                    }
            JetTensor out = jet_zeros(n, kGammaVariance, order);
            for (std::size_t m = 0; m < n; ++m)
                for (std::size_t k = 0; k < n; ++k)
                    for (std::size_t j = 0; j < n; ++j)
                        for (std::size_t i = 0; i < n; ++i) out(m, k, j).add_product(1.0, ginv(m, i), b[(k * n + i) * n + j]);
            return out;
        },
        "dual(" + conn.label() + ")");
}

ConnectionField mean_connection(const ConnectionField& a, const ConnectionField& b) {
    if (a.same_as(b)) return a;
    if (a.dim() != b.dim()) throw InvalidArgument("connections live on different charts");
    return ConnectionField(
        a.dim(), a.symmetric() && b.symmetric(),
        [a, b](const Point& p, int order) {
            JetTensor out = a.jets(p, order);
            const JetTensor bj = b.jets(p, order);
            for (std::size_t f = 0; f < out.size(); ++f) {
                out[f] += bj[f];
                out[f] *= 0.5;
            }
            return out;
        },
        "mean(" + a.label() + "," + b.label() + ")");
}

double duality_residual(const MetricField& g, const ConnectionField& conn, const ConnectionField& dual,
                        const Point& p) {
    const std::size_t n = g.dim();
    const JetTensor gj = g.field().jets(p, 1);
    const TensorAtPoint a = conn.at(p);
    const TensorAtPoint b = dual.at(p);
    double worst = 0.0;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                double r = gj(i, j).d(k);
                for (std::size_t l = 0; l < n; ++l) r -= a(l, k, i) * gj(l, j).value() + gj(i, l).value() * b(l, k, j);
                worst = std::max(worst, std::fabs(r));
            }
    return worst;
}

} // namespace solab
