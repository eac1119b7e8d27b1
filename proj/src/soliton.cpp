#include "solab/soliton.hpp"

#include "solab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace solab {

namespace {

std::string point_string(const Point& p) {
    std::ostringstream os;
    os.precision(6);
    os << '(';
    for (std::size_t i = 0; i < p.dim(); ++i) os << (i ? ", " : "") << p[i];
    os << ')';
    return os.str();
}

double max_abs_diff(const TensorAtPoint& a, const TensorAtPoint& b) {
    double m = 0.0;
    for (std::size_t f = 0; f < a.size(); ++f) m = std::max(m, std::fabs(a[f] - b[f]));
    return m;
}

TensorAtPoint metric_tensor(const MetricAtPoint& m) { return m.as_tensor(); }

/// eta (x) xi with eta = xi flat, components xi^a eta_i.
TensorAtPoint eta_xi(const TensorAtPoint& xi, const MetricAtPoint& m) {
    const TensorAtPoint eta = raise_lower(xi, m, 0, Slot::Down);
    return outer_endomorphism(eta, xi);
}

} // namespace

ConnectionField SolitonData::active_connection() const { return connection ? *connection : levi_civita(g); }

TensorField SolitonData::vector_field() const {
    if (xi) return *xi;
    if (f) return gradient(g, *f);
    throw InvalidArgument("soliton data needs a potential or a vector field");
}

TensorAtPoint hessian_at(const MetricField& g, const ScalarField& f, const Point& p) {
    return cov_deriv_at(levi_civita(g), TensorField::differential(f), p);
}

Residual gradient_residual(const SolitonData& d, const Point& p) {
    if (!d.f) throw InvalidArgument("gradient residual needs a potential");
    if (d.connection && !d.connection->is_levi_civita_of(d.g)) {
        throw InvalidArgument("gradient residual is defined for the Levi-Civita connection");
    }
    const MetricAtPoint m = metric_at(d.g, p, 0).metric;
    const CurvatureAtPoint c = ricci_at(levi_civita(d.g), d.g, p);
    Residual r;
    r.tensor = hessian_at(d.g, *d.f, p) + c.ricci + d.lambda * metric_tensor(m);
    r.norm2 = norm2(r.tensor, m);
    return r;
}

Quadratic solve_reduced_quadratic(double a, double b, double c) {
    if (a == 0.0) throw InvalidArgument("leading coefficient must be nonzero");
    Quadratic q{a, b, c, b * b - a * c, {}, false};
    const double scale = std::max({1.0, b * b, std::fabs(a * c)});
    if (std::fabs(q.disc) <= 1e-9 * scale) {
        q.double_root = true;
        q.roots = {-b / a};
    } else if (q.disc > 0.0) {
        const double s = std::sqrt(q.disc);
        // Avoid cancellation: one root from the sum, the other from the product c/a.
        const double big = (b >= 0.0) ? (-b - s) / a : (-b + s) / a;
        const double small = (big != 0.0) ? (c / a) / big : (b >= 0.0 ? (-b + s) / a : (-b - s) / a);
        q.roots = {std::min(big, small), std::max(big, small)};
    }
    return q;
}

const char* to_string(Classification c) {
    switch (c) {
    case Classification::Shrinking: return "shrinking";
    case Classification::Steady: return "steady";
    case Classification::Expanding: return "expanding";
    }
    return "steady";
}

Classification classify(double lambda) {
    if (std::fabs(lambda) <= 1e-12) return Classification::Steady;
    return lambda < 0.0 ? Classification::Shrinking : Classification::Expanding;
}

SolitonReport soliton_report(const SolitonData& d, const Point& p) {
    if (!d.f) throw InvalidArgument("soliton report needs a potential");
    if (d.connection && !d.connection->is_levi_civita_of(d.g)) {
        throw InvalidArgument("soliton report is defined for the Levi-Civita connection");
    }
    const MetricAtPoint m = metric_at(d.g, p, 0).metric;
    const double n = static_cast<double>(m.dim());
    const double lambda = d.lambda;
    const TensorAtPoint h = hessian_at(d.g, *d.f, p);
    const CurvatureAtPoint c = ricci_at(levi_civita(d.g), d.g, p);
    const TensorAtPoint gt = metric_tensor(m);

    SolitonReport r;
    r.spectrum = generalized_eigen(h, m);
    r.laplacian = trace(h, m);
    r.normH2 = norm2(h, m);
    r.normRic2 = norm2(c.ricci, m);
    r.scalarR = c.scalar;
    r.gauss = c.gauss;
    r.residual6_norm2 = norm2(h + c.ricci + lambda * gt, m);
    r.identity10_residual = r.normRic2 - (r.normH2 + 2.0 * lambda * r.laplacian + n * lambda * lambda);

    LambdaAnalysis& la = r.lambda_analysis;
    la.q11 = solve_reduced_quadratic(n, r.laplacian, r.normH2 - r.normRic2);
    la.q17 = solve_reduced_quadratic(n, r.scalarR, r.normRic2 - r.normH2);
    la.companion11 = -2.0 * r.laplacian / n - lambda;
    la.companion17 = -2.0 * r.scalarR / n - lambda;
    la.trace16_residual = r.laplacian + r.scalarR + n * lambda;
    la.companion11_tensor_residual = norm2(h + c.ricci + la.companion11 * gt, m);

    r.double20[0] = r.normH2 - r.laplacian * r.laplacian / n;
    r.double20[1] = r.normRic2;
    r.double20[2] = r.normH2 + r.scalarR * r.scalarR / n;
    r.margin13 = r.double20[1] - r.double20[0];
    r.margin19 = r.double20[2] - r.double20[1];

    const double scale = std::max({1.0, std::sqrt(r.normH2), std::sqrt(r.normRic2)});
    r.hessian_equals_ricci = std::sqrt(norm2(h - c.ricci, m)) <= 1e-9 * scale;
    r.hessian_equals_minus_ricci = std::sqrt(norm2(h + c.ricci, m)) <= 1e-9 * scale;
    r.harmonic = std::fabs(r.laplacian) <= 1e-9 * scale;
    r.scalar_flat = std::fabs(r.scalarR) <= 1e-9 * scale;
    r.classification = classify(lambda);
    return r;
}

std::vector<double> constant_roots(const std::vector<LambdaAnalysis>& per_point) {
    std::vector<double> out;
    if (per_point.empty()) return out;
    for (double root : per_point.front().q11.roots) {
        double lo = root, hi = root;
        bool everywhere = true;
        for (std::size_t k = 1; k < per_point.size() && everywhere; ++k) {
            const auto& roots = per_point[k].q11.roots;
            if (roots.empty()) {
                everywhere = false;
                break;
            }
            const double nearest = *std::min_element(roots.begin(), roots.end(), [root](double a, double b) {
                return std::fabs(a - root) < std::fabs(b - root);
            });
            lo = std::min(lo, nearest);
            hi = std::max(hi, nearest);
            everywhere = hi - lo <= 1e-8;
        }
        if (everywhere) out.push_back(root);
    }
    return out;
}

Residual generalized_residual(const SolitonData& d, const Point& p) {
    const ConnectionField conn = d.active_connection();
    const TensorField xi = d.vector_field();
    const MetricAtPoint m = metric_at(d.g, p, 0).metric;
    const std::size_t n = m.dim();
    const TensorAtPoint grad_xi = vector_derivative_endomorphism(conn, xi).at(p);
    const TensorAtPoint f = d.F ? d.F->at(p) : ricci_at(conn, d.g, p).Q;
    Residual r;
    r.tensor = grad_xi + f + d.lambda * TensorAtPoint::identity(n);
    const double mu = d.mu.value_or(0.0);
    if (mu != 0.0) r.tensor += mu * eta_xi(xi.at(p), m);
    r.norm2 = norm2(r.tensor, m);
    return r;
}

TorseForming torse_forming_check(const MetricField& g, const TensorField& xi, const std::vector<Point>& points) {
    const std::size_t n = g.dim();
    const ConnectionField lc = levi_civita(g);
    const TensorField grad_xi = vector_derivative_endomorphism(lc, xi);
    TorseForming out;
    for (const Point& p : points) {
        const MetricAtPoint m = metric_at(g, p, 0).metric;
        const TensorAtPoint x = xi.at(p);
        if (std::sqrt(norm2(x, m)) < 1e-8) throw ZeroVector("vector field vanishes at " + point_string(p));
        const TensorAtPoint mm = grad_xi.at(p);
        // Unknowns (f, gamma_0..gamma_{n-1}); row (a, i): f delta_ai + xi^a gamma_i = M^a_i.
        Matrix a(n * n, n + 1);
        std::vector<double> b(n * n);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t i = 0; i < n; ++i) {
                const std::size_t row = r * n + i;
                a(row, 0) = (r == i) ? 1.0 : 0.0;
                a(row, 1 + i) = x(r);
                b[row] = mm(r, i);
            }
        const std::vector<double> sol = least_squares(a, b);
        TensorAtPoint gamma(n, {Slot::Down});
        for (std::size_t i = 0; i < n; ++i) gamma(i) = sol[1 + i];
        const TensorAtPoint fit = sol[0] * TensorAtPoint::identity(n) + outer_endomorphism(gamma, x);
        const double resid = std::sqrt(std::max(0.0, norm2(mm - fit, m)));
        const double scale = std::sqrt(std::max(0.0, norm2(mm, m)));
        const double rel = resid / std::max(scale, 1e-300);
        if (resid > 1e-8 * scale + 1e-12) {
            throw NotTorseForming("vector field is not torse-forming at " + point_string(p), rel);
        }
        out.max_relative_residual = std::max(out.max_relative_residual, scale > 0.0 ? rel : 0.0);
        out.f.push_back(sol[0]);
        out.gamma.push_back(std::move(gamma));
    }
    return out;
}

Residual eta_einstein_residual(const MetricField& g, const TensorField& xi, double lambda, double f, const Point& p) {
    const MetricAtPoint m = metric_at(g, p, 0).metric;
    const std::size_t n = m.dim();
    const CurvatureAtPoint c = ricci_at(levi_civita(g), g, p);
    Residual r;
    r.tensor = c.Q + (lambda + f) * TensorAtPoint::identity(n) + eta_xi(xi.at(p), m);
    r.norm2 = norm2(r.tensor, m);
    return r;
}

ConnectionField vaisman_connection(const MetricField& g, const TensorField& J, const TensorField& u) {
    const TensorField U = sharp(g, u);
    const TensorField V = apply_endomorphism(J, U);
    const TensorField v = flat(g, V);
    return deform_connection(levi_civita(g), {DeformTerm::alpha_tensor_F(-1.0, u), DeformTerm::alpha_tensor_F(-1.0, v, J)});
}

VaismanReport vaisman_verify(const MetricField& g, const TensorField& J, const TensorField& u,
                             const std::vector<Point>& points) {
    const std::size_t n = g.dim();
    if (J.dim() != n || J.variance() != Variance{Slot::Up, Slot::Down}) throw InvalidArgument("J must be a (1,1) field");
    if (u.dim() != n || u.variance() != Variance{Slot::Down}) throw InvalidArgument("u must be a covector field");
    const ConnectionField lc = levi_civita(g);
    const TensorField U = sharp(g, u);
    const TensorField V = apply_endomorphism(J, U);
    const TensorField v = flat(g, V);
    const TensorField grad_V = vector_derivative_endomorphism(lc, V);
    const TensorAtPoint id = TensorAtPoint::identity(n);

    VaismanReport rep;
    struct Worst {
        double value = 0.0;
        std::size_t point = 0;
    } w_j2, w_herm, w_unit, w_cov;
    auto track = [](Worst& w, double value, std::size_t k) {
        if (value > w.value) w = {value, k};
    };
    for (std::size_t k = 0; k < points.size(); ++k) {
        const Point& p = points[k];
        const MetricAtPoint m = metric_at(g, p, 0).metric;
        const TensorAtPoint j = J.at(p);
        double e_j2 = 0.0, e_herm = 0.0, jscale = 1.0;
        for (double x : j.components()) jscale = std::max(jscale, std::fabs(x));
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) {
                double jj = 0.0, h = 0.0;
                for (std::size_t c = 0; c < n; ++c) jj += j(a, c) * j(c, b);
                e_j2 = std::max(e_j2, std::fabs(jj + id(a, b)) / (jscale * jscale));
                for (std::size_t c = 0; c < n; ++c)
                    for (std::size_t e = 0; e < n; ++e) h += j(c, a) * m.g(c, e) * j(e, b);
                e_herm = std::max(e_herm, std::fabs(h - m.g(a, b)) / std::max(1.0, m.g.max_abs()));
            }
        const TensorAtPoint uu = u.at(p);
        const double e_unit = std::fabs(norm2(uu, m) - 1.0);
        // nabla_X V = u(X) V - v(X) U - J X, components (a, i).
        const TensorAtPoint Uv = U.at(p), Vv = V.at(p), vv = v.at(p);
        const TensorAtPoint rhs = outer_endomorphism(uu, Vv) - outer_endomorphism(vv, Uv) - j;
        const TensorAtPoint lhs = grad_V.at(p);
        const double e_cov = max_abs_diff(lhs, rhs) / std::max(1.0, rhs.max_abs());
        track(w_j2, e_j2, k);
        track(w_herm, e_herm, k);
        track(w_unit, e_unit, k);
        track(w_cov, e_cov, k);
    }
    rep.premise_J2 = w_j2.value;
    rep.premise_hermitian = w_herm.value;
    rep.premise_unit_u = w_unit.value;
    rep.premise_covariant_V = w_cov.value;
    auto fail = [&](const Worst& w, const char* premise) {
        if (w.value > 1e-9) {
            std::ostringstream os;
            os << "residual " << w.value << " at " << point_string(points[w.point]);
            throw PremiseViolated(premise, os.str());
        }
    };
    fail(w_j2, "J^2 = -I");
    fail(w_herm, "g(JX, JY) = g(X, Y)");
    fail(w_unit, "|u| = 1");
    fail(w_cov, "nabla_X V = u(X) V - v(X) U - JX");

    const ConnectionField tilde = vaisman_connection(g, J, u);
    SolitonData sd;
    sd.g = g;
    sd.xi = V;
    sd.F = J;
    sd.lambda = 0.0;
    sd.connection = tilde;
    rep.passed = true;
    for (const Point& p : points) {
        VaismanPoint vp;
        vp.p = p;
        vp.soliton_norm2 = generalized_residual(sd, p).norm2;
        const Recurrence rec = recurrence_factor(tilde, g, p);
        const TensorAtPoint uu = u.at(p), vv = v.at(p), j = J.at(p), Uv = U.at(p), Vv = V.at(p);
        for (std::size_t k = 0; k < n; ++k) vp.recurrence_error = std::max(vp.recurrence_error, std::fabs(rec.eta[k] - 2.0 * uu(k)));
        vp.recurrence_fit = rec.residual;
        const TensorAtPoint t = torsion_at(tilde, p);
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = 0; b < n; ++b) {
                    // T(X, Y) = u(Y) X + v(Y) JX - u(X) Y - v(X) JY
                    const double formula = uu(b) * id(k, a) + vv(b) * j(k, a) - uu(a) * id(k, b) - vv(a) * j(k, b);
                    vp.torsion_error = std::max(vp.torsion_error, std::fabs(t(k, a, b) - formula));
                }
        for (std::size_t k = 0; k < n; ++k) {
            double s = 0.0;
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = 0; b < n; ++b) s += t(k, a, b) * Uv(a) * Vv(b);
            vp.torsion_UV = std::max(vp.torsion_UV, std::fabs(s));
        }
        rep.passed = rep.passed && vp.soliton_norm2 <= 1e-9 && vp.recurrence_error <= 1e-9 &&
                     vp.recurrence_fit <= 1e-9 && vp.torsion_error <= 1e-9;
        rep.points.push_back(std::move(vp));
    }
    return rep;
}

WeylShift weyl_shift_probe(const MetricField& g, const TensorField& eta, const std::optional<TensorField>& F,
                           double lambda, double mu, const std::vector<Point>& points) {
    const std::size_t n = g.dim();
    if (points.empty()) throw InvalidArgument("weyl shift probe needs at least one point");
    double lo = 0.0, hi = 0.0;
    for (std::size_t k = 0; k < points.size(); ++k) {
        const double v = norm2(eta.at(points[k]), metric_at(g, points[k], 0).metric);
        if (k == 0 || v < lo) lo = v;
        if (k == 0 || v > hi) hi = v;
    }
    if (hi - lo > 1e-8) throw NonConstantNorm("|eta|^2 varies by " + std::to_string(hi - lo) + " over the sample");

    const ConnectionField lc = levi_civita(g);
    const ConnectionField weyl = weyl_connection(g, eta);
    const TensorField xi = sharp(g, eta);
    const TensorField d_lc = vector_derivative_endomorphism(lc, xi);
    const TensorField d_w = vector_derivative_endomorphism(weyl, xi);
    const TensorField f_field = F ? *F : ricci_endomorphism_field(lc, g);

    std::vector<TensorAtPoint> ds, exs;
    Matrix a(points.size() * n * n, 2);
    std::vector<double> b(points.size() * n * n);
    for (std::size_t k = 0; k < points.size(); ++k) {
        const Point& p = points[k];
        const MetricAtPoint m = metric_at(g, p, 0).metric;
        TensorAtPoint d = d_w.at(p) - d_lc.at(p);
        TensorAtPoint ex = eta_xi(xi.at(p), m);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t i = 0; i < n; ++i) {
                const std::size_t row = (k * n + r) * n + i;
                a(row, 0) = (r == i) ? 1.0 : 0.0;
                a(row, 1) = ex(r, i);
                b[row] = d(r, i);
            }
        ds.push_back(std::move(d));
        exs.push_back(std::move(ex));
    }
    const std::vector<double> sol = least_squares(a, b);
    WeylShift out;
    out.delta_lambda = sol[0];
    out.delta_mu = sol[1];
    out.xi_norm2 = 0.5 * (lo + hi);
    const TensorAtPoint id = TensorAtPoint::identity(n);
    for (std::size_t k = 0; k < points.size(); ++k) {
        out.fit_residual = std::max(out.fit_residual, max_abs_diff(ds[k], sol[0] * id + sol[1] * exs[k]));
    }

    SolitonData tilde_data;
    tilde_data.g = g;
    tilde_data.xi = xi;
    tilde_data.F = f_field;
    tilde_data.lambda = lambda;
    tilde_data.mu = mu;
    tilde_data.connection = weyl;
    SolitonData lc_data = tilde_data;
    lc_data.connection = lc;
    lc_data.lambda = lambda + out.delta_lambda;
    lc_data.mu = mu + out.delta_mu;
    for (const Point& p : points) {
        out.identity_residual = std::max(
            out.identity_residual, max_abs_diff(generalized_residual(tilde_data, p).tensor, generalized_residual(lc_data, p).tensor));
    }
    out.mu_matches_stated = std::fabs(out.delta_mu - out.stated_delta_mu) <= 1e-8;
    return out;
}

StatisticalReport statistical_check(const MetricField& g, const ConnectionField& conn, const TensorField& xi,
                                    double lambda, const std::vector<Point>& points) {
    for (const Point& p : points) {
        const TensorAtPoint t = torsion_at(conn, p);
        const double scale = std::max(1.0, conn.at(p).max_abs());
        if (t.max_abs() > 1e-10 * scale) throw NotTorsionFree("connection has torsion at " + point_string(p));
    }
    const ConnectionField lc = levi_civita(g);
    const ConnectionField dual = dual_connection(g, conn);
    const ConnectionField mean = mean_connection(conn, dual);

    StatisticalReport rep;
    rep.self_dual = dual.same_as(conn);
    rep.ricci_symmetric = true;
    auto residual_under = [&](const ConnectionField& c, const Point& p) {
        SolitonData d;
        d.g = g;
        d.xi = xi;
        d.lambda = lambda;
        d.connection = c;
        return generalized_residual(d, p).norm2;
    };
    bool soliton = true;
    for (const Point& p : points) {
        StatisticalPoint sp;
        sp.p = p;
        sp.duality_residual = duality_residual(g, conn, dual, p);
        sp.mean_identity_residual = max_abs_diff(mean.at(p), lc.at(p));
        const TensorAtPoint ric = ricci_at(conn, g, p).ricci;
        const std::size_t n = ric.dim();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) sp.ricci_asymmetry = std::max(sp.ricci_asymmetry, std::fabs(ric(i, j) - ric(j, i)));
        sp.residual_conn = residual_under(conn, p);
        sp.residual_dual = residual_under(dual, p);
        sp.residual_mean = residual_under(mean, p);
        rep.ricci_symmetric = rep.ricci_symmetric && sp.ricci_asymmetry <= 1e-9;
        soliton = soliton && sp.residual_conn <= 1e-9 && sp.residual_dual <= 1e-9;
        rep.points.push_back(std::move(sp));
    }
    rep.statistical_soliton = rep.ricci_symmetric && soliton;
    return rep;
}

WeakResidual weak_soliton_residual(const MetricField& g, const TensorField& xi, const Point& p) {
    const ConnectionField lc = levi_civita(g);
    const MetricAtPoint m = metric_at(g, p, 0).metric;
    const TensorAtPoint riem = riemann_at(lc, p).riemann;
    WeakResidual out;
    out.tensor = riemann_apply(riem, xi.at(p)) - div_riemann_at(lc, g, p);
    const TensorAtPoint literal = ext_cov_deriv_at(lc, vector_derivative_endomorphism(lc, xi), p) +
                                  ext_cov_deriv_at(lc, ricci_endomorphism_field(lc, g), p);
    out.route_difference = max_abs_diff(out.tensor, literal);
    out.norm2 = norm2(out.tensor, m);
    return out;
}

} // namespace solab
