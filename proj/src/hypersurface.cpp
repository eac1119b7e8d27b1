#include "solab/hypersurface.hpp"

#include "solab/errors.hpp"

#include <algorithm>
#include <cmath>

namespace solab {

namespace {

double determinant(std::vector<double> a, std::size_t n) {
    double det = 1.0;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::fabs(a[r * n + c]) > std::fabs(a[piv * n + c])) piv = r;
        if (a[piv * n + c] == 0.0) return 0.0;
        if (piv != c) {
            for (std::size_t k = 0; k < n; ++k) std::swap(a[c * n + k], a[piv * n + k]);
            det = -det;
        }
        det *= a[c * n + c];
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = a[r * n + c] / a[c * n + c];
            for (std::size_t k = c; k < n; ++k) a[r * n + k] -= f * a[c * n + k];
        }
    }
    return det;
}

std::vector<Jet3> component_jets(const Immersion& imm, const Point& p, int order) {
    std::vector<Jet3> out;
    out.reserve(imm.components.size());
    for (const Expr& e : imm.components) out.push_back(eval_jet(e, p, order));
    return out;
}

void check_rank(const Matrix& g) {
    const SymmetricEigen e = jacobi_eigen(g);
    if (e.values.front() < 1e-20) throw RankDeficient("immersion Jacobian is rank deficient");
}

} // namespace

Immersion::Immersion(ChartPtr c, std::vector<Expr> comps, int orient)
    : chart(std::move(c)), components(std::move(comps)), orientation(orient) {
    if (!chart) throw InvalidArgument("immersion needs a chart");
    if (components.size() != chart->dim() + 1) {
        throw InvalidArgument("immersion of an " + std::to_string(chart->dim()) + "-dimensional chart needs " +
                              std::to_string(chart->dim() + 1) + " components");
    }
    if (orientation != 1 && orientation != -1) throw InvalidArgument("orientation must be +1 or -1");
}

Immersion Immersion::from_strings(const ChartPtr& chart, const std::vector<std::string>& comps, int orientation) {
    std::vector<Expr> exprs;
    for (const auto& s : comps) exprs.push_back(parse_expr(s, chart->coords));
    return Immersion(chart, std::move(exprs), orientation);
}

MetricField induced_metric(const Immersion& imm) {
    const std::size_t n = imm.dim();
    return MetricField(TensorField(n, {Slot::Down, Slot::Down}, [imm, n](const Point& p, int order) {
        if (order + 1 > Jet3::kMaxOrder) throw InvalidArgument("induced metric jets need one more immersion jet order");
        const std::vector<Jet3> x = component_jets(imm, p, order + 1);
        std::vector<Jet3> dx;  // dx[i * (n+1) + a] = d_i X^a
        for (std::size_t i = 0; i < n; ++i)
            for (const Jet3& xa : x) dx.push_back(xa.derivative(i));
        JetTensor out = jet_zeros(n, {Slot::Down, Slot::Down}, order);
        Matrix g0(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) {
                Jet3 acc = Jet3::constant(n, order, 0.0);
                for (std::size_t a = 0; a <= n; ++a) acc.add_product(1.0, dx[i * (n + 1) + a], dx[j * (n + 1) + a]);
                g0(i, j) = g0(j, i) = acc.value();
                out(j, i) = acc;
                out(i, j) = std::move(acc);
            }
        check_rank(g0);
        return out;
    }));
}

std::vector<double> unit_normal(const Immersion& imm, const Point& p) {
    const std::size_t n = imm.dim();
    const std::size_t N = n + 1;
    const std::vector<Jet3> x = component_jets(imm, p, 1);
    std::vector<double> nu(N);
    for (std::size_t a = 0; a < N; ++a) {
        // Columns: d_1X, ..., d_nX, e_a.
        std::vector<double> m(N * N, 0.0);
        for (std::size_t r = 0; r < N; ++r) {
            for (std::size_t i = 0; i < n; ++i) m[r * N + i] = x[r].d(i);
            m[r * N + n] = (r == a) ? 1.0 : 0.0;
        }
        nu[a] = determinant(std::move(m), N);
    }
    double len = 0.0;
    for (double v : nu) len += v * v;
    len = std::sqrt(len);
    if (len < 1e-10) throw RankDeficient("immersion Jacobian is rank deficient");
    for (double& v : nu) v *= imm.orientation / len;
    return nu;
}

TensorAtPoint shape_operator_at(const Immersion& imm, const Point& p) {
    const std::size_t n = imm.dim();
    const MetricAtPoint m = metric_at(induced_metric(imm), p, 0).metric;
    const std::vector<double> nu = unit_normal(imm, p);
    const std::vector<Jet3> x = component_jets(imm, p, 2);
    TensorAtPoint two(n, {Slot::Down, Slot::Down});
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t a = 0; a <= n; ++a) two(i, j) += x[a].d(i, j) * nu[a];
    return raise_lower(two, m, 0, Slot::Up);
}

Residual shape_soliton_residual(const Immersion& imm, const TensorField& xi, double lambda, const Point& p) {
    const MetricField g = induced_metric(imm);
    const MetricAtPoint m = metric_at(g, p, 0).metric;
    const std::size_t n = m.dim();
    Residual r;
    r.tensor = vector_derivative_endomorphism(levi_civita(g), xi).at(p) + shape_operator_at(imm, p) +
               lambda * TensorAtPoint::identity(n);
    r.norm2 = norm2(r.tensor, m);
    return r;
}

EtaUmbilical eta_umbilical_decompose(const TensorAtPoint& A, const MetricAtPoint& m) {
    const std::size_t n = m.dim();
    if (A.variance() != Variance{Slot::Up, Slot::Down} || A.dim() != n) {
        throw InvalidArgument("shape operator must be a (1,1) tensor of the metric's dimension");
    }
    const TensorAtPoint h = raise_lower(A, m, 0, Slot::Down);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::fabs(h(i, j) - h(j, i)) > 1e-9) throw AsymmetricTensor("operator is not self-adjoint");
    TensorAtPoint hs = h;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) hs(i, j) = 0.5 * (h(i, j) + h(j, i));
    const FrameSpectrum spec = generalized_eigen(hs, m);

    // Ascending eigenvalues; a new cluster starts at every gap above the tolerance.
    std::vector<std::vector<std::size_t>> clusters;
    for (std::size_t k = 0; k < n; ++k) {
        if (k == 0 || spec.eigenvalues[k] - spec.eigenvalues[k - 1] > 1e-8) clusters.emplace_back();
        clusters.back().push_back(k);
    }
    auto mean_of = [&](const std::vector<std::size_t>& c) {
        double s = 0.0;
        for (std::size_t k : c) s += spec.eigenvalues[k];
        return s / static_cast<double>(c.size());
    };
    EtaUmbilical out;
    out.xi = TensorAtPoint(n, {Slot::Up});
    if (clusters.size() == 1) {
        out.sigma = out.rho = mean_of(clusters[0]);
        out.umbilical = true;
    } else if (clusters.size() == 2 && (clusters[0].size() == 1 || clusters[1].size() == 1)) {
        // Prefer rho as the upper simple eigenvalue; this is the only choice when n = 2.
        const bool rho_upper = clusters[1].size() == 1;
        const auto& rc = rho_upper ? clusters[1] : clusters[0];
        const auto& sc = rho_upper ? clusters[0] : clusters[1];
        out.rho = mean_of(rc);
        out.sigma = mean_of(sc);
        for (std::size_t i = 0; i < n; ++i) out.xi(i) = spec.frame[rc[0]][i];
    } else {
        throw NotEtaUmbilical("spectrum has " + std::to_string(clusters.size()) +
                              " eigenvalue clusters; eta-umbilical needs multiplicities (n-1, 1)");
    }
    const TensorAtPoint rebuilt = torse_forming_from_shape(out, m, 0.0) * -1.0;
    double err = 0.0;
    for (std::size_t f = 0; f < A.size(); ++f) err = std::max(err, std::fabs(rebuilt[f] - A[f]));
    out.reconstruction_error = err;
    return out;
}

TensorAtPoint torse_forming_from_shape(const EtaUmbilical& e, const MetricAtPoint& m, double lambda) {
    const std::size_t n = m.dim();
    const TensorAtPoint eta = raise_lower(e.xi, m, 0, Slot::Down);
    return -(lambda + e.sigma) * TensorAtPoint::identity(n) + (e.sigma - e.rho) * outer_endomorphism(eta, e.xi);
}

} // namespace solab
