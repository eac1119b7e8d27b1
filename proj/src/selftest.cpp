#include "solab/selftest.hpp"

#include "solab/catalog.hpp"
#include "solab/curvature.hpp"
#include "solab/errors.hpp"
#include "solab/random_expr.hpp"
#include "solab/report.hpp"

#include "canonical_json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

namespace solab {

namespace {

/// Records the worst value of each named quantity and the first violated bound.
class Bounds {
public:
    explicit Bounds(CriterionResult& r) : r_(r) {}

    void le(const std::string& name, double value, double bound) {
        worst(name, value);
        if (!(value <= bound)) violated(name, value, "<=", bound);
    }
    void near(const std::string& name, double value, double expected, double tol) {
        le(name, std::fabs(value - expected), tol);
    }
    void that(bool ok, const std::string& what) {
        if (!ok && r_.passed) {
            r_.passed = false;
            r_.detail = what;
        }
    }
    void count(const std::string& name, double n = 1.0) { r_.metrics[name] += n; }
    void record(const std::string& name, double value) { r_.metrics[name] = value; }

private:
    void worst(const std::string& name, double value) {
        auto it = r_.metrics.find(name);
        if (it == r_.metrics.end() || value > it->second || std::isnan(value)) r_.metrics[name] = value;
    }
    void violated(const std::string& name, double value, const char* op, double bound) {
        if (!r_.passed) return;
        char buf[200];
        std::snprintf(buf, sizeof buf, "%s = %.6e, want %s %.3e", name.c_str(), value, op, bound);
        r_.passed = false;
        r_.detail = buf;
    }
    CriterionResult& r_;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

Report verify(const GeometrySpec& spec, std::vector<Check> checks, std::uint64_t seed,
              std::optional<std::vector<Point>> points = std::nullopt) {
    VerifyOptions o;
    o.checks = std::move(checks);
    o.seed = seed;
    o.points = std::move(points);
    return run_verify(spec, o);
}

void no_failures(Bounds& b, const Report& r, const std::string& label) {
    b.count("report_failures", static_cast<double>(r.failures.size()));
    if (!r.failures.empty())
        b.that(false, label + ": " + r.failures.front().check + ": " + r.failures.front().message);
}

// 1 ---------------------------------------------------------------------------------------
void cigar_reproduction(Bounds& b, std::uint64_t seed) {
    const GeometrySpec spec = catalog_get("cigar").spec;
    const Report r = verify(spec, {Check::Gradient, Check::Lambda, Check::Inequalities}, seed,
                            std::vector<Point>{Point{0.0, 0.0}});
    no_failures(b, r, "cigar origin");
    const GradientSection& g = *r.points.at(0).gradient;
    b.near("origin.laplacian_error", g.laplacian, -4.0, 1e-9);
    b.near("origin.normH2_error", g.normH2, 8.0, 1e-9);
    b.near("origin.gauss_error", g.gauss.value_or(NAN), 2.0, 1e-9);
    b.near("origin.normRic2_error", g.normRic2, 8.0, 1e-9);
    b.near("origin.scalarR_error", g.scalarR, 4.0, 1e-9);
    b.le("origin.residual6_norm2", g.residual6_norm2, 1e-18);
    b.that(r.lambda == 0.0, "lambda is not 0");

    const Geometry geo = compile(spec);
    const SampleDomain d{{{-2.0, 2.0}, {-2.0, 2.0}}, std::make_pair(0.0, 2.0)};
    double min_margin = INFINITY;
    for (const Point& p : random_points(d, 20, seed)) {
        const double r2 = p[0] * p[0] + p[1] * p[1];
        b.that(r2 < 4.0, "sample outside r^2 < 4");
        const double w = 1.0 / (1.0 + r2);
        const TensorAtPoint h = hessian_at(geo.g, *geo.f, p);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) b.near("hessian_error", h(i, j), i == j ? -2.0 * w * w : 0.0, 1e-9);
        const SolitonReport sr = soliton_report(geo.soliton(), p);
        b.near("margin13_error", sr.margin13, 8.0 * w * w, 1e-9);
        min_margin = std::min(min_margin, sr.margin13);
    }
    b.record("margin13.min", min_margin);
    b.that(min_margin > 0.0, "margin13 is not strictly positive");
}

// 2 ---------------------------------------------------------------------------------------
void cylinder_reproduction(Bounds& b, std::uint64_t seed) {
    for (int n = 3; n <= 5; ++n) {
        const std::string label = "cylinder(" + std::to_string(n) + ")";
        const Report r = verify(catalog_get("cylinder", {{"n", double(n)}}).spec,
                                {Check::Gradient, Check::Lambda, Check::Inequalities}, seed);
        no_failures(b, r, label);
        b.that(r.lambda == -0.5 && r.classification == std::optional<std::string>("shrinking"), label + ": not shrinking at -1/2");
        for (const PointReport& p : r.points) {
            const GradientSection& g = *p.gradient;
            b.le("residual6_norm2", g.residual6_norm2, 1e-18);
            b.near("laplacian_error", g.laplacian, 0.5, 1e-9);
            b.near("normH2_error", g.normH2, 0.25, 1e-9);
            b.near("normRic2_error", g.normRic2, (n - 1) / 4.0, 1e-9);
            b.near("scalarR_error", g.scalarR, (n - 1) / 2.0, 1e-9);
        }
        const auto claim = [&](const std::string& q) -> const ClaimResult* {
            for (const auto& c : r.paper_claims)
                if (c.quantity == q) return &c;
            return nullptr;
        };
        const ClaimResult* ric = claim("normRic2");
        const ClaimResult* scal = claim("scalarR");
        b.that(ric && ric->printed == 0.25 && !ric->matched, label + ": printed |Ric|^2 = 1/4 not flagged as unmatched");
        b.that(scal && scal->printed == (n - 2) / 2.0 && !scal->matched,
               label + ": printed R = (n-2)/2 not flagged as unmatched");
        b.count("unmatched_claims", (ric && !ric->matched) + (scal && !scal->matched));
    }
}

// 3 ---------------------------------------------------------------------------------------
void gaussian_family(Bounds& b, std::uint64_t seed) {
    for (int n = 1; n <= 4; ++n)
        for (double lambda : {-1.0, 0.5, 2.0}) {
            const std::string label = "gaussian(" + std::to_string(n) + ", " + fmt("%g", lambda) + ")";
            const Report r = verify(catalog_get("gaussian", {{"n", double(n)}, {"lambda", lambda}}).spec,
                                    {Check::Gradient, Check::Lambda}, seed);
            no_failures(b, r, label);
            for (const PointReport& p : r.points) {
                const QuadraticReport& q = p.lambda->q11;
                b.le("disc12_abs", std::fabs(q.disc), 1e-9);
                b.that(q.roots.size() == 1 && q.double_root, label + ": roots11 is not a double root");
                if (!q.roots.empty()) b.near("roots11_error", q.roots[0], lambda, 1e-9);
            }
            b.count("instances");
        }
}

// 4 ---------------------------------------------------------------------------------------
void einstein_sphere(Bounds& b, std::uint64_t seed) {
    const Report r = verify(catalog_get("einstein_sphere").spec, {Check::Gradient, Check::Lambda, Check::Inequalities}, seed);
    no_failures(b, r, "einstein_sphere");
    b.that(r.lambda == -1.0, "lambda is not -1");
    for (const PointReport& p : r.points) {
        b.le("margin19_abs", std::fabs(p.inequalities->margin19), 1e-9);
        const QuadraticReport& q = p.lambda->q17;
        b.that(q.roots.size() == 1 && q.double_root, "roots17 is not a double root");
        if (!q.roots.empty()) b.near("roots17_error", q.roots[0], -1.0, 1e-9);
    }
}

// 5 ---------------------------------------------------------------------------------------
void identity_suites(Bounds& b, std::uint64_t seed) {
    for (const char* name : {"gaussian", "einstein_sphere", "cone", "cigar", "cylinder"}) {
        GeometrySpec spec = catalog_get(std::string(name)).spec;
        spec.sample_count = 100;
        spec.points.clear();
        spec.expected.clear();
        const Report r = verify(spec, {Check::Gradient, Check::Lambda, Check::Inequalities}, seed);
        no_failures(b, r, name);
        b.that(r.points.size() == 100, std::string(name) + ": expected 100 points");
        for (const PointReport& p : r.points) {
            b.le("identity10_abs", std::fabs(p.lambda->identity10_residual), 1e-9);
            b.le("trace16_abs", std::fabs(p.lambda->trace16_residual), 1e-9);
            b.le("disc12_negative", -p.lambda->q11.disc, 1e-9);
            b.le("disc18_negative", -p.lambda->q17.disc, 1e-9);
            b.that(p.inequalities->ordered, std::string(name) + ": double inequality out of order");
            b.count("points");
        }
    }
}

// 6 ---------------------------------------------------------------------------------------
void cone_entry(Bounds& b, std::uint64_t seed) {
    for (int n = 3; n <= 5; ++n) {
        const std::string label = "cone(" + std::to_string(n) + ")";
        const Report r = verify(catalog_get("cone", {{"n", double(n)}}).spec, {Check::Gradient}, seed);
        no_failures(b, r, label);
        b.that(r.lambda == 1.0, label + ": lambda is not 1");
        for (const PointReport& p : r.points) {
            const GradientSection& g = *p.gradient;
            b.that(g.hessian_eigen.size() == static_cast<std::size_t>(n), label + ": wrong spectrum size");
            for (double e : g.hessian_eigen) b.near("hessian_eigen_error", e, -1.0, 1e-9);
            b.le("ricci_max_abs", g.ricci_max_abs, 1e-8);
            b.le("residual6_norm2", g.residual6_norm2, 1e-16);
        }
    }
}

// 7 ---------------------------------------------------------------------------------------
void vaisman_hopf(Bounds& b, std::uint64_t seed) {
    const Report r = verify(catalog_get("hopf").spec, {Check::Vaisman}, seed);
    no_failures(b, r, "hopf");
    b.that(r.vaisman_premises.has_value(), "premises not evaluated");
    if (r.vaisman_premises) {
        b.le("premise_J2", r.vaisman_premises->J2, 1e-9);
        b.le("premise_hermitian", r.vaisman_premises->hermitian, 1e-9);
        b.le("premise_unit_u", r.vaisman_premises->unit_u, 1e-9);
        b.le("premise_covariant_V", r.vaisman_premises->covariant_V, 1e-9);
    }
    b.that(r.points.size() == 20, "expected 20 points");
    for (const PointReport& p : r.points) {
        double norm = 0.0;
        for (double x : p.point) norm += x * x;
        norm = std::sqrt(norm);
        b.that(norm >= 0.5 && norm <= 2.0, "sample outside 0.5 <= |x| <= 2");
        b.that(p.vaisman.has_value(), "missing Vaisman section");
        if (!p.vaisman) continue;
        b.le("soliton_residual", std::sqrt(p.vaisman->soliton_norm2), 1e-9);
        b.le("recurrence_error", p.vaisman->recurrence_error, 1e-9);
        b.le("torsion_error", p.vaisman->torsion_error, 1e-9);
    }
}

// 8 ---------------------------------------------------------------------------------------
void weyl_probe(Bounds& b, std::uint64_t seed) {
    struct Instance {
        std::string name;
        GeometrySpec spec;
    };
    std::vector<Instance> cases;
    {
        GeometrySpec s;
        s.coords = {"x", "y"};
        s.metric = {"1", "0", "0", "1"};
        s.eta = std::vector<std::string>{"2", "1"};
        s.domain.box = {{-1.0, 1.0}, {-1.0, 1.0}};
        cases.push_back({"plane, eta = 2dx + dy", s});
    }
    {
        GeometrySpec s = catalog_get("cylinder", {{"n", 3.0}}).spec;
        s.potential.reset();
        s.eta = std::vector<std::string>{"0", "0", "1"};
        cases.push_back({"cylinder(3), eta = dt", s});
    }
    {
        GeometrySpec s = catalog_get("einstein_sphere").spec;
        s.potential.reset();
        s.eta = std::vector<std::string>{"1", "0"};
        cases.push_back({"unit sphere, eta = dth", s});
    }
    for (Instance& c : cases) {
        c.spec.name = c.name;
        c.spec.expected.clear();
        c.spec.claims.clear();
        c.spec.checks.clear();
        c.spec.connection.kind = ConnectionKind::Weyl;
        c.spec.lambda = 0.3;
        c.spec.mu = 0.1;
        const Report r = verify(c.spec, {Check::Weyl}, seed);
        no_failures(b, r, c.name);
        b.that(r.weyl.has_value(), c.name + ": no shift fit");
        if (!r.weyl) continue;
        b.near("delta_lambda_error", r.weyl->delta_lambda, -r.weyl->xi_norm2 / 2.0, 1e-8);
        b.le("delta_mu_abs", std::fabs(r.weyl->delta_mu), 1e-8);
        b.le("identity_residual", r.weyl->identity_residual, 1e-9);
        bool flagged = false;
        for (const auto& cl : r.paper_claims)
            if (cl.quantity == "weyl.delta_mu" && cl.printed == 0.5 && !cl.matched) flagged = true;
        b.that(flagged, c.name + ": stated mu shift not flagged");
        b.count("flagged", flagged);
    }
}

// 9 ---------------------------------------------------------------------------------------
void torse_identity(Bounds& b, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const ChartPtr c = make_chart({"x", "y"});
    for (int t = 0; t < 50; ++t) {
        const std::string conf = "exp(0.3*sin(" + random_expression(rng, c->coords, 2) + "))";  // factor in [e^-0.3, e^0.3]
        const MetricField g = MetricField::from_strings(c, {conf, "0", "0", conf});
        const TensorField xi =
            TensorField::from_strings(c, {Slot::Up}, {random_expression(rng, c->coords, 2), random_expression(rng, c->coords, 2)});
        const double f = -1.0 + 2.0 * uniform01(rng);
        const double lambda = -1.0 + 2.0 * uniform01(rng);
        const Point p{-1.0 + 2.0 * uniform01(rng), -1.0 + 2.0 * uniform01(rng)};
        SolitonData d;
        d.g = g;
        d.xi = xi;
        d.lambda = lambda;
        const Residual r22 = generalized_residual(d, p);
        const Residual r32 = eta_einstein_residual(g, xi, lambda, f, p);
        const MetricAtPoint m = metric_at(g, p, 0).metric;
        const TensorAtPoint xv = xi.at(p);
        const TensorAtPoint defect = vector_derivative_endomorphism(levi_civita(g), xi).at(p) -
                                     f * TensorAtPoint::identity(2) - outer_endomorphism(raise_lower(xv, m, 0, Slot::Down), xv);
        b.le("identity_residual", ((r22.tensor - r32.tensor) - defect).max_abs(), 1e-10);
        b.count("instances");
    }
    const Report r = verify(catalog_get("torse_special").spec, {Check::Torse}, seed);
    no_failures(b, r, "torse_special");
    for (const PointReport& p : r.points) {
        b.le("special.f_abs", std::fabs(p.torse->f), 1e-9);
        b.le("special.gamma_minus_eta", p.torse->gamma_minus_eta, 1e-9);
    }
}

// 10 --------------------------------------------------------------------------------------
void curvature_identities(Bounds& b, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    struct Case {
        std::string name;
        ChartPtr chart;
        MetricField g;
        std::vector<Point> points;
    };
    std::vector<Case> cases;
    {
        const Geometry cigar = compile(catalog_get("cigar").spec);
        cases.push_back({"cigar", cigar.chart, cigar.g, random_points(cigar.spec.domain, 20, seed)});
    }
    const Geometry sphere = compile(catalog_get("einstein_sphere").spec);
    cases.push_back({"sphere", sphere.chart, sphere.g, random_points(sphere.spec.domain, 20, seed)});
    {
        const ChartPtr c = make_chart({"x", "y"});
        const auto poly = [&] {
            static const char* monomials[] = {"1", "x", "y", "x^2", "x*y", "y^2", "x^3", "x^2*y", "x*y^2", "y^3"};
            std::string s;
            for (const char* mono : monomials) s += (s.empty() ? "" : "+") + fmt("(%.6f)", -1.0 + 2.0 * uniform01(rng)) + "*" + mono;
            return s;
        };
        // |poly| <= 3.25 on the box, so 0.1 * poly keeps the metric diagonally dominant.
        const std::string off = "0.1*(" + poly() + ")";
        const MetricField g = MetricField::from_strings(
            c, {"1+0.1*(" + poly() + ")^2", off, off, "1+0.1*(" + poly() + ")^2"});
        SampleDomain d;
        d.box = {{-0.5, 0.5}, {-0.5, 0.5}};
        cases.push_back({"perturbed", c, g, random_points(d, 20, seed)});
    }
    for (const Case& k : cases) {
        const ChartPtr& c = k.chart;
        const ConnectionField lc = levi_civita(k.g);
        const TensorField Q = ricci_endomorphism_field(lc, k.g);
        const TensorField xi = TensorField::from_strings(
            c, {Slot::Up}, {random_expression(rng, c->coords, 2), random_expression(rng, c->coords, 2)});
        const TensorField dxi = vector_derivative_endomorphism(lc, xi);
        for (const Point& p : k.points) {
            const TensorAtPoint lhs = ext_cov_deriv_at(lc, dxi, p);
            const TensorAtPoint rhs = riemann_apply(riemann_at(lc, p).riemann, xi.at(p));
            b.le("curvature_route." + k.name, (lhs - rhs).max_abs(), 1e-8);
            b.le("divergence_identity." + k.name, (div_riemann_at(lc, k.g, p) + ext_cov_deriv_at(lc, Q, p)).max_abs(), 1e-8);
        }
    }
    const TensorField unit = TensorField::from_strings(sphere.chart, {Slot::Up}, {"1", "0"});
    for (const Point& p : cases[1].points) b.near("weak_sphere_error", weak_soliton_residual(sphere.g, unit, p).norm2, 2.0, 1e-8);
}

// 11 --------------------------------------------------------------------------------------
void statistical_suite(Bounds& b, std::uint64_t seed) {
    for (double kappa : {0.5, 1.0, 2.0}) {
        const Report r = verify(catalog_get("statistical_flat", {{"kappa", kappa}}).spec, {Check::Statistical}, seed);
        no_failures(b, r, "statistical_flat(" + fmt("%g", kappa) + ")");
        for (const PointReport& p : r.points) {
            b.le("duality_residual", p.statistical->duality_residual, 1e-10);
            b.le("mean_identity_residual", p.statistical->mean_identity_residual, 1e-12);
        }
    }
    // Self-dual: Levi-Civita with a field that is not a soliton, so the residual is nonzero.
    const Geometry cigar = compile(catalog_get("cigar").spec);
    const TensorField xi = TensorField::from_strings(cigar.chart, {Slot::Up}, {"x", "y"});
    const double lambda = 0.3;
    const std::vector<Point> pts = random_points(cigar.spec.domain, 8, seed);
    const StatisticalReport sr = statistical_check(cigar.g, levi_civita(cigar.g), xi, lambda, pts);
    b.that(sr.self_dual, "Levi-Civita is not reported self-dual");
    SolitonData d;
    d.g = cigar.g;
    d.xi = xi;
    d.lambda = lambda;
    for (std::size_t k = 0; k < pts.size(); ++k) {
        const double ordinary = generalized_residual(d, pts[k]).norm2;
        const StatisticalPoint& sp = sr.points[k];
        const bool same = sp.residual_conn == ordinary && sp.residual_dual == ordinary && sp.residual_mean == ordinary;
        b.count("bitwise_mismatches", !same);
        b.that(same, "self-dual residuals differ from the Ricci-soliton residual");
        b.that(ordinary > 0.0, "self-dual probe residual is zero");
    }
}

// 12 --------------------------------------------------------------------------------------
void hypersurface_suite(Bounds& b, std::uint64_t seed) {
    const auto shape = [&](const std::string& inv, const std::function<void(const TensorAtPoint&)>& check) {
        const GeometrySpec spec = catalog_get(inv).spec;
        const Report r = verify(spec, {Check::Shape}, seed);
        no_failures(b, r, inv);
        const Geometry geo = compile(spec);
        for (const PointReport& p : r.points) {
            b.le("umbilic_identity", p.shape->identity_residual, 1e-9);
            check(shape_operator_at(*geo.immersion, Point(p.point)));
        }
        return r;
    };
    const Report sphere = shape("sphere(1)", [&](const TensorAtPoint& a) {
        b.le("sphere.A_plus_I", (a + TensorAtPoint::identity(2)).max_abs(), 1e-9);
    });
    for (const PointReport& p : sphere.points) {
        b.near("sphere.sigma_error", p.shape->sigma.value_or(NAN), -1.0, 1e-9);
        b.near("sphere.rho_error", p.shape->rho.value_or(NAN), -1.0, 1e-9);
    }
    const Report cyl = shape("cylinder_surface(1)", [&](const TensorAtPoint& a) {
        TensorAtPoint want = TensorAtPoint::identity(2);
        want(0, 0) = -1.0;
        want(1, 1) = 0.0;
        b.le("cylinder.A_error", (a - want).max_abs(), 1e-9);
    });
    for (const PointReport& p : cyl.points) {
        b.that(p.shape->eigenvalues.size() == 2, "cylinder spectrum size");
        b.near("cylinder.eigen_error", p.shape->eigenvalues.at(0), -1.0, 1e-9);
        b.near("cylinder.eigen_error", p.shape->eigenvalues.at(1), 0.0, 1e-9);
        b.near("cylinder.sigma_error", p.shape->sigma.value_or(NAN), -1.0, 1e-9);
        b.near("cylinder.rho_error", p.shape->rho.value_or(NAN), 0.0, 1e-9);
    }
    shape("plane", [&](const TensorAtPoint& a) { b.le("plane.A_max_abs", a.max_abs(), 1e-9); });

    // Synthetic eta-umbilical operators on random metrics.
    std::mt19937_64 rng(seed);
    const auto u = [&](double lo, double hi) { return lo + (hi - lo) * uniform01(rng); };
    for (int t = 0; t < 20; ++t) {
        const std::size_t n = 3 + static_cast<std::size_t>(t % 2);
        std::vector<double> bm(n * n), gm(n * n, 0.0);
        for (double& v : bm) v = u(-1.0, 1.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                for (std::size_t k = 0; k < n; ++k) gm[i * n + j] += bm[i * n + k] * bm[j * n + k];
                if (i == j) gm[i * n + j] += 1.0;
            }
        const MetricAtPoint m = MetricAtPoint::from_matrix(Matrix(n, n, gm));
        std::vector<double> xv(n);
        for (double& v : xv) v = u(-1.0, 1.0);
        TensorAtPoint xi(n, {Slot::Up}, xv);
        xi *= 1.0 / std::sqrt(norm2(xi, m));
        const TensorAtPoint eta = raise_lower(xi, m, 0, Slot::Down);
        const double sigma = u(-2.0, 2.0);
        const double rho = sigma + (t % 4 < 2 ? 1.0 : -1.0) * u(0.3, 2.0);
        const double lambda = u(-1.0, 1.0);
        const TensorAtPoint a = sigma * TensorAtPoint::identity(n) + (rho - sigma) * outer_endomorphism(eta, xi);
        const EtaUmbilical e = eta_umbilical_decompose(a, m);
        b.near("synthetic.sigma_error", e.sigma, sigma, 1e-9);
        b.near("synthetic.rho_error", e.rho, rho, 1e-9);
        const TensorAtPoint grad_xi = -1.0 * a - lambda * TensorAtPoint::identity(n);
        b.le("synthetic.identity", (torse_forming_from_shape(e, m, lambda) - grad_xi).max_abs(), 1e-9);
        b.count("synthetic_instances");
    }
}

// 13 --------------------------------------------------------------------------------------
void jet_oracle(Bounds& b, std::uint64_t seed) {
    const ChartPtr c = make_chart({"x", "y", "z"});
    std::mt19937_64 rng(seed);
    double worst_ratio = 0.0;
    for (int t = 0; t < 200; ++t) {
        const ScalarField f(c, random_expression(rng, c->coords, 2));
        std::vector<double> x(3);
        for (double& v : x) v = -1.0 + 2.0 * uniform01(rng);
        const Point p(x);
        const Jet3 j = f.eval_jet(p, 3);
        const auto compare = [&](int order, double exact, const MultiIndex& mi) {
            const double err = std::fabs(exact - finite_diff_oracle(f, p, mi));
            const double tol = finite_diff_tolerance(order, exact);
            worst_ratio = std::max(worst_ratio, err / tol);
            b.that(err <= tol, "order " + std::to_string(order) + " partial disagrees with finite differences");
            b.count("comparisons.order" + std::to_string(order));
        };
        for (std::size_t a = 0; a < 3; ++a) {
            compare(1, j.d(a), {a});
            for (std::size_t bb = a; bb < 3; ++bb) {
                compare(2, j.d(a, bb), {a, bb});
                for (std::size_t k = bb; k < 3; ++k) compare(3, j.d(a, bb, k), {a, bb, k});
            }
        }
    }
    b.record("worst_error_over_tolerance", worst_ratio);
}

struct Criterion {
    const char* name;
    void (*run)(Bounds&, std::uint64_t);
};

const Criterion kCriteria[kSelftestCriteria] = {
    {"cigar reproduction", cigar_reproduction},
    {"cylinder reproduction", cylinder_reproduction},
    {"gaussian family", gaussian_family},
    {"einstein sphere", einstein_sphere},
    {"identity suites", identity_suites},
    {"cone entry", cone_entry},
    {"vaisman structure on the hopf chart", vaisman_hopf},
    {"weyl shift probe", weyl_probe},
    {"torse-forming identity", torse_identity},
    {"curvature identities", curvature_identities},
    {"statistical suite", statistical_suite},
    {"hypersurface suite", hypersurface_suite},
    {"jet oracle", jet_oracle},
};

} // namespace

CriterionResult run_criterion(int id, std::uint64_t seed) {
    if (id < 1 || id > kSelftestCriteria) throw InputError("criterion " + std::to_string(id) + " does not exist");
    const Criterion& c = kCriteria[id - 1];
    CriterionResult r;
    r.id = id;
    r.name = c.name;
    r.passed = true;
    Bounds b(r);
    try {
        c.run(b, seed + static_cast<std::uint64_t>(id));
    } catch (const Error& e) {
        b.that(false, std::string("error: ") + e.what());
    }
    if (r.passed) r.detail = "all bounds hold";
    return r;
}

SelftestReport run_selftest(std::uint64_t seed) {
    SelftestReport r;
    r.engine_version = kEngineVersion;
    r.convention_hash = convention_hash();
    r.seed = seed;
    r.passed = true;
    for (int id = 1; id <= kSelftestCriteria; ++id) {
        r.criteria.push_back(run_criterion(id, seed));
        r.passed = r.passed && r.criteria.back().passed;
    }
    return r;
}

std::string selftest_json(const SelftestReport& r) {
    nlohmann::json j;
    j["engine_version"] = r.engine_version;
    j["convention_hash"] = r.convention_hash;
    j["seed"] = r.seed;
    j["passed"] = r.passed;
    j["criteria"] = nlohmann::json::array();
    for (const CriterionResult& c : r.criteria) {
        nlohmann::json m = nlohmann::json::object();
        for (const auto& [k, v] : c.metrics) m[k] = v;
        j["criteria"].push_back({{"id", c.id}, {"name", c.name}, {"passed", c.passed}, {"detail", c.detail}, {"metrics", m}});
    }
    return canonical_json(j);
}

std::string selftest_text(const SelftestReport& r) {
    std::ostringstream os;
    for (const CriterionResult& c : r.criteria) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "%-4s %2d  %-38s ", c.passed ? "PASS" : "FAIL", c.id, c.name.c_str());
        os << buf << c.detail << "\n";
    }
    os << (r.passed ? "selftest passed" : "selftest FAILED") << "\n";
    return os.str();
}

} // namespace solab
