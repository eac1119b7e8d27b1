#include "solab/report.hpp"

#include "solab/errors.hpp"

#include "canonical_json.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace solab {

namespace {

using nlohmann::json;

// ---------------------------------------------------------------------------------------
// Field lists. Each struct names its members once; encoding and decoding share the list.

template <class V, class T> void describe(V& v, T& s) = delete;

template <class V, class S> void describe_quadratic(V& v, S& s) {
    v("a", s.a), v("b", s.b), v("c", s.c), v("disc", s.disc), v("roots", s.roots), v("double_root", s.double_root);
}
template <class V, class S> void describe_gradient(V& v, S& s) {
    v("residual6_norm2", s.residual6_norm2), v("hessian_eigen", s.hessian_eigen), v("laplacian", s.laplacian);
    v("normH2", s.normH2), v("normRic2", s.normRic2), v("scalarR", s.scalarR), v("gauss", s.gauss);
    v("ricci_max_abs", s.ricci_max_abs), v("classification", s.classification);
    v("hessian_equals_ricci", s.hessian_equals_ricci), v("hessian_equals_minus_ricci", s.hessian_equals_minus_ricci);
    v("harmonic", s.harmonic), v("scalar_flat", s.scalar_flat);
}
template <class V, class S> void describe_lambda(V& v, S& s) {
    v("q11", s.q11), v("q17", s.q17), v("companion11", s.companion11), v("companion17", s.companion17);
    v("trace16_residual", s.trace16_residual), v("identity10_residual", s.identity10_residual);
    v("companion11_tensor_residual", s.companion11_tensor_residual), v("root_residual", s.root_residual);
}
template <class V, class S> void describe_inequalities(V& v, S& s) {
    v("margin13", s.margin13), v("margin19", s.margin19), v("double20", s.double20), v("ordered", s.ordered);
}
template <class V, class S> void describe_generalized(V& v, S& s) { v("norm2", s.norm2), v("connection", s.connection); }
template <class V, class S> void describe_vaisman(V& v, S& s) {
    v("soliton_norm2", s.soliton_norm2), v("recurrence_error", s.recurrence_error), v("recurrence_fit", s.recurrence_fit);
    v("torsion_error", s.torsion_error), v("torsion_UV", s.torsion_UV);
}
template <class V, class S> void describe_torse(V& v, S& s) {
    v("f", s.f), v("gamma", s.gamma), v("gamma_minus_eta", s.gamma_minus_eta);
    v("eta_einstein_norm2", s.eta_einstein_norm2), v("identity_residual", s.identity_residual);
}
template <class V, class S> void describe_statistical(V& v, S& s) {
    v("duality_residual", s.duality_residual), v("mean_identity_residual", s.mean_identity_residual);
    v("ricci_asymmetry", s.ricci_asymmetry), v("residual_conn", s.residual_conn), v("residual_dual", s.residual_dual);
    v("residual_mean", s.residual_mean);
}
template <class V, class S> void describe_weak(V& v, S& s) {
    v("norm2", s.norm2), v("route_difference", s.route_difference), v("divergence_identity", s.divergence_identity);
}
template <class V, class S> void describe_shape(V& v, S& s) {
    v("eigenvalues", s.eigenvalues), v("eta_umbilical", s.eta_umbilical), v("umbilical", s.umbilical);
    v("sigma", s.sigma), v("rho", s.rho), v("reconstruction_error", s.reconstruction_error);
    v("identity_residual", s.identity_residual), v("soliton_norm2", s.soliton_norm2);
}
template <class V, class S> void describe_point(V& v, S& s) {
    v("point", s.point), v("gradient", s.gradient), v("lambda", s.lambda), v("inequalities", s.inequalities);
    v("generalized", s.generalized), v("vaisman", s.vaisman), v("torse", s.torse), v("statistical", s.statistical);
    v("weak", s.weak), v("shape", s.shape);
}
template <class V, class S> void describe_premises(V& v, S& s) {
    v("J2", s.J2), v("hermitian", s.hermitian), v("unit_u", s.unit_u), v("covariant_V", s.covariant_V);
}
template <class V, class S> void describe_weyl(V& v, S& s) {
    v("delta_lambda", s.delta_lambda), v("delta_mu", s.delta_mu), v("fit_residual", s.fit_residual);
    v("identity_residual", s.identity_residual), v("xi_norm2", s.xi_norm2);
}
template <class V, class S> void describe_expected(V& v, S& s) {
    v("quantity", s.quantity), v("point", s.point), v("expected", s.expected), v("computed", s.computed);
    v("tolerance", s.tolerance), v("provenance", s.provenance), v("passed", s.passed);
}
template <class V, class S> void describe_claim(V& v, S& s) {
    v("quantity", s.quantity), v("point", s.point), v("printed", s.printed), v("computed", s.computed);
    v("matched", s.matched), v("note", s.note);
}
template <class V, class S> void describe_failure(V& v, S& s) { v("check", s.check), v("point", s.point), v("message", s.message); }
template <class V, class S> void describe_report(V& v, S& s) {
    v("engine_version", s.engine_version), v("convention_hash", s.convention_hash), v("geometry", s.geometry);
    v("coords", s.coords), v("seed", s.seed), v("tolerance", s.tolerance), v("checks", s.checks);
    v("lambda", s.lambda), v("mu", s.mu), v("classification", s.classification), v("points", s.points);
    v("constant_roots11", s.constant_roots11), v("vaisman_premises", s.vaisman_premises), v("weyl", s.weyl);
    v("expected", s.expected), v("paper_claims", s.paper_claims), v("failures", s.failures), v("passed", s.passed);
}

#define SOLAB_DESCRIBE(Type, fn) \
    template <class V> void describe(V& v, Type& s) { fn(v, s); } \
    template <class V> void describe(V& v, const Type& s) { fn(v, s); }
SOLAB_DESCRIBE(QuadraticReport, describe_quadratic)
SOLAB_DESCRIBE(GradientSection, describe_gradient)
SOLAB_DESCRIBE(LambdaSection, describe_lambda)
SOLAB_DESCRIBE(InequalitySection, describe_inequalities)
SOLAB_DESCRIBE(GeneralizedSection, describe_generalized)
SOLAB_DESCRIBE(VaismanSection, describe_vaisman)
SOLAB_DESCRIBE(TorseSection, describe_torse)
SOLAB_DESCRIBE(StatisticalSection, describe_statistical)
SOLAB_DESCRIBE(WeakSection, describe_weak)
SOLAB_DESCRIBE(ShapeSection, describe_shape)
SOLAB_DESCRIBE(PointReport, describe_point)
SOLAB_DESCRIBE(VaismanPremises, describe_premises)
SOLAB_DESCRIBE(WeylSection, describe_weyl)
SOLAB_DESCRIBE(ExpectedResult, describe_expected)
SOLAB_DESCRIBE(ClaimResult, describe_claim)
SOLAB_DESCRIBE(Failure, describe_failure)
SOLAB_DESCRIBE(Report, describe_report)
#undef SOLAB_DESCRIBE

json encode(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
json encode(bool v) { return json(v); }
json encode(std::uint64_t v) { return json(v); }
json encode(const std::string& v) { return json(v); }
template <class T> json encode(const std::vector<T>& v);
template <class T> json encode(const T& s);

struct Encoder {
    json& j;
    template <class T> void operator()(const char* key, const T& v) { j[key] = encode(v); }
    template <class T> void operator()(const char* key, const std::optional<T>& v) {
        if (v) j[key] = encode(*v);
    }
};

template <class T> json encode(const std::vector<T>& v) {
    json a = json::array();
    for (const auto& x : v) a.push_back(encode(x));
    return a;
}
template <class T> json encode(const T& s) {
    json j = json::object();
    Encoder e{j};
    describe(e, s);
    return j;
}

void decode(const json& j, double& v) {
    if (j.is_null()) {
        v = std::numeric_limits<double>::quiet_NaN();
    } else if (j.is_number()) {
        v = j.get<double>();
    } else {
        throw InputError("report JSON: expected a number");
    }
}
void decode(const json& j, bool& v) { v = j.get<bool>(); }
void decode(const json& j, std::uint64_t& v) { v = j.get<std::uint64_t>(); }
void decode(const json& j, std::string& v) { v = j.get<std::string>(); }
template <class T> void decode(const json& j, std::vector<T>& v);
template <class T> void decode(const json& j, T& s);

struct Decoder {
    const json& j;
    template <class T> void operator()(const char* key, T& v) {
        if (!j.contains(key)) throw InputError(std::string("report JSON: missing key '") + key + "'");
        decode(j.at(key), v);
    }
    template <class T> void operator()(const char* key, std::optional<T>& v) {
        if (!j.contains(key)) {
            v.reset();
            return;
        }
        T x{};
        decode(j.at(key), x);
        v = std::move(x);
    }
};

template <class T> void decode(const json& j, std::vector<T>& v) {
    if (!j.is_array()) throw InputError("report JSON: expected an array");
    v.clear();
    for (const auto& x : j) {
        T item{};
        decode(x, item);
        v.push_back(std::move(item));
    }
}
template <class T> void decode(const json& j, T& s) {
    if (!j.is_object()) throw InputError("report JSON: expected an object");
    Decoder d{j};
    describe(d, s);
}

// ---------------------------------------------------------------------------------------

std::vector<double> coords_of(const Point& p) {
    std::vector<double> x;
    for (std::size_t i = 0; i < p.dim(); ++i) x.push_back(quantize(p[i]));
    return x;
}

std::vector<double> quantized(std::vector<double> v) {
    for (double& x : v) x = quantize(x);
    return v;
}

QuadraticReport quadratic_report(const Quadratic& q) {
    return QuadraticReport{quantize(q.a), quantize(q.b), quantize(q.c), quantize(q.disc), quantized(q.roots), q.double_root};
}

double root_residual(const Quadratic& q) {
    double worst = 0.0;
    for (double x : q.roots) {
        const double scale = std::max({1.0, std::fabs(q.a * x * x), std::fabs(2.0 * q.b * x), std::fabs(q.c)});
        worst = std::max(worst, std::fabs(q.a * x * x + 2.0 * q.b * x + q.c) / scale);
    }
    return worst;
}

double max_abs_diff(const TensorAtPoint& a, const TensorAtPoint& b) { return (a - b).max_abs(); }

std::string format_point(const std::vector<double>& x) {
    std::string s = "(";
    char buf[32];
    for (std::size_t i = 0; i < x.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.6g", x[i]);
        s += (i ? ", " : "") + std::string(buf);
    }
    return s + ")";
}

bool same_point(const Point& a, const Point& b) {
    if (a.dim() != b.dim()) return false;
    for (std::size_t i = 0; i < a.dim(); ++i)
        if (a[i] != b[i]) return false;
    return true;
}

/// Evaluation context shared by the per-point checks.
struct Runner {
    const Geometry& geo;
    double tol;
    Report& report;

    void fail(Check c, const std::optional<std::vector<double>>& p, const std::string& message) {
        report.failures.push_back(Failure{to_string(c), p, message});
    }
    void assert_le(Check c, const std::vector<double>& p, const std::string& what, double value, double bound) {
        if (!(value <= bound)) {
            char buf[160];
            std::snprintf(buf, sizeof buf, "%s = %.6e exceeds %.3e", what.c_str(), value, bound);
            fail(c, p, buf);
        }
    }
    double lambda() const { return geo.spec.lambda.value_or(0.0); }

    void gradient_family(const Point& p, PointReport& pr, bool want_gradient, bool want_lambda, bool want_ineq) {
        const SolitonData d = geo.soliton();
        const SolitonReport sr = soliton_report(d, p);
        const double n = static_cast<double>(geo.dim());
        const double scale = std::max({1.0, sr.normH2, sr.normRic2, sr.laplacian * sr.laplacian / n, sr.scalarR * sr.scalarR / n});
        if (want_gradient) {
            GradientSection s;
            s.residual6_norm2 = quantize(sr.residual6_norm2);
            s.hessian_eigen = quantized(sr.spectrum.eigenvalues);
            s.laplacian = quantize(sr.laplacian);
            s.normH2 = quantize(sr.normH2);
            s.normRic2 = quantize(sr.normRic2);
            s.scalarR = quantize(sr.scalarR);
            if (sr.gauss) s.gauss = quantize(*sr.gauss);
            s.ricci_max_abs = quantize(ricci_at(levi_civita(geo.g), geo.g, p).ricci.max_abs());
            s.classification = to_string(sr.classification);
            s.hessian_equals_ricci = sr.hessian_equals_ricci;
            s.hessian_equals_minus_ricci = sr.hessian_equals_minus_ricci;
            s.harmonic = sr.harmonic;
            s.scalar_flat = sr.scalar_flat;
            assert_le(Check::Gradient, pr.point, "gradient residual norm^2", sr.residual6_norm2, tol);
            pr.gradient = std::move(s);
        }
        if (want_lambda) {
            const LambdaAnalysis& la = sr.lambda_analysis;
            LambdaSection s;
            s.q11 = quadratic_report(la.q11);
            s.q17 = quadratic_report(la.q17);
            s.companion11 = quantize(la.companion11);
            s.companion17 = quantize(la.companion17);
            s.trace16_residual = quantize(la.trace16_residual);
            s.identity10_residual = quantize(sr.identity10_residual);
            s.companion11_tensor_residual = quantize(la.companion11_tensor_residual);
            const double rr = std::max(root_residual(la.q11), root_residual(la.q17));
            s.root_residual = quantize(rr);
            assert_le(Check::Lambda, pr.point, "|trace identity residual|", std::fabs(la.trace16_residual),
                      tol * std::max({1.0, std::fabs(sr.laplacian), std::fabs(sr.scalarR)}));
            assert_le(Check::Lambda, pr.point, "|norm identity residual|", std::fabs(sr.identity10_residual), tol * scale);
            assert_le(Check::Lambda, pr.point, "quadratic root residual", rr, tol);
            const auto disc_floor = [&](const Quadratic& q) { return -tol * std::max({1.0, q.b * q.b, std::fabs(q.a * q.c)}); };
            if (la.q11.disc < disc_floor(la.q11)) fail(Check::Lambda, pr.point, "first lambda-quadratic has negative discriminant");
            if (la.q17.disc < disc_floor(la.q17)) fail(Check::Lambda, pr.point, "companion lambda-quadratic has negative discriminant");
            pr.lambda = std::move(s);
        }
        if (want_ineq) {
            InequalitySection s;
            s.margin13 = quantize(sr.margin13);
            s.margin19 = quantize(sr.margin19);
            s.double20 = quantized({sr.double20[0], sr.double20[1], sr.double20[2]});
            s.ordered = sr.double20[0] <= sr.double20[1] + tol * scale && sr.double20[1] <= sr.double20[2] + tol * scale;
            if (sr.margin13 < -tol * scale) fail(Check::Inequalities, pr.point, "lower Ricci-norm bound violated");
            if (sr.margin19 < -tol * scale) fail(Check::Inequalities, pr.point, "upper Ricci-norm bound violated");
            pr.inequalities = std::move(s);
        }
    }

    void generalized(const Point& p, PointReport& pr) {
        const Residual r = generalized_residual(geo.soliton(), p);
        pr.generalized = GeneralizedSection{quantize(r.norm2), to_string(geo.spec.connection.kind)};
        assert_le(Check::Generalized, pr.point, "generalized residual norm^2", r.norm2, tol);
    }

    void torse(const Point& p, PointReport& pr) {
        const TensorField& xi = *geo.xi;
        const TorseForming tf = torse_forming_check(geo.g, xi, {p});
        const MetricAtPoint m = metric_at(geo.g, p, 0).metric;
        const std::size_t n = geo.dim();
        const double f = tf.f[0];
        const TensorAtPoint xv = xi.at(p);
        const TensorAtPoint eta = raise_lower(xv, m, 0, Slot::Down);
        const TensorAtPoint& gamma = tf.gamma[0];

        const ConnectionField lc = levi_civita(geo.g);
        SolitonData d;
        d.g = geo.g;
        d.xi = xi;
        d.lambda = lambda();
        d.connection = lc;
        const Residual r22 = generalized_residual(d, p);
        const Residual r32 = eta_einstein_residual(geo.g, xi, lambda(), f, p);
        const TensorAtPoint defect = vector_derivative_endomorphism(lc, xi).at(p) - f * TensorAtPoint::identity(n) -
                                     outer_endomorphism(eta, xv);
        TorseSection s;
        s.f = quantize(f);
        for (std::size_t i = 0; i < n; ++i) s.gamma.push_back(quantize(gamma(i)));
        s.gamma_minus_eta = quantize(max_abs_diff(gamma, eta));
        s.eta_einstein_norm2 = quantize(r32.norm2);
        const double id = max_abs_diff(r22.tensor - r32.tensor, defect);
        s.identity_residual = quantize(id);
        assert_le(Check::Torse, pr.point, "torse-forming identity residual", id, tol);
        pr.torse = std::move(s);
    }

    void statistical(const Point& p, PointReport& pr) {
        const StatisticalReport sr = statistical_check(geo.g, geo.connection, *geo.xi, lambda(), {p});
        const StatisticalPoint& sp = sr.points.front();
        pr.statistical = StatisticalSection{quantize(sp.duality_residual), quantize(sp.mean_identity_residual),
                                            quantize(sp.ricci_asymmetry),  quantize(sp.residual_conn),
                                            quantize(sp.residual_dual),    quantize(sp.residual_mean)};
        assert_le(Check::Statistical, pr.point, "duality residual", sp.duality_residual, tol);
        assert_le(Check::Statistical, pr.point, "mean connection minus Levi-Civita", sp.mean_identity_residual, tol);
    }

    void weak(const Point& p, PointReport& pr) {
        const WeakResidual w = weak_soliton_residual(geo.g, *geo.xi, p);
        const ConnectionField lc = levi_civita(geo.g);
        const TensorAtPoint div = div_riemann_at(lc, geo.g, p);
        const TensorAtPoint dq = ext_cov_deriv_at(lc, ricci_endomorphism_field(lc, geo.g), p);
        const double divergence = (div + dq).max_abs();
        const double scale = std::max({1.0, riemann_at(lc, p).riemann.max_abs(), div.max_abs()});
        pr.weak = WeakSection{quantize(w.norm2), quantize(w.route_difference), quantize(divergence)};
        assert_le(Check::Weak, pr.point, "route difference", w.route_difference, tol * scale);
        assert_le(Check::Weak, pr.point, "divergence identity residual", divergence, tol * scale);
    }

    void shape(const Point& p, PointReport& pr) {
        const Immersion& imm = *geo.immersion;
        const MetricAtPoint m = metric_at(geo.g, p, 0).metric;
        const std::size_t n = geo.dim();
        const TensorAtPoint A = shape_operator_at(imm, p);
        const TensorAtPoint h = raise_lower(A, m, 0, Slot::Down);
        double asym = 0.0;
        TensorAtPoint hs = h;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                asym = std::max(asym, std::fabs(h(i, j) - h(j, i)));
                hs(i, j) = 0.5 * (h(i, j) + h(j, i));
            }
        assert_le(Check::Shape, pr.point, "shape operator self-adjointness defect", asym, tol * std::max(1.0, h.max_abs()));
        ShapeSection s;
        s.eigenvalues = quantized(generalized_eigen(hs, m).eigenvalues);
        try {
            const EtaUmbilical e = eta_umbilical_decompose(A, m);
            s.eta_umbilical = true;
            s.umbilical = e.umbilical;
            s.sigma = quantize(e.sigma);
            s.rho = quantize(e.rho);
            s.reconstruction_error = quantize(e.reconstruction_error);
            const double id = (torse_forming_from_shape(e, m, lambda()) + A + lambda() * TensorAtPoint::identity(n)).max_abs();
            s.identity_residual = quantize(id);
            assert_le(Check::Shape, pr.point, "eta-umbilical identity residual", id, tol);
        } catch (const NotEtaUmbilical&) {
            s.eta_umbilical = false;
        }
        if (geo.xi) {
            const double r = shape_soliton_residual(imm, *geo.xi, lambda(), p).norm2;
            s.soliton_norm2 = quantize(r);
            assert_le(Check::Shape, pr.point, "shape soliton residual norm^2", r, tol);
        }
        pr.shape = std::move(s);
    }
};

/// Class name and message of a numerical failure; input errors propagate instead.
std::string describe_error(const Error& e) {
    if (dynamic_cast<const InputError*>(&e) != nullptr) throw;
    const char* kind = "Error";
#define SOLAB_KIND(T) \
    else if (dynamic_cast<const T*>(&e) != nullptr) kind = #T;
    if (false) {
    }
    SOLAB_KIND(NotPositiveDefinite)
    SOLAB_KIND(AsymmetricTensor)
    SOLAB_KIND(DomainError)
    SOLAB_KIND(ConvergenceError)
    SOLAB_KIND(ZeroVector)
    SOLAB_KIND(RankDeficient)
    SOLAB_KIND(NonConstantNorm)
    SOLAB_KIND(NotTorsionFree)
    SOLAB_KIND(PremiseViolated)
    SOLAB_KIND(NotTorseForming)
    SOLAB_KIND(InvalidArgument)
#undef SOLAB_KIND
    return std::string(kind) + ": " + e.what();
}

std::optional<double> pick(const std::optional<std::vector<double>>& v, bool want_max) {
    if (!v || v->empty()) return std::nullopt;
    return want_max ? *std::max_element(v->begin(), v->end()) : *std::min_element(v->begin(), v->end());
}

} // namespace

const char* to_string(Check c) {
    switch (c) {
    case Check::Gradient: return "gradient";
    case Check::Lambda: return "lambda";
    case Check::Inequalities: return "inequalities";
    case Check::Generalized: return "generalized";
    case Check::Vaisman: return "vaisman";
    case Check::Weyl: return "weyl";
    case Check::Torse: return "torse";
    case Check::Statistical: return "statistical";
    case Check::Weak: return "weak";
    case Check::Shape: return "shape";
    }
    return "?";
}

const std::vector<Check>& all_checks() {
    static const std::vector<Check> v{Check::Gradient, Check::Lambda,      Check::Inequalities, Check::Generalized,
                                      Check::Vaisman,  Check::Weyl,        Check::Torse,        Check::Statistical,
                                      Check::Weak,     Check::Shape};
    return v;
}

Check check_from_string(const std::string& s) {
    for (Check c : all_checks())
        if (s == to_string(c)) return c;
    throw InputError("unknown check '" + s + "'");
}

const std::vector<std::string>& convention_ledger() {
    static const std::vector<std::string> lines{
        "soliton: H_f + Ric + lambda g = 0; lambda < 0 shrinking, 0 steady, > 0 expanding",
        "connection: nabla_{d_i} d_j = Gamma^k_ij d_k; torsion T^k_ij = Gamma^k_ij - Gamma^k_ji",
        "curvature: R^l_kij = d_i Gamma^l_jk - d_j Gamma^l_ik + Gamma^l_im Gamma^m_jk - Gamma^l_jm Gamma^m_ik",
        "ricci: Ric_ij = R^l_ilj; Q^a_i = Ric_ij g^ja; unit sphere has scalar curvature 2",
        "covariant derivative: derivative slot first; (nabla xi)^a_i = nabla_i xi^a",
        "generalized residual: nabla~ xi + F + lambda I + mu eta (x) xi with eta = xi flat",
        "quadratics: a x^2 + 2 b x + c with reduced discriminant b^2 - a c",
        "weyl: nabla~ g = eta (x) g",
        "shape operator: A = g^-1 II, II_ij = <d_i d_j X, nu>; outward unit sphere has A = -I",
        "frames: generalized eigenvectors are g-orthonormal; eigenvalues ascending",
    };
    return lines;
}

std::string convention_hash() {
    std::uint64_t h = 14695981039346656037ull;
    bool first = true;
    for (const std::string& line : convention_ledger()) {
        if (!first) {
            h ^= static_cast<unsigned char>('\n');
            h *= 1099511628211ull;
        }
        first = false;
        for (unsigned char c : line) {
            h ^= c;
            h *= 1099511628211ull;
        }
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

double quantize(double v) {
    if (!std::isfinite(v)) return std::numeric_limits<double>::quiet_NaN();
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12e", v);
    return std::strtod(buf, nullptr);
}

std::vector<Check> compatible_checks(const GeometrySpec& spec) {
    std::vector<Check> out;
    const bool lc = spec.connection.kind == ConnectionKind::LeviCivita;
    const bool xi = spec.potential || spec.vector_field;
    if (spec.potential && lc && !spec.immersion) {
        out.insert(out.end(), {Check::Gradient, Check::Lambda, Check::Inequalities});
    }
    if (xi && !spec.immersion && (!lc || spec.F || spec.mu)) out.push_back(Check::Generalized);
    if (spec.vaisman) out.push_back(Check::Vaisman);
    if (spec.connection.kind == ConnectionKind::Weyl) out.push_back(Check::Weyl);
    if (xi && (spec.connection.kind == ConnectionKind::Deform || spec.connection.kind == ConnectionKind::Explicit))
        out.push_back(Check::Statistical);
    if (spec.immersion) out.push_back(Check::Shape);
    return out;
}

void require_compatible(const GeometrySpec& spec, Check check) {
    const auto need = [&](bool ok, const std::string& what) {
        if (!ok) throw InputError(std::string("check '") + to_string(check) + "' needs " + what);
    };
    const bool xi = spec.potential || spec.vector_field;
    switch (check) {
    case Check::Gradient:
    case Check::Lambda:
    case Check::Inequalities:
        need(spec.potential.has_value(), "a [potential] section");
        need(spec.connection.kind == ConnectionKind::LeviCivita, "the Levi-Civita connection");
        break;
    case Check::Generalized: need(xi, "a potential or soliton.xi"); break;
    case Check::Vaisman: need(spec.vaisman.has_value(), "a [vaisman] section"); break;
    case Check::Weyl:
        need(spec.eta || !spec.connection.eta.empty(), "eta (soliton.eta or connection.eta)");
        break;
    case Check::Torse:
    case Check::Weak: need(xi, "a potential or soliton.xi"); break;
    case Check::Statistical: need(xi, "a potential or soliton.xi"); break;
    case Check::Shape: need(spec.immersion.has_value(), "an [immersion] section"); break;
    }
}

Report run_verify(const GeometrySpec& spec, const VerifyOptions& options) {
    const Geometry geo = compile(spec);
    std::vector<Check> checks = options.checks;
    if (checks.empty()) {
        if (!spec.checks.empty()) {
            for (const auto& name : spec.checks) checks.push_back(check_from_string(name));
        } else {
            checks = compatible_checks(spec);
        }
    }
    if (checks.empty()) throw InputError("no checks apply to this geometry");
    for (Check c : checks) require_compatible(spec, c);
    std::sort(checks.begin(), checks.end());
    checks.erase(std::unique(checks.begin(), checks.end()), checks.end());
    const auto has = [&](Check c) { return std::find(checks.begin(), checks.end(), c) != checks.end(); };

    const std::uint64_t seed = options.seed.value_or(sample_seed());
    std::vector<Point> points = options.points ? *options.points : default_samples(spec, seed);
    for (const auto& e : spec.expected)
        if (e.point && std::none_of(points.begin(), points.end(), [&](const Point& q) { return same_point(q, *e.point); }))
            points.push_back(*e.point);
    if (points.empty()) throw InputError("no sample points");
    for (const Point& p : points)
        if (p.dim() != spec.dim()) throw InputError("sample point " + format_point(coords_of(p)) + " has the wrong dimension");

    Report r;
    r.engine_version = kEngineVersion;
    r.convention_hash = convention_hash();
    r.geometry = spec.name;
    r.coords = spec.coords;
    r.seed = seed;
    r.tolerance = quantize(options.tolerance);
    for (Check c : checks) r.checks.push_back(to_string(c));
    if (spec.lambda) {
        r.lambda = quantize(*spec.lambda);
        r.classification = to_string(classify(*spec.lambda));
    }
    if (spec.mu) r.mu = quantize(*spec.mu);
    Runner run{geo, options.tolerance, r};

    std::optional<VaismanReport> vaisman;
    if (has(Check::Vaisman)) {
        try {
            vaisman = vaisman_verify(geo.g, *geo.J, *geo.u, points);
            r.vaisman_premises = VaismanPremises{quantize(vaisman->premise_J2), quantize(vaisman->premise_hermitian),
                                                 quantize(vaisman->premise_unit_u), quantize(vaisman->premise_covariant_V)};
            if (!vaisman->passed) run.fail(Check::Vaisman, std::nullopt, "a conclusion exceeds 1e-9");
        } catch (const Error& e) {
            run.fail(Check::Vaisman, std::nullopt, describe_error(e));
        }
    }
    if (has(Check::Weyl)) {
        try {
            const TensorField eta = *geo.eta;
            const WeylShift w = weyl_shift_probe(geo.g, eta, geo.F, spec.lambda.value_or(0.0), spec.mu.value_or(0.0), points);
            r.weyl = WeylSection{quantize(w.delta_lambda), quantize(w.delta_mu), quantize(w.fit_residual),
                                 quantize(w.identity_residual), quantize(w.xi_norm2)};
            run.assert_le(Check::Weyl, {}, "shift fit residual", w.fit_residual, options.tolerance);
            run.assert_le(Check::Weyl, {}, "residual equivalence", w.identity_residual, options.tolerance);
            r.paper_claims.push_back(ClaimResult{"weyl.delta_mu", std::nullopt, w.stated_delta_mu, quantize(w.delta_mu),
                                                 w.mu_matches_stated, "printed shift of mu"});
        } catch (const Error& e) {
            run.fail(Check::Weyl, std::nullopt, describe_error(e));
        }
    }

    std::vector<LambdaAnalysis> analyses;
    for (std::size_t k = 0; k < points.size(); ++k) {
        const Point& p = points[k];
        PointReport pr;
        pr.point = coords_of(p);
        const auto guarded = [&](Check c, auto&& body) {
            if (!has(c)) return;
            try {
                body();
            } catch (const Error& e) {
                run.fail(c, pr.point, describe_error(e));
            }
        };
        const bool grad = has(Check::Gradient), lam = has(Check::Lambda), ineq = has(Check::Inequalities);
        if (grad || lam || ineq) {
            try {
                run.gradient_family(p, pr, grad, lam, ineq);
                if (lam) analyses.push_back(soliton_report(geo.soliton(), p).lambda_analysis);
            } catch (const Error& e) {
                run.fail(grad ? Check::Gradient : lam ? Check::Lambda : Check::Inequalities, pr.point, describe_error(e));
            }
        }
        guarded(Check::Generalized, [&] { run.generalized(p, pr); });
        if (vaisman && k < vaisman->points.size()) {
            const VaismanPoint& vp = vaisman->points[k];
            pr.vaisman = VaismanSection{quantize(vp.soliton_norm2), quantize(vp.recurrence_error),
                                        quantize(vp.recurrence_fit), quantize(vp.torsion_error), quantize(vp.torsion_UV)};
        }
        guarded(Check::Torse, [&] { run.torse(p, pr); });
        guarded(Check::Statistical, [&] { run.statistical(p, pr); });
        guarded(Check::Weak, [&] { run.weak(p, pr); });
        guarded(Check::Shape, [&] { run.shape(p, pr); });
        r.points.push_back(std::move(pr));
    }
    if (has(Check::Lambda) && analyses.size() == points.size()) r.constant_roots11 = quantized(constant_roots(analyses));

    for (const ExpectedValue& e : spec.expected) {
        ExpectedResult er;
        er.quantity = e.quantity;
        er.expected = quantize(e.value);
        er.tolerance = quantize(e.tolerance);
        er.provenance = to_string(e.provenance);
        bool any = false, ok = true;
        double worst = -1.0;
        for (std::size_t k = 0; k < points.size(); ++k) {
            if (e.point && !same_point(points[k], *e.point)) continue;
            const std::optional<double> v = report_quantity(r, r.points[k], e.quantity);
            if (!v) {
                ok = false;
                continue;
            }
            any = true;
            const double dev = std::fabs(*v - e.value);
            if (!(dev <= e.tolerance)) ok = false;
            if (dev > worst || std::isnan(dev)) {
                worst = dev;
                er.computed = *v;
            }
        }
        if (e.point) er.point = coords_of(*e.point);
        er.passed = any && ok;
        r.expected.push_back(std::move(er));
    }
    for (const PrintedClaim& c : spec.claims) {
        ClaimResult cr;
        cr.quantity = c.quantity;
        cr.printed = quantize(c.printed);
        cr.note = c.note;
        for (std::size_t k = 0; k < points.size() && !cr.computed; ++k) {
            if (c.point && !same_point(points[k], *c.point)) continue;
            cr.computed = report_quantity(r, r.points[k], c.quantity);
        }
        if (c.point) cr.point = coords_of(*c.point);
        cr.matched = cr.computed && std::fabs(*cr.computed - c.printed) <= 1e-9 * std::max(1.0, std::fabs(c.printed));
        r.paper_claims.push_back(std::move(cr));
    }
    std::sort(r.paper_claims.begin(), r.paper_claims.end(),
              [](const ClaimResult& a, const ClaimResult& b) { return a.quantity < b.quantity; });
    r.passed = r.failures.empty() &&
               std::all_of(r.expected.begin(), r.expected.end(), [](const ExpectedResult& e) { return e.passed; });
    return r;
}

std::optional<double> report_quantity(const Report& r, const PointReport& p, const std::string& name) {
    const auto sect = [](const auto& opt, auto field) -> std::optional<double> {
        if (!opt) return std::nullopt;
        return field(*opt);
    };
    if (name == "lambda") return r.lambda;
    const auto& g = p.gradient;
    if (name == "residual6_norm2") return sect(g, [](const GradientSection& s) { return s.residual6_norm2; });
    if (name == "laplacian") return sect(g, [](const GradientSection& s) { return s.laplacian; });
    if (name == "normH2") return sect(g, [](const GradientSection& s) { return s.normH2; });
    if (name == "normRic2") return sect(g, [](const GradientSection& s) { return s.normRic2; });
    if (name == "scalarR") return sect(g, [](const GradientSection& s) { return s.scalarR; });
    if (name == "ricci.max_abs") return sect(g, [](const GradientSection& s) { return s.ricci_max_abs; });
    if (name == "gauss") return g ? g->gauss : std::nullopt;
    if (name == "hessian_eigen.min" || name == "hessian_eigen.max")
        return g ? pick(g->hessian_eigen, name.back() == 'x') : std::nullopt;

    const auto& l = p.lambda;
    if (name == "disc12") return sect(l, [](const LambdaSection& s) { return s.q11.disc; });
    if (name == "disc18") return sect(l, [](const LambdaSection& s) { return s.q17.disc; });
    if (name == "companion11") return sect(l, [](const LambdaSection& s) { return s.companion11; });
    if (name == "companion17") return sect(l, [](const LambdaSection& s) { return s.companion17; });
    if (name == "trace16_residual") return sect(l, [](const LambdaSection& s) { return s.trace16_residual; });
    if (name == "identity10_residual") return sect(l, [](const LambdaSection& s) { return s.identity10_residual; });
    for (const char* stem : {"roots11", "roots17"}) {
        const std::string s(stem);
        if (name.rfind(s + ".", 0) != 0) continue;
        if (!l) return std::nullopt;
        const QuadraticReport& q = s == "roots11" ? l->q11 : l->q17;
        const std::string tail = name.substr(s.size() + 1);
        if (tail == "count") return static_cast<double>(q.roots.size());
        if (tail == "min" || tail == "max") return pick(q.roots, tail == "max");
    }
    if (name == "margin13") return sect(p.inequalities, [](const InequalitySection& s) { return s.margin13; });
    if (name == "margin19") return sect(p.inequalities, [](const InequalitySection& s) { return s.margin19; });
    if (name == "generalized_norm2") return sect(p.generalized, [](const GeneralizedSection& s) { return s.norm2; });

    if (name == "vaisman.premise_covariant_V")
        return sect(r.vaisman_premises, [](const VaismanPremises& s) { return s.covariant_V; });
    const auto& v = p.vaisman;
    if (name == "vaisman.soliton_norm2") return sect(v, [](const VaismanSection& s) { return s.soliton_norm2; });
    if (name == "vaisman.recurrence_error") return sect(v, [](const VaismanSection& s) { return s.recurrence_error; });
    if (name == "vaisman.torsion_error") return sect(v, [](const VaismanSection& s) { return s.torsion_error; });
    if (name == "vaisman.torsion_UV") return sect(v, [](const VaismanSection& s) { return s.torsion_UV; });

    const auto& t = p.torse;
    if (name == "torse.f") return sect(t, [](const TorseSection& s) { return s.f; });
    if (name == "torse.gamma_minus_eta.max_abs") return sect(t, [](const TorseSection& s) { return s.gamma_minus_eta; });
    if (name == "torse.identity_residual") return sect(t, [](const TorseSection& s) { return s.identity_residual; });
    if (name == "eta_einstein_norm2") return sect(t, [](const TorseSection& s) { return s.eta_einstein_norm2; });
    if (name.rfind("torse.gamma[", 0) == 0 && name.back() == ']') {
        if (!t) return std::nullopt;
        const std::size_t i = std::stoul(name.substr(12, name.size() - 13));
        return i < t->gamma.size() ? std::optional<double>(t->gamma[i]) : std::nullopt;
    }

    const auto& st = p.statistical;
    if (name == "statistical.duality_residual") return sect(st, [](const StatisticalSection& s) { return s.duality_residual; });
    if (name == "statistical.mean_identity_residual")
        return sect(st, [](const StatisticalSection& s) { return s.mean_identity_residual; });
    if (name == "statistical.ricci_asymmetry") return sect(st, [](const StatisticalSection& s) { return s.ricci_asymmetry; });
    if (name == "statistical.residual_conn") return sect(st, [](const StatisticalSection& s) { return s.residual_conn; });
    if (name == "statistical.residual_dual") return sect(st, [](const StatisticalSection& s) { return s.residual_dual; });
    if (name == "statistical.residual_mean") return sect(st, [](const StatisticalSection& s) { return s.residual_mean; });

    if (name == "weak.norm2") return sect(p.weak, [](const WeakSection& s) { return s.norm2; });
    if (name == "weak.route_difference") return sect(p.weak, [](const WeakSection& s) { return s.route_difference; });
    if (name == "weak.divergence_identity") return sect(p.weak, [](const WeakSection& s) { return s.divergence_identity; });

    const auto& sh = p.shape;
    if (name == "shape_eigen.min" || name == "shape_eigen.max") return sh ? pick(sh->eigenvalues, name.back() == 'x') : std::nullopt;
    if (name == "umbilic.sigma") return sh ? sh->sigma : std::nullopt;
    if (name == "umbilic.rho") return sh ? sh->rho : std::nullopt;
    if (name == "umbilic.identity_residual")
        return sh && sh->eta_umbilical ? std::optional<double>(sh->identity_residual) : std::nullopt;
    if (name == "shape.soliton_norm2") return sh ? sh->soliton_norm2 : std::nullopt;

    if (name == "weyl.delta_lambda") return sect(r.weyl, [](const WeylSection& s) { return s.delta_lambda; });
    if (name == "weyl.delta_mu") return sect(r.weyl, [](const WeylSection& s) { return s.delta_mu; });
    throw InputError("unknown report quantity '" + name + "'");
}

std::string to_json(const Report& r) {
    return canonical_json(encode(r));
}

Report report_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("report JSON: ") + e.what());
    }
    Report r;
    try {
        decode(j, r);
    } catch (const json::exception& e) {
        throw InputError(std::string("report JSON: ") + e.what());
    }
    return r;
}

std::string to_text(const Report& r) {
    std::ostringstream os;
    char buf[256];
    os << "geometry " << r.geometry << "  [";
    for (std::size_t i = 0; i < r.coords.size(); ++i) os << (i ? ", " : "") << r.coords[i];
    os << "]  engine " << r.engine_version << "  conventions " << r.convention_hash << "\n";
    os << "checks:";
    for (const auto& c : r.checks) os << ' ' << c;
    os << "\n";
    if (r.lambda) {
        std::snprintf(buf, sizeof buf, "lambda = %.12g (%s)\n", *r.lambda, r.classification->c_str());
        os << buf;
    }
    for (const PointReport& p : r.points) {
        os << "point " << format_point(p.point) << "\n";
        if (p.gradient) {
            const auto& g = *p.gradient;
            std::snprintf(buf, sizeof buf, "  gradient: residual^2 %.3e  lap %.9g  |H|^2 %.9g  |Ric|^2 %.9g  R %.9g\n",
                          g.residual6_norm2, g.laplacian, g.normH2, g.normRic2, g.scalarR);
            os << buf;
        }
        if (p.lambda) {
            const auto& l = *p.lambda;
            os << "  lambda: roots11 {";
            for (std::size_t i = 0; i < l.q11.roots.size(); ++i) {
                std::snprintf(buf, sizeof buf, "%s%.9g", i ? ", " : "", l.q11.roots[i]);
                os << buf;
            }
            std::snprintf(buf, sizeof buf, "}  disc12 %.9g  disc18 %.9g  trace residual %.3e\n", l.q11.disc, l.q17.disc,
                          l.trace16_residual);
            os << buf;
        }
        if (p.inequalities) {
            std::snprintf(buf, sizeof buf, "  inequalities: margin13 %.9g  margin19 %.9g\n", p.inequalities->margin13,
                          p.inequalities->margin19);
            os << buf;
        }
        if (p.generalized) {
            std::snprintf(buf, sizeof buf, "  generalized (%s): residual^2 %.3e\n", p.generalized->connection.c_str(),
                          p.generalized->norm2);
            os << buf;
        }
        if (p.vaisman) {
            const auto& v = *p.vaisman;
            std::snprintf(buf, sizeof buf, "  vaisman: soliton %.3e  recurrence %.3e  torsion %.3e\n", v.soliton_norm2,
                          v.recurrence_error, v.torsion_error);
            os << buf;
        }
        if (p.torse) {
            std::snprintf(buf, sizeof buf, "  torse: f %.9g  |gamma - eta| %.3e  identity %.3e\n", p.torse->f,
                          p.torse->gamma_minus_eta, p.torse->identity_residual);
            os << buf;
        }
        if (p.statistical) {
            const auto& s = *p.statistical;
            std::snprintf(buf, sizeof buf, "  statistical: duality %.3e  mean %.3e  residuals %.3e / %.3e / %.3e\n",
                          s.duality_residual, s.mean_identity_residual, s.residual_conn, s.residual_dual, s.residual_mean);
            os << buf;
        }
        if (p.weak) {
            std::snprintf(buf, sizeof buf, "  weak: residual^2 %.9g  route %.3e  divergence %.3e\n", p.weak->norm2,
                          p.weak->route_difference, p.weak->divergence_identity);
            os << buf;
        }
        if (p.shape) {
            os << "  shape: eigenvalues {";
            for (std::size_t i = 0; i < p.shape->eigenvalues.size(); ++i) {
                std::snprintf(buf, sizeof buf, "%s%.9g", i ? ", " : "", p.shape->eigenvalues[i]);
                os << buf;
            }
            os << "}" << (p.shape->eta_umbilical ? "  eta-umbilical" : "") << "\n";
        }
    }
    if (r.constant_roots11) {
        os << "roots11 constant over the sample: {";
        for (std::size_t i = 0; i < r.constant_roots11->size(); ++i) {
            std::snprintf(buf, sizeof buf, "%s%.9g", i ? ", " : "", (*r.constant_roots11)[i]);
            os << buf;
        }
        os << "}\n";
    }
    if (r.weyl) {
        std::snprintf(buf, sizeof buf, "weyl: delta lambda %.9g  delta mu %.9g  |xi|^2 %.9g  equivalence %.3e\n",
                      r.weyl->delta_lambda, r.weyl->delta_mu, r.weyl->xi_norm2, r.weyl->identity_residual);
        os << buf;
    }
    for (const auto& e : r.expected) {
        std::snprintf(buf, sizeof buf, "expected %-28s %-8s %.12g vs %s  [%s]\n", e.quantity.c_str(),
                      e.point ? format_point(*e.point).c_str() : "all", e.expected,
                      e.computed ? std::to_string(*e.computed).c_str() : "n/a", e.passed ? "pass" : "FAIL");
        os << buf;
    }
    for (const auto& c : r.paper_claims) {
        std::snprintf(buf, sizeof buf, "claim %s: printed %.12g, computed %s (%s)\n", c.quantity.c_str(), c.printed,
                      c.computed ? std::to_string(*c.computed).c_str() : "n/a", c.matched ? "matched" : "unmatched");
        os << buf;
    }
    for (const auto& f : r.failures)
        os << "FAIL " << f.check << (f.point ? " at " + format_point(*f.point) : std::string()) << ": " << f.message << "\n";
    os << (r.passed ? "PASS" : "FAIL") << "\n";
    return os.str();
}

} // namespace solab
