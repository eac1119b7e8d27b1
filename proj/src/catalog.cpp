#include "solab/catalog.hpp"

#include "solab/errors.hpp"

#include <cmath>
#include <cstdio>
#include <functional>

namespace solab {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string("(") + buf + ")";
}

std::vector<std::string> numbered(const std::string& stem, std::size_t count) {
    std::vector<std::string> out;
    for (std::size_t i = 1; i <= count; ++i) out.push_back(stem + std::to_string(i));
    return out;
}

std::vector<std::string> diagonal(const std::vector<std::string>& d) {
    const std::size_t n = d.size();
    std::vector<std::string> out(n * n, "0");
    for (std::size_t i = 0; i < n; ++i) out[i * n + i] = d[i];
    return out;
}

/// Round metric of the unit sphere S^m in angles a1..am: da1^2 + sin^2 a1 da2^2 + ...
std::vector<std::string> round_sphere_diagonal(const std::vector<std::string>& angles) {
    std::vector<std::string> d;
    std::string factor;
    for (std::size_t k = 0; k < angles.size(); ++k) {
        d.push_back(factor.empty() ? "1" : factor);
        factor += (factor.empty() ? "" : "*") + ("sin(" + angles[k] + ")^2");
    }
    return d;
}

/// Polar angles avoid the coordinate singularities; the last angle is azimuthal.
std::vector<std::pair<double, double>> angle_box(std::size_t count) {
    std::vector<std::pair<double, double>> box(count, {0.2, kPi - 0.2});
    if (count > 0) box.back() = {0.0, 2.0 * kPi};
    return box;
}

ExpectedValue expect(std::string q, double v, Provenance prov, double tol, std::optional<Point> at = std::nullopt) {
    return ExpectedValue{std::move(q), std::move(at), v, prov, tol};
}

using Params = std::map<std::string, double>;
using Builder = std::function<CatalogInstance(const Params&)>;

struct Registered {
    CatalogEntry entry;
    Builder build;
};

CatalogInstance gaussian(const Params& p) {
    const auto n = static_cast<std::size_t>(p.at("n"));
    const double lambda = p.at("lambda");
    CatalogInstance c;
    c.spec.coords = n == 1 ? std::vector<std::string>{"x"} : numbered("x", n);
    c.spec.metric = diagonal(std::vector<std::string>(n, "1"));
    std::string r2;
    for (const auto& x : c.spec.coords) r2 += (r2.empty() ? "" : "+") + x + "^2";
    c.spec.potential = "-" + num(lambda / 2.0) + "*(" + r2 + ")";
    c.spec.lambda = lambda;
    c.spec.domain.box.assign(n, {-2.0, 2.0});
    c.spec.expected = {expect("lambda", lambda, Provenance::Stated, 0.0),
                       expect("residual6_norm2", 0.0, Provenance::Stated, 1e-18),
                       expect("disc12", 0.0, Provenance::Stated, 1e-9),
                       expect("roots11.count", 1.0, Provenance::Stated, 0.0),
                       expect("roots11.min", lambda, Provenance::Stated, 1e-9)};
    c.spec.checks = {"gradient", "lambda", "inequalities"};
    return c;
}

// The only functions with vanishing Hessian on the round sphere are constants, so f = 0.
CatalogInstance einstein_sphere(const Params& p) {
    const double r = p.at("r");
    CatalogInstance c;
    c.spec.coords = {"th", "ph"};
    c.spec.metric = diagonal({num(r * r), num(r * r) + "*sin(th)^2"});
    c.spec.potential = "0";
    c.spec.lambda = -1.0 / (r * r);
    c.spec.domain.box = angle_box(2);
    const double lambda = *c.spec.lambda;
    c.spec.expected = {expect("lambda", lambda, Provenance::Stated, 0.0),
                       expect("residual6_norm2", 0.0, Provenance::Stated, 1e-18),
                       expect("gauss", 1.0 / (r * r), Provenance::Derived, 1e-9),
                       expect("margin19", 0.0, Provenance::Stated, 1e-9),
                       expect("roots17.count", 1.0, Provenance::Stated, 0.0),
                       expect("roots17.min", lambda, Provenance::Stated, 1e-9)};
    c.spec.checks = {"gradient", "lambda", "inequalities"};
    return c;
}

// Euclidean space in polar form around s = C: Ricci-flat with H_f = -g, so lambda = 1.
CatalogInstance cone(const Params& p) {
    const auto n = static_cast<std::size_t>(p.at("n"));
    const double C = p.at("C");
    CatalogInstance c;
    const auto angles = numbered("a", n - 1);
    c.spec.coords = {"s"};
    c.spec.coords.insert(c.spec.coords.end(), angles.begin(), angles.end());
    std::vector<std::string> d{"1"};
    for (const auto& a : round_sphere_diagonal(angles)) d.push_back("(" + num(C) + "-s)^2*" + a);
    c.spec.metric = diagonal(d);
    c.spec.potential = num(C) + "*s - s^2/2";
    c.spec.lambda = 1.0;
    c.spec.domain.box = {{C - 2.0, C - 0.1}};
    const auto ab = angle_box(n - 1);
    c.spec.domain.box.insert(c.spec.domain.box.end(), ab.begin(), ab.end());
    c.spec.expected = {expect("lambda", 1.0, Provenance::Derived, 0.0),
                       expect("residual6_norm2", 0.0, Provenance::Stated, 1e-16),
                       expect("hessian_eigen.min", -1.0, Provenance::Stated, 1e-9),
                       expect("hessian_eigen.max", -1.0, Provenance::Stated, 1e-9),
                       expect("ricci.max_abs", 0.0, Provenance::Stated, 1e-8)};
    c.spec.checks = {"gradient", "lambda", "inequalities"};
    return c;
}

CatalogInstance cigar(const Params&) {
    CatalogInstance c;
    c.spec.coords = {"x", "y"};
    c.spec.metric = diagonal({"1/(1+x^2+y^2)", "1/(1+x^2+y^2)"});
    c.spec.potential = "-log(1+x^2+y^2)";
    c.spec.lambda = 0.0;
    c.spec.domain.box = {{-2.0, 2.0}, {-2.0, 2.0}};
    c.spec.domain.radius = std::make_pair(0.0, 1.99);
    const Point o{0.0, 0.0};
    c.spec.points = {o};
    c.spec.expected = {expect("lambda", 0.0, Provenance::Stated, 0.0),
                       expect("residual6_norm2", 0.0, Provenance::Stated, 1e-18),
                       expect("laplacian", -4.0, Provenance::Stated, 1e-9, o),
                       expect("gauss", 2.0, Provenance::Stated, 1e-9, o),
                       expect("normH2", 8.0, Provenance::Stated, 1e-9, o),
                       expect("normRic2", 8.0, Provenance::Stated, 1e-9, o),
                       expect("scalarR", 4.0, Provenance::Stated, 1e-9, o),
                       expect("roots11.min", 0.0, Provenance::Derived, 1e-9, o),
                       expect("roots11.max", 4.0, Provenance::Derived, 1e-9, o)};
    c.spec.checks = {"gradient", "lambda", "inequalities"};
    return c;
}

CatalogInstance cylinder(const Params& p) {
    const auto n = static_cast<std::size_t>(p.at("n"));
    const double nd = static_cast<double>(n);
    CatalogInstance c;
    const auto angles = numbered("a", n - 1);
    c.spec.coords = angles;
    c.spec.coords.push_back("t");
    std::vector<std::string> d;
    for (const auto& a : round_sphere_diagonal(angles)) d.push_back(num(2.0 * (nd - 2.0)) + "*" + a);
    d.push_back("1");
    c.spec.metric = diagonal(d);
    c.spec.potential = "t^2/4";
    c.spec.lambda = -0.5;
    c.spec.domain.box = angle_box(n - 1);
    c.spec.domain.box.emplace_back(-2.0, 2.0);
    c.spec.expected = {expect("lambda", -0.5, Provenance::Stated, 0.0),
                       expect("residual6_norm2", 0.0, Provenance::Stated, 1e-18),
                       expect("laplacian", 0.5, Provenance::Stated, 1e-9),
                       expect("normH2", 0.25, Provenance::Stated, 1e-9),
                       expect("normRic2", (nd - 1.0) / 4.0, Provenance::Derived, 1e-9),
                       expect("scalarR", (nd - 1.0) / 2.0, Provenance::Derived, 1e-9)};
    c.spec.claims = {PrintedClaim{"normRic2", std::nullopt, 0.25, "printed squared Ricci norm"},
                     PrintedClaim{"scalarR", std::nullopt, (nd - 2.0) / 2.0, "printed scalar curvature"}};
    c.spec.checks = {"gradient", "lambda", "inequalities"};
    return c;
}

CatalogInstance hopf(const Params&) {
    CatalogInstance c;
    c.spec.coords = numbered("x", 4);
    const std::string inv = "1/(x1^2+x2^2+x3^2+x4^2)";
    c.spec.metric = diagonal(std::vector<std::string>(4, inv));
    // J d1 = d2, J d3 = d4; row-major J^a_i.
    c.spec.vaisman = VaismanSpec{{"0", "-1", "0", "0", "1", "0", "0", "0", "0", "0", "0", "-1", "0", "0", "1", "0"},
                                 {"-x1*" + inv, "-x2*" + inv, "-x3*" + inv, "-x4*" + inv}};
    c.spec.domain.box.assign(4, {-2.0, 2.0});
    c.spec.domain.radius = std::make_pair(0.5, 2.0);
    c.spec.sample_count = 20;
    c.spec.expected = {expect("vaisman.premise_covariant_V", 0.0, Provenance::Derived, 1e-9),
                       expect("vaisman.soliton_norm2", 0.0, Provenance::Stated, 1e-9),
                       expect("vaisman.recurrence_error", 0.0, Provenance::Stated, 1e-9),
                       expect("vaisman.torsion_error", 0.0, Provenance::Stated, 1e-9)};
    c.spec.checks = {"vaisman"};
    return c;
}

CatalogInstance statistical_flat(const Params& p) {
    const double kappa = p.at("kappa");
    CatalogInstance c;
    c.spec.coords = {"x", "y"};
    c.spec.metric = diagonal({"1", "1"});
    c.spec.connection.kind = ConnectionKind::Deform;
    c.spec.connection.coefficients.assign(8, "0");
    c.spec.connection.coefficients[0] = num(kappa);
    c.spec.vector_field = std::vector<std::string>{"x", "y"};
    c.spec.lambda = -1.0;
    c.spec.domain.box = {{-1.0, 1.0}, {-1.0, 1.0}};
    c.spec.expected = {expect("statistical.duality_residual", 0.0, Provenance::Derived, 1e-10),
                       expect("statistical.mean_identity_residual", 0.0, Provenance::Derived, 1e-12),
                       expect("statistical.ricci_asymmetry", 0.0, Provenance::Derived, 1e-12)};
    c.spec.checks = {"statistical"};
    return c;
}

CatalogInstance torse_special(const Params&) {
    CatalogInstance c;
    c.spec.coords = {"x", "y"};
    c.spec.metric = diagonal({"1", "1"});
    c.spec.vector_field = std::vector<std::string>{"-1/x", "0"};
    c.spec.lambda = 0.0;
    c.spec.mu = 0.0;
    c.spec.domain.box = {{0.5, 3.0}, {-1.0, 1.0}};
    const Point p{2.0, 0.5};
    c.spec.points = {p};
    c.spec.expected = {expect("torse.f", 0.0, Provenance::Derived, 1e-9),
                       expect("torse.gamma_minus_eta.max_abs", 0.0, Provenance::Derived, 1e-9),
                       expect("torse.gamma[0]", -0.5, Provenance::Derived, 1e-9, p),
                       expect("torse.gamma[1]", 0.0, Provenance::Derived, 1e-9, p),
                       expect("eta_einstein_norm2", 1.0 / 16.0, Provenance::Derived, 1e-9, p)};
    c.spec.checks = {"torse"};
    return c;
}

CatalogInstance sphere(const Params& p) {
    const double r = p.at("r");
    CatalogInstance c;
    c.spec.coords = {"th", "ph"};
    c.spec.immersion = ImmersionSpec{{num(r) + "*sin(th)*cos(ph)", num(r) + "*sin(th)*sin(ph)", num(r) + "*cos(th)"}, 1};
    c.spec.domain.box = angle_box(2);
    c.spec.expected = {expect("shape_eigen.min", -1.0 / r, Provenance::Derived, 1e-9),
                       expect("shape_eigen.max", -1.0 / r, Provenance::Derived, 1e-9),
                       expect("umbilic.sigma", -1.0 / r, Provenance::Derived, 1e-9),
                       expect("umbilic.rho", -1.0 / r, Provenance::Derived, 1e-9),
                       expect("umbilic.identity_residual", 0.0, Provenance::Derived, 1e-9)};
    c.spec.checks = {"shape"};
    return c;
}

CatalogInstance cylinder_surface(const Params& p) {
    const double r = p.at("r");
    CatalogInstance c;
    c.spec.coords = {"u", "v"};
    c.spec.immersion = ImmersionSpec{{num(r) + "*cos(u)", num(r) + "*sin(u)", "v"}, 1};
    c.spec.domain.box = {{0.0, 2.0 * kPi}, {-2.0, 2.0}};
    c.spec.expected = {expect("shape_eigen.min", -1.0 / r, Provenance::Derived, 1e-9),
                       expect("shape_eigen.max", 0.0, Provenance::Derived, 1e-9),
                       expect("umbilic.sigma", -1.0 / r, Provenance::Derived, 1e-9),
                       expect("umbilic.rho", 0.0, Provenance::Derived, 1e-9),
                       expect("umbilic.identity_residual", 0.0, Provenance::Derived, 1e-9)};
    c.spec.checks = {"shape"};
    return c;
}

CatalogInstance plane(const Params&) {
    CatalogInstance c;
    c.spec.coords = {"x", "y"};
    c.spec.immersion = ImmersionSpec{{"x", "y", "0"}, 1};
    c.spec.domain.box = {{-2.0, 2.0}, {-2.0, 2.0}};
    c.spec.expected = {expect("shape_eigen.min", 0.0, Provenance::Derived, 1e-9),
                       expect("shape_eigen.max", 0.0, Provenance::Derived, 1e-9),
                       expect("umbilic.identity_residual", 0.0, Provenance::Derived, 1e-9)};
    c.spec.checks = {"shape"};
    return c;
}

const std::vector<Registered>& registry() {
    static const std::vector<Registered> entries = [] {
        const ParamSpec dim_any{"n", 2, 1, 8, true};
        const ParamSpec dim_ge3{"n", 3, 3, 8, true};
        const ParamSpec radius{"r", 1, 0, 100, false, true};
        return std::vector<Registered>{
            {{"gaussian", "flat R^n with f = -(lambda/2)|x|^2", {dim_any, {"lambda", 1, -100, 100}}}, gaussian},
            {{"einstein_sphere", "round 2-sphere of radius r with f = 0", {{"n", 2, 2, 2, true}, radius}}, einstein_sphere},
            {{"cone", "ds^2 + (C-s)^2 g_round on s < C, f = Cs - s^2/2, lambda = 1",
              {dim_ge3, {"C", 1, 0, 100, false, true}}},
             cone},
            {{"cigar", "(dx^2+dy^2)/(1+x^2+y^2), f = -log(1+x^2+y^2), steady", {}}, cigar},
            {{"cylinder", "2(n-2) g_round(S^{n-1}) + dt^2, f = t^2/4, lambda = -1/2", {dim_ge3}}, cylinder},
            {{"hopf", "R^4 minus the origin with g = delta/|x|^2, standard J, Lee form", {}}, hopf},
            {{"statistical_flat", "flat plane with Gamma^1_11 = kappa added to Levi-Civita", {{"kappa", 1, 0, 100}}},
             statistical_flat},
            {{"torse_special", "flat half-plane x > 0 with xi = -(1/x) d_x", {}}, torse_special},
            {{"sphere", "round sphere of radius r in R^3", {radius}}, sphere},
            {{"cylinder_surface", "circular cylinder of radius r in R^3", {radius}}, cylinder_surface},
            {{"plane", "the plane z = 0 in R^3", {}}, plane},
        };
    }();
    return entries;
}

std::string format_param(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

} // namespace

const std::vector<CatalogEntry>& catalog_entries() {
    static const std::vector<CatalogEntry> out = [] {
        std::vector<CatalogEntry> v;
        for (const auto& r : registry()) v.push_back(r.entry);
        return v;
    }();
    return out;
}

CatalogInstance catalog_get(const std::string& name, const std::map<std::string, double>& params) {
    const Registered* reg = nullptr;
    for (const auto& r : registry())
        if (r.entry.name == name) reg = &r;
    if (reg == nullptr) throw UnknownEntry("unknown catalog entry '" + name + "'");
    Params full;
    for (const auto& [key, value] : params) {
        bool known = false;
        for (const ParamSpec& ps : reg->entry.params) known = known || ps.name == key;
        if (!known) throw ParamOutOfRange(name + ": unknown parameter '" + key + "'");
    }
    std::string invocation = name + "(";
    for (const ParamSpec& ps : reg->entry.params) {
        const auto it = params.find(ps.name);
        const double v = it == params.end() ? ps.default_value : it->second;
        const bool below = ps.min_open ? !(v > ps.min) : !(v >= ps.min);
        if (!std::isfinite(v) || below || v > ps.max || (ps.integer && v != std::floor(v))) {
            throw ParamOutOfRange(name + ": parameter " + ps.name + " = " + format_param(v) + " outside " +
                                  (ps.min_open ? "(" : "[") + format_param(ps.min) + ", " + format_param(ps.max) + "]" +
                                  (ps.integer ? " (integer)" : ""));
        }
        full[ps.name] = v;
        invocation += (invocation.back() == '(' ? "" : ", ") + format_param(v);
    }
    invocation += ")";
    CatalogInstance inst = reg->build(full);
    inst.name = name;
    inst.invocation = invocation;
    inst.params = full;
    inst.spec.name = invocation;
    return inst;
}

CatalogInstance catalog_get(const std::string& invocation) {
    const std::string text = trim(invocation);
    const auto open = text.find('(');
    const std::string name = trim(text.substr(0, open));
    if (name.empty()) throw InputError("catalog reference '" + invocation + "' has no name");
    std::map<std::string, double> params;
    if (open != std::string::npos) {
        if (text.back() != ')') throw InputError("catalog reference '" + invocation + "': missing ')'");
        const std::string body = trim(text.substr(open + 1, text.size() - open - 2));
        const CatalogEntry* entry = nullptr;
        for (const auto& e : catalog_entries())
            if (e.name == name) entry = &e;
        if (entry == nullptr) throw UnknownEntry("unknown catalog entry '" + name + "'");
        const std::vector<ParamSpec>& specs = entry->params;
        std::size_t start = 0, position = 0;
        while (!body.empty() && start <= body.size()) {
            const std::size_t comma = std::min(body.find(',', start), body.size());
            const std::string part = trim(body.substr(start, comma - start));
            const auto eq = part.find('=');
            std::string key;
            std::string value = part;
            if (eq != std::string::npos) {
                key = trim(part.substr(0, eq));
                value = trim(part.substr(eq + 1));
            } else {
                if (position >= specs.size())
                    throw ParamOutOfRange(name + ": too many parameters in '" + invocation + "'");
                key = specs[position].name;
            }
            ++position;
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(value, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used == 0 || used != value.size()) throw InputError("catalog reference '" + invocation + "': bad number '" + value + "'");
            if (!params.emplace(key, v).second) throw InputError("catalog reference '" + invocation + "': " + key + " given twice");
            start = comma + 1;
        }
    }
    return catalog_get(name, params);
}

} // namespace solab
