#include "doctest.h"
#include "support.hpp"

#include "solab/connection.hpp"
#include "solab/random_expr.hpp"

#include <cmath>

using namespace solab;
using namespace solab::testing;

namespace {

double max_diff(const TensorAtPoint& a, const TensorAtPoint& b) { return (a - b).max_abs(); }

/// A random metric g = I + small smooth symmetric perturbation.
MetricField random_metric(std::mt19937_64& rng, const ChartPtr& c) {
    const std::size_t n = c->dim();
    std::vector<std::string> comps(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            const std::string pert = "0.2*sin(" + random_expression(rng, c->coords, 1) + ")";
            comps[i * n + j] = comps[j * n + i] = (i == j ? "2 + " : "") + pert;
        }
    return metric(c, comps);
}

TensorField random_covector(std::mt19937_64& rng, const ChartPtr& c) {
    std::vector<std::string> comps;
    for (std::size_t i = 0; i < c->dim(); ++i) comps.push_back(random_expression(rng, c->coords, 1));
    return covector_field(c, comps);
}

} // namespace

TEST_CASE("Levi-Civita examples") {
    const auto c = chart({"x", "y"});
    CHECK(levi_civita(flat_metric(c)).at(Point{1.0, 2.0}).max_abs() == 0.0);
    CHECK(levi_civita(cigar(c)).at(Point{0.0, 0.0}).max_abs() == 0.0);
    const auto s = chart({"th", "ph"});
    const TensorAtPoint g = levi_civita(unit_sphere(s)).at(Point{M_PI / 3, 0.2});
    CHECK(g(0, 1, 1) == doctest::Approx(-std::sqrt(3.0) / 4.0).epsilon(1e-14));
    CHECK(g(1, 0, 1) == doctest::Approx(std::cos(M_PI / 3) / std::sin(M_PI / 3)).epsilon(1e-14));
    CHECK(levi_civita(unit_sphere(s)).symmetric());
}

TEST_CASE("Levi-Civita Christoffels agree with a finite-difference metric oracle") {
    const auto c = chart({"x", "y"});
    const std::vector<std::string> comps{"1+x^2*y", "sin(x)/3", "sin(x)/3", "2+cos(y)"};
    const MetricField g = metric(c, comps);
    const Point p{0.4, 0.7};
    const TensorAtPoint gamma = levi_civita(g).at(p);
    const MetricAtPoint m = metric_at(g, p, 0).metric;
    auto dg = [&](std::size_t i, std::size_t j, std::size_t k) {
        return finite_diff_oracle(ScalarField(c, comps[i * 2 + j]), p, {k});
    };
    for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) {
                double v = 0.0;
                for (std::size_t l = 0; l < 2; ++l) v += 0.5 * m.g_inv(k, l) * (dg(j, l, i) + dg(i, l, j) - dg(i, j, l));
                CHECK(gamma(k, i, j) == doctest::Approx(v).epsilon(1e-7));
            }
}

TEST_CASE("metricity of Levi-Civita") {
    const auto c = chart({"x", "y"});
    const MetricField g = cigar(c);
    for (const Point& p : box_points(1, 5, {-1, -1}, {1, 1})) CHECK(cov_deriv_at(levi_civita(g), g.field(), p).max_abs() < 1e-10);
}

TEST_CASE("position field has identity covariant derivative on flat space") {
    const auto c = chart({"x", "y"});
    const TensorAtPoint m =
        vector_derivative_endomorphism(levi_civita(flat_metric(c)), vector_field(c, {"x", "y"})).at(Point{0.3, 0.8});
    CHECK(max_diff(m, TensorAtPoint::identity(2)) == 0.0);
}

TEST_CASE("Weyl connection components on the flat plane with eta = dx") {
    const auto c = chart({"x", "y"});
    const MetricField g = flat_metric(c);
    const ConnectionField w = weyl_connection(g, covector_field(c, {"1", "0"}));
    const TensorAtPoint t = w.at(Point{0.5, -0.5});
    // (k, i, j) = Gamma^k_ij, zero-based.
    CHECK(t(0, 0, 0) == -0.5);
    CHECK(t(1, 1, 0) == -0.5);
    CHECK(t(0, 1, 1) == 0.5);
    CHECK(t(1, 0, 1) == -0.5);
    CHECK(t(1, 0, 0) == 0.0);
    CHECK(w.symmetric());
}

TEST_CASE("Weyl connection is torsion-free and recurrent with factor eta") {
    std::mt19937_64 rng(0x5EED);
    for (int trial = 0; trial < 50; ++trial) {
        const auto c = trial % 2 ? chart({"x", "y", "z"}) : chart({"x", "y"});
        const MetricField g = random_metric(rng, c);
        const TensorField eta = random_covector(rng, c);
        const ConnectionField w = weyl_connection(g, eta);
        std::vector<double> lo(c->dim(), -1.0), hi(c->dim(), 1.0);
        const Point p = box_points(rng(), 1, lo, hi)[0];
        CHECK(torsion_at(w, p).max_abs() <= 1e-10);
        const Recurrence r = recurrence_factor(w, g, p);
        CHECK(r.recurrent);
        const TensorAtPoint e = eta.at(p);
        for (std::size_t k = 0; k < c->dim(); ++k) CHECK(std::fabs(r.eta[k] - e(k)) <= 1e-9);
    }
}

TEST_CASE("deformation with the Weyl term set reproduces weyl_connection; empty terms return the base") {
    const auto c = chart({"x", "y"});
    const MetricField g = cigar(c);
    const TensorField eta = covector_field(c, {"y", "x^2"});
    const ConnectionField d = deform_connection(levi_civita(g), {DeformTerm::alpha_tensor_F(-0.5, eta),
                                                                 DeformTerm::id_tensor_alpha(-0.5, eta),
                                                                 DeformTerm::g_tensor_xi(0.5, g, sharp(g, eta))});
    const Point p{0.2, 0.9};
    CHECK(max_diff(d.at(p), weyl_connection(g, eta).at(p)) == 0.0);
    const ConnectionField lc = levi_civita(g);
    CHECK(deform_connection(lc, {}).same_as(lc));
    CHECK_FALSE(deform_connection(lc, {DeformTerm::alpha_tensor_F(1.0, eta)}).symmetric());
    CHECK_THROWS_AS(deform_connection(lc, {DeformTerm::alpha_tensor_F(1.0, vector_field(c, {"1", "0"}))}),
                    InvalidArgument);
    const auto other = chart({"a", "b", "c"});
    CHECK_THROWS_AS(deform_connection(lc, {DeformTerm::alpha_tensor_F(1.0, covector_field(other, {"1", "0", "0"}))}),
                    InvalidArgument);
}

TEST_CASE("Levi-Civita is recurrent with zero factor; a skewed connection is not recurrent") {
    const auto c = chart({"x", "y"});
    const MetricField g = flat_metric(c);
    const Recurrence r = recurrence_factor(levi_civita(g), g, Point{0.1, 0.2});
    CHECK(r.recurrent);
    CHECK(r.eta == std::vector<double>{0.0, 0.0});
    TensorAtPoint d(2, {Slot::Up, Slot::Down, Slot::Down});
    d(0, 0, 0) = 1.0;
    const Recurrence s = recurrence_factor(add_coefficients(levi_civita(g), TensorField::constant(d), "k"), g, Point{0.1, 0.2});
    CHECK_FALSE(s.recurrent);
}

TEST_CASE("Leibniz rule") {
    const auto c = chart({"x", "y"});
    const MetricField g = cigar(c);
    const ConnectionField w = weyl_connection(g, covector_field(c, {"1", "y"}));
    const ScalarField a(c, "exp(x)*cos(y)");
    const TensorField y = vector_field(c, {"x*y", "1+x"});
    const TensorField ay = vector_field(c, {"exp(x)*cos(y)*x*y", "exp(x)*cos(y)*(1+x)"});
    const Point p{0.3, 0.6};
    const TensorAtPoint lhs = cov_deriv_at(w, ay, p);  // (m, a)
    const TensorAtPoint rhs_y = cov_deriv_at(w, y, p);
    const Jet3 aj = a.eval_jet(p, 1);
    const TensorAtPoint yv = y.at(p);
    for (std::size_t m = 0; m < 2; ++m)
        for (std::size_t k = 0; k < 2; ++k)
            CHECK(std::fabs(lhs(m, k) - (aj.d(m) * yv(k) + aj.value() * rhs_y(m, k))) <= 1e-9);
}

TEST_CASE("dual connections") {
    const auto c = chart({"x", "y"});
    const MetricField g = flat_metric(c);
    const ConnectionField lc = levi_civita(g);
    CHECK(dual_connection(g, lc).same_as(lc));
    for (double kappa : {0.5, 1.0, 2.0}) {
        TensorAtPoint d(2, {Slot::Up, Slot::Down, Slot::Down});
        d(0, 0, 0) = kappa;
        const ConnectionField conn = add_coefficients(lc, TensorField::constant(d), "stat");
        const ConnectionField dual = dual_connection(g, conn);
        const Point p{0.4, 0.1};
        CHECK(max_diff(dual.at(p), lc.at(p) - d) <= 1e-12);
        CHECK(duality_residual(g, conn, dual, p) <= 1e-10);
        CHECK(max_diff(mean_connection(conn, dual).at(p), lc.at(p)) <= 1e-12);
        CHECK(max_diff(dual_connection(g, dual).at(p), conn.at(p)) <= 1e-10);
    }
}

TEST_CASE("dual of a Weyl connection on a curved metric") {
    std::mt19937_64 rng(12);
    const auto c = chart({"x", "y"});
    const MetricField g = random_metric(rng, c);
    const ConnectionField w = weyl_connection(g, random_covector(rng, c));
    const ConnectionField dual = dual_connection(g, w);
    for (const Point& p : box_points(13, 20, {-1, -1}, {1, 1})) {
        CHECK(duality_residual(g, w, dual, p) <= 1e-10);
        CHECK(max_diff(dual_connection(g, dual).at(p), w.at(p)) <= 1e-10);
        // The mean is metric; it carries torsion because nabla g is not totally symmetric here.
        CHECK(cov_deriv_at(mean_connection(w, dual), g.field(), p).max_abs() <= 1e-10);
    }
}

TEST_CASE("torsion of an asymmetric connection") {
    const auto c = chart({"x", "y"});
    TensorAtPoint d(2, {Slot::Up, Slot::Down, Slot::Down});
    d(1, 0, 1) = 3.0;
    const ConnectionField conn = explicit_connection(TensorField::constant(d));
    const TensorAtPoint t = torsion_at(conn, Point{0.0, 0.0});
    CHECK(t(1, 0, 1) == 3.0);
    CHECK(t(1, 1, 0) == -3.0);
    CHECK_THROWS_AS(explicit_connection(TensorField::zero(2, {Slot::Up, Slot::Down})), InvalidArgument);
}
