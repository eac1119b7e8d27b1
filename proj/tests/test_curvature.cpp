#include "doctest.h"
#include "support.hpp"

#include "solab/curvature.hpp"

#include <cmath>

using namespace solab;
using namespace solab::testing;

TEST_CASE("flat Levi-Civita connection has zero curvature") {
    auto c = chart({"x", "y", "z"});
    const MetricField g = flat_metric(c);
    const CurvatureAtPoint k = ricci_at(levi_civita(g), g, Point{0.3, -1.0, 2.0});
    CHECK(k.riemann.max_abs() == 0.0);
    CHECK(k.scalar == 0.0);
}

TEST_CASE("unit 2-sphere: K = 1, R = 2, Ric = g") {
    auto c = chart({"th", "ph"});
    const MetricField g = unit_sphere(c);
    const Point p{0.9, 0.4};
    const CurvatureAtPoint k = ricci_at(levi_civita(g), g, p);
    REQUIRE(k.gauss);
    CHECK(*k.gauss == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(k.scalar == doctest::Approx(2.0).epsilon(1e-12));
    const TensorAtPoint gp = g.field().at(p);
    CHECK((k.ricci - gp).max_abs() < 1e-12);
}

TEST_CASE("cigar at the origin: K = 2, Ric = 2g, R = 4, |Ric|^2 = 8") {
    auto c = chart({"x", "y"});
    const MetricField g = cigar(c);
    const Point p{0.0, 0.0};
    const CurvatureAtPoint k = ricci_at(levi_civita(g), g, p);
    CHECK(*k.gauss == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(k.scalar == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(norm2(k.ricci, metric_at(g, p, 0).metric) == doctest::Approx(8.0).epsilon(1e-12));
    CHECK((k.ricci - 2.0 * g.field().at(p)).max_abs() < 1e-12);
}

TEST_CASE("cigar Gaussian curvature matches 2/(1+x^2+y^2) away from the origin") {
    auto c = chart({"x", "y"});
    const MetricField g = cigar(c);
    for (const Point& p : box_points(7, 10, {-1.5, -1.5}, {1.5, 1.5})) {
        const double r2 = p[0] * p[0] + p[1] * p[1];
        CHECK(*ricci_at(levi_civita(g), g, p).gauss == doctest::Approx(2.0 / (1.0 + r2)).epsilon(1e-11));
    }
}

TEST_CASE("Riemann antisymmetry is exact and first Bianchi holds for torsion-free connections") {
    auto c = chart({"x", "y", "z"});
    const MetricField g = metric(c, {"1+x^2", "x*y/3", "0", "x*y/3", "2+sin(z)", "y/5", "0", "y/5", "1+z^2/2"});
    const Point p{0.4, -0.3, 0.8};
    const TensorAtPoint r = riemann_at(levi_civita(g), p).riemann;
    double bianchi = 0.0;
    for (std::size_t l = 0; l < 3; ++l)
        for (std::size_t k = 0; k < 3; ++k)
            for (std::size_t i = 0; i < 3; ++i)
                for (std::size_t j = 0; j < 3; ++j) {
                    CHECK(r(l, k, i, j) == -r(l, k, j, i));
                    bianchi = std::max(bianchi, std::fabs(r(l, k, i, j) + r(l, i, j, k) + r(l, j, k, i)));
                }
    CHECK(bianchi < 1e-9);
}

TEST_CASE("Levi-Civita Ricci tensor is symmetric") {
    auto c = chart({"x", "y", "z"});
    const MetricField g = metric(c, {"1+x^2", "x*y/3", "0", "x*y/3", "2+sin(z)", "y/5", "0", "y/5", "1+z^2/2"});
    const TensorAtPoint ric = ricci_at(levi_civita(g), g, Point{0.1, 0.7, -0.5}).ricci;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) CHECK(std::fabs(ric(i, j) - ric(j, i)) < 1e-10);
}

TEST_CASE("sum over a frame of nabla Riem vanishes on flat space and the round sphere") {
    auto c3 = chart({"x", "y", "z"});
    const MetricField flat = flat_metric(c3);
    CHECK(div_riemann_at(levi_civita(flat), flat, Point{1.0, 2.0, 3.0}).max_abs() == 0.0);
    auto c = chart({"th", "ph"});
    const MetricField g = unit_sphere(c);
    CHECK(div_riemann_at(levi_civita(g), g, Point{1.1, 0.3}).max_abs() < 1e-12);
}

TEST_CASE("cigar: sum of nabla Riem over a frame equals minus the exterior derivative of Q") {
    auto c = chart({"x", "y"});
    const MetricField g = cigar(c);
    const ConnectionField lc = levi_civita(g);
    const Point p{0.5, 0.0};
    const TensorAtPoint div = div_riemann_at(lc, g, p);
    const TensorAtPoint dq = ext_cov_deriv_at(lc, ricci_endomorphism_field(lc, g), p);
    CHECK(div.max_abs() > 1e-3);
    CHECK((div + dq).max_abs() < 1e-8);
    for (std::size_t l = 0; l < 2; ++l)
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) CHECK(std::fabs(div(l, i, j) + div(l, j, i)) < 1e-9);
}

TEST_CASE("frame choice does not change the divergence of Riemann") {
    auto c = chart({"x", "y"});
    const MetricField g = cigar(c);
    const ConnectionField lc = levi_civita(g);
    const Point p{0.3, -0.7};
    const MetricAtPoint m = metric_at(g, p, 0).metric;
    const Matrix e = lower_triangular_inverse(m.chol).transpose();
    const double a = 0.83;
    const Matrix rot(2, 2, {std::cos(a), -std::sin(a), std::sin(a), std::cos(a)});
    const TensorAtPoint d0 = div_riemann_at(lc, g, p);
    const TensorAtPoint d1 = div_riemann_at(lc, g, p, e * rot);
    CHECK((d0 - d1).max_abs() < 1e-12);
}

TEST_CASE("exterior covariant derivative: identity is closed, Q is parallel on the sphere") {
    auto c = chart({"th", "ph"});
    const MetricField g = unit_sphere(c);
    const ConnectionField lc = levi_civita(g);
    const Point p{1.2, 2.0};
    CHECK(ext_cov_deriv_at(lc, TensorField::identity(2), p).max_abs() == 0.0);
    CHECK(ext_cov_deriv_at(lc, ricci_endomorphism_field(lc, g), p).max_abs() < 1e-12);
}

TEST_CASE("double exterior derivative of a vector field is Riem(.,.)xi on the sphere") {
    auto c = chart({"th", "ph"});
    const MetricField g = unit_sphere(c);
    const ConnectionField lc = levi_civita(g);
    const TensorField xi = vector_field(c, {"cos(ph)*th", "sin(th)+ph^2"});
    const Point p{0.8, 0.6};
    const TensorAtPoint lhs = ext_cov_deriv_at(lc, vector_derivative_endomorphism(lc, xi), p);
    const TensorAtPoint rhs = riemann_apply(riemann_at(lc, p).riemann, xi.at(p));
    CHECK((lhs - rhs).max_abs() < 1e-8);
}

TEST_CASE("exterior covariant derivative rejects other valences") {
    auto c = chart({"x", "y"});
    const MetricField g = flat_metric(c);
    CHECK_THROWS_AS(ext_cov_deriv_at(levi_civita(g), g.field(), Point{0.0, 0.0}), InvalidArgument);
}
