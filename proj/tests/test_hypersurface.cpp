#include "doctest.h"
#include "support.hpp"

#include "solab/curvature.hpp"
#include "solab/hypersurface.hpp"

#include <cmath>

using namespace solab;
using namespace solab::testing;

namespace {

Immersion sphere() {
    return Immersion::from_strings(chart({"th", "ph"}), {"sin(th)*cos(ph)", "sin(th)*sin(ph)", "cos(th)"});
}
Immersion cylinder() { return Immersion::from_strings(chart({"u", "v"}), {"cos(u)", "sin(u)", "v"}); }
Immersion plane() { return Immersion::from_strings(chart({"x", "y"}), {"x", "y", "0"}); }

} // namespace

TEST_CASE("induced metrics") {
    const Point p{0.7, 1.9};
    const TensorAtPoint gs = induced_metric(sphere()).field().at(p);
    CHECK(gs(0, 0) == doctest::Approx(1.0));
    CHECK(std::fabs(gs(0, 1)) < 1e-15);
    CHECK(gs(1, 1) == doctest::Approx(std::sin(0.7) * std::sin(0.7)));
    const TensorAtPoint gp = induced_metric(plane()).field().at(p);
    CHECK(gp(0, 0) == 1.0);
    CHECK(gp(1, 1) == 1.0);
    CHECK(gp(0, 1) == 0.0);
    const TensorAtPoint gc = induced_metric(cylinder()).field().at(p);
    CHECK(gc(0, 0) == doctest::Approx(1.0));
    CHECK(gc(1, 1) == doctest::Approx(1.0));
    CHECK(std::fabs(gc(0, 1)) < 1e-15);
}

TEST_CASE("shape operators") {
    const Point p{1.1, 0.4};
    CHECK(shape_operator_at(plane(), p).max_abs() == 0.0);
    CHECK((shape_operator_at(sphere(), p) + TensorAtPoint::identity(2)).max_abs() < 1e-12);
    const TensorAtPoint a = shape_operator_at(cylinder(), p);
    CHECK(a(0, 0) == doctest::Approx(-1.0));
    CHECK(std::fabs(a(1, 1)) < 1e-15);
    CHECK(std::fabs(a(0, 1)) < 1e-15);
    const Immersion flipped(cylinder().chart, cylinder().components, -1);
    CHECK(shape_operator_at(flipped, p)(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("unit normal is orthogonal and unit length") {
    for (const Immersion& imm : {sphere(), cylinder(), plane()}) {
        for (const Point& p : box_points(21, 10, {0.3, 0.1}, {2.8, 6.0})) {
            const auto nu = unit_normal(imm, p);
            double len = 0.0;
            for (double v : nu) len += v * v;
            CHECK(std::fabs(std::sqrt(len) - 1.0) <= 1e-12);
            for (std::size_t i = 0; i < imm.dim(); ++i) {
                double dot = 0.0;
                for (std::size_t a = 0; a < nu.size(); ++a) dot += nu[a] * eval_jet(imm.components[a], p, 1).d(i);
                CHECK(std::fabs(dot) <= 1e-12);
            }
        }
    }
}

TEST_CASE("shape operator is self-adjoint") {
    const Immersion torus = Immersion::from_strings(
        chart({"u", "v"}), {"(2+cos(v))*cos(u)", "(2+cos(v))*sin(u)", "sin(v)"});
    for (const Point& p : box_points(5, 20, {0, 0}, {6, 6})) {
        const MetricAtPoint m = metric_at(induced_metric(torus), p, 0).metric;
        const TensorAtPoint ga = raise_lower(shape_operator_at(torus, p), m, 0, Slot::Down);
        CHECK(std::fabs(ga(0, 1) - ga(1, 0)) <= 1e-9);
    }
}

TEST_CASE("Gauss consistency: induced sphere metric has Ric = g") {
    const MetricField g = induced_metric(sphere());
    const Point p{0.8, 0.3};
    const CurvatureAtPoint k = ricci_at(levi_civita(g), g, p);
    CHECK((k.ricci - g.field().at(p)).max_abs() < 1e-8);
}

TEST_CASE("rank deficiency is reported") {
    const Immersion degenerate = Immersion::from_strings(chart({"x", "y"}), {"x", "x", "0"});
    CHECK_THROWS_AS(induced_metric(degenerate).field().at(Point{0.1, 0.2}), RankDeficient);
    CHECK_THROWS_AS(unit_normal(degenerate, Point{0.1, 0.2}), RankDeficient);
    CHECK_THROWS_AS(Immersion::from_strings(chart({"x", "y"}), {"x", "y"}), InvalidArgument);
}

TEST_CASE("shape soliton residuals") {
    const Point p{1.0, 0.5};
    CHECK(shape_soliton_residual(sphere(), TensorField::zero(2, {Slot::Up}), 1.0, p).norm2 < 1e-24);
    CHECK(shape_soliton_residual(plane(), TensorField::zero(2, {Slot::Up}), 0.0, p).norm2 == 0.0);
    CHECK(shape_soliton_residual(cylinder(), TensorField::zero(2, {Slot::Up}), 0.0, p).norm2 == doctest::Approx(1.0));
}

TEST_CASE("eta-umbilical decomposition") {
    SUBCASE("cylinder") {
        const Point p{0.3, 0.9};
        const MetricAtPoint m = metric_at(induced_metric(cylinder()), p, 0).metric;
        const EtaUmbilical e = eta_umbilical_decompose(shape_operator_at(cylinder(), p), m);
        CHECK(e.sigma == doctest::Approx(-1.0));
        CHECK(std::fabs(e.rho) < 1e-12);
        CHECK(std::fabs(e.xi(0)) < 1e-12);
        CHECK(std::fabs(std::fabs(e.xi(1)) - 1.0) < 1e-12);
        CHECK(e.reconstruction_error < 1e-9);
    }
    SUBCASE("sphere is umbilical") {
        const Point p{0.3, 0.9};
        const MetricAtPoint m = metric_at(induced_metric(sphere()), p, 0).metric;
        const EtaUmbilical e = eta_umbilical_decompose(shape_operator_at(sphere(), p), m);
        CHECK(e.umbilical);
        CHECK(e.sigma == doctest::Approx(-1.0));
        CHECK(e.rho == doctest::Approx(-1.0));
        CHECK(e.xi.max_abs() == 0.0);
    }
    SUBCASE("three distinct eigenvalues") {
        const MetricAtPoint m = MetricAtPoint::from_matrix(Matrix::identity(3));
        TensorAtPoint a(3, {Slot::Up, Slot::Down});
        a(0, 0) = 1;
        a(1, 1) = 2;
        a(2, 2) = 3;
        CHECK_THROWS_AS(eta_umbilical_decompose(a, m), NotEtaUmbilical);
    }
    SUBCASE("n = 3, one simple eigenvalue, non-trivial metric") {
        const MetricAtPoint m = MetricAtPoint::from_matrix(Matrix(3, 3, {2, 0.3, 0, 0.3, 1, 0.1, 0, 0.1, 1.5}));
        TensorAtPoint xi(3, {Slot::Up}, {0.4, -0.2, 0.7});
        xi *= 1.0 / std::sqrt(norm2(xi, m));
        const TensorAtPoint eta = raise_lower(xi, m, 0, Slot::Down);
        const double sigma = 0.6, rho = -1.3;
        const TensorAtPoint a = sigma * TensorAtPoint::identity(3) + (rho - sigma) * outer_endomorphism(eta, xi);
        const EtaUmbilical e = eta_umbilical_decompose(a, m);
        CHECK(e.sigma == doctest::Approx(sigma));
        CHECK(e.rho == doctest::Approx(rho));
        CHECK(e.reconstruction_error < 1e-9);
        // A shape soliton with this A forces nabla xi = -A - lambda I.
        const double lambda = 0.25;
        const TensorAtPoint grad_xi = -1.0 * a - lambda * TensorAtPoint::identity(3);
        CHECK((torse_forming_from_shape(e, m, lambda) - grad_xi).max_abs() < 1e-9);
    }
}
