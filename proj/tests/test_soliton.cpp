#include "doctest.h"
#include "support.hpp"

#include "solab/soliton.hpp"

#include <cmath>

using namespace solab;
using namespace solab::testing;

namespace {

SolitonData gradient_data(const MetricField& g, const ChartPtr& c, const std::string& f, double lambda) {
    SolitonData d;
    d.g = g;
    d.f = ScalarField(c, f);
    d.lambda = lambda;
    return d;
}

MetricField cylinder3(const ChartPtr& c) {
    return metric(c, {"2", "0", "0", "0", "2*sin(th)^2", "0", "0", "0", "1"});
}

TensorField standard_J(const ChartPtr& c) {
    // J d1 = d2, J d3 = d4; components (a, i) = J^a_i.
    return TensorField::from_strings(c, {Slot::Up, Slot::Down},
                                     {"0", "-1", "0", "0", "1", "0", "0", "0", "0", "0", "0", "-1", "0", "0", "1", "0"});
}

} // namespace

TEST_CASE("cigar is a steady gradient soliton") {
    auto c = chart({"x", "y"});
    const SolitonData d = gradient_data(cigar(c), c, "-log(1+x^2+y^2)", 0.0);
    for (const Point& p : box_points(11, 8, {-1.4, -1.4}, {1.4, 1.4})) CHECK(gradient_residual(d, p).norm2 <= 1e-18);
}

TEST_CASE("cigar report at the origin") {
    auto c = chart({"x", "y"});
    const SolitonReport r = soliton_report(gradient_data(cigar(c), c, "-log(1+x^2+y^2)", 0.0), Point{0.0, 0.0});
    CHECK(r.laplacian == doctest::Approx(-4.0).epsilon(1e-12));
    CHECK(r.normH2 == doctest::Approx(8.0).epsilon(1e-12));
    CHECK(r.normRic2 == doctest::Approx(8.0).epsilon(1e-12));
    CHECK(r.scalarR == doctest::Approx(4.0).epsilon(1e-12));
    REQUIRE(r.lambda_analysis.q11.roots.size() == 2);
    CHECK(std::fabs(r.lambda_analysis.q11.roots[0]) < 1e-12);
    CHECK(r.lambda_analysis.q11.roots[1] == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(r.lambda_analysis.q11.disc == doctest::Approx(16.0).epsilon(1e-12));
    CHECK(r.margin13 == doctest::Approx(8.0).epsilon(1e-12));
    CHECK(r.margin19 == doctest::Approx(8.0).epsilon(1e-12));
    CHECK(r.classification == Classification::Steady);
    CHECK(r.residual6_norm2 <= 1e-18);
}

TEST_CASE("cylinder n = 3 is a shrinking soliton with lambda = -1/2") {
    auto c = chart({"th", "ph", "t"});
    const SolitonData d = gradient_data(cylinder3(c), c, "t^2/4", -0.5);
    const Point p{1.1, 0.4, 0.7};
    CHECK(gradient_residual(d, p).norm2 <= 1e-18);
    const SolitonReport r = soliton_report(d, p);
    CHECK(r.laplacian == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.normH2 == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(r.normRic2 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.scalarR == doctest::Approx(1.0).epsilon(1e-12));
    REQUIRE(r.lambda_analysis.q11.roots.size() == 2);
    CHECK(r.lambda_analysis.q11.roots[0] == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(r.lambda_analysis.q11.roots[1] == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
    CHECK(r.lambda_analysis.q11.disc == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::fabs(r.lambda_analysis.trace16_residual) < 1e-12);
    CHECK(r.margin19 == doctest::Approx(1.0 / 12.0).epsilon(1e-12));
    CHECK(r.classification == Classification::Shrinking);
}

TEST_CASE("unit sphere with f = 0, lambda = 0: residual is Ric = g") {
    auto c = chart({"th", "ph"});
    const SolitonData d = gradient_data(unit_sphere(c), c, "0", 0.0);
    const Residual r = gradient_residual(d, Point{0.7, 1.0});
    CHECK(r.norm2 == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("Gaussian soliton has a double root") {
    auto c = chart({"x", "y"});
    const SolitonData d = gradient_data(flat_metric(c), c, "-(1/2)*(x^2+y^2)", 1.0);
    const SolitonReport r = soliton_report(d, Point{0.3, -2.0});
    CHECK(r.laplacian == doctest::Approx(-2.0));
    CHECK(r.normH2 == doctest::Approx(2.0));
    CHECK(r.lambda_analysis.q11.double_root);
    CHECK(r.lambda_analysis.q11.roots.size() == 1);
    CHECK(r.lambda_analysis.q11.roots[0] == doctest::Approx(1.0));
    CHECK(std::fabs(r.lambda_analysis.q11.disc) < 1e-12);
    CHECK(r.margin19 == doctest::Approx(2.0));
    CHECK(r.classification == Classification::Expanding);
}

TEST_CASE("Einstein sphere: margin19 vanishes and -1 is a double root of q17") {
    auto c = chart({"th", "ph"});
    const SolitonReport r = soliton_report(gradient_data(unit_sphere(c), c, "0", -1.0), Point{1.0, 0.2});
    CHECK(std::fabs(r.margin19) < 1e-12);
    CHECK(r.lambda_analysis.q17.double_root);
    CHECK(r.lambda_analysis.q17.roots[0] == doctest::Approx(-1.0));
    CHECK(r.residual6_norm2 < 1e-20);
}

TEST_CASE("identity residual, trace identity and margins on the cigar") {
    auto c = chart({"x", "y"});
    const SolitonData d = gradient_data(cigar(c), c, "-log(1+x^2+y^2)", 0.0);
    for (const Point& p : box_points(3, 20, {-1.4, -1.4}, {1.4, 1.4})) {
        const SolitonReport r = soliton_report(d, p);
        CHECK(std::fabs(r.identity10_residual) < 1e-9);
        CHECK(std::fabs(r.lambda_analysis.trace16_residual) < 1e-9);
        CHECK(r.double20[0] <= r.double20[1] + 1e-9);
        CHECK(r.double20[1] <= r.double20[2] + 1e-9);
        CHECK(r.lambda_analysis.q11.disc >= -1e-9);
        CHECK(r.lambda_analysis.q17.disc >= -1e-9);
    }
}

TEST_CASE("eigen-frame reconstructs the Hessian endomorphism") {
    auto c = chart({"x", "y"});
    const MetricField g = cigar(c);
    const ScalarField f(c, "-log(1+x^2+y^2)+x*y/3");
    const Point p{0.4, 0.9};
    const MetricAtPoint m = metric_at(g, p, 0).metric;
    const TensorAtPoint h = hessian_at(g, f, p);
    const FrameSpectrum s = generalized_eigen(h, m);
    const TensorAtPoint hf = raise_lower(h, m, 0, Slot::Up);
    TensorAtPoint rebuilt(2, {Slot::Up, Slot::Down});
    for (std::size_t k = 0; k < 2; ++k) {
        TensorAtPoint e(2, {Slot::Up}, s.frame[k]);
        rebuilt += s.eigenvalues[k] * outer_endomorphism(raise_lower(e, m, 0, Slot::Down), e);
    }
    CHECK((rebuilt - hf).max_abs() < 1e-9);
}

TEST_CASE("constant roots across points are promoted") {
    auto c = chart({"x", "y"});
    const SolitonData d = gradient_data(cigar(c), c, "-log(1+x^2+y^2)", 0.0);
    std::vector<LambdaAnalysis> per;
    for (const Point& p : box_points(5, 6, {-1.0, -1.0}, {1.0, 1.0})) per.push_back(soliton_report(d, p).lambda_analysis);
    const auto roots = constant_roots(per);
    REQUIRE(roots.size() == 1);
    CHECK(std::fabs(roots[0]) < 1e-10);
}

TEST_CASE("generalized residual reduces to the gradient residual") {
    auto c = chart({"x", "y"});
    const SolitonData d = gradient_data(cigar(c), c, "-log(1+x^2+y^2)+x/5", 0.3);
    const Point p{0.2, -0.6};
    const MetricAtPoint m = metric_at(d.g, p, 0).metric;
    const TensorAtPoint raised = raise_lower(gradient_residual(d, p).tensor, m, 0, Slot::Up);
    CHECK((generalized_residual(d, p).tensor - raised).max_abs() < 1e-10);
}

TEST_CASE("Gaussian data satisfies the Ricci-soliton form of the generalized equation") {
    auto c = chart({"x", "y", "z"});
    const SolitonData d = gradient_data(flat_metric(c), c, "-(0.7/2)*(x^2+y^2+z^2)", 0.7);
    CHECK(generalized_residual(d, Point{1.0, -0.5, 2.0}).norm2 <= 1e-18);
}

TEST_CASE("Weyl connection of dx on the flat plane: nabla~ d_x = -I/2") {
    auto c = chart({"x", "y"});
    const MetricField g = flat_metric(c);
    const TensorField eta = covector_field(c, {"1", "0"});
    SolitonData d;
    d.g = g;
    d.xi = vector_field(c, {"1", "0"});
    d.F = TensorField::zero(2, {Slot::Up, Slot::Down});
    d.lambda = 0.5;
    d.connection = weyl_connection(g, eta);
    CHECK(generalized_residual(d, Point{0.4, 1.3}).norm2 < 1e-30);
}

TEST_CASE("torse-forming fits") {
    auto c = chart({"x", "y"});
    const MetricField g = flat_metric(c);
    SUBCASE("position field is concircular") {
        const TorseForming t = torse_forming_check(g, vector_field(c, {"x", "y"}), box_points(1, 5, {0.5, 0.5}, {2, 2}));
        for (std::size_t k = 0; k < t.f.size(); ++k) {
            CHECK(t.f[k] == doctest::Approx(1.0));
            CHECK(t.gamma[k].max_abs() < 1e-12);
        }
    }
    SUBCASE("-(1/x) d_x is special torse-forming") {
        const auto pts = box_points(2, 5, {0.5, -1}, {3, 1});
        const TorseForming t = torse_forming_check(g, vector_field(c, {"-1/x", "0"}), pts);
        for (std::size_t k = 0; k < pts.size(); ++k) {
            CHECK(std::fabs(t.f[k]) < 1e-12);
            CHECK(t.gamma[k](0) == doctest::Approx(-1.0 / pts[k][0]));
            CHECK(std::fabs(t.gamma[k](1)) < 1e-12);
        }
    }
    SUBCASE("x d_y fits with gamma = dx/x away from x = 0") {
        const TorseForming t = torse_forming_check(g, vector_field(c, {"0", "x"}), {Point{2.0, 1.0}});
        CHECK(std::fabs(t.f[0]) < 1e-12);
        CHECK(t.gamma[0](0) == doctest::Approx(0.5));
    }
    SUBCASE("rotation field is not torse-forming") {
        CHECK_THROWS_AS(torse_forming_check(g, vector_field(c, {"-y", "x"}), {Point{1.0, 0.5}}), NotTorseForming);
    }
    SUBCASE("zero vector") {
        CHECK_THROWS_AS(torse_forming_check(g, vector_field(c, {"x", "y"}), {Point{0.0, 0.0}}), ZeroVector);
    }
}

TEST_CASE("eta-Einstein residual") {
    SUBCASE("Einstein sphere") {
        auto c = chart({"th", "ph"});
        const Residual r =
            eta_einstein_residual(unit_sphere(c), TensorField::zero(2, {Slot::Up}), -1.0, 0.0, Point{1.0, 0.3});
        CHECK(r.norm2 < 1e-24);
    }
    SUBCASE("flat, xi = -(1/x) d_x") {
        auto c = chart({"x", "y"});
        const double x = 1.7;
        const Residual r = eta_einstein_residual(flat_metric(c), vector_field(c, {"-1/x", "0"}), 0.0, 0.0, Point{x, 0.2});
        CHECK(r.norm2 == doctest::Approx(1.0 / std::pow(x, 4)));
    }
}

TEST_CASE("Vaisman: Hopf chart satisfies the premises and the conclusions") {
    auto c = chart({"x1", "x2", "x3", "x4"});
    const std::string inv = "1/(x1^2+x2^2+x3^2+x4^2)";
    const MetricField g = metric(c, {inv, "0", "0", "0", "0", inv, "0", "0", "0", "0", inv, "0", "0", "0", "0", inv});
    const TensorField u = covector_field(c, {"-x1*" + inv, "-x2*" + inv, "-x3*" + inv, "-x4*" + inv});
    const auto pts = box_points(17, 10, {0.3, -0.8, 0.2, -0.6}, {0.9, 0.5, 1.0, 0.7});
    const VaismanReport r = vaisman_verify(g, standard_J(c), u, pts);
    CHECK(r.premise_covariant_V < 1e-9);
    CHECK(r.passed);
    for (const auto& vp : r.points) {
        CHECK(vp.soliton_norm2 <= 1e-9);
        CHECK(vp.recurrence_error <= 1e-9);
        CHECK(vp.torsion_error <= 1e-9);
        CHECK(vp.torsion_UV <= 1e-9);
    }
}

TEST_CASE("Vaisman: flat R^4 with u = dx1 violates the covariant derivative premise") {
    auto c = chart({"x1", "x2", "x3", "x4"});
    const TensorField u = covector_field(c, {"1", "0", "0", "0"});
    try {
        vaisman_verify(flat_metric(c), standard_J(c), u, {Point{1.0, 0.0, 0.0, 0.0}});
        FAIL("expected PremiseViolated");
    } catch (const PremiseViolated& e) {
        CHECK(e.premise() == "nabla_X V = u(X) V - v(X) U - JX");
    }
}

TEST_CASE("Weyl shift probe") {
    SUBCASE("flat, eta = dx") {
        auto c = chart({"x", "y"});
        const WeylShift w = weyl_shift_probe(flat_metric(c), covector_field(c, {"1", "0"}), std::nullopt, 0.2, 0.1,
                                             box_points(4, 5, {-1, -1}, {1, 1}));
        CHECK(w.delta_lambda == doctest::Approx(-0.5));
        CHECK(std::fabs(w.delta_mu) < 1e-12);
        CHECK(w.fit_residual <= 1e-12);
        CHECK(w.identity_residual <= 1e-9);
        CHECK_FALSE(w.mu_matches_stated);
    }
    SUBCASE("eta = 0") {
        auto c = chart({"x", "y"});
        const WeylShift w = weyl_shift_probe(flat_metric(c), TensorField::zero(2, {Slot::Down}), std::nullopt, 0.0, 0.0,
                                             box_points(4, 3, {-1, -1}, {1, 1}));
        CHECK(w.delta_lambda == 0.0);
        CHECK(w.delta_mu == 0.0);
    }
    SUBCASE("cylinder, eta = dt") {
        auto c = chart({"th", "ph", "t"});
        const WeylShift w = weyl_shift_probe(cylinder3(c), covector_field(c, {"0", "0", "1"}), std::nullopt, -0.5, 0.0,
                                             box_points(4, 5, {0.4, 0, -1}, {2.6, 6, 1}));
        CHECK(w.delta_lambda == doctest::Approx(-0.5));
        CHECK(std::fabs(w.delta_mu) < 1e-10);
        CHECK(w.identity_residual <= 1e-9);
    }
    SUBCASE("non-constant norm") {
        auto c = chart({"x", "y"});
        CHECK_THROWS_AS(weyl_shift_probe(flat_metric(c), covector_field(c, {"x", "0"}), std::nullopt, 0, 0,
                                         {Point{1, 0}, Point{2, 0}}),
                        NonConstantNorm);
    }
}

TEST_CASE("statistical structures") {
    auto c = chart({"x", "y"});
    const MetricField g = flat_metric(c);
    const auto pts = box_points(9, 4, {-1, -1}, {1, 1});
    SUBCASE("self-dual cylinder") {
        auto c3 = chart({"th", "ph", "t"});
        const MetricField gc = cylinder3(c3);
        const TensorField xi = gradient(gc, ScalarField(c3, "t^2/4"));
        const StatisticalReport r =
            statistical_check(gc, levi_civita(gc), xi, -0.5, box_points(9, 4, {0.4, 0, -1}, {2.6, 6, 1}));
        CHECK(r.self_dual);
        for (const auto& sp : r.points) {
            CHECK(sp.residual_conn <= 1e-9);
            CHECK(sp.residual_dual == sp.residual_conn);
            CHECK(sp.residual_mean == sp.residual_conn);
        }
        CHECK(r.statistical_soliton);
    }
    SUBCASE("flat with Gamma^1_11 = kappa") {
        TensorAtPoint d(2, {Slot::Up, Slot::Down, Slot::Down});
        d(0, 0, 0) = 1.0;
        const ConnectionField conn = add_coefficients(levi_civita(g), TensorField::constant(d), "stat");
        const ConnectionField dual = dual_connection(g, conn);
        const Point p{0.3, 0.2};
        CHECK(dual.at(p)(0, 0, 0) == doctest::Approx(-1.0));
        CHECK(duality_residual(g, conn, dual, p) <= 1e-10);
        const StatisticalReport r = statistical_check(g, conn, TensorField::zero(2, {Slot::Up}), 1.0, pts);
        CHECK(r.ricci_symmetric);
        CHECK_FALSE(r.statistical_soliton);
        for (const auto& sp : r.points) {
            CHECK(sp.residual_conn == doctest::Approx(2.0));
            CHECK(sp.residual_dual == doctest::Approx(2.0));
            CHECK(sp.mean_identity_residual <= 1e-12);
        }
    }
    SUBCASE("torsion is rejected") {
        TensorAtPoint d(2, {Slot::Up, Slot::Down, Slot::Down});
        d(0, 0, 1) = 1.0;
        const ConnectionField conn = add_coefficients(levi_civita(g), TensorField::constant(d), "twisted");
        CHECK_THROWS_AS(statistical_check(g, conn, TensorField::zero(2, {Slot::Up}), 0.0, pts), NotTorsionFree);
    }
}

TEST_CASE("weak soliton residual") {
    SUBCASE("flat") {
        auto c = chart({"x", "y"});
        const WeakResidual w = weak_soliton_residual(flat_metric(c), vector_field(c, {"x*y", "sin(x)"}), Point{0.3, 0.4});
        CHECK(w.norm2 == 0.0);
    }
    SUBCASE("unit sphere, unit xi") {
        auto c = chart({"th", "ph"});
        const WeakResidual w = weak_soliton_residual(unit_sphere(c), vector_field(c, {"1", "0"}), Point{0.9, 0.1});
        CHECK(w.norm2 == doctest::Approx(2.0).epsilon(1e-10));
        CHECK(w.route_difference < 1e-8);
    }
    SUBCASE("unit sphere, xi = 0") {
        auto c = chart({"th", "ph"});
        const WeakResidual w = weak_soliton_residual(unit_sphere(c), TensorField::zero(2, {Slot::Up}), Point{0.9, 0.1});
        CHECK(w.norm2 < 1e-24);
    }
}

TEST_CASE("reduced quadratic solver") {
    const Quadratic q = solve_reduced_quadratic(1.0, 0.0, 1.0);
    CHECK(q.roots.empty());
    CHECK(q.disc == -1.0);
    const Quadratic q2 = solve_reduced_quadratic(2.0, -3.0, 4.0);
    REQUIRE(q2.roots.size() == 2);
    for (double r : q2.roots) CHECK(std::fabs(2 * r * r - 6 * r + 4) < 1e-12);
    CHECK_THROWS_AS(solve_reduced_quadratic(0.0, 1.0, 1.0), InvalidArgument);
}
