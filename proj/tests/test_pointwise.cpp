#include "doctest.h"
#include "support.hpp"

#include "solab/curvature.hpp"
#include "solab/pointwise.hpp"
#include "solab/random_expr.hpp"

#include <cmath>

using namespace solab;
using namespace solab::testing;

namespace {

Matrix random_spd(std::mt19937_64& rng, std::size_t n) {
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = -1.0 + 2.0 * uniform01(rng);
    Matrix g = a * a.transpose();
    for (std::size_t i = 0; i < n; ++i) g(i, i) += 0.5;
    return g;
}

TensorAtPoint random_symmetric(std::mt19937_64& rng, std::size_t n) {
    TensorAtPoint h(n, {Slot::Down, Slot::Down});
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) h(i, j) = h(j, i) = -2.0 + 4.0 * uniform01(rng);
    return h;
}

} // namespace

TEST_CASE("metric_at examples") {
    const auto c = chart({"x", "y"});
    const MetricAtPoint m = metric_at(cigar(c), Point{0.0, 0.0}, 0).metric;
    CHECK((m.g - Matrix::identity(2)).max_abs() == 0.0);
    CHECK((m.g_inv - Matrix::identity(2)).max_abs() == 0.0);
    const auto s = chart({"th", "ph"});
    const MetricAtPoint ms = metric_at(unit_sphere(s), Point{M_PI / 2, 0.3}, 0).metric;
    CHECK((ms.g - Matrix::identity(2)).max_abs() < 1e-15);
    CHECK_THROWS_AS(metric_at(metric(c, {"-1", "0", "0", "1"}), Point{0.0, 0.0}, 0), NotPositiveDefinite);
    CHECK_THROWS_AS(metric_at(metric(c, {"1", "0.5", "0", "1"}), Point{0.0, 0.0}, 0), AsymmetricTensor);
}

TEST_CASE("metric inverse and Cholesky factor") {
    std::mt19937_64 rng(3);
    for (std::size_t n = 1; n <= 5; ++n) {
        const MetricAtPoint m = MetricAtPoint::from_matrix(random_spd(rng, n));
        CHECK((m.g * m.g_inv - Matrix::identity(n)).max_abs() < 1e-10);
        CHECK((m.chol * m.chol.transpose() - m.g).max_abs() < 1e-12);
    }
}

TEST_CASE("inverse metric jets match the jets of the explicit inverse") {
    const auto c = chart({"x", "y"});
    const MetricField g = metric(c, {"2+x^2", "x*y", "x*y", "1+y^2"});
    const Point p{0.3, -0.4};
    const JetTensor inv = inverse_jets(g.field().jets(p, 3));
    const std::string det = "((2+x^2)*(1+y^2)-(x*y)^2)";
    const ScalarField i00(c, "(1+y^2)/" + det), i01(c, "-(x*y)/" + det);
    const Jet3 e00 = i00.eval_jet(p, 3), e01 = i01.eval_jet(p, 3);
    for (std::size_t a = 0; a < 2; ++a) {
        CHECK(inv(0, 0).d(a) == doctest::Approx(e00.d(a)).epsilon(1e-12));
        for (std::size_t b = a; b < 2; ++b) {
            CHECK(inv(0, 1).d(a, b) == doctest::Approx(e01.d(a, b)).epsilon(1e-12));
            for (std::size_t k = b; k < 2; ++k) CHECK(inv(0, 0).d(a, b, k) == doctest::Approx(e00.d(a, b, k)).epsilon(1e-11));
        }
    }
}

TEST_CASE("norm2 examples") {
    const auto c = chart({"x", "y"});
    const MetricField g = cigar(c);
    const Point o{0.0, 0.0};
    CHECK(norm2(ricci_at(levi_civita(g), g, o).ricci, metric_at(g, o, 0).metric) == doctest::Approx(8.0));
    const MetricAtPoint m3 = MetricAtPoint::from_matrix(Matrix(3, 3, {2, 0, 0, 0, 5, 0, 0, 0, 1}));
    CHECK(norm2(TensorAtPoint::identity(3), m3) == doctest::Approx(3.0));
    TensorAtPoint h(3, {Slot::Down, Slot::Down});
    h(2, 2) = 0.5;
    const MetricAtPoint flat3 = MetricAtPoint::from_matrix(Matrix::identity(3));
    CHECK(norm2(h, flat3) == doctest::Approx(0.25));
    CHECK_THROWS_AS(norm2(TensorAtPoint(2, Variance(5, Slot::Down)), metric_at(g, o, 0).metric), InvalidArgument);
}

TEST_CASE("raise and lower") {
    const auto s = chart({"th", "ph"});
    const MetricField g = unit_sphere(s);
    const Point p{0.8, 0.1};
    const MetricAtPoint m = metric_at(g, p, 0).metric;
    const TensorAtPoint q = raise_lower(ricci_at(levi_civita(g), g, p).ricci, m, 0, Slot::Up);
    CHECK((q - TensorAtPoint::identity(2)).max_abs() < 1e-12);
    const MetricAtPoint flat = MetricAtPoint::from_matrix(Matrix::identity(2));
    const TensorAtPoint eta = raise_lower(TensorAtPoint(2, {Slot::Up}, {1.0, 0.0}), flat, 0, Slot::Down);
    CHECK(eta.variance() == Variance{Slot::Down});
    CHECK(eta(0) == 1.0);
    CHECK(eta(1) == 0.0);
    std::mt19937_64 rng(8);
    const MetricAtPoint mr = MetricAtPoint::from_matrix(random_spd(rng, 3));
    TensorAtPoint t(3, {Slot::Up, Slot::Down, Slot::Up});
    for (std::size_t f = 0; f < t.size(); ++f) t[f] = uniform01(rng);
    const TensorAtPoint back = raise_lower(raise_lower(t, mr, 2, Slot::Down), mr, 2, Slot::Up);
    CHECK((back - t).max_abs() < 1e-12);
    CHECK_THROWS_AS(raise_lower(t, mr, 3, Slot::Up), InvalidArgument);
    CHECK_THROWS_AS(raise_lower(t, mr, 0, Slot::Up), InvalidArgument);
}

TEST_CASE("generalized eigenproblem examples") {
    const MetricAtPoint id2 = MetricAtPoint::from_matrix(Matrix::identity(2));
    TensorAtPoint h(2, {Slot::Down, Slot::Down}, {-2, 0, 0, -2});
    const FrameSpectrum s = generalized_eigen(h, id2);
    CHECK(s.eigenvalues[0] == doctest::Approx(-2.0));
    CHECK(s.eigenvalues[1] == doctest::Approx(-2.0));
    const MetricAtPoint cyl = MetricAtPoint::from_matrix(Matrix(3, 3, {2, 0, 0, 0, 1.3, 0, 0, 0, 1}));
    TensorAtPoint hc(3, {Slot::Down, Slot::Down});
    hc(2, 2) = 0.5;
    const FrameSpectrum sc = generalized_eigen(hc, cyl);
    CHECK(std::fabs(sc.eigenvalues[0]) < 1e-15);
    CHECK(std::fabs(sc.eigenvalues[1]) < 1e-15);
    CHECK(sc.eigenvalues[2] == doctest::Approx(0.5));
    std::mt19937_64 rng(5);
    const MetricAtPoint m = MetricAtPoint::from_matrix(random_spd(rng, 4));
    const FrameSpectrum sg = generalized_eigen(m.as_tensor(), m);
    for (double v : sg.eigenvalues) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
    TensorAtPoint asym(2, {Slot::Down, Slot::Down}, {1, 0.3, 0, 1});
    CHECK_THROWS_AS(generalized_eigen(asym, id2), AsymmetricTensor);
}

TEST_CASE("generalized eigenproblem properties on random pencils") {
    std::mt19937_64 rng(0x5EED);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + trial % 5;
        const MetricAtPoint m = MetricAtPoint::from_matrix(random_spd(rng, n));
        const TensorAtPoint h = random_symmetric(rng, n);
        const FrameSpectrum s = generalized_eigen(h, m);
        const Matrix e = s.frame_matrix();
        CHECK((e.transpose() * m.g * e - Matrix::identity(n)).max_abs() <= 1e-10);
        const TensorAtPoint hf = raise_lower(h, m, 0, Slot::Up);
        TensorAtPoint rebuilt(n, {Slot::Up, Slot::Down});
        double sum = 0.0, sq = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const TensorAtPoint ek(n, {Slot::Up}, s.frame[k]);
            rebuilt += s.eigenvalues[k] * outer_endomorphism(raise_lower(ek, m, 0, Slot::Down), ek);
            sum += s.eigenvalues[k];
            sq += s.eigenvalues[k] * s.eigenvalues[k];
            if (k > 0) CHECK(s.eigenvalues[k - 1] <= s.eigenvalues[k]);
        }
        CHECK((rebuilt - hf).max_abs() <= 1e-9);
        CHECK(std::fabs(sum - trace(h, m)) <= 1e-10);
        CHECK(std::fabs(sq - norm2(h, m)) <= 1e-9);
    }
}

TEST_CASE("least squares returns the minimum-norm solution") {
    const Matrix a(3, 2, {1, 1, 1, 1, 1, 1});
    const std::vector<double> b{2, 2, 2};
    const auto x = least_squares(a, b);
    CHECK(x[0] == doctest::Approx(1.0));
    CHECK(x[1] == doctest::Approx(1.0));
}
