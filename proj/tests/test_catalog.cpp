#include "solab/catalog.hpp"
#include "solab/errors.hpp"
#include "solab/report.hpp"

#include <doctest.h>

#include <cmath>
#include <string>

using namespace solab;

namespace {

std::string describe_failures(const Report& r) {
    std::string s;
    for (const auto& f : r.failures) s += f.check + ": " + f.message + "\n";
    for (const auto& e : r.expected)
        if (!e.passed)
            s += "expected " + e.quantity + " = " + std::to_string(e.expected) + ", got " +
                 (e.computed ? std::to_string(*e.computed) : std::string("n/a")) + "\n";
    return s;
}

} // namespace

TEST_CASE("every catalog entry verifies at its defaults") {
    for (const CatalogEntry& e : catalog_entries()) {
        CAPTURE(e.name);
        const CatalogInstance c = catalog_get(e.name);
        const Report r = run_verify(c.spec);
        INFO(describe_failures(r));
        CHECK(r.passed);
        CHECK_FALSE(r.points.empty());
        CHECK_FALSE(r.expected.empty());
    }
}

TEST_CASE("cigar values at the origin") {
    const CatalogInstance c = catalog_get("cigar");
    const Report r = run_verify(c.spec);
    const PointReport* origin = nullptr;
    for (const auto& p : r.points)
        if (p.point == std::vector<double>{0.0, 0.0}) origin = &p;
    REQUIRE(origin != nullptr);
    REQUIRE(origin->gradient);
    CHECK(origin->gradient->laplacian == doctest::Approx(-4.0).epsilon(1e-10));
    CHECK(origin->gradient->normH2 == doctest::Approx(8.0).epsilon(1e-10));
    CHECK(origin->gradient->normRic2 == doctest::Approx(8.0).epsilon(1e-10));
    CHECK(origin->gradient->scalarR == doctest::Approx(4.0).epsilon(1e-10));
    REQUIRE(origin->gradient->gauss);
    CHECK(*origin->gradient->gauss == doctest::Approx(2.0).epsilon(1e-10));
    REQUIRE(origin->lambda);
    REQUIRE(origin->lambda->q11.roots.size() == 2);
    CHECK(origin->lambda->q11.roots[0] == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(origin->lambda->q11.roots[1] == doctest::Approx(4.0).epsilon(1e-10));
    CHECK(r.classification == std::optional<std::string>("steady"));
}

TEST_CASE("catalog parameters: defaults, named, positional and errors") {
    CHECK(catalog_get("gaussian(3)").params.at("n") == 3.0);
    CHECK(catalog_get("gaussian(n=4, lambda=-2)").params.at("lambda") == -2.0);
    CHECK(catalog_get("cylinder").spec.coords.size() == 3);
    CHECK_THROWS_AS(catalog_get("nonexistent"), UnknownEntry);
    CHECK_THROWS_AS(catalog_get("cone", {{"C", 0.0}}), ParamOutOfRange);
    CHECK_THROWS_AS(catalog_get("gaussian", {{"n", 2.5}}), ParamOutOfRange);
    CHECK_THROWS_AS(catalog_get("gaussian", {{"n", 9.0}}), ParamOutOfRange);
    CHECK_THROWS_AS(catalog_get("gaussian(q=1)"), ParamOutOfRange);
    CHECK_THROWS_AS(catalog_get("gaussian(1"), InputError);
}

TEST_CASE("cylinder family: printed Ricci values are reported, not asserted") {
    for (int n = 3; n <= 5; ++n) {
        CAPTURE(n);
        const Report r = run_verify(catalog_get("cylinder", {{"n", double(n)}}).spec);
        CHECK(r.passed);
        bool saw = false;
        for (const auto& c : r.paper_claims)
            if (c.quantity == "normRic2") {
                saw = true;
                REQUIRE(c.computed);
                CHECK(*c.computed == doctest::Approx((n - 1) / 4.0).epsilon(1e-10));
                CHECK(c.matched == (n == 2));
            }
        CHECK(saw);
    }
}

TEST_CASE("weyl probe reports the printed mu shift as unmatched") {
    GeometrySpec s;
    s.name = "weyl-flat";
    s.coords = {"x", "y"};
    s.metric = {"1", "0", "0", "1"};
    s.vector_field = std::vector<std::string>{"1", "0"};
    s.eta = std::vector<std::string>{"1", "0"};
    s.lambda = 0.0;
    s.connection.kind = ConnectionKind::Weyl;
    s.domain.box = {{-1.0, 1.0}, {-1.0, 1.0}};
    VerifyOptions o;
    o.checks = {Check::Weyl};
    const Report r = run_verify(s, o);
    REQUIRE(r.weyl);
    CHECK(r.weyl->delta_lambda == doctest::Approx(-0.5));
    CHECK(std::fabs(r.weyl->delta_mu) < 1e-12);
    REQUIRE(r.paper_claims.size() == 1);
    CHECK_FALSE(r.paper_claims[0].matched);
    CHECK(r.failures.empty());
}

TEST_CASE("reports survive a JSON round trip exactly") {
    for (const char* name : {"cigar", "hopf", "torse_special", "statistical_flat", "sphere", "cylinder(4)"}) {
        CAPTURE(name);
        const Report r = run_verify(catalog_get(std::string(name)).spec);
        const std::string text = to_json(r);
        const Report back = report_from_json(text);
        CHECK(back == r);
        CHECK(to_json(back) == text);
    }
}

TEST_CASE("verify is deterministic for a fixed seed") {
    const GeometrySpec s = catalog_get("cigar").spec;
    VerifyOptions o;
    o.seed = 42;
    CHECK(to_json(run_verify(s, o)) == to_json(run_verify(s, o)));
    VerifyOptions p;
    p.seed = 43;
    CHECK(to_json(run_verify(s, o)) != to_json(run_verify(s, p)));
}

TEST_CASE("non-soliton potential fails with a recorded residual") {
    GeometrySpec s = catalog_get("cigar").spec;
    s.potential = "x";
    s.expected.clear();
    const Report r = run_verify(s);
    CHECK_FALSE(r.passed);
    CHECK_FALSE(r.failures.empty());
}

TEST_CASE("incompatible checks are input errors") {
    const GeometrySpec s = catalog_get("hopf").spec;
    VerifyOptions o;
    o.checks = {Check::Shape};
    CHECK_THROWS_AS(run_verify(s, o), InputError);
    CHECK_THROWS_AS(check_from_string("bogus"), InputError);
}

TEST_CASE("convention hash is stable and quantize is idempotent") {
    CHECK(convention_hash().size() == 16);
    CHECK(convention_hash() == convention_hash());
    for (double v : {0.1, 1.0 / 3.0, -2.5e-17, 12345.678901234567}) CHECK(quantize(quantize(v)) == quantize(v));
}
