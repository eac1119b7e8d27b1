#include "solab/catalog.hpp"
#include "solab/errors.hpp"
#include "solab/loader.hpp"
#include "solab/report.hpp"

#include <doctest.h>

#include <string>

using namespace solab;

namespace {

const std::string kData = SOLAB_DATA_DIR;

std::string error_of(const std::string& text) {
    try {
        parse_geometry(text, "t.geom");
    } catch (const InputError& e) {
        return e.what();
    }
    return "";
}

} // namespace

TEST_CASE("cigar file loads as a 2-dimensional spec and verifies") {
    const GeometrySpec s = load_geometry(kData + "/cigar.geom");
    CHECK(s.dim() == 2);
    CHECK(s.name == "cigar");
    CHECK(s.metric.size() == 4);
    CHECK(s.metric[2] == "0");  // lower triangle mirrored from the upper one
    VerifyOptions o;
    o.points = std::vector<Point>{Point{0.0, 0.0}};
    o.checks = {Check::Gradient, Check::Lambda, Check::Inequalities};
    const Report r = run_verify(s, o);
    CHECK(r.passed);
    CHECK(r.classification == std::optional<std::string>("steady"));
    REQUIRE(r.points.size() == 1);
    CHECK(r.points[0].gradient->residual6_norm2 <= 1e-18);
    REQUIRE(r.points[0].lambda->q11.roots.size() == 2);
    CHECK(r.points[0].lambda->q11.roots[0] == doctest::Approx(0.0));
    CHECK(r.points[0].lambda->q11.roots[1] == doctest::Approx(4.0));
}

TEST_CASE("cylinder via extends keeps the catalog expectations and uses the grid") {
    const GeometrySpec s = load_geometry(kData + "/cylinder3.geom");
    CHECK(s.grid.has_value());
    CHECK_FALSE(s.expected.empty());
    const Report r = run_verify(s);
    CHECK(r.passed);
    CHECK(r.points.size() == 45);
    CHECK(r.lambda == std::optional<double>(-0.5));
    CHECK(r.classification == std::optional<std::string>("shrinking"));
}

TEST_CASE("hopf file with the vaisman check passes every conclusion") {
    const GeometrySpec s = load_geometry(kData + "/hopf.geom");
    VerifyOptions o;
    o.checks = {Check::Vaisman};
    const Report r = run_verify(s, o);
    CHECK(r.passed);
    REQUIRE(r.vaisman_premises);
    CHECK(r.vaisman_premises->covariant_V <= 1e-9);
}

TEST_CASE("negative metric loads, then fails at the first sample") {
    const GeometrySpec s = load_geometry(kData + "/negative.geom");
    const Report r = run_verify(s);
    CHECK_FALSE(r.passed);
    REQUIRE_FALSE(r.failures.empty());
    CHECK(r.failures[0].message.find("NotPositiveDefinite") != std::string::npos);
    CHECK(r.failures[0].point == std::optional<std::vector<double>>(r.points[0].point));
}

TEST_CASE("missing coords is a validation error") {
    CHECK_THROWS_WITH_AS(load_geometry(kData + "/missing_coords.geom"), doctest::Contains("coords required"), InputError);
}

TEST_CASE("errors carry line and column") {
    CHECK(error_of("[manifold]\ncoords = [\"x\"]\n[metric]\ng = [[\"1 +\"]]\n").find("t.geom:4:11: metric.g[0][0]") == 0);
    CHECK(error_of("[manifold]\ncoords = [\"x\"]\n[metric]\ng = [[1]]\n[potential]\nf = \"x*\" \n")
              .find("t.geom:6:") == 0);
    CHECK(error_of("[manifold]\ncoords = [\"x\"]\nbogus = 1\n").find("t.geom:3:1: unknown key 'bogus'") == 0);
    CHECK(error_of("[nowhere]\n").find("t.geom:1:1: unknown section") == 0);
    CHECK(error_of("[manifold]\ncoords = [\"x\",\n  \"y\"\n").find("t.geom:") == 0);
    CHECK(error_of("[manifold]\ncoords = [\"x\"]\n[metric]\ng = [[x]]\n").find("expressions must be quoted") !=
          std::string::npos);
    CHECK(error_of("[manifold]\nextends = \"nonexistent\"\n").find("t.geom:2:12: manifold.extends") == 0);
    CHECK(error_of("[manifold]\nextends = \"cone(3, -1)\"\n").find("manifold.extends") != std::string::npos);
    CHECK(error_of("[manifold]\ncoords = [\"x\", \"y\"]\n[metric]\ng = [[1, \"x\"], [\"y\", 1]]\n").find("differ") !=
          std::string::npos);
    CHECK(error_of("[manifold]\ncoords = [\"x\"]\n[metric]\ng = [[1]]\n[immersion]\nX = [\"x\", \"0\"]\n")
              .find("immersion excludes an explicit metric") != std::string::npos);
}

TEST_CASE("full syntax: connection, vaisman-free weyl, samples") {
    const std::string text = R"(# flat plane, deformed connection
[manifold]
name = "deformed"
coords = ["x", "y"]
[metric]
g = [[1, 0],
     [0, 1]]   # identity
[soliton]
lambda = -1
xi = ["x", "y"]
[connection]
kind = "deform"
delta = [[[0.5, 0], [0, 0]],
         [[0, 0], [0, 0]]]
[sample]
box = [[-1, 1], [-2, 2]]
count = 3
points = [[0.25, -0.5]]
)";
    const GeometrySpec s = parse_geometry(text, "d.geom");
    CHECK(s.connection.kind == ConnectionKind::Deform);
    CHECK(s.connection.coefficients.size() == 8);
    CHECK(s.connection.coefficients[0] == "0.5");
    CHECK(s.sample_count == 3);
    CHECK(s.points.size() == 1);
    VerifyOptions o;
    o.checks = {Check::Statistical};
    const Report r = run_verify(s, o);
    CHECK(r.points.size() == 4);
    CHECK(r.passed);
    CHECK(r.points[0].statistical.has_value());
    // The deformed connection itself is not a soliton; the default check set says so.
    CHECK_FALSE(run_verify(s).passed);
}

TEST_CASE("weyl plane file reports the shift probe") {
    const GeometrySpec s = load_geometry(kData + "/weyl_plane.geom");
    const Report r = run_verify(s);
    REQUIRE(r.weyl);
    CHECK(r.weyl->delta_lambda == doctest::Approx(-0.5));
    CHECK(r.paper_claims.size() == 1);
}

TEST_CASE("unreadable file is an input error") {
    CHECK_THROWS_AS(load_geometry(kData + "/does_not_exist.geom"), InputError);
}

TEST_CASE("write_geometry round-trips every catalog entry") {
    for (const char* inv : {"gaussian(3, 0.5)", "einstein_sphere", "cone(4)", "cigar", "cylinder(3)", "hopf",
                            "statistical_flat(2)", "torse_special", "sphere(2)", "cylinder_surface", "plane"}) {
        const std::string label = inv;
        CAPTURE(label);
        const GeometrySpec a = catalog_get(std::string(inv)).spec;
        const std::string text = write_geometry(a);
        const GeometrySpec b = parse_geometry(text, "w.geom");
        CHECK(b.name == a.name);
        CHECK(b.coords == a.coords);
        CHECK(b.metric == a.metric);
        CHECK(b.potential == a.potential);
        CHECK(b.vector_field == a.vector_field);
        CHECK(b.lambda == a.lambda);
        CHECK(b.mu == a.mu);
        CHECK(b.connection.kind == a.connection.kind);
        CHECK(b.connection.coefficients == a.connection.coefficients);
        CHECK(b.domain.box == a.domain.box);
        CHECK(b.domain.radius == a.domain.radius);
        CHECK(b.sample_count == a.sample_count);
        CHECK(b.points.size() == a.points.size());
        CHECK(write_geometry(b) == text);
        VerifyOptions o;
        o.seed = 7;
        for (const auto& c : a.checks) o.checks.push_back(check_from_string(c));
        Report ra = run_verify(a, o), rb = run_verify(b, o);
        CHECK(ra.points == rb.points);
    }
}
