#pragma once

#include "solab/connection.hpp"
#include "solab/hypersurface.hpp"
#include "solab/soliton.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace solab {

/// Where a value came from in a geometry file; line and column are 1-based.
struct SourceLoc {
    std::string file;
    int line = 0;
    int column = 0;
};

enum class ConnectionKind { LeviCivita, Weyl, Deform, Explicit };
const char* to_string(ConnectionKind k);
ConnectionKind connection_kind_from_string(const std::string& s);

struct ConnectionSpec {
    ConnectionKind kind = ConnectionKind::LeviCivita;
    std::vector<std::string> eta;           // weyl: covector components
    std::vector<std::string> coefficients;  // deform: added to Levi-Civita; explicit: Gamma. Flat (k, i, j) order.
};

struct VaismanSpec {
    std::vector<std::string> J;  // row-major, J[a * n + i] = J^a_i
    std::vector<std::string> u;
};

struct ImmersionSpec {
    std::vector<std::string> X;  // n + 1 components
    int orientation = 1;
};

/// One grid axis: `count` evenly spaced values in [lo, hi].
struct GridAxis {
    double lo = 0.0;
    double hi = 0.0;
    int count = 1;
};

/// Box per coordinate, optionally intersected with a shell lo <= |x| <= hi in chart coordinates.
struct SampleDomain {
    std::vector<std::pair<double, double>> box;
    std::optional<std::pair<double, double>> radius;
};

/// Where an expected value comes from: "stated" values appear in the source literature,
/// "derived" values follow from direct computation.
enum class Provenance { Stated, Derived };
const char* to_string(Provenance p);

/// One reproducible number. Without a point it must hold at every sample point.
struct ExpectedValue {
    std::string quantity;  // report quantity name
    std::optional<Point> point;
    double value = 0.0;
    Provenance provenance = Provenance::Derived;
    double tolerance = 1e-9;
};

/// A value printed in the literature that the engine is expected not to reproduce. It is
/// reported next to the computed value and never asserted.
struct PrintedClaim {
    std::string quantity;
    std::optional<Point> point;
    double printed = 0.0;
    std::string note;
};

/// Textual description of a chart geometry and its soliton data. Expressions stay as text
/// until compile(); `locations` maps field paths such as "metric.g[0][1]" to file positions.
struct GeometrySpec {
    std::string name;
    std::vector<std::string> coords;
    std::vector<std::string> metric;  // n * n row-major; empty when an immersion supplies the metric
    std::optional<std::string> potential;
    std::optional<std::vector<std::string>> vector_field;
    std::optional<std::vector<std::string>> eta;
    std::optional<std::vector<std::string>> F;  // row-major, F[a * n + i] = F^a_i
    std::optional<double> lambda;
    std::optional<double> mu;
    ConnectionSpec connection;
    std::optional<VaismanSpec> vaisman;
    std::optional<ImmersionSpec> immersion;

    std::vector<Point> points;  // listed sample points
    std::optional<std::vector<GridAxis>> grid;
    SampleDomain domain;
    std::size_t sample_count = 8;

    std::vector<ExpectedValue> expected;
    std::vector<PrintedClaim> claims;
    std::vector<std::string> checks;  // default checks; empty means every compatible check

    std::map<std::string, SourceLoc> locations;

    std::size_t dim() const noexcept { return coords.size(); }
    /// Structural validation; throws InputError naming the offending field.
    void validate() const;
};

/// A GeometrySpec with every expression parsed and every field built.
struct Geometry {
    GeometrySpec spec;
    ChartPtr chart;
    MetricField g;
    std::optional<ScalarField> f;
    std::optional<TensorField> xi;   // vector field; grad f when only a potential is given
    std::optional<TensorField> eta;  // covector
    std::optional<TensorField> F;
    ConnectionField connection;
    std::optional<Immersion> immersion;
    std::optional<TensorField> J;
    std::optional<TensorField> u;

    std::size_t dim() const noexcept { return spec.dim(); }
    /// Soliton data for the generalized residual; lambda defaults to 0.
    SolitonData soliton() const;
};

/// Validates and parses. Expression errors become InputError with the field path and, when
/// known, "file:line:column".
Geometry compile(const GeometrySpec& spec);

/// Seed for pseudorandom samples: 0x5EED unless SOLAB_SEED holds an unsigned integer.
std::uint64_t sample_seed();

/// `count` uniform points in the domain (rejection sampling against the radius shell).
std::vector<Point> random_points(const SampleDomain& domain, std::size_t count, std::uint64_t seed);

/// Cartesian product of the axes, first coordinate varying slowest.
std::vector<Point> grid_points(const std::vector<GridAxis>& axes);

/// Default sample set: the grid when present, otherwise `sample_count` random points;
/// listed points follow.
std::vector<Point> default_samples(const GeometrySpec& spec, std::uint64_t seed);

/// "x=0.5,y=-1" in chart order. Every coordinate must appear exactly once.
Point parse_point(const std::vector<std::string>& coords, const std::string& text);

/// "x=-1:1:5,y=0:2:3"; every coordinate must appear exactly once.
std::vector<GridAxis> parse_grid(const std::vector<std::string>& coords, const std::string& text);

} // namespace solab
