#pragma once

#include "solab/connection.hpp"
#include "solab/field.hpp"
#include "solab/pointwise.hpp"

#include <random>
#include <string>
#include <vector>

namespace solab::testing {

inline MetricField metric(const ChartPtr& chart, const std::vector<std::string>& comps) {
    return MetricField::from_strings(chart, comps);
}

inline ChartPtr chart(std::vector<std::string> coords) { return make_chart(std::move(coords)); }

inline MetricField flat_metric(const ChartPtr& c) {
    const std::size_t n = c->dim();
    std::vector<std::string> comps(n * n, "0");
    for (std::size_t i = 0; i < n; ++i) comps[i * n + i] = "1";
    return metric(c, comps);
}

inline MetricField unit_sphere(const ChartPtr& c) { return metric(c, {"1", "0", "0", "sin(th)^2"}); }

inline MetricField cigar(const ChartPtr& c) {
    return metric(c, {"1/(1+x^2+y^2)", "0", "0", "1/(1+x^2+y^2)"});
}

inline TensorField vector_field(const ChartPtr& c, const std::vector<std::string>& comps) {
    return TensorField::from_strings(c, {Slot::Up}, comps);
}

inline TensorField covector_field(const ChartPtr& c, const std::vector<std::string>& comps) {
    return TensorField::from_strings(c, {Slot::Down}, comps);
}

/// Uniform points in a box; fixed seed per call site.
inline std::vector<Point> box_points(std::uint64_t seed, std::size_t count, const std::vector<double>& lo,
                                     const std::vector<double>& hi) {
    std::mt19937_64 rng(seed);
    std::vector<Point> out;
    for (std::size_t k = 0; k < count; ++k) {
        std::vector<double> x(lo.size());
        for (std::size_t i = 0; i < lo.size(); ++i) {
            const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            x[i] = lo[i] + (hi[i] - lo[i]) * u;
        }
        out.emplace_back(std::move(x));
    }
    return out;
}

inline double max_abs(const TensorAtPoint& t) { return t.max_abs(); }

} // namespace solab::testing
