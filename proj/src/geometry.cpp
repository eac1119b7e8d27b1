#include "solab/geometry.hpp"

#include "solab/errors.hpp"
#include "solab/random_expr.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>
#include <set>

namespace solab {

namespace {

std::string where(const GeometrySpec& s, const std::string& path, std::size_t extra_columns = 0) {
    const auto it = s.locations.find(path);
    if (it == s.locations.end()) return "";
    const SourceLoc& l = it->second;
    return (l.file.empty() ? "" : l.file + ":") + std::to_string(l.line) + ":" +
           std::to_string(l.column + static_cast<int>(extra_columns)) + ": ";
}

Expr parse_field(const GeometrySpec& s, const std::string& path, const std::string& text) {
    try {
        return parse_expr(text, s.coords);
    } catch (const ParseError& e) {
        throw InputError(where(s, path, e.offset()) + path + ": " + e.what());
    }
}

std::vector<Expr> parse_list(const GeometrySpec& s, const std::string& path, const std::vector<std::string>& items) {
    std::vector<Expr> out;
    out.reserve(items.size());
    for (std::size_t i = 0; i < items.size(); ++i)
        out.push_back(parse_field(s, path + "[" + std::to_string(i) + "]", items[i]));
    return out;
}

/// Row-major n x n list parsed with "path[a][i]" element names.
std::vector<Expr> parse_square(const GeometrySpec& s, const std::string& path, const std::vector<std::string>& items) {
    const std::size_t n = s.dim();
    std::vector<Expr> out;
    out.reserve(items.size());
    for (std::size_t k = 0; k < items.size(); ++k)
        out.push_back(parse_field(s, path + "[" + std::to_string(k / n) + "][" + std::to_string(k % n) + "]", items[k]));
    return out;
}

void require_size(const GeometrySpec& s, const std::string& path, std::size_t have, std::size_t want) {
    if (have != want) {
        throw InputError(where(s, path) + path + ": expected " + std::to_string(want) + " components, got " +
                         std::to_string(have));
    }
}

double parse_number(const std::string& text, const std::string& what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size() || !std::isfinite(v)) throw InputError(what + ": '" + text + "' is not a number");
    return v;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

/// Splits "a=1,b=2" into ordered (name, value) pairs and checks it names each coordinate once.
std::vector<std::string> assignments(const std::vector<std::string>& coords, const std::string& text,
                                     const std::string& what) {
    std::vector<std::string> values(coords.size());
    std::set<std::string> seen;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = std::min(text.find(',', start), text.size());
        const std::string part = trim(text.substr(start, comma - start));
        const auto eq = part.find('=');
        if (eq == std::string::npos) throw InputError(what + ": expected name=value, got '" + part + "'");
        const std::string name = trim(part.substr(0, eq));
        const auto it = std::find(coords.begin(), coords.end(), name);
        if (it == coords.end()) throw InputError(what + ": unknown coordinate '" + name + "'");
        if (!seen.insert(name).second) throw InputError(what + ": coordinate '" + name + "' given twice");
        values[static_cast<std::size_t>(it - coords.begin())] = trim(part.substr(eq + 1));
        start = comma + 1;
    }
    if (seen.size() != coords.size()) throw InputError(what + ": every coordinate needs a value");
    return values;
}

} // namespace

const char* to_string(Provenance p) { return p == Provenance::Stated ? "stated" : "derived"; }

const char* to_string(ConnectionKind k) {
    switch (k) {
    case ConnectionKind::LeviCivita: return "levi_civita";
    case ConnectionKind::Weyl: return "weyl";
    case ConnectionKind::Deform: return "deform";
    case ConnectionKind::Explicit: return "explicit";
    }
    return "?";
}

ConnectionKind connection_kind_from_string(const std::string& s) {
    for (ConnectionKind k : {ConnectionKind::LeviCivita, ConnectionKind::Weyl, ConnectionKind::Deform, ConnectionKind::Explicit})
        if (s == to_string(k)) return k;
    throw InputError("connection.kind: unknown kind '" + s + "' (levi_civita, weyl, deform, explicit)");
}

void GeometrySpec::validate() const {
    const std::size_t n = dim();
    if (coords.empty()) throw InputError("coords required");
    std::set<std::string> names(coords.begin(), coords.end());
    if (names.size() != n) throw InputError(where(*this, "manifold.coords") + "manifold.coords: duplicate coordinate name");
    if (immersion) {
        if (!metric.empty()) throw InputError("immersion excludes an explicit metric");
        require_size(*this, "immersion.X", immersion->X.size(), n + 1);
        if (immersion->orientation != 1 && immersion->orientation != -1)
            throw InputError(where(*this, "immersion.orientation") + "immersion.orientation must be 1 or -1");
    } else {
        if (metric.empty()) throw InputError("metric required (or an immersion)");
        require_size(*this, "metric.g", metric.size(), n * n);
    }
    if (potential && vector_field) throw InputError("potential and soliton.xi are exclusive");
    if (vector_field) require_size(*this, "soliton.xi", vector_field->size(), n);
    if (eta) require_size(*this, "soliton.eta", eta->size(), n);
    if (F) require_size(*this, "soliton.F", F->size(), n * n);
    switch (connection.kind) {
    case ConnectionKind::LeviCivita:
        if (!connection.eta.empty() || !connection.coefficients.empty())
            throw InputError("connection: levi_civita takes no parameters");
        break;
    case ConnectionKind::Weyl:
        if (connection.eta.empty() && !eta) throw InputError("connection: weyl needs eta");
        if (!connection.eta.empty()) require_size(*this, "connection.eta", connection.eta.size(), n);
        break;
    case ConnectionKind::Deform:
        require_size(*this, "connection.delta", connection.coefficients.size(), n * n * n);
        break;
    case ConnectionKind::Explicit:
        require_size(*this, "connection.gamma", connection.coefficients.size(), n * n * n);
        break;
    }
    if (vaisman) {
        require_size(*this, "vaisman.J", vaisman->J.size(), n * n);
        require_size(*this, "vaisman.u", vaisman->u.size(), n);
    }
    for (const Point& p : points)
        if (p.dim() != n) throw InputError("sample.points: point of dimension " + std::to_string(p.dim()) + " in a " +
                                           std::to_string(n) + "-dimensional chart");
    if (grid) {
        require_size(*this, "sample.grid", grid->size(), n);
        for (const GridAxis& a : *grid)
            if (a.count < 1 || !(a.lo <= a.hi)) throw InputError("sample.grid: axis needs lo <= hi and count >= 1");
    }
    if (!domain.box.empty()) {
        require_size(*this, "sample.box", domain.box.size(), n);
        for (const auto& [lo, hi] : domain.box)
            if (!(lo < hi)) throw InputError("sample.box: every interval needs lo < hi");
    }
    if (domain.radius && !(domain.radius->first >= 0.0 && domain.radius->first < domain.radius->second))
        throw InputError("sample.radius: needs 0 <= lo < hi");
}

SolitonData Geometry::soliton() const {
    SolitonData d;
    d.g = g;
    d.f = f;
    d.xi = xi;
    d.lambda = spec.lambda.value_or(0.0);
    d.mu = spec.mu;
    d.F = F;
    d.connection = connection;
    return d;
}

Geometry compile(const GeometrySpec& spec) {
    spec.validate();
    const std::size_t n = spec.dim();
    Geometry geo;
    geo.spec = spec;
    geo.chart = make_chart(spec.coords);
    const ChartPtr& c = geo.chart;
    if (spec.immersion) {
        geo.immersion = Immersion(c, parse_list(spec, "immersion.X", spec.immersion->X), spec.immersion->orientation);
        geo.g = induced_metric(*geo.immersion);
    } else {
        geo.g = MetricField(TensorField::from_exprs(c, {Slot::Down, Slot::Down}, parse_square(spec, "metric.g", spec.metric)));
    }
    if (spec.potential) {
        geo.f = ScalarField(c, parse_field(spec, "potential.f", *spec.potential));
        geo.xi = gradient(geo.g, *geo.f);
    }
    if (spec.vector_field) geo.xi = TensorField::from_exprs(c, {Slot::Up}, parse_list(spec, "soliton.xi", *spec.vector_field));
    if (spec.eta) geo.eta = TensorField::from_exprs(c, {Slot::Down}, parse_list(spec, "soliton.eta", *spec.eta));
    if (spec.F) geo.F = TensorField::from_exprs(c, {Slot::Up, Slot::Down}, parse_square(spec, "soliton.F", *spec.F));

    const ConnectionField lc = levi_civita(geo.g);
    const auto coefficients = [&](const std::string& path) {
        std::vector<Expr> out;
        for (std::size_t k = 0; k < n * n * n; ++k) {
            const std::size_t a = k / (n * n), i = (k / n) % n, j = k % n;
            out.push_back(parse_field(spec, path + "[" + std::to_string(a) + "][" + std::to_string(i) + "][" +
                                                std::to_string(j) + "]",
                                      spec.connection.coefficients[k]));
        }
        return TensorField::from_exprs(c, {Slot::Up, Slot::Down, Slot::Down}, std::move(out));
    };
    switch (spec.connection.kind) {
    case ConnectionKind::LeviCivita: geo.connection = lc; break;
    case ConnectionKind::Weyl: {
        const TensorField e = spec.connection.eta.empty()
                                  ? *geo.eta
                                  : TensorField::from_exprs(c, {Slot::Down}, parse_list(spec, "connection.eta", spec.connection.eta));
        geo.connection = weyl_connection(geo.g, e);
        if (!geo.eta) geo.eta = e;
        break;
    }
    case ConnectionKind::Deform: geo.connection = add_coefficients(lc, coefficients("connection.delta"), "deform"); break;
    case ConnectionKind::Explicit: geo.connection = explicit_connection(coefficients("connection.gamma")); break;
    }
    if (spec.vaisman) {
        geo.J = TensorField::from_exprs(c, {Slot::Up, Slot::Down}, parse_square(spec, "vaisman.J", spec.vaisman->J));
        geo.u = TensorField::from_exprs(c, {Slot::Down}, parse_list(spec, "vaisman.u", spec.vaisman->u));
    }
    return geo;
}

std::uint64_t sample_seed() {
    const char* env = std::getenv("SOLAB_SEED");
    if (env == nullptr || *env == '\0') return 0x5EED;
    std::size_t used = 0;
    std::uint64_t v = 0;
    try {
        v = std::stoull(env, &used, 0);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || env[used] != '\0') throw InputError(std::string("SOLAB_SEED: '") + env + "' is not an unsigned integer");
    return v;
}

std::vector<Point> random_points(const SampleDomain& domain, std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Point> out;
    out.reserve(count);
    std::size_t attempts = 0;
    while (out.size() < count) {
        if (++attempts > 1000 * (count + 1)) throw InputError("sample domain: radius shell misses the box");
        std::vector<double> x(domain.box.size());
        for (std::size_t i = 0; i < x.size(); ++i)
            x[i] = domain.box[i].first + (domain.box[i].second - domain.box[i].first) * uniform01(rng);
        if (domain.radius) {
            double r2 = 0.0;
            for (double v : x) r2 += v * v;
            const double r = std::sqrt(r2);
            if (r < domain.radius->first || r > domain.radius->second) continue;
        }
        out.emplace_back(std::move(x));
    }
    return out;
}

std::vector<Point> grid_points(const std::vector<GridAxis>& axes) {
    std::vector<std::vector<double>> acc{{}};
    for (const GridAxis& a : axes) {
        std::vector<std::vector<double>> next;
        for (const auto& prefix : acc)
            for (int k = 0; k < a.count; ++k) {
                auto x = prefix;
                x.push_back(a.count == 1 ? a.lo : a.lo + (a.hi - a.lo) * k / (a.count - 1));
                next.push_back(std::move(x));
            }
        acc = std::move(next);
    }
    std::vector<Point> out;
    for (auto& x : acc) out.emplace_back(std::move(x));
    return out;
}

std::vector<Point> default_samples(const GeometrySpec& spec, std::uint64_t seed) {
    std::vector<Point> out;
    if (spec.grid) {
        out = grid_points(*spec.grid);
    } else {
        SampleDomain d = spec.domain;
        if (d.box.empty()) d.box.assign(spec.dim(), {-1.0, 1.0});
        out = random_points(d, spec.sample_count, seed);
    }
    out.insert(out.end(), spec.points.begin(), spec.points.end());
    return out;
}

Point parse_point(const std::vector<std::string>& coords, const std::string& text) {
    const auto values = assignments(coords, text, "point '" + text + "'");
    std::vector<double> x;
    for (std::size_t i = 0; i < coords.size(); ++i) x.push_back(parse_number(values[i], coords[i]));
    return Point(std::move(x));
}

std::vector<GridAxis> parse_grid(const std::vector<std::string>& coords, const std::string& text) {
    const auto values = assignments(coords, text, "grid '" + text + "'");
    std::vector<GridAxis> axes;
    for (std::size_t i = 0; i < coords.size(); ++i) {
        const std::string& v = values[i];
        const auto c1 = v.find(':');
        const auto c2 = c1 == std::string::npos ? std::string::npos : v.find(':', c1 + 1);
        if (c2 == std::string::npos) throw InputError("grid axis " + coords[i] + ": expected lo:hi:count");
        GridAxis a;
        a.lo = parse_number(trim(v.substr(0, c1)), coords[i]);
        a.hi = parse_number(trim(v.substr(c1 + 1, c2 - c1 - 1)), coords[i]);
        const double count = parse_number(trim(v.substr(c2 + 1)), coords[i]);
        if (count < 1 || count != std::floor(count) || count > 1e6 || a.lo > a.hi)
            throw InputError("grid axis " + coords[i] + ": needs lo <= hi and a positive integer count");
        a.count = static_cast<int>(count);
        axes.push_back(a);
    }
    return axes;
}

} // namespace solab
