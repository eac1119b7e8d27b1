#pragma once

#include "solab/geometry.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace solab {

struct ParamSpec {
    std::string name;
    double default_value = 0.0;
    double min = 0.0;
    double max = 0.0;
    bool integer = false;
    bool min_open = false;  // excludes min itself (C > 0)
};

struct CatalogEntry {
    std::string name;
    std::string summary;
    std::vector<ParamSpec> params;
};

struct CatalogInstance {
    std::string name;
    std::string invocation;  // canonical "name(p1, p2)"
    std::map<std::string, double> params;
    GeometrySpec spec;  // carries the expected values, printed claims and default checks
};

const std::vector<CatalogEntry>& catalog_entries();

/// Throws UnknownEntry or ParamOutOfRange. Missing parameters take their defaults.
CatalogInstance catalog_get(const std::string& name, const std::map<std::string, double>& params);

/// Parses "name", "name()", "name(3)" or "name(n=3, lambda=0.5)"; positional values follow
/// the entry's parameter order. Throws InputError on malformed text.
CatalogInstance catalog_get(const std::string& invocation);

} // namespace solab
