#pragma once

#include "solab/geometry.hpp"

#include <string>

namespace solab {

/// Reads a geometry file: sections [manifold], [metric], [potential], [soliton], [connection],
/// [vaisman], [immersion], [sample] of `key = value` lines. Values are quoted strings, numbers,
/// true/false or bracketed arrays, which may span lines. The returned spec has been compiled
/// once, so every expression parses. Throws InputError with "file:line:column" on bad input.
GeometrySpec load_geometry(const std::string& path);

/// Same, from text; `filename` only labels messages.
GeometrySpec parse_geometry(const std::string& text, const std::string& filename = "<input>");

/// Geometry file text that parse_geometry reads back to the same fields. Expected values,
/// printed claims and default checks are not part of the format and are omitted.
std::string write_geometry(const GeometrySpec& spec);

} // namespace solab
