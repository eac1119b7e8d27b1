#pragma once

#include <json.hpp>

#include <string>

namespace solab {

/// Keys sorted, two-space indent, floats as %.12e, non-finite floats as null, scalar-only
/// arrays on one line, trailing newline. Equal values give identical bytes.
std::string canonical_json(const nlohmann::json& j);

} // namespace solab
