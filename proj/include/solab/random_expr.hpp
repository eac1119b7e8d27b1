#pragma once

#include <random>
#include <string>
#include <vector>

namespace solab {

/// Random smooth expression text over `coords`, finite with bounded derivatives on [-1, 1]^n.
/// Logs, roots and quotients are guarded (log(2+u^2), sqrt(1+u^2), u/(2+v^2)) so the whole
/// cube is in the domain.
std::string random_expression(std::mt19937_64& rng, const std::vector<std::string>& coords, int depth = 3);

/// Uniform double in [0, 1) from the top 53 bits of one draw.
inline double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

} // namespace solab
