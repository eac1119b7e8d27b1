#include "solab/random_expr.hpp"

#include <cstdio>

namespace solab {

namespace {

std::string pick_leaf(std::mt19937_64& rng, const std::vector<std::string>& coords) {
    if (rng() % 3 != 0) return coords[rng() % coords.size()];
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", -2.0 + 4.0 * uniform01(rng));
    std::string s = buf;
    return s[0] == '-' ? "(" + s + ")" : s;
}

} // namespace

std::string random_expression(std::mt19937_64& rng, const std::vector<std::string>& coords, int depth) {
    if (depth <= 0) return pick_leaf(rng, coords);
    const auto sub = [&] { return random_expression(rng, coords, depth - 1); };
    switch (rng() % 12) {
    case 0: return "(" + sub() + " + " + sub() + ")";
    case 1: return "(" + sub() + " - " + sub() + ")";
    case 2: return "(" + sub() + " * " + sub() + ")";
    case 3: return "(" + sub() + ") / (2 + (" + sub() + ")^2)";
    case 4: return "(" + sub() + ")^" + std::to_string(2 + rng() % 2);
    case 5: return "sin(" + sub() + ")";
    case 6: return "cos(" + sub() + ")";
    case 7: return "atan(" + sub() + ")";
    case 8: return "exp(sin(" + sub() + "))";
    case 9: return "log(2 + (" + sub() + ")^2)";
    case 10: return "sqrt(1 + (" + sub() + ")^2)";
    default: return "tanh(" + sub() + ")";
    }
}

} // namespace solab
