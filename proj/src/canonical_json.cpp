#include "canonical_json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>

namespace solab {

namespace {

using nlohmann::json;

void dump_canonical(const json& j, std::string& out, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
    char buf[64];
    switch (j.type()) {
    case json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) out += ",\n";
            first = false;
            out += inner + json(it.key()).dump() + ": ";
            dump_canonical(it.value(), out, indent + 1);
        }
        out += "\n" + pad + "}";
        return;
    }
    case json::value_t::array: {
        if (j.empty()) {
            out += "[]";
            return;
        }
        const bool flat = std::all_of(j.begin(), j.end(), [](const json& x) { return x.is_primitive(); });
        if (flat) {
            out += "[";
            for (std::size_t k = 0; k < j.size(); ++k) {
                if (k) out += ", ";
                dump_canonical(j[k], out, indent + 1);
            }
            out += "]";
            return;
        }
        out += "[\n";
        for (std::size_t k = 0; k < j.size(); ++k) {
            if (k) out += ",\n";
            out += inner;
            dump_canonical(j[k], out, indent + 1);
        }
        out += "\n" + pad + "]";
        return;
    }
    case json::value_t::number_float: {
        const double v = j.get<double>();
        if (!std::isfinite(v)) {
            out += "null";
            return;
        }
        std::snprintf(buf, sizeof buf, "%.12e", v);
        out += buf;
        return;
    }
    case json::value_t::number_unsigned:
        std::snprintf(buf, sizeof buf, "%llu", static_cast<unsigned long long>(j.get<std::uint64_t>()));
        out += buf;
        return;
    case json::value_t::number_integer:
        std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(j.get<std::int64_t>()));
        out += buf;
        return;
    default: out += j.dump(); return;
    }
}

} // namespace

std::string canonical_json(const nlohmann::json& j) {
    std::string out;
    dump_canonical(j, out, 0);
    out += "\n";
    return out;
}

} // namespace solab
