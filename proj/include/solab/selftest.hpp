#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace solab {

/// Outcome of one acceptance criterion. `metrics` holds the worst observed values.
struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;  // first violated bound, or a summary when passed
    std::map<std::string, double> metrics;
};

struct SelftestReport {
    std::string engine_version;
    std::string convention_hash;
    std::uint64_t seed = 0;
    std::vector<CriterionResult> criteria;
    bool passed = false;
};

/// Number of criteria run_selftest evaluates (1..13). The determinism criterion compares two
/// complete runs and lives with the callers.
inline constexpr int kSelftestCriteria = 13;

/// Runs criterion `id` in 1..13. Random instances derive from `seed` and `id`.
CriterionResult run_criterion(int id, std::uint64_t seed);

SelftestReport run_selftest(std::uint64_t seed);

std::string selftest_json(const SelftestReport& r);
std::string selftest_text(const SelftestReport& r);

} // namespace solab
