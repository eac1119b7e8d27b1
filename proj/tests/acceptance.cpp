// Acceptance run: one PASS/FAIL line per criterion; exit status 1 when any fails.
#include "solab/geometry.hpp"
#include "solab/selftest.hpp"

#include <array>
#include <chrono>
#include <cstdio>
#include <string>
#include <sys/wait.h>

namespace {

struct Captured {
    int status = -1;
    std::string out;
};

Captured capture(const std::string& cmd) {
    Captured c;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (pipe == nullptr) return c;
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) c.out.append(buf.data(), n);
    const int st = pclose(pipe);
    c.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return c;
}

// Two complete `selftest --json` runs must agree byte for byte.
solab::CriterionResult determinism() {
    solab::CriterionResult r;
    r.id = 14;
    r.name = "determinism";
    const std::string cmd = std::string("'") + SOLAB_CLI + "' selftest --json";
    const Captured a = capture(cmd), b = capture(cmd);
    if (a.out.empty() || a.status < 0 || a.status > 1) {
        r.detail = "selftest --json exited with status " + std::to_string(a.status);
        return r;
    }
    r.passed = a.out == b.out && a.status == b.status;
    r.detail = r.passed ? "two runs identical (" + std::to_string(a.out.size()) + " bytes)"
                        : "outputs differ between runs";
    return r;
}

} // namespace

int main() {
    const auto start = std::chrono::steady_clock::now();
    const std::uint64_t seed = solab::sample_seed();
    bool all = true;
    auto print = [&all](const solab::CriterionResult& c) {
        std::printf("%s %2d %s: %s\n", c.passed ? "PASS" : "FAIL", c.id, c.name.c_str(), c.detail.c_str());
        std::fflush(stdout);
        all = all && c.passed;
    };
    for (int id = 1; id <= solab::kSelftestCriteria; ++id) print(solab::run_criterion(id, seed));
    print(determinism());
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s in %.2f s\n", all ? "all criteria passed" : "some criteria failed", secs);
    return all ? 0 : 1;
}
