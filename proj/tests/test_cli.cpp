#include <doctest.h>

#include <array>
#include <cstdio>
#include <string>
#include <sys/wait.h>

namespace {

const std::string kCli = SOLAB_CLI;
const std::string kData = SOLAB_DATA_DIR;

struct Run {
    int status = -1;
    std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + (env.empty() ? "" : " ") + "'" + kCli + "' " + args + " 2>/dev/null";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    const int st = pclose(pipe);
    r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

} // namespace

TEST_CASE("exit 0: passing verification") {
    CHECK(run("verify '" + kData + "/cigar.geom' --at x=0,y=0 --checks gradient,lambda,inequalities").status == 0);
    CHECK(run("verify '" + kData + "/cylinder3.geom'").status == 0);
    CHECK(run("verify '" + kData + "/hopf.geom' --checks vaisman").status == 0);
    CHECK(run("catalog verify 'gaussian(3, 2)'").status == 0);
    CHECK(run("catalog list").status == 0);
    CHECK(run("catalog show cigar").status == 0);
}

TEST_CASE("exit 1: assertion failures") {
    CHECK(run("verify '" + kData + "/negative.geom'").status == 1);
    // Tightening the tolerance below the round-off of the cone residuals fails the run.
    CHECK(run("catalog verify 'cone(3)' --tol 1e-40").status == 1);
    CHECK(run("catalog verify cigar --at x=0.5,y=0 --checks weak").status == 1);
}

TEST_CASE("exit 2: input errors") {
    CHECK(run("verify '" + kData + "/missing_coords.geom'").status == 2);
    CHECK(run("verify '" + kData + "/nope.geom'").status == 2);
    CHECK(run("verify '" + kData + "/cigar.geom' --checks vaisman").status == 2);
    CHECK(run("verify '" + kData + "/cigar.geom' --checks nonsense").status == 2);
    CHECK(run("verify '" + kData + "/cigar.geom' --at x=0").status == 2);
    CHECK(run("verify '" + kData + "/cigar.geom' --tol -1").status == 2);
    CHECK(run("catalog show nonexistent").status == 2);
    CHECK(run("catalog verify 'cone(3, -1)'").status == 2);
    CHECK(run("verify").status == 2);
    CHECK(run("frobnicate").status == 2);
    CHECK(run("verify '" + kData + "/cigar.geom'", "SOLAB_SEED=abc").status == 2);
}

TEST_CASE("JSON output is byte-identical across runs and follows SOLAB_SEED") {
    const std::string args = "verify '" + kData + "/cigar.geom' --json";
    const Run a = run(args), b = run(args);
    CHECK(a.status == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.find("\"seed\": 24301") != std::string::npos);  // 0x5EED
    const Run c = run(args, "SOLAB_SEED=7");
    CHECK(c.out.find("\"seed\": 7") != std::string::npos);
    CHECK(c.out != a.out);
    CHECK(run(args, "SOLAB_SEED=7").out == c.out);
}

TEST_CASE("catalog show prints a loadable geometry file") {
    const Run r = run("catalog show 'cylinder(4)'");
    REQUIRE(r.status == 0);
    CHECK(r.out.find("# printed normRic2") != std::string::npos);
    CHECK(r.out.find("[metric]") != std::string::npos);
    const std::string path = std::string(SOLAB_TMP_DIR) + "/cylinder4.geom";
    FILE* f = fopen(path.c_str(), "w");
    REQUIRE(f != nullptr);
    fwrite(r.out.data(), 1, r.out.size(), f);
    fclose(f);
    CHECK(run("verify '" + path + "'").status == 0);
}
