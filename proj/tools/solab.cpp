#include "solab/catalog.hpp"
#include "solab/errors.hpp"
#include "solab/loader.hpp"
#include "solab/report.hpp"
#include "solab/selftest.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>

namespace {

// Exit statuses.
constexpr int kPass = 0;
constexpr int kAssertionFailure = 1;
constexpr int kInputError = 2;

struct VerifyArgs {
    std::vector<std::string> at;
    std::string grid;
    std::string checks;
    bool json = false;
    double tol = 1e-9;
};

void add_verify_options(CLI::App* cmd, VerifyArgs& a) {
    cmd->add_option("--at", a.at, "sample point x=..,y=..; repeatable; replaces the default samples");
    cmd->add_option("--grid", a.grid, "grid x=lo:hi:count,...; replaces the default samples");
    cmd->add_option("--checks", a.checks, "comma-separated checks (gradient, lambda, inequalities, generalized, "
                                          "vaisman, weyl, torse, statistical, weak, shape)");
    cmd->add_flag("--json", a.json, "emit the JSON report");
    cmd->add_option("--tol", a.tol, "tolerance for residual norms and identity residuals");
}

int run_report(const solab::GeometrySpec& spec, const VerifyArgs& a) {
    if (!(a.tol > 0.0) || !std::isfinite(a.tol)) throw solab::InputError("--tol must be a positive number");
    solab::VerifyOptions o;
    o.tolerance = a.tol;
    if (!a.at.empty() || !a.grid.empty()) {
        std::vector<solab::Point> pts;
        if (!a.grid.empty()) pts = solab::grid_points(solab::parse_grid(spec.coords, a.grid));
        for (const auto& t : a.at) pts.push_back(solab::parse_point(spec.coords, t));
        o.points = std::move(pts);
    }
    std::stringstream names(a.checks);
    for (std::string item; std::getline(names, item, ',');) {
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        if (!item.empty()) o.checks.push_back(solab::check_from_string(item));
    }
    const solab::Report r = solab::run_verify(spec, o);
    std::cout << (a.json ? solab::to_json(r) : solab::to_text(r));
    return r.passed ? kPass : kAssertionFailure;
}

std::string range_text(const solab::ParamSpec& p) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s in %c%g, %g] (default %g)%s", p.name.c_str(), p.min_open ? '(' : '[', p.min, p.max,
                  p.default_value, p.integer ? ", integer" : "");
    return buf;
}

std::string signature(const solab::CatalogEntry& e) {
    std::string s = e.name + "(";
    for (std::size_t i = 0; i < e.params.size(); ++i) s += (i ? ", " : "") + e.params[i].name;
    return s + ")";
}

int catalog_list() {
    for (const auto& e : solab::catalog_entries()) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%-28s ", signature(e).c_str());
        std::cout << buf << e.summary << "\n";
    }
    return kPass;
}

int catalog_show(const std::string& invocation) {
    const solab::CatalogInstance c = solab::catalog_get(invocation);
    const solab::CatalogEntry* entry = nullptr;
    for (const auto& e : solab::catalog_entries())
        if (e.name == c.name) entry = &e;
    std::cout << "# " << c.invocation << ": " << entry->summary << "\n";
    for (const auto& p : entry->params) std::cout << "# parameter " << range_text(p) << "\n";
    if (!c.spec.checks.empty()) {
        std::cout << "# checks:";
        for (const auto& k : c.spec.checks) std::cout << ' ' << k;
        std::cout << "\n";
    }
    const auto where = [](const std::optional<solab::Point>& p) {
        if (!p) return std::string("everywhere");
        std::string s = "at (";
        char buf[32];
        for (std::size_t i = 0; i < p->dim(); ++i) {
            std::snprintf(buf, sizeof buf, "%s%.6g", i ? ", " : "", (*p)[i]);
            s += buf;
        }
        return s + ")";
    };
    for (const auto& e : c.spec.expected) {
        char buf[200];
        std::snprintf(buf, sizeof buf, "# expect %s = %.12g within %.1e %s (%s)\n", e.quantity.c_str(), e.value, e.tolerance,
                      where(e.point).c_str(), solab::to_string(e.provenance));
        std::cout << buf;
    }
    for (const auto& cl : c.spec.claims) {
        char buf[240];
        std::snprintf(buf, sizeof buf, "# printed %s = %.12g %s, reported only: %s\n", cl.quantity.c_str(), cl.printed,
                      where(cl.point).c_str(), cl.note.c_str());
        std::cout << buf;
    }
    std::cout << "\n" << solab::write_geometry(c.spec);
    return kPass;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ricci soliton verification engine"};
    app.require_subcommand(1);
    app.set_version_flag("--version", solab::kEngineVersion);

    VerifyArgs verify_args;
    std::string file;
    CLI::App* verify = app.add_subcommand("verify", "verify a geometry file");
    verify->add_option("file", file, "geometry file")->required();
    add_verify_options(verify, verify_args);

    CLI::App* catalog = app.add_subcommand("catalog", "built-in geometries");
    catalog->require_subcommand(1);
    catalog->add_subcommand("list", "list entries");
    std::string show_name;
    CLI::App* show = catalog->add_subcommand("show", "print an entry as a geometry file with its expected values");
    show->add_option("name", show_name, "entry, optionally with parameters: name(p1, p2)")->required();
    std::string cat_invocation;
    VerifyArgs catalog_args;
    CLI::App* cat_verify = catalog->add_subcommand("verify", "verify an entry against its expected values");
    cat_verify->add_option("entry", cat_invocation, "name(params)")->required();
    add_verify_options(cat_verify, catalog_args);

    bool selftest_json = false;
    CLI::App* selftest = app.add_subcommand("selftest", "run the acceptance criteria");
    selftest->add_flag("--json", selftest_json, "emit JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInputError;
    }

    try {
        if (verify->parsed()) return run_report(solab::load_geometry(file), verify_args);
        if (catalog->parsed()) {
            if (show->parsed()) return catalog_show(show_name);
            if (cat_verify->parsed()) return run_report(solab::catalog_get(cat_invocation).spec, catalog_args);
            return catalog_list();
        }
        if (selftest->parsed()) {
            const solab::SelftestReport r = solab::run_selftest(solab::sample_seed());
            std::cout << (selftest_json ? solab::selftest_json(r) : solab::selftest_text(r));
            return r.passed ? kPass : kAssertionFailure;
        }
    } catch (const solab::InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const solab::UnknownEntry& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const solab::ParamOutOfRange& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const solab::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kAssertionFailure;
    }
    return kInputError;
}
