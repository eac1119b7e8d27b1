#pragma once

#include "solab/geometry.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace solab {

inline constexpr const char* kEngineVersion = "1.0.0";

enum class Check { Gradient, Lambda, Inequalities, Generalized, Vaisman, Weyl, Torse, Statistical, Weak, Shape };
const char* to_string(Check c);
/// Throws InputError for unknown names.
Check check_from_string(const std::string& s);
const std::vector<Check>& all_checks();

/// Sign and index conventions the numbers depend on, one line each.
const std::vector<std::string>& convention_ledger();
/// FNV-1a 64 of the ledger lines joined by '\n', as 16 hex digits.
std::string convention_hash();

/// Rounds to the value "%.12e" prints, so reports survive a JSON round trip exactly.
double quantize(double v);

struct QuadraticReport {
    double a = 0.0, b = 0.0, c = 0.0, disc = 0.0;
    std::vector<double> roots;
    bool double_root = false;
    bool operator==(const QuadraticReport&) const = default;
};

struct GradientSection {
    double residual6_norm2 = 0.0;
    std::vector<double> hessian_eigen;
    double laplacian = 0.0, normH2 = 0.0, normRic2 = 0.0, scalarR = 0.0;
    std::optional<double> gauss;
    double ricci_max_abs = 0.0;
    std::string classification;
    bool hessian_equals_ricci = false, hessian_equals_minus_ricci = false, harmonic = false, scalar_flat = false;
    bool operator==(const GradientSection&) const = default;
};

struct LambdaSection {
    QuadraticReport q11, q17;
    double companion11 = 0.0, companion17 = 0.0;
    double trace16_residual = 0.0, identity10_residual = 0.0;
    double companion11_tensor_residual = 0.0;
    double root_residual = 0.0;  // max |q(root)| over both quadratics
    bool operator==(const LambdaSection&) const = default;
};

struct InequalitySection {
    double margin13 = 0.0, margin19 = 0.0;
    std::vector<double> double20;  // left, middle, right
    bool ordered = false;
    bool operator==(const InequalitySection&) const = default;
};

struct GeneralizedSection {
    double norm2 = 0.0;
    std::string connection;
    bool operator==(const GeneralizedSection&) const = default;
};

struct VaismanSection {
    double soliton_norm2 = 0.0, recurrence_error = 0.0, recurrence_fit = 0.0, torsion_error = 0.0, torsion_UV = 0.0;
    bool operator==(const VaismanSection&) const = default;
};

struct TorseSection {
    double f = 0.0;
    std::vector<double> gamma;
    double gamma_minus_eta = 0.0;     // max |gamma - xi flat|; zero for special fields
    double eta_einstein_norm2 = 0.0;  // Q + (lambda + f) I + eta (x) xi
    double identity_residual = 0.0;   // residual(mu = 0) - eta-Einstein residual - torse-forming defect
    bool operator==(const TorseSection&) const = default;
};

struct StatisticalSection {
    double duality_residual = 0.0, mean_identity_residual = 0.0, ricci_asymmetry = 0.0;
    double residual_conn = 0.0, residual_dual = 0.0, residual_mean = 0.0;
    bool operator==(const StatisticalSection&) const = default;
};

struct WeakSection {
    double norm2 = 0.0;
    double route_difference = 0.0;   // curvature route against the double exterior derivative
    double divergence_identity = 0.0;  // max |div Riem + d Q|
    bool operator==(const WeakSection&) const = default;
};

struct ShapeSection {
    std::vector<double> eigenvalues;
    bool eta_umbilical = false;
    bool umbilical = false;
    std::optional<double> sigma, rho;
    double reconstruction_error = 0.0;
    double identity_residual = 0.0;  // shape residual with nabla xi taken from the decomposition
    std::optional<double> soliton_norm2;
    bool operator==(const ShapeSection&) const = default;
};

struct PointReport {
    std::vector<double> point;
    std::optional<GradientSection> gradient;
    std::optional<LambdaSection> lambda;
    std::optional<InequalitySection> inequalities;
    std::optional<GeneralizedSection> generalized;
    std::optional<VaismanSection> vaisman;
    std::optional<TorseSection> torse;
    std::optional<StatisticalSection> statistical;
    std::optional<WeakSection> weak;
    std::optional<ShapeSection> shape;
    bool operator==(const PointReport&) const = default;
};

struct VaismanPremises {
    double J2 = 0.0, hermitian = 0.0, unit_u = 0.0, covariant_V = 0.0;
    bool operator==(const VaismanPremises&) const = default;
};

struct WeylSection {
    double delta_lambda = 0.0, delta_mu = 0.0, fit_residual = 0.0, identity_residual = 0.0, xi_norm2 = 0.0;
    bool operator==(const WeylSection&) const = default;
};

struct ExpectedResult {
    std::string quantity;
    std::optional<std::vector<double>> point;  // absent: worst case over all samples
    double expected = 0.0;
    std::optional<double> computed;            // absent when the quantity could not be evaluated
    double tolerance = 0.0;
    std::string provenance;
    bool passed = false;
    bool operator==(const ExpectedResult&) const = default;
};

/// A printed value set against the engine's value; informational only.
struct ClaimResult {
    std::string quantity;
    std::optional<std::vector<double>> point;
    double printed = 0.0;
    std::optional<double> computed;
    bool matched = false;
    std::string note;
    bool operator==(const ClaimResult&) const = default;
};

struct Failure {
    std::string check;
    std::optional<std::vector<double>> point;
    std::string message;
    bool operator==(const Failure&) const = default;
};

struct Report {
    std::string engine_version;
    std::string convention_hash;
    std::string geometry;
    std::vector<std::string> coords;
    std::uint64_t seed = 0;
    double tolerance = 0.0;
    std::vector<std::string> checks;
    std::optional<double> lambda;
    std::optional<double> mu;
    std::optional<std::string> classification;
    std::vector<PointReport> points;
    std::optional<std::vector<double>> constant_roots11;
    std::optional<VaismanPremises> vaisman_premises;
    std::optional<WeylSection> weyl;
    std::vector<ExpectedResult> expected;
    std::vector<ClaimResult> paper_claims;
    std::vector<Failure> failures;
    bool passed = false;
    bool operator==(const Report&) const = default;
};

struct VerifyOptions {
    std::optional<std::vector<Point>> points;  // replaces the default sample set
    std::vector<Check> checks;                 // empty: the spec's checks, else every compatible one
    double tolerance = 1e-9;                   // bound on residual norms and identity residuals
    std::optional<std::uint64_t> seed;         // default sample_seed()
};

/// Checks that make sense for the spec's contents.
std::vector<Check> compatible_checks(const GeometrySpec& spec);
/// Throws InputError when `check` needs data the spec lacks.
void require_compatible(const GeometrySpec& spec, Check check);

/// Runs the checks at every sample point. Numerical failures (non-positive metric, premise
/// violations, failed fits) are recorded as failures; invalid input throws InputError.
Report run_verify(const GeometrySpec& spec, const VerifyOptions& options = {});

/// Value of a named quantity at one point of a finished report, if that section exists.
std::optional<double> report_quantity(const Report& r, const PointReport& p, const std::string& name);

std::string to_json(const Report& r);
Report report_from_json(const std::string& text);
std::string to_text(const Report& r);

} // namespace solab
