#pragma once

#include "eop/extensions.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace eop {

enum class SystemCase { H1, H2, LagI, LagII, LagIII, Lag2 };

std::string_view to_string(SystemCase c);
std::optional<SystemCase> parse_system_case(std::string_view s);

struct SystemParams {
    unsigned m = 0;
    unsigned m1 = 0;
    unsigned m2 = 0;
    std::optional<Rational> l;
};

/// c * prod (h - roots[i]) with roots kept in construction order, which fixes
/// the numbering of u-branches.
struct OrderedFactors {
    Rational constant{1};
    std::vector<Rational> roots;
};

/// H = H_x + H_y with ladder polynomials Q (x axis) and S (y axis).
struct System2D {
    SystemCase kind = SystemCase::H1;
    SystemParams params;
    ExtensionSpec hx;
    ExtensionSpec hy;
    Rational lambda_x{2};
    Rational lambda_y{2};
    unsigned n1 = 1;
    unsigned n2 = 1;
    OrderedFactors q;
    OrderedFactors s;

    Rational lambda() const { return lambda_x * Rational(static_cast<long>(n1)); }
    std::string label() const;
};

/// Ladder polynomial of a 1D spec in construction order: base roots, then
/// E + lambda and E for each factorization energy E.
OrderedFactors ordered_ladder_polynomial(const ExtensionSpec& spec);

System2D build_system(SystemCase c, const SystemParams& p, const BuildOptions& opts = BuildOptions{false});

/// Net change of K under I+, (n1 lambda_x + n2 lambda_y) / (2 lambda); [K, I+] = I+ requires 1.
Rational k_shift(const System2D& sys);

/// cE E + cx x + cu u + c0.
struct AffineForm {
    Rational cE, cx, cu, c0;
    Rational operator()(const Rational& e, const Rational& u, const Rational& x) const {
        return cE * e + cx * x + cu * u + c0;
    }
    friend bool operator==(const AffineForm&, const AffineForm&) = default;
};

struct StructureFunction {
    Rational constant{1};
    std::vector<AffineForm> factors;
    Rational lambda{2};

    Rational operator()(const Rational& e, const Rational& u, const Rational& x) const;
    std::string str() const;
};

StructureFunction structure_function(const System2D& sys);

/// u = cE E + c0, the root of one factor at x = 0.
struct UBranch {
    int index = 0;  // 1-based, in factor order
    Rational cE, c0;
    std::vector<int> aliases;  // later factors giving the same branch
};

/// One branch per factor; coincident branches are merged into the first.
/// Throws ConstraintError("no root branch") for a factor that is a nonzero constant at x = 0.
std::vector<UBranch> u_roots(const StructureFunction& phi);

/// cn n + cp p + c0: a factor of the reduced structure function or a state index.
struct Affine2 {
    Rational cn, cp, c0;
    Rational operator()(const Rational& n, const Rational& p) const { return cn * n + cp * p + c0; }
    std::string str(const std::string& var = "x") const;
    friend bool operator==(const Affine2&, const Affine2&) = default;
};

/// constant * prod factors; each factor scaled so its p coefficient (or, absent
/// p, its x coefficient) is 1, factors sorted.
struct ReducedPhi {
    Rational constant{1};
    std::vector<Affine2> factors;

    static ReducedPhi canonical(Rational constant, std::vector<Affine2> factors);
    /// Fixes p, leaving a polynomial in x only.
    ReducedPhi at_p(const Rational& p) const;
    std::string str() const;
    friend bool operator==(const ReducedPhi&, const ReducedPhi&) = default;
};

struct RepSolution {
    int branch = 0;
    int closing_factor = 0;  // 1-based factor index that vanishes at x = p + 1
    bool all_p = false;      // p ranges over all naturals
    long p = 0;              // meaningful when !all_p
    Rational e_slope, e_intercept;  // E = e_slope p + e_intercept
    Rational u_cE, u_c0;
    ReducedPhi phi;
    Affine2 nu_x, nu_y;  // matched physical state of Fock index n
    std::optional<std::size_t> duplicate_of;

    Rational energy_at(long pp) const { return e_slope * Rational(pp) + e_intercept; }
    Rational energy() const { return energy_at(p); }
};

struct BranchReport {
    int index = 0;
    Rational cE, c0;
    std::vector<int> aliases;
    int solutions = 0;
    int positivity_failures = 0;
    int spectrum_failures = 0;
    /// (factor, p) pairs where an E-independent factor closes the chain.
    std::vector<std::pair<int, long>> unconstrained;
};

struct RepSearch {
    std::vector<RepSolution> solutions;
    std::vector<BranchReport> branches;
};

struct EnumerateOptions {
    long pmax = 50;
    bool physical_filter = true;
    unsigned jobs = 1;
};

RepSearch enumerate_reps(const StructureFunction& phi, const Spectrum1D& sx, const Spectrum1D& sy,
                         const EnumerateOptions& opts = {});

struct LevelReport {
    Rational energy;
    std::vector<std::pair<long, long>> physical;
    std::vector<std::pair<long, long>> covered;
    std::vector<std::pair<long, long>> holes;
};

struct HoleReport {
    std::vector<LevelReport> levels;
    std::size_t total_holes = 0;
};

/// Compares the physical states of every level up to e_max with the states
/// reached by the representations.
HoleReport detect_holes(const RepSearch& reps, const Spectrum1D& sx, const Spectrum1D& sy, const Rational& e_max);

nlohmann::json to_json(const System2D& sys);
nlohmann::json to_json(const RepSearch& r);
nlohmann::json to_json(const HoleReport& h);

}  // namespace eop
