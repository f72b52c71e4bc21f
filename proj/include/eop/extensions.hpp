#pragma once

#include "eop/diffop.hpp"
#include "eop/families.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace eop {

enum class ExtensionFamily { Oscillator, Radial, HermiteExt, LagExtI, LagExtII, LagExtIII, LagExt2 };
enum class LaguerreCase { I, II, III };
enum class Variable { X, Z };

std::string_view to_string(ExtensionFamily f);

struct ExtensionParams {
    unsigned m = 0;
    unsigned m1 = 0;
    unsigned m2 = 0;
    std::optional<Rational> l;
};

/// V(x) = base(x) + rational_part(x) + constant, where base is x^2 or
/// x^2/4 + base_l(base_l+1)/x^2.
struct PotentialRecord {
    bool radial = false;
    Rational base_l;
    RatFunc rational_part;
    Rational constant;

    RatFunc base() const;
    RatFunc full() const { return base() + rational_part + RatFunc(constant); }
};

/// Levels E(nu) = ground + 2 nu for nu >= 0, plus an optional isolated negative nu.
struct Spectrum1D {
    Rational ground;
    std::optional<long> isolated_nu;

    Rational energy(long nu) const { return ground + Rational(2 * nu); }
    long min_nu() const { return isolated_nu.value_or(0); }
    bool contains_nu(long nu) const { return nu >= 0 || (isolated_nu && nu == *isolated_nu); }
    std::optional<long> nu_of(const Rational& e) const;
    /// Allowed nu in increasing order with energy <= e_max.
    std::vector<long> nus_up_to(const Rational& e_max) const;
};

/// exp(-x^2) / den(x)^2 dx (Hermite side) or z^power exp(-z) / den(z)^2 dz (Laguerre side).
struct WeightRecord {
    Variable var = Variable::X;
    Rational power;
    Poly denominator;
};

struct ExtensionSpec {
    ExtensionFamily family = ExtensionFamily::Oscillator;
    ExtensionParams params;
    std::optional<Rational> l_prime;
    Poly denominator;  // in x for Hermite, in z for Laguerre
    Variable denominator_var = Variable::X;
    PotentialRecord potential;
    Spectrum1D spectrum;
    WeightRecord weight;
    FactoredPoly ladder_p;
    std::optional<LadderSpec> ladder;
    std::vector<Rational> factorization_energies;
    std::optional<Supercharge> supercharge;
    DiffOp h_plus;
    DiffOp h_minus;
    /// Eigenfunctions of H+ are G(x) R(x) with G the ground-state factor of this base.
    bool base_radial = false;
    Rational base_l;
    /// Alpha appearing in the EOP weight and ODE (Laguerre families).
    std::optional<Rational> alpha;

    bool is_laguerre() const { return denominator_var == Variable::Z; }
    int ladder_order() const;
    std::string label() const;
};

struct BuildOptions {
    /// Build b = A a A^dagger symbolically; the factored P- is always available.
    bool compose_ladder = true;
};

ExtensionSpec build_oscillator(const BuildOptions& opts = {});
ExtensionSpec build_radial(const Rational& l, const BuildOptions& opts = {});
/// Throws ConstraintError("seed not nodeless") for odd m.
ExtensionSpec build_hermite_extension(unsigned m, const BuildOptions& opts = {});
ExtensionSpec build_laguerre_extension(LaguerreCase c, const Rational& l, unsigned m, const BuildOptions& opts = {});
ExtensionSpec build_laguerre2_extension(const Rational& l, unsigned m1, unsigned m2, const BuildOptions& opts = {});

struct EopPolynomial {
    long nu = 0;
    int n = 0;
    std::optional<Rational> alpha;
    Variable var = Variable::X;
    Poly coeffs;
};

/// The polynomial factor y_n of A psi+_nu, primitive with positive leading
/// coefficient. Throws ConstraintError when nu is outside the spectrum and
/// InvariantError("construction inconsistency") if the extraction is not polynomial.
EopPolynomial eop_from_supercharge(const ExtensionSpec& spec, long nu);

/// Expected degree n for a given nu.
int eop_degree(const ExtensionSpec& spec, long nu);

/// The second-order ODE of the family applied to y, cleared of denominators.
/// Zero means y satisfies it.
Poly eop_ode_residual(const ExtensionSpec& spec, const EopPolynomial& y);

struct Level2D {
    Rational energy;
    std::vector<std::pair<long, long>> states;  // (nu_x, nu_y)
};

/// All levels of H_x + H_y with energy <= e_max.
std::vector<Level2D> physical_spectrum(const Spectrum1D& sx, const Spectrum1D& sy, const Rational& e_max);

nlohmann::json to_json(const ExtensionSpec& spec);
nlohmann::json to_json(const EopPolynomial& y);

}  // namespace eop
