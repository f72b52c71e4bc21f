#pragma once

#include "eop/poly.hpp"
#include "eop/ratfunc.hpp"

#include <optional>
#include <string_view>

namespace eop {

/// Physicists' Hermite polynomial H_n.
Poly hermite(unsigned n);

/// Pseudo-Hermite polynomial (-i)^m H_m(ix); all coefficients nonnegative.
Poly pseudo_hermite(unsigned m);

/// Generalized Laguerre polynomial L_m^(alpha)(z), or L_m^(alpha)(-z) when negate_arg.
Poly laguerre(unsigned m, const Rational& alpha, bool negate_arg = false);

enum class SeedFamily { HermitePseudo, LaguerreI, LaguerreII, LaguerreIII };

std::string_view to_string(SeedFamily f);

/// Non-polynomial factor of a seed, kept symbolic.
/// Hermite: x^power * exp(exp_sign * x^2 / 2).  Laguerre: z^power * exp(exp_sign * z / 2).
struct Prefactor {
    Rational power;
    int exp_sign = 0;

    friend bool operator==(const Prefactor&, const Prefactor&) = default;
};

/// Nodeless, non-normalizable solution of the oscillator (Hermite) or the
/// radial oscillator with alpha = l + 1/2 (Laguerre), used to build a supercharge.
struct SeedSolution {
    SeedFamily family = SeedFamily::HermitePseudo;
    unsigned m = 0;
    std::optional<Rational> alpha;
    Poly polynomial_part;  // in x for Hermite, in z = x^2/2 for Laguerre
    Prefactor prefactor;
    Rational energy;

    bool is_laguerre() const { return family != SeedFamily::HermitePseudo; }
    /// Angular momentum l = alpha - 1/2 of the radial potential the seed solves.
    Rational l() const;
    /// polynomial_part expressed in x.
    Poly polynomial_in_x() const;
    /// phi'/phi as a rational function of x.
    RatFunc log_derivative() const;
};

/// Builds and certifies a seed. `l` is ignored for HermitePseudo.
/// Throws ConstraintError on a violated parameter constraint or when the
/// polynomial part has a zero on the physical domain.
SeedSolution seed_solution(SeedFamily family, const Rational& l, unsigned m);

}  // namespace eop
