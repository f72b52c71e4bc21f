#include "eop/families.hpp"

#include "eop/errors.hpp"
#include "eop/sturm.hpp"

#include <string>

namespace eop {

Poly hermite(unsigned n) {
    Poly prev = Poly::constant(Rational(1));
    if (n == 0) return prev;
    const Poly two_x = Poly::monomial(Rational(2), 1);
    Poly cur = two_x;
    for (unsigned k = 1; k < n; ++k) {
        Poly next = two_x * cur - prev * Rational(2 * static_cast<long>(k));
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

Poly pseudo_hermite(unsigned m) {
    // (-i)^m i^k = (-1)^(m + (m+k)/2) for k of the same parity as m
    const Poly h = hermite(m);
    std::vector<Rational> c(h.coeffs().begin(), h.coeffs().end());
    for (std::size_t k = 0; k < c.size(); ++k) {
        if (c[k].is_zero()) continue;
        const std::size_t e = m + (m + k) / 2;
        if (e % 2 == 1) c[k] = -c[k];
    }
    return Poly(std::move(c));
}

Poly laguerre(unsigned m, const Rational& alpha, bool negate_arg) {
    // (k+1) L_{k+1} = (2k + 1 + alpha - z) L_k - (k + alpha) L_{k-1}
    Poly prev = Poly::constant(Rational(1));
    Poly cur = prev;
    if (m >= 1) cur = Poly{alpha + Rational(1), Rational(-1)};
    for (unsigned k = 1; k < m; ++k) {
        const Rational kk(static_cast<long>(k));
        const Poly lin{Rational(2) * kk + Rational(1) + alpha, Rational(-1)};
        Poly next = (lin * cur - prev * (kk + alpha)) * Rational(1, static_cast<long>(k) + 1);
        prev = std::move(cur);
        cur = std::move(next);
    }
    return negate_arg ? cur.negate_arg() : cur;
}

std::string_view to_string(SeedFamily f) {
    switch (f) {
        case SeedFamily::HermitePseudo: return "hermite-pseudo";
        case SeedFamily::LaguerreI: return "laguerre-I";
        case SeedFamily::LaguerreII: return "laguerre-II";
        case SeedFamily::LaguerreIII: return "laguerre-III";
    }
    return "?";
}

Rational SeedSolution::l() const { return alpha ? *alpha - Rational(1, 2) : Rational(0); }

Poly SeedSolution::polynomial_in_x() const {
    return is_laguerre() ? substitute_half_square(polynomial_part) : polynomial_part;
}

RatFunc SeedSolution::log_derivative() const {
    const Poly p = polynomial_in_x();
    RatFunc prefactor_part;
    if (is_laguerre()) {
        // d/dx log(z^s e^{e z/2}) = 2 s / x + e x / 2
        prefactor_part = RatFunc::normalize(Poly{Rational(2) * prefactor.power, Rational(0),
                                                 Rational(prefactor.exp_sign, 2)},
                                            Poly::x());
    } else {
        prefactor_part = RatFunc::normalize(Poly{prefactor.power, Rational(0), Rational(prefactor.exp_sign)},
                                            Poly::x());
    }
    return prefactor_part + RatFunc::normalize(p.derivative(), p);
}

SeedSolution seed_solution(SeedFamily family, const Rational& l, unsigned m) {
    SeedSolution s;
    s.family = family;
    s.m = m;
    const Rational mm(static_cast<long>(m));
    const std::string tag = std::string(to_string(family)) + " seed (m=" + std::to_string(m) + ")";

    if (family == SeedFamily::HermitePseudo) {
        if (m % 2 != 0) throw ConstraintError(tag + ": seed not nodeless, m must be even");
        s.polynomial_part = pseudo_hermite(m);
        s.prefactor = {Rational(0), +1};
        s.energy = -(Rational(2) * mm + Rational(1));
        if (sturm_count(s.polynomial_part, Interval::real_line()) != 0)
            throw ConstraintError(tag + ": seed has nodes on domain");
        return s;
    }

    const Rational alpha = l + Rational(1, 2);
    s.alpha = alpha;
    switch (family) {
        case SeedFamily::LaguerreI:
            if (alpha <= Rational(-1))
                throw ConstraintError(tag + ": requires alpha = l + 1/2 > -1, got alpha = " + alpha.str());
            s.polynomial_part = laguerre(m, alpha, true);
            s.prefactor = {(Rational(2) * alpha + Rational(1)) / Rational(4), +1};
            s.energy = -(alpha + Rational(2) * mm + Rational(1));
            break;
        case SeedFamily::LaguerreII:
        case SeedFamily::LaguerreIII:
            if (family == SeedFamily::LaguerreIII && m % 2 != 0)
                throw ConstraintError(tag + ": case III requires m even");
            // Nodelessness of L_m^(-alpha)(+-z) on z > 0; this is the partner-side
            // constraint alpha' > m - 1 with alpha' = alpha - 1.
            if (alpha <= mm)
                throw ConstraintError(tag + ": requires alpha > m (partner constraint alpha > m - 1), got alpha = " +
                                      alpha.str());
            s.polynomial_part = laguerre(m, -alpha, family == SeedFamily::LaguerreIII);
            s.prefactor = {-(Rational(2) * alpha - Rational(1)) / Rational(4),
                           family == SeedFamily::LaguerreII ? -1 : +1};
            s.energy = family == SeedFamily::LaguerreII ? -(alpha - Rational(2) * mm - Rational(1))
                                                        : alpha - Rational(2) * mm - Rational(1);
            break;
        case SeedFamily::HermitePseudo: break;
    }
    if (sturm_count(s.polynomial_part, Interval::positive_half_line()) != 0)
        throw ConstraintError(tag + ": seed has nodes on domain");
    return s;
}

}  // namespace eop
