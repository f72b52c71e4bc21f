#pragma once

#include "eop/rational.hpp"

#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace eop {

/// Dense univariate polynomial over Q, coefficients lowest degree first.
/// The zero polynomial has no coefficients; otherwise the leading one is nonzero.
class Poly {
public:
    Poly() = default;
    explicit Poly(std::vector<Rational> coeffs);
    Poly(std::initializer_list<Rational> coeffs) : Poly(std::vector<Rational>(coeffs)) {}

    static Poly constant(const Rational& c);
    static Poly monomial(const Rational& c, unsigned k);
    static Poly x() { return monomial(Rational(1), 1); }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    bool is_constant() const { return c_.size() <= 1; }
    std::span<const Rational> coeffs() const { return c_; }
    const Rational& coeff(std::size_t k) const;
    const Rational& leading() const;

    Rational operator()(const Rational& x) const;
    double eval(double x) const;

    Poly derivative() const;
    /// p(q(x)).
    Poly compose(const Poly& q) const;
    /// p(-x).
    Poly negate_arg() const;
    /// p(c x).
    Poly scale_arg(const Rational& c) const;

    Poly monic() const;
    /// gcd of numerators over lcm of denominators, sign matching the leading coefficient.
    Rational content() const;
    /// Integer coefficients with gcd 1 and positive leading coefficient.
    Poly primitive() const;

    std::string str(const std::string& var = "x") const;

    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    Poly& operator*=(const Rational& s);

    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator-(const Poly& a) { return a * Rational(-1); }
    friend Poly operator*(const Poly& a, const Poly& b);
    friend Poly operator*(Poly a, const Rational& s) { return a *= s; }
    friend Poly operator*(const Rational& s, Poly a) { return a *= s; }
    friend bool operator==(const Poly& a, const Poly& b) = default;

private:
    void trim();
    std::vector<Rational> c_;
};

/// Euclidean division: returns (q, r) with a = q b + r, deg r < deg b.
std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b);
/// Exact division; throws std::domain_error when b does not divide a.
Poly exact_div(const Poly& a, const Poly& b);
/// Monic gcd (zero only when both inputs are zero).
Poly gcd(const Poly& a, const Poly& b);

/// f g' - f' g.
Poly wronskian(const Poly& f, const Poly& g);

/// p(z) rewritten in x through z = x^2/2.
Poly substitute_half_square(const Poly& p_of_z);
/// Inverse of substitute_half_square; throws std::domain_error if p has odd powers.
Poly even_to_half_square(const Poly& p_of_x);

Poly pow(const Poly& base, unsigned exponent);

}  // namespace eop
