#pragma once

#include "eop/poly.hpp"

#include <span>
#include <string>

namespace eop {

/// Reduced rational function num/den with monic denominator.
class RatFunc {
public:
    RatFunc() : den_(Poly::constant(Rational(1))) {}
    RatFunc(const Rational& c) : num_(Poly::constant(c)), den_(Poly::constant(Rational(1))) {}  // NOLINT
    RatFunc(int c) : RatFunc(Rational(c)) {}  // NOLINT
    RatFunc(Poly p) : num_(std::move(p)), den_(Poly::constant(Rational(1))) {}  // NOLINT

    /// gcd-reduces and scales so the denominator is monic. Throws on a zero denominator.
    static RatFunc normalize(const Poly& num, const Poly& den);

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.degree() == 0; }

    Rational operator()(const Rational& x) const;
    double eval(double x) const;

    RatFunc derivative() const;
    RatFunc inverse() const;
    /// r(q(x)) for a polynomial substitution q.
    RatFunc compose(const Poly& q) const;

    std::string str(const std::string& var = "x") const;

    friend RatFunc operator+(const RatFunc& a, const RatFunc& b);
    friend RatFunc operator-(const RatFunc& a, const RatFunc& b);
    friend RatFunc operator*(const RatFunc& a, const RatFunc& b);
    friend RatFunc operator/(const RatFunc& a, const RatFunc& b);
    friend RatFunc operator-(const RatFunc& a);
    friend RatFunc operator*(const RatFunc& a, const Rational& s);
    friend RatFunc operator*(const Rational& s, const RatFunc& a) { return a * s; }

    RatFunc& operator+=(const RatFunc& o) { return *this = *this + o; }
    RatFunc& operator-=(const RatFunc& o) { return *this = *this - o; }
    RatFunc& operator*=(const RatFunc& o) { return *this = *this * o; }

    friend bool operator==(const RatFunc& a, const RatFunc& b) = default;

private:
    RatFunc(Poly num, Poly den, int /*already reduced*/) : num_(std::move(num)), den_(std::move(den)) {}

    Poly num_;
    Poly den_;
};

/// Sum over a common denominator, reducing once at the end.
RatFunc sum(std::span<const RatFunc> terms);

}  // namespace eop
