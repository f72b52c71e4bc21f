#include "eop/ratfunc.hpp"

#include <stdexcept>
#include <vector>

namespace eop {

namespace {

bool is_one(const Poly& p) { return p.degree() == 0 && p.leading() == Rational(1); }

}  // namespace

RatFunc RatFunc::normalize(const Poly& num, const Poly& den) {
    if (den.is_zero()) throw std::domain_error("rational function with zero denominator");
    if (num.is_zero()) return {};
    if (den.degree() == 0) return RatFunc(num * den.leading().inverse(), Poly::constant(Rational(1)), 0);
    const Poly g = gcd(num, den);
    Poly n = g.degree() > 0 ? exact_div(num, g) : num;
    Poly d = g.degree() > 0 ? exact_div(den, g) : den;
    const Rational lead_inv = d.leading().inverse();
    return RatFunc(n * lead_inv, d * lead_inv, 0);
}

Rational RatFunc::operator()(const Rational& x) const {
    const Rational d = den_(x);
    if (d.is_zero()) throw std::domain_error("rational function evaluated at a pole");
    return num_(x) / d;
}

double RatFunc::eval(double x) const { return num_.eval(x) / den_.eval(x); }

RatFunc RatFunc::derivative() const {
    if (is_polynomial()) return RatFunc(num_.derivative());
    const Poly dd = den_.derivative();
    const Poly g = gcd(den_, dd);
    const Poly d_red = exact_div(den_, g);
    const Poly dd_red = exact_div(dd, g);
    return normalize(num_.derivative() * d_red - num_ * dd_red, den_ * d_red);
}

RatFunc RatFunc::inverse() const {
    if (num_.is_zero()) throw std::domain_error("inverse of zero rational function");
    const Rational s = num_.leading().inverse();
    return RatFunc(den_ * s, num_ * s, 0);
}

RatFunc RatFunc::compose(const Poly& q) const { return normalize(num_.compose(q), den_.compose(q)); }

std::string RatFunc::str(const std::string& var) const {
    if (is_polynomial()) return num_.str(var);
    return "(" + num_.str(var) + ")/(" + den_.str(var) + ")";
}

RatFunc operator+(const RatFunc& a, const RatFunc& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.den_ == b.den_) {
        if (is_one(a.den_)) return RatFunc(a.num_ + b.num_);
        return RatFunc::normalize(a.num_ + b.num_, a.den_);
    }
    if (is_one(a.den_)) return RatFunc(a.num_ * b.den_ + b.num_, b.den_, 0);
    if (is_one(b.den_)) return RatFunc(b.num_ * a.den_ + a.num_, a.den_, 0);
    const Poly g = gcd(a.den_, b.den_);
    if (g.degree() == 0) return RatFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_, 0);
    const Poly ar = exact_div(a.den_, g);
    const Poly br = exact_div(b.den_, g);
    Poly num = a.num_ * br + b.num_ * ar;
    Poly den = a.den_ * br;
    if (num.is_zero()) return {};
    const Poly h = gcd(num, g);
    if (h.degree() > 0) {
        num = exact_div(num, h);
        den = exact_div(den, h);
    }
    return RatFunc(std::move(num), std::move(den), 0);
}

RatFunc operator-(const RatFunc& a) { return RatFunc(-a.num_, a.den_, 0); }

RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }

RatFunc operator*(const RatFunc& a, const Rational& s) {
    if (s.is_zero()) return {};
    return RatFunc(a.num_ * s, a.den_, 0);
}

RatFunc operator*(const RatFunc& a, const RatFunc& b) {
    if (a.is_zero() || b.is_zero()) return {};
    const bool a_poly = is_one(a.den_);
    const bool b_poly = is_one(b.den_);
    if (a_poly && b_poly) return RatFunc(a.num_ * b.num_);
    Poly an = a.num_, ad = a.den_, bn = b.num_, bd = b.den_;
    if (!b_poly) {
        const Poly g1 = gcd(an, bd);
        if (g1.degree() > 0) {
            an = exact_div(an, g1);
            bd = exact_div(bd, g1);
        }
    }
    if (!a_poly) {
        const Poly g2 = gcd(bn, ad);
        if (g2.degree() > 0) {
            bn = exact_div(bn, g2);
            ad = exact_div(ad, g2);
        }
    }
    return RatFunc(an * bn, ad * bd, 0);
}

RatFunc operator/(const RatFunc& a, const RatFunc& b) { return a * b.inverse(); }

RatFunc sum(std::span<const RatFunc> terms) {
    // Terms sharing a denominator are merged before any gcd work.
    std::vector<RatFunc> groups;
    std::vector<Poly> nums;
    for (const auto& t : terms) {
        if (t.is_zero()) continue;
        bool merged = false;
        for (std::size_t i = 0; i < groups.size(); ++i) {
            if (groups[i].den() == t.den()) {
                nums[i] += t.num();
                merged = true;
                break;
            }
        }
        if (!merged) {
            groups.push_back(t);
            nums.push_back(t.num());
        }
    }
    RatFunc acc;
    for (std::size_t i = 0; i < groups.size(); ++i) acc = acc + RatFunc::normalize(nums[i], groups[i].den());
    return acc;
}

}  // namespace eop
