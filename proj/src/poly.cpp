#include "eop/poly.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace eop {

namespace {

const Rational kZero{};

using ZPoly = std::vector<mpz_class>;

void trim_z(ZPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

void make_primitive_z(ZPoly& p) {
    trim_z(p);
    if (p.empty()) return;
    mpz_class g = 0;
    for (const auto& c : p) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
        if (g == 1) break;
    }
    if (p.back() < 0) g = -g;
    if (g != 1)
        for (auto& c : p) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
}

ZPoly to_primitive_z(const Poly& p) {
    mpz_class l = 1;
    for (const auto& c : p.coeffs()) {
        const mpz_class d = c.den();
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), d.get_mpz_t());
    }
    ZPoly out;
    out.reserve(p.coeffs().size());
    for (const auto& c : p.coeffs()) out.push_back(c.num() * (l / c.den()));
    make_primitive_z(out);
    return out;
}

// In-place pseudo-remainder of a by b (b nonzero, primitive).
void pseudo_rem_z(ZPoly& a, const ZPoly& b) {
    const std::size_t db = b.size() - 1;
    const mpz_class& lb = b.back();
    while (!a.empty() && a.size() - 1 >= db) {
        const std::size_t shift = a.size() - 1 - db;
        const mpz_class la = a.back();
        for (auto& c : a) c *= lb;
        for (std::size_t i = 0; i <= db; ++i) a[i + shift] -= la * b[i];
        trim_z(a);
    }
}

}  // namespace

Poly::Poly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

void Poly::trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

Poly Poly::constant(const Rational& c) { return Poly(std::vector<Rational>{c}); }

Poly Poly::monomial(const Rational& c, unsigned k) {
    std::vector<Rational> v(k + 1);
    v[k] = c;
    return Poly(std::move(v));
}

const Rational& Poly::coeff(std::size_t k) const { return k < c_.size() ? c_[k] : kZero; }

const Rational& Poly::leading() const {
    if (c_.empty()) throw std::domain_error("leading coefficient of zero polynomial");
    return c_.back();
}

Rational Poly::operator()(const Rational& x) const {
    Rational acc;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

double Poly::eval(double x) const {
    double acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + it->to_double();
    return acc;
}

Poly Poly::derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<Rational> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * Rational(static_cast<long>(k));
    return Poly(std::move(d));
}

Poly Poly::compose(const Poly& q) const {
    Poly acc;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * q + Poly::constant(*it);
    return acc;
}

Poly Poly::negate_arg() const { return scale_arg(Rational(-1)); }

Poly Poly::scale_arg(const Rational& c) const {
    std::vector<Rational> v(c_);
    Rational f(1);
    for (auto& a : v) {
        a *= f;
        f *= c;
    }
    return Poly(std::move(v));
}

Poly Poly::monic() const {
    if (c_.empty()) return {};
    return *this * leading().inverse();
}

Rational Poly::content() const {
    if (c_.empty()) return {};
    mpz_class g = 0;
    mpz_class l = 1;
    for (const auto& c : c_) {
        const mpz_class n = c.num();
        const mpz_class d = c.den();
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), d.get_mpz_t());
    }
    Rational r(g, l);
    return leading().sign() < 0 ? -r : r;
}

Poly Poly::primitive() const {
    if (c_.empty()) return {};
    return *this * content().inverse();
}

std::string Poly::str(const std::string& var) const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = c_.size(); i-- > 0;) {
        const Rational& c = c_[i];
        if (c.is_zero()) continue;
        const Rational a = c.abs();
        if (first) {
            if (c.sign() < 0) os << '-';
        } else {
            os << (c.sign() < 0 ? " - " : " + ");
        }
        first = false;
        const bool unit = a == Rational(1);
        if (i == 0 || !unit) os << a;
        if (i > 0) {
            if (!unit) os << '*';
            os << var;
            if (i > 1) os << '^' << i;
        }
    }
    return os.str();
}

Poly& Poly::operator+=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    trim();
    return *this;
}

Poly& Poly::operator*=(const Rational& s) {
    if (s.is_zero()) {
        c_.clear();
        return *this;
    }
    for (auto& c : c_) c *= s;
    return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
    if (a.c_.empty() || b.c_.empty()) return {};
    std::vector<mpq_class> acc(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
        if (a.c_[i].is_zero()) continue;
        for (std::size_t j = 0; j < b.c_.size(); ++j) acc[i + j] += a.c_[i].raw() * b.c_[j].raw();
    }
    std::vector<Rational> out;
    out.reserve(acc.size());
    for (auto& q : acc) out.emplace_back(std::move(q));
    return Poly(std::move(out));
}

std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
    if (b.is_zero()) throw std::domain_error("polynomial division by zero");
    if (a.degree() < b.degree()) return {Poly{}, a};
    const auto bc = b.coeffs();
    const std::size_t db = bc.size() - 1;
    const Rational inv_lead = b.leading().inverse();
    std::vector<Rational> r(a.coeffs().begin(), a.coeffs().end());
    std::vector<Rational> q(r.size() - db);
    for (std::size_t k = r.size(); k-- > db;) {
        if (r[k].is_zero()) continue;
        const Rational f = r[k] * inv_lead;
        q[k - db] = f;
        for (std::size_t i = 0; i <= db; ++i) r[k - db + i] -= f * bc[i];
    }
    r.resize(db);
    return {Poly(std::move(q)), Poly(std::move(r))};
}

Poly exact_div(const Poly& a, const Poly& b) {
    auto [q, r] = divmod(a, b);
    if (!r.is_zero()) throw std::domain_error("polynomial does not divide exactly");
    return q;
}

Poly gcd(const Poly& a, const Poly& b) {
    if (a.is_zero()) return b.monic();
    if (b.is_zero()) return a.monic();
    if (a.is_constant() || b.is_constant()) return Poly::constant(Rational(1));
    ZPoly u = to_primitive_z(a);
    ZPoly v = to_primitive_z(b);
    if (u.size() < v.size()) std::swap(u, v);
    while (!v.empty()) {
        if (v.size() == 1) return Poly::constant(Rational(1));
        pseudo_rem_z(u, v);
        make_primitive_z(u);
        std::swap(u, v);
    }
    std::vector<Rational> out;
    out.reserve(u.size());
    for (auto& c : u) out.emplace_back(c);
    return Poly(std::move(out)).monic();
}

Poly wronskian(const Poly& f, const Poly& g) { return f * g.derivative() - f.derivative() * g; }

Poly substitute_half_square(const Poly& p) {
    if (p.is_zero()) return {};
    std::vector<Rational> v(2 * p.coeffs().size() - 1);
    Rational scale(1);
    const Rational half(1, 2);
    for (std::size_t k = 0; k < p.coeffs().size(); ++k) {
        v[2 * k] = p.coeffs()[k] * scale;
        scale *= half;
    }
    return Poly(std::move(v));
}

Poly even_to_half_square(const Poly& p) {
    if (p.is_zero()) return {};
    std::vector<Rational> v((p.coeffs().size() + 1) / 2);
    Rational scale(1);
    for (std::size_t k = 0; k < p.coeffs().size(); ++k) {
        if (k % 2 == 1) {
            if (!p.coeffs()[k].is_zero()) throw std::domain_error("polynomial is not even in x");
            continue;
        }
        v[k / 2] = p.coeffs()[k] * scale;
        scale *= Rational(2);
    }
    return Poly(std::move(v));
}

Poly pow(const Poly& base, unsigned exponent) {
    Poly result = Poly::constant(Rational(1));
    Poly b = base;
    while (exponent > 0) {
        if (exponent & 1U) result = result * b;
        exponent >>= 1U;
        if (exponent > 0) b = b * b;
    }
    return result;
}

}  // namespace eop
