#include "eop/rational.hpp"

#include <ostream>
#include <stdexcept>

namespace eop {

Rational::Rational(long num, long den) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    v_ = mpq_class(num, den);
    v_.canonicalize();
}

Rational::Rational(const mpz_class& num, const mpz_class& den) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    v_ = mpq_class(num, den);
    v_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
    std::string s(text);
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    const auto slash = s.find('/');
    auto valid_int = [](const std::string& part) {
        if (part.empty()) return false;
        std::size_t i = (part[0] == '-' || part[0] == '+') ? 1 : 0;
        if (i == part.size()) return false;
        for (; i < part.size(); ++i)
            if (part[i] < '0' || part[i] > '9') return false;
        return true;
    };
    auto strip_plus = [](std::string part) { return (!part.empty() && part[0] == '+') ? part.substr(1) : part; };
    if (slash == std::string::npos) {
        if (!valid_int(s)) throw std::invalid_argument("malformed rational literal '" + s + "'");
        return Rational(mpz_class(strip_plus(s)));
    }
    const std::string n = s.substr(0, slash);
    const std::string d = s.substr(slash + 1);
    if (!valid_int(n) || !valid_int(d) || d[0] == '-')
        throw std::invalid_argument("malformed rational literal '" + s + "'");
    return Rational(mpz_class(strip_plus(n)), mpz_class(strip_plus(d)));
}

Rational Rational::inverse() const {
    if (is_zero()) throw std::domain_error("inverse of zero");
    return Rational(mpq_class(1 / v_));
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) throw std::domain_error("division by zero rational");
    v_ /= o.v_;
    return *this;
}

long Rational::floor_long() const {
    mpz_class f;
    mpz_fdiv_q(f.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
    if (!f.fits_slong_p()) throw std::overflow_error("rational floor out of range");
    return f.get_si();
}

std::string Rational::str() const {
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

std::ostream& operator<<(std::ostream& os, const Rational& r) {
    if (r.is_integer()) return os << r.num().get_str();
    return os << r.num().get_str() << '/' << r.den().get_str();
}

Rational pow(const Rational& base, unsigned exponent) {
    Rational result(1);
    Rational b = base;
    while (exponent > 0) {
        if (exponent & 1U) result *= b;
        b *= b;
        exponent >>= 1U;
    }
    return result;
}

}  // namespace eop
