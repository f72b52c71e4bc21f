#include "eop/diffop.hpp"

#include "eop/errors.hpp"
#include "eop/sturm.hpp"

#include <algorithm>
#include <sstream>

namespace eop {

namespace {

const RatFunc kZeroRF{};

long binomial(long n, long k) {
    long r = 1;
    for (long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

DiffOp::DiffOp(std::vector<RatFunc> coeffs) : c_(std::move(coeffs)) { trim(); }

void DiffOp::trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

DiffOp DiffOp::d() { return DiffOp({RatFunc(), RatFunc(1)}); }

DiffOp DiffOp::multiply(const RatFunc& r) { return DiffOp({r}); }

const RatFunc& DiffOp::coeff(std::size_t k) const { return k < c_.size() ? c_[k] : kZeroRF; }

DiffOp DiffOp::adjoint() const {
    if (c_.empty()) return {};
    std::vector<std::vector<RatFunc>> terms(c_.size());
    for (std::size_t k = 0; k < c_.size(); ++k) {
        if (c_[k].is_zero()) continue;
        // (-1)^k sum_s C(k,s) r_k^{(k-s)} d^s
        RatFunc deriv = c_[k];
        std::vector<RatFunc> derivs{deriv};
        for (std::size_t j = 1; j <= k; ++j) derivs.push_back(derivs.back().derivative());
        const Rational sign(k % 2 == 0 ? 1 : -1);
        for (std::size_t s = 0; s <= k; ++s) {
            const Rational b(binomial(static_cast<long>(k), static_cast<long>(s)));
            terms[s].push_back(derivs[k - s] * (sign * b));
        }
    }
    std::vector<RatFunc> out;
    out.reserve(terms.size());
    for (auto& t : terms) out.push_back(sum(t));
    return DiffOp(std::move(out));
}

RatFunc DiffOp::apply(const RatFunc& f) const {
    std::vector<RatFunc> parts;
    RatFunc deriv = f;
    for (std::size_t k = 0; k < c_.size(); ++k) {
        if (k > 0) deriv = deriv.derivative();
        if (!c_[k].is_zero()) parts.push_back(c_[k] * deriv);
    }
    return sum(parts);
}

DiffOp DiffOp::gauge(const RatFunc& rho) const {
    const DiffOp shifted_d = DiffOp({rho, RatFunc(1)});
    DiffOp power = DiffOp::identity();
    DiffOp acc;
    for (std::size_t k = 0; k < c_.size(); ++k) {
        if (k > 0) power = compose(shifted_d, power);
        if (!c_[k].is_zero()) acc = acc + compose(multiply(c_[k]), power);
    }
    return acc;
}

std::string DiffOp::str() const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t k = c_.size(); k-- > 0;) {
        if (c_[k].is_zero()) continue;
        if (!first) os << " + ";
        first = false;
        os << '[' << c_[k].str() << ']';
        if (k == 1) os << " d";
        if (k > 1) os << " d^" << k;
    }
    return os.str();
}

DiffOp operator+(const DiffOp& a, const DiffOp& b) {
    std::vector<RatFunc> out(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = a.coeff(k) + b.coeff(k);
    return DiffOp(std::move(out));
}

DiffOp operator-(const DiffOp& a) {
    std::vector<RatFunc> out;
    out.reserve(a.c_.size());
    for (const auto& c : a.c_) out.push_back(-c);
    return DiffOp(std::move(out));
}

DiffOp operator-(const DiffOp& a, const DiffOp& b) { return a + (-b); }

DiffOp operator*(const DiffOp& a, const Rational& s) {
    std::vector<RatFunc> out;
    out.reserve(a.c_.size());
    for (const auto& c : a.c_) out.push_back(c * s);
    return DiffOp(std::move(out));
}

DiffOp compose(const DiffOp& a, const DiffOp& b) {
    if (a.is_zero() || b.is_zero()) return {};
    const auto na = static_cast<std::size_t>(a.order());
    const auto nb = static_cast<std::size_t>(b.order());
    // derivs[r][j] = b_j^{(r)}
    std::vector<std::vector<RatFunc>> derivs(na + 1);
    derivs[0].assign(b.coeffs().begin(), b.coeffs().end());
    for (std::size_t r = 1; r <= na; ++r) {
        derivs[r].reserve(nb + 1);
        for (const auto& c : derivs[r - 1]) derivs[r].push_back(c.derivative());
    }
    std::vector<std::vector<RatFunc>> terms(na + nb + 1);
    for (std::size_t i = 0; i <= na; ++i) {
        const RatFunc& ai = a.coeff(i);
        if (ai.is_zero()) continue;
        for (std::size_t r = 0; r <= i; ++r) {
            const Rational binom(binomial(static_cast<long>(i), static_cast<long>(r)));
            for (std::size_t j = 0; j <= nb; ++j) {
                if (derivs[r][j].is_zero()) continue;
                terms[i - r + j].push_back(ai * derivs[r][j] * binom);
            }
        }
    }
    std::vector<RatFunc> out;
    out.reserve(terms.size());
    for (auto& t : terms) out.push_back(sum(t));
    return DiffOp(std::move(out));
}

DiffOp commutator(const DiffOp& a, const DiffOp& b) { return compose(a, b) - compose(b, a); }

DiffOp schrodinger(const RatFunc& potential) { return DiffOp({potential, RatFunc(), RatFunc(-1)}); }

FactoredPoly::FactoredPoly(Rational c, std::vector<Rational> r) : constant(std::move(c)), roots(std::move(r)) {
    std::sort(roots.begin(), roots.end());
}

Poly FactoredPoly::expand() const {
    Poly acc = Poly::constant(constant);
    for (const auto& r : roots) acc = acc * Poly{-r, Rational(1)};
    return acc;
}

Rational FactoredPoly::operator()(const Rational& h) const {
    Rational acc = constant;
    for (const auto& r : roots) acc *= h - r;
    return acc;
}

FactoredPoly FactoredPoly::shifted(const Rational& s) const {
    std::vector<Rational> r;
    r.reserve(roots.size());
    for (const auto& root : roots) r.push_back(root + s);
    return FactoredPoly(constant, std::move(r));
}

std::string FactoredPoly::str(const std::string& var) const {
    std::ostringstream os;
    os << constant;
    for (const auto& r : roots) {
        os << "(" << var;
        if (r.sign() > 0) os << " - " << r;
        if (r.sign() < 0) os << " + " << r.abs();
        os << ")";
    }
    return os.str();
}

FactoredPoly operator*(const FactoredPoly& a, const FactoredPoly& b) {
    std::vector<Rational> r = a.roots;
    r.insert(r.end(), b.roots.begin(), b.roots.end());
    return FactoredPoly(a.constant * b.constant, std::move(r));
}

DiffOp evaluate(const Poly& p, const DiffOp& h) {
    DiffOp acc;
    const auto c = p.coeffs();
    for (std::size_t k = c.size(); k-- > 0;) {
        acc = compose(acc, h) + DiffOp::multiply(RatFunc(c[k]));
    }
    return acc;
}

Supercharge first_order_supercharge(const SeedSolution& seed) {
    const bool domain_ok = seed.is_laguerre()
                               ? sturm_count(seed.polynomial_part, Interval::positive_half_line()) == 0
                               : sturm_count(seed.polynomial_part, Interval::real_line()) == 0;
    if (!domain_ok) throw ConstraintError("seed has nodes on domain");
    Supercharge s;
    s.q0 = -seed.log_derivative();
    s.a = DiffOp({s.q0, RatFunc(1)});
    s.a_dagger = DiffOp({s.q0, RatFunc(-1)});
    s.f = FactoredPoly(Rational(1), {seed.energy});
    return s;
}

Poly wronskian_polynomial(const Rational& alpha, unsigned m1, unsigned m2) {
    const Poly l1 = laguerre(m1, alpha, true);
    const Poly l2 = laguerre(m2, -alpha, false);
    return Poly::x() * wronskian(l1, l2) - Poly{alpha, Rational(1)} * l1 * l2;
}

Supercharge second_order_supercharge(const SeedSolution& seed1, const SeedSolution& seed2) {
    if (seed1.family != SeedFamily::LaguerreI || seed2.family != SeedFamily::LaguerreII)
        throw ConstraintError(
            "second-order supercharge: only the (type I, type II) radial seed pairing is implemented");
    if (!seed1.alpha || !seed2.alpha || *seed1.alpha != *seed2.alpha)
        throw ConstraintError("second-order supercharge: both seeds must share alpha = l + 1/2");
    const Rational alpha = *seed1.alpha;
    if (Rational(static_cast<long>(seed2.m)) >= alpha)
        throw ConstraintError("second-order supercharge: requires m2 < l + 1/2");

    const Poly g = wronskian_polynomial(alpha, seed1.m, seed2.m);
    if (g.degree() != static_cast<int>(seed1.m + seed2.m + 1))
        throw InvariantError("second-order supercharge: deg g_mu != m1 + m2 + 1");
    if (sturm_count(g, Interval::positive_half_line()) != 0)
        throw ConstraintError("second-order supercharge: singular intermediate (g_mu has a zero on z > 0)");

    // W(phi1, phi2) = (2/x) g(z) chi_I chi_II with chi_I chi_II proportional to x,
    // so q1 = -W'/W = -g_x'/g_x for g_x(x) = g(x^2/2).
    const Poly gx = substitute_half_square(g);
    const RatFunc q1 = -RatFunc::normalize(gx.derivative(), gx);
    const Rational c = seed1.energy - seed2.energy;
    const RatFunc q1p = q1.derivative();
    const RatFunc q1pp = q1p.derivative();
    const RatFunc inv_q1 = q1.inverse();
    const RatFunc ratio = q1p * inv_q1 * Rational(1, 2);
    const RatFunc q0 = q1p * Rational(1, 2) + q1 * q1 * Rational(1, 4) - q1pp * inv_q1 * Rational(1, 2) +
                       ratio * ratio - inv_q1 * inv_q1 * (c * c / Rational(4));

    Supercharge s;
    s.q0 = q0;
    s.q1 = q1;
    s.c = c;
    s.wronskian_g = g;
    s.a = DiffOp({q0, q1, RatFunc(1)});
    s.a_dagger = s.a.adjoint();
    s.f = FactoredPoly(Rational(1), {seed1.energy, seed2.energy});
    return s;
}

bool check_intertwining(const DiffOp& a, const DiffOp& h_plus, const DiffOp& h_minus) {
    return (compose(a, h_plus) - compose(h_minus, a)).is_zero();
}

bool check_factorization(const DiffOp& a, const DiffOp& a_dagger, const DiffOp& h, const Poly& f) {
    return compose(a_dagger, a) == evaluate(f, h);
}

LadderSpec oscillator_ladder() {
    const RatFunc x(Poly::x());
    return {DiffOp({x, RatFunc(1)}), DiffOp({x, RatFunc(-1)}), Rational(2), FactoredPoly(Rational(1), {Rational(1)})};
}

LadderSpec radial_ladder(const Rational& l) {
    // a = (1/4)(2 d^2 + 2x d + x^2/2 - 2l(l+1)/x^2 + 1), a^dagger with -2x d and -1
    const Rational ll = l * (l + Rational(1));
    auto zeroth = [&](const Rational& shift) {
        // (x^4/2 + shift x^2 - 2 l(l+1)) / x^2, then times 1/4
        const Poly num{Rational(-2) * ll, Rational(0), shift, Rational(0), Rational(1, 2)};
        return RatFunc::normalize(num, Poly::monomial(Rational(1), 2)) * Rational(1, 4);
    };
    const RatFunc half_x(Poly::monomial(Rational(1, 2), 1));
    DiffOp a({zeroth(Rational(1)), half_x, RatFunc(Rational(1, 2))});
    DiffOp ad({zeroth(Rational(-1)), -half_x, RatFunc(Rational(1, 2))});
    // (1/16)(2H - 3 - 2l)(2H - 1 + 2l) = (1/4)(H - 3/2 - l)(H - 1/2 + l)
    FactoredPoly p(Rational(1, 4), {Rational(3, 2) + l, Rational(1, 2) - l});
    return {std::move(a), std::move(ad), Rational(2), std::move(p)};
}

FactoredPoly partner_ladder_polynomial(const FactoredPoly& p_plus, const FactoredPoly& f, const Rational& lambda) {
    return p_plus * f.shifted(lambda) * f;
}

LadderSpec compose_ladder(const DiffOp& a_op, const LadderSpec& base, const DiffOp& a_dagger,
                          const FactoredPoly& f, const DiffOp& h_minus) {
    LadderSpec out;
    out.op = compose(a_op, base.op, a_dagger);
    out.op_dagger = compose(a_op, base.op_dagger, a_dagger);
    out.lambda = base.lambda;
    out.p = partner_ladder_polynomial(base.p, f, base.lambda);
    if (!check_lowering(out, h_minus)) throw InvariantError("PHA violation: [H-, b] != -lambda b");
    return out;
}

bool check_lowering(const LadderSpec& ladder, const DiffOp& h) {
    return (commutator(h, ladder.op) + ladder.op * ladder.lambda).is_zero();
}

bool check_ladder_product(const LadderSpec& ladder, const DiffOp& h) {
    return compose(ladder.op_dagger, ladder.op) == evaluate(ladder.p.expand(), h);
}

}  // namespace eop
