#include "doctest.h"

#include "eop/diffop.hpp"
#include "eop/errors.hpp"

#include <random>

using namespace eop;

namespace {

const RatFunc X(Poly::x());

RatFunc rf(std::initializer_list<Rational> num, std::initializer_list<Rational> den = {Rational(1)}) {
    return RatFunc::normalize(Poly(std::vector<Rational>(num)), Poly(std::vector<Rational>(den)));
}

DiffOp oscillator_h() { return schrodinger(RatFunc(Poly::monomial(Rational(1), 2))); }

RatFunc radial_v(const Rational& l) {
    return rf({l * (l + Rational(1)), Rational(0), Rational(0), Rational(0), Rational(1, 4)},
              {Rational(0), Rational(0), Rational(1)});
}

DiffOp random_op(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> c(-4, 4);
    const int order = static_cast<int>(rng() % 3);
    std::vector<RatFunc> coeffs;
    for (int k = 0; k <= order; ++k) {
        Poly num{Rational(c(rng)), Rational(c(rng)), Rational(c(rng))};
        Poly den = (rng() % 2) ? Poly{Rational(1)} : Poly{Rational(1 + static_cast<long>(rng() % 3)), Rational(0), Rational(1)};
        coeffs.push_back(RatFunc::normalize(num, den));
    }
    return DiffOp(std::move(coeffs));
}

}  // namespace

TEST_CASE("compose examples") {
    const DiffOp d = DiffOp::d();
    const DiffOp x = DiffOp::multiply(X);
    CHECK(compose(d, x) == DiffOp({RatFunc(1), X}));
    const DiffOp a({X, RatFunc(1)});
    const DiffOp ad({X, RatFunc(-1)});
    CHECK(compose(ad, a) == DiffOp({rf({Rational(-1), Rational(0), Rational(1)}), RatFunc(), RatFunc(-1)}));
    CHECK(compose(a, ad) == DiffOp({rf({Rational(1), Rational(0), Rational(1)}), RatFunc(), RatFunc(-1)}));
}

TEST_CASE("commutator examples") {
    CHECK(commutator(DiffOp::d(), DiffOp::multiply(X)) == DiffOp::identity());
    const DiffOp h = oscillator_h();
    const DiffOp a({X, RatFunc(1)});
    const DiffOp ad({X, RatFunc(-1)});
    CHECK(commutator(h, ad) == ad * Rational(2));
    CHECK(commutator(h, a) == a * Rational(-2));
}

TEST_CASE("composition is associative and adjoint reverses order") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 40; ++trial) {
        const DiffOp a = random_op(rng), b = random_op(rng), c = random_op(rng);
        CHECK(compose(compose(a, b), c) == compose(a, compose(b, c)));
        CHECK(compose(a, b).adjoint() == compose(b.adjoint(), a.adjoint()));
        CHECK(a.adjoint().adjoint() == a);
    }
}

TEST_CASE("apply and gauge agree with direct differentiation") {
    // e^{-x^2/2} d/dx e^{x^2/2} f = f' + x f
    const DiffOp g = DiffOp::d().gauge(X);
    CHECK(g == DiffOp({X, RatFunc(1)}));
    const RatFunc f = rf({Rational(1), Rational(2)}, {Rational(3), Rational(0), Rational(1)});
    const DiffOp h = oscillator_h();
    CHECK(h.apply(f) == X * X * f - f.derivative().derivative());
}

TEST_CASE("first-order hermite supercharges") {
    const auto s0 = first_order_supercharge(seed_solution(SeedFamily::HermitePseudo, Rational(0), 0));
    CHECK(s0.q0 == -X);
    const DiffOp h = oscillator_h();
    CHECK(check_intertwining(s0.a, h, schrodinger(rf({Rational(-2), Rational(0), Rational(1)}))));
    CHECK_FALSE(check_intertwining(DiffOp::d(), h, h));

    const auto s2 = first_order_supercharge(seed_solution(SeedFamily::HermitePseudo, Rational(0), 2));
    CHECK(s2.q0 == -X - rf({Rational(0), Rational(8)}, {Rational(2), Rational(0), Rational(4)}));
    const DiffOp hm = schrodinger(RatFunc(Poly::monomial(Rational(1), 2)) + s2.q0.derivative() * Rational(2));
    CHECK(check_intertwining(s2.a, h, hm));
    CHECK((compose(s2.a_dagger, hm) - compose(h, s2.a_dagger)).is_zero());
    CHECK(check_factorization(s2.a, s2.a_dagger, h, s2.f.expand()));
    CHECK(compose(s2.a, s2.a_dagger) == evaluate(s2.f.expand(), hm));
}

TEST_CASE("base ladders satisfy their algebra") {
    const auto osc = oscillator_ladder();
    CHECK(check_lowering(osc, oscillator_h()));
    CHECK(check_ladder_product(osc, oscillator_h()));
    for (const Rational& l : {Rational(0), Rational(1), Rational(2), Rational(5, 3), Rational(-7, 2)}) {
        const auto rad = radial_ladder(l);
        const DiffOp h = schrodinger(radial_v(l));
        CHECK(check_lowering(rad, h));
        CHECK(check_ladder_product(rad, h));
    }
}

TEST_CASE("composed ladder for hermite m=2 is third order") {
    const auto s = first_order_supercharge(seed_solution(SeedFamily::HermitePseudo, Rational(0), 2));
    const DiffOp h = oscillator_h();
    const DiffOp hm = schrodinger(RatFunc(Poly::monomial(Rational(1), 2)) + s.q0.derivative() * Rational(2));
    const LadderSpec b = compose_ladder(s.a, oscillator_ladder(), s.a_dagger, s.f, hm);
    CHECK(b.order() == 3);
    CHECK(b.p == FactoredPoly(Rational(1), {Rational(-5), Rational(-3), Rational(1)}));
    CHECK(check_ladder_product(b, hm));
    CHECK_THROWS_AS(compose_ladder(s.a, oscillator_ladder(), s.a_dagger, s.f, h), InvariantError);
}

TEST_CASE("first-order laguerre supercharge intertwines and factorizes") {
    const Rational l(2);
    struct Row {
        SeedFamily family;
        Rational seed_l;
        unsigned m;
    };
    const Row rows[] = {{SeedFamily::LaguerreI, l - Rational(1), 1},
                        {SeedFamily::LaguerreII, l + Rational(1), 1},
                        {SeedFamily::LaguerreIII, l + Rational(1), 2}};
    for (const auto& row : rows) {
        const auto seed = seed_solution(row.family, row.seed_l, row.m);
        const auto s = first_order_supercharge(seed);
        const DiffOp base = schrodinger(radial_v(row.seed_l));
        const DiffOp hm = schrodinger(radial_v(row.seed_l) + s.q0.derivative() * Rational(2));
        CHECK(check_intertwining(s.a, base, hm));
        CHECK(check_factorization(s.a, s.a_dagger, base, s.f.expand()));
        const LadderSpec b = compose_ladder(s.a, radial_ladder(row.seed_l), s.a_dagger, s.f, hm);
        CHECK(b.order() == 4);
    }
}

TEST_CASE("second-order supercharge matches the log-derivative route") {
    for (const auto& [l, m1, m2] : {std::tuple{Rational(2), 0u, 0u}, std::tuple{Rational(2), 1u, 1u},
                                    std::tuple{Rational(7, 2), 2u, 1u}, std::tuple{Rational(3), 0u, 2u}}) {
        const auto s1 = seed_solution(SeedFamily::LaguerreI, l, m1);
        const auto s2 = seed_solution(SeedFamily::LaguerreII, l, m2);
        const auto sc = second_order_supercharge(s1, s2);
        // A phi_i = 0 with phi_i'' = (V - E_i) phi_i gives q1 and q0 linearly.
        const RatFunc w1 = s1.log_derivative(), w2 = s2.log_derivative();
        const RatFunc v = radial_v(l);
        const RatFunc q1 = (w1 - w2).inverse() * (s1.energy - s2.energy);
        const RatFunc q0 = -(v - RatFunc(s1.energy)) - q1 * w1;
        REQUIRE(sc.q1.has_value());
        CHECK(*sc.q1 == q1);
        CHECK(sc.q0 == q0);
        CHECK(*sc.c == Rational(-2 * static_cast<long>(m1 + m2 + 1)));
        CHECK(sc.wronskian_g->degree() == static_cast<int>(m1 + m2 + 1));

        const DiffOp hp = schrodinger(v);
        const DiffOp hm = schrodinger(v + q1.derivative() * Rational(2));
        CHECK(sc.a.apply(RatFunc(1)) == sc.q0);
        CHECK(check_intertwining(sc.a, hp, hm));
        CHECK(check_factorization(sc.a, sc.a_dagger, hp, sc.f.expand()));
    }
}

TEST_CASE("second-order constraints and wronskian polynomial") {
    CHECK(wronskian_polynomial(Rational(5, 2), 0, 0) == Poly{Rational(-5, 2), Rational(-1)});
    CHECK(wronskian_polynomial(Rational(5, 2), 1, 1).degree() == 3);
    const auto s1 = seed_solution(SeedFamily::LaguerreI, Rational(2), 1);
    const auto s2 = seed_solution(SeedFamily::LaguerreII, Rational(2), 1);
    CHECK(s1.energy == Rational(-11, 2));
    CHECK(s2.energy == Rational(1, 2));
    CHECK_THROWS_AS(second_order_supercharge(s2, s1), ConstraintError);
    CHECK_THROWS_AS(second_order_supercharge(s1, seed_solution(SeedFamily::LaguerreII, Rational(3), 1)),
                    ConstraintError);
}

TEST_CASE("partner ladder polynomial is built from factored data") {
    const FactoredPoly f(Rational(1), {Rational(-5)});
    const FactoredPoly p = partner_ladder_polynomial(FactoredPoly(Rational(1), {Rational(1)}), f, Rational(2));
    CHECK(p.roots == std::vector<Rational>{Rational(-5), Rational(-3), Rational(1)});
    CHECK(p(Rational(1)) == Rational(0));
    CHECK(p.expand()(Rational(3)) == p(Rational(3)));
}
