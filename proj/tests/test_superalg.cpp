#include "doctest.h"

#include "eop/errors.hpp"
#include "eop/superalg.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

using namespace eop;

namespace {

using R = Rational;
using State = std::pair<long, long>;

Affine2 X(const R& c) { return {R(1), R(0), c}; }       // x + c
Affine2 PX(const R& c) { return {R(-1), R(1), c}; }     // p - x + c
ReducedPhi rp(const R& c, std::vector<Affine2> f) { return ReducedPhi::canonical(c, std::move(f)); }

const RepSolution* find(const RepSearch& r, int branch, bool all_p, long p, const R& e) {
    for (const auto& s : r.solutions)
        if (s.branch == branch && s.all_p == all_p && (all_p || (s.p == p && s.energy() == e))) return &s;
    return nullptr;
}

std::set<State> states_at(const RepSolution& s, long p) {
    std::set<State> out;
    for (long n = 0; n <= p; ++n) {
        const R x = s.nu_x(R(n), R(p)), y = s.nu_y(R(n), R(p));
        REQUIRE(x.is_integer());
        REQUIRE(y.is_integer());
        out.emplace(x.floor_long(), y.floor_long());
    }
    return out;
}

struct Case2D {
    System2D sys;
    StructureFunction phi;
    RepSearch reps;
};

Case2D run(SystemCase c, SystemParams p, EnumerateOptions o = {}) {
    Case2D out;
    out.sys = build_system(c, p);
    out.phi = structure_function(out.sys);
    out.reps = enumerate_reps(out.phi, out.sys.hx.spectrum, out.sys.hy.spectrum, o);
    return out;
}

SystemParams hp(unsigned m) { return {m, 0, 0, std::nullopt}; }
SystemParams hp2(unsigned m1, unsigned m2) { return {0, m1, m2, std::nullopt}; }
SystemParams lp(const R& l, unsigned m) { return {m, 0, 0, l}; }
SystemParams l2p(const R& l, unsigned m1, unsigned m2) { return {0, m1, m2, l}; }

// One u(E) per factor, in factor order, with merged branches expanded again.
std::vector<std::pair<R, R>> branch_forms(const StructureFunction& phi) {
    std::map<int, std::pair<R, R>> by_factor;
    for (const auto& b : u_roots(phi)) {
        by_factor[b.index] = {b.cE, b.c0};
        for (int a : b.aliases) by_factor[a] = {b.cE, b.c0};
    }
    std::vector<std::pair<R, R>> out;
    for (const auto& [k, v] : by_factor) out.push_back(v);
    return out;
}

// Branch that owns factor k, which may have been merged into an earlier one.
int owner(const RepSearch& r, int k) {
    for (const auto& b : r.branches)
        if (b.index == k || std::find(b.aliases.begin(), b.aliases.end(), k) != b.aliases.end()) return b.index;
    return 0;
}

// The three defining constraints evaluated on the unreduced structure function.
void check_constraints(const StructureFunction& phi, const RepSolution& s, long p) {
    const R e = s.energy_at(p);
    const R u = s.u_cE * e + s.u_c0;
    CHECK(phi(e, u, R(0)).is_zero());
    CHECK(phi(e, u, R(p + 1)).is_zero());
    for (long n = 1; n <= p; ++n) CHECK(phi(e, u, R(n)).sign() > 0);
}

}  // namespace

TEST_CASE("system assembly: ladder polynomials") {
    const auto h1 = build_system(SystemCase::H1, hp(2));
    CHECK(h1.s.roots == std::vector<R>{R(1)});
    CHECK(h1.q.roots == std::vector<R>{R(1), R(-3), R(-5)});
    CHECK(h1.q.constant == R(1));
    CHECK(k_shift(h1) == R(1));

    const auto h2 = build_system(SystemCase::H2, hp2(2, 2));
    CHECK(h2.q.roots.size() == 3);
    CHECK(h2.s.roots.size() == 3);

    const auto l2 = build_system(SystemCase::Lag2, l2p(R(2), 1, 1));
    CHECK(l2.q.roots.size() == 6);
    CHECK(l2.q.constant == R(1, 4));
    CHECK(l2.s.roots == std::vector<R>{R(1)});
    CHECK(k_shift(l2) == R(1));

    CHECK_THROWS_AS(build_system(SystemCase::H1, hp(3)), ConstraintError);
    CHECK_THROWS_AS(build_system(SystemCase::LagI, hp(1)), ConstraintError);
    CHECK_THROWS_AS(build_system(SystemCase::LagIII, lp(R(2), 1)), ConstraintError);
    CHECK(parse_system_case("LagII") == SystemCase::LagII);
    CHECK_FALSE(parse_system_case("lag9"));
}

TEST_CASE("structure function factors") {
    for (unsigned m : {0u, 2u, 4u}) {
        const auto phi = structure_function(build_system(SystemCase::H1, hp(m)));
        const R mm(static_cast<long>(m));
        const std::vector<AffineForm> want{{R(1, 2), R(2), R(2), R(-1)},
                                           {R(1, 2), R(2), R(2), R(2) * mm - R(1)},
                                           {R(1, 2), R(2), R(2), R(2) * mm + R(1)},
                                           {R(1, 2), R(-2), R(-2), R(1)}};
        CHECK(phi.factors == want);
        CHECK(phi.constant == R(1));
    }

    System2D bare;
    bare.hx = build_oscillator(BuildOptions{false});
    bare.hy = bare.hx;
    bare.q = ordered_ladder_polynomial(bare.hx);
    bare.s = bare.q;
    const auto phi = structure_function(bare);
    const std::vector<AffineForm> want{{R(1, 2), R(2), R(2), R(-1)}, {R(1, 2), R(-2), R(-2), R(1)}};
    CHECK(phi.factors == want);

    const auto lag2 = structure_function(build_system(SystemCase::Lag2, l2p(R(2), 1, 1)));
    CHECK(lag2.factors.size() == 7);
    CHECK(lag2.constant == R(1, 4));
}

TEST_CASE("u-branches") {
    for (unsigned m : {2u, 4u}) {
        const R mm(static_cast<long>(m));
        const auto got = branch_forms(structure_function(build_system(SystemCase::H1, hp(m))));
        const std::vector<std::pair<R, R>> want{{R(-1, 4), R(1, 2)},
                                                {R(-1, 4), -mm + R(1, 2)},
                                                {R(-1, 4), -mm - R(1, 2)},
                                                {R(1, 4), R(1, 2)}};
        CHECK(got == want);
    }
    {
        const R m1(2), m2(4);
        const auto got = branch_forms(structure_function(build_system(SystemCase::H2, hp2(2, 4))));
        const std::vector<std::pair<R, R>> want{{R(-1, 4), R(1, 2)},     {R(-1, 4), -m1 + R(1, 2)},
                                                {R(-1, 4), -m1 - R(1, 2)}, {R(1, 4), R(1, 2)},
                                                {R(1, 4), m2 + R(1, 2)},   {R(1, 4), m2 + R(3, 2)}};
        CHECK(got == want);
    }
    for (auto [c, l, m] : {std::tuple{SystemCase::LagI, R(2), 1u}, std::tuple{SystemCase::LagII, R(5, 2), 2u},
                           std::tuple{SystemCase::LagIII, R(3, 2), 2u}}) {
        const auto sys = build_system(c, lp(l, m));
        const R lp_ = *sys.hx.l_prime;
        const R ex = sys.hx.factorization_energies.at(0);
        const auto got = branch_forms(structure_function(sys));
        const std::vector<std::pair<R, R>> want{{R(-1, 4), R(3, 4) + lp_ / R(2)},
                                                {R(-1, 4), R(1, 4) - lp_ / R(2)},
                                                {R(-1, 4), R(1) + ex / R(2)},
                                                {R(-1, 4), ex / R(2)},
                                                {R(1, 4), R(1, 2)}};
        CHECK(got == want);
    }
    for (auto [l, m1, m2] : {std::tuple{R(2), 1u, 1u}, std::tuple{R(7, 2), 2u, 1u}, std::tuple{R(3), 1u, 2u}}) {
        const R a(static_cast<long>(m1)), b(static_cast<long>(m2));
        const auto got = branch_forms(structure_function(build_system(SystemCase::Lag2, l2p(l, m1, m2))));
        const std::vector<std::pair<R, R>> want{
            {R(-1, 4), l / R(2) + R(3, 4)},          {R(-1, 4), -l / R(2) + R(1, 4)},
            {R(-1, 4), -l / R(2) - a + R(1, 4)},     {R(-1, 4), -l / R(2) - a - R(3, 4)},
            {R(-1, 4), -l / R(2) + b + R(5, 4)},     {R(-1, 4), -l / R(2) + b + R(1, 4)},
            {R(1, 4), R(1, 2)}};
        CHECK(got == want);
    }

    StructureFunction bad;
    bad.factors = {{R(1, 2), R(2), R(2), R(-1)}, {R(0), R(1), R(0), R(5)}};
    CHECK_THROWS_WITH_AS(u_roots(bad), doctest::Contains("no root branch"), ConstraintError);
}

TEST_CASE("reduced structure function canonical form") {
    // 16 x (p+1-x) equals -16 x (x-p-1) and (2x) (1/2)(p+1-x)... after rescaling
    CHECK(rp(R(16), {X(R(0)), PX(R(1))}) == rp(R(-16), {X(R(0)), {R(1), R(-1), R(-1)}}));
    CHECK(rp(R(1), {{R(2), R(0), R(4)}}) == rp(R(2), {X(R(2))}));
    CHECK(rp(R(3), {{R(0), R(0), R(2)}, X(R(1))}) == rp(R(6), {X(R(1))}));
    CHECK(rp(R(16), {X(R(0)), PX(R(1)), X(R(2)), X(R(3))}).str() == "16 x (x + 2) (x + 3) (p + 1 - x)");
    CHECK(rp(R(1), {PX(R(1))}).at_p(R(0)) == rp(R(-1), {X(R(-1))}));
}

TEST_CASE("H1 representations") {
    for (unsigned m : {2u, 4u, 6u}) {
        CAPTURE(m);
        const R mm(static_cast<long>(m));
        const auto c = run(SystemCase::H1, hp(m));
        CHECK(c.reps.solutions.size() == 2);

        const auto* row1 = find(c.reps, 1, true, 0, R(0));
        REQUIRE(row1);
        CHECK(row1->e_slope == R(2));
        CHECK(row1->e_intercept == R(2));
        CHECK(row1->phi == rp(R(16), {X(R(0)), PX(R(1)), X(mm), X(R(1) + mm)}));
        for (long p = 0; p <= 4; ++p) {
            std::set<State> want;
            for (long k = 0; k <= p; ++k) want.emplace(k, p - k);
            CHECK(states_at(*row1, p) == want);
        }

        const auto* row2 = find(c.reps, 3, false, 0, R(-2) * mm);
        REQUIRE(row2);
        CHECK(row2->phi.at_p(R(0)) == rp(R(16), {X(R(0)), PX(R(1)), X(R(-1) - mm), X(R(-1))}).at_p(R(0)));
        CHECK(states_at(*row2, 0) == std::set<State>{{-static_cast<long>(m) - 1, 0}});
    }
}

TEST_CASE("H2 representations") {
    for (auto [a, b] : {std::pair{2u, 2u}, std::pair{2u, 4u}, std::pair{4u, 2u}}) {
        CAPTURE(a);
        CAPTURE(b);
        const R m1(static_cast<long>(a)), m2(static_cast<long>(b));
        const long n1 = -static_cast<long>(a) - 1, n2 = -static_cast<long>(b) - 1;
        const auto c = run(SystemCase::H2, hp2(a, b));
        CHECK(c.reps.solutions.size() == 5);

        const auto* r1 = find(c.reps, 1, true, 0, R(0));
        REQUIRE(r1);
        CHECK(r1->e_slope == R(2));
        CHECK(r1->e_intercept == R(2));
        CHECK(r1->phi ==
              rp(R(64), {X(R(0)), PX(R(1)), X(m1), X(R(1) + m1), PX(R(1) + m2), PX(R(2) + m2)}));

        const auto fixed = [&](int branch, const R& e, const ReducedPhi& want, State st) {
            const auto* s = find(c.reps, branch, false, 0, e);
            REQUIRE(s);
            CHECK(s->phi.at_p(R(0)) == want.at_p(R(0)));
            CHECK(states_at(*s, 0) == std::set<State>{st});
            return s;
        };
        fixed(1, R(-2) * m2, rp(R(64), {X(R(0)), PX(R(1)), PX(R(0)), X(m1), X(R(1) + m1), PX(-m2)}), {0, n2});
        const auto* r3 = fixed(3, R(-2) * (R(1) + m1 + m2),
                               rp(R(64), {X(R(0)), PX(R(1)), PX(R(0)), X(R(-1) - m1), X(R(-1)), PX(-m2)}), {n1, n2});
        fixed(3, R(-2) * m1, rp(R(64), {X(R(0)), X(R(-1)), X(R(-1) - m1), PX(R(1)), PX(R(1) + m2), PX(R(2) + m2)}),
              {n1, 0});
        const auto* r5 = fixed(5, R(-2) * (R(1) + m1 + m2),
                               rp(R(64), {X(R(0)), PX(R(1)), X(R(-1)), X(m2), PX(R(0)), PX(R(1) + m1)}), {n1, n2});

        // the two ground-ground solutions coincide once p = 0
        CHECK_FALSE(r3->duplicate_of);
        REQUIRE(r5->duplicate_of);
        CHECK(&c.reps.solutions.at(*r5->duplicate_of) == r3);
        int dups = 0;
        for (const auto& s : c.reps.solutions) dups += s.duplicate_of.has_value();
        CHECK(dups == 1);
    }
}

TEST_CASE("Laguerre first-order representations over a parameter sweep") {
    const std::vector<R> ls{R(1), R(3, 2), R(2), R(5, 2), R(3), R(7, 2)};
    int checked = 0;
    for (const auto& l : ls)
        for (unsigned m = 1; m <= 4; ++m) {
            CAPTURE(l);
            CAPTURE(m);
            const R mm(static_cast<long>(m));
            {
                const auto c = run(SystemCase::LagI, lp(l, m));
                REQUIRE(c.reps.solutions.size() == 1);
                const auto& s = c.reps.solutions[0];
                CHECK(s.branch == 1);
                CHECK(s.all_p);
                CHECK(s.e_slope == R(2));
                CHECK(s.e_intercept == R(3, 2) + l);
                CHECK(s.phi == rp(R(1), {X(R(0)), PX(R(1)), {R(2), R(0), R(-1) + R(2) * l},
                                         {R(2), R(0), R(2) * mm + R(2) * l - R(1)},
                                         {R(2), R(0), R(2) * mm + R(2) * l + R(1)}}));
                ++checked;
            }
            if (l + R(1, 2) > mm - R(1)) {
                const auto c = run(SystemCase::LagII, lp(l, m));
                REQUIRE(c.reps.solutions.size() == 1);
                const auto& s = c.reps.solutions[0];
                CHECK(s.branch == 1);
                CHECK(s.all_p);
                CHECK(s.e_intercept == R(7, 2) + l);
                CHECK(s.phi == rp(R(1), {X(R(0)), PX(R(1)), {R(2), R(0), R(3) + R(2) * l},
                                         {R(2), R(0), R(1) + R(2) * l - R(2) * mm},
                                         {R(2), R(0), R(3) + R(2) * l - R(2) * mm}}));
                ++checked;
            }
            if (m % 2 == 0 && l + R(1, 2) > mm - R(1)) {
                const auto c = run(SystemCase::LagIII, lp(l, m));
                REQUIRE(c.reps.solutions.size() == 2);
                const auto* r1 = find(c.reps, 1, true, 0, R(0));
                REQUIRE(r1);
                CHECK(r1->e_slope == R(2));
                CHECK(r1->e_intercept == R(7, 2) + l);
                CHECK(r1->phi == rp(R(4), {X(R(0)), PX(R(1)), X(mm), X(R(1) + mm), {R(2), R(0), R(3) + R(2) * l}}));
                const R e2 = R(3, 2) + l - R(2) * mm;
                const auto* r2 = find(c.reps, owner(c.reps, 4), false, 0, e2);
                REQUIRE(r2);
                CHECK(r2->phi.at_p(R(0)) ==
                      rp(R(4), {X(R(0)), PX(R(1)), X(R(-1)), X(R(-1) - mm), {R(2), R(0), R(1) + R(2) * l - R(2) * mm}})
                          .at_p(R(0)));
                CHECK(states_at(*r2, 0) == std::set<State>{{-static_cast<long>(m) - 1, 0}});
                // the (x - 1) factor closes the chain without fixing E and is only flagged
                bool flagged = false;
                for (const auto& br : c.reps.branches)
                    if (br.index == owner(c.reps, 4))
                        for (const auto& [k, p] : br.unconstrained) flagged |= p == 0;
                CHECK(flagged);
                ++checked;
            }
        }
    CHECK(checked > 40);
}

TEST_CASE("second-order Laguerre representation") {
    for (auto [l, a, b] : {std::tuple{R(2), 1u, 1u}, std::tuple{R(7, 2), 2u, 1u}, std::tuple{R(3), 1u, 2u},
                           std::tuple{R(5, 2), 3u, 2u}}) {
        CAPTURE(l);
        const R m1(static_cast<long>(a)), m2(static_cast<long>(b));
        const auto c = run(SystemCase::Lag2, l2p(l, a, b));
        REQUIRE(c.reps.solutions.size() == 1);
        const auto& s = c.reps.solutions[0];
        CHECK(s.branch == 1);
        CHECK(s.all_p);
        CHECK(s.e_slope == R(2));
        CHECK(s.e_intercept == l + R(5, 2));
        CHECK(s.phi == rp(R(32), {X(R(0)), PX(R(1)), X(l + R(1, 2)), X(l + m1 + R(1, 2)), X(l + m1 + R(3, 2)),
                                  X(l - m2 - R(1, 2)), X(l - m2 + R(1, 2))}));
        std::size_t factors = 0;
        for (const auto& br : c.reps.branches) factors += 1 + br.aliases.size();
        CHECK(factors == 7);
        for (std::size_t i = 1; i < c.reps.branches.size(); ++i) {
            const auto& br = c.reps.branches[i];
            CHECK(br.solutions == 0);
            CHECK(br.positivity_failures + br.spectrum_failures > 0);
        }
    }
}

TEST_CASE("p-families are recognized from a short scan") {
    EnumerateOptions o;
    o.pmax = 3;
    const auto c = run(SystemCase::H1, hp(2), o);
    CHECK(c.reps.solutions.size() == 2);
    CHECK(find(c.reps, 1, true, 0, R(0)));
}

TEST_CASE("property: emitted solutions satisfy the representation constraints") {
    std::mt19937 rng(20261016);
    std::uniform_int_distribution<int> pick(0, 5), small(0, 3), half(2, 9);
    for (int trial = 0; trial < 24; ++trial) {
        const auto kind = static_cast<SystemCase>(pick(rng));
        SystemParams p;
        p.m = 2 * static_cast<unsigned>(small(rng)) + (kind == SystemCase::LagI || kind == SystemCase::LagII ? 1 : 0);
        if (kind == SystemCase::LagIII) p.m = 2 * static_cast<unsigned>(1 + small(rng) % 2);
        p.m1 = 2 * static_cast<unsigned>(small(rng) % 3);
        p.m2 = 2 * static_cast<unsigned>(small(rng) % 3);
        if (kind == SystemCase::Lag2) p.m1 = 1 + static_cast<unsigned>(small(rng)), p.m2 = static_cast<unsigned>(small(rng));
        p.l = R(half(rng) + 2 * static_cast<long>(kind == SystemCase::Lag2 ? p.m2 : p.m), 2);
        CAPTURE(to_string(kind));
        CAPTURE(p.m);
        CAPTURE(*p.l);
        Case2D c;
        try {
            c = run(kind, p, EnumerateOptions{12, true, 1});
        } catch (const ConstraintError&) {
            continue;
        }
        CHECK_FALSE(c.reps.solutions.empty());
        for (const auto& s : c.reps.solutions) {
            for (long q = 0; q <= (s.all_p ? 12 : 0); ++q) {
                const long pp = s.all_p ? q : s.p;
                check_constraints(c.phi, s, pp);
                for (const auto& [x, y] : states_at(s, pp)) {
                    CHECK(c.sys.hx.spectrum.contains_nu(x));
                    CHECK(c.sys.hy.spectrum.contains_nu(y));
                    CHECK(c.sys.hx.spectrum.energy(x) + c.sys.hy.spectrum.energy(y) == s.energy_at(pp));
                }
            }
        }
        // switching the physical filter off can only add solutions
        const auto loose = enumerate_reps(c.phi, c.sys.hx.spectrum, c.sys.hy.spectrum, EnumerateOptions{12, false, 1});
        CHECK(loose.solutions.size() >= c.reps.solutions.size());
    }
}

TEST_CASE("holes") {
    const auto c = run(SystemCase::H1, hp(2));
    const auto h = detect_holes(c.reps, c.sys.hx.spectrum, c.sys.hy.spectrum, R(8));
    auto level = [&](const R& e) -> const LevelReport& {
        for (const auto& l : h.levels)
            if (l.energy == e) return l;
        FAIL("missing level");
        return h.levels.front();
    };
    CHECK(level(R(-4)).holes.empty());
    CHECK(level(R(-2)).holes == std::vector<State>{{-3, 1}});
    CHECK(level(R(-2)).covered.empty());
    CHECK(level(R(0)).holes == std::vector<State>{{-3, 2}});
    for (long s = 1; s <= 4; ++s) {
        const auto& lv = level(R(2 * s));
        CHECK(lv.physical.size() == static_cast<std::size_t>(s + 1));
        CHECK(lv.covered.size() == static_cast<std::size_t>(s));
        CHECK(lv.holes == std::vector<State>{{-3, s + 2}});
    }
    CHECK(h.total_holes == 6);

    const auto lag = run(SystemCase::LagI, lp(R(2), 1));
    CHECK(detect_holes(lag.reps, lag.sys.hx.spectrum, lag.sys.hy.spectrum, R(40)).total_holes == 0);
    const auto l2 = run(SystemCase::Lag2, l2p(R(2), 1, 1));
    CHECK(detect_holes(l2.reps, l2.sys.hx.spectrum, l2.sys.hy.spectrum, R(40)).total_holes == 0);
}

TEST_CASE("JSON is deterministic and independent of the thread count") {
    const auto a = run(SystemCase::H2, hp2(2, 2), EnumerateOptions{50, true, 1});
    const auto b = run(SystemCase::H2, hp2(2, 2), EnumerateOptions{50, true, 4});
    CHECK(to_json(a.reps).dump() == to_json(b.reps).dump());
    CHECK(to_json(a.sys).dump() == to_json(b.sys).dump());
    const auto j = to_json(a.reps);
    CHECK(j["solutions"][0]["p"] == "N");
    CHECK(j["solutions"][0]["E"]["slope"] == "2/1");
    CHECK(j["solutions"][4]["annotation"] == "duplicate structure function");
    const auto h = detect_holes(a.reps, a.sys.hx.spectrum, a.sys.hy.spectrum, R(6));
    CHECK(to_json(h).dump() == to_json(h).dump());
}
