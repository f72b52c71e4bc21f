#include "eop/extensions.hpp"

#include "eop/errors.hpp"
#include "eop/json_io.hpp"

#include <map>

namespace eop {

namespace {

RatFunc oscillator_potential() { return RatFunc(Poly::monomial(Rational(1), 2)); }

RatFunc radial_potential(const Rational& l) {
    const Poly num{l * (l + Rational(1)), Rational(0), Rational(0), Rational(0), Rational(1, 4)};
    return RatFunc::normalize(num, Poly::monomial(Rational(1), 2));
}

void require_decaying(const RatFunc& r, const std::string& what) {
    if (!r.is_zero() && r.num().degree() >= r.den().degree())
        throw InvariantError(what + ": rational part of the partner potential does not vanish at infinity");
}

void attach_ladder(ExtensionSpec& s, const LadderSpec& base, const BuildOptions& opts) {
    const auto& sc = *s.supercharge;
    s.ladder_p = partner_ladder_polynomial(base.p, sc.f, base.lambda);
    if (opts.compose_ladder) s.ladder = compose_ladder(sc.a, base, sc.a_dagger, sc.f, s.h_minus);
}

Rational rational_of(unsigned v) { return Rational(static_cast<long>(v)); }

}  // namespace

std::string_view to_string(ExtensionFamily f) {
    switch (f) {
        case ExtensionFamily::Oscillator: return "oscillator";
        case ExtensionFamily::Radial: return "radial";
        case ExtensionFamily::HermiteExt: return "hermite-ext";
        case ExtensionFamily::LagExtI: return "lag-i";
        case ExtensionFamily::LagExtII: return "lag-ii";
        case ExtensionFamily::LagExtIII: return "lag-iii";
        case ExtensionFamily::LagExt2: return "lag2";
    }
    return "?";
}

RatFunc PotentialRecord::base() const { return radial ? radial_potential(base_l) : oscillator_potential(); }

std::optional<long> Spectrum1D::nu_of(const Rational& e) const {
    const Rational k = (e - ground) / Rational(2);
    if (!k.is_integer()) return std::nullopt;
    const long nu = k.floor_long();
    if (!contains_nu(nu)) return std::nullopt;
    return nu;
}

std::vector<long> Spectrum1D::nus_up_to(const Rational& e_max) const {
    std::vector<long> out;
    if (isolated_nu && energy(*isolated_nu) <= e_max) out.push_back(*isolated_nu);
    for (long nu = 0; energy(nu) <= e_max; ++nu) out.push_back(nu);
    return out;
}

int ExtensionSpec::ladder_order() const {
    if (ladder) return ladder->order();
    const int base = base_radial ? 2 : 1;
    return supercharge ? base + 2 * supercharge->order() : base;
}

std::string ExtensionSpec::label() const {
    std::string s(to_string(family));
    switch (family) {
        case ExtensionFamily::Oscillator: return s;
        case ExtensionFamily::Radial: return s + "(l=" + params.l->str() + ")";
        case ExtensionFamily::HermiteExt: return s + "(m=" + std::to_string(params.m) + ")";
        case ExtensionFamily::LagExt2:
            return s + "(l=" + params.l->str() + ",m1=" + std::to_string(params.m1) +
                   ",m2=" + std::to_string(params.m2) + ")";
        default: return s + "(l=" + params.l->str() + ",m=" + std::to_string(params.m) + ")";
    }
}

ExtensionSpec build_oscillator(const BuildOptions&) {
    ExtensionSpec s;
    s.family = ExtensionFamily::Oscillator;
    s.denominator = Poly::constant(Rational(1));
    s.potential = {false, Rational(0), RatFunc(), Rational(0)};
    s.spectrum = {Rational(1), std::nullopt};
    s.weight = {Variable::X, Rational(0), s.denominator};
    s.ladder = oscillator_ladder();
    s.ladder_p = s.ladder->p;
    s.h_plus = s.h_minus = schrodinger(oscillator_potential());
    return s;
}

ExtensionSpec build_radial(const Rational& l, const BuildOptions&) {
    if (l <= Rational(-1, 2)) throw ConstraintError("radial oscillator: requires l > -1/2, got l = " + l.str());
    ExtensionSpec s;
    s.family = ExtensionFamily::Radial;
    s.params.l = l;
    s.alpha = l + Rational(1, 2);
    s.denominator = Poly::constant(Rational(1));
    s.denominator_var = Variable::Z;
    s.potential = {true, l, RatFunc(), Rational(0)};
    s.spectrum = {l + Rational(3, 2), std::nullopt};
    s.weight = {Variable::Z, *s.alpha, s.denominator};
    s.ladder = radial_ladder(l);
    s.ladder_p = s.ladder->p;
    s.h_plus = s.h_minus = schrodinger(radial_potential(l));
    s.base_radial = true;
    s.base_l = l;
    return s;
}

ExtensionSpec build_hermite_extension(unsigned m, const BuildOptions& opts) {
    const SeedSolution seed = seed_solution(SeedFamily::HermitePseudo, Rational(0), m);
    ExtensionSpec s;
    s.family = ExtensionFamily::HermiteExt;
    s.params.m = m;
    s.supercharge = first_order_supercharge(seed);
    s.denominator = seed.polynomial_part;
    s.h_plus = schrodinger(oscillator_potential());
    const RatFunc v_minus = oscillator_potential() + s.supercharge->q0.derivative() * Rational(2);
    s.h_minus = schrodinger(v_minus);
    s.potential = {false, Rational(0), v_minus - oscillator_potential() + RatFunc(Rational(2)), Rational(-2)};
    require_decaying(s.potential.rational_part, s.label());
    s.spectrum = {Rational(1), -static_cast<long>(m) - 1};
    s.weight = {Variable::X, Rational(0), s.denominator};
    s.factorization_energies = {seed.energy};
    attach_ladder(s, oscillator_ladder(), opts);
    return s;
}

ExtensionSpec build_laguerre_extension(LaguerreCase c, const Rational& l, unsigned m, const BuildOptions& opts) {
    static const char* names[] = {"I", "II", "III"};
    const std::string tag = std::string("laguerre case ") + names[static_cast<int>(c)] + " extension";
    if (m == 0) throw ConstraintError(tag + ": requires m >= 1");
    const Rational alpha = l + Rational(1, 2);
    if (alpha <= Rational(0)) throw ConstraintError(tag + ": requires alpha = l + 1/2 > 0, got l = " + l.str());
    if (c == LaguerreCase::I && l <= Rational(0))
        throw ConstraintError(tag + ": requires alpha - 1 > -1, i.e. l > 0, got l = " + l.str());
    if (c != LaguerreCase::I && alpha <= rational_of(m) - Rational(1))
        throw ConstraintError(tag + ": requires alpha > m - 1, got alpha = " + alpha.str() + ", m = " +
                              std::to_string(m));
    if (c == LaguerreCase::III && m % 2 != 0) throw ConstraintError(tag + ": requires m even");

    const SeedFamily fam = c == LaguerreCase::I    ? SeedFamily::LaguerreI
                           : c == LaguerreCase::II ? SeedFamily::LaguerreII
                                                   : SeedFamily::LaguerreIII;
    const Rational l_seed = c == LaguerreCase::I ? l - Rational(1) : l + Rational(1);
    const SeedSolution seed = seed_solution(fam, l_seed, m);

    ExtensionSpec s;
    s.family = c == LaguerreCase::I    ? ExtensionFamily::LagExtI
               : c == LaguerreCase::II ? ExtensionFamily::LagExtII
                                       : ExtensionFamily::LagExtIII;
    s.params.m = m;
    s.params.l = l;
    s.l_prime = l_seed;
    s.alpha = alpha;
    s.supercharge = first_order_supercharge(seed);
    s.denominator = seed.polynomial_part;
    s.denominator_var = Variable::Z;
    s.h_plus = schrodinger(radial_potential(l_seed));
    const RatFunc v_minus = radial_potential(l_seed) + s.supercharge->q0.derivative() * Rational(2);
    s.h_minus = schrodinger(v_minus);
    const Rational shift = c == LaguerreCase::II ? Rational(1) : Rational(-1);
    s.potential = {true, l, v_minus - radial_potential(l) - RatFunc(shift), shift};
    require_decaying(s.potential.rational_part, tag);
    s.spectrum = {l_seed + Rational(3, 2), std::nullopt};
    if (c == LaguerreCase::III) s.spectrum.isolated_nu = -static_cast<long>(m) - 1;
    s.weight = {Variable::Z, alpha, s.denominator};
    s.factorization_energies = {seed.energy};
    s.base_radial = true;
    s.base_l = l_seed;
    attach_ladder(s, radial_ladder(l_seed), opts);
    return s;
}

ExtensionSpec build_laguerre2_extension(const Rational& l, unsigned m1, unsigned m2, const BuildOptions& opts) {
    const std::string tag = "laguerre second-order extension";
    const Rational alpha = l + Rational(1, 2);
    if (alpha <= Rational(0)) throw ConstraintError(tag + ": requires alpha = l + 1/2 > 0, got l = " + l.str());
    if (rational_of(m2) >= alpha)
        throw ConstraintError(tag + ": requires m2 < l + 1/2, got m2 = " + std::to_string(m2) + ", l = " + l.str());
    const SeedSolution s1 = seed_solution(SeedFamily::LaguerreI, l, m1);
    const SeedSolution s2 = seed_solution(SeedFamily::LaguerreII, l, m2);

    ExtensionSpec s;
    s.family = ExtensionFamily::LagExt2;
    s.params.m1 = m1;
    s.params.m2 = m2;
    s.params.l = l;
    s.alpha = alpha;
    s.supercharge = second_order_supercharge(s1, s2);
    s.denominator = *s.supercharge->wronskian_g;
    s.denominator_var = Variable::Z;
    s.h_plus = schrodinger(radial_potential(l));
    const RatFunc v_rat = s.supercharge->q1->derivative() * Rational(2);
    s.h_minus = schrodinger(radial_potential(l) + v_rat);
    s.potential = {true, l, v_rat, Rational(0)};
    require_decaying(v_rat, tag);
    s.spectrum = {l + Rational(3, 2), std::nullopt};
    s.weight = {Variable::Z, alpha, s.denominator};
    s.factorization_energies = {s1.energy, s2.energy};
    s.base_radial = true;
    s.base_l = l;
    attach_ladder(s, radial_ladder(l), opts);
    return s;
}

int eop_degree(const ExtensionSpec& spec, long nu) {
    if (spec.spectrum.isolated_nu && nu == *spec.spectrum.isolated_nu) return 0;
    const long m = spec.params.m;
    switch (spec.family) {
        case ExtensionFamily::Oscillator:
        case ExtensionFamily::Radial: return static_cast<int>(nu);
        case ExtensionFamily::HermiteExt:
        case ExtensionFamily::LagExtIII: return static_cast<int>(m + nu + 1);
        case ExtensionFamily::LagExtI:
        case ExtensionFamily::LagExtII: return static_cast<int>(m + nu);
        case ExtensionFamily::LagExt2: return static_cast<int>(spec.params.m1 + spec.params.m2 + 1 + nu);
    }
    return -1;
}

EopPolynomial eop_from_supercharge(const ExtensionSpec& spec, long nu) {
    if (!spec.spectrum.contains_nu(nu))
        throw ConstraintError(spec.label() + ": nu = " + std::to_string(nu) + " is not in the spectrum");
    EopPolynomial y;
    y.nu = nu;
    y.alpha = spec.alpha;
    y.var = spec.denominator_var;
    const int expected = eop_degree(spec, nu);

    if (spec.spectrum.isolated_nu && nu == *spec.spectrum.isolated_nu) {
        y.coeffs = Poly::constant(Rational(1));
    } else if (!spec.supercharge) {
        y.coeffs = spec.is_laguerre() ? laguerre(static_cast<unsigned>(nu), *spec.alpha) : hermite(static_cast<unsigned>(nu));
        y.coeffs = y.coeffs.primitive();
    } else {
        const auto un = static_cast<unsigned>(nu);
        RatFunc rho;
        Poly r;
        if (spec.base_radial) {
            // G = x^{l_b+1} exp(-x^2/4), R = L_nu^{(l_b+1/2)}(x^2/2)
            rho = RatFunc::normalize(Poly{spec.base_l + Rational(1), Rational(0), Rational(-1, 2)}, Poly::x());
            r = substitute_half_square(laguerre(un, spec.base_l + Rational(1, 2)));
        } else {
            rho = RatFunc(Poly::monomial(Rational(-1), 1));
            r = hermite(un);
        }
        RatFunc t = spec.supercharge->a.gauge(rho).apply(RatFunc(r));
        if (spec.is_laguerre()) {
            const Rational shift = spec.base_l - *spec.params.l;
            if (!shift.is_integer()) throw InvariantError("construction inconsistency: non-integer power shift");
            const long k = shift.floor_long();
            const RatFunc xk = k >= 0 ? RatFunc(Poly::monomial(Rational(1), static_cast<unsigned>(k)))
                                      : RatFunc(Poly::monomial(Rational(1), static_cast<unsigned>(-k))).inverse();
            t = t * xk * RatFunc(substitute_half_square(spec.denominator));
        } else {
            t = t * RatFunc(spec.denominator);
        }
        if (!t.is_polynomial() || t.is_zero())
            throw InvariantError("construction inconsistency: non-polynomial remainder for " + spec.label() +
                                 ", nu = " + std::to_string(nu));
        Poly p = t.num() * t.den().leading().inverse();
        if (spec.is_laguerre()) {
            try {
                p = even_to_half_square(p);
            } catch (const std::domain_error&) {
                throw InvariantError("construction inconsistency: odd powers of x in " + spec.label());
            }
        }
        y.coeffs = p.primitive();
    }
    y.n = y.coeffs.degree();
    if (y.n != expected)
        throw InvariantError("construction inconsistency: degree " + std::to_string(y.n) + " != expected " +
                             std::to_string(expected) + " for " + spec.label());
    return y;
}

Poly eop_ode_residual(const ExtensionSpec& spec, const EopPolynomial& y) {
    const Poly& g = spec.denominator;
    const Poly& p = y.coeffs;
    const Poly d1 = p.derivative(), d2 = d1.derivative();
    const Rational n(static_cast<long>(y.n));
    if (!spec.is_laguerre()) {
        // H y'' - 2 (x H + H') y' + 2 n H y
        const Poly x = Poly::x();
        return g * d2 - Rational(2) * (x * g + g.derivative()) * d1 + Rational(2) * n * g * p;
    }
    // g z y'' + (g (alpha + 1 - z) - 2 z g') y' + ((z - alpha) g' + z g'') y = (k - n) g y
    Rational k(0);
    if (spec.family == ExtensionFamily::LagExt2) k = rational_of(spec.params.m1 + spec.params.m2 + 1);
    else if (spec.supercharge) k = rational_of(spec.params.m);
    const Rational& a = *spec.alpha;
    const Poly z = Poly::x();
    const Poly gp = g.derivative(), gpp = gp.derivative();
    return g * z * d2 + (g * Poly{a + Rational(1), Rational(-1)} - Rational(2) * z * gp) * d1 +
           (Poly{-a, Rational(1)} * gp + z * gpp) * p - (k - n) * g * p;
}

std::vector<Level2D> physical_spectrum(const Spectrum1D& sx, const Spectrum1D& sy, const Rational& e_max) {
    std::map<Rational, std::vector<std::pair<long, long>>> levels;
    const Rational ey_min = sy.energy(sy.min_nu());
    for (long nx : sx.nus_up_to(e_max - ey_min)) {
        const Rational ex = sx.energy(nx);
        for (long ny : sy.nus_up_to(e_max - ex)) levels[ex + sy.energy(ny)].emplace_back(nx, ny);
    }
    std::vector<Level2D> out;
    out.reserve(levels.size());
    for (auto& [e, states] : levels) out.push_back({e, std::move(states)});
    return out;
}

nlohmann::json to_json(const ExtensionSpec& s) {
    using nlohmann::json;
    json params = json::object();
    if (s.family == ExtensionFamily::HermiteExt || s.family == ExtensionFamily::LagExtI ||
        s.family == ExtensionFamily::LagExtII || s.family == ExtensionFamily::LagExtIII)
        params["m"] = s.params.m;
    if (s.family == ExtensionFamily::LagExt2) {
        params["m1"] = s.params.m1;
        params["m2"] = s.params.m2;
    }
    if (s.params.l) params["l"] = s.params.l->str();

    json j;
    j["family"] = std::string(to_string(s.family));
    j["params"] = params;
    j["l_prime"] = s.l_prime ? json(s.l_prime->str()) : json(nullptr);
    j["alpha"] = s.alpha ? json(s.alpha->str()) : json(nullptr);
    j["denominator"] = {{"variable", s.is_laguerre() ? "z" : "x"}, {"coeffs", to_json(s.denominator)}};
    j["potential"] = {{"base", s.potential.radial ? "radial" : "oscillator"},
                      {"base_l", s.potential.radial ? json(s.potential.base_l.str()) : json(nullptr)},
                      {"rational_part", to_json(s.potential.rational_part)},
                      {"constant", s.potential.constant.str()}};
    j["spectrum"] = {{"formula", "E = ground + 2 nu"},
                     {"ground", s.spectrum.ground.str()},
                     {"nu_min", s.spectrum.min_nu()},
                     {"isolated_nu", s.spectrum.isolated_nu ? json(*s.spectrum.isolated_nu) : json(nullptr)}};
    j["weight"] = {{"variable", s.weight.var == Variable::Z ? "z" : "x"},
                   {"density", s.weight.var == Variable::Z ? "z^power exp(-z) / den(z)^2" : "exp(-x^2) / den(x)^2"},
                   {"power", s.weight.power.str()},
                   {"den", to_json(s.weight.denominator)}};
    j["ladder"] = {{"order", s.ladder_order()}, {"lambda", "2/1"}, {"P", to_json(s.ladder_p)}};
    json fe = json::array();
    for (const auto& e : s.factorization_energies) fe.push_back(e.str());
    j["factorization_energies"] = fe;
    if (s.supercharge) {
        json sc = {{"order", s.supercharge->order()}, {"q0", to_json(s.supercharge->q0)}};
        if (s.supercharge->q1) sc["q1"] = to_json(*s.supercharge->q1);
        j["supercharge"] = sc;
    }
    return j;
}

nlohmann::json to_json(const EopPolynomial& y) {
    return {{"nu", y.nu},
            {"n", y.n},
            {"variable", y.var == Variable::Z ? "z" : "x"},
            {"alpha", y.alpha ? nlohmann::json(y.alpha->str()) : nlohmann::json(nullptr)},
            {"coeffs", to_json(y.coeffs)}};
}

}  // namespace eop
