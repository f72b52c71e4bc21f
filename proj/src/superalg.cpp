#include "eop/superalg.hpp"

#include "eop/errors.hpp"
#include "eop/json_io.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <thread>

namespace eop {

namespace {

using State = std::pair<long, long>;

// Writes c * var with sign handling; `first` controls the leading sign.
void append_term(std::ostringstream& os, const Rational& c, const std::string& var, bool& first) {
    if (c.is_zero()) return;
    const Rational a = c.abs();
    if (first) {
        if (c.sign() < 0) os << "-";
    } else {
        os << (c.sign() < 0 ? " - " : " + ");
    }
    if (var.empty()) os << a;
    else if (a == Rational(1)) os << var;
    else os << a << var;
    first = false;
}

bool affine_lt(const Affine2& a, const Affine2& b) {
    if (a.cp != b.cp) return a.cp < b.cp;
    if (a.cn != b.cn) return a.cn < b.cn;
    return a.c0 < b.c0;
}

// Sign of f on {(n, p) integer : 1 <= n <= p}: +1 or -1 when constant, 0 otherwise.
int definite_sign(const Affine2& f) {
    const Rational corner = f(Rational(1), Rational(1));
    if (corner.sign() > 0 && f.cp.sign() >= 0 && (f.cn + f.cp).sign() >= 0) return 1;
    if (corner.sign() < 0 && f.cp.sign() <= 0 && (f.cn + f.cp).sign() <= 0) return -1;
    return 0;
}

// Integer-valued and >= 0 on {(n, p) integer : 0 <= n <= p}.
bool natural_on_triangle(const Affine2& f) {
    return f.cn.is_integer() && f.cp.is_integer() && f.c0.is_integer() && f.c0.sign() >= 0 && f.cp.sign() >= 0 &&
           (f.cn + f.cp).sign() >= 0;
}

std::optional<long> as_nu(const Rational& v, const Spectrum1D& s) {
    if (!v.is_integer()) return std::nullopt;
    const long nu = v.floor_long();
    if (!s.contains_nu(nu)) return std::nullopt;
    return nu;
}

struct BranchResult {
    std::vector<RepSolution> solutions;
    BranchReport report;
};

BranchResult process_branch(const StructureFunction& phi, const UBranch& br, const Spectrum1D& sx,
                            const Spectrum1D& sy, const EnumerateOptions& opts) {
    BranchResult out;
    out.report.index = br.index;
    out.report.cE = br.cE;
    out.report.c0 = br.c0;
    out.report.aliases = br.aliases;

    struct Sub {
        Rational a, b, c;  // a E + b x + c
    };
    std::vector<Sub> sub;
    for (const auto& f : phi.factors) sub.push_back({f.cE + f.cu * br.cE, f.cx, f.c0 + f.cu * br.c0});
    const Rational& lam = phi.lambda;

    for (std::size_t k = 0; k < sub.size(); ++k) {
        if (!sub[k].a.is_zero() || sub[k].b.is_zero()) continue;
        const Rational x_star = -sub[k].c / sub[k].b;
        const Rational p = x_star - Rational(1);
        if (p.is_integer() && p.sign() >= 0 && p <= Rational(opts.pmax))
            out.report.unconstrained.emplace_back(static_cast<int>(k) + 1, p.floor_long());
    }

    std::vector<RepSolution> found;
    for (std::size_t j = 0; j < sub.size(); ++j) {
        if (sub[j].a.is_zero()) continue;
        const Rational e_slope = -sub[j].b / sub[j].a;
        const Rational e_int = -(sub[j].b + sub[j].c) / sub[j].a;
        std::vector<Affine2> reduced;
        for (const auto& s : sub) reduced.push_back({s.b, s.a * e_slope, s.a * e_int + s.c});
        const Affine2 u{Rational(0), br.cE * e_slope, br.cE * e_int + br.c0};
        // E_x = E/2 + lambda (n + u), E_y = E/2 - lambda (n + u); nu = (E - ground) / 2
        const Affine2 ex{lam, e_slope / Rational(2) + lam * u.cp, e_int / Rational(2) + lam * u.c0};
        const Affine2 ey{-lam, e_slope / Rational(2) - lam * u.cp, e_int / Rational(2) - lam * u.c0};
        const Affine2 nu_x{ex.cn / Rational(2), ex.cp / Rational(2), (ex.c0 - sx.ground) / Rational(2)};
        const Affine2 nu_y{ey.cn / Rational(2), ey.cp / Rational(2), (ey.c0 - sy.ground) / Rational(2)};

        std::vector<long> passing;
        for (long p = 0; p <= opts.pmax; ++p) {
            const Rational rp(p);
            bool positive = true;
            for (long n = 1; n <= p && positive; ++n) {
                Rational v = phi.constant;
                for (const auto& f : reduced) v *= f(Rational(n), rp);
                positive = v.sign() > 0;
            }
            if (!positive) {
                ++out.report.positivity_failures;
                continue;
            }
            if (opts.physical_filter) {
                bool physical = true;
                for (long n = 0; n <= p && physical; ++n)
                    physical = as_nu(nu_x(Rational(n), rp), sx) && as_nu(nu_y(Rational(n), rp), sy);
                if (!physical) {
                    ++out.report.spectrum_failures;
                    continue;
                }
            }
            passing.push_back(p);
        }

        RepSolution base;
        base.branch = br.index;
        base.closing_factor = static_cast<int>(j) + 1;
        base.e_slope = e_slope;
        base.e_intercept = e_int;
        base.u_cE = br.cE;
        base.u_c0 = br.c0;
        base.phi = ReducedPhi::canonical(phi.constant, reduced);
        base.nu_x = nu_x;
        base.nu_y = nu_y;

        bool all_p = static_cast<long>(passing.size()) == opts.pmax + 1 && opts.pmax >= 1;
        if (all_p) {
            int sign = phi.constant.sign();
            for (const auto& f : reduced) sign *= definite_sign(f);
            all_p = sign > 0 && (!opts.physical_filter || (natural_on_triangle(nu_x) && natural_on_triangle(nu_y)));
        }
        if (all_p) {
            base.all_p = true;
            found.push_back(base);
        } else {
            for (long p : passing) {
                RepSolution s = base;
                s.p = p;
                found.push_back(s);
            }
        }
    }

    // Keep maximal families: drop repeats and fixed-p members of an all-p family.
    for (const auto& s : found) {
        bool redundant = false;
        for (const auto& t : out.solutions) {
            if (t.all_p && s.all_p) redundant = t.e_slope == s.e_slope && t.e_intercept == s.e_intercept;
            else if (t.all_p && !s.all_p) redundant = t.energy_at(s.p) == s.energy();
            else if (!t.all_p && !s.all_p) redundant = t.p == s.p && t.energy() == s.energy();
            if (redundant) break;
        }
        if (redundant) continue;
        if (s.all_p)
            std::erase_if(out.solutions, [&](const RepSolution& t) { return !t.all_p && s.energy_at(t.p) == t.energy(); });
        out.solutions.push_back(s);
    }
    std::stable_sort(out.solutions.begin(), out.solutions.end(), [](const RepSolution& a, const RepSolution& b) {
        if (a.all_p != b.all_p) return a.all_p;
        if (a.p != b.p) return a.p < b.p;
        return a.energy() > b.energy();
    });
    out.report.solutions = static_cast<int>(out.solutions.size());
    return out;
}

nlohmann::json to_json(const Affine2& a) { return {{"n", a.cn.str()}, {"p", a.cp.str()}, {"c", a.c0.str()}}; }

nlohmann::json states_json(const std::vector<State>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& [x, y] : v) a.push_back({x, y});
    return a;
}

}  // namespace

std::string_view to_string(SystemCase c) {
    switch (c) {
        case SystemCase::H1: return "H1";
        case SystemCase::H2: return "H2";
        case SystemCase::LagI: return "LagI";
        case SystemCase::LagII: return "LagII";
        case SystemCase::LagIII: return "LagIII";
        case SystemCase::Lag2: return "Lag2";
    }
    return "?";
}

std::optional<SystemCase> parse_system_case(std::string_view s) {
    for (auto c : {SystemCase::H1, SystemCase::H2, SystemCase::LagI, SystemCase::LagII, SystemCase::LagIII,
                   SystemCase::Lag2})
        if (to_string(c) == s) return c;
    return std::nullopt;
}

std::string System2D::label() const {
    return std::string(to_string(kind)) + ": " + hx.label() + " + " + hy.label();
}

OrderedFactors ordered_ladder_polynomial(const ExtensionSpec& spec) {
    OrderedFactors f;
    if (spec.base_radial) {
        f.constant = Rational(1, 4);
        f.roots = {Rational(3, 2) + spec.base_l, Rational(1, 2) - spec.base_l};
    } else {
        f.roots = {Rational(1)};
    }
    for (const auto& e : spec.factorization_energies) {
        f.roots.push_back(e + Rational(2));
        f.roots.push_back(e);
    }
    if (!(FactoredPoly(f.constant, f.roots) == spec.ladder_p))
        throw InvariantError("ladder polynomial of " + spec.label() + " disagrees with its factored form");
    return f;
}

System2D build_system(SystemCase c, const SystemParams& p, const BuildOptions& opts) {
    System2D s;
    s.kind = c;
    s.params = p;
    auto need_l = [&]() -> const Rational& {
        if (!p.l) throw ConstraintError(std::string(to_string(c)) + ": parameter l is required");
        return *p.l;
    };
    switch (c) {
        case SystemCase::H1:
            s.hx = build_hermite_extension(p.m, opts);
            s.hy = build_oscillator(opts);
            break;
        case SystemCase::H2:
            s.hx = build_hermite_extension(p.m1, opts);
            s.hy = build_hermite_extension(p.m2, opts);
            break;
        case SystemCase::LagI: s.hx = build_laguerre_extension(LaguerreCase::I, need_l(), p.m, opts); break;
        case SystemCase::LagII: s.hx = build_laguerre_extension(LaguerreCase::II, need_l(), p.m, opts); break;
        case SystemCase::LagIII: s.hx = build_laguerre_extension(LaguerreCase::III, need_l(), p.m, opts); break;
        case SystemCase::Lag2: s.hx = build_laguerre2_extension(need_l(), p.m1, p.m2, opts); break;
    }
    if (c != SystemCase::H1 && c != SystemCase::H2) s.hy = build_oscillator(opts);
    s.q = ordered_ladder_polynomial(s.hx);
    s.s = ordered_ladder_polynomial(s.hy);
    return s;
}

Rational k_shift(const System2D& sys) {
    const Rational up = sys.lambda_x * Rational(static_cast<long>(sys.n1)) +
                        sys.lambda_y * Rational(static_cast<long>(sys.n2));
    return up / (Rational(2) * sys.lambda());
}

Rational StructureFunction::operator()(const Rational& e, const Rational& u, const Rational& x) const {
    Rational v = constant;
    for (const auto& f : factors) v *= f(e, u, x);
    return v;
}

std::string StructureFunction::str() const {
    std::ostringstream os;
    os << constant;
    for (const auto& f : factors) {
        os << " (";
        bool first = true;
        append_term(os, f.cE, "E", first);
        append_term(os, f.cx, "x", first);
        append_term(os, f.cu, "u", first);
        append_term(os, f.c0, "", first);
        if (first) os << "0";
        os << ")";
    }
    return os.str();
}

StructureFunction structure_function(const System2D& sys) {
    if (sys.lambda_x * Rational(static_cast<long>(sys.n1)) != sys.lambda_y * Rational(static_cast<long>(sys.n2)))
        throw ConstraintError("structure function: requires n1 lambda_x = n2 lambda_y");
    StructureFunction phi;
    const Rational lam = sys.lambda();
    phi.lambda = lam;
    phi.constant = pow(sys.q.constant, sys.n1) * pow(sys.s.constant, sys.n2);
    // Q(E/2 + lambda K - (n1 - i) lambda_x), S(E/2 - lambda K + j lambda_y), K = x + u
    for (unsigned i = 1; i <= sys.n1; ++i)
        for (const auto& r : sys.q.roots)
            phi.factors.push_back({Rational(1, 2), lam, lam,
                                   -Rational(static_cast<long>(sys.n1 - i)) * sys.lambda_x - r});
    for (unsigned j = 1; j <= sys.n2; ++j)
        for (const auto& r : sys.s.roots)
            phi.factors.push_back({Rational(1, 2), -lam, -lam, Rational(static_cast<long>(j)) * sys.lambda_y - r});
    return phi;
}

std::vector<UBranch> u_roots(const StructureFunction& phi) {
    std::vector<UBranch> out;
    for (std::size_t k = 0; k < phi.factors.size(); ++k) {
        const auto& f = phi.factors[k];
        const int index = static_cast<int>(k) + 1;
        if (f.cu.is_zero()) {
            if (f.cE.is_zero() && !f.c0.is_zero())
                throw ConstraintError("no root branch: factor " + std::to_string(index) +
                                      " is a nonzero constant at x = 0");
            continue;
        }
        const Rational cE = -f.cE / f.cu;
        const Rational c0 = -f.c0 / f.cu;
        auto same = std::find_if(out.begin(), out.end(), [&](const UBranch& b) { return b.cE == cE && b.c0 == c0; });
        if (same != out.end()) same->aliases.push_back(index);
        else out.push_back({index, cE, c0, {}});
    }
    return out;
}

std::string Affine2::str(const std::string& var) const {
    std::ostringstream os;
    bool first = true;
    if (!cp.is_zero()) {
        append_term(os, cp, "p", first);
        append_term(os, c0, "", first);
        append_term(os, cn, var, first);
    } else {
        append_term(os, cn, var, first);
        append_term(os, c0, "", first);
    }
    if (first) os << "0";
    return os.str();
}

ReducedPhi ReducedPhi::canonical(Rational constant, std::vector<Affine2> factors) {
    ReducedPhi r;
    r.constant = std::move(constant);
    for (auto f : factors) {
        if (f.cn.is_zero() && f.cp.is_zero()) {
            r.constant *= f.c0;
            continue;
        }
        const Rational s = f.cp.is_zero() ? f.cn : f.cp;
        f = {f.cn / s, f.cp / s, f.c0 / s};
        r.constant *= s;
        r.factors.push_back(f);
    }
    std::sort(r.factors.begin(), r.factors.end(), affine_lt);
    if (r.constant.is_zero()) r.factors.clear();
    return r;
}

ReducedPhi ReducedPhi::at_p(const Rational& p) const {
    std::vector<Affine2> f;
    for (const auto& a : factors) f.push_back({a.cn, Rational(0), a.cp * p + a.c0});
    return canonical(constant, std::move(f));
}

std::string ReducedPhi::str() const {
    std::ostringstream os;
    os << constant;
    for (const auto& f : factors) {
        if (f.cp.is_zero() && f.c0.is_zero() && f.cn == Rational(1)) os << " x";
        else os << " (" << f.str() << ")";
    }
    return os.str();
}

RepSearch enumerate_reps(const StructureFunction& phi, const Spectrum1D& sx, const Spectrum1D& sy,
                         const EnumerateOptions& opts) {
    if (opts.pmax < 0) throw ConstraintError("enumerate_reps: requires pmax >= 0");
    const std::vector<UBranch> branches = u_roots(phi);
    std::vector<BranchResult> results(branches.size());
    const unsigned jobs = std::max(1u, std::min<unsigned>(opts.jobs, static_cast<unsigned>(branches.size())));
    if (jobs == 1) {
        for (std::size_t i = 0; i < branches.size(); ++i) results[i] = process_branch(phi, branches[i], sx, sy, opts);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < jobs; ++t)
            pool.emplace_back([&, t] {
                for (std::size_t i = t; i < branches.size(); i += jobs)
                    results[i] = process_branch(phi, branches[i], sx, sy, opts);
            });
        for (auto& th : pool) th.join();
    }

    RepSearch out;
    for (auto& r : results) {
        out.branches.push_back(r.report);
        for (auto& s : r.solutions) out.solutions.push_back(std::move(s));
    }
    for (std::size_t i = 0; i < out.solutions.size(); ++i) {
        auto& s = out.solutions[i];
        for (std::size_t k = 0; k < i; ++k) {
            const auto& t = out.solutions[k];
            if (t.all_p != s.all_p) continue;
            const bool same = s.all_p ? (t.phi == s.phi && t.e_slope == s.e_slope && t.e_intercept == s.e_intercept)
                                      : (t.p == s.p && t.energy() == s.energy() &&
                                         t.phi.at_p(Rational(t.p)) == s.phi.at_p(Rational(s.p)));
            if (same) {
                s.duplicate_of = k;
                break;
            }
        }
    }
    return out;
}

HoleReport detect_holes(const RepSearch& reps, const Spectrum1D& sx, const Spectrum1D& sy, const Rational& e_max) {
    HoleReport out;
    for (const auto& level : physical_spectrum(sx, sy, e_max)) {
        std::set<State> covered;
        for (const auto& s : reps.solutions) {
            std::optional<long> p;
            if (s.all_p) {
                if (s.e_slope.is_zero()) continue;
                const Rational k = (level.energy - s.e_intercept) / s.e_slope;
                if (k.is_integer() && k.sign() >= 0) p = k.floor_long();
            } else if (s.energy() == level.energy) {
                p = s.p;
            }
            if (!p) continue;
            for (long n = 0; n <= *p; ++n) {
                const Rational vx = s.nu_x(Rational(n), Rational(*p)), vy = s.nu_y(Rational(n), Rational(*p));
                if (vx.is_integer() && vy.is_integer()) covered.emplace(vx.floor_long(), vy.floor_long());
            }
        }
        LevelReport lr;
        lr.energy = level.energy;
        lr.physical = level.states;
        lr.covered.assign(covered.begin(), covered.end());
        for (const auto& st : level.states)
            if (!covered.count(st)) lr.holes.push_back(st);
        out.total_holes += lr.holes.size();
        out.levels.push_back(std::move(lr));
    }
    return out;
}

nlohmann::json to_json(const System2D& sys) {
    auto of = [](const OrderedFactors& f) {
        nlohmann::json r = nlohmann::json::array();
        for (const auto& x : f.roots) r.push_back(x.str());
        return nlohmann::json{{"constant", f.constant.str()}, {"roots", r}};
    };
    return {{"case", std::string(to_string(sys.kind))},
            {"hx", to_json(sys.hx)},
            {"hy", to_json(sys.hy)},
            {"lambda_x", sys.lambda_x.str()},
            {"lambda_y", sys.lambda_y.str()},
            {"n1", sys.n1},
            {"n2", sys.n2},
            {"Q", of(sys.q)},
            {"S", of(sys.s)}};
}

nlohmann::json to_json(const RepSearch& r) {
    using nlohmann::json;
    json sols = json::array();
    for (const auto& s : r.solutions) {
        json phi_f = json::array();
        for (const auto& f : s.phi.factors) phi_f.push_back({{"x", f.cn.str()}, {"p", f.cp.str()}, {"c", f.c0.str()}});
        json e = {{"slope", s.e_slope.str()}, {"intercept", s.e_intercept.str()}};
        if (!s.all_p) e["value"] = s.energy().str();
        sols.push_back({{"u", {{"branch", "u" + std::to_string(s.branch)}, {"cE", s.u_cE.str()}, {"c0", s.u_c0.str()}}},
                        {"closing_factor", s.closing_factor},
                        {"p", s.all_p ? json("N") : json(s.p)},
                        {"E", e},
                        {"phi", {{"constant", s.phi.constant.str()}, {"factors", phi_f}, {"text", s.phi.str()}}},
                        {"states", {{"nu_x", to_json(s.nu_x)}, {"nu_y", to_json(s.nu_y)}}},
                        {"duplicate_of", s.duplicate_of ? json(*s.duplicate_of) : json(nullptr)},
                        {"annotation", s.duplicate_of ? json("duplicate structure function") : json(nullptr)}});
    }
    json br = json::array();
    for (const auto& b : r.branches) {
        json un = json::array();
        for (const auto& [k, p] : b.unconstrained) un.push_back({{"factor", k}, {"p", p}});
        br.push_back({{"branch", "u" + std::to_string(b.index)},
                      {"cE", b.cE.str()},
                      {"c0", b.c0.str()},
                      {"aliases", b.aliases},
                      {"solutions", b.solutions},
                      {"positivity_failures", b.positivity_failures},
                      {"spectrum_failures", b.spectrum_failures},
                      {"E_unconstrained", un}});
    }
    return {{"solutions", sols}, {"branches", br}};
}

nlohmann::json to_json(const HoleReport& h) {
    nlohmann::json levels = nlohmann::json::array();
    for (const auto& l : h.levels)
        levels.push_back({{"E", l.energy.str()},
                          {"physical", states_json(l.physical)},
                          {"covered", states_json(l.covered)},
                          {"holes", states_json(l.holes)},
                          {"physical_degeneracy", l.physical.size()},
                          {"algebraic_degeneracy", l.covered.size()}});
    return {{"levels", levels}, {"total_holes", h.total_holes}};
}

}  // namespace eop
