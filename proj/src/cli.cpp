#include "eop/cli.hpp"

#include "eop/errors.hpp"
#include "eop/json_io.hpp"
#include "eop/numverify.hpp"
#include "eop/superalg.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

namespace eop::cli {

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised after the report is written when a checked identity or tolerance fails.
class VerificationFailed : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using nlohmann::json;

struct Options {
    std::string case_name;
    std::optional<unsigned> m, m1, m2;
    std::optional<std::string> l;
    std::string format = "json";
    std::string out;
    unsigned jobs = 1;
};

// Parameters each case takes; all listed ones are required and no others are accepted.
const std::map<std::string, std::set<std::string>>& family_schema() {
    static const std::map<std::string, std::set<std::string>> s{
        {"oscillator", {}},       {"radial", {"l"}},        {"hermite-ext", {"m"}},          {"lag-i", {"l", "m"}},
        {"lag-ii", {"l", "m"}},   {"lag-iii", {"l", "m"}}, {"lag2", {"l", "m1", "m2"}}};
    return s;
}

const std::map<std::string, std::set<std::string>>& system_schema() {
    static const std::map<std::string, std::set<std::string>> s{
        {"H1", {"m"}},          {"H2", {"m1", "m2"}},    {"LagI", {"l", "m"}},
        {"LagII", {"l", "m"}},  {"LagIII", {"l", "m"}}, {"Lag2", {"l", "m1", "m2"}}};
    return s;
}

std::string join(const std::set<std::string>& s) {
    std::string out;
    for (const auto& x : s) out += (out.empty() ? "" : ", ") + x;
    return out;
}

void validate(const Options& o, const std::map<std::string, std::set<std::string>>& schema) {
    const auto it = schema.find(o.case_name);
    if (it == schema.end()) {
        std::set<std::string> names;
        for (const auto& [k, v] : schema) names.insert(k);
        throw UsageError("unknown case '" + o.case_name + "' (expected one of: " + join(names) + ")");
    }
    std::set<std::string> given;
    if (o.m) given.insert("m");
    if (o.m1) given.insert("m1");
    if (o.m2) given.insert("m2");
    if (o.l) given.insert("l");
    for (const auto& p : it->second)
        if (!given.count(p)) throw UsageError("case " + o.case_name + " requires --" + p);
    for (const auto& p : given)
        if (!it->second.count(p)) throw UsageError("case " + o.case_name + " does not take --" + p);
    if (o.format != "json" && o.format != "text") throw UsageError("--format must be json or text");
}

std::optional<Rational> parse_l(const Options& o) {
    if (!o.l) return std::nullopt;
    try {
        return Rational::parse(*o.l);
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("--l: ") + e.what());
    }
}

ExtensionSpec build_family(const Options& o, const BuildOptions& b) {
    validate(o, family_schema());
    const auto l = parse_l(o);
    const std::string& c = o.case_name;
    if (c == "oscillator") return build_oscillator(b);
    if (c == "radial") return build_radial(*l, b);
    if (c == "hermite-ext") return build_hermite_extension(*o.m, b);
    if (c == "lag-i") return build_laguerre_extension(LaguerreCase::I, *l, *o.m, b);
    if (c == "lag-ii") return build_laguerre_extension(LaguerreCase::II, *l, *o.m, b);
    if (c == "lag-iii") return build_laguerre_extension(LaguerreCase::III, *l, *o.m, b);
    return build_laguerre2_extension(*l, *o.m1, *o.m2, b);
}

System2D build_system_from(const Options& o) {
    validate(o, system_schema());
    SystemParams p;
    p.m = o.m.value_or(0);
    p.m1 = o.m1.value_or(0);
    p.m2 = o.m2.value_or(0);
    p.l = parse_l(o);
    return build_system(*parse_system_case(o.case_name), p);
}

json params_json(const Options& o) {
    json p = json::object();
    if (o.m) p["m"] = *o.m;
    if (o.m1) p["m1"] = *o.m1;
    if (o.m2) p["m2"] = *o.m2;
    if (o.l) p["l"] = parse_l(o)->str();
    return p;
}

json envelope(const std::string& command, const Options& o) {
    return {{"schema_version", kSchemaVersion}, {"command", command}, {"case", o.case_name}, {"params", params_json(o)}};
}

void emit(const Options& o, const std::string& content, std::ostream& out) {
    if (o.out.empty()) {
        out << content;
        return;
    }
    std::filesystem::path p(o.out);
    if (p.is_relative())
        if (const char* dir = std::getenv(kOutDirEnv); dir && *dir) p = std::filesystem::path(dir) / p;
    std::error_code ec;
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
    std::ofstream f(p, std::ios::binary);
    if (!f) throw IoError("cannot write " + p.string());
    f << content;
    if (!f) throw IoError("write failed for " + p.string());
}

void emit(const Options& o, const json& j, const std::string& text, std::ostream& out) {
    emit(o, o.format == "json" ? j.dump(2) + "\n" : text, out);
}

std::string states_text(const std::vector<std::pair<long, long>>& v) {
    std::string s;
    for (const auto& [x, y] : v) s += (s.empty() ? "" : " ") + ("(" + std::to_string(x) + "," + std::to_string(y) + ")");
    return s.empty() ? "-" : s;
}

// ---- subcommands ----

int cmd_extend(const Options& o, bool ladder, std::ostream& out) {
    const auto spec = build_family(o, BuildOptions{ladder});
    json j = envelope("extend", o);
    j["spec"] = to_json(spec);
    std::ostringstream t;
    t << spec.label() << "\n";
    t << "denominator: " << spec.denominator.str(spec.is_laguerre() ? "z" : "x") << "\n";
    t << "rational part: " << spec.potential.rational_part.str() << "\n";
    t << "constant: " << spec.potential.constant << "\n";
    t << "spectrum: E = " << spec.spectrum.ground << " + 2 nu, nu >= 0";
    if (spec.spectrum.isolated_nu) t << ", and nu = " << *spec.spectrum.isolated_nu;
    t << "\nladder order " << spec.ladder_order() << ", P(H) = " << spec.ladder_p.str() << "\n";
    emit(o, j, t.str(), out);
    return kExitOk;
}

int cmd_eop(const Options& o, std::optional<long> nu, int max_degree, std::ostream& out) {
    const auto spec = build_family(o, BuildOptions{false});
    std::vector<long> nus;
    if (nu) {
        nus.push_back(*nu);
    } else {
        if (spec.spectrum.isolated_nu) nus.push_back(*spec.spectrum.isolated_nu);
        for (long k = 0; eop_degree(spec, k) <= max_degree; ++k) nus.push_back(k);
    }
    json list = json::array();
    std::ostringstream t;
    bool ok = true;
    const std::string var = spec.is_laguerre() ? "z" : "x";
    for (long k : nus) {
        const auto y = eop_from_supercharge(spec, k);
        const bool zero = eop_ode_residual(spec, y).is_zero();
        ok = ok && zero;
        json e = to_json(y);
        e["ode_residual_zero"] = zero;
        list.push_back(e);
        t << "nu=" << k << " n=" << y.n << (zero ? "" : " [ODE residual nonzero]") << "  " << y.coeffs.str(var) << "\n";
    }
    json j = envelope("eop", o);
    j["family"] = spec.label();
    j["polynomials"] = list;
    emit(o, j, t.str(), out);
    if (!ok) throw VerificationFailed("an EOP does not satisfy its differential equation");
    return kExitOk;
}

int cmd_reps(const Options& o, long pmax, bool no_filter, std::ostream& out) {
    const auto sys = build_system_from(o);
    const auto phi = structure_function(sys);
    EnumerateOptions eo;
    eo.pmax = pmax;
    eo.physical_filter = !no_filter;
    eo.jobs = o.jobs;
    const auto reps = enumerate_reps(phi, sys.hx.spectrum, sys.hy.spectrum, eo);

    json j = envelope("reps", o);
    j["system"] = to_json(sys);
    j["structure_function"] = phi.str();
    j["pmax"] = pmax;
    j["physical_filter"] = !no_filter;
    j["reps"] = to_json(reps);
    std::ostringstream t;
    t << sys.label() << "\nPhi(E,u,x) = " << phi.str() << "\n";
    for (std::size_t i = 0; i < reps.solutions.size(); ++i) {
        const auto& s = reps.solutions[i];
        t << i + 1 << ". u" << s.branch << "  p=" << (s.all_p ? std::string("N") : std::to_string(s.p)) << "  E=";
        if (s.all_p) t << Affine2{Rational(0), s.e_slope, s.e_intercept}.str("");
        else t << s.energy();
        t << "  Phi=" << s.phi.str();
        if (s.duplicate_of) t << "  [duplicate structure function of " << *s.duplicate_of + 1 << "]";
        t << "\n";
    }
    emit(o, j, t.str(), out);
    return kExitOk;
}

int cmd_holes(const Options& o, const std::string& emax_text, long pmax, std::ostream& out) {
    Rational emax;
    try {
        emax = Rational::parse(emax_text);
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("--emax: ") + e.what());
    }
    const auto sys = build_system_from(o);
    EnumerateOptions eo;
    eo.pmax = pmax;
    eo.jobs = o.jobs;
    const auto reps = enumerate_reps(structure_function(sys), sys.hx.spectrum, sys.hy.spectrum, eo);
    const auto h = detect_holes(reps, sys.hx.spectrum, sys.hy.spectrum, emax);
    json j = envelope("holes", o);
    j["e_max"] = emax.str();
    j["holes"] = to_json(h);
    std::ostringstream t;
    for (const auto& l : h.levels)
        t << "E=" << l.energy << "  physical " << l.physical.size() << "  algebraic " << l.covered.size()
          << "  holes " << states_text(l.holes) << "\n";
    t << "total holes: " << h.total_holes << "\n";
    emit(o, j, t.str(), out);
    return kExitOk;
}

struct GridFlags {
    int points = 3000;
    std::optional<double> a, b;
};

GridSpec grid_from(const ExtensionSpec& spec, const GridFlags& g) {
    GridSpec grid = default_grid(spec, g.points);
    if (g.a) grid.a = *g.a;
    if (g.b) grid.b = *g.b;
    return grid;
}

int cmd_verify_spectrum(const Options& o, const GridFlags& g, int k, std::optional<double> tol, std::ostream& out) {
    const auto spec = build_family(o, BuildOptions{false});
    const double tolerance = tol.value_or(spec.potential.radial ? 1e-3 : 1e-4);
    const auto r = fd_eigs(spec, grid_from(spec, g), k, o.jobs);
    const bool ok = r.max_error() <= tolerance;
    json j = envelope("verify-spectrum", o);
    j["report"] = to_json(r);
    j["tolerance"] = tolerance;
    j["pass"] = ok;
    std::ostringstream t;
    for (std::size_t i = 0; i < r.computed.size(); ++i)
        t << format_double(r.computed[i]) << "  analytic " << format_double(r.analytic[i]) << "  error "
          << format_double(r.abs_errors[i]) << "\n";
    t << (ok ? "PASS" : "FAIL") << " max error " << format_double(r.max_error()) << " (tolerance "
      << format_double(tolerance) << ")\n";
    emit(o, j, t.str(), out);
    if (!ok) throw VerificationFailed("eigenvalues differ from the analytic spectrum beyond tolerance");
    return kExitOk;
}

int cmd_verify_ortho(const Options& o, std::vector<int> degrees, int panels, double tol, std::ostream& out) {
    const auto spec = build_family(o, BuildOptions{false});
    if (degrees.empty()) {
        if (spec.spectrum.isolated_nu) degrees.push_back(eop_degree(spec, *spec.spectrum.isolated_nu));
        for (long nu = 0; degrees.size() < 5; ++nu) degrees.push_back(eop_degree(spec, nu));
    }
    QuadConfig q;
    q.panels = panels;
    const auto g = ortho_gram(spec, degrees, q);
    const bool ok = g.max_offdiag_ratio() < tol;
    json j = envelope("verify-ortho", o);
    j["report"] = to_json(g);
    j["tolerance"] = tol;
    j["pass"] = ok;
    std::ostringstream t;
    for (const auto& row : g.matrix) {
        for (double v : row) t << format_double(v) << " ";
        t << "\n";
    }
    t << (ok ? "PASS" : "FAIL") << " max off-diagonal ratio " << format_double(g.max_offdiag_ratio()) << "\n";
    emit(o, j, t.str(), out);
    if (!ok) throw VerificationFailed("Gram matrix is not diagonal within tolerance");
    return kExitOk;
}

int cmd_verify_algebra(const Options& o, bool product, std::ostream& out) {
    json checks = json::object();
    std::ostringstream t;
    bool ok = true;
    auto record = [&](const std::string& name, bool v) {
        checks[name] = v;
        ok = ok && v;
        t << (v ? "ok   " : "FAIL ") << name << "\n";
    };
    json j = envelope("verify-algebra", o);
    if (system_schema().count(o.case_name)) {
        const auto sys = build_system_from(o);
        record("k_shift_is_one", k_shift(sys) == Rational(1));
        record("lambda_balanced", sys.lambda_x * Rational(static_cast<long>(sys.n1)) ==
                                      sys.lambda_y * Rational(static_cast<long>(sys.n2)));
    } else {
        const auto spec = build_family(o, BuildOptions{true});
        if (spec.supercharge) {
            const auto& a = *spec.supercharge;
            record("intertwining", check_intertwining(a.a, spec.h_plus, spec.h_minus));
            record("factorization", check_factorization(a.a, a.a_dagger, spec.h_plus, a.f.expand()));
        }
        if (spec.ladder) {
            record("lowering", check_lowering(*spec.ladder, spec.h_minus));
            if (product) record("ladder_product", check_ladder_product(*spec.ladder, spec.h_minus));
            j["ladder_order"] = spec.ladder->order();
            t << "ladder order " << spec.ladder->order() << "\n";
        }
    }
    j["checks"] = checks;
    j["pass"] = ok;
    emit(o, j, t.str(), out);
    if (!ok) throw VerificationFailed("an operator identity does not hold");
    return kExitOk;
}

int cmd_export_potential(const Options& o, const GridFlags& g, std::ostream& out) {
    const auto spec = build_family(o, BuildOptions{false});
    emit(o, potential_csv(spec, grid_from(spec, g)), out);
    return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exceptional orthogonal polynomial extensions, superintegrable systems and their checks", "eopctl"};
    app.require_subcommand(1);
    Options o;
    auto common = [&](CLI::App* sub, bool system) {
        sub->add_option("--case", o.case_name, system ? "H1, H2, LagI, LagII, LagIII or Lag2"
                                                      : "oscillator, radial, hermite-ext, lag-i, lag-ii, lag-iii or lag2")
            ->required();
        sub->add_option("--m", o.m, "seed degree");
        sub->add_option("--m1", o.m1, "first seed degree");
        sub->add_option("--m2", o.m2, "second seed degree");
        sub->add_option("--l", o.l, "angular momentum, integer or p/q");
        sub->add_option("--format", o.format, "json or text")->capture_default_str();
        sub->add_option("--out", o.out, std::string("output file; relative paths resolve against $") + kOutDirEnv);
        sub->add_option("--jobs", o.jobs, "worker threads")->check(CLI::Range(1u, 256u))->capture_default_str();
    };

    auto* extend = app.add_subcommand("extend", "build a rational extension and print its record");
    common(extend, false);
    bool no_ladder = false;
    extend->add_flag("--no-ladder", no_ladder, "skip the symbolic ladder composition");

    auto* eop = app.add_subcommand("eop", "exceptional polynomials of a family with ODE checks");
    common(eop, false);
    std::optional<long> nu;
    int max_degree = 12;
    eop->add_option("--nu", nu, "single level index");
    eop->add_option("--max-degree", max_degree, "largest degree listed")->capture_default_str();

    auto* reps = app.add_subcommand("reps", "finite-dimensional unitary representations of a 2D system");
    common(reps, true);
    long pmax = 50;
    bool no_filter = false;
    reps->add_option("--pmax", pmax, "largest p scanned")->check(CLI::NonNegativeNumber)->capture_default_str();
    reps->add_flag("--no-filter", no_filter, "keep solutions outside the physical spectrum");

    auto* holes = app.add_subcommand("holes", "physical states missed by the representations");
    common(holes, true);
    std::string emax = "10";
    holes->add_option("--emax", emax, "largest energy, integer or p/q")->capture_default_str();
    holes->add_option("--pmax", pmax, "largest p scanned")->check(CLI::NonNegativeNumber)->capture_default_str();

    GridFlags grid;
    auto grid_opts = [&](CLI::App* sub) {
        sub->add_option("--points", grid.points, "interior grid points")->capture_default_str();
        sub->add_option("--a", grid.a, "left end of the box");
        sub->add_option("--b", grid.b, "right end of the box");
    };

    auto* vspec = app.add_subcommand("verify-spectrum", "finite-difference eigenvalues against the analytic spectrum");
    common(vspec, false);
    grid_opts(vspec);
    int k = 4;
    std::optional<double> tol;
    vspec->add_option("--k", k, "number of levels")->check(CLI::PositiveNumber)->capture_default_str();
    vspec->add_option("--tol", tol, "absolute tolerance (1e-4, or 1e-3 on the half-line)");

    auto* vortho = app.add_subcommand("verify-ortho", "Gram matrix of the polynomials under the family weight");
    common(vortho, false);
    std::vector<int> degrees;
    int panels = 16;
    double otol = 1e-8;
    vortho->add_option("--degrees", degrees, "degrees to include (default: the first five)");
    vortho->add_option("--panels", panels, "quadrature panels")->check(CLI::PositiveNumber)->capture_default_str();
    vortho->add_option("--tol", otol, "bound on off-diagonal ratios")->capture_default_str();

    auto* valg = app.add_subcommand("verify-algebra", "exact operator identities of a family or a 2D system");
    common(valg, false);
    valg->get_option("--case")->description("a family (as for extend) or a 2D system (as for reps)");
    bool product = false;
    valg->add_flag("--product", product, "also check b^dagger b = P(H)");

    auto* vexport = app.add_subcommand("export-potential", "sample the potential to CSV");
    common(vexport, false);
    grid_opts(vexport);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (extend->parsed()) return cmd_extend(o, !no_ladder, out);
        if (eop->parsed()) return cmd_eop(o, nu, max_degree, out);
        if (reps->parsed()) return cmd_reps(o, pmax, no_filter, out);
        if (holes->parsed()) return cmd_holes(o, emax, pmax, out);
        if (vspec->parsed()) return cmd_verify_spectrum(o, grid, k, tol, out);
        if (vortho->parsed()) return cmd_verify_ortho(o, degrees, panels, otol, out);
        if (valg->parsed()) return cmd_verify_algebra(o, product, out);
        if (vexport->parsed()) return cmd_export_potential(o, grid, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ConstraintError& e) {
        err << "constraint violated: " << e.what() << "\n";
        return kExitConstraint;
    } catch (const VerificationFailed& e) {
        err << "verification failed: " << e.what() << "\n";
        return kExitVerification;
    } catch (const InvariantError& e) {
        err << "invariant violated: " << e.what() << "\n";
        return kExitVerification;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitUsage;
}

}  // namespace eop::cli
