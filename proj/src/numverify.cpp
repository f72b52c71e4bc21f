#include "eop/numverify.hpp"

#include "eop/errors.hpp"
#include "eop/json_io.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <limits>
#include <sstream>

namespace eop {

namespace {

bool radial_like(const ExtensionSpec& spec) { return spec.potential.radial; }

std::vector<double> sample(const Potential& v, const GridSpec& grid) {
    std::vector<double> out(static_cast<std::size_t>(grid.points));
    for (int i = 0; i < grid.points; ++i) {
        const double x = grid.node(i);
        out[static_cast<std::size_t>(i)] = v(x);
        if (!std::isfinite(out[static_cast<std::size_t>(i)]))
            throw ConstraintError("potential is not finite at x = " + format_double(x));
    }
    return out;
}

// Number of eigenvalues below lambda (LDL^T inertia).
int sturm_count(const std::vector<double>& diag, double off2, double lambda) {
    int count = 0;
    double q = 1.0;
    for (std::size_t i = 0; i < diag.size(); ++i) {
        q = diag[i] - lambda - (i == 0 ? 0.0 : off2 / q);
        if (q == 0.0) q = -std::numeric_limits<double>::epsilon() * (std::abs(lambda) + 1.0);
        if (q < 0.0) ++count;
    }
    return count;
}

std::vector<double> analytic_levels(const Spectrum1D& s, int k) {
    std::vector<double> out;
    if (s.isolated_nu) out.push_back(s.energy(*s.isolated_nu).to_double());
    for (long nu = 0; static_cast<int>(out.size()) < k; ++nu) out.push_back(s.energy(nu).to_double());
    return out;
}

long nu_for_degree(const ExtensionSpec& spec, int degree) {
    if (spec.spectrum.isolated_nu && eop_degree(spec, *spec.spectrum.isolated_nu) == degree)
        return *spec.spectrum.isolated_nu;
    for (long nu = 0; nu <= degree + 8; ++nu)
        if (eop_degree(spec, nu) == degree) return nu;
    throw ConstraintError(spec.label() + ": no polynomial of degree " + std::to_string(degree) + " in the family");
}

double eval_var(const Poly& p, const ExtensionSpec& spec, double x) {
    return p.eval(spec.is_laguerre() ? 0.5 * x * x : x);
}

// Integration density in x (weight times Jacobian) without the polynomial factors.
double density(const ExtensionSpec& spec, double x) {
    const double den = eval_var(spec.denominator, spec, x);
    if (spec.is_laguerre()) {
        const double z = 0.5 * x * x;
        return std::pow(z, spec.weight.power.to_double()) * std::exp(-z) / (den * den) * x;
    }
    return std::exp(-x * x) / (den * den);
}

std::vector<std::vector<double>> gram_with(const ExtensionSpec& spec, const std::vector<Poly>& ys, double lower,
                                           double upper, int panels) {
    using Gauss = boost::math::quadrature::gauss<double, 30>;
    const std::size_t n = ys.size();
    std::vector<std::vector<double>> g(n, std::vector<double>(n, 0.0));
    const double width = (upper - lower) / panels;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            auto f = [&](double x) { return density(spec, x) * eval_var(ys[i], spec, x) * eval_var(ys[j], spec, x); };
            double sum = 0.0;
            for (int k = 0; k < panels; ++k) sum += Gauss::integrate(f, lower + k * width, lower + (k + 1) * width);
            g[i][j] = g[j][i] = sum;
        }
    return g;
}

}  // namespace

void GridSpec::validate() const {
    if (!(b > a)) throw ConstraintError("grid: requires b > a");
    if (points < 16) throw ConstraintError("grid: requires at least 16 points");
}

GridSpec default_grid(const ExtensionSpec& spec, int points) {
    if (radial_like(spec)) return {0.0, 20.0, points};
    return {-12.0, 12.0, points};
}

double EigReport::max_error() const {
    double m = 0.0;
    for (double e : abs_errors) m = std::max(m, e);
    return m;
}

Potential potential_of(const ExtensionSpec& spec) {
    const RatFunc v = spec.potential.full();
    return [v](double x) { return v.eval(x); };
}

std::vector<double> tridiagonal_lowest(const Potential& v, const GridSpec& grid, int k) {
    grid.validate();
    if (k < 1 || k > grid.points) throw ConstraintError("fd_eigs: requires 1 <= k <= grid points");
    const double h = grid.spacing();
    const double off = -1.0 / (h * h);
    std::vector<double> diag = sample(v, grid);
    for (double& d : diag) d += 2.0 / (h * h);
    const double lo0 = *std::min_element(diag.begin(), diag.end()) - 2.0 * std::abs(off);
    const double hi0 = *std::max_element(diag.begin(), diag.end()) + 2.0 * std::abs(off);

    std::vector<double> out;
    for (int j = 0; j < k; ++j) {
        double lo = out.empty() ? lo0 : out.back(), hi = hi0;
        for (int it = 0; it < 200 && hi - lo > 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(hi));
             ++it) {
            const double mid = 0.5 * (lo + hi);
            if (sturm_count(diag, off * off, mid) >= j + 1) hi = mid;
            else lo = mid;
        }
        out.push_back(0.5 * (lo + hi));
    }
    return out;
}

EigReport fd_eigs(const Potential& v, const GridSpec& grid, int k, const std::vector<double>& analytic,
                  unsigned jobs) {
    grid.validate();
    EigReport r;
    r.grid = grid;
    r.grid_fine = grid.refined();
    if (jobs > 1) {
        auto fine = std::async(std::launch::async, [&] { return tridiagonal_lowest(v, r.grid_fine, k); });
        r.coarse = tridiagonal_lowest(v, grid, k);
        r.fine = fine.get();
    } else {
        r.coarse = tridiagonal_lowest(v, grid, k);
        r.fine = tridiagonal_lowest(v, r.grid_fine, k);
    }
    // a level above the walls is a box state, not a bound state of V
    const double wall = std::min(v(r.grid_fine.node(0)), v(r.grid_fine.node(r.grid_fine.points - 1)));
    if (r.fine.back() >= wall)
        throw ConstraintError("fd_eigs: level " + std::to_string(k) + " is not resolvable on this box");
    for (int i = 0; i < k; ++i) r.computed.push_back((4.0 * r.fine[i] - r.coarse[i]) / 3.0);
    r.analytic = analytic;
    for (std::size_t i = 0; i < analytic.size() && i < r.computed.size(); ++i)
        r.abs_errors.push_back(std::abs(r.computed[i] - analytic[i]));
    return r;
}

EigReport fd_eigs(const ExtensionSpec& spec, const GridSpec& grid, int k, unsigned jobs) {
    return fd_eigs(potential_of(spec), grid, k, analytic_levels(spec.spectrum, k), jobs);
}

double GramReport::max_offdiag_ratio() const {
    double m = 0.0;
    for (std::size_t i = 0; i < matrix.size(); ++i)
        for (std::size_t j = 0; j < matrix.size(); ++j)
            if (i != j) m = std::max(m, std::abs(matrix[i][j]) / std::sqrt(matrix[i][i] * matrix[j][j]));
    return m;
}

GramReport ortho_gram(const ExtensionSpec& spec, const std::vector<int>& degrees, const QuadConfig& quad) {
    if (quad.panels < 1) throw ConstraintError("ortho_gram: requires panels >= 1");
    GramReport r;
    r.degrees = degrees;
    std::vector<Poly> ys;
    for (int d : degrees) {
        const long nu = nu_for_degree(spec, d);
        r.nus.push_back(nu);
        ys.push_back(eop_from_supercharge(spec, nu).coeffs);
    }

    // Truncate where the envelope falls below cutoff * peak.
    auto envelope = [&](double x) {
        double m = 0.0;
        for (const auto& y : ys) m = std::max(m, std::pow(eval_var(y, spec, x), 2));
        return density(spec, x) * m;
    };
    const double step = 0.05;
    double peak = 0.0, last = step;
    for (double x = step; x < 200.0; x += step) {
        const double e = envelope(x);
        peak = std::max(peak, e);
        if (e >= quad.cutoff * peak) last = x;
        else if (x > 2.0 * last + 1.0) break;
    }
    r.upper = last + step;
    r.lower = spec.is_laguerre() ? 0.0 : -r.upper;

    const auto g1 = gram_with(spec, ys, r.lower, r.upper, quad.panels);
    r.matrix = gram_with(spec, ys, r.lower, r.upper, 2 * quad.panels);
    r.panels = 2 * quad.panels;
    double scale = 0.0, diff = 0.0;
    for (std::size_t i = 0; i < ys.size(); ++i) {
        scale = std::max(scale, std::abs(r.matrix[i][i]));
        for (std::size_t j = 0; j < ys.size(); ++j) diff = std::max(diff, std::abs(r.matrix[i][j] - g1[i][j]));
    }
    if (diff > quad.tolerance * scale)
        throw InvariantError("ortho_gram: quadrature did not converge (panel doubling changed entries by " +
                             format_double(diff / scale) + " relative)");
    return r;
}

double wavefunction(const ExtensionSpec& spec, const EopPolynomial& y, double x) {
    const double ratio = eval_var(y.coeffs, spec, x) / eval_var(spec.denominator, spec, x);
    if (radial_like(spec)) {
        const double l = spec.potential.base_l.to_double();
        return std::pow(x, l + 1.0) * std::exp(-0.25 * x * x) * ratio;
    }
    return std::exp(-0.5 * x * x) * ratio;
}

double wavefunction_check(const ExtensionSpec& spec, long nu, const GridSpec& grid) {
    grid.validate();
    const EopPolynomial y = eop_from_supercharge(spec, nu);
    const double e = spec.spectrum.energy(nu).to_double();
    const Potential v = potential_of(spec);
    // eighth-order central second difference
    static constexpr double c[5] = {-205.0 / 72.0, 8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0, -1.0 / 560.0};
    const double d = 1e-2;
    double res = 0.0, norm = 0.0;
    for (int i = 0; i < grid.points; ++i) {
        const double x = grid.node(i);
        if (x - 4 * d <= grid.a || x + 4 * d >= grid.b) continue;
        double d2 = c[0] * wavefunction(spec, y, x);
        for (int k = 1; k <= 4; ++k)
            d2 += c[k] * (wavefunction(spec, y, x + k * d) + wavefunction(spec, y, x - k * d));
        d2 /= d * d;
        const double psi = wavefunction(spec, y, x);
        const double r = -d2 + (v(x) - e) * psi;
        res += r * r;
        norm += psi * psi;
    }
    return std::sqrt(res / norm);
}

std::string potential_csv(const ExtensionSpec& spec, const GridSpec& grid) {
    grid.validate();
    const Potential v = potential_of(spec);
    std::ostringstream os;
    os << "x,V\n";
    for (int i = 0; i < grid.points; ++i) {
        const double x = grid.node(i);
        os << format_double(x) << ',' << format_double(v(x)) << '\n';
    }
    return os.str();
}

nlohmann::json to_json(const GridSpec& g) { return {{"a", g.a}, {"b", g.b}, {"points", g.points}}; }

nlohmann::json to_json(const EigReport& r) {
    return {{"computed", r.computed},   {"coarse", r.coarse},         {"fine", r.fine},
            {"analytic", r.analytic},   {"abs_errors", r.abs_errors}, {"max_error", r.max_error()},
            {"grid", to_json(r.grid)}, {"grid_fine", to_json(r.grid_fine)}};
}

nlohmann::json to_json(const GramReport& r) {
    return {{"degrees", r.degrees},
            {"nu", r.nus},
            {"matrix", r.matrix},
            {"domain", {r.lower, r.upper}},
            {"panels", r.panels},
            {"max_offdiag_ratio", r.max_offdiag_ratio()}};
}

}  // namespace eop
