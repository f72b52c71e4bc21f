#pragma once

#include "eop/extensions.hpp"

#include <json.hpp>

#include <functional>
#include <string>
#include <vector>

namespace eop {

/// Dirichlet box [a, b] with `points` interior nodes x_i = a + i h, h = (b - a) / (points + 1).
/// A half-line grid uses a = 0, so the first node sits one spacing from the origin.
struct GridSpec {
    double a = -10.0;
    double b = 10.0;
    int points = 1000;

    void validate() const;
    double spacing() const { return (b - a) / (points + 1); }
    double node(int i) const { return a + (i + 1) * spacing(); }
    /// Same box, spacing halved.
    GridSpec refined() const { return {a, b, 2 * points + 1}; }
};

/// Default box for a spec: symmetric for Hermite-type potentials, (0, b] for radial ones.
GridSpec default_grid(const ExtensionSpec& spec, int points = 3000);

struct EigReport {
    std::vector<double> computed;  // Richardson-extrapolated, ascending
    std::vector<double> coarse;    // raw eigenvalues on the grid h
    std::vector<double> fine;      // raw eigenvalues on the grid h / 2
    std::vector<double> analytic;  // empty when no reference is given
    std::vector<double> abs_errors;
    GridSpec grid;
    GridSpec grid_fine;

    double max_error() const;
};

using Potential = std::function<double(double)>;

Potential potential_of(const ExtensionSpec& spec);

/// Lowest k eigenvalues of the symmetric tridiagonal matrix of -d^2/dx^2 + V on the grid,
/// by bisection on its Sturm count.
std::vector<double> tridiagonal_lowest(const Potential& v, const GridSpec& grid, int k);

/// Throws ConstraintError for a non-finite potential sample or when k is not resolvable on the grid.
EigReport fd_eigs(const Potential& v, const GridSpec& grid, int k, const std::vector<double>& analytic = {},
                  unsigned jobs = 1);
EigReport fd_eigs(const ExtensionSpec& spec, const GridSpec& grid, int k, unsigned jobs = 1);

struct QuadConfig {
    int panels = 16;
    double tolerance = 1e-12;  // relative to the largest diagonal entry
    double cutoff = 1e-30;     // integrand envelope below this fraction of its peak is dropped
};

struct GramReport {
    std::vector<int> degrees;
    std::vector<long> nus;
    std::vector<std::vector<double>> matrix;
    double lower = 0.0;
    double upper = 0.0;
    int panels = 0;

    /// max |G_ij| / sqrt(G_ii G_jj) over i != j.
    double max_offdiag_ratio() const;
};

/// Gram matrix of the EOP with the given degrees under the family weight. Laguerre
/// integrals are carried out in x with z = x^2 / 2. Throws InvariantError when two
/// panel counts disagree beyond the tolerance, ConstraintError for an absent degree.
GramReport ortho_gram(const ExtensionSpec& spec, const std::vector<int>& degrees, const QuadConfig& quad = {});

/// psi_nu = prefactor(x) y(x) / den(x) in closed form.
double wavefunction(const ExtensionSpec& spec, const EopPolynomial& y, double x);

/// Sampled ||(-d^2 + V - E) psi|| / ||psi|| using an eighth-order second difference.
double wavefunction_check(const ExtensionSpec& spec, long nu, const GridSpec& grid);

/// Header row "x,V" then one row per node.
std::string potential_csv(const ExtensionSpec& spec, const GridSpec& grid);

nlohmann::json to_json(const GridSpec& g);
nlohmann::json to_json(const EigReport& r);
nlohmann::json to_json(const GramReport& r);

}  // namespace eop
