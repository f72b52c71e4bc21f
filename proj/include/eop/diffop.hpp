#pragma once

#include "eop/families.hpp"
#include "eop/ratfunc.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace eop {

/// Linear differential operator sum_k r_k(x) d^k/dx^k with rational-function
/// coefficients, stored in normal form (index = derivative order, no trailing zeros).
class DiffOp {
public:
    DiffOp() = default;
    explicit DiffOp(std::vector<RatFunc> coeffs);

    static DiffOp identity() { return multiply(RatFunc(1)); }
    static DiffOp d();
    static DiffOp multiply(const RatFunc& r);

    int order() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    std::span<const RatFunc> coeffs() const { return c_; }
    const RatFunc& coeff(std::size_t k) const;

    /// Formal adjoint: (r d^k)^dagger = (-d)^k o r.
    DiffOp adjoint() const;
    /// The operator applied to a rational function.
    RatFunc apply(const RatFunc& f) const;
    /// G^{-1} L G for a gauge factor G with G'/G = rho.
    DiffOp gauge(const RatFunc& rho) const;

    std::string str() const;

    friend DiffOp operator+(const DiffOp& a, const DiffOp& b);
    friend DiffOp operator-(const DiffOp& a, const DiffOp& b);
    friend DiffOp operator-(const DiffOp& a);
    friend DiffOp operator*(const DiffOp& a, const Rational& s);
    friend DiffOp operator*(const Rational& s, const DiffOp& a) { return a * s; }
    friend bool operator==(const DiffOp& a, const DiffOp& b) = default;

private:
    void trim();
    std::vector<RatFunc> c_;
};

/// Operator product a o b via the Leibniz rule.
DiffOp compose(const DiffOp& a, const DiffOp& b);
inline DiffOp compose(const DiffOp& a, const DiffOp& b, const DiffOp& c) { return compose(a, compose(b, c)); }
DiffOp commutator(const DiffOp& a, const DiffOp& b);

/// -d^2/dx^2 + V.
DiffOp schrodinger(const RatFunc& potential);

/// c * prod_i (h - roots[i]); roots kept sorted, repeated for multiplicity.
struct FactoredPoly {
    Rational constant{1};
    std::vector<Rational> roots;

    FactoredPoly() = default;
    FactoredPoly(Rational c, std::vector<Rational> r);

    std::size_t degree() const { return roots.size(); }
    Poly expand() const;
    Rational operator()(const Rational& h) const;
    /// p(h - s): every root moves to root + s.
    FactoredPoly shifted(const Rational& s) const;
    std::string str(const std::string& var = "H") const;

    friend FactoredPoly operator*(const FactoredPoly& a, const FactoredPoly& b);
    friend bool operator==(const FactoredPoly&, const FactoredPoly&) = default;
};

/// p(H) as an operator, by Horner's scheme.
DiffOp evaluate(const Poly& p, const DiffOp& h);

/// A and A^dagger with A^dagger A = f(H+) and A A^dagger = f(H-).
struct Supercharge {
    DiffOp a;
    DiffOp a_dagger;
    FactoredPoly f;
    RatFunc q0;
    std::optional<RatFunc> q1;        // second order only
    std::optional<Rational> c;        // E1 - E2, second order only
    std::optional<Poly> wronskian_g;  // g_mu(z), second order only
    int order() const { return a.order(); }
};

Supercharge first_order_supercharge(const SeedSolution& seed);

/// Reducible second-order supercharge from a type I and a type II radial seed
/// sharing alpha. Throws ConstraintError when the pairing is unsupported, when
/// m2 >= alpha, or when g_mu has a zero on z > 0 ("singular intermediate").
Supercharge second_order_supercharge(const SeedSolution& seed1, const SeedSolution& seed2);

/// g_mu(z) = z W(L1, L2) - (z + alpha) L1 L2 for L1 = L_{m1}^(alpha)(-z), L2 = L_{m2}^(-alpha)(z).
Poly wronskian_polynomial(const Rational& alpha, unsigned m1, unsigned m2);

bool check_intertwining(const DiffOp& a, const DiffOp& h_plus, const DiffOp& h_minus);
bool check_factorization(const DiffOp& a, const DiffOp& a_dagger, const DiffOp& h, const Poly& f);

/// Lowering operator `op` with [H, op] = -lambda op and op_dagger op = P(H).
struct LadderSpec {
    DiffOp op;
    DiffOp op_dagger;
    Rational lambda;
    FactoredPoly p;
    int order() const { return op.order(); }
};

/// a = d + x, a^dagger = -d + x for H = -d^2 + x^2.
LadderSpec oscillator_ladder();
/// Second-order ladder of -d^2 + x^2/4 + l(l+1)/x^2.
LadderSpec radial_ladder(const Rational& l);

/// b = A a A^dagger, b^dagger = A a^dagger A^dagger with P-(H) = P+(H) f(H - lambda) f(H).
/// Throws InvariantError("PHA violation") if [H-, b] != -lambda b.
LadderSpec compose_ladder(const DiffOp& a_op, const LadderSpec& base, const DiffOp& a_dagger,
                          const FactoredPoly& f, const DiffOp& h_minus);

/// P-(H) from the factored data alone (no operator algebra).
FactoredPoly partner_ladder_polynomial(const FactoredPoly& p_plus, const FactoredPoly& f, const Rational& lambda);

/// [H, op] + lambda op == 0.
bool check_lowering(const LadderSpec& ladder, const DiffOp& h);
/// op_dagger op == P(H).
bool check_ladder_product(const LadderSpec& ladder, const DiffOp& h);

}  // namespace eop
