#pragma once

#include "eop/poly.hpp"

#include <optional>
#include <vector>

namespace eop {

/// Open interval (lo, hi); an absent endpoint stands for -inf / +inf.
struct Interval {
    std::optional<Rational> lo;
    std::optional<Rational> hi;

    static Interval real_line() { return {}; }
    static Interval positive_half_line() { return {Rational(0), std::nullopt}; }
};

/// Signed remainder sequence p, p', -rem(...), each term scaled to a primitive
/// integer polynomial (positive scaling keeps the sign pattern intact).
std::vector<Poly> sturm_sequence(const Poly& p);

/// Number of distinct real roots of p inside the open interval.
/// Throws std::domain_error("indeterminate root count") for p = 0.
int sturm_count(const Poly& p, const Interval& interval);

}  // namespace eop
