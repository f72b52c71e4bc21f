#include "eop/sturm.hpp"

#include <stdexcept>

namespace eop {

namespace {

int sign_at(const Poly& p, const std::optional<Rational>& at, bool upper) {
    if (at) return p(*at).sign();
    // sign at +inf is sign(lead); at -inf it flips with odd degree
    const int s = p.leading().sign();
    return (!upper && p.degree() % 2 == 1) ? -s : s;
}

int variations(const std::vector<Poly>& seq, const std::optional<Rational>& at, bool upper) {
    int count = 0;
    int prev = 0;
    for (const auto& p : seq) {
        const int s = sign_at(p, at, upper);
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++count;
        prev = s;
    }
    return count;
}

// Remove the linear factor (x - r) from p while r remains a root.
Poly deflate(Poly p, const Rational& r) {
    const Poly lin{-r, Rational(1)};
    while (p.degree() > 0 && p(r).is_zero()) p = exact_div(p, lin);
    return p;
}

Poly content_free(const Poly& p) { return p * p.content().abs().inverse(); }

}  // namespace

std::vector<Poly> sturm_sequence(const Poly& p) {
    std::vector<Poly> seq;
    if (p.is_zero()) return seq;
    seq.push_back(content_free(p));
    Poly d = p.derivative();
    if (d.is_zero()) return seq;
    seq.push_back(content_free(d));
    while (seq.back().degree() > 0) {
        Poly r = divmod(seq[seq.size() - 2], seq.back()).second;
        if (r.is_zero()) break;
        seq.push_back(content_free(-r));
    }
    return seq;
}

int sturm_count(const Poly& p, const Interval& interval) {
    if (p.is_zero()) throw std::domain_error("indeterminate root count");
    if (p.degree() == 0) return 0;
    if (interval.lo && interval.hi && *interval.lo >= *interval.hi) return 0;
    // Square-free part, with endpoint roots divided out so both ends are regular.
    Poly q = exact_div(p, gcd(p, p.derivative()));
    if (interval.lo) q = deflate(q, *interval.lo);
    if (interval.hi) q = deflate(q, *interval.hi);
    if (q.degree() <= 0) return 0;
    const auto seq = sturm_sequence(q);
    return variations(seq, interval.lo, false) - variations(seq, interval.hi, true);
}

}  // namespace eop
