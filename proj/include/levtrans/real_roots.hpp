#pragma once

// Exact real-root machinery over Q: square-free decomposition, Sturm chains,
// root isolation by bisection, and interval enclosures of polynomials on
// nonnegative intervals.

#include <algorithm>
#include <utility>
#include <vector>

#include "polynomial.hpp"

namespace levtrans {

inline Polynomial squarefree_part(const Polynomial& p) {
    if (p.degree() <= 0) return p;
    return p / gcd(p, p.derivative());
}

/// Yun's square-free factorisation: returns a_1, a_2, ... with p = c * prod a_i^i.
inline std::vector<Polynomial> squarefree_factors(const Polynomial& p) {
    std::vector<Polynomial> out;
    if (p.degree() <= 0) return out;
    const Polynomial dp = p.derivative();
    const Polynomial a0 = gcd(p, dp);
    Polynomial b = p / a0;
    Polynomial c = dp / a0;
    Polynomial d = c - b.derivative();
    while (b.degree() > 0) {
        const Polynomial a = gcd(b, d);
        out.push_back(a);
        b = b / a;
        c = d / a;
        d = c - b.derivative();
    }
    return out;
}

/// Product of the factors of odd multiplicity: its real roots are exactly
/// the points where p changes sign.
inline Polynomial odd_multiplicity_part(const Polynomial& p) {
    Polynomial acc(1);
    const auto factors = squarefree_factors(p);
    for (std::size_t i = 0; i < factors.size(); i += 2) acc *= factors[i];
    return acc;
}

/// Every real root of p has |r| < cauchy_bound(p).
inline Rational cauchy_bound(const Polynomial& p) {
    Rational m = 0;
    if (p.degree() <= 0) return 1;
    for (int k = 0; k < p.degree(); ++k) {
        Rational r = abs(p.coeff(static_cast<std::size_t>(k)) / p.leading());
        if (r > m) m = r;
    }
    return m + 1;
}

class SturmChain {
public:
    /// The chain is built from the square-free part so counts are of distinct roots.
    explicit SturmChain(const Polynomial& p) {
        Polynomial a = squarefree_part(p);
        if (a.is_zero()) return;
        chain_.push_back(normalized(a));
        if (a.degree() == 0) return;
        chain_.push_back(normalized(a.derivative()));
        while (chain_.back().degree() > 0) {
            Polynomial r = chain_[chain_.size() - 2] % chain_.back();
            if (r.is_zero()) break;
            chain_.push_back(normalized(-r));
        }
    }

    int variations_at(const Rational& x) const {
        return count_variations([&](const Polynomial& q) { return q.sign_at(x); });
    }
    int variations_at_infinity() const {
        return count_variations([](const Polynomial& q) { return q.sign_at_infinity(); });
    }
    /// Distinct roots in (a, b].
    int count_in(const Rational& a, const Rational& b) const { return variations_at(a) - variations_at(b); }
    /// Distinct roots in (a, infinity).
    int count_above(const Rational& a) const { return variations_at(a) - variations_at_infinity(); }

    const Polynomial& base() const { return chain_.front(); }
    bool empty() const { return chain_.empty(); }

private:
    static Polynomial normalized(const Polynomial& q) {
        // Positive scaling keeps the signs Sturm's theorem relies on.
        return Rational(1) / abs(q.leading()) * q;
    }
    template <class SignOf>
    int count_variations(SignOf sign_of) const {
        int variations = 0, last = 0;
        for (const auto& q : chain_) {
            const int s = sign_of(q);
            if (s == 0) continue;
            if (last != 0 && s != last) ++variations;
            last = s;
        }
        return variations;
    }

    std::vector<Polynomial> chain_;
};

/// An isolating interval: either an exact root (lo == hi) or an open interval
/// (lo, hi) holding exactly one simple root of the square-free polynomial,
/// with the polynomial nonzero at both endpoints.
struct RootInterval {
    Rational lo;
    Rational hi;
    bool exact() const { return lo == hi; }
};

/// Isolates every distinct real root in (lower, infinity) and refines each
/// interval to width at most `width`.
inline std::vector<RootInterval> isolate_roots_above(const Polynomial& p, const Rational& lower,
                                                     const Rational& width) {
    std::vector<RootInterval> out;
    if (p.degree() <= 0) return out;
    const SturmChain sturm(p);
    const Polynomial& sf = sturm.base();
    if (sturm.count_above(lower) == 0) return out;

    Rational upper = std::max(cauchy_bound(sf), lower + 1);
    while (sf.sign_at(upper) == 0) upper += 1;

    // Work list of (lo, hi) with nonzero sf(hi); lo may be a root only when lo == lower.
    std::vector<std::pair<Rational, Rational>> work{{lower, upper}};
    std::vector<std::pair<Rational, Rational>> single;
    while (!work.empty()) {
        auto [lo, hi] = work.back();
        work.pop_back();
        const int count = sturm.count_in(lo, hi);
        if (count == 0) continue;
        if (count == 1 && sf.sign_at(lo) != 0) {
            single.emplace_back(lo, hi);
            continue;
        }
        Rational mid = (lo + hi) / 2;
        if (sf.sign_at(mid) == 0) {
            out.push_back({mid, mid});
            // Split around the exact root with non-root cut points.
            Rational left = (lo + mid) / 2, right = (mid + hi) / 2;
            while (sf.sign_at(left) == 0 || sturm.count_in(left, mid) != 1) left = (left + mid) / 2;
            while (sf.sign_at(right) == 0 || sturm.count_in(mid, right) != 0) right = (mid + right) / 2;
            work.emplace_back(lo, left);
            work.emplace_back(right, hi);
            continue;
        }
        work.emplace_back(lo, mid);
        work.emplace_back(mid, hi);
    }

    for (auto [lo, hi] : single) {
        const int s_lo = sf.sign_at(lo);
        while (hi - lo > width) {
            const Rational mid = (lo + hi) / 2;
            const int s_mid = sf.sign_at(mid);
            if (s_mid == 0) {
                lo = hi = mid;
                break;
            }
            if (s_mid == s_lo) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        out.push_back({lo, hi});
    }
    std::sort(out.begin(), out.end(), [](const RootInterval& a, const RootInterval& b) { return a.lo < b.lo; });
    return out;
}

/// Enclosure of p([lo, hi]) for 0 <= lo <= hi: splitting p into its positive and
/// negative coefficient parts gives two functions increasing on [0, inf).
inline std::pair<Rational, Rational> enclose_nonnegative(const Polynomial& p, const Rational& lo,
                                                         const Rational& hi) {
    Rational pos_lo = 0, pos_hi = 0, neg_lo = 0, neg_hi = 0;
    Rational pow_lo = 1, pow_hi = 1;
    for (std::size_t k = 0; k < p.coefficients().size(); ++k) {
        const Rational& c = p.coefficients()[k];
        if (c > 0) {
            pos_lo += c * pow_lo;
            pos_hi += c * pow_hi;
        } else if (c < 0) {
            neg_lo -= c * pow_lo;
            neg_hi -= c * pow_hi;
        }
        pow_lo *= lo;
        pow_hi *= hi;
    }
    return {pos_lo - neg_hi, pos_hi - neg_lo};
}

} // namespace levtrans
