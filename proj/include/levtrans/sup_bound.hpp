#pragma once

#include <cmath>
#include <limits>

#include "real_roots.hpp"
#include "rational_fn.hpp"
#include "sym_matrix.hpp"

namespace levtrans {

/// Smallest double that is >= q.
inline double round_up(const Rational& q) {
    double d = q.convert_to<double>();
    if (std::isinf(d)) return d;
    if (Rational(d) < q) d = std::nextafter(d, std::numeric_limits<double>::infinity());
    return d;
}

/// Exact rational B with |f(x)| <= B for every x >= X.
///
/// On [X, inf) the function is monotone between consecutive critical points
/// (roots of N'D - ND'), so the supremum is attained at X, at a critical point,
/// or in the limit x -> inf. Critical points are isolated exactly with Sturm
/// chains and |f| is enclosed on a narrow interval around each of them.
inline Rational sup_bound_exact(const RationalFn& f, const Rational& X) {
    if (X <= 0) throw PreconditionError("sup_bound needs X > 0");
    if (f.is_zero()) return 0;
    if (*f.leading_order() > 0) throw UnboundedAtInfinity("function grows without bound as x -> infinity: " + f.str());

    const Polynomial& num = f.numerator();
    const Polynomial& den = f.denominator();
    if (den.degree() > 0) {
        if (den.sign_at(X) == 0 || SturmChain(den).count_above(X) > 0)
            throw PoleInDomain("denominator of " + f.str() + " vanishes in [" + to_string(X) + ", inf)");
    }

    Rational best = abs(f(X));
    const Rational at_infinity = abs(f.limit_at_infinity());
    if (at_infinity > best) best = at_infinity;

    const Polynomial critical = num.derivative() * den - num * den.derivative();
    if (critical.degree() <= 0) return best;

    const Rational width = (X + 1) / Rational(Integer(1) << 50);
    for (auto root : isolate_roots_above(critical, X, width)) {
        if (root.exact()) {
            const Rational v = abs(f(root.lo));
            if (v > best) best = v;
            continue;
        }
        // Narrow until the denominator's enclosure stays away from zero.
        for (;;) {
            auto [n_lo, n_hi] = enclose_nonnegative(num, root.lo, root.hi);
            auto [d_lo, d_hi] = enclose_nonnegative(den, root.lo, root.hi);
            if (d_lo > 0 || d_hi < 0) {
                const Rational n_max = std::max(abs(n_lo), abs(n_hi));
                const Rational d_min = std::min(abs(d_lo), abs(d_hi));
                const Rational v = n_max / d_min;
                if (v > best) best = v;
                break;
            }
            const Rational mid = (root.lo + root.hi) / 2;
            const Polynomial sf = squarefree_part(critical);
            if (sf.sign_at(mid) == 0) {
                const Rational v = abs(f(mid));
                if (v > best) best = v;
                break;
            }
            if (sf.sign_at(mid) == sf.sign_at(root.lo)) root.lo = mid;
            else root.hi = mid;
        }
    }
    return best;
}

/// sup_{x >= X} |f(x)| bounded from above, rounded up to a double.
inline double sup_bound(const RationalFn& f, const Rational& X) { return round_up(sup_bound_exact(f, X)); }

/// Max-entry norm bound over [X, inf): max_ij sup |m_ij|.
inline Rational sup_norm_exact(const SymMatrix& m, const Rational& X) {
    Rational best = 0;
    for (const auto& f : m.entries()) {
        const Rational b = sup_bound_exact(f, X);
        if (b > best) best = b;
    }
    return best;
}

inline double sup_norm(const SymMatrix& m, const Rational& X) { return round_up(sup_norm_exact(m, X)); }

} // namespace levtrans
