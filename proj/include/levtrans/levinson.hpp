#pragma once

// Levinson's theorem applied to the final system Z' = rho (Lambda_M + R_M) Z:
// solutions Z_k = {e_k + eta_k(x)} exp(int rho Lambda_kk), subject to the
// dichotomy conditions on every pair of diagonal entries.

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "error_ledger.hpp"
#include "real_roots.hpp"

namespace levtrans {

// ---------------------------------------------------------------------------
// Dichotomy

struct PairCheck {
    std::size_t j = 0; // 1-based
    std::size_t k = 0;
    RationalFn F;              // rho (Lambda_jj - Lambda_kk)
    bool constant_sign = false; // no sign change on [X, inf)
    bool divergent = false;     // |int_X^inf F| = inf
    int sign_at_infinity = 0;
    bool pass() const { return constant_sign && divergent; }
};

struct DichotomyReport {
    std::vector<PairCheck> pairs;
    bool pass() const {
        for (const auto& p : pairs)
            if (!p.pass()) return false;
        return true;
    }
};

inline PairCheck check_pair(const RationalFn& F, const Rational& X, std::size_t j, std::size_t k) {
    PairCheck c{j, k, F, true, false, 0};
    if (F.is_zero()) return c; // constant sign, but the integral is zero
    // Sign changes happen only at odd-multiplicity roots of num * den.
    const Polynomial changes = odd_multiplicity_part(F.numerator() * F.denominator());
    if (changes.degree() > 0) c.constant_sign = SturmChain(changes).count_above(X) == 0;
    c.sign_at_infinity = sign(F.leading_coefficient());
    // Constant sign and F ~ c x^e: the integral diverges iff e >= -1.
    c.divergent = *F.leading_order() >= -1;
    return c;
}

/// Checks every ordered pair j != k of the final diagonal. The three forms of
/// F (large-large, small-small, cross) all equal rho (Lambda_jj - Lambda_kk).
inline DichotomyReport check_dichotomy(const ProblemSpec& s, const std::vector<RationalFn>& Lambda_M) {
    DichotomyReport r;
    const RationalFn rho = s.rho.function();
    for (std::size_t j = 0; j < s.n; ++j)
        for (std::size_t k = 0; k < s.n; ++k)
            if (j != k) r.pairs.push_back(check_pair(rho * (Lambda_M[j] - Lambda_M[k]), s.X, j + 1, k + 1));
    return r;
}

/// Solution k (1-based) dominates solution j exponentially when
/// rho (Lambda_kk - Lambda_jj) grows faster than 1/x with a positive sign;
/// continuing such a solution toward smaller x amplifies the others.
inline std::vector<std::size_t> dominated_by(const ProblemSpec& s, const std::vector<RationalFn>& Lambda_M,
                                             std::size_t k) {
    std::vector<std::size_t> out;
    const RationalFn rho = s.rho.function();
    for (std::size_t j = 0; j < s.n; ++j) {
        if (j + 1 == k) continue;
        const RationalFn F = rho * (Lambda_M[k - 1] - Lambda_M[j]);
        if (!F.is_zero() && *F.leading_order() > -1 && F.leading_coefficient() > 0) out.push_back(j + 1);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Exponent

/// The integrand rho(t) Lambda_kk(t) as a finite Laurent sum, and its
/// antiderivative without constant: c t^e -> c t^(e+1)/(e+1), c t^-1 -> c ln t.
struct ExponentData {
    std::size_t k = 0; // 1-based
    std::vector<LaurentTerm> laurent_terms; // integrand terms, highest exponent first
    Rational log_coefficient = 0;           // coefficient of t^-1
    RationalFn tail;                        // Lambda_kk part of order <= x^-Ma, left out

    /// Exact antiderivative (terms other than the logarithm).
    RationalFn antiderivative() const {
        RationalFn out;
        for (const auto& t : laurent_terms)
            if (t.exponent != -1) out += RationalFn::power(t.exponent + 1, t.coefficient / Rational(t.exponent + 1));
        return out;
    }
    /// Integrand assembled back into a rational function.
    RationalFn integrand() const { return RationalFn::from_laurent(laurent_terms); }

    /// exp(antiderivative(x)) * x^log_coefficient.
    HpFloat evaluate(const HpFloat& x) const {
        using boost::multiprecision::exp;
        using boost::multiprecision::log;
        HpFloat e = antiderivative().evaluate_hp(x);
        if (log_coefficient != 0) e += to_hp(log_coefficient) * log(x);
        return exp(e);
    }
};

inline ExponentData exponent_data(std::size_t k, const std::vector<RationalFn>& Lambda_M, const ProblemSpec& s) {
    if (k < 1 || k > s.n) throw PreconditionError("solution index k must lie in 1..n");
    ExponentData d;
    d.k = k;
    const RationalFn& lam = Lambda_M[k - 1];
    // Keep Lambda_kk terms above x^-Ma; the rest is charged to R_M.
    const int cut = detail::first_error_exponent(s);
    const RationalFn kept = RationalFn::from_laurent(lam.laurent_at_infinity(cut + 1));
    d.tail = lam - kept;
    const RationalFn g = s.rho.function() * kept;
    if (!g.is_zero()) {
        if (!g.is_laurent_polynomial()) throw PreconditionError("exponent integrand is not a Laurent polynomial");
        const int lowest = static_cast<int>(g.numerator().lowest_power()) - g.denominator().degree();
        d.laurent_terms = g.laurent_at_infinity(lowest);
    }
    for (const auto& t : d.laurent_terms)
        if (t.exponent == -1) d.log_coefficient = t.coefficient;
    return d;
}

// ---------------------------------------------------------------------------
// Values at a point

using HpVector = std::vector<HpFloat>;

inline HpVector hp_times(const SymMatrix& m, const HpFloat& x, const HpVector& v) {
    HpVector out(m.rows(), HpFloat(0));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (!m(i, j).is_zero()) out[i] += m(i, j).evaluate_hp(x) * v[j];
    return out;
}

struct AsymptoticValue {
    HpVector Z;
    HpFloat C; // exp of the antiderivative at X: converts to exp(int_X^x ...)
    ExponentData exponent;
};

/// C exp(int_X^x rho Lambda_kk) e_k with C chosen so that the leading monomial
/// of the solution has unit coefficient; equivalently the antiderivative is
/// taken without a constant.
inline AsymptoticValue asymptotic_value(std::size_t k, const std::vector<RationalFn>& Lambda_M, const ProblemSpec& s,
                                        const Rational& x_eval) {
    AsymptoticValue out;
    out.exponent = exponent_data(k, Lambda_M, s);
    out.Z.assign(s.n, HpFloat(0));
    out.Z[k - 1] = out.exponent.evaluate(to_hp(x_eval));
    out.C = out.exponent.evaluate(to_hp(s.X));
    return out;
}

/// prod_m (I + P_m(x)) Z: the solution in the coordinates of the input Z-system.
inline HpVector to_first_system(const HpVector& Z, const std::vector<PSplit>& P_history, const Rational& x_eval) {
    const HpFloat x = to_hp(x_eval);
    HpVector v = Z;
    for (auto it = P_history.rbegin(); it != P_history.rend(); ++it) {
        const HpVector Pv = hp_times(it->P(), x, v);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] += Pv[i];
    }
    return v;
}

/// T(x) prod_m (I + P_m(x)) Z.
inline HpVector back_transform(const HpVector& Z, const std::vector<PSplit>& P_history, const ProblemSpec& s,
                               const Rational& x_eval) {
    if (!s.back_transform) throw MissingBackTransform("problem has no back_transform; only Z-coordinates are available");
    return hp_times(*s.back_transform, to_hp(x_eval), to_first_system(Z, P_history, x_eval));
}

} // namespace levtrans
