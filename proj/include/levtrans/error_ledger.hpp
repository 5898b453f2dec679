#pragma once

// Bounds on the error committed by the transformation.
//
// Norms are max-entry norms; for n x n matrices ||AB|| <= n ||A|| ||B||, and
// the factors of n below come from that inequality.

#include <vector>

#include "sup_bound.hpp"
#include "transform.hpp"

namespace levtrans {

struct ErrorLedger {
    std::vector<CommittedError> errors; // E_1 .. E_M, each in its own coordinates
    std::vector<PSplit> P_history;      // P_1 .. P_{M-1}
    Rational X;
    std::size_t n = 0;
};

inline ErrorLedger make_ledger(const FinalState& f, const ProblemSpec& s) {
    return {f.errors, f.P_history, s.X, s.n};
}

struct LedgerTerm {
    int j = 1;
    double E_norm = 0;    // bound on sup ||E_j||
    double P_norm = 0;    // sup ||(I+P_j)...(I+P_{M-1}) - I||
    double A_factor = 0;  // 1 + n xi, xi = ||P|| / (1 - n ||P||)
    double term = 0;      // E_norm * A_factor * (1 + n P_norm)
    double remainder_only = 0; // same product counting only E_1 and series remainders
};

struct ErrorBound {
    double total = 0;
    double remainder_only = 0;
    std::vector<LedgerTerm> terms;
};

namespace detail {

/// xi with ||(I+P)^-1 - I|| <= xi; throws when the Neumann series does not converge.
inline Rational inverse_excess(const Rational& p_norm, std::size_t n, const std::string& what) {
    const Rational np = Rational(static_cast<long>(n)) * p_norm;
    if (np >= 1)
        throw ContractionFailure("n*||" + what + "|| = " + to_string(np) + " >= 1 on [X, inf); increase X");
    return p_norm / (1 - np);
}

} // namespace detail

/// Sup over [X, inf) of the total committed error carried to the final system,
///   sum_j ||(I+P_{M-1})^-1..(I+P_j)^-1 E_j (I+P_j)..(I+P_{M-1})||,
/// bounded term by term. For j >= 2,
///   ||E_j|| <= sup||exact + rem|| + n xi_{j-1} sup||rem||
/// because (I+P_{j-1})^-1 = I + X with ||X|| <= xi_{j-1}.
inline ErrorBound total_error_bound(const ErrorLedger& L) {
    ErrorBound out;
    const std::size_t n = L.n;
    const Rational nn(static_cast<long>(n));
    const SymMatrix I = SymMatrix::identity(n);
    Rational total = 0, partial = 0;
    for (const auto& E : L.errors) {
        LedgerTerm t;
        t.j = E.j;
        Rational e_norm, e_rem_only;
        if (E.j == 1 || E.remainder.is_zero()) {
            e_norm = sup_norm_exact(E.exact, L.X);
            e_rem_only = E.j == 1 ? e_norm : Rational(0);
        } else {
            const SymMatrix& P = L.P_history.at(static_cast<std::size_t>(E.j - 2)).P();
            const Rational xi = detail::inverse_excess(sup_norm_exact(P, L.X), n, "P_" + std::to_string(E.j - 1));
            const Rational rem = sup_norm_exact(E.remainder, L.X);
            e_norm = sup_norm_exact(E.exact + E.remainder, L.X) + nn * xi * rem;
            e_rem_only = rem * (1 + nn * xi);
        }
        SymMatrix tail = I;
        for (std::size_t k = static_cast<std::size_t>(E.j - 1); k < L.P_history.size(); ++k)
            tail = tail * (I + L.P_history[k].P());
        const Rational p_norm = sup_norm_exact(tail - I, L.X);
        const Rational xi = detail::inverse_excess(p_norm, n, "P_" + std::to_string(E.j) + "...");
        const Rational a_factor = 1 + nn * xi;
        const Rational conj = a_factor * (1 + nn * p_norm);
        total += e_norm * conj;
        partial += e_rem_only * conj;
        t.E_norm = round_up(e_norm);
        t.P_norm = round_up(p_norm);
        t.A_factor = round_up(a_factor);
        t.term = round_up(e_norm * conj);
        t.remainder_only = round_up(e_rem_only * conj);
        out.terms.push_back(t);
    }
    out.total = round_up(total);
    out.remainder_only = round_up(partial);
    return out;
}

struct EtaBound {
    double integral = 0; // I >= int_X^inf |rho| ||R_M|| dt
    double eta = 0;      // I / (1 - n I)
    double C = 0;        // sup t^q ||R_M(t)||
    int q = 0;           // decay exponent used, ceil(M a)
};

/// Closed-form bound for the Levinson bracket: ||R_M(t)|| <= C t^-q on [X, inf)
/// with q = ceil(Ma), so the integral of |c| t^p C t^-q is elementary.
inline EtaBound eta_bound(const SymMatrix& R_M, const ProblemSpec& s, const Rational& X) {
    EtaBound out;
    out.q = ceil_of(Rational(s.M) * s.a).convert_to<int>();
    const int p = s.rho.integer_exponent();
    if (out.q <= p + 1)
        throw DivergentIntegral("int_X^inf |rho| ||R_M|| diverges: x^" + std::to_string(p) + " * x^-" +
                                std::to_string(out.q) + " is not integrable");
    if (R_M.is_zero()) return out;
    const Rational C = sup_norm_exact(RationalFn::power(out.q) * R_M, X);
    const int k = 1 + p - out.q; // exponent of X in the integral, negative
    const Rational integral = abs(s.rho.coefficient) * C * int_pow(X, k) / Rational(out.q - p - 1);
    const Rational nI = Rational(static_cast<long>(s.n)) * integral;
    if (nI >= 1) throw ContractionFailure("n * int |rho| ||R_M|| = " + to_string(nI) + " >= 1; increase X");
    out.C = round_up(C);
    out.integral = round_up(integral);
    out.eta = round_up(integral / (1 - nI));
    return out;
}

} // namespace levtrans
