#pragma once

// The repeated diagonalising transformation Z_m = (I + P_m) Z_{m+1}.
//
// Iteration m removes V_1m from Z_m' = rho (Lambda_m + R_m) Z_m, expands
// (I + P_m)^-1 as a truncated geometric series, and sorts the resulting terms
// by order of magnitude into the new ladder V_{k,m+1}. Terms of order
// x^-(Ma) or smaller, and the series remainders, are committed to E_{m+1}.

#include <map>
#include <string>
#include <vector>

#include "problem.hpp"

namespace levtrans {

struct PSplit {
    int m = 1;
    SymMatrix Qtilde; // entries involving lambda: upper-left and cross blocks
    SymMatrix Q;      // lower-right block
    /// x^-1 scheme only: the part of the lower-right V_1m beyond the
    /// retained Laurent terms; it is not eliminated and joins the U-set.
    SymMatrix laurent_tail;

    SymMatrix P() const { return Qtilde + Q; }
};

struct Commutators {
    SymMatrix U;
    SymMatrix T;
    SymMatrix Tbar;
    SymMatrix Ttilde;
};

/// Error committed by one iteration, in the coordinates of the system it
/// belongs to: E_j = exact + (I + P_{j-1})^-1 remainder. For j = 1 the
/// remainder is zero and exact is the input E_1.
struct CommittedError {
    int j = 1;
    SymMatrix exact;
    SymMatrix remainder;

    /// The closed form, with the inverse expanded symbolically.
    SymMatrix full(const std::vector<PSplit>& P_history) const {
        if (j == 1 || remainder.is_zero()) return exact;
        const SymMatrix P = P_history.at(static_cast<std::size_t>(j - 2)).P();
        return exact + (SymMatrix::identity(P.rows()) + P).inverse() * remainder;
    }
};

/// How one member of the U-set was expanded.
struct ExpansionRecord {
    std::string name;
    std::optional<int> order; // leading order of U
    int nu = 0;
    std::vector<int> buckets; // bucket index of (-P)^r U for r = 0..nu; -1 when the term vanished
};

struct IterationRecord {
    int m = 1;
    PSplit P;
    Commutators C;
    SymMatrix S_next;                // S_{m+1}, before its diagonal moves into Lambda
    std::vector<RationalFn> Lambda_next;
    std::map<int, int> bucket_orders; // k -> leading order of V_{k,m+1}
    std::vector<ExpansionRecord> expansions;
};

struct IterationState {
    int m = 1;
    std::vector<RationalFn> Lambda;
    std::map<int, SymMatrix> ladder; // j -> V_jm
    CommittedError E;
    std::vector<PSplit> P_history;
    std::vector<IterationRecord> records;
};

struct FinalState {
    std::vector<RationalFn> Lambda;
    std::vector<CommittedError> errors; // E_1 .. E_M
    std::vector<PSplit> P_history;      // P_1 .. P_{M-1}
    std::vector<SymMatrix> S;           // S_1 .. S_{M-1}
    std::vector<IterationRecord> records;
};

namespace detail {

inline SymMatrix block_diagonal(const std::vector<RationalFn>& phi, std::size_t from, std::size_t to) {
    std::vector<RationalFn> d(phi.size());
    for (std::size_t i = from; i < to; ++i) d[i] = phi[i];
    return SymMatrix::diagonal(d);
}

/// Largest integer exponent at or below -Ma.
inline int first_error_exponent(const ProblemSpec& s) {
    return floor_of(-Rational(s.M) * s.a).convert_to<int>();
}

inline SymMatrix rho_inverse_times(const ProblemSpec& s, const SymMatrix& m) {
    return s.rho.function().pow(-1) * m;
}

} // namespace detail

inline IterationState initial_state(const ProblemSpec& s) {
    IterationState st;
    st.m = 1;
    st.Lambda = s.lambda1_diagonal();
    for (const auto& rung : s.ladder) st.ladder[rung.j] = rung.V;
    st.E = {1, s.E1, SymMatrix::zero(s.n)};
    return st;
}

inline SymMatrix V1_of(const IterationState& st, std::size_t n) {
    auto it = st.ladder.find(1);
    return it == st.ladder.end() ? SymMatrix::zero(n) : it->second;
}

/// P_m from V_1m. Entries with lambda go to Qtilde; the lower-right block
/// divides by d_j - d_i, or in the x^-1 scheme by d_j - d_i - s for each
/// Laurent term c x^-s.
inline PSplit compute_P(const IterationState& st, const ProblemSpec& s) {
    const std::size_t n = s.n;
    const SymMatrix V = V1_of(st, n);
    PSplit out{st.m, SymMatrix::zero(n), SymMatrix::zero(n), SymMatrix::zero(n)};
    const RationalFn lam = s.lambda.function();
    const int cut = detail::first_error_exponent(s);
    auto nonzero = [&](const Rational& q, std::size_t i, std::size_t j) {
        if (q == 0)
            throw DivisionByZeroDenominator("zero denominator for P entry " + detail::index_pair(i, j) +
                                            " at iteration " + std::to_string(st.m));
        return q;
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const RationalFn& v = V(i, j);
            if (i == j || v.is_zero()) continue;
            const bool li = s.is_large(i), lj = s.is_large(j);
            if (li && lj) {
                out.Qtilde(i, j) = v / (lam * RationalFn(nonzero(s.d(j) - s.d(i), i, j)));
            } else if (li) {
                out.Qtilde(i, j) = -v / (lam * RationalFn(nonzero(s.d(i), i, j)));
            } else if (lj) {
                out.Qtilde(i, j) = v / (lam * RationalFn(nonzero(s.d(j), i, j)));
            } else if (s.mode == Mode::Standard) {
                out.Q(i, j) = v / RationalFn(nonzero(s.d(j) - s.d(i), i, j));
            } else {
                RationalFn p, kept;
                for (const auto& t : v.laurent_at_infinity(cut + 1)) {
                    const Rational den = nonzero(s.d(j) - s.d(i) + Rational(t.exponent), i, j);
                    p += RationalFn::power(t.exponent, t.coefficient / den);
                    kept += RationalFn::power(t.exponent, t.coefficient);
                }
                out.Q(i, j) = p;
                out.laurent_tail(i, j) = v - kept;
            }
        }
    return out;
}

inline Commutators commutator_terms(const IterationState& st, const PSplit& P, const ProblemSpec& s) {
    const std::size_t n = s.n;
    const SymMatrix V = V1_of(st, n);
    Commutators c{SymMatrix::zero(n), {}, {}, {}};
    const RationalFn lam_inv = s.lambda.function().pow(-1);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (V(i, j).is_zero()) continue;
            if (s.is_large(i) && !s.is_large(j))
                c.U(i, j) = lam_inv * RationalFn(s.d(j) / s.d(i)) * V(i, j);
            else if (!s.is_large(i) && s.is_large(j))
                c.U(i, j) = lam_inv * RationalFn(s.d(i) / s.d(j)) * V(i, j);
        }
    const auto Lambda0 = s.lambda0_diagonal();
    std::vector<RationalFn> phi(n);
    for (std::size_t i = 0; i < n; ++i) phi[i] = st.Lambda[i] - Lambda0[i];
    const SymMatrix big = detail::block_diagonal(phi, 0, s.N);
    const SymMatrix small = detail::block_diagonal(phi, s.N, n);
    c.Tbar = big * P.Qtilde - P.Qtilde * big;
    c.Ttilde = small * P.Qtilde - P.Qtilde * small;
    c.T = small * P.Q - P.Q * small;
    return c;
}

/// Left side minus right side of the elimination identity; zero when P_m
/// removes V_1m exactly. In the x^-1 scheme the Q-part derivative and the
/// Laurent tail are included.
inline SymMatrix elimination_residual(const IterationState& st, const PSplit& P, const Commutators& c,
                                      const ProblemSpec& s) {
    const SymMatrix Lam = SymMatrix::diagonal(st.Lambda);
    const SymMatrix Pm = P.P();
    SymMatrix lhs = V1_of(st, s.n) + Lam * Pm - Pm * Lam;
    SymMatrix rhs = c.U + c.Tbar + c.Ttilde + c.T;
    if (s.mode == Mode::InverseX) {
        lhs -= detail::rho_inverse_times(s, P.Q.derivative());
        rhs += P.laurent_tail;
    }
    return lhs - rhs;
}

/// One pass of the transformation: state at m -> state at m + 1.
inline IterationState iterate(const IterationState& st, const ProblemSpec& s) {
    if (st.m < 1 || st.m > s.M - 1)
        throw PreconditionError("iterate needs 1 <= m <= M - 1, got m = " + std::to_string(st.m));
    const std::size_t n = s.n;
    const int m = st.m;
    const int mu = s.M - m;
    const Rational Ma = Rational(s.M) * s.a;

    IterationRecord rec;
    rec.m = m;
    rec.P = compute_P(st, s);
    rec.C = commutator_terms(st, rec.P, s);
    const SymMatrix P = rec.P.P();
    const SymMatrix minus_P = -P;

    std::vector<std::pair<std::string, SymMatrix>> uset;
    uset.emplace_back("-rho^-1 Qtilde'", -detail::rho_inverse_times(s, rec.P.Qtilde.derivative()));
    if (s.mode == Mode::Standard) uset.emplace_back("-rho^-1 Q'", -detail::rho_inverse_times(s, rec.P.Q.derivative()));
    uset.emplace_back("U", rec.C.U);
    uset.emplace_back("T", rec.C.T);
    uset.emplace_back("Tbar", rec.C.Tbar);
    uset.emplace_back("Ttilde", rec.C.Ttilde);
    for (const auto& [j, V] : st.ladder)
        if (j >= 2) uset.emplace_back("V_" + std::to_string(j), V);
    for (const auto& [j, V] : st.ladder) {
        uset.emplace_back("V_" + std::to_string(j) + " Q", V * rec.P.Q);
        uset.emplace_back("V_" + std::to_string(j) + " Qtilde", V * rec.P.Qtilde);
    }
    if (s.mode == Mode::InverseX) uset.emplace_back("laurent_tail", rec.P.laurent_tail);

    std::map<int, SymMatrix> buckets;
    SymMatrix exact = SymMatrix::zero(n), remainder = SymMatrix::zero(n);
    auto within_error = [&](const SymMatrix& t) {
        auto e = t.leading_order();
        return !e || Rational(*e) <= -Ma;
    };
    for (auto& [name, U] : uset) {
        ExpansionRecord er{name, U.leading_order(), 0, {}};
        if (U.is_zero()) {
            rec.expansions.push_back(std::move(er));
            continue;
        }
        SymMatrix term = U;
        for (int r = 0;; ++r) {
            if (term.is_zero()) {
                er.buckets.push_back(-1);
            } else {
                const int e = *term.leading_order();
                const int k = floor_of(Rational(-e) / s.a).convert_to<int>() - m;
                if (k < 1)
                    throw OrderRegression("term (-P_" + std::to_string(m) + ")^" + std::to_string(r) + " " + name +
                                          " has order x^" + std::to_string(e) + ", not O(x^-" +
                                          to_string(Rational(m + 1) * s.a) + ")");
                er.buckets.push_back(k);
                if (k >= mu) exact += term;
                else {
                    auto [it, inserted] = buckets.try_emplace(k, term);
                    if (!inserted) it->second += term;
                }
            }
            SymMatrix next = minus_P * term;
            if (within_error(next)) {
                er.nu = r;
                remainder += next;
                break;
            }
            term = std::move(next);
        }
        rec.expansions.push_back(std::move(er));
    }

    IterationState out;
    out.m = m + 1;
    out.P_history = st.P_history;
    out.P_history.push_back(rec.P);
    out.E = {m + 1, std::move(exact), std::move(remainder)};
    out.Lambda = st.Lambda;
    rec.S_next = buckets.count(1) ? buckets.at(1) : SymMatrix::zero(n);
    for (auto& [k, V] : buckets) {
        if (k == 1) {
            const auto dg = V.diagonal_entries();
            for (std::size_t i = 0; i < n; ++i) out.Lambda[i] += dg[i];
            V = V.off_diagonal_part();
        }
        if (V.is_zero()) continue;
        rec.bucket_orders[k] = *V.leading_order();
        out.ladder[k] = std::move(V);
    }
    rec.Lambda_next = out.Lambda;
    out.records = st.records;
    out.records.push_back(std::move(rec));
    return out;
}

/// S_1 = V_11 plus the decaying part of the diagonal of Lambda_1.
inline SymMatrix initial_S(const ProblemSpec& s) {
    SymMatrix S = s.rung(1) ? *s.rung(1) : SymMatrix::zero(s.n);
    const auto phi = s.phi1();
    for (std::size_t i = 0; i < s.n; ++i) S(i, i) += phi[i] - RationalFn(phi[i].limit_at_infinity());
    return S;
}

inline FinalState run(const ProblemSpec& s) {
    IterationState st = initial_state(s);
    FinalState out;
    out.errors.push_back(st.E);
    out.S.push_back(initial_S(s));
    while (st.m < s.M) {
        st = iterate(st, s);
        out.errors.push_back(st.E);
        if (st.m < s.M) out.S.push_back(st.records.back().S_next);
    }
    out.Lambda = st.Lambda;
    out.P_history = st.P_history;
    out.records = st.records;
    return out;
}

/// Checks the conjugation identity of one iteration exactly:
///   (I + P) rho (Lambda' + sum V' + exact') + rho remainder' = rho (Lambda + sum V)(I + P) - P'
/// where primes mark the state after the iteration. Returns the difference.
inline SymMatrix iteration_identity_residual(const IterationState& before, const IterationState& after,
                                             const ProblemSpec& s) {
    const std::size_t n = s.n;
    const RationalFn rho = s.rho.function();
    const SymMatrix P = after.P_history.back().P();
    const SymMatrix I = SymMatrix::identity(n);
    SymMatrix old_b = SymMatrix::diagonal(before.Lambda);
    for (const auto& [j, V] : before.ladder) old_b += V;
    SymMatrix new_b = SymMatrix::diagonal(after.Lambda) + after.E.exact;
    for (const auto& [k, V] : after.ladder) new_b += V;
    const SymMatrix lhs = (I + P) * (rho * new_b) + rho * after.E.remainder;
    const SymMatrix rhs = (rho * old_b) * (I + P) - P.derivative();
    return lhs - rhs;
}

/// Carries a matrix from the coordinates of system j to those of system M:
///   (I + P_{M-1})^-1 ... (I + P_j)^-1 E (I + P_j) ... (I + P_{M-1}).
inline SymMatrix carry_to_final(SymMatrix E, int j, const std::vector<PSplit>& P_history) {
    const std::size_t n = E.rows();
    const SymMatrix I = SymMatrix::identity(n);
    for (std::size_t k = static_cast<std::size_t>(j - 1); k < P_history.size(); ++k) {
        const SymMatrix step = I + P_history[k].P();
        E = step.inverse() * E * step;
    }
    return E;
}

/// R_M = sum over j of E_j carried to the final system.
inline SymMatrix final_remainder(const FinalState& f) {
    SymMatrix R = SymMatrix::zero(f.Lambda.size());
    for (const auto& E : f.errors) R += carry_to_final(E.full(f.P_history), E.j, f.P_history);
    return R;
}

/// Order ladder of a state: V_jm = O(x^-(m+j-1)a), dg V_1m = 0, E_m = O(x^-Ma).
/// Returns an empty string when it holds, otherwise a description.
inline std::string ladder_violation(const IterationState& st, const ProblemSpec& s) {
    for (const auto& [j, V] : st.ladder) {
        const Rational bound = -Rational(st.m + j - 1) * s.a;
        for (std::size_t r = 0; r < s.n; ++r)
            for (std::size_t c = 0; c < s.n; ++c)
                if (!order_at_most(V(r, c), bound))
                    return "V_" + std::to_string(j) + "," + std::to_string(st.m) + " entry " + detail::index_pair(r, c) +
                           " = " + V(r, c).str();
        if (j == 1)
            for (std::size_t i = 0; i < s.n; ++i)
                if (!V(i, i).is_zero()) return "dg V_1," + std::to_string(st.m) + " nonzero";
        if (j > s.M - st.m) return "ladder rung j = " + std::to_string(j) + " beyond M - m";
    }
    const Rational Ma = Rational(s.M) * s.a;
    for (const SymMatrix* E : {&st.E.exact, &st.E.remainder}) {
        auto e = E->leading_order();
        if (e && Rational(*e) > -Ma) return "E_" + std::to_string(st.m) + " has order x^" + std::to_string(*e);
    }
    return {};
}

} // namespace levtrans
