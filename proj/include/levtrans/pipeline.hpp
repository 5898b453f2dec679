#pragma once

// Problem -> transformation -> bounds -> asymptotic solution -> continuation.

#include <chrono>
#include <optional>

#include "error_ledger.hpp"
#include "levinson.hpp"
#include "ode.hpp"

namespace levtrans {

struct TransformResult {
    ProblemSpec spec;
    FinalState final;
    ErrorBound bound;
    double seconds = 0;
};

/// Runs the iteration and the error ledger. Raises InvariantViolation or
/// DivisionByZeroDenominator (resonance) on bad input.
inline TransformResult transform(const ProblemSpec& s) {
    const auto t0 = std::chrono::steady_clock::now();
    validate(s);
    if (s.mode == Mode::InverseX) {
        const auto res = validate_resonance(s);
        if (!res.ok()) {
            const auto& h = res.hits.front();
            throw DivisionByZeroDenominator("resonance at m = " + std::to_string(h.m) + ": d_" + std::to_string(h.j) +
                                            " - d_" + std::to_string(h.i) + " = m a");
        }
    }
    TransformResult r{s, run(s), {}, 0};
    r.bound = total_error_bound(make_ledger(r.final, s));
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

struct SolveOptions {
    std::size_t k = 1;
    std::optional<Rational> target;
    IntegrationOptions ode;
    bool keep_samples = false;
};

struct Continuation {
    Rational target;
    Vec y;              // in original coordinates when a back_transform is given
    bool original = true;
    IntegrationStats stats;
    std::vector<DenseSample> samples;
};

struct SolveResult {
    TransformResult transform;
    std::size_t k = 1;
    DichotomyReport dichotomy;
    AsymptoticValue value;   // Z_k(X) in final coordinates
    HpVector Z_first;        // in the coordinates of the input Z-system
    std::optional<HpVector> Y; // T(X) Z_first
    EtaBound eta;
    SymMatrix R_M;           // final remainder plus the cut-off diagonal tails
    std::optional<Continuation> continuation;
};

/// R_M together with the parts of Lambda_M dropped from the exponent.
inline SymMatrix levinson_remainder(const FinalState& f, const ProblemSpec& s) {
    SymMatrix R = final_remainder(f);
    for (std::size_t j = 0; j < s.n; ++j) R(j, j) += exponent_data(j + 1, f.Lambda, s).tail;
    return R;
}

inline Vec to_doubles(const HpVector& v) {
    Vec out;
    for (const auto& c : v) out.push_back(c.convert_to<double>());
    return out;
}

inline SolveResult solve(const ProblemSpec& s, const SolveOptions& opt) {
    if (opt.k < 1 || opt.k > s.n) throw PreconditionError("k must lie in 1.." + std::to_string(s.n));
    SolveResult r;
    r.transform = transform(s);
    r.k = opt.k;
    const FinalState& f = r.transform.final;
    r.dichotomy = check_dichotomy(s, f.Lambda);
    if (!r.dichotomy.pass()) {
        for (const auto& p : r.dichotomy.pairs)
            if (!p.pass())
                throw DichotomyFailure("pair (" + std::to_string(p.j) + "," + std::to_string(p.k) + "): F = " +
                                       p.F.str() + (p.constant_sign ? " is integrable at infinity" : " changes sign on [X, inf)"));
    }
    r.R_M = levinson_remainder(f, s);
    r.eta = eta_bound(r.R_M, s, s.X);
    r.value = asymptotic_value(opt.k, f.Lambda, s, s.X);
    r.Z_first = to_first_system(r.value.Z, f.P_history, s.X);
    if (s.back_transform) r.Y = back_transform(r.value.Z, f.P_history, s, s.X);

    if (opt.target) {
        if (*opt.target < s.X) {
            const auto dom = dominated_by(s, f.Lambda, opt.k);
            if (!dom.empty()) {
                std::string others;
                for (auto j : dom) others += (others.empty() ? "" : ", ") + std::to_string(j);
                throw ContinuationRefused("solution " + std::to_string(opt.k) +
                                          " grows exponentially relative to solution(s) " + others +
                                          "; continuing it toward smaller x is ill-conditioned");
            }
        }
        Continuation c;
        c.target = *opt.target;
        c.original = s.back_transform.has_value();
        const LinearSystem sys{c.original ? original_system_matrix(s) : z_system_matrix(s)};
        const auto res = integrate(sys, to_doubles(c.original ? *r.Y : r.Z_first), s.X, *opt.target, opt.ode,
                                   opt.keep_samples);
        c.y = res.y;
        c.stats = res.stats;
        c.samples = res.samples;
        r.continuation = std::move(c);
    }
    return r;
}

} // namespace levtrans
