#pragma once

// Dormand-Prince 5(4) with adaptive steps for Y' = A(x) Y, A from exact
// rational functions. Integration runs in either direction.

#include <algorithm>
#include <initializer_list>
#include <cmath>
#include <limits>
#include <ostream>
#include <vector>

#include "real_roots.hpp"
#include "problem.hpp"

namespace levtrans {

using Vec = std::vector<double>;

struct LinearSystem {
    SymMatrix A;

    Vec apply(double x, const Vec& y) const {
        Vec out(A.rows(), 0.0);
        for (std::size_t i = 0; i < A.rows(); ++i)
            for (std::size_t j = 0; j < A.cols(); ++j)
                if (!A(i, j).is_zero()) out[i] += A(i, j).evaluate_double(x) * y[j];
        return out;
    }

    /// Throws PoleInInterval when a denominator of A vanishes on [lo, hi].
    void check_regular(const Rational& lo, const Rational& hi) const {
        for (std::size_t i = 0; i < A.rows(); ++i)
            for (std::size_t j = 0; j < A.cols(); ++j) {
                const Polynomial& den = A(i, j).denominator();
                if (den.degree() <= 0) continue;
                if (den.sign_at(lo) == 0 || SturmChain(den).count_in(lo, hi) > 0)
                    throw PoleInInterval("A" + detail::index_pair(i, j) + " = " + A(i, j).str() +
                                         " has a pole in [" + to_string(lo) + ", " + to_string(hi) + "]");
            }
    }
};

struct IntegrationOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    double initial_step = 0; // 0: automatic
    long max_steps = 5'000'000;
};

struct IntegrationStats {
    long accepted = 0;
    long rejected = 0;
    long evaluations = 0;
    static constexpr int method_order = 5;
    static constexpr const char* method = "Dormand-Prince 5(4), adaptive";
};

struct DenseSample {
    double x;
    Vec y;
};

struct IntegrationResult {
    Vec y;
    IntegrationStats stats;
    std::vector<DenseSample> samples; // accepted steps, when requested
};

namespace dp45 {

// Butcher tableau of Dormand and Prince (1980).
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                        a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// b - b*: fifth- minus fourth-order weights.
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                        e6 = 22.0 / 525, e7 = -1.0 / 40;

struct Step {
    Vec y;
    Vec err;
    Vec k_last; // f(x + h, y_new), reused as k1 of the next step
};

inline Vec axpy(const Vec& y, double h, std::initializer_list<std::pair<double, const Vec*>> terms) {
    Vec out = y;
    for (std::size_t i = 0; i < y.size(); ++i) {
        double s = 0;
        for (const auto& [a, k] : terms) s += a * (*k)[i];
        out[i] += h * s;
    }
    return out;
}

inline Step step(const LinearSystem& sys, double x, const Vec& y, const Vec& k1, double h) {
    const Vec k2 = sys.apply(x + c2 * h, axpy(y, h, {{a21, &k1}}));
    const Vec k3 = sys.apply(x + c3 * h, axpy(y, h, {{a31, &k1}, {a32, &k2}}));
    const Vec k4 = sys.apply(x + c4 * h, axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    const Vec k5 = sys.apply(x + c5 * h, axpy(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    const Vec k6 = sys.apply(x + h, axpy(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
    Step s;
    s.y = axpy(y, h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    s.k_last = sys.apply(x + h, s.y);
    s.err = axpy(Vec(y.size(), 0.0), h, {{e1, &k1}, {e3, &k3}, {e4, &k4}, {e5, &k5}, {e6, &k6}, {e7, &s.k_last}});
    return s;
}

inline double error_norm(const Vec& err, const Vec& y0, const Vec& y1, double rtol, double atol) {
    double acc = 0;
    for (std::size_t i = 0; i < err.size(); ++i) {
        const double sc = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        acc += (err[i] / sc) * (err[i] / sc);
    }
    return std::sqrt(acc / static_cast<double>(err.size()));
}

} // namespace dp45

/// y(x_to) for y' = A y, y(x_from) = y0.
inline IntegrationResult integrate(const LinearSystem& sys, const Vec& y0, const Rational& x_from,
                                   const Rational& x_to, const IntegrationOptions& opt = {},
                                   bool keep_samples = false) {
    if (!(opt.rtol > 0) || !(opt.atol > 0)) throw PreconditionError("rtol and atol must be positive");
    if (y0.size() != sys.A.rows()) throw PreconditionError("initial vector has the wrong dimension");
    IntegrationResult res;
    res.y = y0;
    const double x0 = to_double(x_from), x1 = to_double(x_to);
    if (keep_samples) res.samples.push_back({x0, y0});
    if (x_from == x_to) return res;
    sys.check_regular(std::min(x_from, x_to), std::max(x_from, x_to));

    const double dir = x1 > x0 ? 1.0 : -1.0;
    const double span = std::abs(x1 - x0);
    double x = x0;
    Vec y = y0;
    Vec k1 = sys.apply(x, y);
    res.stats.evaluations = 1;

    double h = opt.initial_step;
    if (h <= 0) {
        // Hairer-Norsett-Wanner starting step from the size of y and y'.
        double dy = 0, yy = 0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            const double sc = opt.atol + opt.rtol * std::abs(y[i]);
            yy += (y[i] / sc) * (y[i] / sc);
            dy += (k1[i] / sc) * (k1[i] / sc);
        }
        h = (yy < 1e-10 || dy < 1e-10) ? 1e-6 : 0.01 * std::sqrt(yy / dy);
        h = std::min(h, span);
    }

    constexpr double safety = 0.9, fac_min = 0.2, fac_max = 5.0;
    const double eps = std::numeric_limits<double>::epsilon();
    while (dir * (x1 - x) > 0) {
        if (res.stats.accepted + res.stats.rejected >= opt.max_steps)
            throw StepSizeUnderflow("step budget of " + std::to_string(opt.max_steps) + " exhausted at x = " +
                                    std::to_string(x));
        if (h < 16 * eps * std::max(1.0, std::abs(x)))
            throw StepSizeUnderflow("step size underflow at x = " + std::to_string(x));
        bool last = false;
        if (h >= std::abs(x1 - x)) {
            h = std::abs(x1 - x);
            last = true;
        }
        const dp45::Step s = dp45::step(sys, x, y, k1, dir * h);
        res.stats.evaluations += 6;
        const double err = dp45::error_norm(s.err, y, s.y, opt.rtol, opt.atol);
        if (!std::isfinite(err)) {
            h *= fac_min;
            ++res.stats.rejected;
            continue;
        }
        if (err <= 1.0) {
            x = last ? x1 : x + dir * h;
            y = s.y;
            k1 = s.k_last;
            ++res.stats.accepted;
            if (keep_samples) res.samples.push_back({x, y});
            h *= std::min(fac_max, std::max(fac_min, safety * std::pow(err, -0.2)));
        } else {
            ++res.stats.rejected;
            h *= std::max(fac_min, safety * std::pow(err, -0.2));
        }
    }
    res.y = y;
    return res;
}

/// Fixed-step fifth-order solution, for convergence studies.
inline Vec integrate_fixed(const LinearSystem& sys, Vec y, double x_from, double x_to, int steps) {
    const double h = (x_to - x_from) / steps;
    double x = x_from;
    Vec k1 = sys.apply(x, y);
    for (int i = 0; i < steps; ++i) {
        const dp45::Step s = dp45::step(sys, x, y, k1, h);
        y = s.y;
        k1 = s.k_last;
        x = x_from + (i + 1) * h;
    }
    return y;
}

inline void write_csv(std::ostream& os, const std::vector<DenseSample>& samples) {
    os.precision(17);
    if (samples.empty()) return;
    os << "x";
    for (std::size_t i = 0; i < samples.front().y.size(); ++i) os << ",y" << i + 1;
    os << "\n";
    for (const auto& s : samples) {
        os << s.x;
        for (double v : s.y) os << "," << v;
        os << "\n";
    }
}

} // namespace levtrans
