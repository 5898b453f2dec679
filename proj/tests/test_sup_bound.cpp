#include <catch_amalgamated.hpp>

#include <cmath>

#include <levtrans/sup_bound.hpp>

#include "test_util.hpp"

using namespace levtrans;

namespace {
RationalFn f(const char* s) { return parse_rational_fn(s); }

/// Dense sampling of |f| on [X, X_far]: a geometric grid so both ends are resolved.
double sampled_sup(const RationalFn& g, double X, double X_far, int samples) {
    double best = 0;
    const double ratio = std::pow(X_far / X, 1.0 / samples);
    double x = X;
    for (int k = 0; k <= samples; ++k, x *= ratio) best = std::max(best, std::abs(g.evaluate_double(x)));
    return best;
}
} // namespace

TEST_CASE("sup_bound on monotone examples") {
    const double b1 = sup_bound(f("3/x^3"), Rational(10));
    CHECK(b1 >= 0.003);
    CHECK(b1 <= 0.003 * (1 + 1e-15));
    CHECK(sup_bound_exact(f("3/x^3"), Rational(10)) == Rational(3, 1000));
    CHECK(sup_bound_exact(f("1/(x^3 - 1)"), Rational(10)) == Rational(1, 999));
}

TEST_CASE("sup_bound against dense sampling") {
    const RationalFn g = f("36*(2 + 7*x^3)/x^9");
    const double oracle = sampled_sup(g, 10.0, 1e4, 200000);
    CHECK(oracle == Catch::Approx(2.52072e-4).epsilon(1e-12));
    const double bound = sup_bound(g, Rational(10));
    CHECK(bound >= oracle);
    CHECK(bound <= 2 * oracle);
}

TEST_CASE("sup_bound finds interior maxima") {
    // x/(x^2 + 400) peaks at x = 20 with value 1/40.
    const RationalFn g = f("x/(x^2 + 400)");
    const Rational b = sup_bound_exact(g, Rational(10));
    CHECK(b >= Rational(1, 40));
    CHECK(to_double(b) <= 0.025 * (1 + 1e-12));
    // Past the peak the function is monotone and the value at X wins.
    CHECK(sup_bound_exact(g, Rational(30)) == Rational(30, 1300));
}

TEST_CASE("sup_bound errors") {
    CHECK_THROWS_AS(sup_bound(f("1/(x - 20)"), Rational(10)), PoleInDomain);
    CHECK_THROWS_AS(sup_bound(f("1/(x - 10)"), Rational(10)), PoleInDomain);
    CHECK_THROWS_AS(sup_bound(f("x"), Rational(10)), UnboundedAtInfinity);
    CHECK_NOTHROW(sup_bound(f("1/(x - 5)"), Rational(10)));
    CHECK(sup_bound(RationalFn(), Rational(10)) == 0.0);
    CHECK(sup_bound(f("-7"), Rational(10)) == 7.0);
}

TEST_CASE("sup_bound soundness on random functions", "[property]") {
    levtrans_test::Gen gen(314);
    std::uniform_real_distribution<double> spread(0.0, 4.0);
    for (int trial = 0; trial < 60; ++trial) {
        const RationalFn g = gen.bounded_rational_fn();
        const Rational X(gen.integer(1, 12));
        const double bound = sup_bound(g, X);
        for (int k = 0; k < 1000; ++k) {
            const double x = to_double(X) * std::pow(10.0, spread(gen.engine()));
            const double v = std::abs(g.evaluate_double(x));
            CHECK(v <= bound * (1 + 1e-12) + 1e-300);
        }
    }
}
