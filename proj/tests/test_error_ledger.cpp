#include <catch_amalgamated.hpp>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "levtrans/error_ledger.hpp"

using namespace levtrans;

namespace {

const ProblemSpec& fixture() {
    static const ProblemSpec s = builtin_hypergeometric();
    return s;
}

const FinalState& fixture_run() {
    static const FinalState f = run(fixture());
    return f;
}

double max_entry(const SymMatrix& m, double x) {
    double best = 0;
    for (const auto& e : m.entries()) best = std::max(best, std::abs(e.evaluate_double(x)));
    return best;
}

ProblemSpec single_entry_spec(const char* e1) {
    ProblemSpec s;
    s.n = 2;
    s.N = 0;
    s.d_small = {0, 1};
    s.rho = {1, -1};
    s.lambda = {1, 1};
    s.phi1_small = {RationalFn(), RationalFn()};
    s.E1 = SymMatrix(2, 2);
    s.E1(0, 1) = parse_rational_fn(e1);
    s.a = 4;
    s.K = 0;
    s.M = 2;
    s.mode = Mode::InverseX;
    s.X = 10;
    validate(s);
    return s;
}

} // namespace

TEST_CASE("zero errors give a zero bound") {
    ProblemSpec s = single_entry_spec("0");
    const auto b = total_error_bound(make_ledger(run(s), s));
    CHECK(b.total == 0);
}

TEST_CASE("single monomial error with trivial P") {
    ProblemSpec s = single_entry_spec("-7/x^9");
    const auto r = run(s);
    REQUIRE(r.P_history.size() == 1);
    CHECK(r.P_history[0].P().is_zero());
    const auto b = total_error_bound(make_ledger(r, s));
    CHECK(b.total == round_up(Rational(7, 1000000000)));
}

TEST_CASE("fixture ledger") {
    const auto b = total_error_bound(make_ledger(fixture_run(), fixture()));
    REQUIRE(b.terms.size() == 3);
    CHECK(b.total >= 0);
    // E_1 alone: its (2,3) entry peaks at X = 10.
    const double e1 = std::abs(fixture().E1(1, 2).evaluate_double(10));
    CHECK(b.terms[0].E_norm == Catch::Approx(e1).epsilon(1e-12));
    CHECK(b.terms[2].P_norm == 0);
    CHECK(b.remainder_only <= b.total);
}

TEST_CASE("bound dominates the carried remainder pointwise") {
    const auto b = total_error_bound(make_ledger(fixture_run(), fixture()));
    const SymMatrix R = final_remainder(fixture_run());
    for (int k = 0; k < 200; ++k) {
        const double x = 10 + 0.5 * k * k;
        CHECK(max_entry(R, x) <= b.total);
    }
}

TEST_CASE("bound is monotone in the input error") {
    ProblemSpec s = fixture();
    const auto base = total_error_bound(make_ledger(run(s), s)).total;
    s.E1 = RationalFn(2) * s.E1;
    const auto doubled = total_error_bound(make_ledger(run(s), s)).total;
    CHECK(doubled >= base);
}

TEST_CASE("accumulated inverse undoes the accumulated product") {
    const auto& P = fixture_run().P_history;
    const SymMatrix I = SymMatrix::identity(3);
    for (std::size_t j = 1; j <= P.size(); ++j) {
        SymMatrix prod = I, acc = I;
        for (std::size_t k = 0; k < j; ++k) {
            prod = prod * (I + P[k].P());
            acc = (I + P[k].P()).inverse() * acc;
        }
        const SymMatrix id = prod * acc;
        for (int t = 0; t < 10; ++t) {
            const double x = 10 + 9.0 * t;
            for (std::size_t r = 0; r < 3; ++r)
                for (std::size_t c = 0; c < 3; ++c)
                    CHECK(id(r, c).evaluate_double(x) == Catch::Approx(r == c ? 1.0 : 0.0).margin(1e-15));
        }
    }
}

TEST_CASE("eta bound of the fixture") {
    const SymMatrix R = final_remainder(fixture_run());
    const auto eta = eta_bound(R, fixture(), fixture().X);
    CHECK(eta.q == 9);
    CHECK(eta.integral == Catch::Approx(eta.C * 1e-9 / 9).epsilon(1e-12));
    CHECK(3 * eta.integral < 1);
    CHECK(eta.eta >= eta.integral);
    // Quadrature of t^-1 ||R_3(t)||: [10, 1e4] numerically, the rest by t^-9 decay.
    auto integrand = [&](double t) { return max_entry(R, t) / t; };
    double q = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 10.0, 20.0, 15, 1e-12);
    q += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 20.0, 1e4, 15, 1e-12);
    CHECK(eta.integral >= q);
    CHECK(q > 0.5 * eta.integral);
}

TEST_CASE("eta bound edge cases") {
    ProblemSpec s = single_entry_spec("0");
    CHECK(eta_bound(SymMatrix::zero(2), s, s.X).eta == 0);
    // rho = 1, R = O(x^-1): the integrand decays like 1/t.
    s.mode = Mode::Standard;
    s.rho = {1, 0};
    s.K = 1;
    s.a = 1;
    s.M = 1;
    SymMatrix R = SymMatrix::zero(2);
    R(0, 1) = parse_rational_fn("1/x");
    CHECK_THROWS_AS(eta_bound(R, s, s.X), DivergentIntegral);
    // rho = 1/t with R = O(t^-1) converges.
    s.rho = {1, -1};
    CHECK(eta_bound(R, s, s.X).integral == Catch::Approx(0.1));
    // Too small an X breaks the contraction.
    R(0, 1) = parse_rational_fn("100/x");
    CHECK_THROWS_AS(eta_bound(R, s, s.X), ContractionFailure);
}

TEST_CASE("contraction failure for large P") {
    ProblemSpec s = fixture();
    s.X = 2;
    CHECK_THROWS_AS(total_error_bound(make_ledger(fixture_run(), s)), ContractionFailure);
}
