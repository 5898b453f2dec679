#include <catch_amalgamated.hpp>

#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "levtrans/levinson.hpp"
#include "levtrans/ode.hpp"

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

double d(const HpFloat& v) { return v.convert_to<double>(); }

} // namespace

TEST_CASE("fixture satisfies the dichotomy") {
    const auto r = check_dichotomy(fixture(), fixture_run().Lambda);
    REQUIRE(r.pairs.size() == 6);
    for (const auto& p : r.pairs) {
        INFO("pair " << p.j << "," << p.k << " F = " << p.F);
        CHECK(p.constant_sign);
        CHECK(p.divergent);
    }
    CHECK(r.pass());
}

TEST_CASE("equal diagonal entries fail the dichotomy") {
    std::vector<RationalFn> lam = fixture_run().Lambda;
    lam[1] = lam[0];
    const auto r = check_dichotomy(fixture(), lam);
    CHECK_FALSE(r.pass());
    int failures = 0;
    for (const auto& p : r.pairs)
        if (!p.pass()) {
            ++failures;
            CHECK(p.F.is_zero());
        }
    CHECK(failures == 2);
}

TEST_CASE("a sign change below X is harmless") {
    // F = (x - 3)/x^2 changes sign at 3 and its integral diverges like ln x.
    const RationalFn F = parse_rational_fn("(x - 3)/x^2");
    CHECK(check_pair(F, 10, 1, 2).pass());
    const auto low = check_pair(F, 2, 1, 2);
    CHECK_FALSE(low.constant_sign);
    CHECK_FALSE(low.pass());
    // Integrable difference: x^-2.
    const auto conv = check_pair(parse_rational_fn("1/x^2"), 10, 1, 2);
    CHECK(conv.constant_sign);
    CHECK_FALSE(conv.divergent);
}

TEST_CASE("dominance") {
    // Lambda_33 carries x^3/x = x^2 growth relative to the small block.
    const auto dom = dominated_by(fixture(), fixture_run().Lambda, 1);
    CHECK(dom.size() == 2);
    CHECK(dominated_by(fixture(), fixture_run().Lambda, 3).empty());
}

TEST_CASE("exponent of each fixture solution") {
    const auto& lam = fixture_run().Lambda;
    // Leading behaviour: exp(x^3/3) x^-3, x, x^-1.
    CHECK(exponent_data(1, lam, fixture()).log_coefficient == -3);
    CHECK(exponent_data(2, lam, fixture()).log_coefficient == 1);
    CHECK(exponent_data(3, lam, fixture()).log_coefficient == -1);
    CHECK(*exponent_data(1, lam, fixture()).antiderivative().leading_order() == 3);
    for (std::size_t k = 1; k <= 3; ++k) {
        const auto e = exponent_data(k, lam, fixture());
        // Ratio of values against a quadrature of the integrand.
        const RationalFn g = e.integrand();
        const double q = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
            [&](double t) { return g.evaluate_double(t); }, 3.0, 5.0, 15, 1e-14);
        CHECK(std::log(d(e.evaluate(HpFloat(5)) / e.evaluate(HpFloat(3)))) == Catch::Approx(q).epsilon(1e-12));
        CHECK(differentiate(e.antiderivative()) + RationalFn::power(-1, e.log_coefficient) == e.integrand());
        CHECK((e.integrand() - fixture().rho.function() * (lam[k - 1] - e.tail)).is_zero());
    }
    CHECK_THROWS_AS(exponent_data(0, lam, fixture()), PreconditionError);
    CHECK_THROWS_AS(exponent_data(4, lam, fixture()), PreconditionError);
}

TEST_CASE("asymptotic value of the recessive solution at X") {
    const auto v = asymptotic_value(3, fixture_run().Lambda, fixture(), 10);
    CHECK(d(v.Z[0]) == 0);
    CHECK(d(v.Z[1]) == 0);
    // rho Lambda_33 = -1/x + 3/x^4 - 3/x^7: Z_33 = x^-1 exp(-1/x^3 + 1/(2 x^6)).
    CHECK(d(v.Z[2]) == Catch::Approx(0.1 * std::exp(-1e-3 + 0.5e-6)).epsilon(1e-14));
    CHECK(d(v.Z[2]) == Catch::Approx(0.0999000999).margin(1e-9));
    CHECK(d(v.C) == Catch::Approx(d(v.Z[2])).epsilon(1e-14));

    const HpVector Y = back_transform(v.Z, fixture_run().P_history, fixture(), 10);
    CHECK(d(Y[0]) == Catch::Approx(0.0999600993).margin(1e-8));
    CHECK(d(Y[1]) == Catch::Approx(-0.009984070).margin(1e-8));
    CHECK(d(Y[2]) == Catch::Approx(0.0019920140).margin(1e-8));
}

TEST_CASE("constant diagonal gives a constant vector") {
    ProblemSpec s;
    s.n = 2;
    s.N = 0;
    s.d_small = {0, 1};
    s.rho = {1, -1};
    s.lambda = {1, 1};
    s.phi1_small = {RationalFn(), RationalFn()};
    s.E1 = SymMatrix(2, 2);
    s.a = 1;
    s.K = 0;
    s.M = 2;
    s.mode = Mode::InverseX;
    s.X = 10;
    validate(s);
    const std::vector<RationalFn> lam = {RationalFn(0), RationalFn(1)};
    const auto v = asymptotic_value(1, lam, s, 7);
    CHECK(d(v.Z[0]) == 1);
    CHECK(d(v.Z[1]) == 0);
    // The identity transform maps Z unchanged and zero to zero.
    const HpVector z = to_first_system(v.Z, {}, 7);
    CHECK(d(z[0]) == 1);
    for (const auto& c : to_first_system({0, 0, 0}, fixture_run().P_history, 7)) CHECK(d(c) == 0);
    CHECK_THROWS_AS(back_transform(v.Z, {}, s, 7), MissingBackTransform);
    s.back_transform = SymMatrix::identity(2);
    CHECK(d(back_transform(v.Z, {}, s, 7)[0]) == 1);
}

TEST_CASE("asymptotic solution solves the input system to within the eta bound") {
    const auto& f = fixture_run();
    const LinearSystem sys{z_system_matrix(fixture())};
    const Rational far = 40, near = 10;
    const HpVector z_far = to_first_system(asymptotic_value(3, f.Lambda, fixture(), far).Z, f.P_history, far);
    const HpVector z_near = to_first_system(asymptotic_value(3, f.Lambda, fixture(), near).Z, f.P_history, near);
    Vec y0;
    for (const auto& v : z_far) y0.push_back(d(v));
    IntegrationOptions opt;
    opt.rtol = 1e-12;
    opt.atol = 1e-16;
    const Vec y = integrate(sys, y0, far, near, opt).y;
    const auto eta = eta_bound(final_remainder(f), fixture(), fixture().X);
    // The recessive solution is stable going backward; the mismatch in each
    // component is the Levinson correction, relative size at most about 2 eta.
    for (std::size_t i = 0; i < 3; ++i) {
        INFO("component " << i);
        CHECK(std::abs(y[i] - d(z_near[i])) <= 4 * eta.eta * std::abs(d(z_near[2])) + 1e-14);
    }
}
