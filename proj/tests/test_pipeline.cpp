#include <catch_amalgamated.hpp>

#include "levtrans/levtrans.hpp"

using namespace levtrans;

namespace {

const ProblemSpec& fixture() {
    static const ProblemSpec s = builtin_hypergeometric();
    return s;
}

} // namespace

TEST_CASE("transform report is deterministic and carries the transcript") {
    const auto a = transform_json(transform(fixture())).dump(2);
    const auto b = transform_json(transform(fixture())).dump(2);
    CHECK(a == b);
    const auto j = nlohmann::json::parse(a);
    CHECK(j["schema"] == 1);
    CHECK(j["S"]["S_2"][1][0] == "(252*x^3 + 72)/x^9");
    CHECK(j["S"]["S_2"][1][2] == "-24/(5*x^6)");
    CHECK(j["iterations"].size() == 2);
    CHECK(j["error_bound"]["terms"].size() == 3);
}

TEST_CASE("lower M gives one iteration and no S_2") {
    const auto r = transform(with_overrides(fixture(), 2, std::nullopt));
    const auto j = transform_json(r);
    CHECK(j["iterations"].size() == 1);
    CHECK_FALSE(j["S"].contains("S_2"));
}

TEST_CASE("solve report of the recessive solution") {
    SolveOptions opt;
    opt.k = 3;
    opt.target = Rational(0);
    opt.keep_samples = true;
    const SolveResult r = solve(fixture(), opt);
    REQUIRE(r.Y);
    REQUIRE(r.continuation);
    CHECK(r.continuation->original);
    CHECK(r.continuation->y[0] == Catch::Approx(1.87778588).margin(1e-6));
    CHECK(r.continuation->samples.back().x == 0);
    CHECK(r.eta.q == 9);
    // With no diagonal tails, the Levinson remainder is the carried remainder.
    CHECK(r.R_M == final_remainder(r.transform.final));
    const auto j = solve_json(r);
    CHECK(j["schema"] == 1);
    CHECK(j["continuation"]["method_order"] == 5);
    CHECK(solve_json(solve(fixture(), opt)).dump() == j.dump());
}

TEST_CASE("solve policy errors") {
    SolveOptions opt;
    opt.k = 4;
    CHECK_THROWS_AS(solve(fixture(), opt), PreconditionError);
    opt.k = 1;
    opt.target = Rational(0);
    CHECK_THROWS_AS(solve(fixture(), opt), ContinuationRefused);
    // Toward infinity the dominant solution is well conditioned.
    opt.target = Rational(11);
    CHECK_NOTHROW(solve(fixture(), opt));
}

TEST_CASE("without a back transform the continuation stays in Z coordinates") {
    ProblemSpec s = fixture();
    s.back_transform.reset();
    s.X = 20;
    SolveOptions opt;
    opt.k = 3;
    opt.target = Rational(10);
    opt.ode.rtol = 1e-12;
    opt.ode.atol = 1e-16;
    const SolveResult r = solve(s, opt);
    CHECK_FALSE(r.Y);
    REQUIRE(r.continuation);
    CHECK_FALSE(r.continuation->original);
    // Both ends follow the asymptotic solution up to the Levinson correction,
    // which on [10, inf) is bounded by eta at X = 10.
    const FinalState& f = r.transform.final;
    const Vec at10 = to_doubles(to_first_system(asymptotic_value(3, f.Lambda, s, 10).Z, f.P_history, 10));
    const double eta10 = eta_bound(r.R_M, s, 10).eta;
    const double ratio = r.continuation->y[2] / at10[2];
    for (int i = 0; i < 3; ++i)
        CHECK(std::abs(r.continuation->y[i] - ratio * at10[i]) <= 4 * eta10 * std::abs(at10[2]) + 1e-15);
    CHECK(ratio == Catch::Approx(1).margin(4 * eta10));
    // The Z-system has a pole at x = 1.
    opt.target = Rational(0);
    CHECK_THROWS_AS(solve(s, opt), PoleInInterval);
}

TEST_CASE("verify filtering and tolerance overrides") {
    VerifyOptions o;
    o.only = "symbolic";
    const auto sym = verify(o);
    REQUIRE_FALSE(sym.rows.empty());
    for (const auto& r : sym.rows) {
        CHECK(r.group == "symbolic");
        CHECK(r.criterion <= 2);
    }
    CHECK(sym.ok());

    o.only = "numeric";
    const auto num = verify(o);
    CHECK(num.ok());
    bool saw_deviation = false;
    for (const auto& r : num.rows) saw_deviation = saw_deviation || r.known_deviation;
    CHECK(saw_deviation);
    o.tolerances["Y0_exact"] = 1e-12;
    CHECK_FALSE(verify(o).ok());
}
