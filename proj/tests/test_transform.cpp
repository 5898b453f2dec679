#include <catch_amalgamated.hpp>

#include "levtrans/random_spec.hpp"
#include "levtrans/transform.hpp"

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

RationalFn f(const char* text) { return parse_rational_fn(text); }

} // namespace

TEST_CASE("P_1 of the fixture") {
    const auto st = initial_state(fixture());
    const auto P = compute_P(st, fixture());
    CHECK(P.Qtilde(1, 0) == f("24/x^6"));
    CHECK(P.Q(1, 2) == f("3/(5*x^3)"));
    CHECK(P.laurent_tail.is_zero());
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(P.Qtilde(i, i).is_zero());
        CHECK(P.Q(i, i).is_zero());
    }
    // Qtilde lives off the lower-right block, Q only inside it.
    for (std::size_t i = 1; i < 3; ++i)
        for (std::size_t j = 1; j < 3; ++j) CHECK(P.Qtilde(i, j).is_zero());
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(P.Q(0, k).is_zero());
        CHECK(P.Q(k, 0).is_zero());
    }
}

TEST_CASE("commutator terms of the first iteration") {
    const auto st = initial_state(fixture());
    const auto P = compute_P(st, fixture());
    const auto c = commutator_terms(st, P, fixture());
    CHECK(c.U(1, 0) == f("24/x^6"));
    CHECK(c.T(1, 2) == f("-9/(5*x^6)"));
    CHECK(elimination_residual(st, P, c, fixture()).is_zero());
}

TEST_CASE("zero V_1m gives zero P and commutators") {
    ProblemSpec s = fixture();
    s.ladder.erase(s.ladder.begin());
    validate(s);
    const auto st = initial_state(s);
    const auto P = compute_P(st, s);
    CHECK(P.Qtilde.is_zero());
    CHECK(P.Q.is_zero());
    const auto c = commutator_terms(st, P, s);
    CHECK(c.U.is_zero());
    CHECK(c.T.is_zero());
    CHECK(c.Tbar.is_zero());
    CHECK(c.Ttilde.is_zero());
}

TEST_CASE("S_1 and S_2 of the fixture") {
    const auto& r = fixture_run();
    REQUIRE(r.S.size() == 2);
    CHECK(r.S[0] == matrix_from_strings({{"-3/x^3", "0", "0"}, {"24/x^3", "0", "-3/x^3"}, {"0", "0", "3/x^3"}}));
    const auto expected = matrix_from_strings(
        {{"-3/x^6", "0", "6/x^6"}, {"36*(2 + 7*x^3)/x^9", "0", "-24/(5*x^6)"}, {"0", "0", "-3/x^6"}});
    CHECK(r.S[1] == expected);
    CHECK(matrix_to_strings(r.S[1]) == matrix_to_strings(expected));
    CHECK(r.S[1](1, 0).str() == "(252*x^3 + 72)/x^9");
    CHECK(r.S[1](1, 2).str() == "-24/(5*x^6)");
}

TEST_CASE("Lambda after each iteration") {
    const auto& r = fixture_run();
    const std::vector<RationalFn> lambda2{f("x^3 - 3 - 3/x^3 - 3/x^6"), RationalFn(1), f("-1 + 3/x^3 - 3/x^6")};
    CHECK(r.records.at(0).Lambda_next == lambda2);
    CHECK(r.Lambda == lambda2);
}

TEST_CASE("P_2 of the fixture") {
    const auto& r = fixture_run();
    REQUIRE(r.P_history.size() == 2);
    const auto& P2 = r.P_history[1];
    CHECK(P2.Qtilde(0, 2) == f("-6/x^9"));
    CHECK(P2.Qtilde(1, 0) == f("36*(2 + 7*x^3)/x^12"));
    CHECK(P2.Q(1, 2) == f("3/(5*x^6)"));
}

TEST_CASE("last iteration commits everything to E_M") {
    const auto& r = fixture_run();
    REQUIRE(r.errors.size() == 3);
    for (const auto& E : r.errors) {
        CHECK(E.exact.leading_order().value_or(-9) <= -9);
        CHECK(E.remainder.leading_order().value_or(-9) <= -9);
    }
    // -rho^-1 Qtilde_2' contributes 2268/x^9 at (2,1).
    const auto tilde = r.records[1].expansions.front();
    CHECK(tilde.name == "-rho^-1 Qtilde'");
    CHECK(tilde.order == -9);
    CHECK(r.records[1].bucket_orders.empty());
}

TEST_CASE("L = 1 collapses U, Tbar and T into one bucket") {
    const auto& rec = fixture_run().records.at(0);
    std::map<std::string, int> first;
    for (const auto& e : rec.expansions)
        if (!e.buckets.empty()) first[e.name] = e.buckets.front();
    REQUIRE(first.count("U"));
    REQUIRE(first.count("T"));
    REQUIRE(first.count("Tbar"));
    CHECK(first["U"] == 1);
    CHECK(first["T"] == 1);
    CHECK(first["Tbar"] == 1);
}

TEST_CASE("identity and order ladder on the fixture") {
    auto st = initial_state(fixture());
    while (st.m < fixture().M) {
        auto next = iterate(st, fixture());
        const auto& rec = next.records.back();
        CHECK(elimination_residual(st, rec.P, rec.C, fixture()).is_zero());
        CHECK(iteration_identity_residual(st, next, fixture()).is_zero());
        CHECK(ladder_violation(next, fixture()).empty());
        st = std::move(next);
    }
}

TEST_CASE("conjugating the original system reproduces the final one") {
    // B_{m+1} = (I + P_m)^-1 (B_m (I + P_m) - P_m') from the input system.
    const auto& s = fixture();
    const auto& r = fixture_run();
    SymMatrix B = z_system_matrix(s);
    const SymMatrix I = SymMatrix::identity(3);
    for (const auto& P : r.P_history) {
        const SymMatrix step = I + P.P();
        B = step.inverse() * (B * step - P.P().derivative());
    }
    const SymMatrix expected = s.rho.function() * (SymMatrix::diagonal(r.Lambda) + final_remainder(r));
    CHECK(B == expected);
    for (int k = 0; k < 20; ++k) {
        const Rational x = 10 + Rational(90 * k, 19);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) CHECK(B(i, j)(x) == expected(i, j)(x));
    }
}

TEST_CASE("derivative order rule on the input ladder") {
    for (const auto& rung : fixture().ladder)
        for (const auto& e : rung.V.entries()) {
            if (e.is_zero()) continue;
            CHECK(differentiate(e).leading_order() == *e.leading_order() - 1);
        }
}

TEST_CASE("M = 2 with no ladder leaves Lambda unchanged") {
    ProblemSpec s = with_overrides(fixture(), 2, std::nullopt);
    s.ladder.clear();
    validate(s);
    const auto r = run(s);
    CHECK(r.Lambda == s.lambda1_diagonal());
    REQUIRE(r.P_history.size() == 1);
    CHECK(r.P_history[0].P().is_zero());
    CHECK(r.S.size() == 1);
}

TEST_CASE("resonant lower-right denominator is rejected") {
    ProblemSpec s;
    s.n = 2;
    s.N = 0;
    s.d_small = {0, 3};
    s.rho = {1, -1};
    s.lambda = {1, 1};
    s.phi1_small = {RationalFn(), RationalFn()};
    s.ladder.push_back({1, matrix_from_strings({{"0", "1/x^3"}, {"0", "0"}})});
    s.E1 = SymMatrix(2, 2);
    s.a = 1;
    s.K = 0;
    s.M = 4;
    s.mode = Mode::InverseX;
    s.X = 10;
    validate(s);
    CHECK_THROWS_AS(run(s), DivisionByZeroDenominator);
}

TEST_CASE("x^-1 scheme splits non-Laurent entries") {
    ProblemSpec s;
    s.n = 2;
    s.N = 0;
    s.d_small = {0, 1};
    s.rho = {1, -1};
    s.lambda = {1, 1};
    s.phi1_small = {RationalFn(), RationalFn()};
    s.ladder.push_back({1, matrix_from_strings({{"0", "1/(x^2 + 1)"}, {"0", "0"}})});
    s.E1 = SymMatrix(2, 2);
    s.a = 2;
    s.K = 0;
    s.M = 2;
    s.mode = Mode::InverseX;
    s.X = 10;
    validate(s);
    const auto st = initial_state(s);
    const auto P = compute_P(st, s);
    // 1/(x^2+1) = x^-2 - x^-4 + ...; only x^-2 lies above x^-4.
    CHECK(P.Q(0, 1) == f("-1/x^2"));
    CHECK(P.laurent_tail(0, 1) == f("1/(x^2 + 1) - 1/x^2"));
    const auto c = commutator_terms(st, P, s);
    CHECK(elimination_residual(st, P, c, s).is_zero());
    const auto next = iterate(st, s);
    CHECK(iteration_identity_residual(st, next, s).is_zero());
    CHECK(ladder_violation(next, s).empty());
}

TEST_CASE("random specs keep the identity and the ladder") {
    std::mt19937 rng(2024);
    for (int trial = 0; trial < 60; ++trial) {
        const auto s = random_spec(rng);
        auto st = initial_state(s);
        while (st.m < s.M) {
            auto next = iterate(st, s);
            const auto& rec = next.records.back();
            INFO("trial " << trial << " m " << st.m << "\n" << serialize_problem(s));
            REQUIRE(elimination_residual(st, rec.P, rec.C, s).is_zero());
            REQUIRE(iteration_identity_residual(st, next, s).is_zero());
            REQUIRE(ladder_violation(next, s).empty());
            st = std::move(next);
        }
    }
}
