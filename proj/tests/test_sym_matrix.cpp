#include <catch_amalgamated.hpp>

#include <levtrans/sym_matrix.hpp>

#include "test_util.hpp"

using namespace levtrans;

TEST_CASE("matrix product is associative and non-commutative", "[property]") {
    levtrans_test::Gen gen(5);
    bool saw_noncommuting = false;
    for (int trial = 0; trial < 40; ++trial) {
        const SymMatrix a = gen.matrix(3), b = gen.matrix(3), c = gen.matrix(3);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a.diagonal_part() + a.off_diagonal_part() == a);
        if (!(a * b == b * a)) saw_noncommuting = true;
    }
    CHECK(saw_noncommuting);
}

TEST_CASE("exact inverse") {
    auto m = matrix_from_strings({{"1 + 3/x^3", "1", "1"},
                                  {"x^2 + 3/x^4", "1/x", "-1/x"},
                                  {"x^4 - x", "0", "2/x^2"}});
    const SymMatrix inv = m.inverse();
    CHECK(m * inv == SymMatrix::identity(3));
    CHECK(inv * m == SymMatrix::identity(3));
    CHECK_THROWS_AS(SymMatrix::zero(2).inverse(), DivisionByZeroDenominator);
}

TEST_CASE("leading order of a matrix is the largest entry order") {
    auto m = matrix_from_strings({{"1/x^3", "0"}, {"x", "5/x^9"}});
    CHECK(m.leading_order() == 1);
    CHECK_FALSE(SymMatrix::zero(2).leading_order().has_value());
    CHECK(matrix_to_strings(m)[1][1] == "5/x^9");
}
