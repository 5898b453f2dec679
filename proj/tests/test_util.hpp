#pragma once

#include <random>
#include <vector>

#include <levtrans/rational_fn.hpp>
#include <levtrans/sym_matrix.hpp>

namespace levtrans_test {

using namespace levtrans;

/// Small random exact objects for property tests; fixed seeds keep runs reproducible.
class Gen {
public:
    explicit Gen(unsigned seed) : rng_(seed) {}

    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

    Rational rational(int range = 9) {
        int den = integer(1, 5);
        return Rational(integer(-range, range), den);
    }

    Polynomial polynomial(int max_degree) {
        std::vector<Rational> c;
        const int deg = integer(0, max_degree);
        for (int k = 0; k <= deg; ++k) c.push_back(rational());
        return Polynomial(std::move(c));
    }

    Polynomial nonzero_polynomial(int max_degree) {
        for (;;) {
            Polynomial p = polynomial(max_degree);
            if (!p.is_zero()) return p;
        }
    }

    RationalFn rational_fn(int max_degree = 3) {
        return RationalFn(polynomial(max_degree), nonzero_polynomial(max_degree));
    }

    /// Rational function with no real pole in [X, inf) for X >= 1 and
    /// leading order <= 0: denominators are products of (x^k + c) with c > 0
    /// and powers of x.
    RationalFn bounded_rational_fn() {
        Polynomial den(1);
        const int factors = integer(0, 2);
        for (int i = 0; i < factors; ++i) {
            const int k = integer(1, 3);
            den *= Polynomial::monomial(1, static_cast<std::size_t>(k)) + Polynomial(Rational(integer(1, 9), integer(1, 3)));
        }
        den *= Polynomial::monomial(1, static_cast<std::size_t>(integer(0, 4)));
        Polynomial num = polynomial(std::max(0, den.degree()));
        return RationalFn(num, den);
    }

    SymMatrix matrix(std::size_t n, int max_degree = 2) {
        SymMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (integer(0, 2) != 0) m(i, j) = rational_fn(max_degree);
        return m;
    }

    std::mt19937& engine() { return rng_; }

private:
    std::mt19937 rng_;
};

} // namespace levtrans_test
