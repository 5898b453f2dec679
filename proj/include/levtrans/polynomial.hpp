#pragma once

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

#include "rational.hpp"

namespace levtrans {

/// Dense univariate polynomial in x with exact rational coefficients.
/// `coeffs_[k]` multiplies x^k; trailing zeros are never stored, so the zero
/// polynomial has an empty coefficient list and degree -1.
class Polynomial {
public:
    Polynomial() = default;
    Polynomial(const Rational& c) {
        if (c != 0) coeffs_.push_back(c);
    }
    Polynomial(int c) : Polynomial(Rational(c)) {}
    explicit Polynomial(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

    static Polynomial monomial(const Rational& c, std::size_t power) {
        if (c == 0) return {};
        std::vector<Rational> v(power + 1);
        v[power] = c;
        return Polynomial(std::move(v));
    }
    static Polynomial x() { return monomial(1, 1); }

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }
    bool is_constant() const { return coeffs_.size() <= 1; }
    const Rational& leading() const { return coeffs_.back(); }
    Rational coeff(std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : Rational(0); }
    const std::vector<Rational>& coefficients() const { return coeffs_; }

    /// Number of factors of x dividing this polynomial (0 for the zero polynomial).
    std::size_t lowest_power() const {
        std::size_t k = 0;
        while (k < coeffs_.size() && coeffs_[k] == 0) ++k;
        return k == coeffs_.size() ? 0 : k;
    }
    bool is_monomial() const {
        return !is_zero() && lowest_power() == coeffs_.size() - 1;
    }

    Polynomial operator-() const {
        Polynomial r = *this;
        for (auto& c : r.coeffs_) c = -c;
        return r;
    }
    Polynomial& operator+=(const Polynomial& o) {
        if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
        for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
        trim();
        return *this;
    }
    Polynomial& operator-=(const Polynomial& o) {
        if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
        for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
        trim();
        return *this;
    }
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<Rational> r(a.coeffs_.size() + b.coeffs_.size() - 1);
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
            if (a.coeffs_[i] == 0) continue;
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j) r[i + j] += a.coeffs_[i] * b.coeffs_[j];
        }
        return Polynomial(std::move(r));
    }
    Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }
    friend Polynomial operator*(const Rational& c, Polynomial p) {
        if (c == 0) return {};
        for (auto& v : p.coeffs_) v *= c;
        return p;
    }
    friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.coeffs_ == b.coeffs_; }

    /// Multiplies by x^k.
    Polynomial shifted_up(std::size_t k) const {
        if (is_zero() || k == 0) return *this;
        std::vector<Rational> v(k);
        v.insert(v.end(), coeffs_.begin(), coeffs_.end());
        return Polynomial(std::move(v));
    }
    /// Divides by x^k; requires k <= lowest_power().
    Polynomial shifted_down(std::size_t k) const {
        if (is_zero() || k == 0) return *this;
        return Polynomial(std::vector<Rational>(coeffs_.begin() + static_cast<std::ptrdiff_t>(k), coeffs_.end()));
    }

    Polynomial monic() const {
        if (is_zero()) return {};
        return Rational(1) / leading() * *this;
    }

    Polynomial derivative() const {
        if (coeffs_.size() <= 1) return {};
        std::vector<Rational> v(coeffs_.size() - 1);
        for (std::size_t k = 1; k < coeffs_.size(); ++k) v[k - 1] = coeffs_[k] * Rational(static_cast<long>(k));
        return Polynomial(std::move(v));
    }

    /// Horner evaluation in any field the coefficients convert into.
    template <class T, class Convert>
    T evaluate(const T& at, Convert convert) const {
        T acc = T(0);
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * at + convert(*it);
        return acc;
    }
    Rational operator()(const Rational& at) const {
        return evaluate(at, [](const Rational& c) { return c; });
    }
    int sign_at(const Rational& at) const { return (*this)(at).sign(); }
    /// Sign of p(x) as x -> +infinity.
    int sign_at_infinity() const { return is_zero() ? 0 : leading().sign(); }
    /// Sign of p(x) as x -> -infinity.
    int sign_at_minus_infinity() const {
        if (is_zero()) return 0;
        return degree() % 2 == 0 ? leading().sign() : -leading().sign();
    }

    /// Euclidean division: returns (quotient, remainder).
    friend std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b) {
        if (b.is_zero()) throw DivisionByZeroDenominator("polynomial division by zero");
        if (a.degree() < b.degree()) return {Polynomial{}, a};
        std::vector<Rational> rem = a.coeffs_;
        std::vector<Rational> quot(a.coeffs_.size() - b.coeffs_.size() + 1);
        const Rational inv_lead = Rational(1) / b.leading();
        for (std::size_t k = quot.size(); k-- > 0;) {
            const Rational q = rem[k + b.coeffs_.size() - 1] * inv_lead;
            quot[k] = q;
            if (q == 0) continue;
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j) rem[k + j] -= q * b.coeffs_[j];
        }
        rem.resize(b.coeffs_.size() - 1);
        return {Polynomial(std::move(quot)), Polynomial(std::move(rem))};
    }
    friend Polynomial operator%(const Polynomial& a, const Polynomial& b) { return divmod(a, b).second; }
    friend Polynomial operator/(const Polynomial& a, const Polynomial& b) { return divmod(a, b).first; }

    /// Monic greatest common divisor; gcd(0, 0) = 0.
    friend Polynomial gcd(Polynomial a, Polynomial b) {
        if (a.is_zero()) return b.monic();
        if (b.is_zero()) return a.monic();
        // x^k factors are the common case for Laurent-type data; strip them first.
        const std::size_t shift = std::min(a.lowest_power(), b.lowest_power());
        a = a.shifted_down(a.lowest_power());
        b = b.shifted_down(b.lowest_power());
        while (!b.is_zero()) {
            if (b.is_constant()) {
                a = Polynomial(1);
                break;
            }
            Polynomial r = a % b;
            a = std::move(b);
            b = r.is_zero() ? r : r.monic();
        }
        return a.monic().shifted_up(shift);
    }

private:
    void trim() {
        while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
    }

    std::vector<Rational> coeffs_;
};

} // namespace levtrans
