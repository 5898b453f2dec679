#pragma once

#include <cctype>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "polynomial.hpp"

namespace levtrans {

/// One term c*x^exponent of a finite Laurent expansion.
struct LaurentTerm {
    Rational coefficient;
    int exponent = 0;
    friend bool operator==(const LaurentTerm&, const LaurentTerm&) = default;
};

/// Exact rational function N(x)/D(x) over Q, always kept reduced:
/// gcd(N, D) = 1, D monic, and zero is 0/1.
class RationalFn {
public:
    RationalFn() : den_(1) {}
    RationalFn(const Rational& c) : num_(c), den_(1) {}
    RationalFn(int c) : RationalFn(Rational(c)) {}
    RationalFn(Polynomial p) : num_(std::move(p)), den_(1) {}
    RationalFn(Polynomial num, Polynomial den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }

    /// c * x^power for any integer power.
    static RationalFn power(int power, const Rational& c = 1) {
        if (power >= 0) return RationalFn(Polynomial::monomial(c, static_cast<std::size_t>(power)));
        return from_reduced(Polynomial(c), Polynomial::monomial(1, static_cast<std::size_t>(-power)));
    }
    static RationalFn x() { return power(1); }

    const Polynomial& numerator() const { return num_; }
    const Polynomial& denominator() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_constant() const { return num_.is_constant() && den_.degree() == 0; }
    /// True when the denominator is a power of x, i.e. a finite Laurent polynomial.
    bool is_laurent_polynomial() const { return den_.is_monomial(); }

    /// deg N - deg D, so f = Theta(x^e) as x -> infinity; nullopt for the zero function.
    std::optional<int> leading_order() const {
        if (is_zero()) return std::nullopt;
        return num_.degree() - den_.degree();
    }
    /// Coefficient c in f ~ c x^e.
    Rational leading_coefficient() const { return is_zero() ? Rational(0) : num_.leading() / den_.leading(); }

    /// lim_{x->inf} f; requires leading_order <= 0.
    Rational limit_at_infinity() const {
        if (is_zero() || num_.degree() < den_.degree()) return 0;
        if (num_.degree() > den_.degree()) throw UnboundedAtInfinity("limit at infinity does not exist");
        return num_.leading() / den_.leading();
    }

    RationalFn operator-() const { return from_reduced(-num_, den_); }

    friend RationalFn operator+(const RationalFn& a, const RationalFn& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        if (a.den_ == b.den_) return RationalFn(a.num_ + b.num_, a.den_);
        if (a.den_.is_monomial() && b.den_.is_monomial()) {
            // x^p and x^q: common denominator x^max(p,q).
            const std::size_t p = a.den_.lowest_power(), q = b.den_.lowest_power();
            const std::size_t m = std::max(p, q);
            return RationalFn(a.num_.shifted_up(m - p) + b.num_.shifted_up(m - q), Polynomial::monomial(1, m));
        }
        const Polynomial g = gcd(a.den_, b.den_);
        const Polynomial a_rest = a.den_ / g;
        const Polynomial b_rest = b.den_ / g;
        return RationalFn(a.num_ * b_rest + b.num_ * a_rest, a_rest * b.den_);
    }
    friend RationalFn operator-(const RationalFn& a, const RationalFn& b) { return a + (-b); }
    friend RationalFn operator*(const RationalFn& a, const RationalFn& b) {
        if (a.is_zero() || b.is_zero()) return {};
        if (a.is_constant()) return from_reduced(a.num_.leading() * b.num_, b.den_);
        if (b.is_constant()) return from_reduced(b.num_.leading() * a.num_, a.den_);
        const Polynomial g1 = gcd(a.num_, b.den_);
        const Polynomial g2 = gcd(b.num_, a.den_);
        Polynomial num = (a.num_ / g1) * (b.num_ / g2);
        Polynomial den = (a.den_ / g2) * (b.den_ / g1);
        const Rational lead = den.leading();
        if (lead != 1) {
            num = (Rational(1) / lead) * num;
            den = den.monic();
        }
        return from_reduced(std::move(num), std::move(den));
    }
    friend RationalFn operator/(const RationalFn& a, const RationalFn& b) {
        if (b.is_zero()) throw DivisionByZeroDenominator("division by the zero rational function");
        return a * RationalFn(b.den_, b.num_);
    }
    RationalFn& operator+=(const RationalFn& o) { return *this = *this + o; }
    RationalFn& operator-=(const RationalFn& o) { return *this = *this - o; }
    RationalFn& operator*=(const RationalFn& o) { return *this = *this * o; }

    friend bool operator==(const RationalFn& a, const RationalFn& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }

    /// Integer power (negative allowed for nonzero f).
    RationalFn pow(int k) const {
        if (k < 0) return RationalFn(1) / pow(-k);
        RationalFn result(1), base = *this;
        while (k > 0) {
            if (k & 1) result *= base;
            base *= base;
            k >>= 1;
        }
        return result;
    }

    Rational operator()(const Rational& at) const {
        const Rational d = den_(at);
        if (d == 0) throw PoleInDomain("rational function evaluated at a pole x = " + to_string(at));
        return num_(at) / d;
    }
    HpFloat evaluate_hp(const HpFloat& at) const {
        auto conv = [](const Rational& c) { return to_hp(c); };
        return num_.evaluate(at, conv) / den_.evaluate(at, conv);
    }
    double evaluate_double(double at) const {
        auto conv = [](const Rational& c) { return to_double(c); };
        return num_.evaluate(at, conv) / den_.evaluate(at, conv);
    }

    /// Laurent expansion at infinity: the terms c*x^e with e >= lowest_exponent.
    /// The expansion is exact when the function is a Laurent polynomial whose
    /// lowest term is kept; otherwise the tail f - sum has leading order below
    /// lowest_exponent.
    std::vector<LaurentTerm> laurent_at_infinity(int lowest_exponent) const {
        std::vector<LaurentTerm> out;
        if (is_zero()) return out;
        const int e = *leading_order();
        if (e < lowest_exponent) return out;
        const int nd = num_.degree(), dd = den_.degree();
        const auto n_rev = [&](int k) { return k <= nd ? num_.coeff(static_cast<std::size_t>(nd - k)) : Rational(0); };
        const auto d_rev = [&](int k) { return k <= dd ? den_.coeff(static_cast<std::size_t>(dd - k)) : Rational(0); };
        const Rational d0 = d_rev(0);
        std::vector<Rational> series;
        for (int k = 0; k <= e - lowest_exponent; ++k) {
            Rational s = n_rev(k);
            for (int i = 1; i <= std::min(k, dd); ++i) s -= d_rev(i) * series[static_cast<std::size_t>(k - i)];
            s /= d0;
            series.push_back(s);
            if (s != 0) out.push_back({s, e - k});
        }
        return out;
    }

    static RationalFn from_laurent(const std::vector<LaurentTerm>& terms) {
        RationalFn acc;
        for (const auto& t : terms) acc += power(t.exponent, t.coefficient);
        return acc;
    }

    /// Canonical string with integer coefficients, e.g. "(252*x^3 + 72)/x^9".
    std::string str() const;
    friend std::ostream& operator<<(std::ostream& os, const RationalFn& f) { return os << f.str(); }

private:
    static RationalFn from_reduced(Polynomial num, Polynomial den) {
        RationalFn f;
        f.num_ = std::move(num);
        f.den_ = f.num_.is_zero() ? Polynomial(1) : std::move(den);
        return f;
    }

    void normalize() {
        if (den_.is_zero()) throw DivisionByZeroDenominator("rational function with zero denominator");
        if (num_.is_zero()) {
            den_ = Polynomial(1);
            return;
        }
        if (den_.degree() > 0) {
            Polynomial g;
            if (den_.is_monomial()) {
                g = Polynomial::monomial(1, std::min(den_.lowest_power(), num_.lowest_power()));
            } else {
                g = gcd(num_, den_);
            }
            if (g.degree() > 0) {
                num_ = num_ / g;
                den_ = den_ / g;
            }
        }
        const Rational lead = den_.leading();
        if (lead != 1) {
            num_ = (Rational(1) / lead) * num_;
            den_ = den_.monic();
        }
    }

    Polynomial num_;
    Polynomial den_;
};

/// Exact derivative d/dx, reduced.
inline RationalFn differentiate(const RationalFn& f) {
    if (f.is_zero() || f.is_constant()) return {};
    const Polynomial& n = f.numerator();
    const Polynomial& d = f.denominator();
    if (d.degree() == 0) return RationalFn(n.derivative());
    return RationalFn(n.derivative() * d - n * d.derivative(), d * d);
}

inline std::optional<int> leading_order(const RationalFn& f) { return f.leading_order(); }

/// True when f is identically zero or f = O(x^bound).
inline bool order_at_most(const RationalFn& f, const Rational& bound) {
    auto e = f.leading_order();
    return !e || Rational(*e) <= bound;
}

namespace detail {

inline std::string format_integer_poly(const std::vector<Integer>& c) {
    std::string out;
    bool first = true;
    for (std::size_t k = c.size(); k-- > 0;) {
        if (c[k] == 0) continue;
        Integer mag = c[k] < 0 ? Integer(-c[k]) : c[k];
        if (first) {
            if (c[k] < 0) out += "-";
        } else {
            out += c[k] < 0 ? " - " : " + ";
        }
        first = false;
        if (k == 0) {
            out += mag.str();
            continue;
        }
        if (mag != 1) out += mag.str() + "*";
        out += "x";
        if (k > 1) out += "^" + std::to_string(k);
    }
    return first ? "0" : out;
}

inline std::size_t term_count(const std::vector<Integer>& c) {
    std::size_t n = 0;
    for (const auto& v : c)
        if (v != 0) ++n;
    return n;
}

/// A single term that needs no parentheses as a divisor: an integer or a bare x^k.
inline bool is_atomic_divisor(const std::vector<Integer>& c) {
    if (term_count(c) != 1) return false;
    for (std::size_t k = 0; k < c.size(); ++k)
        if (c[k] != 0) return k == 0 ? c[k] > 0 : c[k] == 1;
    return false;
}

} // namespace detail

inline std::string RationalFn::str() const {
    if (is_zero()) return "0";
    // Scale numerator and denominator to coprime integer coefficients.
    Integer lcm_den = 1;
    auto absorb = [&](const Polynomial& p) {
        for (const auto& c : p.coefficients())
            if (c != 0) lcm_den = boost::multiprecision::lcm(lcm_den, denominator_of(c));
    };
    absorb(num_);
    absorb(den_);
    auto scaled = [&](const Polynomial& p) {
        std::vector<Integer> out;
        for (const auto& c : p.coefficients()) out.push_back(numerator_of(c * Rational(lcm_den)));
        return out;
    };
    std::vector<Integer> n = scaled(num_), d = scaled(den_);
    Integer content = 0;
    for (const auto& v : n) content = boost::multiprecision::gcd(content, v);
    for (const auto& v : d) content = boost::multiprecision::gcd(content, v);
    if (content < 0) content = -content;
    if (content > 1) {
        for (auto& v : n) v /= content;
        for (auto& v : d) v /= content;
    }
    std::string ns = detail::format_integer_poly(n);
    if (d.size() == 1 && d[0] == 1) return ns;
    if (detail::term_count(n) > 1) ns = "(" + ns + ")";
    std::string ds = detail::format_integer_poly(d);
    if (!detail::is_atomic_divisor(d)) ds = "(" + ds + ")";
    return ns + "/" + ds;
}

namespace detail {

/// Recursive-descent parser for expressions in x:
///   expr   := term (('+'|'-') term)*
///   term   := unary (('*'|'/') unary)*
///   unary  := ('+'|'-') unary | power
///   power  := atom ('^' exponent)?
///   atom   := integer | 'x' | '(' expr ')'
///   exponent := ['-'|'+'] integer | '(' ['-'|'+'] integer ')'
class ExprParser {
public:
    explicit ExprParser(std::string_view text) : s_(text) {}

    RationalFn parse() {
        RationalFn f = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected character");
        return f;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError(what + " at position " + std::to_string(pos_) + " in '" + std::string(s_) + "'");
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    RationalFn expr() {
        RationalFn acc = term();
        for (;;) {
            if (accept('+')) acc += term();
            else if (accept('-')) acc -= term();
            else return acc;
        }
    }
    RationalFn term() {
        RationalFn acc = unary();
        for (;;) {
            if (accept('*')) acc *= unary();
            else if (accept('/')) {
                RationalFn divisor = unary();
                if (divisor.is_zero()) fail("division by zero");
                acc = acc / divisor;
            } else return acc;
        }
    }
    RationalFn unary() {
        if (accept('-')) return -unary();
        if (accept('+')) return unary();
        return power();
    }
    RationalFn power() {
        RationalFn base = atom();
        if (accept('^')) {
            const int k = exponent();
            if (k < 0 && base.is_zero()) fail("negative power of zero");
            return base.pow(k);
        }
        return base;
    }
    int exponent() {
        const bool paren = accept('(');
        bool negative = false;
        if (accept('-')) negative = true;
        else accept('+');
        skip();
        const std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("expected integer exponent");
        if (pos_ - start > 6) fail("exponent too large");
        int k = std::stoi(std::string(s_.substr(start, pos_ - start)));
        if (paren && !accept(')')) fail("expected ')'");
        return negative ? -k : k;
    }
    RationalFn atom() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        const char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            RationalFn inner = expr();
            if (!accept(')')) fail("expected ')'");
            return inner;
        }
        if (c == 'x') {
            ++pos_;
            return RationalFn::x();
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            return RationalFn(Rational(Integer(std::string(s_.substr(start, pos_ - start)))));
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

} // namespace detail

/// Parses the rational-function grammar used in problem files and reports.
inline RationalFn parse_rational_fn(std::string_view text) { return detail::ExprParser(text).parse(); }

} // namespace levtrans
