#pragma once

// Scalar types shared by the whole library: exact rationals for symbolic work
// and a 50-digit binary float for evaluating results at a point.

#include <cctype>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/gmp.hpp>

#include "errors.hpp"

namespace levtrans {

using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using HpFloat = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<50>,
                                              boost::multiprecision::et_off>;

inline Integer numerator_of(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Integer denominator_of(const Rational& q) { return boost::multiprecision::denominator(q); }

inline bool is_integer(const Rational& q) { return denominator_of(q) == 1; }

inline int sign(const Rational& q) { return q.sign(); }

/// floor(q) as an Integer.
inline Integer floor_of(const Rational& q) {
    Integer num = numerator_of(q);
    Integer den = denominator_of(q);
    Integer quot = num / den; // truncates toward zero
    if (num < 0 && quot * den != num) quot -= 1;
    return quot;
}

inline Integer ceil_of(const Rational& q) { return -floor_of(-q); }

/// q^k for any integer k (q nonzero when k < 0).
inline Rational int_pow(const Rational& q, int k) {
    Rational base = k < 0 ? Rational(1) / q : q, out = 1;
    for (unsigned e = static_cast<unsigned>(k < 0 ? -k : k); e; e >>= 1) {
        if (e & 1u) out *= base;
        base *= base;
    }
    return out;
}

inline HpFloat to_hp(const Rational& q) {
    return HpFloat(numerator_of(q).str()) / HpFloat(denominator_of(q).str());
}

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

/// Parses "p", "-p", "p/q" or a plain decimal such as "2.5".
inline Rational parse_rational(std::string_view text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) throw ParseError("empty rational literal");
    auto check_digits = [&](std::string_view part, bool allow_sign) {
        std::size_t start = 0;
        if (allow_sign && !part.empty() && (part[0] == '-' || part[0] == '+')) start = 1;
        if (start >= part.size()) return false;
        for (std::size_t i = start; i < part.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(part[i]))) return false;
        return true;
    };
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        std::string_view num(s.data(), slash);
        std::string_view den(s.data() + slash + 1, s.size() - slash - 1);
        if (!check_digits(num, true) || !check_digits(den, false))
            throw ParseError("malformed rational literal '" + s + "'");
        std::string num_s(num);
        if (num_s[0] == '+') num_s.erase(0, 1);
        const Integer d{std::string(den)};
        if (d == 0) throw ParseError("zero denominator in '" + s + "'");
        return Rational(Integer(num_s), d);
    }
    auto dot = s.find('.');
    if (dot != std::string::npos) {
        std::string whole = s.substr(0, dot);
        std::string frac = s.substr(dot + 1);
        bool negative = !whole.empty() && whole[0] == '-';
        if (!whole.empty() && (whole[0] == '-' || whole[0] == '+')) whole.erase(0, 1);
        if (whole.empty()) whole = "0";
        if (!check_digits(whole, false) || (!frac.empty() && !check_digits(frac, false)))
            throw ParseError("malformed decimal literal '" + s + "'");
        Integer scale = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
        Rational value(Integer(whole + frac), scale);
        return negative ? -value : value;
    }
    if (!check_digits(s, true)) throw ParseError("malformed rational literal '" + s + "'");
    if (s[0] == '+') s.erase(0, 1);
    return Rational(Integer(s));
}

inline std::string to_string(const Rational& q) {
    if (is_integer(q)) return numerator_of(q).str();
    return numerator_of(q).str() + "/" + denominator_of(q).str();
}

} // namespace levtrans
