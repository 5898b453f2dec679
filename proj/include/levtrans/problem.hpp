#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sym_matrix.hpp"

namespace levtrans {

/// c * x^p. Exponents are stored as rationals but only integer powers are
/// representable as rational functions.
struct Monomial {
    Rational coefficient = 1;
    Rational exponent = 0;

    int integer_exponent() const {
        if (!is_integer(exponent)) throw InvariantViolation("non-integer exponent " + to_string(exponent) + " is not supported");
        return numerator_of(exponent).convert_to<int>();
    }
    RationalFn function() const { return RationalFn::power(integer_exponent(), coefficient); }
    friend bool operator==(const Monomial&, const Monomial&) = default;
};

enum class Mode { Standard, InverseX };

inline std::string to_string(Mode m) { return m == Mode::Standard ? "Standard" : "InverseX"; }

struct LadderRung {
    int j = 1;
    SymMatrix V;
    friend bool operator==(const LadderRung&, const LadderRung&) = default;
};

/// One system Z' = rho(x) {Lambda_1(x) + R_1(x)} Z with
/// Lambda_1 = dg(lambda*D_large, D_small) + dg(phi1) and R_1 = sum_j V_j1 + E_1.
/// Indices are 0-based in code; messages print them 1-based.
struct ProblemSpec {
    std::size_t n = 0;
    std::size_t N = 0;
    std::vector<Rational> d_large;
    std::vector<Rational> d_small;
    Monomial rho;
    Monomial lambda;
    std::vector<RationalFn> phi1_large;
    std::vector<RationalFn> phi1_small;
    std::vector<LadderRung> ladder;
    SymMatrix E1;
    Rational a = 1;
    int K = 1;
    int L = 1;
    int M = 2;
    Mode mode = Mode::Standard;
    Rational X = 1;
    std::optional<SymMatrix> back_transform;

    bool is_large(std::size_t i) const { return i < N; }
    const Rational& d(std::size_t i) const { return i < N ? d_large[i] : d_small[i - N]; }

    /// Diagonal of Lambda_0 = dg(lambda*D_large, D_small).
    std::vector<RationalFn> lambda0_diagonal() const {
        std::vector<RationalFn> out;
        const RationalFn lam = N > 0 ? lambda.function() : RationalFn(1);
        for (std::size_t i = 0; i < n; ++i) out.push_back(is_large(i) ? lam * RationalFn(d(i)) : RationalFn(d(i)));
        return out;
    }
    std::vector<RationalFn> phi1() const {
        std::vector<RationalFn> out = phi1_large;
        out.insert(out.end(), phi1_small.begin(), phi1_small.end());
        return out;
    }
    std::vector<RationalFn> lambda1_diagonal() const {
        auto out = lambda0_diagonal();
        const auto phi = phi1();
        for (std::size_t i = 0; i < n; ++i) out[i] += phi[i];
        return out;
    }
    const SymMatrix* rung(int j) const {
        for (const auto& r : ladder)
            if (r.j == j) return &r.V;
        return nullptr;
    }
    /// R_1 = V_11 + ... + V_mu1 + E_1.
    SymMatrix remainder1() const {
        SymMatrix r = E1;
        for (const auto& rung : ladder) r += rung.V;
        return r;
    }

    friend bool operator==(const ProblemSpec&, const ProblemSpec&) = default;
};

namespace detail {

inline std::string index_pair(std::size_t i, std::size_t j) {
    return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
}

inline void require(bool ok, const std::string& message) {
    if (!ok) throw InvariantViolation(message);
}

inline void check_distinct(const std::vector<Rational>& d, const char* name, std::size_t offset) {
    for (std::size_t i = 0; i < d.size(); ++i)
        for (std::size_t j = i + 1; j < d.size(); ++j)
            require(d[i] != d[j], std::string("distinct entries: ") + name + " has d_" + std::to_string(offset + i + 1) +
                                      " = d_" + std::to_string(offset + j + 1) + " = " + to_string(d[i]));
}

inline void check_square(const SymMatrix& m, std::size_t n, const std::string& name) {
    require(m.rows() == n && m.cols() == n, name + " must be " + std::to_string(n) + "x" + std::to_string(n));
}

} // namespace detail

/// Checks every structural and order invariant; throws InvariantViolation naming the first failure.
inline void validate(const ProblemSpec& s) {
    using detail::require;
    require(s.n >= 1, "dimension: n must be positive");
    require(s.N < s.n, "dimension: N must satisfy 0 <= N < n");
    require(s.d_large.size() == s.N, "dimension: D_large must have N entries");
    require(s.d_small.size() == s.n - s.N, "dimension: D_small must have n - N entries");
    require(s.phi1_large.size() == s.N && s.phi1_small.size() == s.n - s.N, "dimension: phi1 must have n entries");
    detail::check_distinct(s.d_large, "D_large", 0);
    detail::check_distinct(s.d_small, "D_small", s.N);
    if (s.N > 0 && s.N < s.n)
        for (std::size_t i = 0; i < s.N; ++i)
            require(s.d_large[i] != 0, "D_large entries must be nonzero when both blocks are present (d_" +
                                           std::to_string(i + 1) + " = 0)");

    require(s.a > 0, "order scale a must be positive");
    require(s.M >= 2, "accuracy target M must be at least 2");
    require(s.L >= 1, "L must be a positive integer");
    require(s.X > 0, "evaluation point X must be positive");
    require(s.rho.coefficient != 0, "rho coefficient must be nonzero");
    require(s.lambda.coefficient != 0, "lambda coefficient must be nonzero");
    const int p_rho = s.rho.integer_exponent();
    const int p_lambda = s.lambda.integer_exponent();

    if (s.mode == Mode::InverseX) {
        require(s.rho.coefficient == 1 && p_rho == -1, "mode InverseX requires rho(x) = x^-1");
    } else {
        require(s.K >= 1, "mode Standard requires K >= 1 (use mode InverseX for rho(x) = x^-1)");
        // 1/rho = O(x^(1 - K a))
        require(Rational(-p_rho) <= Rational(1) - Rational(s.K) * s.a, "1/rho must be O(x^(1 - K a))");
    }
    if (s.N > 0)
        require(Rational(-p_lambda) <= -Rational(s.L) * s.a, "1/lambda must be O(x^(-L a))");

    for (std::size_t i = 0; i < s.N; ++i) {
        const RationalFn& f = s.phi1_large[i];
        require(order_at_most(f, 0), "phi1 entry " + std::to_string(i + 1) + " must tend to a constant");
        require(order_at_most(f - RationalFn(f.limit_at_infinity()), -s.a),
                "phi1 entry " + std::to_string(i + 1) + " must be constant + O(x^-a)");
    }
    for (std::size_t i = 0; i < s.phi1_small.size(); ++i)
        require(order_at_most(s.phi1_small[i], -s.a), "phi1 entry " + std::to_string(s.N + i + 1) + " must be O(x^-a)");

    std::set<int> seen;
    for (const auto& rung : s.ladder) {
        require(rung.j >= 1 && rung.j < s.M, "ladder index j = " + std::to_string(rung.j) + " must satisfy 1 <= j < M");
        require(seen.insert(rung.j).second, "ladder index j = " + std::to_string(rung.j) + " appears twice");
        detail::check_square(rung.V, s.n, "V_" + std::to_string(rung.j) + "1");
        for (std::size_t i = 0; i < s.n; ++i)
            for (std::size_t k = 0; k < s.n; ++k)
                require(order_at_most(rung.V(i, k), -Rational(rung.j) * s.a),
                        "order: V_" + std::to_string(rung.j) + "1 entry " + detail::index_pair(i, k) +
                            " = " + rung.V(i, k).str() + " is not O(x^-" + to_string(Rational(rung.j) * s.a) + ")");
        if (rung.j == 1)
            for (std::size_t i = 0; i < s.n; ++i)
                require(rung.V(i, i).is_zero(), "dg V_11 nonzero at " + detail::index_pair(i, i) +
                                                     " (move diagonal terms into phi1)");
    }
    detail::check_square(s.E1, s.n, "E1");
    for (std::size_t i = 0; i < s.n; ++i)
        for (std::size_t k = 0; k < s.n; ++k)
            require(order_at_most(s.E1(i, k), -Rational(s.M) * s.a),
                    "order: E1 entry " + detail::index_pair(i, k) + " = " + s.E1(i, k).str() +
                        " is not O(x^-" + to_string(Rational(s.M) * s.a) + ")");
    if (s.back_transform) detail::check_square(*s.back_transform, s.n, "back_transform");
}

/// One hit of m*a = d_j - d_i inside the small block (1-based indices).
struct Resonance {
    int m;
    std::size_t i;
    std::size_t j;
};

struct ResonanceReport {
    std::vector<Resonance> hits;
    /// d_j - d_i < a for every ordered pair in the small block.
    bool sufficient_condition = true;
    bool ok() const { return hits.empty(); }
};

/// Lists every (m, i, j), 1 <= m <= M-1, where the modified denominator
/// d_j - d_i - m a of the x^-1 scheme vanishes.
inline ResonanceReport validate_resonance(const ProblemSpec& s) {
    if (s.mode != Mode::InverseX) throw PreconditionError("resonance check applies to mode InverseX only");
    ResonanceReport report;
    for (std::size_t i = s.N; i < s.n; ++i)
        for (std::size_t j = s.N; j < s.n; ++j) {
            if (i == j) continue;
            const Rational diff = s.d(j) - s.d(i);
            if (!(diff < s.a)) report.sufficient_condition = false;
            for (int m = 1; m <= s.M - 1; ++m)
                if (Rational(m) * s.a == diff) report.hits.push_back({m, i + 1, j + 1});
        }
    return report;
}

/// Same problem at a different accuracy or evaluation point. Lowering M folds
/// ladder rungs with j >= M into E_1.
inline ProblemSpec with_overrides(ProblemSpec s, std::optional<int> M, std::optional<Rational> X) {
    if (M) {
        if (*M < 2) throw InvariantViolation("accuracy target M must be at least 2");
        s.M = *M;
        std::vector<LadderRung> kept;
        for (auto& rung : s.ladder) {
            if (rung.j >= s.M) s.E1 += rung.V;
            else kept.push_back(std::move(rung));
        }
        s.ladder = std::move(kept);
    }
    if (X) s.X = *X;
    validate(s);
    return s;
}

/// rho (Lambda_1 + R_1): the coefficient matrix of the Z-system.
inline SymMatrix z_system_matrix(const ProblemSpec& s) {
    return s.rho.function() * (SymMatrix::diagonal(s.lambda1_diagonal()) + s.remainder1());
}

/// Coefficient matrix A of the user's system Y' = A Y with Y = T Z:
/// A = T' T^-1 + T rho (Lambda_1 + R_1) T^-1. Without a back transform this is
/// the Z-system itself.
inline SymMatrix original_system_matrix(const ProblemSpec& s) {
    const SymMatrix B = z_system_matrix(s);
    if (!s.back_transform) return B;
    const SymMatrix& T = *s.back_transform;
    const SymMatrix T_inv = T.inverse();
    return T.derivative() * T_inv + T * B * T_inv;
}

// ---------------------------------------------------------------------------
// JSON problem files

namespace detail {

inline const nlohmann::json& field(const nlohmann::json& doc, const char* name) {
    if (!doc.is_object() || !doc.contains(name)) throw SchemaError(std::string("missing field '") + name + "'");
    return doc.at(name);
}

inline Rational rational_field(const nlohmann::json& v, const std::string& what) {
    try {
        if (v.is_string()) return parse_rational(v.get<std::string>());
        if (v.is_number_integer()) return Rational(v.get<long long>());
    } catch (const ParseError& e) {
        throw SchemaError(what + ": " + e.what());
    }
    throw SchemaError(what + " must be a rational written as a \"p/q\" string");
}

inline int int_field(const nlohmann::json& doc, const char* name) {
    const auto& v = field(doc, name);
    if (!v.is_number_integer()) throw SchemaError(std::string("field '") + name + "' must be an integer");
    return v.get<int>();
}

inline std::vector<Rational> rational_list(const nlohmann::json& v, const std::string& what) {
    if (!v.is_array()) throw SchemaError(what + " must be an array");
    std::vector<Rational> out;
    for (const auto& e : v) out.push_back(rational_field(e, what));
    return out;
}

inline RationalFn fn_field(const nlohmann::json& v, const std::string& what) {
    if (!v.is_string()) throw SchemaError(what + " must be a rational-function string");
    try {
        return parse_rational_fn(v.get<std::string>());
    } catch (const ParseError& e) {
        throw SchemaError(what + ": " + e.what());
    }
}

inline SymMatrix matrix_field(const nlohmann::json& v, const std::string& what) {
    if (!v.is_array()) throw SchemaError(what + " must be an array of rows");
    const std::size_t rows = v.size();
    SymMatrix m(rows, rows);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!v[i].is_array() || v[i].size() != rows) throw SchemaError(what + " must be a square matrix");
        for (std::size_t j = 0; j < rows; ++j) m(i, j) = fn_field(v[i][j], what + index_pair(i, j));
    }
    return m;
}

inline Monomial monomial_field(const nlohmann::json& doc, const char* name) {
    const auto& v = field(doc, name);
    if (!v.is_object()) throw SchemaError(std::string("field '") + name + "' must be an object {coeff, exp}");
    return {rational_field(field(v, "coeff"), std::string(name) + ".coeff"),
            rational_field(field(v, "exp"), std::string(name) + ".exp")};
}

inline nlohmann::json matrix_json(const SymMatrix& m) { return matrix_to_strings(m); }

} // namespace detail

/// Parses and validates a problem document.
inline ProblemSpec load_problem(const std::string& document) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(document);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError(std::string("not valid JSON: ") + e.what());
    }
    using namespace detail;
    ProblemSpec s;
    const int n = int_field(doc, "n");
    const int N = int_field(doc, "N");
    if (n < 1 || N < 0) throw SchemaError("n must be positive and N nonnegative");
    s.n = static_cast<std::size_t>(n);
    s.N = static_cast<std::size_t>(N);
    s.d_large = rational_list(field(doc, "D_large"), "D_large");
    s.d_small = rational_list(field(doc, "D_small"), "D_small");
    s.rho = monomial_field(doc, "rho");
    s.lambda = monomial_field(doc, "lambda");

    const auto& phi = field(doc, "phi1");
    if (!phi.is_array() || phi.size() != s.n) throw SchemaError("phi1 must be an array of n rational-function strings");
    for (std::size_t i = 0; i < s.n; ++i) {
        RationalFn f = fn_field(phi[i], "phi1[" + std::to_string(i) + "]");
        (i < s.N ? s.phi1_large : s.phi1_small).push_back(std::move(f));
    }

    const auto& ladder = field(doc, "ladder");
    if (!ladder.is_array()) throw SchemaError("ladder must be an array");
    for (const auto& rung : ladder) {
        const auto& j = field(rung, "j");
        if (!j.is_number_integer()) throw SchemaError("ladder j must be an integer");
        s.ladder.push_back({j.get<int>(), matrix_field(field(rung, "matrix"), "ladder matrix")});
    }
    s.E1 = matrix_field(field(doc, "E1"), "E1");
    s.a = rational_field(field(doc, "a"), "a");
    s.K = int_field(doc, "K");
    s.L = int_field(doc, "L");
    s.M = int_field(doc, "M");
    const auto& mode = field(doc, "mode");
    if (mode == "Standard") s.mode = Mode::Standard;
    else if (mode == "InverseX") s.mode = Mode::InverseX;
    else throw SchemaError("mode must be \"Standard\" or \"InverseX\"");
    s.X = rational_field(field(doc, "X"), "X");
    if (doc.contains("back_transform") && !doc.at("back_transform").is_null())
        s.back_transform = matrix_field(doc.at("back_transform"), "back_transform");
    validate(s);
    return s;
}

inline std::string serialize_problem(const ProblemSpec& s) {
    nlohmann::ordered_json doc;
    doc["n"] = s.n;
    doc["N"] = s.N;
    auto rationals = [](const std::vector<Rational>& v) {
        std::vector<std::string> out;
        for (const auto& q : v) out.push_back(to_string(q));
        return out;
    };
    doc["D_large"] = rationals(s.d_large);
    doc["D_small"] = rationals(s.d_small);
    doc["rho"] = {{"coeff", to_string(s.rho.coefficient)}, {"exp", to_string(s.rho.exponent)}};
    doc["lambda"] = {{"coeff", to_string(s.lambda.coefficient)}, {"exp", to_string(s.lambda.exponent)}};
    std::vector<std::string> phi;
    for (const auto& f : s.phi1()) phi.push_back(f.str());
    doc["phi1"] = phi;
    doc["ladder"] = nlohmann::ordered_json::array();
    for (const auto& rung : s.ladder)
        doc["ladder"].push_back({{"j", rung.j}, {"matrix", matrix_to_strings(rung.V)}});
    doc["E1"] = matrix_to_strings(s.E1);
    doc["a"] = to_string(s.a);
    doc["K"] = s.K;
    doc["L"] = s.L;
    doc["M"] = s.M;
    doc["mode"] = to_string(s.mode);
    doc["X"] = to_string(s.X);
    if (s.back_transform) doc["back_transform"] = matrix_to_strings(*s.back_transform);
    return doc.dump(2);
}

/// The third-order generalised hypergeometric equation
///   y''' - x^2 y'' - x y' + y = 0
/// written as a Z-system with rho = 1/x, lambda = x^3, D_large = (1),
/// D_small = dg(1, -1), a = 3, L = 1, M = 3 and X = 10. E_1 is stored
/// exactly as the closed-form remainder after the x^-3 and x^-6 rungs.
inline ProblemSpec builtin_hypergeometric() {
    ProblemSpec s;
    s.n = 3;
    s.N = 1;
    s.d_large = {1};
    s.d_small = {1, -1};
    s.rho = {1, -1};
    s.lambda = {1, 3};
    s.phi1_large = {parse_rational_fn("-3 - 3/x^3")};
    s.phi1_small = {RationalFn(), parse_rational_fn("3/x^3")};
    // V_11 = 3 x^-3 (C_1 - dg C_1), V_21 = 3 x^-6 C_2.
    s.ladder.push_back({1, matrix_from_strings({{"0", "0", "0"},
                                                {"24/x^3", "0", "-3/x^3"},
                                                {"0", "0", "0"}})});
    s.ladder.push_back({2, matrix_from_strings({{"-3/x^6", "0", "6/x^6"},
                                                {"12/x^6", "0", "-3/x^6"},
                                                {"0", "0", "-3/x^6"}})});
    // Written in X = x^3.
    s.E1 = matrix_from_strings(
        {{"-3*(x^3)^-2*(x^3 - 1)^-1", "0", "6*(x^3)^-2*((x^3)^2 - 1)^-1"},
         {"12*(x^3)^-2*(x^3 - 1)^-1", "0", "-3*(x^3)^-2*(x^3 - 1)^-1 - 18*(x^3)^-1*((x^3)^2 - 1)^-1"},
         {"0", "0", "3*(x^3)^-2*(x^3 + 1)^-1"}});
    s.a = 3;
    s.K = 0;
    s.L = 1;
    s.M = 3;
    s.mode = Mode::InverseX;
    s.X = 10;
    // Y = dg(1, 1/x, x) [[1,1,1],[x^3,1,-1],[x^3-1,0,2x^-3]] [[1,0,0],[3x^-3,1,0],[0,0,1]] Z
    s.back_transform = matrix_from_strings({{"1 + 3/x^3", "1", "1"},
                                            {"x^2 + 3/x^4", "1/x", "-1/x"},
                                            {"x^4 - x", "0", "2/x^2"}});
    validate(s);
    return s;
}

} // namespace levtrans
