#pragma once

// JSON and plain-text reports. JSON output is deterministic: no timestamps or
// timings, keys in insertion order.

#include <iomanip>
#include <sstream>

#include "pipeline.hpp"

namespace levtrans {

namespace detail {

inline nlohmann::ordered_json fn_list(const std::vector<RationalFn>& v) {
    auto out = nlohmann::ordered_json::array();
    for (const auto& f : v) out.push_back(f.str());
    return out;
}

inline nlohmann::ordered_json hp_list(const HpVector& v) {
    auto out = nlohmann::ordered_json::array();
    for (const auto& c : v) out.push_back(c.convert_to<double>());
    return out;
}

inline std::string hp_str(const HpFloat& v, int digits = 12) {
    std::ostringstream os;
    os << std::setprecision(digits) << v;
    return os.str();
}

inline std::string dbl(double v, int digits = 10) {
    std::ostringstream os;
    os << std::setprecision(digits) << v;
    return os.str();
}

inline void print_matrix(std::ostream& os, const std::string& name, const SymMatrix& m) {
    os << name << " =\n";
    for (std::size_t i = 0; i < m.rows(); ++i) {
        os << "  [";
        for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? ", " : " ") << m(i, j);
        os << " ]\n";
    }
}

} // namespace detail

inline nlohmann::ordered_json bound_json(const ErrorBound& b) {
    nlohmann::ordered_json j;
    j["total"] = b.total;
    j["series_remainder_only"] = b.remainder_only;
    auto terms = nlohmann::ordered_json::array();
    for (const auto& t : b.terms)
        terms.push_back({{"j", t.j},
                         {"E_norm", t.E_norm},
                         {"P_norm", t.P_norm},
                         {"A_factor", t.A_factor},
                         {"term", t.term},
                         {"series_remainder_only", t.remainder_only}});
    j["terms"] = terms;
    return j;
}

inline nlohmann::ordered_json transform_json(const TransformResult& r) {
    const ProblemSpec& s = r.spec;
    const FinalState& f = r.final;
    nlohmann::ordered_json j;
    j["schema"] = 1;
    j["command"] = "transform";
    j["problem"] = {{"n", s.n}, {"N", s.N}, {"M", s.M}, {"a", to_string(s.a)}, {"mode", to_string(s.mode)},
                    {"X", to_string(s.X)}};
    j["Lambda_1"] = detail::fn_list(s.lambda1_diagonal());
    auto S = nlohmann::ordered_json::object();
    for (std::size_t m = 0; m < f.S.size(); ++m) S["S_" + std::to_string(m + 1)] = matrix_to_strings(f.S[m]);
    j["S"] = S;
    auto its = nlohmann::ordered_json::array();
    for (const auto& rec : f.records) {
        nlohmann::ordered_json it;
        it["m"] = rec.m;
        it["P"] = matrix_to_strings(rec.P.P());
        it["Qtilde"] = matrix_to_strings(rec.P.Qtilde);
        it["Q"] = matrix_to_strings(rec.P.Q);
        if (!rec.P.laurent_tail.is_zero()) it["laurent_tail"] = matrix_to_strings(rec.P.laurent_tail);
        it["Lambda"] = detail::fn_list(rec.Lambda_next);
        auto orders = nlohmann::ordered_json::object();
        for (const auto& [k, o] : rec.bucket_orders) orders[std::to_string(k)] = o;
        it["bucket_orders"] = orders;
        auto ex = nlohmann::ordered_json::array();
        for (const auto& e : rec.expansions) {
            nlohmann::ordered_json x;
            x["term"] = e.name;
            x["order"] = e.order ? nlohmann::ordered_json(*e.order) : nlohmann::ordered_json(nullptr);
            x["nu"] = e.nu;
            x["buckets"] = e.buckets;
            ex.push_back(x);
        }
        it["expansions"] = ex;
        its.push_back(it);
    }
    j["iterations"] = its;
    j["Lambda_M"] = detail::fn_list(f.Lambda);
    auto errs = nlohmann::ordered_json::array();
    for (const auto& e : f.errors)
        errs.push_back({{"j", e.j}, {"exact", matrix_to_strings(e.exact)}, {"remainder", matrix_to_strings(e.remainder)}});
    j["errors"] = errs;
    j["error_bound"] = bound_json(r.bound);
    return j;
}

inline nlohmann::ordered_json solve_json(const SolveResult& r) {
    nlohmann::ordered_json j;
    j["schema"] = 1;
    j["command"] = "solve";
    j["k"] = r.k;
    j["X"] = to_string(r.transform.spec.X);
    auto pairs = nlohmann::ordered_json::array();
    for (const auto& p : r.dichotomy.pairs)
        pairs.push_back({{"j", p.j}, {"k", p.k}, {"F", p.F.str()}, {"constant_sign", p.constant_sign},
                         {"divergent", p.divergent}, {"pass", p.pass()}});
    j["dichotomy"] = pairs;
    j["exponent"] = {{"integrand", r.value.exponent.integrand().str()},
                     {"antiderivative", r.value.exponent.antiderivative().str()},
                     {"log_power", to_string(r.value.exponent.log_coefficient)}};
    j["Z_X"] = detail::hp_list(r.value.Z);
    j["Z_X_input_coordinates"] = detail::hp_list(r.Z_first);
    if (r.Y) j["Y_X"] = detail::hp_list(*r.Y);
    j["eta"] = {{"integral", r.eta.integral}, {"eta", r.eta.eta}, {"C", r.eta.C}, {"q", r.eta.q}};
    j["error_bound"] = bound_json(r.transform.bound);
    if (r.continuation) {
        const auto& c = *r.continuation;
        j["continuation"] = {{"target", to_string(c.target)},
                             {"coordinates", c.original ? "original" : "Z"},
                             {"y", c.y},
                             {"method", IntegrationStats::method},
                             {"method_order", IntegrationStats::method_order},
                             {"accepted_steps", c.stats.accepted},
                             {"rejected_steps", c.stats.rejected}};
    }
    return j;
}

inline void transform_text(std::ostream& os, const TransformResult& r) {
    const ProblemSpec& s = r.spec;
    const FinalState& f = r.final;
    os << "problem: n = " << s.n << ", N = " << s.N << ", M = " << s.M << ", a = " << to_string(s.a)
       << ", mode " << to_string(s.mode) << ", X = " << to_string(s.X) << "\n";
    os << "Lambda_1 = dg(";
    const auto l1 = s.lambda1_diagonal();
    for (std::size_t i = 0; i < l1.size(); ++i) os << (i ? ", " : "") << l1[i];
    os << ")\n\n";
    for (std::size_t m = 0; m < f.S.size(); ++m) detail::print_matrix(os, "S_" + std::to_string(m + 1), f.S[m]);
    for (const auto& rec : f.records) {
        os << "\niteration m = " << rec.m << "\n";
        detail::print_matrix(os, "P_" + std::to_string(rec.m), rec.P.P());
        os << "Lambda_" << rec.m + 1 << " = dg(";
        for (std::size_t i = 0; i < rec.Lambda_next.size(); ++i) os << (i ? ", " : "") << rec.Lambda_next[i];
        os << ")\n";
        for (const auto& [k, o] : rec.bucket_orders) os << "  V_" << k << " leading order x^" << o << "\n";
    }
    os << "\nerror ledger (sup over [X, inf), max-entry norm)\n";
    for (const auto& t : r.bound.terms)
        os << "  E_" << t.j << ": |E| <= " << detail::dbl(t.E_norm, 6) << ", |P| = " << detail::dbl(t.P_norm, 6)
           << ", term " << detail::dbl(t.term, 6) << "\n";
    os << "total error bound E(X) = " << detail::dbl(r.bound.total) << "\n";
    os << "series-remainder ledger (diagnostic) = " << detail::dbl(r.bound.remainder_only) << "\n";
    os << "time: " << detail::dbl(r.seconds, 3) << " s\n";
}

inline void solve_text(std::ostream& os, const SolveResult& r) {
    const ProblemSpec& s = r.transform.spec;
    os << "solution k = " << r.k << " at X = " << to_string(s.X) << "\n";
    os << "dichotomy: " << (r.dichotomy.pass() ? "all pairs pass" : "FAILED") << "\n";
    os << "exponent integrand rho Lambda_kk = " << r.value.exponent.integrand() << "\n";
    os << "Z_k(X) = (";
    for (std::size_t i = 0; i < r.value.Z.size(); ++i) os << (i ? ", " : "") << detail::hp_str(r.value.Z[i]);
    os << ")\n";
    if (r.Y) {
        os << "Y(X) = (";
        for (std::size_t i = 0; i < r.Y->size(); ++i) os << (i ? ", " : "") << detail::hp_str((*r.Y)[i]);
        os << ")\n";
    }
    os << "eta bound: " << detail::dbl(r.eta.eta, 6) << " (integral " << detail::dbl(r.eta.integral, 6) << ")\n";
    os << "total error bound E(X) = " << detail::dbl(r.transform.bound.total) << "\n";
    if (r.continuation) {
        const auto& c = *r.continuation;
        os << (c.original ? "Y(" : "Z(") << to_string(c.target) << ") = (";
        for (std::size_t i = 0; i < c.y.size(); ++i) os << (i ? ", " : "") << detail::dbl(c.y[i], 10);
        os << ")\n";
        os << "  " << IntegrationStats::method << ": " << c.stats.accepted << " steps, " << c.stats.rejected
           << " rejected\n";
    }
}

} // namespace levtrans
