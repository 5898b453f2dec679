#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "levtrans/levtrans.hpp"

using namespace levtrans;

namespace {

enum Exit { ok = 0, failure = 1, invalid = 2, resonance = 3, dichotomy = 4, refused = 5 };

struct Source {
    std::string builtin;
    std::string path;
    std::optional<int> M;
    std::string X;
};

ProblemSpec load(const Source& src) {
    ProblemSpec s;
    if (!src.builtin.empty()) {
        if (src.builtin != "hypergeom") throw SchemaError("unknown builtin problem '" + src.builtin + "'");
        s = builtin_hypergeometric();
    } else {
        std::ifstream in(src.path);
        if (!in) throw SchemaError("cannot read " + src.path);
        std::stringstream buf;
        buf << in.rdbuf();
        s = load_problem(buf.str());
    }
    std::optional<Rational> X;
    if (!src.X.empty()) X = parse_rational(src.X);
    return with_overrides(std::move(s), src.M, X);
}

void add_source(CLI::App* cmd, Source& src) {
    auto* g = cmd->add_option_group("problem", "problem source");
    g->add_option("--builtin", src.builtin, "built-in problem: hypergeom");
    g->add_option("--problem", src.path, "problem file (JSON)")->check(CLI::ExistingFile);
    g->require_option(1);
    cmd->add_option("-M", src.M, "accuracy target M (O(x^-Ma))");
    cmd->add_option("--X", src.X, "evaluation point X, e.g. 10 or 21/2");
}

void emit(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw PreconditionError("cannot write " + path);
    out << text;
}

std::string json_text(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"levtrans: iterative diagonalisation and Levinson asymptotics for linear ODE systems"};
    app.require_subcommand(1);

    std::string format = "text", output;
    auto add_output = [&](CLI::App* cmd) {
        cmd->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
        cmd->add_option("--output,-o", output, "write the report to a file");
    };

    Source src;
    auto* tr = app.add_subcommand("transform", "run the transformation and print the transcript and error ledger");
    add_source(tr, src);
    add_output(tr);

    auto* so = app.add_subcommand("solve", "asymptotic solution at X, optionally continued to a target point");
    add_source(so, src);
    add_output(so);
    std::size_t k = 0;
    std::string target, csv;
    IntegrationOptions ode;
    so->add_option("-k", k, "solution index (1-based)")->required();
    so->add_option("--target", target, "continue numerically to this x");
    so->add_option("--rtol", ode.rtol, "relative tolerance")->check(CLI::PositiveNumber);
    so->add_option("--atol", ode.atol, "absolute tolerance")->check(CLI::PositiveNumber);
    so->add_option("--csv", csv, "write accepted steps of the continuation as CSV");

    auto* ve = app.add_subcommand("verify", "run the acceptance checks on the built-in fixture");
    add_output(ve);
    std::string only;
    std::vector<std::string> tol_args;
    int random_specs = 200;
    ve->add_option("--only", only, "restrict to one group")->check(CLI::IsMember({"symbolic", "numeric", "property"}));
    ve->add_option("--tolerance", tol_args, "override a tolerance: NAME=VALUE");
    ve->add_option("--random-specs", random_specs, "random problems for the property check")->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*tr) {
            const TransformResult r = transform(load(src));
            if (format == "json") {
                emit(json_text(transform_json(r)), output);
            } else {
                std::ostringstream os;
                transform_text(os, r);
                emit(os.str(), output);
            }
            return ok;
        }
        if (*so) {
            SolveOptions opt;
            opt.k = k;
            opt.ode = ode;
            opt.keep_samples = !csv.empty();
            if (!target.empty()) opt.target = parse_rational(target);
            const SolveResult r = solve(load(src), opt);
            if (format == "json") {
                emit(json_text(solve_json(r)), output);
            } else {
                std::ostringstream os;
                solve_text(os, r);
                emit(os.str(), output);
            }
            if (!csv.empty() && r.continuation) {
                std::ofstream out(csv);
                if (!out) throw PreconditionError("cannot write " + csv);
                write_csv(out, r.continuation->samples);
            }
            return ok;
        }
        VerifyOptions vo;
        if (!only.empty()) vo.only = only;
        vo.random_specs = random_specs;
        for (const auto& t : tol_args) {
            const auto eq = t.find('=');
            if (eq == std::string::npos) throw PreconditionError("--tolerance expects NAME=VALUE, got '" + t + "'");
            vo.tolerances[t.substr(0, eq)] = std::stod(t.substr(eq + 1));
        }
        const VerifyReport rep = verify(vo);
        emit(format == "json" ? json_text(verify_json(rep)) : verify_table(rep), output);
        return rep.ok() ? ok : failure;
    } catch (const SchemaError& e) {
        std::cerr << "invalid problem: " << e.what() << "\n";
        return invalid;
    } catch (const InvariantViolation& e) {
        std::cerr << "invalid problem: " << e.what() << "\n";
        return invalid;
    } catch (const ParseError& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return invalid;
    } catch (const PreconditionError& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return invalid;
    } catch (const DivisionByZeroDenominator& e) {
        std::cerr << "resonance: " << e.what() << "\n";
        return resonance;
    } catch (const DichotomyFailure& e) {
        std::cerr << "dichotomy condition fails: " << e.what() << "\n";
        return dichotomy;
    } catch (const ContinuationRefused& e) {
        std::cerr << "continuation refused: " << e.what() << "\n";
        return refused;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return failure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return failure;
    }
}
