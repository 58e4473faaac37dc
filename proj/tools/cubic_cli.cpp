// cubic: solve, sweep, verify and reproduce cubic-contest equilibria.

#include <CLI11.hpp>

#include <cstdio>
#include <sstream>

#include "cli.hpp"

using namespace cli;
using cubic::InvalidInput;
using cubic::require;

namespace {

void print_error(int code, const std::string& type, const std::string& message)
{
    const json err = {{"error", {{"code", code}, {"type", type}, {"message", message}}}};
    std::fprintf(stderr, "%s\n", err.dump().c_str());
}

struct ParamOpts {
    double a = 0.0, b = 1.0, c = 1.0, theta = 0.0;
    std::string dist_path;
};

void add_params(CLI::App* app, ParamOpts& p, bool with_a = true)
{
    if (with_a) app->add_option("--a", p.a, "curvature (suppression > 0, empowerment < 0)")->required();
    app->add_option("--b", p.b, "linear coefficient, b > 0")->required();
    app->add_option("--c", p.c, "pure prize sensitivity, c > 0")->required();
}

Model complete_model(const ParamOpts& p)
{
    Model m;
    m.kind = "complete";
    m.a = p.a, m.b = p.b, m.c = p.c, m.theta = p.theta;
    return m;
}

Model bayes_model(const ParamOpts& p)
{
    Model m;
    m.kind = "bayes";
    m.a = p.a, m.b = p.b, m.c = p.c;
    m.dist_json = read_json_file(p.dist_path);
    m.dist = distribution_from_json(m.dist_json, m.c);
    return m;
}

std::string sweep_output(const Model& base, double from, double to, int n, const std::string& format)
{
    require(n >= 2, "sweep needs --n >= 2");
    require(from < to, "sweep needs --from < --to");
    std::vector<SweepRow> rows;
    for (int i = 0; i < n; ++i) {
        const double a = i == n - 1 ? to : from + (to - from) * i / (n - 1);
        rows.push_back(sweep_row(base.with_a(a)));
    }
    if (format == "json") {
        json arr = json::array();
        for (const auto& r : rows)
            arr.push_back({{"a", r.a}, {"regime", r.regime}, {"E1", r.E1}, {"variance", r.variance},
                           {"dropout_rate", r.dropout_rate}, {"payoff", r.payoff}});
        return arr.dump(2) + "\n";
    }
    std::ostringstream os;
    os << "a,regime,E1,variance,dropout_rate,payoff\n";
    for (const auto& r : rows)
        os << format_number(r.a) << ',' << r.regime << ',' << format_number(r.E1) << ',' << format_number(r.variance)
           << ',' << format_number(r.dropout_rate) << ',' << format_number(r.payoff) << '\n';
    return os.str();
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Equilibria of the truncated cubic contest"};
    app.require_subcommand(1);
    std::string out, format;

    // solve
    auto* solve = app.add_subcommand("solve", "solve for an equilibrium and print it as JSON");
    solve->require_subcommand(1);
    ParamOpts sc, sb;
    auto* solve_c = solve->add_subcommand("complete", "complete information");
    add_params(solve_c, sc);
    solve_c->add_option("--theta", sc.theta, "common marginal cost")->required();
    auto* solve_b = solve->add_subcommand("bayes", "private costs drawn from a prior");
    add_params(solve_b, sb);
    solve_b->add_option("--dist", sb.dist_path, "distribution JSON file")->required()->check(CLI::ExistingFile);

    // sweep
    auto* sweep = app.add_subcommand("sweep", "sweep a and print one row per grid point");
    ParamOpts sw;
    std::string var = "a";
    double from = 0, to = 1;
    int n = 0;
    add_params(sweep, sw, false);
    sweep->add_option("--var", var, "swept parameter (only a)")->check(CLI::IsMember({"a"}));
    sweep->add_option("--from", from)->required();
    sweep->add_option("--to", to)->required();
    sweep->add_option("--n", n, "grid points, endpoints included")->required();
    auto* sw_theta = sweep->add_option("--theta", sw.theta, "complete information cost");
    auto* sw_dist = sweep->add_option("--dist", sw.dist_path, "distribution JSON file")->check(CLI::ExistingFile);
    sw_theta->excludes(sw_dist);

    // verify
    auto* verify = app.add_subcommand("verify", "check an equilibrium against the literal game");
    std::string scenario;
    ParamOpts vp;
    std::string model_kind;
    cubic::VerifyOptions vopt;
    double x_max = 0.0;
    verify->add_option("--scenario", scenario, "solve output or scenario JSON")->check(CLI::ExistingFile);
    verify->add_option("--model", model_kind, "complete|bayes for inline parameters")
        ->check(CLI::IsMember({"complete", "bayes"}));
    verify->add_option("--a", vp.a);
    verify->add_option("--b", vp.b);
    verify->add_option("--c", vp.c);
    verify->add_option("--theta", vp.theta);
    verify->add_option("--dist", vp.dist_path)->check(CLI::ExistingFile);
    verify->add_option("--grid-n", vopt.grid_n, "deviation grid intervals")->check(CLI::PositiveNumber);
    auto* xmax_opt = verify->add_option("--x-max", x_max, "upper end of the deviation grid")->check(CLI::PositiveNumber);
    verify->add_option("--type-sample", vopt.type_sample, "types checked on continuous priors")->check(CLI::PositiveNumber);

    // reproduce
    auto* repro = app.add_subcommand("reproduce", "recompute a named scenario against its expected values");
    std::string name, scenario_dir = "scenarios";
    repro->add_option("name", name, "scenario name")->required();
    repro->add_option("--scenario-dir", scenario_dir, "directory of scenario JSON files");

    for (auto* sub : {solve_c, solve_b, sweep, verify, repro}) {
        sub->add_option("--out", out, "output path (default stdout)");
        sub->add_option("--format", format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        print_error(kInvalidInput, "invalid_input", e.what());
        return kInvalidInput;
    }

    try {
        if (*solve) {
            require(format != "csv", "solve emits JSON only");
            const Model m = *solve_c ? complete_model(sc) : bayes_model(sb);
            write_output(solve_to_json(m).dump(2) + "\n", out);
            return kOk;
        }
        if (*sweep) {
            require(bool(*sw_theta) != bool(*sw_dist), "sweep needs exactly one of --theta or --dist");
            const Model m = *sw_theta ? complete_model(sw) : bayes_model(sw);
            write_output(sweep_output(m, from, to, n, format.empty() ? "csv" : format), out);
            return kOk;
        }
        if (*verify) {
            require(format != "csv", "verify emits JSON only");
            Model m;
            if (!scenario.empty()) {
                m = model_from_json(read_json_file(scenario));
            } else {
                require(!model_kind.empty(), "verify needs --scenario or --model with inline parameters");
                m = model_kind == "complete" ? complete_model(vp) : bayes_model(vp);
            }
            if (*xmax_opt) vopt.x_max = x_max;
            const auto rep = verify_model(m, vopt);
            json j = model_to_json(m);
            j["report"] = report_to_json(rep);
            j["passed"] = rep.max_gain < 1e-6;
            write_output(j.dump(2) + "\n", out);
            return rep.max_gain < 1e-6 ? kOk : kCheckFailure;
        }
        return reproduce(name, scenario_dir, format, out);
    } catch (const InvalidInput& e) {
        print_error(kInvalidInput, "invalid_input", e.what());
        return kInvalidInput;
    } catch (const json::exception& e) {
        print_error(kInvalidInput, "invalid_input", e.what());
        return kInvalidInput;
    } catch (const cubic::SolverError& e) {
        print_error(kSolverFailure, "solver_failure", e.what());
        return kSolverFailure;
    } catch (const std::exception& e) {
        print_error(kSolverFailure, "solver_failure", e.what());
        return kSolverFailure;
    }
}
