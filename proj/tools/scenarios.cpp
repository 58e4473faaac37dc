// Named scenarios: each file binds a parameter set and a table of expected
// quantities with tolerances and a source tag (reported, closed_form, computed).

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <sstream>

#include "cli.hpp"
#include "cubic_contest/comparative_statics.hpp"
#include "cubic_contest/numerics.hpp"

namespace cli {

using namespace cubic;

namespace {

struct Context {
    json bundle;  // model, params, dist after argument overrides
    json args;
    json sweep;   // {"from", "to", "n"}

    Model model() const { return model_from_json(bundle); }
    double arg(const char* key) const
    {
        require(args.contains(key), std::string("quantity needs argument '") + key + "'");
        return args[key].get<double>();
    }
    double arg_or(const char* key, double fallback) const { return args.contains(key) ? args[key].get<double>() : fallback; }
};

Eigen::VectorXd sweep_grid(const Context& ctx)
{
    require(ctx.sweep.is_object(), "scenario needs a 'sweep' block");
    const double from = ctx.sweep["from"], to = ctx.sweep["to"];
    const int n = ctx.sweep["n"];
    require(n >= 2 && from < to, "invalid sweep block");
    return Eigen::VectorXd::LinSpaced(n, from, to);
}

const TypeDistribution& prior(const Model& m)
{
    require(m.dist.has_value(), "quantity needs a bayes model");
    return *m.dist;
}

std::pair<double, double> delta_sigma(const Context& ctx, const Model& m)
{
    if (ctx.args.contains("Delta")) return {ctx.arg("Delta"), ctx.arg_or("sigma_sq", 0.0)};
    const auto mo = prior(m).moments();
    return {mo.Delta, mo.variance};
}

// Extrema of the constrained path ordered by a; cached per scenario bundle.
PathExtremum extremum(const Context& ctx)
{
    static std::map<std::string, std::vector<PathExtremum>> cache;
    const std::string key = ctx.bundle.dump() + ctx.sweep.dump();
    auto it = cache.find(key);
    if (it == cache.end()) {
        const Model m = ctx.model();
        auto ex = constrained_effort_path(m.b, m.c, prior(m), sweep_grid(ctx)).extrema;
        std::sort(ex.begin(), ex.end(), [](const auto& l, const auto& r) { return l.a < r.a; });
        it = cache.emplace(key, std::move(ex)).first;
    }
    const int i = int(ctx.arg("index"));
    require(i >= 0 && std::size_t(i) < it->second.size(), "extremum index out of range");
    return it->second[std::size_t(i)];
}

VerificationReport verify_at(const Model& m)
{
    static std::map<std::string, VerificationReport> cache;
    const std::string key = model_to_json(m).dump();
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, verify_model(m, VerifyOptions{})).first;
    return it->second;
}

const std::vector<SweepRow>& sweep_rows(const Context& ctx)
{
    static std::map<std::string, std::vector<SweepRow>> cache;
    const std::string key = ctx.bundle.dump() + ctx.sweep.dump();
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    const Model m = ctx.model();
    std::vector<SweepRow> rows;
    const auto grid = sweep_grid(ctx);
    for (Eigen::Index i = 0; i < grid.size(); ++i) rows.push_back(sweep_row(m.with_a(grid[i])));
    return cache.emplace(key, std::move(rows)).first->second;
}

// a at the index-th interior local extremum of E1 along the sweep.
double sweep_extremum(const Context& ctx, bool maximum)
{
    const auto& rows = sweep_rows(ctx);
    std::vector<double> hits;
    for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
        const double l = rows[i - 1].E1, v = rows[i].E1, r = rows[i + 1].E1;
        if (maximum ? (v > l && v >= r) : (v < l && v <= r)) hits.push_back(rows[i].a);
    }
    const int k = int(ctx.arg_or("index", 0));
    require(k >= 0 && std::size_t(k) < hits.size(), "no such local extremum on the sweep");
    return hits[std::size_t(k)];
}

// a at the index-th regime change along the sweep (midpoint of the bracketing rows).
double regime_transition(const Context& ctx)
{
    const auto& rows = sweep_rows(ctx);
    std::vector<double> hits;
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].regime != rows[i - 1].regime) hits.push_back(0.5 * (rows[i].a + rows[i - 1].a));
    const int k = int(ctx.arg_or("index", 0));
    require(k >= 0 && std::size_t(k) < hits.size(), "no such regime transition on the sweep");
    return hits[std::size_t(k)];
}

// Width h/Delta of the mean-preserving uniform prior at which a_D = b^2/Delta.
double boundary_h_ratio(const Context& ctx)
{
    const Model m = ctx.model();
    const double M1 = prior(m).moments().M1, Delta = m.c - M1;
    auto gap = [&](double h) {
        return dropout_threshold(m.b, m.c, TypeDistribution(Uniform{M1 - h / 2, M1 + h / 2}, m.c)) - m.b * m.b / Delta;
    };
    const double hmax = std::min(2 * M1, 2 * Delta);
    return numerics::find_root(gap, 1e-9 * hmax, hmax * (1 - 1e-12)) / Delta;
}

using Eval = std::function<double(const Context&)>;

const std::map<std::string, Eval>& registry()
{
    static const std::map<std::string, Eval> r = {
        {"prior_M1", [](const Context& c) { return prior(c.model()).moments().M1; }},
        {"prior_variance", [](const Context& c) { return prior(c.model()).moments().variance; }},
        {"prior_Delta", [](const Context& c) { return prior(c.model()).moments().Delta; }},
        {"a_D", [](const Context& c) { const Model m = c.model(); return dropout_threshold(m.b, m.c, prior(m)); }},
        {"boundary_h_ratio", boundary_h_ratio},
        {"a_dagger",
         [](const Context& c) {
             const Model m = c.model();
             const auto [D, v] = delta_sigma(c, m);
             return peak_a(m.b, D, v).a_dagger;
         }},
        {"E1_at_a_dagger",
         [](const Context& c) {
             const Model m = c.model();
             const auto [D, v] = delta_sigma(c, m);
             return expected_effort_of_a(peak_a(m.b, D, v).a_dagger, m.b, D, v);
         }},
        {"a_dagger_at_rho",
         [](const Context& c) {
             const Model m = c.model();
             const double D = c.arg_or("Delta", 1.0);
             return peak_a(m.b, D, c.arg("rho") * D * D).a_dagger;
         }},
        {"positivity_boundary",
         [](const Context& c) {
             const Model m = c.model();
             const auto [D, v] = delta_sigma(c, m);
             return positivity_boundary(m.b, D, v);
         }},
        {"affine_E1",
         [](const Context& c) {
             const Model m = c.model();
             const auto [D, v] = delta_sigma(c, m);
             return expected_effort_of_a(c.arg_or("a", m.a), m.b, D, v);
         }},
        {"y1", [](const Context& c) { return peak_variance_thresholds(c.arg_or("Delta", 1.0)).y1; }},
        {"y2", [](const Context& c) { return peak_variance_thresholds(c.arg_or("Delta", 1.0)).y2; }},
        {"rho1", [](const Context& c) { return peak_variance_thresholds(c.arg_or("Delta", 1.0)).rho1; }},
        {"rho2", [](const Context& c) { return peak_variance_thresholds(c.arg_or("Delta", 1.0)).rho2; }},
        {"extremum_s", [](const Context& c) { return extremum(c).s; }},
        {"extremum_a", [](const Context& c) { return extremum(c).a; }},
        {"extremum_E1", [](const Context& c) { return extremum(c).E1; }},
        {"extremum_F", [](const Context& c) { return extremum(c).F; }},
        {"extremum_max_gain", [](const Context& c) { return verify_at(c.model().with_a(extremum(c).a)).max_gain; }},
        {"extremum_p_min",
         [](const Context& c) { return verify_at(c.model().with_a(extremum(c).a)).probability_range_on_path.first; }},
        {"extremum_p_max",
         [](const Context& c) { return verify_at(c.model().with_a(extremum(c).a)).probability_range_on_path.second; }},
        {"E1", [](const Context& c) { return sweep_row(c.model()).E1; }},
        {"variance", [](const Context& c) { return sweep_row(c.model()).variance; }},
        {"dropout_rate", [](const Context& c) { return sweep_row(c.model()).dropout_rate; }},
        {"total_effort",
         [](const Context& c) {
             const Model m = c.model();
             require(m.theta.has_value(), "total_effort needs a complete model");
             return total_effort(m.a, m.b, m.c, *m.theta);
         }},
        {"effort_argmax",
         [](const Context& c) {
             const Model m = c.model();
             const auto curve = effort_curve(m.b, m.c, m.theta.value(), sweep_grid(c));
             return curve.a[curve.argmax];
         }},
        {"effort_peak",
         [](const Context& c) {
             const Model m = c.model();
             const auto curve = effort_curve(m.b, m.c, m.theta.value(), sweep_grid(c));
             return curve.total[curve.argmax];
         }},
        {"sweep_local_max_a", [](const Context& c) { return sweep_extremum(c, true); }},
        {"sweep_local_min_a", [](const Context& c) { return sweep_extremum(c, false); }},
        {"regime_transition_a", regime_transition},
        {"max_gain", [](const Context& c) { return verify_at(c.model()).max_gain; }},
    };
    return r;
}

json apply_overrides(json bundle, const json& args)
{
    for (const char* key : {"a", "b", "c", "theta"})
        if (args.contains(key)) bundle["params"][key] = args[key];
    if (args.contains("model")) bundle["model"] = args["model"];
    if (args.contains("dist")) bundle["dist"] = args["dist"];
    return bundle;
}

}  // namespace

int reproduce(const std::string& name, const std::string& scenario_dir, const std::string& format,
              const std::string& out)
{
    const auto path = std::filesystem::path(scenario_dir) / (name + ".json");
    require(std::filesystem::exists(path), "unknown scenario '" + name + "' (no " + path.string() + ")");
    const json bundle_file = read_json_file(path.string());
    require(bundle_file.contains("expected") && bundle_file["expected"].is_array(), "scenario has no 'expected' table");

    json base = {{"model", bundle_file.at("model")}, {"params", bundle_file.at("params")}};
    if (bundle_file.contains("dist")) base["dist"] = bundle_file["dist"];

    json rows = json::array();
    bool all = true;
    for (const auto& e : bundle_file["expected"]) {
        const std::string q = e.at("quantity");
        const std::string source = e.at("source");
        require(source == "reported" || source == "closed_form" || source == "computed",
                "quantity '" + q + "' has unknown source '" + source + "'");
        const auto it = registry().find(q);
        require(it != registry().end(), "unknown quantity '" + q + "'");
        Context ctx;
        ctx.args = e.value("args", json::object());
        ctx.bundle = apply_overrides(base, ctx.args);
        ctx.sweep = bundle_file.value("sweep", json());
        const double want = e.at("value"), tol = e.at("tol");
        const double got = it->second(ctx);
        const bool ok = std::fabs(got - want) <= tol;
        all = all && ok;
        rows.push_back({{"quantity", q}, {"args", ctx.args}, {"actual", got}, {"expected", want},
                        {"tol", tol}, {"source", source}, {"pass", ok}});
    }

    std::ostringstream os;
    if (format == "json") {
        os << json{{"scenario", name}, {"passed", all}, {"rows", rows}}.dump(2) << '\n';
    } else if (format == "csv") {
        os << "quantity,args,actual,expected,tol,source,pass\n";
        for (const auto& r : rows) {
            std::string args = r["args"].dump();
            for (char& ch : args)
                if (ch == ',') ch = ';';
            os << r["quantity"].get<std::string>() << ',' << args << ',' << format_number(r["actual"]) << ','
               << format_number(r["expected"]) << ',' << format_number(r["tol"]) << ','
               << r["source"].get<std::string>() << ',' << (r["pass"].get<bool>() ? "PASS" : "FAIL") << '\n';
        }
    } else {
        char buf[512];
        std::snprintf(buf, sizeof buf, "%-22s %-28s %20s %20s %9s %-12s %s\n", "quantity", "args", "actual", "expected",
                      "tol", "source", "");
        os << "scenario " << name << '\n' << buf;
        for (const auto& r : rows) {
            std::string args = r["args"].empty() ? "" : r["args"].dump();
            if (args.size() > 28) args = args.substr(0, 25) + "...";
            std::snprintf(buf, sizeof buf, "%-22s %-28s %20.12g %20.12g %9.1e %-12s %s\n",
                          r["quantity"].get<std::string>().c_str(), args.c_str(), r["actual"].get<double>(),
                          r["expected"].get<double>(), r["tol"].get<double>(), r["source"].get<std::string>().c_str(),
                          r["pass"].get<bool>() ? "PASS" : "FAIL");
            os << buf;
        }
        os << (all ? "all expectations met\n" : "some expectations FAILED\n");
    }
    write_output(os.str(), out);
    return all ? kOk : kCheckFailure;
}

}  // namespace cli
