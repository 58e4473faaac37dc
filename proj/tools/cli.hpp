#pragma once

#include <json.hpp>

#include <optional>
#include <string>

#include "cubic_contest/bayes_equilibrium.hpp"
#include "cubic_contest/complete_info.hpp"
#include "cubic_contest/oracle.hpp"

namespace cli {

using nlohmann::json;

enum ExitCode { kOk = 0, kInvalidInput = 2, kSolverFailure = 3, kCheckFailure = 4 };

// A bound parameter set: complete information needs theta, bayes needs a prior.
struct Model {
    std::string kind;  // "complete" | "bayes"
    double a = 0.0, b = 1.0, c = 1.0;
    std::optional<double> theta;
    json dist_json;
    std::optional<cubic::TypeDistribution> dist;

    Model with_a(double a_new) const
    {
        Model m = *this;
        m.a = a_new;
        return m;
    }
};

json read_json_file(const std::string& path);
void write_output(const std::string& text, const std::string& out_path);

cubic::TypeDistribution distribution_from_json(const json& j, double c);

// Accepts either a solve output or a scenario bundle: {"model", "params", "dist"?}.
Model model_from_json(const json& j);
json model_to_json(const Model& m);

json solve_to_json(const Model& m);
json report_to_json(const cubic::VerificationReport& r);
cubic::VerificationReport verify_model(const Model& m, const cubic::VerifyOptions& opt);

struct SweepRow {
    double a;
    std::string regime;
    double E1, variance, dropout_rate, payoff;
};
SweepRow sweep_row(const Model& m);
std::string format_number(double v);  // 12 significant digits

// Returns the exit code; prints the table to `out` (stdout when empty).
int reproduce(const std::string& name, const std::string& scenario_dir, const std::string& format,
              const std::string& out);

}  // namespace cli
