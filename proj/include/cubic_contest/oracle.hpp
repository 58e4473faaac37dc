#pragma once

// Brute-force checks against the literal (clamped) game.

#include <Eigen/Core>

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cubic_contest/bayes_equilibrium.hpp"
#include "cubic_contest/complete_info.hpp"
#include "cubic_contest/contest_core.hpp"
#include "cubic_contest/type_model.hpp"

namespace cubic {

struct PureAction {
    double x;
};

struct FiniteMixture {
    Eigen::VectorXd points;
    Eigen::VectorXd probs;
};

// Effort as a function of type. The rule must be monotone between
// consecutive breakpoints; crossings are located by inverting it there.
struct TypeRule {
    std::function<double(double)> rule;
    std::vector<double> breakpoints;
};

using StrategyProfile = std::variant<PureAction, FiniteMixture, TypeRule>;

struct QuadratureOptions {
    int nodes = 256;
    int max_doublings = 4;
    double tol = 1e-11;
};

struct QuadratureInfo {
    std::string scheme;
    int nodes = 0;
    double est_error = 0.0;
};

// Distribution of the opponent's effort Y, built once and reused for every
// deviation. Finite laws are exact sums; continuous ones use composite
// Gauss-Legendre in type space.
class OpponentLaw {
public:
    OpponentLaw(const ContestTechnology& tech, const StrategyProfile& profile,
                const TypeDistribution* dist = nullptr, QuadratureOptions q = {});

    // E[P(x, Y)], clamped inside the expectation when `truncated`.
    double win_probability(double x, bool truncated) const;

    double mean() const { return m1_; }
    double second_moment() const { return m2_; }
    std::pair<double, double> effort_range() const { return {ymin_, ymax_}; }
    const QuadratureInfo& quadrature() const { return info_; }

private:
    struct Piece {
        double lo, hi;
    };

    double clip_correction(double x) const;
    double integrate_adaptive(const std::function<double(double)>& f, double lo, double hi) const;

    ContestTechnology tech_;
    QuadratureOptions opts_;
    QuadratureInfo info_;
    std::vector<std::pair<double, double>> atoms_;  // (effort, probability)
    std::optional<TypeDistribution> dist_;
    std::function<double(double)> rule_;
    std::vector<Piece> pieces_;
    double m1_ = 0.0, m2_ = 0.0;
    double ymin_ = 0.0, ymax_ = 0.0;
};

double interim_payoff(const ContestTechnology& tech, double theta, double action,
                      const OpponentLaw& opponent, bool truncated);

double interim_payoff(const ContestTechnology& tech, double theta, double action,
                      const StrategyProfile& opponent, const TypeDistribution* dist, bool truncated,
                      QuadratureOptions q = {});

struct DeviationGrid {
    double lo = 0.0;
    double hi = 1.0;
    int n = 10000;  // intervals; n + 1 points
};

struct BestResponse {
    double argmax;
    double value;
};

BestResponse best_response_scan(const ContestTechnology& tech, double theta, const OpponentLaw& opponent,
                                bool truncated, const DeviationGrid& grid, bool refine = true);

struct VerificationReport {
    double max_gain = 0.0;
    double argmax_deviation = 0.0;
    std::optional<double> argmax_type;
    DeviationGrid grid;
    QuadratureInfo quadrature;
    bool truncation_active_on_path = false;
    std::pair<double, double> probability_range_on_path{0.5, 0.5};

    static constexpr double kZeroEquivalent = 1e-8;
    bool zero_equivalent() const { return max_gain < kZeroEquivalent; }
};

struct VerifyOptions {
    int grid_n = 10000;
    std::optional<double> x_max;  // default 1/theta or 1/alpha
    bool truncated = true;
    bool refine = true;
    int type_sample = 21;  // continuous priors only; discrete priors check every atom
    QuadratureOptions quad;
};

StrategyProfile opponent_profile(const CompleteInfoEquilibrium& eq);
StrategyProfile opponent_profile(const BayesEquilibrium& eq);

VerificationReport verify_equilibrium(const CompleteInfoProblem& pr, const CompleteInfoEquilibrium& eq,
                                      const VerifyOptions& opt = {});

VerificationReport verify_equilibrium(double a, double b, double c, const TypeDistribution& dist,
                                      const BayesEquilibrium& eq, const VerifyOptions& opt = {});

enum class FdTarget { CrossPartial, E1Omega, E1Variance };

struct FdPoint {
    double a = 0.0, b = 1.0, c = 1.0;
    double x = 0.0, y = 0.0;        // CrossPartial
    double Delta = 0.5, sigma_sq = 0.1;  // E1Omega, E1Variance
};

struct FdResult {
    double analytic, numeric, abs_err;
};

// dE1/domega = -sgn(a) / (4 sqrt2 sqrt(zeta^2 + omega) sqrt(zeta + sqrt(zeta^2 + omega))).
double e1_omega_derivative(double a, double b, double Delta, double sigma_sq);

FdResult finite_difference_check(FdTarget target, const FdPoint& point, double step);

}  // namespace cubic
