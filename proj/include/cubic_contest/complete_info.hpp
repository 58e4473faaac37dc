#pragma once

#include <Eigen/Core>

#include <optional>
#include <variant>

#include "cubic_contest/contest_core.hpp"

namespace cubic {

struct CompleteInfoProblem {
    ContestTechnology tech;
    double theta;

    CompleteInfoProblem(const ContestTechnology& t, double theta_);

    double kappa() const { return tech.kappa(); }
    double zeta() const;  // (b^2 - a(c - theta)) / a^2
    double s() const;     // sqrt(-zeta), mixed region only
    bool mixed_region() const { return tech.a != 0.0 && zeta() < 0.0; }
};

enum class Branch { Symmetric, Endpoint };

struct TwoPointRepresentation {
    double low, high;
    double p_low, p_high;
    Branch branch;

    double mean() const { return p_low * low + p_high * high; }
    double variance() const;
};

struct PureSymmetric {
    double x_star;
    double payoff;
};

struct MixedMoments {
    double mean;
    double variance;
    TwoPointRepresentation representation;
    double payoff;
};

using CompleteInfoEquilibrium = std::variant<PureSymmetric, MixedMoments>;

CompleteInfoEquilibrium solve_complete(const CompleteInfoProblem& pr);

TwoPointRepresentation canonical_two_point(const CompleteInfoProblem& pr);

bool participation_check(const CompleteInfoProblem& pr, const CompleteInfoEquilibrium& eq);

enum class Admissibility { Admissible, NotAdmissible, Inapplicable };

// Endpoint-branch cutoff; empty when the radicand b(b - 2c theta + 2 theta^2) < 0.
std::optional<double> a_bar_M(double b, double c, double theta);

Admissibility branch_admissibility(const CompleteInfoProblem& pr, const TwoPointRepresentation& rep);

bool simple_sufficient_check(const CompleteInfoProblem& pr);

bool local_support_check(const CompleteInfoProblem& pr, const TwoPointRepresentation& rep);

// Interior best response (a y^2 - (c - theta)) / (2(a y - b)); empty when a y >= b.
std::optional<double> best_response_interior(const CompleteInfoProblem& pr, double y);

// Second derivative of the interior branch: a(b^2 - a(c - theta)) / (a y - b)^3.
double best_response_curvature(const CompleteInfoProblem& pr, double y);

struct EffortCurve {
    Eigen::VectorXd a;
    Eigen::VectorXd total;  // expected total effort of both players
    Eigen::Index argmax;
};

// Total expected effort: 2x* on the pure side, 2b/a on the mixed side.
double total_effort(double a, double b, double c, double theta);

EffortCurve effort_curve(double b, double c, double theta, const Eigen::VectorXd& a_grid);

// Expected truncated payoff of `deviation` against rep, minus 1/2 - theta kappa.
double failure_deviation_scan(const CompleteInfoProblem& pr, const TwoPointRepresentation& rep,
                              double deviation);

struct FailureScan {
    double max_gain;
    double argmax_deviation;
};

// Deviations x = lambda / a with lambda on an n-point grid of (b, 1000 b].
FailureScan failure_scan(const CompleteInfoProblem& pr, const TwoPointRepresentation& rep,
                         int n = 10000);

}  // namespace cubic
