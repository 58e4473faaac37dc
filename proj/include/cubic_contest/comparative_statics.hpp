#pragma once

#include <Eigen/Core>

#include <optional>
#include <vector>

#include "cubic_contest/bayes_equilibrium.hpp"
#include "cubic_contest/type_model.hpp"

namespace cubic {

inline constexpr double kGoldenRatio = 1.6180339887498948482;

// E1 as a function of a for fixed (b, Delta, sigma^2); continuous at a = 0.
double expected_effort_of_a(double a, double b, double Delta, double sigma_sq);

// g(y) = y^3 (2 - y) / (y^2 - y - 1)^2, capped at 1e18 near y = phi.
double peak_g(double y);

// Cubic from the threshold analysis, q(y) = 2y^3 - 8y^2 + 8y - 1.
double peak_q(double y);

// Normalized peak xi = Delta a / b^2 via the two routes.
double xi_minus(double rho, double y);
double peak_A(double y);

struct PeakResult {
    double a_dagger;         // (b^2 / Delta) xi_-(y)
    double a_dagger_closed;  // (b^2 / Delta) A(rho)
    double y_dagger;
    double rho;
    double upper_bound;      // 2 b^2 Delta / (Delta^2 + sigma^2)
};

PeakResult peak_a(double b, double Delta, double sigma_sq);

double positivity_boundary(double b, double Delta, double sigma_sq);

struct PeakVarianceThresholds {
    double y1, y2;
    double rho1, rho2;
    double sigma1_sq, sigma2_sq;
};

PeakVarianceThresholds peak_variance_thresholds(double Delta);

enum class DisclosurePolicy { NoDisclosure, FullDisclosure, Indifferent };

struct DisclosureChoice {
    DisclosurePolicy policy;
    int direction;  // sign of dE1/dVar(posterior mean)
};

DisclosureChoice optimal_disclosure(double a);

// E1 at the posterior-mean distribution induced by `signal`. A degenerate
// posterior uses the sigma^2 -> 0 limit of the affine closed form.
double expected_effort_under_signal(double a, double b, double c, const TypeDistribution& dist,
                                    const SignalStructure& signal);

struct SignalCheck {
    bool fully_active;
    bool truncation_ok;
};

struct DisclosureReport {
    bool certified;
    std::vector<SignalCheck> signals;
    std::optional<std::size_t> first_offending;
};

DisclosureReport disclosure_literal_check(double a, double b, double c, const TypeDistribution& dist,
                                          const std::vector<SignalStructure>& signals);

struct PathExtremum {
    double s;  // normalized cutoff (t - alpha) / (beta - alpha); 1 on the fully active stretch
    double a, E1, F;
    bool maximum;
    bool fully_active;
};

struct EffortPath {
    Eigen::VectorXd a;
    Eigen::VectorXd E1;
    std::vector<PathExtremum> extrema;
};

// R(s) = F/A + 2(c - t)F/D - 2A/B at t = alpha + (beta - alpha) s.
double path_log_derivative(double c, const TypeDistribution& dist, double s);

EffortPath constrained_effort_path(double b, double c, const TypeDistribution& dist,
                                   const Eigen::VectorXd& a_grid, int s_scan = 4000);

}  // namespace cubic
