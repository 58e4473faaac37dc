#include "cubic_contest/complete_info.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cubic {

CompleteInfoProblem::CompleteInfoProblem(const ContestTechnology& t, double theta_)
    : tech(t), theta(theta_)
{
    require(theta > 0.0 && theta < tech.c, "complete info: need 0 < theta < c");
}

double CompleteInfoProblem::zeta() const
{
    const double a = tech.a;
    require(a != 0.0, "complete info: zeta is undefined at a = 0");
    return (tech.b * tech.b - a * (tech.c - theta)) / (a * a);
}

double CompleteInfoProblem::s() const
{
    const double z = zeta();
    require(z < 0.0, "complete info: s is defined only when zeta < 0");
    return std::sqrt(-z);
}

double TwoPointRepresentation::variance() const
{
    const double m = mean();
    return p_low * (low - m) * (low - m) + p_high * (high - m) * (high - m);
}

CompleteInfoEquilibrium solve_complete(const CompleteInfoProblem& pr)
{
    const double a = pr.tech.a, b = pr.tech.b, k = pr.tech.c - pr.theta;
    const double disc = b * b - a * k;
    if (a == 0.0 || disc >= 0.0) {
        // k / (b + sqrt(disc)) is the stable root of a x^2 - 2 b x + k = 0 for
        // either sign of a and reduces to k / (2b) at a = 0.
        const double x = k / (b + std::sqrt(disc));
        return PureSymmetric{x, 0.5 - pr.theta * x};
    }
    const double kap = pr.kappa();
    return MixedMoments{kap, -pr.zeta(), canonical_two_point(pr), 0.5 - pr.theta * kap};
}

TwoPointRepresentation canonical_two_point(const CompleteInfoProblem& pr)
{
    const double a = pr.tech.a, b = pr.tech.b, k = pr.tech.c - pr.theta;
    require(a > 0.0, "two-point: requires a > 0");
    require(pr.zeta() < 0.0, "two-point: requires zeta < 0");
    if (a <= 2.0 * b * b / k) {
        const double kap = pr.kappa(), s = pr.s();
        return {kap - s, kap + s, 0.5, 0.5, Branch::Symmetric};
    }
    const double p = b * b / (a * k);
    return {0.0, k / b, 1.0 - p, p, Branch::Endpoint};
}

bool participation_check(const CompleteInfoProblem&, const CompleteInfoEquilibrium& eq)
{
    return std::visit([](const auto& e) { return e.payoff >= 0.0; }, eq);
}

std::optional<double> a_bar_M(double b, double c, double theta)
{
    const double rad = b * (b - 2.0 * c * theta + 2.0 * theta * theta);
    if (rad < 0.0) return std::nullopt;
    const double k = c - theta;
    return (b + c * c - 3.0 * c * theta + 2.0 * theta * theta + std::sqrt(rad)) * b * b / (k * k * k);
}

Admissibility branch_admissibility(const CompleteInfoProblem& pr, const TwoPointRepresentation& rep)
{
    const auto& t = pr.tech;
    if (rep.branch == Branch::Symmetric) {
        const double kap = pr.kappa(), s = pr.s();
        const double xbar = std::max(0.0, kap - pr.theta / (2.0 * t.a * s));
        const bool ok = raw_probability(t, 0.0, kap - s) >= 0.0 &&
                        raw_probability(t, xbar, kap + s) >= 0.0;
        return ok ? Admissibility::Admissible : Admissibility::NotAdmissible;
    }
    const auto am = a_bar_M(t.b, t.c, pr.theta);
    if (!am) return Admissibility::Inapplicable;
    return t.a <= *am ? Admissibility::Admissible : Admissibility::NotAdmissible;
}

bool simple_sufficient_check(const CompleteInfoProblem& pr)
{
    const auto& t = pr.tech;
    if (!(pr.theta < t.c && t.c <= 2.0 * pr.theta)) return false;
    if (t.b < t.c * t.c / 2.0) return false;
    if (!pr.mixed_region()) return false;
    const auto am = a_bar_M(t.b, t.c, pr.theta);
    return am && t.a <= *am;
}

bool local_support_check(const CompleteInfoProblem& pr, const TwoPointRepresentation& rep)
{
    if (rep.branch == Branch::Symmetric) return pr.s() < 1.0 / (4.0 * pr.theta);
    return pr.tech.b > 2.0 * pr.theta * (pr.tech.c - pr.theta);
}

std::optional<double> best_response_interior(const CompleteInfoProblem& pr, double y)
{
    const double a = pr.tech.a, b = pr.tech.b;
    if (a * y >= b) return std::nullopt;
    return (a * y * y - (pr.tech.c - pr.theta)) / (2.0 * (a * y - b));
}

double best_response_curvature(const CompleteInfoProblem& pr, double y)
{
    const double a = pr.tech.a, b = pr.tech.b;
    const double g = a * y - b;
    return a * (b * b - a * (pr.tech.c - pr.theta)) / (g * g * g);
}

double total_effort(double a, double b, double c, double theta)
{
    const double k = c - theta, disc = b * b - a * k;
    if (a == 0.0 || disc >= 0.0) return 2.0 * k / (b + std::sqrt(disc));
    return 2.0 * b / a;
}

EffortCurve effort_curve(double b, double c, double theta, const Eigen::VectorXd& a_grid)
{
    require(a_grid.size() > 0, "effort_curve: empty grid");
    EffortCurve out{a_grid, Eigen::VectorXd(a_grid.size()), 0};
    for (Eigen::Index i = 0; i < a_grid.size(); ++i) {
        out.total[i] = total_effort(a_grid[i], b, c, theta);
        if (out.total[i] > out.total[out.argmax]) out.argmax = i;
    }
    return out;
}

double failure_deviation_scan(const CompleteInfoProblem& pr, const TwoPointRepresentation& rep,
                              double deviation)
{
    const auto& t = pr.tech;
    const double win = rep.p_low * truncated_probability(t, deviation, rep.low) +
                       rep.p_high * truncated_probability(t, deviation, rep.high);
    return win - pr.theta * deviation - (0.5 - pr.theta * pr.kappa());
}

FailureScan failure_scan(const CompleteInfoProblem& pr, const TwoPointRepresentation& rep, int n)
{
    require(n >= 1, "failure_scan: n must be positive");
    const double a = pr.tech.a, b = pr.tech.b;
    FailureScan best{-std::numeric_limits<double>::infinity(), 0.0};
    for (int i = 1; i <= n; ++i) {
        const double x = (b + 999.0 * b * i / n) / a;
        const double g = failure_deviation_scan(pr, rep, x);
        if (g > best.max_gain) best = {g, x};
    }
    return best;
}

}  // namespace cubic
