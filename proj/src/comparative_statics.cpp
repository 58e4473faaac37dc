#include "cubic_contest/comparative_statics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cubic_contest/errors.hpp"
#include "cubic_contest/numerics.hpp"

namespace cubic {

namespace {

constexpr double kGCap = 1e18;
constexpr double kPsi = 1.0 - kGoldenRatio;  // other root of y^2 - y - 1

}  // namespace

double expected_effort_of_a(double a, double b, double Delta, double sigma_sq)
{
    require(b > 0.0 && Delta > 0.0 && sigma_sq >= 0.0, "expected_effort_of_a: need b, Delta > 0 and sigma^2 >= 0");
    return affine_moments(a, b, Delta, sigma_sq).E1;
}

double peak_g(double y)
{
    // Factored near phi, where y^2 - y - 1 cancels.
    const double f = std::fabs(y - kGoldenRatio) < 0.25 ? (y - kGoldenRatio) * (y - kPsi) : (y - 1.0) * y - 1.0;
    const double den = f * f;
    const double num = y * y * y * (2.0 - y);
    if (den == 0.0 || num >= kGCap * den) return kGCap;
    return num / den;
}

double peak_q(double y)
{
    return ((2.0 * y - 8.0) * y + 8.0) * y - 1.0;
}

double xi_minus(double rho, double y)
{
    const double u = std::sqrt(std::max(0.0, y * y + rho * (y * y - 1.0)));
    return 2.0 * y * (1.0 - y * y) / (y + u);
}

double peak_A(double y)
{
    return 2.0 * (1.0 - y) * (1.0 + y - y * y) / (2.0 - y);
}

PeakResult peak_a(double b, double Delta, double sigma_sq)
{
    require(b > 0.0 && Delta > 0.0, "peak_a: need b, Delta > 0");
    require(sigma_sq > 0.0, "peak_a: need sigma^2 > 0");
    const double rho = sigma_sq / (Delta * Delta);
    const double y = numerics::find_root([rho](double v) { return peak_g(v) - rho; }, 1e-12,
                                         kGoldenRatio - 1e-12);
    const double scale = b * b / Delta;
    return {scale * xi_minus(rho, y), scale * peak_A(y), y, rho,
            2.0 * b * b * Delta / (Delta * Delta + sigma_sq)};
}

double positivity_boundary(double b, double Delta, double sigma_sq)
{
    require(sigma_sq > 0.0, "positivity_boundary: need sigma^2 > 0");
    return 4.0 * b * b * Delta / sigma_sq;
}

PeakVarianceThresholds peak_variance_thresholds(double Delta)
{
    require(Delta > 0.0, "peak_variance_thresholds: need Delta > 0");
    PeakVarianceThresholds r{};
    r.y1 = numerics::find_root(peak_q, 0.0, 2.0 / 3.0, 1e-13);
    r.y2 = numerics::find_root(peak_q, 1.0, kGoldenRatio, 1e-13);
    r.rho1 = peak_g(r.y1);
    r.rho2 = peak_g(r.y2);
    r.sigma1_sq = r.rho1 * Delta * Delta;
    r.sigma2_sq = r.rho2 * Delta * Delta;
    return r;
}

DisclosureChoice optimal_disclosure(double a)
{
    if (a > 0.0) return {DisclosurePolicy::NoDisclosure, -1};
    if (a < 0.0) return {DisclosurePolicy::FullDisclosure, 1};
    return {DisclosurePolicy::Indifferent, 0};
}

double expected_effort_under_signal(double a, double b, double c, const TypeDistribution& dist,
                                    const SignalStructure& signal)
{
    const Moments m = posterior_mean_distribution(dist, signal).moments();
    return expected_effort_of_a(a, b, c - m.M1, m.variance);
}

namespace {

// Affine rule for a posterior-mean prior, or empty if it is not fully active.
std::optional<AffineBNE> fully_active_rule(double a, double b, double c, const TypeDistribution& post)
{
    const Moments m = post.moments();
    if (m.variance == 0.0 && a != 0.0) {
        // Complete-information limit: pure play at the stable root, or mixing.
        const double k = c - m.M1, disc = b * b - a * k;
        if (disc < 0.0) return std::nullopt;
        AffineBNE r{};
        r.k = 0.0;
        r.d = r.E1 = k / (b + std::sqrt(disc));
        r.M1 = m.M1;
        r.M2 = m.M2;
        return r;
    }
    const auto eq = solve_bayes(a, b, c, post);
    if (const auto* aff = std::get_if<AffineBNE>(&eq)) return *aff;
    return std::nullopt;
}

}  // namespace

DisclosureReport disclosure_literal_check(double a, double b, double c, const TypeDistribution& dist,
                                          const std::vector<SignalStructure>& signals)
{
    DisclosureReport rep{true, {}, std::nullopt};
    for (std::size_t i = 0; i < signals.size(); ++i) {
        const auto post = posterior_mean_distribution(dist, signals[i]);
        const auto rule = fully_active_rule(a, b, c, post);
        SignalCheck chk{a <= 0.0 || rule.has_value(), false};
        if (rule) chk.truncation_ok = truncation_check_support(a, b, c, post.alpha(), post.beta(), *rule);
        rep.signals.push_back(chk);
        if (!(chk.fully_active && chk.truncation_ok)) {
            rep.certified = false;
            if (!rep.first_offending) rep.first_offending = i;
        }
    }
    return rep;
}

double path_log_derivative(double c, const TypeDistribution& dist, double s)
{
    const double t = dist.alpha() + (dist.beta() - dist.alpha()) * s;
    const auto l = dist.lower_partial(t);
    return l.F / l.A + 2.0 * (c - t) * l.F / l.D - 2.0 * l.A / l.B;
}

EffortPath constrained_effort_path(double b, double c, const TypeDistribution& dist,
                                   const Eigen::VectorXd& a_grid, int s_scan)
{
    require(dist.atomless(), "constrained_effort_path: requires an atomless prior");
    require(s_scan >= 2, "constrained_effort_path: scan too coarse");
    EffortPath out{a_grid, Eigen::VectorXd(a_grid.size()), {}};
    for (Eigen::Index i = 0; i < a_grid.size(); ++i)
        out.E1[i] = std::visit([](const auto& e) { return e.E1; }, solve_bayes(a_grid[i], b, c, dist));

    const double alpha = dist.alpha(), h = dist.beta() - alpha;
    auto R = [&](double s) { return path_log_derivative(c, dist, s); };
    auto record = [&](double s, bool maximum) {
        const double t = alpha + h * s;
        const auto l = dist.lower_partial(t);
        out.extrema.push_back({s, a_F(b, c, dist, t), l.A * l.D / (2.0 * b * l.B), l.F, maximum, false});
    };

    double s_prev = 0.0, r_prev = std::numeric_limits<double>::quiet_NaN();
    for (int i = 1; i < s_scan; ++i) {
        const double s = double(i) / s_scan, r = R(s);
        if (!std::isfinite(r)) continue;
        if (std::isfinite(r_prev) && (r > 0.0) != (r_prev > 0.0))
            record(numerics::find_root(R, s_prev, s, 1e-15), r_prev > 0.0);
        s_prev = s;
        r_prev = r;
    }

    const Moments m = dist.moments();
    const PeakResult pk = peak_a(b, m.Delta, m.variance);
    if (pk.a_dagger <= dropout_threshold(b, c, dist))
        out.extrema.push_back({1.0, pk.a_dagger, expected_effort_of_a(pk.a_dagger, b, m.Delta, m.variance),
                               1.0, true, true});
    return out;
}

}  // namespace cubic
