#include "cubic_contest/bayes_equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "cubic_contest/contest_core.hpp"
#include "cubic_contest/errors.hpp"
#include "cubic_contest/numerics.hpp"

namespace cubic {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kScan = 4000;

void check_prior(double b, double c, const TypeDistribution& dist)
{
    require(b > 0.0, "bayes: b must be positive");
    require(c > 0.0, "bayes: c must be positive");
    require(dist.c() == c, "bayes: prior was built for a different c");
}

}  // namespace

AffineMoments affine_moments(double a, double b, double Delta, double sigma_sq)
{
    const double W = b * b - Delta * a;
    const double sa2 = sigma_sq * a * a;
    const double v = std::sqrt(W * W + sa2);
    const double u = b * b + Delta * a;
    const double w_plus_v = W >= 0.0 ? W + v : sa2 / (v - W);
    const double Y = std::sqrt(0.5 * w_plus_v);
    const double E1 = (4.0 * b * b * Delta - sigma_sq * a) / (2.0 * (u + v) * (b + Y));
    const double var = W > 0.0 ? sigma_sq / (2.0 * (v + W)) : (v - W) / (2.0 * a * a);
    return {E1, var, Y};
}

AffineBNE affine_bne(double a, double b, double c, const TypeDistribution& dist)
{
    check_prior(b, c, dist);
    const Moments m = dist.moments();
    const double delta = c - m.M1;
    require(a == 0.0 || m.variance > 0.0,
            "affine_bne: degenerate prior with a != 0; use the complete-information solver");
    const AffineMoments am = affine_moments(a, b, delta, m.variance);
    AffineBNE r{};
    r.k = -1.0 / (2.0 * am.Y);
    r.d = am.E1 - r.k * m.M1;
    r.E1 = am.E1;
    r.variance = am.variance;
    r.M1 = m.M1;
    r.M2 = m.M2;
    if (a != 0.0) {
        r.kappa = b / a;
        r.zeta = (b * b - a * delta) / (a * a);
        r.omega = m.variance / (a * a);
    } else {
        r.kappa = r.zeta = r.omega = kNaN;
    }
    return r;
}

double a_F(double b, double c, const TypeDistribution& dist, double t)
{
    const auto l = dist.lower_partial(t);
    if (!(l.D > 0.0)) return kInf;
    return 4.0 * b * b * (c - t) * l.B / (l.D * l.D);
}

double dropout_threshold(double b, double c, const TypeDistribution& dist)
{
    check_prior(b, c, dist);
    require(dist.atomless(), "dropout_threshold: requires an atomless prior");
    return a_F(b, c, dist, dist.beta());
}

CutoffPoint cutoff_map(double b, double c, const TypeDistribution& dist, double a)
{
    const double aD = dropout_threshold(b, c, dist);
    require(a > aD, "cutoff_map: a <= a_D, the equilibrium is fully active");
    const double lo = dist.alpha(), hi = dist.beta();
    const double t = numerics::find_root(
        [&](double s) {
            const double v = a_F(b, c, dist, s) - a;
            return std::isnan(v) ? kInf : v;
        },
        lo, hi);
    const auto l = dist.lower_partial(t);
    return {t, l.D / (2.0 * b * l.B), 1.0 - l.F};
}

BayesEquilibrium solve_bayes(double a, double b, double c, const TypeDistribution& dist)
{
    check_prior(b, c, dist);
    const double alpha = dist.alpha();
    const AffineBNE aff = affine_bne(a, b, c, dist);
    if (a <= 0.0 || aff.effort(dist.beta()) >= 0.0) return aff;

    const double m = dist.atom_mass_at_alpha();
    if (m > 0.0 && a * m * (c - alpha) >= b * b) {
        BoundaryAtom r{};
        r.p = b * b / (a * m * (c - alpha));
        r.x_H = (c - alpha) / b;
        r.atom_mass = m;
        r.alpha = alpha;
        r.E1 = m * r.p * r.x_H;
        r.E2 = m * r.p * r.x_H * r.x_H;
        return r;
    }

    // H(t) = D(t) - 2b sqrt((c - t) B(t) / a); first upward sign change.
    auto H = [&](double t) {
        const auto l = dist.lower_partial(t);
        return l.D - 2.0 * b * std::sqrt((c - t) * l.B / a);
    };
    const double span = c - alpha;
    int first = -1, changes = 0;
    bool prev_pos = H(alpha) > 0.0;
    for (int i = 1; i <= kScan; ++i) {
        const bool pos = H(i == kScan ? c : alpha + span * i / kScan) > 0.0;
        if (pos != prev_pos) {
            ++changes;
            if (first < 0 && pos) first = i;
        }
        prev_pos = pos;
    }
    if (first < 0) throw SolverError("solve_bayes: no sign change of H on (alpha, c)");
    const double t = numerics::find_root(H, alpha + span * (first - 1) / kScan,
                                         first == kScan ? c : alpha + span * first / kScan);

    const auto l = dist.lower_partial(t);
    CutoffAffine r{};
    r.t = t;
    r.lambda = std::sqrt((c - t) / (a * l.B));
    r.E1 = r.lambda * l.A;
    r.E2 = r.lambda * r.lambda * l.B;
    r.dropout_rate = 1.0 - l.F;
    r.A = l.A;
    r.B = l.B;
    r.additional_roots_detected = changes > 1;
    return r;
}

namespace {

struct Support {
    double lo, hi;
};

std::optional<Support> affine_support(double alpha, double beta, const AffineBNE& bne)
{
    const Support s{bne.effort(beta), bne.effort(alpha)};
    if (s.lo < 0.0) return std::nullopt;
    return s;
}

bool common_edges(double a, double b, double c, double alpha, const Support& s)
{
    return s.hi <= 1.0 / alpha && a <= b * alpha && c * alpha * alpha - 2.0 * b * alpha + a >= 0.0;
}

}  // namespace

bool truncation_check_simple(double a, double b, double c, double alpha, double beta, const AffineBNE& bne)
{
    const auto s = affine_support(alpha, beta, bne);
    return s && common_edges(a, b, c, alpha, *s) && c * c <= 2.0 * b;
}

bool truncation_check_support(double a, double b, double c, double alpha, double beta, const AffineBNE& bne)
{
    const auto s = affine_support(alpha, beta, bne);
    if (!s || !common_edges(a, b, c, alpha, *s)) return false;
    const double y = std::clamp(c / (2.0 * b), s->lo, s->hi);
    return 0.5 - c * y + b * y * y >= 0.0;
}

std::pair<double, double> support_probability_range(double a, double b, double c, double alpha,
                                                    double beta, const AffineBNE& bne)
{
    return probability_range(ContestTechnology(a, b, c), bne.effort(beta), bne.effort(alpha));
}

}  // namespace cubic
