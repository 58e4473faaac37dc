#include <doctest.h>

#include <cmath>
#include <random>

#include "cubic_contest/bayes_equilibrium.hpp"
#include "cubic_contest/complete_info.hpp"
#include "cubic_contest/errors.hpp"
#include "cubic_contest/oracle.hpp"

using namespace cubic;

namespace {

TypeDistribution discrete(std::vector<double> atoms, std::vector<double> w, double c)
{
    return TypeDistribution(Discrete{Eigen::Map<Eigen::VectorXd>(atoms.data(), atoms.size()),
                                     Eigen::Map<Eigen::VectorXd>(w.data(), w.size())},
                            c);
}

TypeDistribution two_peak_mixture()
{
    return TypeDistribution(ShiftedBetaMixture{1.0,
                                               2.0,
                                               {{0.368754, 13.8700, 151.8686},
                                                {0.589342, 90.9045, 74.5338},
                                                {0.041904, 56.2754, 23.4295}}},
                            2.002930);
}

// Moment fixed point: V = sigma^2 / (4 (a E1 - b)^2), then E1 is the stable
// root of a E1^2 - 2 b E1 + Delta - a V = 0. Returns {E1, V}.
std::pair<double, double> moment_iteration(double a, double b, double Delta, double sigma_sq)
{
    double E1 = Delta / (2 * b), V = 0.0;
    for (int i = 0; i < 100000; ++i) {
        V = sigma_sq / (4 * (a * E1 - b) * (a * E1 - b));
        const double rhs = Delta - a * V;
        const double next = a == 0.0 ? rhs / (2 * b) : rhs / (b + std::sqrt(b * b - a * rhs));
        const double step = next - E1;
        E1 += 0.5 * step;
        if (std::fabs(step) < 1e-15) break;
    }
    return {E1, sigma_sq / (4 * (a * E1 - b) * (a * E1 - b))};
}

}  // namespace

TEST_CASE("affine rule at a = 0")
{
    const auto u = TypeDistribution(Uniform{0.25, 0.75}, 1.0);
    const auto r = affine_bne(0.0, 1.0, 1.0, u);
    CHECK(r.E1 == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(r.k == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(r.d == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(std::isnan(r.kappa));
}

TEST_CASE("affine rule against the moment fixed point")
{
    const double s = std::sqrt(1.0 / 8.0);
    const auto d = discrete({0.5 - s, 0.5 + s}, {0.5, 0.5}, 1.0);
    const auto r = affine_bne(1.0, 1.0, 1.0, d);
    const auto [E1, V] = moment_iteration(1.0, 1.0, 0.5, 0.125);
    CHECK(std::fabs(r.E1 - E1) < 1e-12);
    CHECK(std::fabs(r.variance - V) < 1e-12);
    CHECK(r.E1 == doctest::Approx(1.0 - std::sqrt(0.5 + std::sqrt(0.375)) / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(r.E1 == doctest::Approx(0.2539).epsilon(1e-3));
    // Closed forms in kappa, zeta, omega.
    CHECK(r.kappa == 1.0);
    CHECK(r.zeta == doctest::Approx(0.5));
    CHECK(r.omega == doctest::Approx(0.125));
    CHECK(r.variance == doctest::Approx((std::sqrt(0.25 + 0.125) - 0.5) / 2).epsilon(1e-13));
    CHECK(1.0 * r.E1 < 1.0);
}

TEST_CASE("degenerate prior is rejected off a = 0")
{
    const auto deg = TypeDistribution(Degenerate{0.5}, 1.0);
    CHECK_THROWS_AS(affine_bne(1.0, 1.0, 1.0, deg), InvalidInput);
    CHECK_NOTHROW(affine_bne(0.0, 1.0, 1.0, deg));
    CHECK_THROWS_AS(affine_bne(1.0, 1.0, 2.0, deg), InvalidInput);  // prior built for another c
}

TEST_CASE("vanishing uncertainty recovers complete-information moments")
{
    // Pure side.
    for (double a : {-3.0, 0.5, 1.5}) {
        const auto r = affine_moments(a, 1.0, 0.5, 1e-10);
        const auto& p = std::get<PureSymmetric>(solve_complete(CompleteInfoProblem(ContestTechnology(a, 1, 1), 0.5)));
        CHECK(std::fabs(r.E1 - p.x_star) < 1e-6);
        CHECK(r.variance < 1e-6);
    }
    // Mixed side: the variance converges at rate sigma^2, the mean only at
    // rate sigma, with gap sigma / (2 sqrt(a Delta - b^2)).
    for (double a : {3.0, 5.0, 10.0, 200.0}) {
        const double v = 1e-10;
        const auto r = affine_moments(a, 1.0, 0.5, v);
        const auto& m = std::get<MixedMoments>(solve_complete(CompleteInfoProblem(ContestTechnology(a, 1, 1), 0.5)));
        CHECK(std::fabs(r.variance - m.variance) < 1e-6);
        const double gap = std::sqrt(v) / (2 * std::sqrt(a * 0.5 - 1.0));
        CHECK(m.mean - r.E1 == doctest::Approx(gap).epsilon(1e-3));
    }
}

TEST_CASE("solve_bayes branches")
{
    const auto u = TypeDistribution(Uniform{0.5, 1.0}, 1.25);
    {
        const auto eq = solve_bayes(-1.0, 1.0, 1.25, u);
        const auto& r = std::get<AffineBNE>(eq);
        CHECK(1.25 - (-1.0) * r.E2() >= 1.25);
    }
    {
        const auto dist = two_peak_mixture();
        const auto eq = solve_bayes(46.4315598214, 6.0, 2.002930, dist);
        const auto& r = std::get<CutoffAffine>(eq);
        CHECK(std::fabs(r.t - 1.0 - 0.7703043128) < 1e-6);
        CHECK(std::fabs(r.E1 - 0.0605228910) < 1e-6);
        CHECK_FALSE(r.additional_roots_detected);
    }
    {
        // a m (c - alpha) = 2 b^2 puts the boundary atom at p = 1/2.
        const auto d = discrete({0.5, 0.8}, {0.5, 0.5}, 1.0);
        const double b = 0.5, a = 2 * b * b / (0.5 * 0.5);
        const auto eq = solve_bayes(a, b, 1.0, d);
        const auto& r = std::get<BoundaryAtom>(eq);
        CHECK(r.p == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(r.x_H == doctest::Approx(1.0));
        CHECK(r.E1 == doctest::Approx(b / a).epsilon(1e-15));
        CHECK(r.E2 == doctest::Approx(0.5 / a).epsilon(1e-15));
    }
}

TEST_CASE("dropout thresholds")
{
    const auto u = TypeDistribution(Uniform{0.5, 1.0}, 1.25);
    const double q = 0.25, h = 0.5;
    CHECK(dropout_threshold(1.0, 1.25, u) == doctest::Approx(4 * q / (3 * (q + h / 3) * (q + h / 3))).epsilon(1e-12));
    CHECK(dropout_threshold(1.0, 1.25, u) == doctest::Approx(1.92).epsilon(1e-12));
    CHECK(std::fabs(dropout_threshold(6.0, 2.002930, two_peak_mixture()) - 0.9561754615) < 1e-6);
    CHECK_THROWS_AS(dropout_threshold(1.0, 1.0, discrete({0.3, 0.6}, {0.5, 0.5}, 1.0)), InvalidInput);
}

TEST_CASE("cutoff map")
{
    const auto dist = two_peak_mixture();
    const auto pt = cutoff_map(6.0, 2.002930, dist, 95.8579278830);
    CHECK(std::fabs(pt.t - 1.0 - 0.5036802273) < 1e-6);
    CHECK(std::fabs(1.0 - pt.dropout_rate - 0.4385874357) < 1e-6);

    const auto u = TypeDistribution(Uniform{0.5, 1.0}, 1.25);
    const auto near = cutoff_map(1.0, 1.25, u, 1.92 + 1e-8);
    CHECK(near.t > 1.0 - 1e-6);
    CHECK(near.dropout_rate < 1e-6);
    CHECK_THROWS_AS(cutoff_map(1.0, 1.25, u, 1.5), InvalidInput);

    double prev = 1.0;
    for (double a = 2.0; a < 50.0; a += 0.5) {
        const double t = cutoff_map(1.0, 1.25, u, a).t;
        CHECK(t < prev);
        prev = t;
    }
}

TEST_CASE("truncation criteria")
{
    const auto u = TypeDistribution(Uniform{0.6, 0.9}, 1.0);
    // Empowerment: the edge inequality c alpha^2 - 2 b alpha + a >= 0 fails.
    const auto neg = affine_bne(-1.0, 1.0, 1.0, u);
    CHECK_FALSE(truncation_check_simple(-1.0, 1.0, 1.0, 0.6, 0.9, neg));

    // All four inequalities hold: c^2 <= 2b, a <= b alpha, c alpha^2 - 2 b alpha + a >= 0.
    const double a = 0.2, b = 0.5, c = 1.0;
    const auto v = TypeDistribution(Uniform{0.9, 0.95}, c);
    const auto r = affine_bne(a, b, c, v);
    CHECK(r.effort(0.9) <= 1.0 / 0.9);
    CHECK(truncation_check_simple(a, b, c, 0.9, 0.95, r));
    CHECK(truncation_check_support(a, b, c, 0.9, 0.95, r));

    // x_high > 1/alpha.
    const auto w = TypeDistribution(Uniform{0.05, 0.1}, 5.0);
    const auto rw = affine_bne(0.0, 0.05, 5.0, w);
    CHECK(rw.effort(0.05) > 1.0 / 0.05);
    CHECK_FALSE(truncation_check_simple(0.0, 0.05, 5.0, 0.05, 0.1, rw));
    CHECK_FALSE(truncation_check_support(0.0, 0.05, 5.0, 0.05, 0.1, rw));
}

TEST_CASE("support criterion at a = 0: interior iff beta^2 - alpha^2 < 2b")
{
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> u01(0, 1);
    int agree = 0, n = 0;
    for (; n < 500; ++n) {
        const double c = 0.5 + u01(rng), b = 0.05 + u01(rng);
        const double al = 0.05 + 0.9 * c * u01(rng), be = al + (c - al) * (0.05 + 0.9 * u01(rng));
        const auto dist = TypeDistribution(Uniform{al, be}, c);
        const auto r = affine_bne(0.0, b, c, dist);
        const auto [lo, hi] = support_probability_range(0.0, b, c, al, be, r);
        const bool interior = lo > 0.0 && hi < 1.0;
        const double gap = be * be - al * al - 2 * b;
        if (std::fabs(gap) < 1e-9) continue;
        agree += interior == (gap < 0);
    }
    CHECK(agree == n);
}

TEST_CASE("property: fixed-point residuals")
{
    std::mt19937_64 rng(47);
    std::uniform_real_distribution<double> u01(0, 1);
    int n = 0;
    while (n < 200) {
        const double c = 1.0 + u01(rng), b = 0.1 + u01(rng), al = 0.1 + 0.5 * u01(rng);
        const double be = al + (c - al) * (0.1 + 0.8 * u01(rng));
        const TypeDistribution dist(u01(rng) < 0.5 ? TypeDistribution::Kind(Uniform{al, be})
                                                   : TypeDistribution::Kind(ShiftedBetaMixture{
                                                         al, be, {{0.5, 2 + 20 * u01(rng), 2 + 20 * u01(rng)},
                                                                  {0.5, 2 + 20 * u01(rng), 2 + 20 * u01(rng)}}}),
                                 c);
        const double a = 100 * u01(rng) - 20;
        const auto eq = solve_bayes(a, b, c, dist);
        if (const auto* r = std::get_if<AffineBNE>(&eq)) {
            const auto m = dist.moments();
            const double delta = c - m.M1;
            CHECK(std::fabs(a * r->E1 * r->E1 - 2 * b * r->E1 + delta - a * r->variance) < 1e-10);
            CHECK(std::fabs(r->variance - r->k * r->k * m.variance) < 1e-10);
            CHECK(std::fabs(r->k + 1.0 / (2 * (b - a * r->E1))) < 1e-10 * std::fabs(r->k));
            CHECK(a * r->E1 < b);
        } else if (const auto* r = std::get_if<CutoffAffine>(&eq)) {
            const auto l = dist.lower_partial(r->t);
            // lambda reaches 1e5 near alpha; scale by the size of the terms.
            CHECK(std::fabs(2 * a * l.A * r->lambda * r->lambda - 2 * b * r->lambda + 1) <
                  1e-10 * std::max(1.0, 2 * b * r->lambda));
            CHECK(std::fabs(r->t - (c - a * l.B * r->lambda * r->lambda)) < 1e-10);
            CHECK(std::fabs(r->E1 - r->lambda * l.A) < 1e-10);
            CHECK(std::fabs(r->E2 - r->lambda * r->lambda * l.B) < 1e-10);
        }
        ++n;
    }
}

TEST_CASE("property: cutoff with t at or above beta coincides with the affine rule")
{
    const auto u = TypeDistribution(Uniform{0.5, 1.0}, 1.25);
    const auto r = affine_bne(1.92, 1.0, 1.25, u);
    CHECK(std::fabs(r.effort(1.0)) < 1e-10);
    // lambda (t - theta) with t = c - a E2 reproduces the affine rule.
    const double t = 1.25 - 1.92 * r.E2();
    CHECK(std::fabs(t - 1.0) < 1e-10);
    CHECK(std::fabs(-r.k * (t - 0.7) - r.effort(0.7)) < 1e-10);
}

TEST_CASE("property: best-response optimality of the affine rule")
{
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> u01(0, 1);
    int n = 0;
    while (n < 30) {
        const double c = 1.0, b = 0.3 + u01(rng), al = 0.1 + 0.4 * u01(rng), be = al + (0.9 - al) * u01(rng);
        const auto dist = TypeDistribution(Uniform{al, be}, c);
        const double a = 4 * u01(rng) - 2;
        const auto eq = solve_bayes(a, b, c, dist);
        if (!std::holds_alternative<AffineBNE>(eq)) continue;
        VerifyOptions opt;
        opt.truncated = false;
        opt.type_sample = 10;
        opt.grid_n = 2000;
        const auto rep = verify_equilibrium(a, b, c, dist, eq, opt);
        CHECK(rep.max_gain < 1e-9);
        ++n;
    }
}

TEST_CASE("property: a_F decreases on the support")
{
    std::mt19937_64 rng(59);
    std::uniform_real_distribution<double> u01(0, 1);
    for (int i = 0; i < 10; ++i) {
        const double c = 1.0 + u01(rng), b = 0.2 + u01(rng), al = 0.1 + 0.5 * u01(rng);
        const double be = al + (c - al) * (0.2 + 0.7 * u01(rng));
        const TypeDistribution dist(i % 2 ? TypeDistribution::Kind(Uniform{al, be})
                                          : TypeDistribution::Kind(ShiftedBetaMixture{
                                                al, be, {{1.0, 1 + 10 * u01(rng), 1 + 10 * u01(rng)}}}),
                                    c);
        double prev = std::numeric_limits<double>::infinity();
        for (int k = 1; k < 1000; ++k) {
            const double v = a_F(b, c, dist, al + (be - al) * k / 1000.0);
            CHECK(v < prev);
            prev = v;
        }
    }
}

TEST_CASE("property: continuity across the dropout threshold")
{
    const auto u = TypeDistribution(Uniform{0.5, 1.0}, 1.25);
    const double aD = dropout_threshold(1.0, 1.25, u);
    const auto below = solve_bayes(aD - 1e-6, 1.0, 1.25, u);
    const auto above = solve_bayes(aD + 1e-6, 1.0, 1.25, u);
    REQUIRE(std::holds_alternative<AffineBNE>(below));
    REQUIRE(std::holds_alternative<CutoffAffine>(above));
    CHECK(std::fabs(std::get<AffineBNE>(below).E1 - std::get<CutoffAffine>(above).E1) < 1e-4);

    const auto mix = two_peak_mixture();
    const double aM = dropout_threshold(6.0, 2.002930, mix);
    const double e_lo = std::visit([](const auto& e) { return e.E1; }, solve_bayes(aM - 1e-6, 6.0, 2.002930, mix));
    const double e_hi = std::visit([](const auto& e) { return e.E1; }, solve_bayes(aM + 1e-6, 6.0, 2.002930, mix));
    CHECK(std::fabs(e_lo - e_hi) < 1e-4);
}

TEST_CASE("property: sign of the variance effect")
{
    // Mean-preserving two-point spreads around M1 = 0.5, c = 1.
    const double b = 1.0, h = 1e-4;
    for (double a : {-3.0, -0.5, 0.0, 0.5, 1.5}) {
        for (double spread : {0.1, 0.2, 0.3}) {
            auto E1 = [&](double s) { return affine_bne(a, b, 1.0, discrete({0.5 - s, 0.5 + s}, {0.5, 0.5}, 1.0)).E1; };
            // d/d(sigma^2) with sigma^2 = s^2.
            const double d = (E1(spread + h) - E1(spread - h)) / (2 * h) / (2 * spread);
            if (a > 0) CHECK(d < 0.0);
            if (a < 0) CHECK(d > 0.0);
            if (a == 0) CHECK(std::fabs(d) < 1e-8);
        }
    }
}
