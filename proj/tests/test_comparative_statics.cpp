#include <doctest.h>

#include <cmath>
#include <random>

#include "cubic_contest/comparative_statics.hpp"
#include "cubic_contest/errors.hpp"
#include "cubic_contest/numerics.hpp"

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

// E1 from damped iteration of the two moment equations.
double e1_fixed_point(double a, double b, double Delta, double sigma_sq)
{
    double E1 = Delta / (2 * b);
    for (int i = 0; i < 200000; ++i) {
        const double V = sigma_sq / (4 * (a * E1 - b) * (a * E1 - b));
        const double rhs = Delta - a * V;
        const double next = a == 0.0 ? rhs / (2 * b) : rhs / (b + std::sqrt(b * b - a * rhs));
        const double step = next - E1;
        E1 += 0.5 * step;
        if (std::fabs(step) < 1e-15) break;
    }
    return E1;
}

Eigen::MatrixXd random_stochastic(std::mt19937_64& rng, int r, int c)
{
    std::uniform_real_distribution<double> u01(0, 1);
    Eigen::MatrixXd m(r, c);
    for (int i = 0; i < r; ++i) {
        for (int j = 0; j < c; ++j) m(i, j) = u01(rng) + 1e-3;
        m.row(i) /= m.row(i).sum();
    }
    return m;
}

}  // namespace

TEST_CASE("expected effort as a function of a")
{
    CHECK(expected_effort_of_a(0.0, 1.0, 0.5, 0.125) == doctest::Approx(0.25).epsilon(1e-15));
    for (double a : {1e-8, -1e-8}) CHECK(std::fabs(expected_effort_of_a(a, 1.0, 0.5, 0.125) - 0.25) < 1e-6);
    const double abar = positivity_boundary(1.0, 0.5, 0.125);
    CHECK(abar == doctest::Approx(16.0));
    CHECK(std::fabs(expected_effort_of_a(abar, 1.0, 0.5, 0.125)) < 1e-12);
    const double s = std::sqrt(0.125);
    const auto d = discrete({0.5 - s, 0.5 + s}, {0.5, 0.5}, 1.0);
    CHECK(expected_effort_of_a(1.0, 1.0, 0.5, 0.125) == doctest::Approx(affine_bne(1.0, 1.0, 1.0, d).E1).epsilon(1e-14));
    for (double a = -50; a < 0; a += 0.5) CHECK(expected_effort_of_a(a, 1.0, 0.5, 0.125) > 0.0);
    // Sign change of E1 on a grid sits at abar.
    double last_pos = 0.0;
    for (double a = 0.0; a < 30.0; a += 0.01)
        if (expected_effort_of_a(a, 1.0, 0.5, 0.125) > 0.0) last_pos = a;
    CHECK(std::fabs(last_pos - abar) <= 0.01 + 1e-9);
}

TEST_CASE("peak parameter")
{
    {
        const auto r = peak_a(1.0, 1.0, 1.0);
        CHECK(std::fabs(r.a_dagger) < 1e-12);
        CHECK(r.y_dagger == doctest::Approx(1.0).epsilon(1e-12));
    }
    {
        const auto r = peak_a(1.0, 1.0, 1e-8);
        CHECK(std::fabs(r.a_dagger - 1.0) < 1e-3);
    }
    {
        const double b = 6.0, Delta = 0.6186545343, v = 0.0548949349;
        const auto r = peak_a(b, Delta, v);
        CHECK(std::fabs(r.a_dagger - 46.1716007697) < 1e-6);
        CHECK(std::fabs(expected_effort_of_a(r.a_dagger, b, Delta, v) - 0.0605036314) < 1e-6);
    }
    // Independent maximization of the fixed-point E1.
    for (auto [b, Delta, v] : {std::tuple{1.0, 0.5, 0.05}, {2.0, 0.7, 0.2}, {0.5, 1.0, 0.6}}) {
        const auto r = peak_a(b, Delta, v);
        const double arg = numerics::golden_max([&](double a) { return e1_fixed_point(a, b, Delta, v); },
                                                -5 * b * b / Delta, 2 * b * b / Delta, 200);
        CHECK(std::fabs(arg - r.a_dagger) < 1e-5 * b * b / Delta);
    }
    CHECK_THROWS_AS(peak_a(1.0, 1.0, 0.0), InvalidInput);
}

TEST_CASE("peak variance thresholds")
{
    const auto t = peak_variance_thresholds(2.0);
    CHECK(std::fabs(t.y1 - 0.1453623203) < 1e-9);
    CHECK(std::fabs(t.y2 - 1.4030317168) < 1e-9);
    CHECK(std::fabs(t.rho1 - 0.00450716) < 1e-6);
    CHECK(std::fabs(t.rho2 - 8.73185992) < 1e-6);
    CHECK(std::fabs(peak_q(t.y1)) < 1e-12);
    CHECK(std::fabs(peak_q(t.y2)) < 1e-12);
    CHECK(t.sigma1_sq == doctest::Approx(4.0 * t.rho1));
    CHECK(0.0 < t.rho1);
    CHECK(t.rho1 < 1.0);
    CHECK(1.0 < t.rho2);

    // a-dagger in sigma^2 rises, falls, rises.
    const double b = 1.0, Delta = 1.0;
    auto slope = [&](double v) {
        const double h = std::max(1e-6, 1e-4 * v);
        return (peak_a(b, Delta, v + h).a_dagger - peak_a(b, Delta, v - h).a_dagger) / (2 * h);
    };
    for (double f : {0.1, 0.5, 0.9}) CHECK(slope(f * t.rho1) > 0.0);
    for (double v : {2 * t.rho1, 0.1, 1.0, 5.0, 0.9 * t.rho2}) CHECK(slope(v) < 0.0);
    for (double v : {1.2 * t.rho2, 20.0, 100.0}) CHECK(slope(v) > 0.0);
}

TEST_CASE("disclosure policy")
{
    CHECK(optimal_disclosure(2.0).policy == DisclosurePolicy::NoDisclosure);
    CHECK(optimal_disclosure(2.0).direction == -1);
    CHECK(optimal_disclosure(-2.0).policy == DisclosurePolicy::FullDisclosure);
    CHECK(optimal_disclosure(0.0).policy == DisclosurePolicy::Indifferent);

    std::mt19937_64 rng(61);
    const auto d = discrete({0.2, 0.4, 0.7}, {0.3, 0.3, 0.4}, 1.0);
    const double base = expected_effort_under_signal(0.0, 1.0, 1.0, d, NoDisclosure{});
    for (int i = 0; i < 20; ++i) {
        const Garbling g{random_stochastic(rng, 3, 2 + i % 3)};
        CHECK(std::fabs(expected_effort_under_signal(0.0, 1.0, 1.0, d, g) - base) < 1e-12);
    }
}

TEST_CASE("literal disclosure check")
{
    Eigen::MatrixXd g(2, 2);
    g << 0.7, 0.3, 0.2, 0.8;
    const auto d = discrete({0.75, 0.9}, {0.5, 0.5}, 1.0);
    const std::vector<SignalStructure> sig{NoDisclosure{}, FullDisclosure{}, Garbling{g}};

    const auto neg = disclosure_literal_check(-0.1, 0.25, 1.0, d, sig);
    CHECK(neg.certified);
    CHECK_FALSE(neg.first_offending.has_value());

    // At a = 0 with an on-domain support that also clears the edge conditions.
    CHECK(0.9 * 0.9 - 0.75 * 0.75 < 2 * 0.25);
    CHECK(disclosure_literal_check(0.0, 0.25, 1.0, d, sig).certified);

    // Suppression with a full-disclosure posterior that drops out.
    const auto wide = discrete({0.1, 0.9}, {0.5, 0.5}, 1.0);
    REQUIRE_FALSE(std::holds_alternative<AffineBNE>(solve_bayes(0.5, 0.5, 1.0, wide)));
    const auto pos = disclosure_literal_check(0.5, 0.5, 1.0, wide, {FullDisclosure{}, NoDisclosure{}});
    CHECK_FALSE(pos.certified);
    REQUIRE(pos.first_offending.has_value());
    CHECK(*pos.first_offending == 0);
    CHECK_FALSE(pos.signals[0].fully_active);
}

TEST_CASE("two-peak constrained path")
{
    const auto dist = two_peak_mixture();
    const double b = 6.0, c = 2.002930;
    Eigen::VectorXd grid = Eigen::VectorXd::LinSpaced(120, 1.0, 120.0);
    const auto path = constrained_effort_path(b, c, dist, grid);
    REQUIRE(path.extrema.size() == 3);
    const double s[] = {0.1977030705, 0.5036802273, 0.7703043128};
    const double a[] = {108.9683767183, 95.8579278830, 46.4315598214};
    const double e[] = {0.0513013245, 0.0441288144, 0.0605228910};
    const double F[] = {0.3687472884, 0.4385874357, 0.9958450796};
    for (int i = 0; i < 3; ++i) {
        const auto& x = path.extrema[i];
        CHECK(std::fabs(x.s - s[i]) < 1e-6);
        CHECK(std::fabs(x.a - a[i]) < 1e-6);
        CHECK(std::fabs(x.E1 - e[i]) < 1e-6);
        CHECK(std::fabs(x.F - F[i]) < 1e-6);
        CHECK(x.maximum == (i != 1));
    }
    // Grid values agree with the extrema locations: local max near 46, min near 96, max near 109.
    auto at = [&](double v) { return path.E1[Eigen::Index(v - 1)]; };
    CHECK(at(46) > at(40));
    CHECK(at(46) > at(60));
    CHECK(at(96) < at(90));
    CHECK(at(96) < at(102));
    CHECK(at(109) > at(104));
    CHECK(at(109) > at(115));
}

TEST_CASE("fully active stretch and single-peak prior")
{
    const auto u = TypeDistribution(Uniform{0.45, 0.55}, 1.0);
    const double b = 1.0, aD = dropout_threshold(b, 1.0, u);
    const auto m = u.moments();
    Eigen::VectorXd grid = Eigen::VectorXd::LinSpaced(200, -2.0, aD);
    const auto path = constrained_effort_path(b, 1.0, u, grid);
    for (Eigen::Index i = 0; i < grid.size(); ++i)
        CHECK(std::fabs(path.E1[i] - expected_effort_of_a(grid[i], b, m.Delta, m.variance)) < 1e-10);
    REQUIRE(path.extrema.size() == 1);
    CHECK(path.extrema[0].fully_active);
    CHECK(path.extrema[0].maximum);
    CHECK(path.extrema[0].a == doctest::Approx(peak_a(b, m.Delta, m.variance).a_dagger));
}

TEST_CASE("property: single-peaked on the fully active region")
{
    std::mt19937_64 rng(67);
    std::uniform_real_distribution<double> u01(0, 1);
    for (int i = 0; i < 100; ++i) {
        const double b = 0.2 + 2 * u01(rng), Delta = 0.1 + u01(rng), v = Delta * Delta * std::exp(8 * u01(rng) - 6);
        const double ad = peak_a(b, Delta, v).a_dagger;
        const double scale = b * b / Delta;
        double prev = expected_effort_of_a(ad - 3 * scale, b, Delta, v);
        for (int k = 1; k <= 300; ++k) {
            const double a = ad - 3 * scale + 6 * scale * k / 300.0;
            const double e = expected_effort_of_a(a, b, Delta, v);
            if (a < ad - 1e-9 * scale) CHECK(e > prev);
            if (a - 6 * scale / 300.0 > ad + 1e-9 * scale) CHECK(e < prev);
            prev = e;
        }
    }
}

TEST_CASE("property: dual-path peak and sharper bound")
{
    std::mt19937_64 rng(71);
    std::uniform_real_distribution<double> u01(0, 1);
    for (int i = 0; i < 1000; ++i) {
        const double b = 0.1 + 3 * u01(rng), Delta = 0.05 + 2 * u01(rng);
        const double v = Delta * Delta * std::exp(16 * u01(rng) - 10);
        const auto r = peak_a(b, Delta, v);
        CHECK(std::fabs(r.a_dagger - r.a_dagger_closed) < 1e-10 * std::max(1.0, b * b / Delta));
        CHECK(r.a_dagger < r.upper_bound);
        CHECK(r.upper_bound < positivity_boundary(b, Delta, v));
    }
}

TEST_CASE("property: g increases on (0, phi)")
{
    CHECK(peak_g(1.0) == 1.0);
    double prev = 0.0;
    for (int k = 1; k < 10000; ++k) {
        const double g = peak_g(kGoldenRatio * k / 10000.0);
        CHECK(g > prev);
        prev = g;
    }
}

TEST_CASE("property: disclosure monotone along garbling chains")
{
    std::mt19937_64 rng(73);
    std::uniform_real_distribution<double> u01(0, 1);
    for (int i = 0; i < 50; ++i) {
        const int n = 2 + int(4 * u01(rng));
        std::vector<double> at(n), w(n);
        double sw = 0;
        for (int j = 0; j < n; ++j) at[j] = 0.1 + 0.8 * u01(rng), w[j] = u01(rng) + 0.05, sw += w[j];
        for (double& x : w) x /= sw;
        const auto d = discrete(at, w, 1.0);
        const double b = 1.0 + u01(rng), a = (i % 2 ? 1.0 : -1.0) * 0.5 * u01(rng);
        Garbling g{random_stochastic(rng, n, 3)};
        std::vector<SignalStructure> chain{FullDisclosure{}, g};
        for (int k = 0; k < 3; ++k) {
            g = compose(g, Garbling{random_stochastic(rng, 3, 3)});
            chain.push_back(g);
        }
        chain.push_back(NoDisclosure{});
        std::vector<std::pair<double, double>> pts;
        for (const auto& s : chain)
            pts.push_back({posterior_mean_distribution(d, s).moments().variance,
                           expected_effort_under_signal(a, b, 1.0, d, s)});
        for (std::size_t k = 1; k < pts.size(); ++k) {
            const double dv = pts[k].first - pts[k - 1].first, de = pts[k].second - pts[k - 1].second;
            CHECK(dv <= 1e-14);
            if (dv < -1e-12) CHECK(de * (a > 0 ? -1.0 : 1.0) < 1e-15);
        }
        // Optimal endpoint.
        const double e_full = pts.front().second, e_none = pts.back().second;
        if (optimal_disclosure(a).policy == DisclosurePolicy::NoDisclosure) CHECK(e_none >= e_full);
        else CHECK(e_full >= e_none);
    }
}
