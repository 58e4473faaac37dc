#include "cubic_contest/numerics.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "cubic_contest/errors.hpp"

namespace cubic::numerics {

namespace {

constexpr double kTiny = 1e-300;

double beta_cf(double p, double q, double x)
{
    const double qab = p + q, qap = p + 1.0, qam = p - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 2000; ++m) {
        const int m2 = 2 * m;
        double aa = m * (q - m) * x / ((qam + m2) * (p + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(p + m) * (qab + m) * x / ((p + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) return h;
    }
    throw SolverError("incomplete_beta: continued fraction did not converge");
}

double log_beta(double p, double q)
{
    return std::lgamma(p) + std::lgamma(q) - std::lgamma(p + q);
}

}  // namespace

double incomplete_beta(double p, double q, double x)
{
    require(p > 0 && q > 0, "incomplete_beta: shape parameters must be positive");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double lfront = p * std::log(x) + q * std::log1p(-x) - log_beta(p, q);
    if (x < (p + 1.0) / (p + q + 2.0)) return std::exp(lfront) * beta_cf(p, q, x) / p;
    return 1.0 - std::exp(lfront) * beta_cf(q, p, 1.0 - x) / q;
}

double incomplete_beta_moment(double p, double q, int r, double x)
{
    require(r >= 0, "incomplete_beta_moment: r must be nonnegative");
    // B(p + r, q) / B(p, q) = prod_{i<r} (p + i) / (p + q + i)
    double ratio = 1.0;
    for (int i = 0; i < r; ++i) ratio *= (p + i) / (p + q + i);
    return ratio * incomplete_beta(p + r, q, x);
}

double beta_density(double p, double q, double z)
{
    if (z <= 0.0 || z >= 1.0) return 0.0;
    return std::exp((p - 1.0) * std::log(z) + (q - 1.0) * std::log1p(-z) - log_beta(p, q));
}

GaussLegendre::GaussLegendre(int n) : nodes(n), weights(n)
{
    require(n >= 1, "GaussLegendre: need at least one node");
    const double pi = std::acos(-1.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-16) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
}

double find_root(const std::function<double(double)>& f, double lo, double hi, double xtol,
                 int max_iter)
{
    double flo = f(lo), fhi = f(hi);
    const bool lo_pos = flo > 0.0, hi_pos = fhi > 0.0;
    if (lo_pos == hi_pos)
        throw SolverError("find_root: no sign change on [" + std::to_string(lo) + ", " +
                          std::to_string(hi) + "]");
    for (int it = 0; it < max_iter; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi || hi - lo <= xtol) break;
        const double fm = f(mid);
        if ((fm > 0.0) == lo_pos) { lo = mid; flo = fm; }
        else { hi = mid; fhi = fm; }
    }
    // Secant step on the final bracket; kept only if it stays inside.
    if (std::isfinite(flo) && std::isfinite(fhi) && fhi != flo) {
        const double s = lo - flo * (hi - lo) / (fhi - flo);
        if (s >= lo && s <= hi) return s;
    }
    return 0.5 * (lo + hi);
}

double golden_max(const std::function<double(double)>& f, double lo, double hi, int iters)
{
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double m1 = hi - g * (hi - lo), m2 = lo + g * (hi - lo);
    double f1 = f(m1), f2 = f(m2);
    for (int it = 0; it < iters; ++it) {
        if (f1 > f2) { hi = m2; m2 = m1; f2 = f1; m1 = hi - g * (hi - lo); f1 = f(m1); }
        else { lo = m1; m1 = m2; f1 = f2; m2 = lo + g * (hi - lo); f2 = f(m2); }
    }
    return f1 > f2 ? m1 : m2;
}

}  // namespace cubic::numerics
