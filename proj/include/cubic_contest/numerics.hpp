#pragma once

#include <Eigen/Core>

#include <functional>

namespace cubic::numerics {

// Regularized incomplete beta I_x(p, q), continued fraction (modified Lentz).
double incomplete_beta(double p, double q, double x);

// E[Z^r 1{Z <= x}] for Z ~ Beta(p, q), i.e. B_x(p + r, q) / B(p, q).
double incomplete_beta_moment(double p, double q, int r, double x);

double beta_density(double p, double q, double z);

// Gauss-Legendre rule on [-1, 1].
struct GaussLegendre {
    Eigen::ArrayXd nodes;
    Eigen::ArrayXd weights;

    explicit GaussLegendre(int n);

    template <typename F>
    double integrate(F&& f, double lo, double hi) const
    {
        const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
        double s = 0.0;
        for (Eigen::Index i = 0; i < nodes.size(); ++i) s += weights[i] * f(mid + half * nodes[i]);
        return s * half;
    }
};

// Bisection on a sign predicate followed by secant polishing. f(lo) and
// f(hi) must have opposite signs (zero counts as nonpositive).
double find_root(const std::function<double(double)>& f, double lo, double hi,
                 double xtol = 0.0, int max_iter = 400);

// Golden-section maximization on [lo, hi]; returns the argmax.
double golden_max(const std::function<double(double)>& f, double lo, double hi, int iters = 100);

}  // namespace cubic::numerics
