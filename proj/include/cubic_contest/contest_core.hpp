#pragma once

// Cubic contest success function
//   P(x, y) = 1/2 + (x - y) (c - b (x + y) + a x y)
// plus its clamp to [0,1] and the admissible domain {0 < P < 1}.
//
// Everything here is templated on the scalar so it composes with Eigen
// arrays: the array overloads return expressions, not temporaries.

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <utility>

#include "cubic_contest/errors.hpp"

namespace cubic {

template <typename Scalar>
struct Technology {
    Scalar a;
    Scalar b;
    Scalar c;

    Technology(Scalar a_, Scalar b_, Scalar c_) : a(a_), b(b_), c(c_)
    {
        require(b > Scalar(0), "technology: b must be positive");
        require(c > Scalar(0), "technology: c must be positive");
    }

    Scalar kappa() const
    {
        require(a != Scalar(0), "technology: kappa = b/a is undefined at a = 0");
        return b / a;
    }
};

using ContestTechnology = Technology<double>;

template <typename Scalar>
struct Effort {
    Scalar x;
    Scalar y;
};

using EffortProfile = Effort<double>;

template <typename Scalar>
Scalar raw_probability(const Technology<Scalar>& t, Scalar x, Scalar y)
{
    return Scalar(0.5) + (x - y) * (t.c - t.b * (x + y) + t.a * x * y);
}

template <typename Scalar>
Scalar raw_probability(const Technology<Scalar>& t, const Effort<Scalar>& p)
{
    return raw_probability(t, p.x, p.y);
}

template <typename Scalar, typename DX, typename DY>
auto raw_probability(const Technology<Scalar>& t,
                     const Eigen::ArrayBase<DX>& x,
                     const Eigen::ArrayBase<DY>& y)
{
    return Scalar(0.5) + (x - y) * (t.c - t.b * (x + y) + t.a * x * y);
}

template <typename Scalar>
Scalar clamp_unit(Scalar p)
{
    return std::min(Scalar(1), std::max(Scalar(0), p));
}

template <typename Scalar>
Scalar truncated_probability(const Technology<Scalar>& t, Scalar x, Scalar y)
{
    return clamp_unit(raw_probability(t, x, y));
}

template <typename Scalar>
Scalar truncated_probability(const Technology<Scalar>& t, const Effort<Scalar>& p)
{
    return truncated_probability(t, p.x, p.y);
}

template <typename Scalar, typename DX, typename DY>
auto truncated_probability(const Technology<Scalar>& t,
                           const Eigen::ArrayBase<DX>& x,
                           const Eigen::ArrayBase<DY>& y)
{
    return raw_probability(t, x, y).max(Scalar(0)).min(Scalar(1));
}

template <typename Scalar>
Scalar cross_partial(const Technology<Scalar>& t, Scalar x, Scalar y)
{
    return Scalar(2) * t.a * (x - y);
}

template <typename Scalar>
Scalar cross_partial(const Technology<Scalar>& t, const Effort<Scalar>& p)
{
    return cross_partial(t, p.x, p.y);
}

// Strict: boundary points are outside.
template <typename Scalar>
bool in_admissible_domain(const Technology<Scalar>& t, Scalar x, Scalar y)
{
    const Scalar p = raw_probability(t, x, y);
    return p > Scalar(0) && p < Scalar(1);
}

template <typename Scalar>
bool in_admissible_domain(const Technology<Scalar>& t, const Effort<Scalar>& p)
{
    return in_admissible_domain(t, p.x, p.y);
}

// d^2/dxdy of x^r / (x^r + y^r).
template <typename Scalar>
Scalar tullock_cross_partial(Scalar r, Scalar x, Scalar y)
{
    require(r > Scalar(0), "tullock: r must be positive");
    require(x > Scalar(0) && y > Scalar(0), "tullock: efforts must be positive");
    using std::pow;
    const Scalar xr = pow(x, r), yr = pow(y, r), s = xr + yr;
    return r * r * pow(x, r - 1) * pow(y, r - 1) * (xr - yr) / (s * s * s);
}

template <typename Scalar>
Scalar tullock_cross_partial(Scalar r, const Effort<Scalar>& p)
{
    return tullock_cross_partial(r, p.x, p.y);
}

// Coefficients of P(x, y) as a quadratic in x for fixed y:
//   P = k0 + k1 x + k2 x^2.
template <typename Scalar>
struct QuadraticInX {
    Scalar k0, k1, k2;
};

template <typename Scalar>
QuadraticInX<Scalar> expand_in_x(const Technology<Scalar>& t, Scalar y)
{
    return {Scalar(0.5) - t.c * y + t.b * y * y, t.c - t.a * y * y, t.a * y - t.b};
}

// Range of a quadratic k0 + k1 u + k2 u^2 on [lo, hi].
template <typename Scalar>
std::pair<Scalar, Scalar> quadratic_range(Scalar k0, Scalar k1, Scalar k2, Scalar lo, Scalar hi)
{
    auto f = [&](Scalar u) { return k0 + u * (k1 + k2 * u); };
    Scalar mn = std::min(f(lo), f(hi));
    Scalar mx = std::max(f(lo), f(hi));
    if (k2 != Scalar(0)) {
        const Scalar v = -k1 / (Scalar(2) * k2);
        if (v > lo && v < hi) {
            mn = std::min(mn, f(v));
            mx = std::max(mx, f(v));
        }
    }
    return {mn, mx};
}

// min and max of P over the square [lo, hi]^2. The inner minimum over x is
// exact; the outer one is a grid over y followed by golden-section polishing.
// The maximum follows from antisymmetry: max P = 1 - min P.
template <typename Scalar>
std::pair<Scalar, Scalar> probability_range(const Technology<Scalar>& t, Scalar lo, Scalar hi,
                                            int n = 2000)
{
    if (hi <= lo) return {Scalar(0.5), Scalar(0.5)};
    auto inner = [&](Scalar y) {
        const auto q = expand_in_x(t, y);
        return quadratic_range(q.k0, q.k1, q.k2, lo, hi).first;
    };
    const Scalar h = (hi - lo) / n;
    int best = 0;
    Scalar mn = inner(lo);
    for (int i = 1; i <= n; ++i) {
        const Scalar v = inner(lo + h * i);
        if (v < mn) { mn = v; best = i; }
    }
    Scalar l = lo + h * std::max(0, best - 1), r = lo + h * std::min(n, best + 1);
    const Scalar g = (std::sqrt(Scalar(5)) - 1) / 2;
    Scalar m1 = r - g * (r - l), m2 = l + g * (r - l);
    Scalar f1 = inner(m1), f2 = inner(m2);
    for (int it = 0; it < 80; ++it) {
        if (f1 < f2) { r = m2; m2 = m1; f2 = f1; m1 = r - g * (r - l); f1 = inner(m1); }
        else         { l = m1; m1 = m2; f1 = f2; m2 = l + g * (r - l); f2 = inner(m2); }
    }
    mn = std::min({mn, f1, f2});
    return {mn, Scalar(1) - mn};
}

}  // namespace cubic
