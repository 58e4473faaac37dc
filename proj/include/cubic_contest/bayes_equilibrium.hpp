#pragma once

#include <variant>

#include "cubic_contest/type_model.hpp"

namespace cubic {

// x(theta) = k theta + d.
struct AffineBNE {
    double k, d;
    double E1, variance;
    double omega, zeta, kappa;  // zeta, kappa are NaN at a = 0
    double M1, M2;

    double effort(double theta) const { return k * theta + d; }
    double E2() const { return variance + E1 * E1; }
    double payoff() const { return 0.5 - (k * M2 + d * M1); }
};

// x(theta) = lambda (t - theta)_+.
struct CutoffAffine {
    double lambda, t;
    double E1, E2;
    double dropout_rate;
    double A, B;  // lower partial moments at t
    bool additional_roots_detected;

    double effort(double theta) const { return theta < t ? lambda * (t - theta) : 0.0; }
    double variance() const { return E2 - E1 * E1; }
    double payoff() const { return 0.5 - lambda * (t * A - B); }
};

// Types above alpha choose zero; type alpha mixes on {0, x_H} with weight p on x_H.
struct BoundaryAtom {
    double p, x_H, atom_mass;
    double alpha;
    double E1, E2;

    double variance() const { return E2 - E1 * E1; }
    double payoff() const { return 0.5 - atom_mass * p * alpha * x_H; }
};

using BayesEquilibrium = std::variant<AffineBNE, CutoffAffine, BoundaryAtom>;

// Closed-form moments of the affine rule from (a, b, Delta, sigma^2). Stable
// at a = 0 and as sigma^2 -> 0; the slope is infinite in the latter limit
// when a(c - M1) > b^2.
struct AffineMoments {
    double E1, variance, Y;  // Y = b - a E1
};
AffineMoments affine_moments(double a, double b, double Delta, double sigma_sq);

AffineBNE affine_bne(double a, double b, double c, const TypeDistribution& dist);

BayesEquilibrium solve_bayes(double a, double b, double c, const TypeDistribution& dist);

// a_F(t) = 4 b^2 (c - t) B(t) / D(t)^2.
double a_F(double b, double c, const TypeDistribution& dist, double t);

double dropout_threshold(double b, double c, const TypeDistribution& dist);

struct CutoffPoint {
    double t, lambda, dropout_rate;
};
CutoffPoint cutoff_map(double b, double c, const TypeDistribution& dist, double a);

bool truncation_check_simple(double a, double b, double c, double alpha, double beta, const AffineBNE& bne);
bool truncation_check_support(double a, double b, double c, double alpha, double beta, const AffineBNE& bne);

// Raw probability range over the affine support [x(beta), x(alpha)]^2.
std::pair<double, double> support_probability_range(double a, double b, double c, double alpha,
                                                    double beta, const AffineBNE& bne);

}  // namespace cubic
