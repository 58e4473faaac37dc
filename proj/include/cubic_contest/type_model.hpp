#pragma once

#include <Eigen/Core>

#include <variant>
#include <vector>

namespace cubic {

struct Degenerate {
    double value;
};

struct Discrete {
    Eigen::VectorXd atoms;
    Eigen::VectorXd weights;
};

struct Uniform {
    double alpha, beta;
};

struct BetaComponent {
    double weight, p, q;
};

// theta = alpha + (beta - alpha) Z, Z a finite beta mixture on [0, 1].
struct ShiftedBetaMixture {
    double alpha, beta;
    std::vector<BetaComponent> components;
};

struct Moments {
    double M1, M2, variance, Delta;
};

struct LowerPartialMoments {
    double t;
    double F;  // Pr(theta < t); equals Pr(theta <= t) on atomless priors
    double A;  // E[(t - theta)_+]
    double B;  // E[(t - theta)_+^2]
    double D;  // B + 2(c - t) A
};

class TypeDistribution {
public:
    using Kind = std::variant<Degenerate, Discrete, Uniform, ShiftedBetaMixture>;

    TypeDistribution(Kind kind, double c);

    const Kind& kind() const { return kind_; }
    double c() const { return c_; }
    double alpha() const;
    double beta() const;
    bool atomless() const;
    double atom_mass_at_alpha() const;

    Moments moments() const;
    LowerPartialMoments lower_partial(double t) const;

    // Density on (alpha, beta); atomless kinds only.
    double density(double theta) const;

private:
    Kind kind_;
    double c_;
    std::vector<double> log_norm_;  // log B(p, q) per beta component
};

struct NoDisclosure {};
struct FullDisclosure {};
struct Garbling {
    Eigen::MatrixXd matrix;  // rows: atoms, columns: signal labels
};

using SignalStructure = std::variant<NoDisclosure, FullDisclosure, Garbling>;

TypeDistribution posterior_mean_distribution(const TypeDistribution& dist, const SignalStructure& signal);

// Signal first by g1, then garble the label by g2.
Garbling compose(const Garbling& g1, const Garbling& g2);

}  // namespace cubic
