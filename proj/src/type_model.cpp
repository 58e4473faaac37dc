#include "cubic_contest/type_model.hpp"

#include <cmath>

#include "cubic_contest/errors.hpp"
#include "cubic_contest/numerics.hpp"

namespace cubic {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kWeightTol = 1e-12;

void check_support(double lo, double hi, double c)
{
    require(lo > 0.0 && hi < c && lo <= hi, "type distribution: support must lie inside (0, c)");
}

}  // namespace

TypeDistribution::TypeDistribution(Kind kind, double c) : kind_(std::move(kind)), c_(c)
{
    require(c > 0.0, "type distribution: c must be positive");
    std::visit(overloaded{
        [&](const Degenerate& d) { check_support(d.value, d.value, c); },
        [&](const Discrete& d) {
            require(d.atoms.size() > 0 && d.atoms.size() == d.weights.size(),
                    "discrete prior: atoms and weights must be nonempty and of equal length");
            require((d.weights.array() > 0.0).all(), "discrete prior: weights must be positive");
            require(std::fabs(d.weights.sum() - 1.0) <= kWeightTol, "discrete prior: weights must sum to 1");
            check_support(d.atoms.minCoeff(), d.atoms.maxCoeff(), c);
        },
        [&](const Uniform& u) {
            require(u.alpha < u.beta, "uniform prior: need alpha < beta");
            check_support(u.alpha, u.beta, c);
        },
        [&](const ShiftedBetaMixture& m) {
            require(m.alpha < m.beta, "beta mixture: need alpha < beta");
            require(!m.components.empty(), "beta mixture: no components");
            double sum = 0.0;
            for (const auto& k : m.components) {
                require(k.weight > 0.0 && k.p > 0.0 && k.q > 0.0,
                        "beta mixture: weights and shapes must be positive");
                sum += k.weight;
            }
            require(std::fabs(sum - 1.0) <= kWeightTol, "beta mixture: weights must sum to 1");
            check_support(m.alpha, m.beta, c);
            for (const auto& k : m.components)
                log_norm_.push_back(std::lgamma(k.p) + std::lgamma(k.q) - std::lgamma(k.p + k.q));
        }},
        kind_);
}

double TypeDistribution::alpha() const
{
    return std::visit(overloaded{
        [](const Degenerate& d) { return d.value; },
        [](const Discrete& d) { return d.atoms.minCoeff(); },
        [](const Uniform& u) { return u.alpha; },
        [](const ShiftedBetaMixture& m) { return m.alpha; }},
        kind_);
}

double TypeDistribution::beta() const
{
    return std::visit(overloaded{
        [](const Degenerate& d) { return d.value; },
        [](const Discrete& d) { return d.atoms.maxCoeff(); },
        [](const Uniform& u) { return u.beta; },
        [](const ShiftedBetaMixture& m) { return m.beta; }},
        kind_);
}

bool TypeDistribution::atomless() const
{
    return std::holds_alternative<Uniform>(kind_) || std::holds_alternative<ShiftedBetaMixture>(kind_);
}

double TypeDistribution::atom_mass_at_alpha() const
{
    if (std::holds_alternative<Degenerate>(kind_)) return 1.0;
    if (const auto* d = std::get_if<Discrete>(&kind_))
        return (d->atoms.array() == d->atoms.minCoeff()).select(d->weights.array(), 0.0).sum();
    return 0.0;
}

Moments TypeDistribution::moments() const
{
    // Variances come from shift-invariant forms to avoid M2 - M1^2 cancellation.
    double m1 = 0.0, var = 0.0;
    std::visit(overloaded{
        [&](const Degenerate& d) { m1 = d.value; },
        [&](const Discrete& d) {
            m1 = d.weights.dot(d.atoms);
            var = d.weights.dot((d.atoms.array() - m1).square().matrix());
        },
        [&](const Uniform& u) {
            const double h = u.beta - u.alpha;
            m1 = 0.5 * (u.alpha + u.beta);
            var = h * h / 12.0;
        },
        [&](const ShiftedBetaMixture& m) {
            double ez = 0.0, ez2 = 0.0;
            for (const auto& k : m.components) {
                const double n = k.p + k.q;
                ez += k.weight * k.p / n;
                ez2 += k.weight * k.p * (k.p + 1.0) / (n * (n + 1.0));
            }
            const double h = m.beta - m.alpha;
            m1 = m.alpha + h * ez;
            var = h * h * (ez2 - ez * ez);
        }},
        kind_);
    return {m1, var + m1 * m1, var, c_ - m1};
}

LowerPartialMoments TypeDistribution::lower_partial(double t) const
{
    const double lo = alpha();
    require(t >= lo && t <= c_, "lower_partial: t must lie in [alpha, c]");
    LowerPartialMoments r{t, 0.0, 0.0, 0.0, 0.0};
    auto atoms = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& w) {
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            if (x[i] >= t) continue;
            const double g = t - x[i];
            r.F += w[i];
            r.A += w[i] * g;
            r.B += w[i] * g * g;
        }
    };
    auto above_support = [&]() {
        const Moments m = moments();
        r.F = 1.0;
        r.A = t - m.M1;
        r.B = (t - m.M1) * (t - m.M1) + m.variance;
    };
    std::visit(overloaded{
        [&](const Degenerate& d) { atoms(Eigen::VectorXd::Constant(1, d.value), Eigen::VectorXd::Ones(1)); },
        [&](const Discrete& d) { atoms(d.atoms, d.weights); },
        [&](const Uniform& u) {
            if (t > u.beta) return above_support();
            const double h = u.beta - u.alpha, g = t - u.alpha;
            r.F = g / h;
            r.A = g * g / (2.0 * h);
            r.B = g * g * g / (3.0 * h);
        },
        [&](const ShiftedBetaMixture& m) {
            if (t >= m.beta) return above_support();
            const double h = m.beta - m.alpha, s = (t - m.alpha) / h;
            double f = 0.0, a = 0.0, b = 0.0;
            for (const auto& k : m.components) {
                const double i0 = numerics::incomplete_beta_moment(k.p, k.q, 0, s);
                const double i1 = numerics::incomplete_beta_moment(k.p, k.q, 1, s);
                const double i2 = numerics::incomplete_beta_moment(k.p, k.q, 2, s);
                f += k.weight * i0;
                a += k.weight * (s * i0 - i1);
                b += k.weight * (s * s * i0 - 2.0 * s * i1 + i2);
            }
            r.F = f;
            r.A = h * a;
            r.B = h * h * b;
        }},
        kind_);
    r.D = r.B + 2.0 * (c_ - t) * r.A;
    return r;
}

double TypeDistribution::density(double theta) const
{
    if (const auto* u = std::get_if<Uniform>(&kind_))
        return (theta >= u->alpha && theta <= u->beta) ? 1.0 / (u->beta - u->alpha) : 0.0;
    if (const auto* m = std::get_if<ShiftedBetaMixture>(&kind_)) {
        const double h = m->beta - m->alpha, z = (theta - m->alpha) / h;
        if (z <= 0.0 || z >= 1.0) return 0.0;
        const double lz = std::log(z), l1z = std::log1p(-z);
        double f = 0.0;
        for (std::size_t j = 0; j < m->components.size(); ++j) {
            const auto& k = m->components[j];
            f += k.weight * std::exp((k.p - 1.0) * lz + (k.q - 1.0) * l1z - log_norm_[j]);
        }
        return f / h;
    }
    throw InvalidInput("density: prior has atoms");
}

TypeDistribution posterior_mean_distribution(const TypeDistribution& dist, const SignalStructure& signal)
{
    if (std::holds_alternative<NoDisclosure>(signal))
        return TypeDistribution(Degenerate{dist.moments().M1}, dist.c());
    if (std::holds_alternative<FullDisclosure>(signal)) return dist;

    const auto& g = std::get<Garbling>(signal).matrix;
    Eigen::VectorXd x, w;
    if (const auto* d = std::get_if<Discrete>(&dist.kind())) { x = d->atoms; w = d->weights; }
    else if (const auto* d = std::get_if<Degenerate>(&dist.kind())) {
        x = Eigen::VectorXd::Constant(1, d->value);
        w = Eigen::VectorXd::Ones(1);
    }
    else throw InvalidInput("garbling: only discrete priors accept a garbling matrix");

    require(g.rows() == x.size() && g.cols() > 0, "garbling: matrix rows must match the prior's atoms");
    require((g.array() >= 0.0).all(), "garbling: entries must be nonnegative");
    require(((g.rowwise().sum().array() - 1.0).abs() <= kWeightTol).all(), "garbling: rows must sum to 1");

    const Eigen::VectorXd mass = g.transpose() * w;
    const Eigen::VectorXd first = g.transpose() * w.cwiseProduct(x);
    std::vector<double> means, weights;
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
        if (mass[j] <= 0.0) continue;
        means.push_back(first[j] / mass[j]);
        weights.push_back(mass[j]);
    }
    Discrete out{Eigen::Map<Eigen::VectorXd>(means.data(), Eigen::Index(means.size())),
                 Eigen::Map<Eigen::VectorXd>(weights.data(), Eigen::Index(weights.size()))};
    out.weights /= out.weights.sum();
    return TypeDistribution(std::move(out), dist.c());
}

Garbling compose(const Garbling& g1, const Garbling& g2)
{
    require(g1.matrix.cols() == g2.matrix.rows(), "compose: inner dimensions differ");
    return {g1.matrix * g2.matrix};
}

}  // namespace cubic
