#include "cubic_contest/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>

#include "cubic_contest/comparative_statics.hpp"
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

const numerics::GaussLegendre& gauss_legendre(int n)
{
    static std::mutex mu;
    static std::map<int, std::unique_ptr<numerics::GaussLegendre>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<numerics::GaussLegendre>(n);
    return *slot;
}

std::pair<double, double> finite_pairs_range(const ContestTechnology& t, const std::vector<double>& pts)
{
    double mn = 1.0, mx = 0.0;
    for (double x : pts)
        for (double y : pts) {
            const double p = raw_probability(t, x, y);
            mn = std::min(mn, p);
            mx = std::max(mx, p);
        }
    return {mn, mx};
}

// Roots of k2 y^2 + k1 y + k0 = 0.
std::vector<double> real_roots(double k0, double k1, double k2)
{
    if (k2 == 0.0) {
        if (k1 == 0.0) return {};
        return {-k0 / k1};
    }
    const double disc = k1 * k1 - 4.0 * k2 * k0;
    if (disc < 0.0) return {};
    const double q = -0.5 * (k1 + std::copysign(std::sqrt(disc), k1));
    std::vector<double> r{q / k2};
    if (q != 0.0) r.push_back(k0 / q);
    return r;
}

}  // namespace

OpponentLaw::OpponentLaw(const ContestTechnology& tech, const StrategyProfile& profile,
                         const TypeDistribution* dist, QuadratureOptions q)
    : tech_(tech), opts_(q)
{
    require(q.nodes >= 2 && q.max_doublings >= 0 && q.tol > 0.0, "quadrature options out of range");
    std::visit(overloaded{
        [&](const PureAction& p) {
            require(p.x >= 0.0, "pure action must be nonnegative");
            atoms_.push_back({p.x, 1.0});
        },
        [&](const FiniteMixture& m) {
            require(m.points.size() == m.probs.size() && m.points.size() > 0, "mixture: size mismatch");
            require((m.points.array() >= 0.0).all(), "mixture: efforts must be nonnegative");
            require((m.probs.array() >= 0.0).all() && std::fabs(m.probs.sum() - 1.0) <= 1e-12,
                    "mixture: probabilities must be nonnegative and sum to 1");
            for (Eigen::Index i = 0; i < m.points.size(); ++i) atoms_.push_back({m.points[i], m.probs[i]});
        },
        [&](const TypeRule& r) {
            require(dist != nullptr, "type rule: a prior is required");
            if (const auto* d = std::get_if<Discrete>(&dist->kind())) {
                for (Eigen::Index i = 0; i < d->atoms.size(); ++i) atoms_.push_back({r.rule(d->atoms[i]), d->weights[i]});
            } else if (const auto* d = std::get_if<Degenerate>(&dist->kind())) {
                atoms_.push_back({r.rule(d->value), 1.0});
            } else {
                dist_ = *dist;
                rule_ = r.rule;
            }
        }},
        profile);

    if (!dist_) {
        ymin_ = std::numeric_limits<double>::infinity();
        ymax_ = -ymin_;
        for (auto [y, w] : atoms_) {
            require(y >= 0.0, "opponent effort must be nonnegative");
            m1_ += w * y;
            m2_ += w * y * y;
            ymin_ = std::min(ymin_, y);
            ymax_ = std::max(ymax_, y);
        }
        info_ = {"exact", 0, 0.0};
        return;
    }

    // Piece boundaries: support ends, rule breakpoints, component modes.
    const double lo = dist_->alpha(), hi = dist_->beta();
    std::vector<double> cuts{lo, hi};
    for (double b : std::get<TypeRule>(profile).breakpoints)
        if (b > lo && b < hi) cuts.push_back(b);
    if (const auto* m = std::get_if<ShiftedBetaMixture>(&dist_->kind()))
        for (const auto& k : m->components)
            if (k.p > 1.0 && k.q > 1.0) cuts.push_back(lo + (hi - lo) * (k.p - 1.0) / (k.p + k.q - 2.0));
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) pieces_.push_back({cuts[i], cuts[i + 1]});

    auto moments_at = [&](int n) {
        const auto& gl = gauss_legendre(n);
        Eigen::Vector3d s = Eigen::Vector3d::Zero();
        for (const auto& p : pieces_) {
            s[0] += gl.integrate([&](double th) { return dist_->density(th); }, p.lo, p.hi);
            s[1] += gl.integrate([&](double th) { return rule_(th) * dist_->density(th); }, p.lo, p.hi);
            s[2] += gl.integrate([&](double th) { const double y = rule_(th); return y * y * dist_->density(th); },
                                 p.lo, p.hi);
        }
        return s;
    };
    int n = opts_.nodes;
    Eigen::Vector3d prev = moments_at(n);
    double err = std::numeric_limits<double>::infinity();
    for (int d = 0; d <= opts_.max_doublings; ++d) {
        const Eigen::Vector3d cur = moments_at(2 * n);
        err = (cur - prev).cwiseAbs().maxCoeff();
        n *= 2;
        prev = cur;
        if (err < opts_.tol) break;
    }
    if (!(err < opts_.tol))
        throw SolverError("quadrature did not converge; change after doublings = " + std::to_string(err));
    m1_ = prev[1];
    m2_ = prev[2];
    info_ = {"gauss-legendre", n, err};

    ymin_ = std::numeric_limits<double>::infinity();
    ymax_ = -ymin_;
    for (const auto& p : pieces_)
        for (double th : {p.lo, p.hi}) {
            ymin_ = std::min(ymin_, rule_(th));
            ymax_ = std::max(ymax_, rule_(th));
        }
    require(ymin_ >= 0.0, "type rule produced negative effort");
}

double OpponentLaw::integrate_adaptive(const std::function<double(double)>& f, double lo, double hi) const
{
    int n = opts_.nodes;
    double prev = gauss_legendre(n).integrate(f, lo, hi);
    for (int d = 0; d <= opts_.max_doublings; ++d) {
        n *= 2;
        const double cur = gauss_legendre(n).integrate(f, lo, hi);
        if (std::fabs(cur - prev) < opts_.tol) return cur;
        prev = cur;
    }
    throw SolverError("quadrature did not converge on a clipped piece");
}

// E[(-P)_+ - (P - 1)_+] over the continuous law, i.e. E[Pbar] - E[P].
double OpponentLaw::clip_correction(double x) const
{
    const double k0 = 0.5 + tech_.c * x - tech_.b * x * x;
    const double k1 = tech_.a * x * x - tech_.c;
    const double k2 = tech_.b - tech_.a * x;
    auto P = [&](double y) { return k0 + y * (k1 + k2 * y); };
    auto clip = [&](double y) {
        const double p = P(y);
        return p < 0.0 ? -p : (p > 1.0 ? 1.0 - p : 0.0);
    };

    std::vector<double> levels = real_roots(k0, k1, k2);
    for (double r : real_roots(k0 - 1.0, k1, k2)) levels.push_back(r);

    double total = 0.0;
    for (const auto& pc : pieces_) {
        const double ylo = rule_(pc.lo), yhi = rule_(pc.hi);
        const auto [pmin, pmax] = quadratic_range(k0, k1, k2, std::min(ylo, yhi), std::max(ylo, yhi));
        if (pmin >= 0.0 && pmax <= 1.0) continue;

        std::vector<double> cuts{pc.lo, pc.hi};
        for (double yr : levels) {
            if (!((yr - ylo) * (yr - yhi) < 0.0)) continue;
            const double th = numerics::find_root(
                [&](double s) { return (rule_(s) - yr) * (yhi > ylo ? 1.0 : -1.0); }, pc.lo, pc.hi);
            cuts.push_back(th);
        }
        std::sort(cuts.begin(), cuts.end());
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            const double l = cuts[i], h = cuts[i + 1];
            if (h <= l || clip(rule_(0.5 * (l + h))) == 0.0) continue;
            total += integrate_adaptive([&](double th) { return clip(rule_(th)) * dist_->density(th); }, l, h);
        }
    }
    return total;
}

double OpponentLaw::win_probability(double x, bool truncated) const
{
    const auto& t = tech_;
    if (!dist_) {
        double s = 0.0;
        for (auto [y, w] : atoms_)
            s += w * (truncated ? truncated_probability(t, x, y) : raw_probability(t, x, y));
        return s;
    }
    const double poly = 0.5 - t.c * m1_ + t.b * m2_ + x * (t.c - t.a * m2_) + x * x * (t.a * m1_ - t.b);
    if (!truncated) return poly;
    const double k0 = 0.5 + t.c * x - t.b * x * x, k1 = t.a * x * x - t.c, k2 = t.b - t.a * x;
    const auto [pmin, pmax] = quadratic_range(k0, k1, k2, ymin_, ymax_);
    if (pmin >= 0.0 && pmax <= 1.0) return poly;
    if (pmax <= 0.0) return 0.0;
    if (pmin >= 1.0) return 1.0;
    return poly + clip_correction(x);
}

double interim_payoff(const ContestTechnology&, double theta, double action, const OpponentLaw& opponent,
                      bool truncated)
{
    require(action >= 0.0, "interim_payoff: action must be nonnegative");
    return opponent.win_probability(action, truncated) - theta * action;
}

double interim_payoff(const ContestTechnology& tech, double theta, double action, const StrategyProfile& opponent,
                      const TypeDistribution* dist, bool truncated, QuadratureOptions q)
{
    return interim_payoff(tech, theta, action, OpponentLaw(tech, opponent, dist, q), truncated);
}

namespace {

Eigen::ArrayXd grid_points(const DeviationGrid& g)
{
    require(g.n >= 1 && g.hi > g.lo && g.lo >= 0.0, "deviation grid: need n >= 1 and 0 <= lo < hi");
    return Eigen::ArrayXd::LinSpaced(g.n + 1, g.lo, g.hi);
}

BestResponse best_on_grid(const Eigen::ArrayXd& xs, const Eigen::ArrayXd& win, double theta,
                          const OpponentLaw& law, bool truncated, bool refine)
{
    Eigen::Index i = 0;
    const double v = (win - theta * xs).maxCoeff(&i);
    BestResponse br{xs[i], v};
    if (refine && xs.size() > 2) {
        const double l = xs[std::max<Eigen::Index>(0, i - 1)], h = xs[std::min<Eigen::Index>(xs.size() - 1, i + 1)];
        auto f = [&](double x) { return law.win_probability(x, truncated) - theta * x; };
        const double x = numerics::golden_max(f, l, h, 80);
        const double fx = f(x);
        if (fx > br.value) br = {x, fx};
    }
    return br;
}

Eigen::ArrayXd win_on_grid(const Eigen::ArrayXd& xs, const OpponentLaw& law, bool truncated)
{
    return xs.unaryExpr([&](double x) { return law.win_probability(x, truncated); });
}

}  // namespace

BestResponse best_response_scan(const ContestTechnology&, double theta, const OpponentLaw& opponent,
                                bool truncated, const DeviationGrid& grid, bool refine)
{
    const Eigen::ArrayXd xs = grid_points(grid);
    return best_on_grid(xs, win_on_grid(xs, opponent, truncated), theta, opponent, truncated, refine);
}

StrategyProfile opponent_profile(const CompleteInfoEquilibrium& eq)
{
    return std::visit(overloaded{
        [](const PureSymmetric& p) -> StrategyProfile { return PureAction{p.x_star}; },
        [](const MixedMoments& m) -> StrategyProfile {
            const auto& r = m.representation;
            return FiniteMixture{Eigen::Vector2d(r.low, r.high), Eigen::Vector2d(r.p_low, r.p_high)};
        }},
        eq);
}

StrategyProfile opponent_profile(const BayesEquilibrium& eq)
{
    return std::visit(overloaded{
        [](const AffineBNE& e) -> StrategyProfile {
            return TypeRule{[k = e.k, d = e.d](double th) { return k * th + d; }, {}};
        },
        [](const CutoffAffine& e) -> StrategyProfile {
            return TypeRule{[l = e.lambda, t = e.t](double th) { return th < t ? l * (t - th) : 0.0; }, {e.t}};
        },
        [](const BoundaryAtom& e) -> StrategyProfile {
            const double q = e.atom_mass * e.p;
            return FiniteMixture{Eigen::Vector2d(0.0, e.x_H), Eigen::Vector2d(1.0 - q, q)};
        }},
        eq);
}

VerificationReport verify_equilibrium(const CompleteInfoProblem& pr, const CompleteInfoEquilibrium& eq,
                                      const VerifyOptions& opt)
{
    const auto& t = pr.tech;
    const OpponentLaw law(t, opponent_profile(eq), nullptr, opt.quad);
    VerificationReport rep;
    rep.grid = {0.0, opt.x_max.value_or(1.0 / pr.theta), opt.grid_n};
    rep.quadrature = law.quadrature();

    auto U = [&](double x) { return law.win_probability(x, opt.truncated) - pr.theta * x; };
    std::vector<double> support;
    double u_eq = 0.0;
    if (const auto* p = std::get_if<PureSymmetric>(&eq)) {
        support = {p->x_star};
        u_eq = U(p->x_star);
    } else {
        const auto& r = std::get<MixedMoments>(eq).representation;
        support = {r.low, r.high};
        u_eq = r.p_low * U(r.low) + r.p_high * U(r.high);
    }
    const auto br = best_response_scan(t, pr.theta, law, opt.truncated, rep.grid, opt.refine);
    rep.max_gain = br.value - u_eq;
    rep.argmax_deviation = br.argmax;
    rep.argmax_type = pr.theta;
    rep.probability_range_on_path = finite_pairs_range(t, support);
    rep.truncation_active_on_path =
        rep.probability_range_on_path.first < 0.0 || rep.probability_range_on_path.second > 1.0;
    return rep;
}

VerificationReport verify_equilibrium(double a, double b, double c, const TypeDistribution& dist,
                                      const BayesEquilibrium& eq, const VerifyOptions& opt)
{
    const ContestTechnology t(a, b, c);
    const OpponentLaw law(t, opponent_profile(eq), &dist, opt.quad);
    const double alpha = dist.alpha(), beta = dist.beta();

    VerificationReport rep;
    rep.grid = {0.0, opt.x_max.value_or(1.0 / alpha), opt.grid_n};
    rep.quadrature = law.quadrature();
    rep.max_gain = -std::numeric_limits<double>::infinity();

    std::vector<double> types;
    if (const auto* d = std::get_if<Discrete>(&dist.kind())) types.assign(d->atoms.data(), d->atoms.data() + d->atoms.size());
    else if (const auto* d = std::get_if<Degenerate>(&dist.kind())) types = {d->value};
    else {
        const int n = std::max(2, opt.type_sample);
        for (int i = 0; i < n; ++i) types.push_back(alpha + (beta - alpha) * i / (n - 1));
        if (const auto* e = std::get_if<CutoffAffine>(&eq); e && e->t > alpha && e->t < beta) types.push_back(e->t);
    }

    auto U = [&](double th, double x) { return law.win_probability(x, opt.truncated) - th * x; };
    auto u_eq = [&](double th) {
        return std::visit(overloaded{
            [&](const AffineBNE& e) { return U(th, e.effort(th)); },
            [&](const CutoffAffine& e) { return U(th, e.effort(th)); },
            [&](const BoundaryAtom& e) {
                return th == e.alpha ? (1.0 - e.p) * U(th, 0.0) + e.p * U(th, e.x_H) : U(th, 0.0);
            }},
            eq);
    };

    const Eigen::ArrayXd xs = grid_points(rep.grid);
    const Eigen::ArrayXd win = win_on_grid(xs, law, opt.truncated);
    for (double th : types) {
        const auto br = best_on_grid(xs, win, th, law, opt.truncated, opt.refine);
        const double gain = br.value - u_eq(th);
        if (gain > rep.max_gain) {
            rep.max_gain = gain;
            rep.argmax_deviation = br.argmax;
            rep.argmax_type = th;
        }
    }

    // On-path efforts: an interval for continuous priors, a finite set otherwise.
    std::vector<double> pts;
    std::optional<std::pair<double, double>> interval;
    std::visit(overloaded{
        [&](const AffineBNE& e) {
            if (dist.atomless()) interval = {{e.effort(beta), e.effort(alpha)}};
            else for (double th : types) pts.push_back(e.effort(th));
        },
        [&](const CutoffAffine& e) {
            if (dist.atomless()) interval = {{0.0, e.effort(alpha)}};
            else for (double th : types) pts.push_back(e.effort(th));
        },
        [&](const BoundaryAtom& e) { pts = {0.0, e.x_H}; }},
        eq);
    rep.probability_range_on_path =
        interval ? probability_range(t, interval->first, interval->second) : finite_pairs_range(t, pts);
    rep.truncation_active_on_path =
        rep.probability_range_on_path.first < 0.0 || rep.probability_range_on_path.second > 1.0;
    return rep;
}

double e1_omega_derivative(double a, double b, double Delta, double sigma_sq)
{
    require(a != 0.0, "e1_omega_derivative: undefined at a = 0");
    const double zeta = (b * b - a * Delta) / (a * a), omega = sigma_sq / (a * a);
    const double r = std::sqrt(zeta * zeta + omega);
    const double inner = zeta >= 0.0 ? zeta + r : omega / (r - zeta);
    return -std::copysign(1.0, a) / (4.0 * std::sqrt(2.0) * r * std::sqrt(inner));
}

FdResult finite_difference_check(FdTarget target, const FdPoint& p, double h)
{
    require(h > 0.0, "finite_difference_check: step must be positive");
    double analytic = 0.0, numeric = 0.0;
    switch (target) {
    case FdTarget::CrossPartial: {
        analytic = cross_partial(ContestTechnology(p.a, p.b, p.c), p.x, p.y);
        // Extended precision keeps stencil rounding far below the step error.
        using L = long double;
        const Technology<L> t(p.a, p.b, p.c);
        const L x = p.x, y = p.y, hl = h;
        numeric = double((raw_probability(t, x + hl, y + hl) - raw_probability(t, x + hl, y - hl) -
                          raw_probability(t, x - hl, y + hl) + raw_probability(t, x - hl, y - hl)) /
                         (4 * hl * hl));
        break;
    }
    case FdTarget::E1Omega: {
        const double a2 = p.a * p.a;
        const double w = p.sigma_sq / a2;
        analytic = e1_omega_derivative(p.a, p.b, p.Delta, p.sigma_sq);
        numeric = (expected_effort_of_a(p.a, p.b, p.Delta, (w + h) * a2) -
                   expected_effort_of_a(p.a, p.b, p.Delta, (w - h) * a2)) /
                  (2.0 * h);
        break;
    }
    case FdTarget::E1Variance: {
        analytic = p.a == 0.0 ? 0.0 : e1_omega_derivative(p.a, p.b, p.Delta, p.sigma_sq) / (p.a * p.a);
        numeric = (expected_effort_of_a(p.a, p.b, p.Delta, p.sigma_sq + h) -
                   expected_effort_of_a(p.a, p.b, p.Delta, p.sigma_sq - h)) /
                  (2.0 * h);
        break;
    }
    }
    return {analytic, numeric, std::fabs(analytic - numeric)};
}

}  // namespace cubic
