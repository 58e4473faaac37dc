#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cli.hpp"

namespace cli {

using namespace cubic;

json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    require(bool(in), "cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw InvalidInput(path + ": " + e.what());
    }
}

void write_output(const std::string& text, const std::string& out_path)
{
    if (out_path.empty()) {
        std::fputs(text.c_str(), stdout);
        return;
    }
    std::ofstream out(out_path);
    require(bool(out), "cannot write " + out_path);
    out << text;
}

namespace {

double num(const json& j, const char* key)
{
    require(j.contains(key) && j[key].is_number(), std::string("missing numeric field '") + key + "'");
    return j[key].get<double>();
}

Eigen::VectorXd vec(const json& j, const char* key)
{
    require(j.contains(key) && j[key].is_array(), std::string("missing array field '") + key + "'");
    const auto v = j[key].get<std::vector<double>>();
    return Eigen::Map<const Eigen::VectorXd>(v.data(), Eigen::Index(v.size()));
}

// NaN and infinities serialize as null.
json finite(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

const char* admissibility_name(Admissibility a)
{
    switch (a) {
    case Admissibility::Admissible: return "admissible";
    case Admissibility::NotAdmissible: return "not_admissible";
    default: return "inapplicable";
    }
}

}  // namespace

TypeDistribution distribution_from_json(const json& j, double c)
{
    require(j.is_object() && j.contains("kind"), "distribution needs a 'kind'");
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "uniform") return TypeDistribution(Uniform{num(j, "alpha"), num(j, "beta")}, c);
    if (kind == "degenerate") return TypeDistribution(Degenerate{num(j, "value")}, c);
    if (kind == "discrete") return TypeDistribution(Discrete{vec(j, "atoms"), vec(j, "weights")}, c);
    if (kind == "beta_mixture") {
        require(j.contains("components") && j["components"].is_array(), "beta_mixture needs 'components'");
        ShiftedBetaMixture m{num(j, "alpha"), num(j, "beta"), {}};
        for (const auto& comp : j["components"]) m.components.push_back({num(comp, "weight"), num(comp, "p"), num(comp, "q")});
        return TypeDistribution(m, c);
    }
    throw InvalidInput("unknown distribution kind '" + kind + "'");
}

Model model_from_json(const json& j)
{
    require(j.is_object(), "expected a JSON object");
    require(j.contains("model") && j.contains("params"), "expected 'model' and 'params'");
    Model m;
    m.kind = j["model"].get<std::string>();
    require(m.kind == "complete" || m.kind == "bayes", "model must be 'complete' or 'bayes'");
    const json& p = j["params"];
    m.a = num(p, "a");
    m.b = num(p, "b");
    m.c = num(p, "c");
    if (m.kind == "complete") {
        m.theta = num(p, "theta");
    } else {
        require(j.contains("dist"), "bayes model needs 'dist'");
        m.dist_json = j["dist"];
        m.dist = distribution_from_json(m.dist_json, m.c);
    }
    return m;
}

json model_to_json(const Model& m)
{
    json j;
    j["model"] = m.kind;
    j["params"] = {{"a", m.a}, {"b", m.b}, {"c", m.c}};
    if (m.theta) j["params"]["theta"] = *m.theta;
    if (m.kind == "bayes") j["dist"] = m.dist_json;
    return j;
}

namespace {

json complete_json(const Model& m)
{
    const CompleteInfoProblem pr(ContestTechnology(m.a, m.b, m.c), *m.theta);
    const auto eq = solve_complete(pr);
    json e;
    e["kappa"] = m.a != 0.0 ? finite(pr.kappa()) : json(nullptr);
    e["zeta"] = m.a != 0.0 ? finite(pr.zeta()) : json(nullptr);
    json checks;
    checks["participation"] = participation_check(pr, eq);
    if (const auto* p = std::get_if<PureSymmetric>(&eq)) {
        e["type"] = "pure";
        e["x_star"] = p->x_star;
        e["E1"] = p->x_star;
        e["variance"] = 0.0;
        e["payoff"] = p->payoff;
    } else {
        const auto& mm = std::get<MixedMoments>(eq);
        const auto& r = mm.representation;
        e["type"] = "mixed";
        e["s"] = pr.s();
        e["E1"] = mm.mean;
        e["variance"] = mm.variance;
        e["payoff"] = mm.payoff;
        e["representation"] = {{"low", r.low},
                               {"high", r.high},
                               {"p_low", r.p_low},
                               {"p_high", r.p_high},
                               {"branch", r.branch == Branch::Symmetric ? "symmetric" : "endpoint"}};
        checks["admissibility"] = admissibility_name(branch_admissibility(pr, r));
        checks["simple_sufficient"] = simple_sufficient_check(pr);
        checks["local_support"] = local_support_check(pr, r);
        if (const auto am = a_bar_M(m.b, m.c, *m.theta)) e["a_bar_M"] = *am;
    }
    e["total_effort"] = total_effort(m.a, m.b, m.c, *m.theta);
    json out = model_to_json(m);
    out["equilibrium"] = e;
    out["checks"] = checks;
    return out;
}

json bayes_json(const Model& m)
{
    const auto& dist = *m.dist;
    const auto eq = solve_bayes(m.a, m.b, m.c, dist);
    const auto mo = dist.moments();
    json e, checks;
    if (const auto* f = std::get_if<AffineBNE>(&eq)) {
        e = {{"type", "affine"},         {"k", f->k},           {"d", f->d},
             {"E1", f->E1},              {"variance", f->variance}, {"omega", f->omega},
             {"zeta", finite(f->zeta)},  {"kappa", finite(f->kappa)}, {"dropout_rate", 0.0},
             {"payoff", f->payoff()}};
        if (dist.atomless()) {
            checks["truncation_simple"] = truncation_check_simple(m.a, m.b, m.c, dist.alpha(), dist.beta(), *f);
            checks["truncation_support"] = truncation_check_support(m.a, m.b, m.c, dist.alpha(), dist.beta(), *f);
        }
    } else if (const auto* t = std::get_if<CutoffAffine>(&eq)) {
        e = {{"type", "cutoff"},     {"lambda", t->lambda}, {"t", t->t},
             {"E1", t->E1},          {"E2", t->E2},         {"variance", t->variance()},
             {"dropout_rate", t->dropout_rate}, {"A", t->A}, {"B", t->B},
             {"payoff", t->payoff()}, {"additional_roots_detected", t->additional_roots_detected}};
        if (dist.beta() > dist.alpha()) e["s"] = (t->t - dist.alpha()) / (dist.beta() - dist.alpha());
    } else {
        const auto& ba = std::get<BoundaryAtom>(eq);
        e = {{"type", "boundary"}, {"p", ba.p},   {"x_H", ba.x_H}, {"atom_mass", ba.atom_mass},
             {"alpha", ba.alpha},  {"E1", ba.E1}, {"E2", ba.E2},   {"variance", ba.variance()},
             {"dropout_rate", 1.0 - ba.atom_mass * ba.p}, {"payoff", ba.payoff()}};
    }
    e["a_D"] = dist.atomless() ? finite(dropout_threshold(m.b, m.c, dist)) : json(nullptr);
    json out = model_to_json(m);
    out["moments"] = {{"M1", mo.M1}, {"M2", mo.M2}, {"variance", mo.variance}, {"Delta", mo.Delta}};
    out["equilibrium"] = e;
    out["checks"] = checks;
    return out;
}

}  // namespace

json solve_to_json(const Model& m) { return m.kind == "complete" ? complete_json(m) : bayes_json(m); }

json report_to_json(const VerificationReport& r)
{
    json j = {{"max_gain", r.max_gain},
              {"argmax_deviation", r.argmax_deviation},
              {"zero_equivalent", r.zero_equivalent()},
              {"grid", {{"lo", r.grid.lo}, {"hi", r.grid.hi}, {"n", r.grid.n}}},
              {"quadrature", {{"scheme", r.quadrature.scheme}, {"nodes", r.quadrature.nodes}, {"est_error", r.quadrature.est_error}}},
              {"truncation_active_on_path", r.truncation_active_on_path},
              {"probability_range_on_path", {r.probability_range_on_path.first, r.probability_range_on_path.second}}};
    j["argmax_type"] = r.argmax_type ? json(*r.argmax_type) : json(nullptr);
    return j;
}

VerificationReport verify_model(const Model& m, const VerifyOptions& opt)
{
    if (m.kind == "complete") {
        const CompleteInfoProblem pr(ContestTechnology(m.a, m.b, m.c), *m.theta);
        return verify_equilibrium(pr, solve_complete(pr), opt);
    }
    return verify_equilibrium(m.a, m.b, m.c, *m.dist, solve_bayes(m.a, m.b, m.c, *m.dist), opt);
}

SweepRow sweep_row(const Model& m)
{
    const json s = solve_to_json(m);
    const json& e = s["equilibrium"];
    const std::string type = e["type"].get<std::string>();
    return {m.a, type, e["E1"].get<double>(), e["variance"].get<double>(),
            e.value("dropout_rate", 0.0), e["payoff"].get<double>()};
}

std::string format_number(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace cli
