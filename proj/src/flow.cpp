#include "rarita/flow.hpp"

#include "rarita/checkpoint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace rarita {

namespace {

double field_dot(const SpinorHomField& a, const SpinorHomField& b) {
    double acc = 0;
    for (size_t i = 0; i < a.v.size(); ++i)
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 3; ++c)
                acc += a.v[i].m[r][c].real() * b.v[i].m[r][c].real() +
                       a.v[i].m[r][c].imag() * b.v[i].m[r][c].imag();
    return acc;
}

double conn_dot(const U1Connection& a, const U1Connection& b) {
    double acc = 0;
    for (size_t i = 0; i < a.a.size(); ++i)
        for (int k = 0; k < 3; ++k) acc += a.a[i][k] * b.a[i][k];
    return acc;
}

/// component of M in the orthonormal Pauli frame fixed by imh_to_isu2
double moment_component(const MomentValue& m, int axis) {
    ImQuaternion e{axis == 0 ? 1.0 : 0.0, axis == 1 ? 1.0 : 0.0, axis == 2 ? 1.0 : 0.0};
    return rdot(m, imh_to_isu2(e));
}

MomentField mismatch_field(const U1Connection& A, const SpinorHomField& psi, double epsilon) {
    MomentField curv = curvature_star(A);
    MomentField m(psi.geom);
    double eps2 = epsilon * epsilon;
    for (int i = 0; i < psi.geom.sites(); ++i)
        m.v[i] = eps2 * curv.v[i] - moment_map(psi[i]);
    return m;
}

void renormalize_l4(SpinorHomField& psi) {
    double n4 = l4_norm(psi);
    if (n4 > 1e-300) {
        double s = 1.0 / n4;
        for (auto& v : psi.v) v = s * v;
    }
}

}  // namespace

void FlowConfig::validate() const {
    if (n < 4 || n % 2 != 0) throw std::invalid_argument("flow config: n must be even and >= 4");
    if (!(h > 0)) throw std::invalid_argument("flow config: h must be positive");
    if (epsilon_schedule.empty())
        throw std::invalid_argument("flow config: epsilon_schedule must be nonempty");
    for (size_t i = 0; i < epsilon_schedule.size(); ++i) {
        if (epsilon_schedule[i] < 0)
            throw std::invalid_argument("flow config: epsilon_schedule entries must be >= 0");
        if (i && !(epsilon_schedule[i] < epsilon_schedule[i - 1]))
            throw std::invalid_argument("flow config: epsilon_schedule must be strictly decreasing");
    }
    // stability cap from the Dirac operator norm bound 2 sqrt(3)/h
    double cap = h * h / 12.0;
    if (!(step > 0) || step > cap)
        throw std::invalid_argument("flow config: step must be in (0, h^2/12]");
    if (max_iters < 1) throw std::invalid_argument("flow config: max_iters must be >= 1");
    if (!(grad_tol > 0)) throw std::invalid_argument("flow config: grad_tol must be positive");
    if (kerc_penalty < 0) throw std::invalid_argument("flow config: kerc_penalty must be >= 0");
}

double energy(const U1Connection& A, const SpinorHomField& psi, double epsilon,
              double kerc_penalty) {
    if (epsilon < 0) throw std::invalid_argument("energy: negative epsilon");
    const double vol = psi.geom.volume_element();
    SpinorHomField q = dirac_twisted(A, psi);
    double e1 = 0;
    for (auto& s : q.v) {
        s = project_threehalf(s);
        e1 += norm2(s);
    }
    MomentField m = mismatch_field(A, psi, epsilon);
    double e2 = 0;
    for (const auto& s : m.v) e2 += norm2(s);
    double e3 = 0;
    for (const auto& s : psi.v) e3 += norm2(clifford_contract(s));
    return vol * (e1 + e2 + kerc_penalty * e3);
}

void gradient(const U1Connection& A, const SpinorHomField& psi, double epsilon,
              double kerc_penalty, U1Connection& dA, SpinorHomField& dpsi) {
    const auto& g = psi.geom;
    const double vol = g.volume_element();
    dA = U1Connection(g);
    dpsi = SpinorHomField(g);

    // rs term: R = pi D psi, grad_psi = h^3 D R
    SpinorHomField R = dirac_twisted(A, psi);
    for (auto& s : R.v) s = project_threehalf(s);
    SpinorHomField DR = dirac_twisted(A, R);
    for (int i = 0; i < g.sites(); ++i) dpsi[i] += vol * DR[i];

    // rs term, connection part
    for (int i = 0; i < g.sites(); ++i)
        for (int k = 0; k < 3; ++k) {
            int ip = g.shift(i, k, +1);
            Axis ax = static_cast<Axis>(k);
            SpinorHom t1 = hk_apply(ax, circle_gen(gauge_rotate(psi[ip], g.h * A.a[i][k])));
            SpinorHom t2 = hk_apply(ax, circle_gen(gauge_rotate(psi[i], -g.h * A.a[i][k])));
            dA.a[i][k] += vol * (rdot(R[i], t1) + rdot(R[ip], t2));
        }

    // moment mismatch term
    MomentField M = mismatch_field(A, psi, epsilon);
    for (int i = 0; i < g.sites(); ++i) dpsi[i] -= vol * moment_diff_adjoint(psi[i], M.v[i]);
    const double w_curv = 2.0 * vol * epsilon * epsilon / g.h;
    for (int i = 0; i < g.sites(); ++i)
        for (int m = 0; m < 3; ++m) {
            int k1 = (m + 1) % 3, k2 = (m + 2) % 3;
            double wm = w_curv * moment_component(M.v[i], m);
            // (star F)_m(i) = (a_{k2}(i+e_{k1}) - a_{k2}(i) - a_{k1}(i+e_{k2}) + a_{k1}(i))/h
            dA.a[g.shift(i, k1, +1)][k2] += wm;
            dA.a[i][k2] -= wm;
            dA.a[g.shift(i, k2, +1)][k1] -= wm;
            dA.a[i][k1] += wm;
        }

    // ker-c penalty: grad = -2 w h^3 iota(c(psi))
    for (int i = 0; i < g.sites(); ++i) {
        Spinor c = clifford_contract(psi[i]);
        dpsi[i] -= (2.0 * kerc_penalty * vol) * iota(c);
    }
}

FlowState initial_state(const FlowConfig& cfg) {
    cfg.validate();
    LatticeGeometry g{cfg.n, cfg.h};
    check_geometry(g);
    FlowState st{U1Connection(g), SpinorHomField(g), 0};
    Rng rp(cfg.seed, "flow-psi");
    for (auto& s : st.psi.v)
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 3; ++c)
                s.m[r][c] = cfg.init_amplitude * cx{rp.normal(), rp.normal()};
    Rng ra(cfg.seed, "flow-a");
    for (auto& site : st.A.a)
        for (int k = 0; k < 3; ++k) site[k] = 0.1 * cfg.init_amplitude * ra.normal();
    renormalize_l4(st.psi);
    return st;
}

FlowReport run_flow(const FlowConfig& cfg, FlowState state, const std::string& checkpoint_prefix) {
    cfg.validate();
    FlowReport rep;
    rep.config = cfg;
    rep.checkpoint_prefix = checkpoint_prefix;
    U1Connection& A = state.A;
    SpinorHomField& psi = state.psi;

    for (int stage = state.next_stage; stage < static_cast<int>(cfg.epsilon_schedule.size());
         ++stage) {
        double eps = cfg.epsilon_schedule[stage];
        FlowStageSummary sum;
        sum.stage = stage;
        sum.epsilon = eps;
        sum.initial_energy = energy(A, psi, eps, cfg.kerc_penalty);
        double cur = sum.initial_energy;
        std::string stop = "max_iters";

        U1Connection dA;
        SpinorHomField dpsi;
        int iter = 0;
        for (; iter < cfg.max_iters; ++iter) {
            gradient(A, psi, eps, cfg.kerc_penalty, dA, dpsi);
            double g2 = conn_dot(dA, dA) + field_dot(dpsi, dpsi);
            double gnorm = std::sqrt(g2);
            Residuals res = residuals(A, psi, eps, RsswMode::blowup);
            if (!std::isfinite(cur) || !std::isfinite(gnorm))
                throw FlowDivergence("flow diverged: non-finite energy or gradient");
            if (gnorm <= cfg.grad_tol) {
                rep.trace.push_back({stage, iter, eps, cur, gnorm, 0.0, res});
                stop = "grad_tol";
                break;
            }
            double eta = cfg.step;
            bool accepted = false;
            for (int bt = 0; bt < 40; ++bt) {
                U1Connection Ac = A;
                SpinorHomField pc = psi;
                for (int i = 0; i < A.geom.sites(); ++i)
                    for (int k = 0; k < 3; ++k) Ac.a[i][k] -= eta * dA.a[i][k];
                for (int i = 0; i < A.geom.sites(); ++i) pc[i] -= eta * dpsi[i];
                if (cfg.hard_project)
                    for (auto& s : pc.v) s = project_threehalf(s);
                renormalize_l4(pc);
                double enew = energy(Ac, pc, eps, cfg.kerc_penalty);
                if (!std::isfinite(enew)) throw FlowDivergence("flow diverged: non-finite energy");
                if (enew <= cur - 1e-4 * eta * g2) {
                    A = std::move(Ac);
                    psi = std::move(pc);
                    rep.trace.push_back({stage, iter, eps, cur, gnorm, eta, res});
                    cur = enew;
                    accepted = true;
                    break;
                }
                eta *= 0.5;
            }
            if (!accepted) {
                rep.trace.push_back({stage, iter, eps, cur, gnorm, 0.0, res});
                stop = "line_search_stall";
                break;
            }
        }
        sum.iters = iter;
        sum.final_energy = cur;
        sum.final_grad_norm = rep.trace.empty() ? 0.0 : rep.trace.back().grad_norm;
        sum.stop_reason = stop;
        rep.stages.push_back(sum);
        if (!checkpoint_prefix.empty()) {
            std::map<std::string, std::string> meta{
                {"stage_next", std::to_string(stage + 1)},
                {"seed", std::to_string(cfg.seed)},
                {"rng", Rng::kName}};
            write_checkpoint(checkpoint_prefix + "_stage" + std::to_string(stage) + ".psi", psi,
                             meta);
            write_checkpoint(checkpoint_prefix + "_stage" + std::to_string(stage) + ".a", A, meta);
        }
    }

    rep.degenerate_residuals = residuals(A, psi, 0.0, RsswMode::degenerate);
    double minn = std::numeric_limits<double>::infinity();
    for (const auto& s : psi.v) minn = std::min(minn, rnorm(s));
    rep.min_site_norm = minn;
    const Residuals& dr = rep.degenerate_residuals;
    if (dr.kerc_residual <= cfg.emit_tol && dr.curvature_residual <= cfg.emit_tol &&
        minn > 0) {
        ChartSection sec(psi.geom);
        bool ok = true;
        for (int i = 0; i < psi.geom.sites(); ++i) {
            try {
                sec.p[i] = quotient_project(psi[i], std::max(1e-6, 100 * cfg.emit_tol));
            } catch (const std::invalid_argument&) {
                ok = false;
                break;
            }
        }
        if (ok) {
            rep.fueter_emitted = true;
            rep.final_fueter_residual = fueter_residual(A, sec);
        }
    }
    if (!checkpoint_prefix.empty()) {
        std::map<std::string, std::string> meta{{"stage_next", "final"},
                                                {"seed", std::to_string(cfg.seed)},
                                                {"rng", Rng::kName}};
        write_checkpoint(checkpoint_prefix + "_final.psi", psi, meta);
        write_checkpoint(checkpoint_prefix + "_final.a", A, meta);
    }
    return rep;
}

static nlohmann::json residuals_json(const Residuals& r) {
    return {{"rs", r.rs_residual},
            {"curvature", r.curvature_residual},
            {"kerc", r.kerc_residual},
            {"l4", r.l4_constraint}};
}

std::string flow_report_json(const FlowReport& rep) {
    nlohmann::json j;
    j["schema"] = "rarita-kit/flow-report/v1";
    j["rng"] = Rng::kName;
    nlohmann::json cj;
    cj["n"] = rep.config.n;
    cj["h"] = rep.config.h;
    cj["epsilon_schedule"] = rep.config.epsilon_schedule;
    cj["step"] = rep.config.step;
    cj["max_iters"] = rep.config.max_iters;
    cj["grad_tol"] = rep.config.grad_tol;
    cj["seed"] = rep.config.seed;
    cj["kerc_penalty"] = rep.config.kerc_penalty;
    cj["hard_project"] = rep.config.hard_project;
    cj["init_amplitude"] = rep.config.init_amplitude;
    cj["emit_tol"] = rep.config.emit_tol;
    j["config"] = cj;
    j["stages"] = nlohmann::json::array();
    for (const auto& s : rep.stages)
        j["stages"].push_back({{"stage", s.stage},
                               {"epsilon", s.epsilon},
                               {"iters", s.iters},
                               {"initial_energy", s.initial_energy},
                               {"final_energy", s.final_energy},
                               {"final_grad_norm", s.final_grad_norm},
                               {"stop_reason", s.stop_reason}});
    j["trace_rows"] = rep.trace.size();
    j["degenerate_residuals"] = residuals_json(rep.degenerate_residuals);
    j["min_site_norm"] = rep.min_site_norm;
    j["fueter_emitted"] = rep.fueter_emitted;
    if (rep.fueter_emitted) j["fueter_residual"] = rep.final_fueter_residual;
    if (!rep.checkpoint_prefix.empty()) j["checkpoint_prefix"] = rep.checkpoint_prefix;
    return j.dump(2) + "\n";
}

std::string flow_trace_csv(const FlowReport& rep) {
    std::string out = "stage,iter,epsilon,energy,grad_norm,step_used,rs,curvature,kerc,l4\n";
    char buf[512];
    for (const auto& r : rep.trace) {
        std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      r.stage, r.iter, r.epsilon, r.energy, r.grad_norm, r.step_used,
                      r.res.rs_residual, r.res.curvature_residual, r.res.kerc_residual,
                      r.res.l4_constraint);
        out += buf;
    }
    return out;
}

FlowConfig parse_flow_config(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("flow config: invalid JSON: ") + e.what());
    }
    FlowConfig cfg;
    auto require = [&](const char* key) {
        if (!j.contains(key))
            throw std::invalid_argument(std::string("flow config: missing field '") + key + "'");
    };
    require("n");
    require("epsilon_schedule");
    require("step");
    require("max_iters");
    require("grad_tol");
    require("seed");
    cfg.n = j["n"].get<int>();
    cfg.epsilon_schedule = j["epsilon_schedule"].get<std::vector<double>>();
    cfg.step = j["step"].get<double>();
    cfg.max_iters = j["max_iters"].get<int>();
    cfg.grad_tol = j["grad_tol"].get<double>();
    cfg.seed = j["seed"].get<uint64_t>();
    if (j.contains("h")) cfg.h = j["h"].get<double>();
    if (j.contains("kerc_penalty")) cfg.kerc_penalty = j["kerc_penalty"].get<double>();
    if (j.contains("hard_project")) cfg.hard_project = j["hard_project"].get<bool>();
    if (j.contains("init_amplitude")) cfg.init_amplitude = j["init_amplitude"].get<double>();
    if (j.contains("emit_tol")) cfg.emit_tol = j["emit_tol"].get<double>();
    cfg.validate();
    return cfg;
}

}  // namespace rarita
