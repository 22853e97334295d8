// rarita-kit: verification suite, symbol scan, and gradient-flow experiments
// for the spinor-hom / aquaternionic-moduli library.
//
// Exit codes: 0 all checks pass, 1 check failure or solver divergence,
// 2 configuration error, 3 I/O error.

#include <cstdio>
#include <filesystem>
#include <optional>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rarita/checkpoint.hpp"
#include "rarita/flow.hpp"
#include "rarita/linalg.hpp"
#include "rarita/moduli.hpp"
#include "rarita/rng.hpp"
#include "rarita/suite.hpp"

namespace fs = std::filesystem;
using namespace rarita;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitIoError = 3;

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    os << text;
    if (!os) throw std::runtime_error("short write to " + path.string());
}

int cmd_verify(const SuiteConfig& cfg, const std::string& out_dir) {
    SuiteReport rep = run_suite(cfg);
    std::string json = suite_report_json(rep);
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        write_text(fs::path(out_dir) / "suite_report.json", json);
    }
    int passed = 0;
    for (const auto& c : rep.checks) {
        std::printf("[%s] %-42s worst %.3e (tol %.1e, %d samples)%s%s\n",
                    c.pass ? "PASS" : "FAIL", c.name.c_str(), c.worst_error, c.tol, c.samples,
                    c.note.empty() ? "" : "  -- ", c.note.c_str());
        passed += c.pass;
    }
    std::printf("%d/%zu checks passed (seed %llu)\n", passed, rep.checks.size(),
                static_cast<unsigned long long>(cfg.seed));
    return rep.all_pass ? kExitOk : kExitCheckFailure;
}

int cmd_symbol_scan(int samples, uint64_t seed, const std::string& out_dir) {
    Rng rng(seed, "symbol-scan-cli");
    double min_det = std::numeric_limits<double>::infinity();
    double min_smin = min_det;
    double min_reg_smin = min_det;
    std::string csv = "a,b,c,d,lambda,xi1,xi2,xi3,det,sigma_min,reg_det,reg_sigma_min\n";
    char line[512];
    for (int t = 0; t < samples; ++t) {
        WmuChartPoint p;
        do {
            p.a = rng.normal();
            p.b = rng.normal();
            p.c = rng.normal();
            p.d = rng.normal();
        } while (p.r2() < 1e-4);
        p.lambda = 1.5 * rng.normal();
        ImQuaternion xi{rng.normal(), rng.normal(), rng.normal()};
        double nx = std::sqrt(norm2(xi));
        if (nx < 1e-6) {
            xi = kI;
            nx = 1;
        }
        xi = (1.0 / nx) * xi;
        SymbolMatrix sm = symbol_matrix(p, xi);
        auto sv = singular_values(sm.m);
        Mat44 reg = symbol_regression_matrix(p);
        auto rsv = singular_values(reg);
        double rdet = det4(reg);
        min_det = std::min(min_det, sm.det);
        min_smin = std::min(min_smin, sv[3]);
        min_reg_smin = std::min(min_reg_smin, rsv[3]);
        std::snprintf(line, sizeof line,
                      "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      p.a, p.b, p.c, p.d, p.lambda, xi.x, xi.y, xi.z, sm.det, sv[3], rdet, rsv[3]);
        csv += line;
    }
    nlohmann::json j;
    j["schema"] = "rarita-kit/symbol-scan/v1";
    j["rng"] = Rng::kName;
    j["seed"] = seed;
    j["samples"] = samples;
    j["min_det"] = min_det;
    j["min_sigma_min"] = min_smin;
    j["min_regression_sigma_min"] = min_reg_smin;
    j["frozen_unit_det"] = std::sqrt(2.0 / 27.0);
    j["injective"] = (min_det > 0 && min_smin > 0);
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        write_text(fs::path(out_dir) / "symbol_scan.csv", csv);
        write_text(fs::path(out_dir) / "symbol_scan.json", j.dump(2) + "\n");
    }
    std::printf("symbol scan: %d samples, min det %.6g, min sigma_min %.6g -> %s\n", samples,
                min_det, min_smin, (min_det > 0 && min_smin > 0) ? "injective" : "DEGENERATE");
    return (min_det > 0 && min_smin > 0) ? kExitOk : kExitCheckFailure;
}

struct FlowOverrides {
    std::optional<uint64_t> seed;
    std::optional<int> n;
    std::optional<int> max_iters;
    std::optional<double> step;
    std::optional<double> grad_tol;
};

int cmd_flow(const std::string& config_path, const std::string& out_dir,
             const std::string& resume_prefix, const FlowOverrides& ov) {
    std::ifstream is(config_path);
    if (!is) {
        std::fprintf(stderr, "error: cannot read flow config %s\n", config_path.c_str());
        return kExitIoError;
    }
    std::stringstream ss;
    ss << is.rdbuf();
    FlowConfig cfg;
    try {
        cfg = parse_flow_config(ss.str());
        if (ov.seed) cfg.seed = *ov.seed;
        if (ov.n) cfg.n = *ov.n;
        if (ov.max_iters) cfg.max_iters = *ov.max_iters;
        if (ov.step) cfg.step = *ov.step;
        if (ov.grad_tol) cfg.grad_tol = *ov.grad_tol;
        cfg.validate();
    } catch (const std::invalid_argument& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return kExitConfigError;
    }
    fs::create_directories(out_dir);
    FlowState state;
    if (resume_prefix.empty()) {
        state = initial_state(cfg);
    } else {
        state.psi = read_spinor_checkpoint(resume_prefix + ".psi");
        state.A = read_connection_checkpoint(resume_prefix + ".a");
        auto meta = read_checkpoint_meta(resume_prefix + ".psi");
        if (!meta.count("stage_next"))
            throw std::runtime_error("resume checkpoint lacks stage_next metadata");
        state.next_stage = std::stoi(meta.at("stage_next"));
    }
    std::string prefix = (fs::path(out_dir) / "checkpoint").string();
    FlowReport rep;
    try {
        rep = run_flow(cfg, std::move(state), prefix);
    } catch (const FlowDivergence& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return kExitCheckFailure;
    }
    write_text(fs::path(out_dir) / "flow_report.json", flow_report_json(rep));
    write_text(fs::path(out_dir) / "energy_trace.csv", flow_trace_csv(rep));
    const auto& dr = rep.degenerate_residuals;
    std::printf("flow done: %zu stages, degenerate residuals rs %.3e mu %.3e kerc %.3e l4 %.3e\n",
                rep.stages.size(), dr.rs_residual, dr.curvature_residual, dr.kerc_residual,
                dr.l4_constraint);
    if (rep.fueter_emitted)
        std::printf("induced section emitted: fueter residual %.3e\n", rep.final_fueter_residual);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rarita-kit: spinor-hom moduli verification and flow toolkit"};
    app.require_subcommand(1);

    SuiteConfig scfg;
    std::string out_dir;
    auto* verify = app.add_subcommand("verify", "run the full verification suite");
    verify->add_option("--seed", scfg.seed, "random seed");
    verify->add_option("--samples", scfg.samples_algebraic, "samples for algebraic checks");
    verify->add_option("--samples-geometric", scfg.samples_geometric,
                       "samples for geometric checks");
    verify->add_option("--tol-exact", scfg.tol_exact, "tolerance for exact identities");
    verify->add_option("--tol-fd", scfg.tol_fd, "tolerance for finite-difference checks");
    verify->add_option("--threads", scfg.threads, "worker threads (0 = hardware)");
    verify->add_option("--out", out_dir, "directory for suite_report.json");

    int scan_samples = 10000;
    uint64_t scan_seed = 7;
    std::string scan_out;
    auto* scan = app.add_subcommand("symbol-scan", "injectivity scan of the restricted symbol");
    scan->add_option("--samples", scan_samples, "number of (point, covector) samples");
    scan->add_option("--seed", scan_seed, "random seed");
    scan->add_option("--out", scan_out, "directory for CSV and JSON summaries");

    std::string flow_config, flow_out = "flow-out", flow_resume;
    FlowOverrides ov;
    uint64_t ov_seed = 0;
    int ov_n = 0, ov_iters = 0;
    double ov_step = 0, ov_gtol = 0;
    auto* flow = app.add_subcommand("flow", "run the constrained gradient flow");
    flow->add_option("--config", flow_config, "flow config JSON")->required();
    flow->add_option("--out", flow_out, "output directory");
    flow->add_option("--resume", flow_resume,
                     "checkpoint prefix to resume from (expects <prefix>.psi / <prefix>.a)");
    auto* o_seed = flow->add_option("--seed", ov_seed, "override config seed");
    auto* o_n = flow->add_option("--n", ov_n, "override lattice size");
    auto* o_iters = flow->add_option("--max-iters", ov_iters, "override iteration cap");
    auto* o_step = flow->add_option("--step", ov_step, "override step size");
    auto* o_gtol = flow->add_option("--grad-tol", ov_gtol, "override gradient tolerance");

    CLI11_PARSE(app, argc, argv);

    try {
        if (verify->parsed()) return cmd_verify(scfg, out_dir);
        if (scan->parsed()) return cmd_symbol_scan(scan_samples, scan_seed, scan_out);
        if (flow->parsed()) {
            if (o_seed->count()) ov.seed = ov_seed;
            if (o_n->count()) ov.n = ov_n;
            if (o_iters->count()) ov.max_iters = ov_iters;
            if (o_step->count()) ov.step = ov_step;
            if (o_gtol->count()) ov.grad_tol = ov_gtol;
            return cmd_flow(flow_config, flow_out, flow_resume, ov);
        }
    } catch (const std::invalid_argument& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return kExitConfigError;
    } catch (const std::exception& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return kExitIoError;
    }
    return kExitConfigError;
}
