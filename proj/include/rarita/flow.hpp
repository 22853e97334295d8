#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rarita/lattice.hpp"
#include "rarita/rng.hpp"

// Constrained gradient flow for the blow-up family with continuation
// epsilon -> 0: projected gradient descent on the residual energy
//   E = |Q_A psi|^2 + |eps^2 *F_A - mu(psi)|^2 + w |c(psi)|^2
// with renormalization to |psi|_{L^4} = 1 after every step and Armijo
// backtracking on the post-renormalization energy.

namespace rarita {

struct FlowConfig {
    int n = 8;
    double h = 1.0;
    std::vector<double> epsilon_schedule = {1.0, 0.3, 0.1, 0.03};
    double step = 0.1;
    int max_iters = 200;
    double grad_tol = 1e-8;
    uint64_t seed = 1;
    double kerc_penalty = 1e3;
    bool hard_project = false;      // also project psi to ker c after each step
    double init_amplitude = 1.0;    // gaussian initial data scale
    double emit_tol = 1e-6;         // residual threshold for emitting fueter data

    void validate() const;
};

struct FlowIterRow {
    int stage = 0;
    int iter = 0;
    double epsilon = 0;
    double energy = 0;
    double grad_norm = 0;
    double step_used = 0;
    Residuals res;
};

struct FlowStageSummary {
    int stage = 0;
    double epsilon = 0;
    int iters = 0;
    double initial_energy = 0;
    double final_energy = 0;
    double final_grad_norm = 0;
    std::string stop_reason;  // "grad_tol" | "max_iters" | "line_search_stall"
};

struct FlowReport {
    FlowConfig config;
    std::vector<FlowIterRow> trace;
    std::vector<FlowStageSummary> stages;
    Residuals degenerate_residuals;  // final fields, mode degenerate
    bool fueter_emitted = false;
    double final_fueter_residual = 0;
    double min_site_norm = 0;
    std::string checkpoint_prefix;  // where final fields were written, if anywhere
};

struct FlowState {
    U1Connection A;
    SpinorHomField psi;
    int next_stage = 0;
};

/// Residual energy of the blow-up system at fixed epsilon.
double energy(const U1Connection& A, const SpinorHomField& psi, double epsilon,
              double kerc_penalty = 1e3);

/// Euclidean gradient of `energy` in the raw field coordinates.
void gradient(const U1Connection& A, const SpinorHomField& psi, double epsilon,
              double kerc_penalty, U1Connection& dA, SpinorHomField& dpsi);

/// Gaussian initial data, L4-normalized, from the named seed streams.
FlowState initial_state(const FlowConfig& cfg);

/// Run the continuation; optionally resume from a mid-run state. Appends
/// per-stage checkpoints under checkpoint_prefix when non-empty.
FlowReport run_flow(const FlowConfig& cfg, FlowState state,
                    const std::string& checkpoint_prefix = "");

/// Thrown when the energy stops being finite.
struct FlowDivergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string flow_report_json(const FlowReport& report);
std::string flow_trace_csv(const FlowReport& report);

FlowConfig parse_flow_config(const std::string& json_text);

}  // namespace rarita
