#include <doctest.h>

#include <cmath>

#include "rarita/flow.hpp"
#include "rarita/rng.hpp"

using namespace rarita;

namespace {
SpinorHom rand_hom(Rng& r) {
    SpinorHom m;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 3; ++j) m.m[i][j] = cx{r.normal(), r.normal()};
    return m;
}
Spinor rand_spinor(Rng& r) { return {{r.normal(), r.normal()}, {r.normal(), r.normal()}}; }

void constant_solution(U1Connection& A, SpinorHomField& psi, Rng& rng) {
    SpinorHom w1 = w1_element(rand_spinor(rng));
    for (int i = 0; i < psi.geom.sites(); ++i) psi[i] = w1;
    double n4 = l4_norm(psi);
    for (auto& s : psi.v) s = (1.0 / n4) * s;
    A = U1Connection(psi.geom);
}
}  // namespace

TEST_CASE("energy: nonnegative, zero exactly on solutions") {
    LatticeGeometry g{4, 1.0};
    Rng rng(61, "energy");
    U1Connection A(g);
    SpinorHomField psi(g);
    constant_solution(A, psi, rng);
    for (double eps : {1.0, 0.25, 0.0}) CHECK(energy(A, psi, eps) < 1e-13);
    // psi = 0 is the reducible locus: zero energy, violated constraint
    SpinorHomField zero(g);
    CHECK(energy(A, zero, 0.5) == 0.0);
    CHECK(residuals(A, zero, 0.5, RsswMode::blowup).l4_constraint == doctest::Approx(1.0));
    // random data: nonnegative
    for (int t = 0; t < 10; ++t) {
        for (int i = 0; i < g.sites(); ++i) {
            psi[i] = rand_hom(rng);
            for (int k = 0; k < 3; ++k) A.a[i][k] = rng.normal();
        }
        CHECK(energy(A, psi, 0.3) >= 0.0);
    }
    CHECK_THROWS_AS(energy(A, psi, -0.1), std::invalid_argument);
}

TEST_CASE("gradient matches central finite differences") {
    LatticeGeometry g{4, 1.0};
    Rng rng(62, "grad-fd");
    U1Connection A(g);
    SpinorHomField psi(g);
    for (int i = 0; i < g.sites(); ++i) {
        psi[i] = rand_hom(rng);
        for (int k = 0; k < 3; ++k) A.a[i][k] = 0.4 * rng.normal();
    }
    double eps_param = 0.6, w = 1e3;
    U1Connection dA;
    SpinorHomField dpsi;
    gradient(A, psi, eps_param, w, dA, dpsi);
    const double h = 1e-5;
    for (int t = 0; t < 20; ++t) {
        U1Connection vA(g);
        SpinorHomField vp(g);
        for (int i = 0; i < g.sites(); ++i) {
            for (int k = 0; k < 3; ++k) vA.a[i][k] = rng.normal();
            vp[i] = rand_hom(rng);
        }
        double pair = 0;
        U1Connection Ap = A, Am = A;
        SpinorHomField pp = psi, pm = psi;
        for (int i = 0; i < g.sites(); ++i) {
            for (int k = 0; k < 3; ++k) {
                pair += dA.a[i][k] * vA.a[i][k];
                Ap.a[i][k] += h * vA.a[i][k];
                Am.a[i][k] -= h * vA.a[i][k];
            }
            for (int r = 0; r < 2; ++r)
                for (int c = 0; c < 3; ++c)
                    pair += dpsi[i].m[r][c].real() * vp[i].m[r][c].real() +
                            dpsi[i].m[r][c].imag() * vp[i].m[r][c].imag();
            pp[i] += h * vp[i];
            pm[i] -= h * vp[i];
        }
        double fd = (energy(Ap, pp, eps_param, w) - energy(Am, pm, eps_param, w)) / (2 * h);
        CHECK(std::abs(pair - fd) <= 1e-6 * std::max(1.0, std::abs(fd)));
    }
}

TEST_CASE("gradient vanishes at an exact zero of the energy") {
    LatticeGeometry g{4, 1.0};
    Rng rng(63, "grad-zero");
    U1Connection A(g);
    SpinorHomField psi(g);
    constant_solution(A, psi, rng);
    U1Connection dA;
    SpinorHomField dpsi;
    gradient(A, psi, 0.7, 1e3, dA, dpsi);
    double gn = 0;
    for (int i = 0; i < g.sites(); ++i) {
        for (int k = 0; k < 3; ++k) gn += dA.a[i][k] * dA.a[i][k];
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 3; ++c) gn += std::norm(dpsi[i].m[r][c]);
    }
    CHECK(std::sqrt(gn) < 1e-10);
}

TEST_CASE("flow config validation names the offending constraint") {
    FlowConfig cfg;
    cfg.step = 0.05;
    CHECK_NOTHROW(cfg.validate());
    FlowConfig bad = cfg;
    bad.epsilon_schedule = {0.1, 0.3};
    CHECK_THROWS_WITH_AS(bad.validate(),
                         "flow config: epsilon_schedule must be strictly decreasing",
                         std::invalid_argument);
    bad = cfg;
    bad.step = 1.0;  // above the h^2/12 stability cap
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.n = 7;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_flow_config("{\"n\": 8}"), "flow config: missing field 'epsilon_schedule'",
                         std::invalid_argument);
    CHECK_THROWS_AS(parse_flow_config("not json"), std::invalid_argument);
}

TEST_CASE("flow from an exact solution terminates without progress steps") {
    FlowConfig cfg;
    cfg.n = 4;
    cfg.step = 0.05;
    cfg.epsilon_schedule = {0.5, 0.1};
    cfg.max_iters = 50;
    cfg.grad_tol = 1e-8;
    Rng rng(64, "exact-start");
    FlowState st{U1Connection({4, 1.0}), SpinorHomField({4, 1.0}), 0};
    constant_solution(st.A, st.psi, rng);
    FlowReport rep = run_flow(cfg, st);
    for (const auto& s : rep.stages) {
        CHECK(s.stop_reason == "grad_tol");
        CHECK(s.iters == 0);
        CHECK(s.final_energy < 1e-13);
    }
    CHECK(rep.degenerate_residuals.rs_residual < 1e-12);
    CHECK(rep.fueter_emitted);
    CHECK(rep.final_fueter_residual < 1e-10);
}

TEST_CASE("random start: monotone energy within stages, well-formed report") {
    FlowConfig cfg;
    cfg.n = 4;
    cfg.step = 0.05;
    cfg.epsilon_schedule = {1.0, 0.3, 0.1};
    cfg.max_iters = 40;
    cfg.grad_tol = 1e-9;
    cfg.seed = 99;
    FlowReport rep = run_flow(cfg, initial_state(cfg));
    REQUIRE(rep.stages.size() == 3);
    for (size_t i = 1; i < rep.trace.size(); ++i) {
        if (rep.trace[i].stage != rep.trace[i - 1].stage) continue;
        CHECK(rep.trace[i].energy <= rep.trace[i - 1].energy + 1e-12);
    }
    for (const auto& s : rep.stages) CHECK(s.final_energy <= s.initial_energy + 1e-12);
    // the L4 constraint is restored after every renormalization
    for (const auto& row : rep.trace) CHECK(row.res.l4_constraint <= 1e-12);
    // csv has one row per trace entry plus a header
    std::string csv = flow_trace_csv(rep);
    size_t lines = std::count(csv.begin(), csv.end(), '\n');
    CHECK(lines == rep.trace.size() + 1);
}

TEST_CASE("hard projection toggle keeps the trace monotone and the field in ker c") {
    FlowConfig cfg;
    cfg.n = 4;
    cfg.step = 0.05;
    cfg.epsilon_schedule = {0.5, 0.1};
    cfg.max_iters = 20;
    cfg.grad_tol = 1e-9;
    cfg.seed = 77;
    cfg.hard_project = true;
    FlowReport rep = run_flow(cfg, initial_state(cfg));
    for (size_t i = 1; i < rep.trace.size(); ++i) {
        if (rep.trace[i].stage != rep.trace[i - 1].stage) continue;
        CHECK(rep.trace[i].energy <= rep.trace[i - 1].energy + 1e-12);
    }
    // after the first accepted step the iterate is projected sitewise
    bool stepped = false;
    for (const auto& row : rep.trace) stepped = stepped || row.step_used > 0;
    if (stepped) CHECK(rep.degenerate_residuals.kerc_residual < 1e-10);
}

TEST_CASE("energy is gauge invariant on iterates") {
    LatticeGeometry g{4, 1.0};
    Rng rng(65, "gauge-energy");
    U1Connection A(g);
    SpinorHomField psi(g);
    for (int i = 0; i < g.sites(); ++i) {
        psi[i] = rand_hom(rng);
        for (int k = 0; k < 3; ++k) A.a[i][k] = rng.normal();
    }
    double e0 = energy(A, psi, 0.4);
    std::vector<double> theta(g.sites());
    for (auto& th : theta) th = rng.uniform(-3.14, 3.14);
    gauge_transform(A, psi, theta);
    CHECK(energy(A, psi, 0.4) == doctest::Approx(e0).epsilon(1e-10));
}

TEST_CASE("seeded determinism: identical reports, bitwise") {
    FlowConfig cfg;
    cfg.n = 4;
    cfg.step = 0.05;
    cfg.epsilon_schedule = {0.5, 0.2};
    cfg.max_iters = 15;
    cfg.grad_tol = 1e-10;
    cfg.seed = 1234;
    FlowReport r1 = run_flow(cfg, initial_state(cfg));
    FlowReport r2 = run_flow(cfg, initial_state(cfg));
    CHECK(flow_report_json(r1) == flow_report_json(r2));
    CHECK(flow_trace_csv(r1) == flow_trace_csv(r2));
}
