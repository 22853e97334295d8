#include <doctest.h>

#include <cmath>

#include "rarita/linalg.hpp"
#include "rarita/moduli.hpp"
#include "rarita/rng.hpp"

using namespace rarita;

namespace {
Spinor rand_spinor(Rng& r) { return {{r.normal(), r.normal()}, {r.normal(), r.normal()}}; }
WmuChartPoint rand_chart(Rng& r, bool mix = true) {
    WmuChartPoint p;
    do {
        p.a = r.normal();
        p.b = r.normal();
        p.c = r.normal();
        p.d = r.normal();
    } while (p.r2() < 1e-3);
    p.lambda = 1.5 * r.normal();
    if (mix && r.uniform() < 0.5) p.chart = Chart::psi2_dominant;
    return p;
}
}  // namespace

TEST_CASE("w_split identifies the two components") {
    SpinorHom pure = w1_element({{1, 0}, {0, 0}});
    auto [s1, s2] = w_split(pure);
    CHECK(std::abs(s1.s0 - cx{1, 0}) < 1e-15);
    CHECK(std::abs(s1.s1) < 1e-15);
    CHECK(norm2(s2) < 1e-30);

    Rng rng(31, "wsplit");
    for (int t = 0; t < 1000; ++t) {
        Spinor a = rand_spinor(rng), b = rand_spinor(rng);
        auto [ra, rb] = w_split(w1_element(a) + w2_element(b));
        CHECK(std::sqrt(norm2(ra - a)) < 1e-13);
        CHECK(std::sqrt(norm2(rb - b)) < 1e-13);
    }
}

TEST_CASE("w_split rejects non-3/2-spinors") {
    SpinorHom bad = iota({{1, 0}, {0, 0}});
    CHECK_THROWS_AS(w_split(bad), std::invalid_argument);
}

TEST_CASE("combined matrix form of W1 + W2") {
    // for s1 = (a1+b1 i, c1+d1 i), s2 = (a2+b2 i, c2+d2 i):
    //  [ -(b1+b2)+(a1+a2) i   c1-d1 i    d2+c2 i  ]
    //  [ -(d1+d2)+(c1+c2) i  -a1+b1 i   -b2-a2 i  ]
    double a1 = 0.3, b1 = 1.1, c1 = -0.6, d1 = 0.9;
    double a2 = -1.2, b2 = 0.5, c2 = 0.25, d2 = -0.8;
    SpinorHom psi = w1_element({{a1, b1}, {c1, d1}}) + w2_element({{a2, b2}, {c2, d2}});
    CHECK(std::abs(psi(0, 0) - cx{-(b1 + b2), a1 + a2}) < 1e-15);
    CHECK(std::abs(psi(0, 1) - cx{c1, -d1}) < 1e-15);
    CHECK(std::abs(psi(0, 2) - cx{d2, c2}) < 1e-15);
    CHECK(std::abs(psi(1, 0) - cx{-(d1 + d2), c1 + c2}) < 1e-15);
    CHECK(std::abs(psi(1, 1) - cx{-a1, b1}) < 1e-15);
    CHECK(std::abs(psi(1, 2) - cx{-b2, -a2}) < 1e-15);
}

TEST_CASE("mu kernel system") {
    // unit s1: kernel is the stated pattern (b,-a,d,-c)
    Mat34 m = mu_kernel_matrix({{1, 0}, {0, 0}});
    auto sv = singular_values(m);
    CHECK(numeric_rank(sv) == 3);
    double k[4] = {0, -1, 0, 0};
    for (int r = 0; r < 3; ++r) {
        double acc = 0;
        for (int c = 0; c < 4; ++c) acc += m(r, c) * k[c];
        CHECK(std::abs(acc) < 1e-14);
    }
    // zero spinor: zero matrix
    Mat34 z = mu_kernel_matrix(Spinor{});
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 4; ++c) CHECK(z(r, c) == 0.0);

    Rng rng(32, "mu-kernel");
    for (int t = 0; t < 1000; ++t) {
        Spinor s1 = rand_spinor(rng);
        if (norm2(s1) < 1e-3) continue;
        Mat34 mm = mu_kernel_matrix(s1);
        auto ss = singular_values(mm);
        CHECK(numeric_rank(ss) == 3);  // kernel dimension exactly 1
        Quaternion q = spinor_to_quat(s1);
        Spinor kern = quat_to_spinor({q.x, -q.w, q.z, -q.y});
        double lam = rng.normal();
        SpinorHom psi = w1_element(s1) + w2_element(lam * kern);
        CHECK(std::sqrt(norm2(moment_map(psi))) < 1e-12 * std::max(1.0, norm2(psi)));
    }
}

TEST_CASE("chart embedding solves both defining equations") {
    // literal matrix at (1,0,0,0), lambda = 0: the pure W1 element of (1,0)
    SpinorHom w = chart_embed({1, 0, 0, 0, 0, Chart::psi1_dominant});
    CHECK(std::abs(w(0, 0) - cx{0, 1}) < 1e-15);
    CHECK(std::abs(w(1, 1) - cx{-1, 0}) < 1e-15);
    CHECK(std::abs(w(0, 1)) < 1e-15);
    CHECK(std::abs(w(0, 2)) < 1e-15);

    // general display: chart1 at (a,b,c,d,l)
    Rng rng(33, "chart");
    for (int t = 0; t < 500; ++t) {
        WmuChartPoint p = rand_chart(rng, false);
        double a = p.a, b = p.b, c = p.c, d = p.d, l = p.lambda;
        SpinorHom ww = chart_embed(p);
        CHECK(std::abs(ww(0, 0) - cx{-(b - l * a), a + l * b}) < 1e-13);
        CHECK(std::abs(ww(0, 1) - cx{c, -d}) < 1e-13);
        CHECK(std::abs(ww(0, 2) - cx{-l * c, l * d}) < 1e-13);
        CHECK(std::abs(ww(1, 0) - cx{-(d - l * c), c + l * d}) < 1e-13);
        CHECK(std::abs(ww(1, 1) - cx{-a, b}) < 1e-13);
        CHECK(std::abs(ww(1, 2) - cx{l * a, -l * b}) < 1e-13);
    }
    for (int t = 0; t < 500; ++t) {
        WmuChartPoint p = rand_chart(rng);
        SpinorHom ww = chart_embed(p);
        CHECK(wmu_residual(ww) < 1e-12);
    }
    CHECK_THROWS_AS(chart_embed({0, 0, 0, 0, 1.0, Chart::psi1_dominant}), std::invalid_argument);
}

TEST_CASE("tangent frame matches the displayed matrices") {
    Rng rng(34, "frames");
    for (int t = 0; t < 200; ++t) {
        WmuChartPoint p = rand_chart(rng, false);
        double a = p.a, b = p.b, c = p.c, d = p.d, l = p.lambda;
        FrameBundle f = frame_at(p);
        // d/da = [[l+i, 0, 0], [0, -1, l]]
        CHECK(std::abs(f.d_a(0, 0) - cx{l, 1}) < 1e-14);
        CHECK(std::abs(f.d_a(1, 1) - cx{-1, 0}) < 1e-14);
        CHECK(std::abs(f.d_a(1, 2) - cx{l, 0}) < 1e-14);
        // d/dlambda = [[a+bi, 0, -c+di], [c+di, 0, a-bi]]
        CHECK(std::abs(f.d_lambda(0, 0) - cx{a, b}) < 1e-14);
        CHECK(std::abs(f.d_lambda(0, 2) - cx{-c, d}) < 1e-14);
        CHECK(std::abs(f.d_lambda(1, 0) - cx{c, d}) < 1e-14);
        CHECK(std::abs(f.d_lambda(1, 2) - cx{a, -b}) < 1e-14);
        // killing field display
        SpinorHom kil;
        kil.m = {{{cx{-b * l - a, -b + a * l}, cx{-d, -c}, cx{l * d, l * c}},
                  {cx{-l * d - c, -d + l * c}, cx{b, a}, cx{-l * b, -l * a}}}};
        CHECK(rnorm(f.killing - kil) < 1e-13);
        // corrected lambda direction display
        SpinorHom tl;
        tl.m = {{{cx{a + l * b, b - l * a}, cx{-l * c, l * d}, cx{-c, d}},
                 {cx{c + l * d, d - l * c}, cx{l * a, -l * b}, cx{a, -b}}}};
        CHECK(rnorm(f.d_lambda_tilde - tl) < 1e-13);
        // normal spinor display: (-b + l a, a + l b, -d + l c, c + l d)
        Spinor sn = normal_spinor(p);
        CHECK(std::abs(sn.s0 - cx{-b + l * a, a + l * b}) < 1e-14);
        CHECK(std::abs(sn.s1 - cx{-d + l * c, c + l * d}) < 1e-14);
        CHECK(rnorm(f.n - iota(sn)) < 1e-13);
    }
}

TEST_CASE("frames are chart derivatives") {
    Rng rng(35, "frame-fd");
    const double eps = 1e-6;
    for (int t = 0; t < 50; ++t) {
        WmuChartPoint p = rand_chart(rng);
        FrameBundle f = frame_at(p);
        auto bump = [&](double da, double db, double dc, double dd, double dl) {
            WmuChartPoint q = p;
            q.a += da;
            q.b += db;
            q.c += dc;
            q.d += dd;
            q.lambda += dl;
            return q;
        };
        SpinorHom fd_a =
            (0.5 / eps) * (chart_embed(bump(eps, 0, 0, 0, 0)) - chart_embed(bump(-eps, 0, 0, 0, 0)));
        CHECK(rnorm(fd_a - f.d_a) < 1e-8);
        SpinorHom fd_l =
            (0.5 / eps) * (chart_embed(bump(0, 0, 0, 0, eps)) - chart_embed(bump(0, 0, 0, 0, -eps)));
        CHECK(rnorm(fd_l - f.d_lambda) < 1e-8);
    }
}

TEST_CASE("normal kernel system: displayed rows, rank, kernel") {
    Rng rng(36, "normal-kernel");
    for (int t = 0; t < 500; ++t) {
        WmuChartPoint p = rand_chart(rng);
        Mat34 m = normal_kernel_matrix(p);
        // rows mutually orthogonal with equal norms
        double n0 = 0;
        for (int c = 0; c < 4; ++c) n0 += m(0, c) * m(0, c);
        for (int r = 0; r < 3; ++r)
            for (int q = r + 1; q < 3; ++q) {
                double acc = 0;
                for (int c = 0; c < 4; ++c) acc += m(r, c) * m(q, c);
                CHECK(std::abs(acc) < 1e-12 * n0);
            }
        auto sv = singular_values(m);
        CHECK(numeric_rank(sv) == 3);
        Spinor sn = normal_spinor(p);
        Quaternion k = spinor_to_quat(sn);
        double kv[4] = {k.w, k.x, k.y, k.z};
        for (int r = 0; r < 3; ++r) {
            double acc = 0;
            for (int c = 0; c < 4; ++c) acc += m(r, c) * kv[c];
            CHECK(std::abs(acc) < 1e-12 * std::max(1.0, n0));
        }
        // the kernel direction solves d mu = 0 at the chart point
        SpinorHom w = chart_embed(p);
        CHECK(std::sqrt(norm2(moment_diff(w, iota(sn)))) < 1e-12 * std::max(1.0, norm2(w)));
    }
    // displayed rows for the first chart
    WmuChartPoint p{0.3, 1.1, -0.6, 0.9, 0.7, Chart::psi1_dominant};
    double a = p.a, b = p.b, c = p.c, d = p.d, l = p.lambda;
    Mat34 m = normal_kernel_matrix(p);
    const double rows[3][4] = {{a + l * b, b - l * a, -c - l * d, -d + l * c},
                               {c + l * d, d - l * c, a + l * b, b - l * a},
                               {d - l * c, -c - l * d, -b + l * a, a + l * b}};
    for (int r = 0; r < 3; ++r)
        for (int q = 0; q < 4; ++q) CHECK(m(r, q) == doctest::Approx(rows[r][q]).epsilon(1e-12));
}

TEST_CASE("symbol regression matrix reproduces the closed-form determinant") {
    Rng rng(37, "symbol-reg");
    for (int t = 0; t < 2000; ++t) {
        WmuChartPoint p = rand_chart(rng);
        Mat44 m = symbol_regression_matrix(p);
        double r2 = p.r2(), u = 1 + p.lambda * p.lambda;
        double closed = 2.0 * r2 * r2 * u * u;
        CHECK(det4(m) == doctest::Approx(closed * symbol_regression_frame_factor(p))
                             .epsilon(1e-10));
    }
}

TEST_CASE("restricted symbol is uniformly injective") {
    Rng rng(38, "symbol");
    const double frozen = std::sqrt(2.0 / 27.0);
    for (int t = 0; t < 1000; ++t) {
        WmuChartPoint p = rand_chart(rng);
        ImQuaternion xi{rng.normal(), rng.normal(), rng.normal()};
        double n = std::sqrt(norm2(xi));
        if (n < 1e-3) continue;
        xi = (1.0 / n) * xi;
        SymbolMatrix sm = symbol_matrix(p, xi);
        CHECK(sm.det == doctest::Approx(frozen).epsilon(1e-10));
        CHECK(sm.det > 0);
        auto sv = singular_values(sm.m);
        CHECK(sv[3] > 0.4);
        // homogeneity of degree 4
        double s = std::exp(rng.uniform(-1.0, 1.0));
        CHECK(symbol_matrix(p, s * xi).det ==
              doctest::Approx(s * s * s * s * sm.det).epsilon(1e-12));
    }
    CHECK_THROWS_AS(symbol_matrix(rand_chart(rng), ImQuaternion{0, 0, 0}), std::invalid_argument);
}

TEST_CASE("regression symbol on the unit sphere at lambda = 0, and scaling") {
    Rng rng(41, "symbol-slice");
    // on the slice lambda = 0, |(a,b,c,d)| = 1 the regression determinant is
    // the constant 2 * (frame factor 8) = 16
    for (int t = 0; t < 200; ++t) {
        WmuChartPoint p = rand_chart(rng, false);
        double r = std::sqrt(p.r2());
        p.a /= r;
        p.b /= r;
        p.c /= r;
        p.d /= r;
        p.lambda = 0;
        CHECK(det4(symbol_regression_matrix(p)) == doctest::Approx(16.0).epsilon(1e-12));
    }
    // sigma_min scales linearly under point scaling, matching the r^4 factor
    for (int t = 0; t < 100; ++t) {
        WmuChartPoint p = rand_chart(rng, false);
        double s = std::exp(rng.uniform(-1.0, 1.0));
        WmuChartPoint ps = p;
        ps.a *= s;
        ps.b *= s;
        ps.c *= s;
        ps.d *= s;
        auto sv = singular_values(symbol_regression_matrix(p));
        auto svs = singular_values(symbol_regression_matrix(ps));
        CHECK(svs[3] == doctest::Approx(s * sv[3]).epsilon(1e-10));
        CHECK(det4(symbol_regression_matrix(ps)) ==
              doctest::Approx(s * s * s * s * det4(symbol_regression_matrix(p))).epsilon(1e-10));
    }
}

TEST_CASE("quotient projection gauge fixing") {
    Rng rng(39, "quotient");
    for (int t = 0; t < 500; ++t) {
        WmuChartPoint p = rand_chart(rng);
        SpinorHom psi = chart_embed(p);
        WmuChartPoint q0 = quotient_project(psi);
        // already-fixed representative projects to itself
        WmuChartPoint q1 = quotient_project(chart_embed(q0));
        CHECK(q1.a == doctest::Approx(q0.a).epsilon(1e-12));
        CHECK(q1.b == doctest::Approx(q0.b).epsilon(1e-12));
        CHECK(q1.c == doctest::Approx(q0.c).epsilon(1e-12));
        CHECK(q1.d == doctest::Approx(q0.d).epsilon(1e-12));
        CHECK(q1.lambda == doctest::Approx(q0.lambda).epsilon(1e-12));
        // circle invariance
        double th = rng.uniform(0, 6.283);
        WmuChartPoint q2 = quotient_project(gauge_rotate(psi, th));
        CHECK(q2.a == doctest::Approx(q0.a).epsilon(1e-10));
        CHECK(q2.lambda == doctest::Approx(q0.lambda).epsilon(1e-10));
        CHECK((q2.chart == q0.chart));
        // representative is on the orbit: coarse circle scan, then a local
        // ternary refinement around the best angle
        SpinorHom rep = chart_embed(q0);
        const double tau = 6.283185307179586;
        double best = 1e300, best_theta = 0;
        for (int k = 0; k < 2000; ++k) {
            double theta = tau * k / 2000;
            double dth = rnorm(rep - gauge_rotate(psi, theta));
            if (dth < best) {
                best = dth;
                best_theta = theta;
            }
        }
        double lo = best_theta - 2 * tau / 2000, hi = best_theta + 2 * tau / 2000;
        for (int refine = 0; refine < 60; ++refine) {
            double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
            if (rnorm(rep - gauge_rotate(psi, m1)) < rnorm(rep - gauge_rotate(psi, m2)))
                hi = m2;
            else
                lo = m1;
        }
        double refined = rnorm(rep - gauge_rotate(psi, 0.5 * (lo + hi)));
        CHECK(refined < 1e-10 * std::max(1.0, rnorm(psi)));
    }
    CHECK_THROWS_AS(quotient_project(SpinorHom{}), std::invalid_argument);
    CHECK_THROWS_AS(quotient_project(iota({{1, 0}, {0, 0}})), std::invalid_argument);
}

TEST_CASE("chart transition: both representations share an orbit") {
    Rng rng(40, "transition");
    for (int t = 0; t < 200; ++t) {
        WmuChartPoint p = rand_chart(rng, false);
        p.lambda = (rng.uniform() < 0.5 ? -1 : 1) * rng.uniform(0.15, 0.85);
        SpinorHom psi = chart_embed(p);
        WmuChartPoint q = quotient_project(psi);
        CHECK((q.chart == Chart::psi1_dominant));  // |lambda| < 1 keeps s1 dominant
        // the same orbit carries a psi2-dominant representation: force it
        auto [s1, s2] = w_split(psi);
        Quaternion q2 = spinor_to_quat(s2);
        Spinor mis2{cx{0, -1} * s2.s0, cx{0, -1} * s2.s1};
        double mu = (s1.s0 * std::conj(mis2.s0) + s1.s1 * std::conj(mis2.s1)).real() /
                    std::max(norm2(mis2), 1e-300);
        WmuChartPoint pc2{q2.w, q2.x, q2.y, q2.z, mu, Chart::psi2_dominant};
        // with the raw (un-gauge-fixed) coordinates the two representations
        // coincide on the nose: s1 = -i mu s2 inverts the chart relation
        SpinorHom psi2 = chart_embed(pc2);
        CHECK(rnorm(psi2 - psi) < 1e-12 * rnorm(psi));
        // and the canonical representatives agree up to the circle action
        WmuChartPoint qa = quotient_project(psi);
        WmuChartPoint qb = quotient_project(psi2);
        CHECK(qa.lambda == doctest::Approx(qb.lambda).epsilon(1e-10));
        CHECK(qa.a == doctest::Approx(qb.a).epsilon(1e-10));
    }
}
