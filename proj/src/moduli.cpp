#include "rarita/moduli.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rarita {

namespace {

Spinor times_i(Spinor s) { return {cx{0, 1} * s.s0, cx{0, 1} * s.s1}; }

// w1/w2 parameter spinors of a chart point: the secondary component is
// -i lambda times the primary one.
std::pair<Spinor, Spinor> chart_components(const WmuChartPoint& p) {
    Spinor s = p.spinor();
    Spinor sec = {cx{0, -p.lambda} * s.s0, cx{0, -p.lambda} * s.s1};
    return {s, sec};
}

}  // namespace

std::pair<Spinor, Spinor> w_split(const SpinorHom& psi, double tol) {
    double scale = rnorm(psi);
    Spinor c = clifford_contract(psi);
    if (std::sqrt(norm2(c)) > tol * std::max(scale, 1e-300))
        throw std::invalid_argument("w_split: input is not a 3/2-spinor (clifford contraction nonzero)");
    // column 1 carries s1 = (a1+b1 i, c1+d1 i) as [c1 - d1 i; -a1 + b1 i],
    // column 2 carries s2 as [d2 + c2 i; -b2 - a2 i].
    cx m01 = psi(0, 1), m11 = psi(1, 1), m02 = psi(0, 2), m12 = psi(1, 2);
    Spinor s1{cx{-m11.real(), m11.imag()}, cx{m01.real(), -m01.imag()}};
    Spinor s2{cx{-m12.imag(), -m12.real()}, cx{m02.imag(), m02.real()}};
    return {s1, s2};
}

Mat34 mu_kernel_matrix(Spinor s1) {
    Quaternion q = spinor_to_quat(s1);
    double a = q.w, b = q.x, c = q.y, d = q.z;
    Mat34 m;
    m.a = {{{a, b, -c, -d}, {c, d, a, b}, {d, -c, -b, a}}};
    return m;
}

SpinorHom chart_embed(const WmuChartPoint& p) {
    if (p.r2() == 0) throw std::invalid_argument("chart_embed: degenerate chart point (a,b,c,d) = 0");
    auto [s, sec] = chart_components(p);
    if (p.chart == Chart::psi1_dominant) return w1_element(s) + w2_element(sec);
    return w2_element(s) + w1_element(sec);
}

Mat34 normal_kernel_matrix(const WmuChartPoint& p) {
    SpinorHom w = chart_embed(p);
    // Rows are the (Re m00, Re m01, -Im m01) components of
    // d_w mu(iota(e_j)) over the quaternion basis, halved: for the first
    // chart this reproduces the displayed rows verbatim.
    Mat34 m;
    static const Spinor basis[4] = {{{1, 0}, {0, 0}}, {{0, 1}, {0, 0}}, {{0, 0}, {1, 0}}, {{0, 0}, {0, 1}}};
    for (int j = 0; j < 4; ++j) {
        MomentValue dv = moment_diff(w, iota(basis[j]));
        m(0, j) = 0.5 * dv(0, 0).real();
        m(1, j) = 0.5 * dv(0, 1).real();
        m(2, j) = -0.5 * dv(0, 1).imag();
    }
    return m;
}

Spinor normal_spinor(const WmuChartPoint& p) {
    Spinor s = p.spinor();
    cx f{p.lambda, 1};
    return {f * s.s0, f * s.s1};
}

FrameBundle frame_at(const WmuChartPoint& p) {
    if (p.r2() == 0) throw std::invalid_argument("frame_at: degenerate chart point (a,b,c,d) = 0");
    FrameBundle f;
    static const Spinor basis[4] = {{{1, 0}, {0, 0}}, {{0, 1}, {0, 0}}, {{0, 0}, {1, 0}}, {{0, 0}, {0, 1}}};
    const double lam = p.lambda;
    SpinorHom* slots[4] = {&f.d_a, &f.d_b, &f.d_c, &f.d_d};
    for (int j = 0; j < 4; ++j) {
        Spinor e = basis[j];
        Spinor sec = {cx{0, -lam} * e.s0, cx{0, -lam} * e.s1};
        *slots[j] = (p.chart == Chart::psi1_dominant) ? w1_element(e) + w2_element(sec)
                                                      : w2_element(e) + w1_element(sec);
    }
    Spinor s = p.spinor();
    Spinor mis = {cx{0, -1} * s.s0, cx{0, -1} * s.s1};
    f.d_lambda = (p.chart == Chart::psi1_dominant) ? w2_element(mis) : w1_element(mis);

    f.killing = p.a * f.d_b - p.b * f.d_a + p.c * f.d_d - p.d * f.d_c;

    f.n = iota(normal_spinor(p));
    f.i_n = hk_apply(Axis::I, f.n);
    f.j_n = hk_apply(Axis::J, f.n);
    f.k_n = hk_apply(Axis::K, f.n);

    SpinorHom radial = p.a * f.d_a + p.b * f.d_b + p.c * f.d_c + p.d * f.d_d;
    f.d_lambda_tilde = (1.0 + lam * lam) * f.d_lambda - lam * radial;
    return f;
}

SymbolMatrix symbol_matrix(const WmuChartPoint& p, ImQuaternion xi) {
    if (norm2(xi) == 0) throw std::invalid_argument("symbol_matrix: xi = 0");
    FrameBundle f = frame_at(p);
    auto unit = [](const SpinorHom& v) { return (1.0 / rnorm(v)) * v; };
    SpinorHom cols[4] = {unit(f.d_a), unit(f.d_b), unit(f.d_c), unit(f.d_d)};
    // Orientation of the last frame vector fixed so that det > 0.
    SpinorHom rows[4] = {unit(f.i_n), unit(f.j_n), unit(f.k_n), -1.0 * unit(f.d_lambda_tilde)};
    SymbolMatrix sm;
    for (int j = 0; j < 4; ++j) {
        SpinorHom image = hk_apply(xi, ent_i(cols[j]));
        for (int i = 0; i < 4; ++i) sm.m(i, j) = rdot(image, rows[i]);
    }
    sm.det = det4(sm.m);
    return sm;
}

Mat44 symbol_regression_matrix(const WmuChartPoint& p) {
    const double a = p.a, b = p.b, c = p.c, d = p.d, l = p.lambda;
    const double l2 = l * l;
    Mat44 m;
    m.a = {{{-2 * (l2 + 1) * b, 2 * (l2 + 1) * a, -2 * (l2 + 1) * d, 2 * (l2 + 1) * c},
            {2 * (2 * l2 + 1) * c - 2 * l * d, -2 * (2 * l2 + 1) * d - 2 * l * c,
             -2 * (2 * l2 + 1) * a + 2 * l * b, 2 * (2 * l2 + 1) * b + 2 * l * a},
            {-2 * (l2 + 2) * d + 2 * l * c, -2 * (l2 + 2) * c - 2 * l * d,
             2 * (l2 + 2) * b - 2 * l * a, 2 * (l2 + 2) * a + 2 * l * b},
            {a, b, c, d}}};
    return m;
}

double wmu_residual(const SpinorHom& psi) {
    double scale = rnorm(psi);
    if (scale == 0) return std::numeric_limits<double>::infinity();
    double rc = std::sqrt(norm2(clifford_contract(psi))) / scale;
    double rm = std::sqrt(norm2(moment_map(psi))) / (scale * scale);
    return std::max(rc, rm);
}

WmuChartPoint quotient_project(const SpinorHom& psi, double tol) {
    if (rnorm(psi) == 0) throw std::invalid_argument("quotient_project: psi = 0");
    if (wmu_residual(psi) > tol)
        throw std::invalid_argument("quotient_project: psi violates the W^mu defining equations");
    auto [s1, s2] = w_split(psi, tol);
    double n1 = norm2(s1), n2 = norm2(s2);
    Chart chart = (n1 >= n2) ? Chart::psi1_dominant : Chart::psi2_dominant;
    Spinor dom = (chart == Chart::psi1_dominant) ? s1 : s2;
    Spinor other = (chart == Chart::psi1_dominant) ? s2 : s1;
    double ndom = std::max(norm2(dom), 1e-300);
    // other = -i lambda dom  =>  lambda = Re<other, -i dom> / |dom|^2
    Spinor midom = times_i(dom);
    double lambda = -(other.s0 * std::conj(midom.s0) + other.s1 * std::conj(midom.s1)).real() / ndom;
    // gauge fix: rotate so the largest-magnitude component of dom is real
    // positive (first component wins ties)
    int idx = (std::abs(dom.s0) >= std::abs(dom.s1)) ? 0 : 1;
    cx comp = (idx == 0) ? dom.s0 : dom.s1;
    double theta = -std::arg(comp);
    cx rot = std::polar(1.0, theta);
    Spinor fixed = rot * dom;
    Quaternion q = spinor_to_quat(fixed);
    return {q.w, q.x, q.y, q.z, lambda, chart};
}

WmuChartPoint chart_rotate(const WmuChartPoint& p, double theta) {
    double ct = std::cos(theta), st = std::sin(theta);
    return {p.a * ct - p.b * st, p.b * ct + p.a * st,
            p.c * ct - p.d * st, p.d * ct + p.c * st, p.lambda, p.chart};
}

}  // namespace rarita
