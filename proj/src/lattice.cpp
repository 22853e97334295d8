#include "rarita/lattice.hpp"

#include <algorithm>
#include <cmath>

namespace rarita {

namespace {

constexpr double kTau = 6.283185307179586476925286766559;

void require_same(const LatticeGeometry& a, const LatticeGeometry& b) {
    if (!(a == b)) throw std::invalid_argument("lattice geometry mismatch");
}

}  // namespace

void check_geometry(const LatticeGeometry& g) {
    if (g.n < 4 || g.n % 2 != 0) throw std::invalid_argument("lattice size must be even and >= 4");
    if (!(g.h > 0)) throw std::invalid_argument("lattice spacing must be positive");
}

double l2_norm(const SpinorHomField& f) {
    double acc = 0;
    for (const auto& s : f.v) acc += norm2(s);
    return std::sqrt(acc * f.geom.volume_element());
}

double l2_norm(const MomentField& f) {
    double acc = 0;
    for (const auto& s : f.v) acc += norm2(s);
    return std::sqrt(acc * f.geom.volume_element());
}

double l4_norm(const SpinorHomField& f) {
    double acc = 0;
    for (const auto& s : f.v) {
        double n2 = norm2(s);
        acc += n2 * n2;
    }
    return std::pow(acc * f.geom.volume_element(), 0.25);
}

double kerc_residual(const SpinorHomField& f) {
    double acc = 0;
    for (const auto& s : f.v) acc += norm2(clifford_contract(s));
    return std::sqrt(acc * f.geom.volume_element());
}

std::array<SpinorHomField, 3> covariant_derivative(const U1Connection& A, const SpinorHomField& f) {
    require_same(A.geom, f.geom);
    const auto& g = f.geom;
    std::array<SpinorHomField, 3> out{SpinorHomField(g), SpinorHomField(g), SpinorHomField(g)};
    const double inv2h = 1.0 / (2.0 * g.h);
    for (int k = 0; k < 3; ++k) {
        for (int i = 0; i < g.sites(); ++i) {
            int ip = g.shift(i, k, +1), im = g.shift(i, k, -1);
            SpinorHom fwd = gauge_rotate(f[ip], g.h * A.a[i][k]);
            SpinorHom bwd = gauge_rotate(f[im], -g.h * A.a[im][k]);
            out[k][i] = inv2h * (fwd - bwd);
        }
    }
    return out;
}

SpinorHomField dirac_twisted(const U1Connection& A, const SpinorHomField& f) {
    auto grad = covariant_derivative(A, f);
    SpinorHomField out(f.geom);
    for (int i = 0; i < f.geom.sites(); ++i) {
        out[i] = hk_apply(Axis::I, grad[0][i]);
        out[i] += hk_apply(Axis::J, grad[1][i]);
        out[i] += hk_apply(Axis::K, grad[2][i]);
    }
    return out;
}

SpinorHomField rarita_schwinger(const U1Connection& A, const SpinorHomField& f, double tol) {
    double scale = l2_norm(f);
    if (kerc_residual(f) > tol * std::max(scale, 1e-300))
        throw std::invalid_argument("rarita_schwinger: input field is not in ker c");
    SpinorHomField out = dirac_twisted(A, f);
    for (auto& s : out.v) s = project_threehalf(s);
    return out;
}

SpinorHomField rarita_schwinger_preprojected(const U1Connection& A, const SpinorHomField& f) {
    SpinorHomField pre = f;
    for (auto& s : pre.v) s = project_threehalf(s);
    SpinorHomField out = dirac_twisted(A, pre);
    for (auto& s : out.v) s = project_threehalf(s);
    return out;
}

MomentField curvature_star(const U1Connection& A) {
    const auto& g = A.geom;
    MomentField out(g);
    const double invh = 1.0 / g.h;
    for (int i = 0; i < g.sites(); ++i) {
        ImQuaternion star;
        double* comp[3] = {&star.x, &star.y, &star.z};
        for (int m = 0; m < 3; ++m) {
            int j = (m + 1) % 3, k = (m + 2) % 3;
            // (star F)_m = d_j a_k - d_k a_j with forward differences
            double djak = (A.a[g.shift(i, j, +1)][k] - A.a[i][k]) * invh;
            double dkaj = (A.a[g.shift(i, k, +1)][j] - A.a[i][j]) * invh;
            *comp[m] = djak - dkaj;
        }
        out.v[i] = imh_to_isu2(star);
    }
    return out;
}

void gauge_transform(U1Connection& A, SpinorHomField& f, const std::vector<double>& theta) {
    require_same(A.geom, f.geom);
    const auto& g = A.geom;
    if (static_cast<int>(theta.size()) != g.sites())
        throw std::invalid_argument("gauge_transform: theta size mismatch");
    for (int i = 0; i < g.sites(); ++i) {
        f[i] = gauge_rotate(f[i], theta[i]);
        for (int k = 0; k < 3; ++k)
            A.a[i][k] -= (theta[g.shift(i, k, +1)] - theta[i]) / g.h;
    }
}

Residuals residuals(const U1Connection& A, const SpinorHomField& psi, double epsilon, RsswMode mode) {
    require_same(A.geom, psi.geom);
    if (epsilon < 0) throw std::invalid_argument("residuals: negative epsilon");
    const auto& g = psi.geom;
    Residuals r;
    SpinorHomField q = dirac_twisted(A, psi);
    for (auto& s : q.v) s = project_threehalf(s);
    r.rs_residual = l2_norm(q);
    r.kerc_residual = kerc_residual(psi);
    r.l4_constraint = std::abs(l4_norm(psi) - 1.0);
    MomentField mism(g);
    MomentField curv = curvature_star(A);
    double eps2 = epsilon * epsilon;
    for (int i = 0; i < g.sites(); ++i) {
        MomentValue mu = moment_map(psi[i]);
        switch (mode) {
            case RsswMode::rssw: mism.v[i] = curv.v[i] - mu; break;
            case RsswMode::blowup: mism.v[i] = eps2 * curv.v[i] - mu; break;
            case RsswMode::degenerate: mism.v[i] = -1.0 * mu; break;
        }
    }
    r.curvature_residual = l2_norm(mism);
    return r;
}

SpinorHomField fueter_apply(const U1Connection& B, const ChartSection& phi) {
    require_same(B.geom, phi.geom);
    SpinorHomField lift(phi.geom);
    for (int i = 0; i < phi.geom.sites(); ++i) lift[i] = chart_embed(phi.p[i]);
    return dirac_twisted(B, lift);
}

double fueter_residual(const U1Connection& B, const ChartSection& phi) {
    SpinorHomField df = fueter_apply(B, phi);
    double acc = 0;
    for (int i = 0; i < phi.geom.sites(); ++i) {
        FrameBundle fr = frame_at(phi.p[i]);
        const SpinorHom* frame[4] = {&fr.i_n, &fr.j_n, &fr.k_n, &fr.d_lambda_tilde};
        for (const SpinorHom* f : frame) {
            double coeff = rdot(df[i], *f) / rnorm(*f);
            acc += coeff * coeff;
        }
    }
    return std::sqrt(acc * phi.geom.volume_element());
}

SpinorHomField make_plane_wave(const LatticeGeometry& g, const std::array<int, 3>& mode,
                               const SpinorHom& psi0) {
    SpinorHomField f(g);
    for (int i = 0; i < g.sites(); ++i) {
        auto c = g.coords(i);
        double phase = kTau * (mode[0] * c[0] + mode[1] * c[1] + mode[2] * c[2]) / g.n;
        f[i] = gauge_rotate(psi0, phase);
    }
    return f;
}

}  // namespace rarita
