#pragma once

#include <array>
#include <cmath>

#include "rarita/clifford.hpp"

// The 12-real-dimensional space S = Hom(C (x) Im H, H), stored as 2x3 complex
// matrices with columns indexed by I, J, K and rows by the spinor
// identification of clifford.hpp. Provides the hermitian/Riemannian
// structures, the Clifford contraction c, the embedding iota, the projection
// onto ker c, the hyperkahler triple, and the U(1) moment map.

namespace rarita {

struct SpinorHom {
    // m[row][col], rows = spinor components, cols = I, J, K.
    std::array<std::array<cx, 3>, 2> m{};

    cx& operator()(int r, int c) { return m[r][c]; }
    const cx& operator()(int r, int c) const { return m[r][c]; }

    Spinor col(int c) const { return {m[0][c], m[1][c]}; }
    void set_col(int c, Spinor s) {
        m[0][c] = s.s0;
        m[1][c] = s.s1;
    }

    friend SpinorHom operator+(const SpinorHom& a, const SpinorHom& b) {
        SpinorHom r;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 3; ++j) r.m[i][j] = a.m[i][j] + b.m[i][j];
        return r;
    }
    friend SpinorHom operator-(const SpinorHom& a, const SpinorHom& b) {
        SpinorHom r;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 3; ++j) r.m[i][j] = a.m[i][j] - b.m[i][j];
        return r;
    }
    friend SpinorHom operator*(double t, const SpinorHom& a) {
        SpinorHom r;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 3; ++j) r.m[i][j] = t * a.m[i][j];
        return r;
    }
    SpinorHom& operator+=(const SpinorHom& b) {
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 3; ++j) m[i][j] += b.m[i][j];
        return *this;
    }
    SpinorHom& operator-=(const SpinorHom& b) {
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 3; ++j) m[i][j] -= b.m[i][j];
        return *this;
    }
};

/// Element of i su(2): 2x2 hermitian traceless, stored dense.
struct MomentValue {
    std::array<std::array<cx, 2>, 2> v{};

    cx& operator()(int r, int c) { return v[r][c]; }
    const cx& operator()(int r, int c) const { return v[r][c]; }

    friend MomentValue operator+(const MomentValue& a, const MomentValue& b) {
        MomentValue r;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) r.v[i][j] = a.v[i][j] + b.v[i][j];
        return r;
    }
    friend MomentValue operator-(const MomentValue& a, const MomentValue& b) {
        MomentValue r;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) r.v[i][j] = a.v[i][j] - b.v[i][j];
        return r;
    }
    friend MomentValue operator*(double t, const MomentValue& a) {
        MomentValue r;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) r.v[i][j] = t * a.v[i][j];
        return r;
    }
};

/// Hermitian pairing <phi, psi> = 1/2 tr(phi psi^*).
inline cx herm_pair(const SpinorHom& a, const SpinorHom& b) {
    cx acc{0, 0};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 3; ++j) acc += a.m[i][j] * std::conj(b.m[i][j]);
    return 0.5 * acc;
}

/// Real inner product (A, B) = 1/2 Re tr(A B^*).
inline double rdot(const SpinorHom& a, const SpinorHom& b) { return herm_pair(a, b).real(); }
inline double norm2(const SpinorHom& a) { return rdot(a, a); }
inline double rnorm(const SpinorHom& a) { return std::sqrt(norm2(a)); }

inline double rdot(const MomentValue& a, const MomentValue& b) {
    cx acc{0, 0};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) acc += a.v[i][j] * std::conj(b.v[i][j]);
    return 0.5 * acc.real();
}
inline double norm2(const MomentValue& a) { return rdot(a, a); }

/// Clifford contraction c(psi) = sum_e e . psi(e).
inline Spinor clifford_contract(const SpinorHom& psi) {
    Spinor acc = clifford_act(kI, psi.col(0));
    acc = acc + clifford_act(kJ, psi.col(1));
    acc = acc + clifford_act(kK, psi.col(2));
    return acc;
}

/// iota(s) = I* (x) Is + J* (x) Js + K* (x) Ks.
inline SpinorHom iota(Spinor s) {
    SpinorHom r;
    r.set_col(0, clifford_act(kI, s));
    r.set_col(1, clifford_act(kJ, s));
    r.set_col(2, clifford_act(kK, s));
    return r;
}

// c(iota(s)) = -3 s, so the orthogonal projection onto ker c is
// psi + iota(c(psi)) / 3. The constant -3 is pinned by a regression test.
inline SpinorHom project_threehalf(const SpinorHom& psi) {
    Spinor c = clifford_contract(psi);
    return psi + (1.0 / 3.0) * iota(c);
}

/// Component of psi along iota(H): the spinor s with iota(s) = psi - P_W psi.
inline Spinor iota_component(const SpinorHom& psi) {
    Spinor c = clifford_contract(psi);
    return (-1.0 / 3.0) * c;
}

enum class Axis { I = 0, J = 1, K = 2 };

// Hyperkahler triple: minus right quaternion multiplication on the target
// factor, applied per column. Satisfies I^2 = J^2 = K^2 = IJK = -id and is
// the triple for which the moment map below is hyperkahler (d mu^S = 2 w_S).
inline Spinor hk_act_spinor(Axis which, Spinor s) {
    static constexpr ImQuaternion e[3] = {kI, kJ, kK};
    Quaternion q = spinor_to_quat(s);
    Quaternion r = quat_mul(q, e[static_cast<int>(which)].full());
    return quat_to_spinor({-r.w, -r.x, -r.y, -r.z});
}

inline SpinorHom hk_apply(Axis which, const SpinorHom& psi) {
    SpinorHom r;
    for (int j = 0; j < 3; ++j) r.set_col(j, hk_act_spinor(which, psi.col(j)));
    return r;
}

/// gamma(xi) = xi_1 I_S + xi_2 J_S + xi_3 K_S.
inline SpinorHom hk_apply(ImQuaternion xi, const SpinorHom& psi) {
    SpinorHom r = xi.x * hk_apply(Axis::I, psi);
    r += xi.y * hk_apply(Axis::J, psi);
    r += xi.z * hk_apply(Axis::K, psi);
    return r;
}

/// Entrywise multiplication by i (left multiplication by I on the target).
inline SpinorHom ent_i(const SpinorHom& psi) {
    SpinorHom r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 3; ++j) r.m[i][j] = cx{0, 1} * psi.m[i][j];
    return r;
}

// Generator of the circle action that preserves ker c: the I-column turns
// with weight +1, the J and K columns with weight -1. Its chart expression
// is the rotation field a d_b - b d_a + c d_d - d d_c.
inline SpinorHom circle_gen(const SpinorHom& psi) {
    SpinorHom r;
    for (int i = 0; i < 2; ++i) {
        r.m[i][0] = cx{0, 1} * psi.m[i][0];
        r.m[i][1] = cx{0, -1} * psi.m[i][1];
        r.m[i][2] = cx{0, -1} * psi.m[i][2];
    }
    return r;
}

/// Finite circle action e^{i theta} on S; preserves ker c and mu.
inline SpinorHom gauge_rotate(const SpinorHom& psi, double theta) {
    cx p = std::polar(1.0, theta), q = std::polar(1.0, -theta);
    SpinorHom r;
    for (int i = 0; i < 2; ++i) {
        r.m[i][0] = p * psi.m[i][0];
        r.m[i][1] = q * psi.m[i][1];
        r.m[i][2] = q * psi.m[i][2];
    }
    return r;
}

/// mu(psi) = psi psi^* - 1/2 tr(psi psi^*) id.
inline MomentValue moment_map(const SpinorHom& psi) {
    MomentValue r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            cx acc{0, 0};
            for (int k = 0; k < 3; ++k) acc += psi.m[i][k] * std::conj(psi.m[j][k]);
            r.v[i][j] = acc;
        }
    cx half_tr = 0.5 * (r.v[0][0] + r.v[1][1]);
    r.v[0][0] -= half_tr;
    r.v[1][1] -= half_tr;
    return r;
}

/// d_psi mu (h) = psi h^* + h psi^* - 1/2 tr(psi h^* + h psi^*) id.
inline MomentValue moment_diff(const SpinorHom& psi, const SpinorHom& h) {
    MomentValue r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            cx acc{0, 0};
            for (int k = 0; k < 3; ++k)
                acc += psi.m[i][k] * std::conj(h.m[j][k]) + h.m[i][k] * std::conj(psi.m[j][k]);
            r.v[i][j] = acc;
        }
    cx half_tr = 0.5 * (r.v[0][0] + r.v[1][1]);
    r.v[0][0] -= half_tr;
    r.v[1][1] -= half_tr;
    return r;
}

/// Adjoint of moment_diff w.r.t. the fixed inner products: dmu^*(M) = 2 M psi.
inline SpinorHom moment_diff_adjoint(const SpinorHom& psi, const MomentValue& mv) {
    SpinorHom r;
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 3; ++k)
            r.m[i][k] = 2.0 * (mv.v[i][0] * psi.m[0][k] + mv.v[i][1] * psi.m[1][k]);
    return r;
}

// Fixed isometry Im H -> i su(2): e_k maps to i gamma(e_k), i.e. the Pauli
// triple (sigma_3, -sigma_2, sigma_1). Under it d mu^S = 2 omega_S for the
// entrywise U(1) action, which pins the curvature identification.
inline MomentValue imh_to_isu2(ImQuaternion v) {
    MomentValue r;
    r.v[0][0] = cx{v.x, 0};
    r.v[1][1] = cx{-v.x, 0};
    r.v[0][1] = cx{v.z, v.y};
    r.v[1][0] = cx{v.z, -v.y};
    return r;
}

/// W1 element I* (x) Is - J* (x) Js.
inline SpinorHom w1_element(Spinor s) {
    SpinorHom r;
    r.set_col(0, clifford_act(kI, s));
    r.set_col(1, -1.0 * clifford_act(kJ, s));
    return r;
}

/// W2 element I* (x) Is - K* (x) Ks.
inline SpinorHom w2_element(Spinor s) {
    SpinorHom r;
    r.set_col(0, clifford_act(kI, s));
    r.set_col(2, -1.0 * clifford_act(kK, s));
    return r;
}

}  // namespace rarita
