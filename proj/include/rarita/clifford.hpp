#pragma once

#include <cmath>
#include <complex>

// Quaternion arithmetic and the Clifford action of Cl(3) on 2-component
// spinors. All sign and basis conventions used by the rest of the library
// are fixed here:
//   - Hamilton relations I^2 = J^2 = K^2 = IJK = -1, IJ = K.
//   - H ~ C^2 via  a + bI + cJ + dK  <->  (a + bi, c + di).
//   - The Clifford action of an imaginary quaternion on a spinor is left
//     quaternion multiplication transported through that identification.

namespace rarita {

using cx = std::complex<double>;

struct Quaternion {
    double w = 0, x = 0, y = 0, z = 0;

    friend Quaternion operator+(Quaternion p, Quaternion q) {
        return {p.w + q.w, p.x + q.x, p.y + q.y, p.z + q.z};
    }
    friend Quaternion operator-(Quaternion p, Quaternion q) {
        return {p.w - q.w, p.x - q.x, p.y - q.y, p.z - q.z};
    }
    friend Quaternion operator*(double t, Quaternion q) {
        return {t * q.w, t * q.x, t * q.y, t * q.z};
    }
};

struct ImQuaternion {
    double x = 0, y = 0, z = 0;

    Quaternion full() const { return {0, x, y, z}; }
    friend ImQuaternion operator+(ImQuaternion u, ImQuaternion v) {
        return {u.x + v.x, u.y + v.y, u.z + v.z};
    }
    friend ImQuaternion operator*(double t, ImQuaternion v) {
        return {t * v.x, t * v.y, t * v.z};
    }
};

/// 2-component spinor, the C^2 model of H.
struct Spinor {
    cx s0{0, 0}, s1{0, 0};

    friend Spinor operator+(Spinor a, Spinor b) { return {a.s0 + b.s0, a.s1 + b.s1}; }
    friend Spinor operator-(Spinor a, Spinor b) { return {a.s0 - b.s0, a.s1 - b.s1}; }
    friend Spinor operator*(double t, Spinor a) { return {t * a.s0, t * a.s1}; }
    friend Spinor operator*(cx t, Spinor a) { return {t * a.s0, t * a.s1}; }
};

inline double norm2(Quaternion q) { return q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z; }
inline double norm2(ImQuaternion v) { return v.x * v.x + v.y * v.y + v.z * v.z; }
inline double norm2(Spinor s) { return std::norm(s.s0) + std::norm(s.s1); }
inline double qnorm(Quaternion q) { return std::sqrt(norm2(q)); }

/// Hamilton product.
inline Quaternion quat_mul(Quaternion p, Quaternion q) {
    return {p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
            p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
            p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
            p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w};
}

inline Spinor quat_to_spinor(Quaternion q) { return {{q.w, q.x}, {q.y, q.z}}; }

inline Quaternion spinor_to_quat(Spinor s) {
    return {s.s0.real(), s.s0.imag(), s.s1.real(), s.s1.imag()};
}

/// Clifford action of v on s: left quaternion multiplication v * s.
inline Spinor clifford_act(ImQuaternion v, Spinor s) {
    return quat_to_spinor(quat_mul(v.full(), spinor_to_quat(s)));
}

inline constexpr ImQuaternion kI{1, 0, 0};
inline constexpr ImQuaternion kJ{0, 1, 0};
inline constexpr ImQuaternion kK{0, 0, 1};

}  // namespace rarita
