#pragma once

#include <stdexcept>
#include <utility>

#include "rarita/linalg.hpp"
#include "rarita/spinor_hom.hpp"

// Explicit geometry of W^mu = W cap (mu^{-1}(0) \ {0}) and its circle
// quotient: charts, kernel systems, tangent frames, the Killing field, the
// normal line bundle N with its quaternionic companions, and the restricted
// symbol of the linearized Fueter operator with its determinant.

namespace rarita {

enum class Chart { psi1_dominant, psi2_dominant };

struct WmuChartPoint {
    double a = 0, b = 0, c = 0, d = 0, lambda = 0;
    Chart chart = Chart::psi1_dominant;

    double r2() const { return a * a + b * b + c * c + d * d; }
    Spinor spinor() const { return {{a, b}, {c, d}}; }
};

struct FrameBundle {
    SpinorHom d_a, d_b, d_c, d_d, d_lambda;
    SpinorHom killing;
    SpinorHom n, i_n, j_n, k_n;
    SpinorHom d_lambda_tilde;
};

struct SymbolMatrix {
    Mat44 m;
    double det = 0;
};

/// Decompose psi in W as W1 + W2; rejects inputs with |c(psi)| above tol.
std::pair<Spinor, Spinor> w_split(const SpinorHom& psi, double tol = 1e-9);

/// The 3x4 system cutting out mu^{-1}(0) inside W1 + W2 at fixed s1.
Mat34 mu_kernel_matrix(Spinor s1);

/// Local parameterization of W^mu; throws if (a,b,c,d) = 0.
SpinorHom chart_embed(const WmuChartPoint& p);

/// The 3x4 system d_w mu|_{iota(H)} = 0 at the chart point.
Mat34 normal_kernel_matrix(const WmuChartPoint& p);

/// Spinor spanning ker(normal_kernel_matrix): (lambda + i) s entrywise.
Spinor normal_spinor(const WmuChartPoint& p);

/// Tangent frame, Killing field, normal frame and corrected d_lambda.
FrameBundle frame_at(const WmuChartPoint& p);

// Restricted symbol: Clifford multiplication by xi composed with the
// complex unit, from span{d_a..d_d} to T' = IN + JN + KN + span{d_lambda~},
// all frames orthonormalized. Injective for every xi != 0; in these frames
// det = sqrt(2/27) |xi|^4 identically (orientation fixed so det > 0).
SymbolMatrix symbol_matrix(const WmuChartPoint& p, ImQuaternion xi);

// Literal regression form of the restricted-symbol matrix in the
// un-normalized frames, with rows scaled as in the source computation.
// Its determinant is 16 r^4 (1 + lambda^2)^3, i.e. the closed form
// 2 (a^2+b^2+c^2+d^2)^2 (1+lambda^2)^2 times the frozen frame factor
// 8 (1 + lambda^2).
Mat44 symbol_regression_matrix(const WmuChartPoint& p);

inline double symbol_regression_frame_factor(const WmuChartPoint& p) {
    return 8.0 * (1.0 + p.lambda * p.lambda);
}

/// Canonical gauge-fixed orbit representative. Throws if psi is not in
/// W^mu within tol (relative to |psi|).
WmuChartPoint quotient_project(const SpinorHom& psi, double tol = 1e-8);

/// Circle action in chart coordinates: rotate (a,b) and (c,d) by theta.
WmuChartPoint chart_rotate(const WmuChartPoint& p, double theta);

/// Max violation of the two defining equations, scale-normalized.
double wmu_residual(const SpinorHom& psi);

}  // namespace rarita
