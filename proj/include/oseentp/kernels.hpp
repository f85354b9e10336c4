#pragma once

#include <cmath>
#include <stdexcept>
#include <type_traits>
#include <utility>

#include "oseentp/params.hpp"
#include "oseentp/vec.hpp"

// Closed-form kernels: Laplace fundamental solution E, pressure kernel
// P = -grad E with derivatives, the Stokeslet, the steady Oseen velocity
// kernel, and the scalar drift kernel K_lambda solving (i lambda - nu Lap
// - zeta.grad) K = delta. All gradients stack the derivative index first.

namespace oseentp {

inline void require_nonzero(double r) {
    if (!(r > 0)) throw std::domain_error("kernel evaluated at its singularity");
}

inline double laplace_E(const Vec3& x) {
    double r = norm(x);
    require_nonzero(r);
    return 1.0 / (4.0 * pi * r);
}

inline Vec3 pressure_P(const Vec3& x) {
    double r = norm(x);
    require_nonzero(r);
    return (1.0 / (4.0 * pi * r * r * r)) * x;
}

inline Vec3 grad_E(const Vec3& x) { return -1.0 * pressure_P(x); }

// grad_P(i,j) = d_i P_j = (delta_ij - 3 xhat_i xhat_j) / (4 pi r^3); symmetric.
inline Mat3 grad_P(const Vec3& x) {
    double r = norm(x);
    require_nonzero(r);
    Vec3 xh = (1.0 / r) * x;
    Mat3 g = Mat3::identity() - 3.0 * outer(xh, xh);
    g *= 1.0 / (4.0 * pi * r * r * r);
    return g;
}

// hess_P[a](i,j) = d_a d_i P_j
//   = 3 [5 xhat_a xhat_i xhat_j - d_ai xhat_j - d_aj xhat_i - d_ij xhat_a] / (4 pi r^4).
inline Ten3 hess_P(const Vec3& x) {
    double r = norm(x);
    require_nonzero(r);
    Vec3 xh = (1.0 / r) * x;
    double c = 3.0 / (4.0 * pi * r * r * r * r);
    Ten3 h;
    for (int a = 0; a < 3; ++a)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double v = 5.0 * xh[a] * xh[i] * xh[j];
                if (a == i) v -= xh[j];
                if (a == j) v -= xh[i];
                if (i == j) v -= xh[a];
                h[a](i, j) = c * v;
            }
    return h;
}

inline Mat3 stokeslet(const Vec3& x, double nu) {
    double r = norm(x);
    require_nonzero(r);
    if (!(nu > 0)) throw std::invalid_argument("stokeslet: nu must be positive");
    Vec3 xh = (1.0 / r) * x;
    Mat3 g = Mat3::identity() + outer(xh, xh);
    g *= 1.0 / (8.0 * pi * nu * r);
    return g;
}

namespace detail {

// c1(s) = (1 - e^-s)/s, c2(s) = (1 - e^-s - s e^-s)/s^2; both have removable
// singularities at s = 0 (the wake axis), evaluated by series there.
inline double oseen_c1(double s) {
    if (s < 1e-3) return 1.0 - s / 2.0 + s * s / 6.0 - s * s * s / 24.0;
    return -std::expm1(-s) / s;
}
inline double oseen_c2(double s) {
    if (s < 1e-3) return 0.5 - s / 3.0 + s * s / 8.0 - s * s * s / 30.0;
    return (-std::expm1(-s) - s * std::exp(-s)) / (s * s);
}

}  // namespace detail

// Steady Oseen velocity kernel: with s = wake_weight(zeta, x)/nu,
//   G = e^{-s} I/(4 pi nu r) - c1(s) (I - xhat xhat)/(8 pi nu r)
//       + |zeta| c2(s) (xhat + zhat)(xhat + zhat)^T / (16 pi nu^2).
// Continuous across the wake axis; tends to the Stokeslet as zeta -> 0.
inline Mat3 oseen_steady(const Vec3& x, const KernelParams& p) {
    double r = norm(x);
    require_nonzero(r);
    double zn = norm(p.zeta);
    if (!(zn > 0)) throw std::invalid_argument("oseen_steady: zeta must be nonzero");
    double s = wake_weight(p.zeta, x) / p.nu;
    Vec3 xh = (1.0 / r) * x;
    Vec3 zh = (1.0 / zn) * p.zeta;
    Mat3 g = (std::exp(-s) / (4.0 * pi * p.nu * r)) * Mat3::identity();
    g -= (detail::oseen_c1(s) / (8.0 * pi * p.nu * r)) * (Mat3::identity() - outer(xh, xh));
    Vec3 w = xh + zh;
    g += (zn * detail::oseen_c2(s) / (16.0 * pi * p.nu * p.nu)) * outer(w, w);
    return g;
}

// 4th-order central differences, step 1e-4 * max(1, |x|): accurate to ~1e-11
// on these kernels, well inside every residual budget used downstream.
template <class F>
auto fd_gradient(F&& f, const Vec3& x) {
    double h = 1e-4 * std::max(1.0, norm(x));
    using R = decltype(f(x));
    T3<typename std::remove_reference_t<decltype(std::declval<R>().m[0])>> g;
    for (int a = 0; a < 3; ++a) {
        Vec3 e{};
        e[a] = 1.0;
        R fp2 = f(x + (2 * h) * e), fp1 = f(x + h * e);
        R fm1 = f(x - h * e), fm2 = f(x - (2 * h) * e);
        auto d = (-1.0 / (12 * h)) * fp2 + (8.0 / (12 * h)) * fp1;
        d -= (8.0 / (12 * h)) * fm1;
        d += (1.0 / (12 * h)) * fm2;
        g[a] = d;
    }
    return g;
}

inline Ten3 oseen_steady_grad(const Vec3& x, const KernelParams& p) {
    return fd_gradient([&](const Vec3& y) { return oseen_steady(y, p); }, x);
}

// Mode-0 velocity kernel: steady Oseen when the drift is nonzero, otherwise
// its zero-drift limit, the Stokeslet.
inline Mat3 steady_velocity(const Vec3& x, const KernelParams& p) {
    return norm(p.zeta) > 0 ? oseen_steady(x, p) : stokeslet(x, p.nu);
}

inline Ten3 steady_velocity_grad(const Vec3& x, const KernelParams& p) {
    if (norm(p.zeta) > 0) return oseen_steady_grad(x, p);
    return fd_gradient([&](const Vec3& y) { return stokeslet(y, p.nu); }, x);
}

// Scalar drift kernel K_lambda(x) = e^{-zeta.x/(2nu)} e^{-mu r} / (4 pi nu r),
// mu = principal sqrt(|zeta|^2/(4 nu^2) + i lambda/nu). At lambda = 0 this is
// exactly the first term of the steady Oseen kernel.
inline cplx drift_helmholtz_K(const Vec3& x, const KernelParams& p, double lambda) {
    double r = norm(x);
    require_nonzero(r);
    double a = norm(p.zeta) / (2.0 * p.nu);
    cplx mu = std::sqrt(cplx(a * a, lambda / p.nu));
    return std::exp(cplx(-dot(p.zeta, x) / (2.0 * p.nu), 0.0) - mu * r) / (4.0 * pi * p.nu * r);
}

}  // namespace oseentp
