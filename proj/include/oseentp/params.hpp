#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "oseentp/vec.hpp"

namespace oseentp {

inline constexpr double pi = std::numbers::pi;

// Drift velocity zeta, viscosity nu, time period, and Fourier truncation.
// zeta may be zero only for operations that degenerate to the Stokes case;
// Oseen-specific code paths require |zeta| > 0 and check it themselves.
struct KernelParams {
    Vec3 zeta{};
    double nu = 1.0;
    double period = 1.0;
    int n_modes = 8;

    void validate() const {
        if (!(nu > 0)) throw std::invalid_argument("KernelParams: nu must be positive");
        if (!(period > 0)) throw std::invalid_argument("KernelParams: period must be positive");
        if (n_modes < 1) throw std::invalid_argument("KernelParams: n_modes must be >= 1");
    }

    // Angular frequency of mode k.
    double lambda(int k) const { return 2.0 * pi * k / period; }
};

// Anisotropic wake weight (|zeta||x| + zeta.x)/2. Vanishes exactly on the ray
// anti-parallel to zeta (the wake axis) and grows like |zeta||x| elsewhere.
inline double wake_weight(const Vec3& zeta, const Vec3& x) {
    return 0.5 * (norm(zeta) * norm(x) + dot(zeta, x));
}

// max(1, log r); the clamped logarithm appearing in borderline decay bounds.
inline double log_plus(double r) {
    if (!(r > 0)) throw std::domain_error("log_plus: r must be positive");
    return std::max(1.0, std::log(r));
}

}  // namespace oseentp
