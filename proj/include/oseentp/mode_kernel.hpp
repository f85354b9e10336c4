#pragma once

#include <vector>

#include "oseentp/kernels.hpp"
#include "oseentp/parallel.hpp"
#include "oseentp/params.hpp"
#include "oseentp/vec.hpp"

// Per-mode velocity kernels of the time-periodic Oseen system:
//   Gamma_k(x) = K_{lambda_k}(x) I + (Hess Phi_k)(x),  Phi_k = E * K_{lambda_k},
// which is divergence-free and solves the k-mode system with pressure kernel P
// by construction (Lap Phi_k = -K_{lambda_k}).
//
// Evaluation strategy: rotate the drift onto e3; in that frame K is
// axisymmetric with Legendre expansion K(s,u) = sum_l kappa_l(s) P_l(u),
// kappa_l built from exponentially scaled modified spherical Bessel functions.
// The Newtonian potential then splits into per-l radial integrals
//   Ahat_l(r) = int_0^r (s/r)^{l+1} s kappa_l ds,
//   Bhat_l(r) = int_r^inf (r/s)^l   s kappa_l ds,
// accumulated once on a cached radial grid (every stored factor is <= 1, so
// the cumulative passes cannot overflow); point evaluations add a Gauss
// increment from the nearest anchor. Beyond the grid, Ahat continues by its
// exact multipole power law and Bhat vanishes with the kernel tail.

namespace oseentp {

// ibar_l(z) = e^{-z} i_l(z) for l = 0..lmax (modified spherical Bessel,
// first kind), by Miller backward recurrence; ibar_l(0) = (l == 0).
std::vector<double> scaled_bessel_i(int lmax, double z);

class ModeKernel {
  public:
    // k != 0; tail_tol bounds |K| outside the reported radius R_K.
    ModeKernel(const KernelParams& p, int k, double tail_tol);

    CMat3 eval(const Vec3& x) const;
    cplx scalar_K(const Vec3& x) const;

    int k() const { return k_; }
    double r_cut() const { return rcut_; }
    int lmax() const { return lmax_; }
    double R_K() const { return R_K_; }

  private:
    void build();
    // kappa_l(s), l = 0..lmax, into out (preallocated lmax+1).
    void kappa(double s, cplx* out) const;
    // Ahat_l(r), Bhat_l(r) for all l.
    void radial(double r, std::vector<cplx>& A, std::vector<cplx>& B) const;

    KernelParams p_;
    int k_;
    double lambda_;
    double a_;    // |zeta| / (2 nu)
    cplx mu_;     // principal sqrt(a^2 + i lambda/nu)
    Mat3 rot_;    // rot_ * zhat = e3
    double rcut_;
    int lmax_;
    double R_K_;
    std::vector<double> grid_;
    std::vector<cplx> Ahat_, Bhat_;  // grid-major: [j * (lmax+1) + l]
};

// Built once per (zeta, nu, period, n_modes, tail_tol); read-only afterwards,
// safe for concurrent evaluation. Holds modes k = 1..N; negative modes use
// conjugation symmetry of the real-in-time kernel.
class ModeKernelCache {
  public:
    explicit ModeKernelCache(const KernelParams& p, double tail_tol = 1e-10);

    const KernelParams& params() const { return p_; }
    double tail_tol() const { return tol_; }
    const ModeKernel& mode(int k_abs) const;
    double R_K(int k) const;  // decreasing in |k|

  private:
    KernelParams p_;
    double tol_;
    std::vector<ModeKernel> modes_;
};

// Velocity kernel of mode k (k != 0, |k| <= N).
CMat3 mode_velocity(const ModeKernelCache& cache, const Vec3& x, int k);
CTen3 mode_velocity_grad(const ModeKernelCache& cache, const Vec3& x, int k);

std::vector<CMat3> mode_velocity_batch(const ModeKernelCache& cache,
                                       const std::vector<Vec3>& pts, int k,
                                       ExecMode mode = ExecMode::parallel);

// Closed form at zeta = 0: Gamma_k = K I + HessHess[(E - nu K)/(i lambda_k)].
CMat3 mode_velocity_zeta0_closed_form(const KernelParams& p, int k, const Vec3& x);

// Purely periodic assembly sum_{1<=|k|<=N} e^{i lambda_k t} Gamma_k(x); real
// by conjugate pairing.
Mat3 periodic_velocity(const ModeKernelCache& cache, double t, const Vec3& x);
Ten3 periodic_velocity_grad(const ModeKernelCache& cache, double t, const Vec3& x);

// Steady part plus purely periodic part.
Mat3 full_velocity(const ModeKernelCache& cache, double t, const Vec3& x);

// Frobenius L2(torus) norm of the purely periodic kernel at x (Parseval).
double periodic_l2_norm(const ModeKernelCache& cache, const Vec3& x);
// L1(torus) norm of the Frobenius norm, by uniform time-grid quadrature.
double periodic_l1_norm(const ModeKernelCache& cache, const Vec3& x);
// Same for the gradient tensor.
double periodic_grad_l1_norm(const ModeKernelCache& cache, const Vec3& x);

}  // namespace oseentp
