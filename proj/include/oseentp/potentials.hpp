#pragma once

#include <functional>
#include <vector>

#include "oseentp/fourier.hpp"
#include "oseentp/mesh.hpp"
#include "oseentp/mode_kernel.hpp"
#include "oseentp/parallel.hpp"
#include "oseentp/params.hpp"
#include "oseentp/vec.hpp"

// Boundary-layer and volume potentials over a SurfaceMesh, and the assembly
// of the exterior representation formulas built on them. Throughout, n
// denotes the normal pointing out of the fluid domain, i.e. the negative of
// the body-outward mesh normal.

namespace oseentp {

// Velocity trace and traction sampled at the mesh quadrature nodes.
struct BoundaryData {
    std::vector<FourierField> velocity;  // [node]
    std::vector<FourierField> traction;  // [node]; 2 nu D(v) n - p n
    int n_modes = 0;
    double period = 1.0;

    // Sizes match the mesh, mode counts are uniform, per-node data is
    // conjugate-symmetric (real in time).
    void validate(const SurfaceMesh& mesh) const;
};

// Compactly supported forcing, already quadratured: nodes, positive weights,
// and Fourier coefficients of f per node.
struct VolumeForcing {
    std::vector<Vec3> nodes;
    std::vector<double> weights;
    std::vector<FourierField> f;
    Vec3 support_center{};
    double support_radius = 0;

    bool empty() const { return nodes.empty(); }
    void validate() const;
};

// Caller-supplied velocity field for the nonlinear volume terms.
struct VolumeField {
    std::function<FourierField(const Vec3&)> v;
    std::function<FourierTensor(const Vec3&)> grad;  // grad(a, i) = d_a v_i
};

// Guard: layer evaluation requires dist(x, mesh nodes) >= 2 max triangle
// diameter. Throws std::domain_error otherwise.
void require_off_surface(const SurfaceMesh& mesh, const Vec3& x);

// Mode-wise integral of the full kernel against a vector density:
//   coeff k of int_Sigma Gamma(., x - y) g(., y) dS(y),
// steady kernel for k = 0, mode kernels otherwise.
FourierField single_layer_velocity(const SurfaceMesh& mesh,
                                   const std::vector<FourierField>& density, const Vec3& x,
                                   const ModeKernelCache& cache);

// i-th component: mode-wise nu int_Sigma (n_a v_j + v_a n_j) d_a Gamma_ij dS
// with n the fluid-side normal; the boundary couple of the doubled symmetric
// stress of the kernel.
FourierField stress_couple_layer(const SurfaceMesh& mesh, const std::vector<FourierField>& v_b,
                                 const Vec3& x, const ModeKernelCache& cache);

// Monopole family (same kernel in every mode; P = -grad E). n is the
// fluid-side normal.
//   P:      int_Sigma density(y) P(x - y) dS            (scalar density -> vector)
//   Pdot:   int_Sigma density(y) . P(x - y) dS          (vector -> scalar)
//   E:      int_Sigma density(y) E(x - y) dS            (scalar -> scalar)
//   gradPn: int_Sigma density(y) . [gradP(x - y) n] dS  (vector -> scalar)
FourierField monopole_layer_P(const SurfaceMesh& mesh, const std::vector<FourierScalar>& density,
                              const Vec3& x);
FourierScalar monopole_layer_Pdot(const SurfaceMesh& mesh,
                                  const std::vector<FourierField>& density, const Vec3& x);
FourierScalar monopole_layer_E(const SurfaceMesh& mesh, const std::vector<FourierScalar>& density,
                               const Vec3& x);
FourierScalar monopole_layer_gradPn(const SurfaceMesh& mesh,
                                    const std::vector<FourierField>& density, const Vec3& x);

// Mode-wise volume convolution int Gamma(x - y) f_k(y) dy over the forcing
// cloud; x must lie outside the support ball.
FourierField volume_potential(const VolumeForcing& forcing, const Vec3& x,
                              const ModeKernelCache& cache);

// Pressure counterpart int P(x - y) . f_k(y) dy.
FourierScalar volume_pressure_potential(const VolumeForcing& forcing, const Vec3& x, int n_modes);

// Exterior velocity representation from boundary data and forcing:
//   volume-forcing + traction-layer + velocity-couple-layer
//   - normal-flux-monopole.
FourierField represent_velocity_linear(const SurfaceMesh& mesh, const BoundaryData& bdata,
                                       const VolumeForcing& forcing, const Vec3& x,
                                       const ModeKernelCache& cache);

// Exterior pressure representation:
//   pressure-volume-term + pressure-traction-term + pressure-drift-terms
//   + pressure-gradp-term - pressure-time-term, with zero pressure offset.
FourierScalar represent_pressure_linear(const SurfaceMesh& mesh, const BoundaryData& bdata,
                                        const VolumeForcing& forcing, const Vec3& x,
                                        const ModeKernelCache& cache);

struct NonlinearRepresentation {
    FourierField direct;         // volume term Gamma * (f - v.grad v)
    FourierField by_parts;       // volume grad Gamma : (v x v) route + flux boundary term
    double tail_estimate = 0;    // estimated magnitude of the truncated volume tail
};

struct VolumeQuadratureSpec {
    double r_inner = 1.0;   // start of the shell quadrature (body circumradius)
    double r_trunc = 32.0;  // truncation radius
    int radial_per_shell = 4;
    int n_shells = 24;      // geometric shells between r_inner and r_trunc
    int n_polar = 12;       // Gauss points in cos(theta)
    int n_azimuth = 16;     // uniform points in phi
};

// Both nonlinear volume routes evaluated on the same shell quadrature; the
// difference between them measures the quadrature + truncation error of the
// identity connecting them.
NonlinearRepresentation represent_velocity_nonlinear(const SurfaceMesh& mesh,
                                                     const BoundaryData& bdata,
                                                     const VolumeForcing& forcing,
                                                     const VolumeField& vfield, const Vec3& x,
                                                     const ModeKernelCache& cache,
                                                     const VolumeQuadratureSpec& quad);

// Parallel-over-points helper shared by the layer evaluators.
template <class F>
auto eval_batch(const std::vector<Vec3>& xs, F&& f, ExecMode mode = ExecMode::parallel) {
    using R = decltype(f(xs[0]));
    std::vector<R> out(xs.size());
    parallel_for(xs.size(), [&](std::size_t i) { out[i] = f(xs[i]); }, mode);
    return out;
}

}  // namespace oseentp
