#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "oseentp/fourier.hpp"
#include "oseentp/mesh.hpp"
#include "oseentp/mode_kernel.hpp"
#include "oseentp/params.hpp"
#include "oseentp/potentials.hpp"
#include "oseentp/vec.hpp"

// Manufactured exterior flows: superpositions of fundamental-solution
// singularities placed strictly inside a spherical "body", so the exact
// velocity, pressure, and boundary data are available everywhere outside.

namespace oseentp {

enum class SingularityKind { steady_oseenlet, periodic_oseenlet, pulsating_source };

struct Singularity {
    SingularityKind kind = SingularityKind::steady_oseenlet;
    Vec3 location{};
    Vec3 strength{};       // steady oseenlet amplitude (mode 0)
    CVec3 amplitude{};     // periodic oseenlet amplitude at +mode; conjugate at -mode
    int mode = 1;          // >= 1
    FourierScalar flux{};  // pulsating source flux coefficients
};

Singularity steady_oseenlet(const Vec3& y, const Vec3& strength);
// mode < 0 is normalized to (|mode|, conj(amplitude)); mode 0 is rejected.
Singularity periodic_oseenlet(const Vec3& y, int mode, const CVec3& amplitude);
Singularity pulsating_source(const Vec3& y, FourierScalar flux);

struct Scenario {
    KernelParams params;
    Vec3 body_center{};
    double body_radius = 1.0;
    int mesh_level = 3;
    std::vector<Singularity> singularities;
    SurfaceMesh mesh;  // sphere of body_radius about body_center
    std::shared_ptr<const ModeKernelCache> cache;

    // Singularities sit within 0.8 body_radius of the center, periodic modes
    // fit the truncation, flux coefficient counts do not exceed n_modes.
    void validate() const;
};

Scenario make_scenario(const KernelParams& params, std::vector<Singularity> singularities,
                       const Vec3& body_center = {}, double body_radius = 1.0,
                       int mesh_level = 3, QuadRule rule = QuadRule::three_point);

double min_singularity_distance(const Scenario& scn, const Vec3& x);

// Mode-k fields at x (exact superposition; x away from every singularity).
CVec3 eval_velocity_mode(const Scenario& scn, int k, const Vec3& x);
cplx eval_pressure_mode(const Scenario& scn, int k, const Vec3& x);
// grad(a, i) = d_a v_i.
CMat3 eval_grad_velocity_mode(const Scenario& scn, int k, const Vec3& x);

FourierField eval_velocity_modes(const Scenario& scn, const Vec3& x);
FourierScalar eval_pressure_modes(const Scenario& scn, const Vec3& x);
FourierTensor eval_grad_velocity_modes(const Scenario& scn, const Vec3& x);

// Real time-domain fields.
Vec3 eval_velocity(const Scenario& scn, double t, const Vec3& x);
double eval_pressure(const Scenario& scn, double t, const Vec3& x);
Mat3 eval_grad_velocity(const Scenario& scn, double t, const Vec3& x);

// Exact traces on the mesh nodes; traction 2 nu D(v) n - p n uses the fluid
// normal n = -(body-outward node normal).
BoundaryData boundary_data(const Scenario& scn);

// Two scenarios sharing steady and periodic oseenlets and differing only in
// the source flux: time-dependent q0 + q1 cos(lambda_1 t) versus constant q0.
// Used to contrast decay of flows with and without oscillating net flux.
std::pair<Scenario, Scenario> make_flux_pair(const KernelParams& params, int mesh_level = 3);

// Strict JSON round-trip; unknown keys are rejected.
Scenario load_scenario(const std::string& path);
void save_scenario(const Scenario& scn, const std::string& path);

}  // namespace oseentp
