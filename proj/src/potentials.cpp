#include "oseentp/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "oseentp/gauss.hpp"
#include "oseentp/kernels.hpp"

namespace oseentp {

namespace {

void require_density_size(std::size_t got, std::size_t want, int n_modes_got, int n_modes_want,
                          const char* who) {
    if (got != want)
        throw std::invalid_argument(std::string(who) + ": density size does not match the mesh");
    if (n_modes_got != n_modes_want)
        throw std::invalid_argument(std::string(who) + ": density mode count mismatch");
}

template <class T>
int density_modes(const std::vector<Fourier<T>>& d) {
    return d.empty() ? 0 : d[0].n_modes();
}

CVec3 row(const CMat3& m, int a) { return CVec3{m(a, 0), m(a, 1), m(a, 2)}; }

// sum_{a,j} t[a](i,j) s(a,j), the couple contraction used by the stress layer
// and the by-parts volume route.
CVec3 couple_contract(const CTen3& t, const CMat3& s) {
    CVec3 out{};
    for (int a = 0; a < 3; ++a) out += matvec(t[a], row(s, a));
    return out;
}

template <class TT>
CTen3 to_ctensor(const TT& t) {
    CTen3 c;
    for (int a = 0; a < 3; ++a) c[a] = CMat3(t[a]);
    return c;
}

}  // namespace

void BoundaryData::validate(const SurfaceMesh& mesh) const {
    if (velocity.size() != mesh.nodes.size() || traction.size() != mesh.nodes.size())
        throw std::invalid_argument("BoundaryData: node count does not match the mesh");
    if (n_modes < 0 || !(period > 0))
        throw std::invalid_argument("BoundaryData: bad mode count or period");
    for (std::size_t i = 0; i < velocity.size(); ++i) {
        if (velocity[i].n_modes() != n_modes || traction[i].n_modes() != n_modes)
            throw std::invalid_argument("BoundaryData: non-uniform mode counts");
        if (!is_conj_symmetric(velocity[i], 1e-10) || !is_conj_symmetric(traction[i], 1e-10))
            throw std::invalid_argument("BoundaryData: data is not real-valued in time");
    }
}

void VolumeForcing::validate() const {
    if (weights.size() != nodes.size() || f.size() != nodes.size())
        throw std::invalid_argument("VolumeForcing: inconsistent array sizes");
    if (!(support_radius >= 0)) throw std::invalid_argument("VolumeForcing: negative support radius");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (!(weights[i] > 0)) throw std::invalid_argument("VolumeForcing: weights must be positive");
        if (norm(nodes[i] - support_center) > support_radius * (1.0 + 1e-12))
            throw std::invalid_argument("VolumeForcing: node outside the declared support ball");
        if (f[i].n_modes() != f[0].n_modes())
            throw std::invalid_argument("VolumeForcing: non-uniform mode counts");
    }
}

void require_off_surface(const SurfaceMesh& mesh, const Vec3& x) {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& q : mesh.nodes) d = std::min(d, norm(x - q.y));
    if (d < 2.0 * mesh.max_diameter)
        throw std::domain_error(
            "layer evaluation point closer to the surface than twice the facet diameter");
}

FourierField single_layer_velocity(const SurfaceMesh& mesh,
                                   const std::vector<FourierField>& density, const Vec3& x,
                                   const ModeKernelCache& cache) {
    const KernelParams& p = cache.params();
    const int N = p.n_modes;
    require_density_size(density.size(), mesh.nodes.size(), density_modes(density), N,
                         "single_layer_velocity");
    require_off_surface(mesh, x);
    FourierField out(N);
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
        const QuadNode& q = mesh.nodes[i];
        Vec3 z = x - q.y;
        const FourierField& g = density[i];
        out.coeff(0) += q.w * matvec(steady_velocity(z, p), g.coeff(0));
        for (int k = 1; k <= N; ++k) {
            CMat3 G = cache.mode(k).eval(z);
            out.coeff(k) += q.w * matvec(G, g.coeff(k));
            out.coeff(-k) += q.w * matvec(conj(G), g.coeff(-k));
        }
    }
    return out;
}

FourierField stress_couple_layer(const SurfaceMesh& mesh, const std::vector<FourierField>& v_b,
                                 const Vec3& x, const ModeKernelCache& cache) {
    const KernelParams& p = cache.params();
    const int N = p.n_modes;
    require_density_size(v_b.size(), mesh.nodes.size(), density_modes(v_b), N,
                         "stress_couple_layer");
    require_off_surface(mesh, x);
    FourierField out(N);
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
        const QuadNode& q = mesh.nodes[i];
        Vec3 z = x - q.y;
        CVec3 n{-q.normal[0], -q.normal[1], -q.normal[2]};
        double w = p.nu * q.w;
        {
            CMat3 s = outer(n, v_b[i].coeff(0)) + outer(v_b[i].coeff(0), n);
            out.coeff(0) += w * couple_contract(to_ctensor(steady_velocity_grad(z, p)), s);
        }
        for (int k = 1; k <= N; ++k) {
            CTen3 t = fd_gradient([&](const Vec3& y) { return cache.mode(k).eval(y); }, z);
            CMat3 sp = outer(n, v_b[i].coeff(k)) + outer(v_b[i].coeff(k), n);
            CMat3 sm = outer(n, v_b[i].coeff(-k)) + outer(v_b[i].coeff(-k), n);
            out.coeff(k) += w * couple_contract(t, sp);
            out.coeff(-k) += w * couple_contract(conj(t), sm);
        }
    }
    return out;
}

FourierField monopole_layer_P(const SurfaceMesh& mesh, const std::vector<FourierScalar>& density,
                              const Vec3& x) {
    const int N = density_modes(density);
    require_density_size(density.size(), mesh.nodes.size(), N, N, "monopole_layer_P");
    require_off_surface(mesh, x);
    FourierField out(N);
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
        const QuadNode& q = mesh.nodes[i];
        CVec3 pk = q.w * CVec3(pressure_P(x - q.y));
        for (int k = -N; k <= N; ++k) out.coeff(k) += density[i].coeff(k) * pk;
    }
    return out;
}

FourierScalar monopole_layer_Pdot(const SurfaceMesh& mesh,
                                  const std::vector<FourierField>& density, const Vec3& x) {
    const int N = density_modes(density);
    require_density_size(density.size(), mesh.nodes.size(), N, N, "monopole_layer_Pdot");
    require_off_surface(mesh, x);
    FourierScalar out(N);
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
        const QuadNode& q = mesh.nodes[i];
        Vec3 pk = q.w * pressure_P(x - q.y);
        for (int k = -N; k <= N; ++k) out.coeff(k) += dot(pk, density[i].coeff(k));
    }
    return out;
}

FourierScalar monopole_layer_E(const SurfaceMesh& mesh, const std::vector<FourierScalar>& density,
                               const Vec3& x) {
    const int N = density_modes(density);
    require_density_size(density.size(), mesh.nodes.size(), N, N, "monopole_layer_E");
    require_off_surface(mesh, x);
    FourierScalar out(N);
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
        const QuadNode& q = mesh.nodes[i];
        double e = q.w * laplace_E(x - q.y);
        for (int k = -N; k <= N; ++k) out.coeff(k) += e * density[i].coeff(k);
    }
    return out;
}

FourierScalar monopole_layer_gradPn(const SurfaceMesh& mesh,
                                    const std::vector<FourierField>& density, const Vec3& x) {
    const int N = density_modes(density);
    require_density_size(density.size(), mesh.nodes.size(), N, N, "monopole_layer_gradPn");
    require_off_surface(mesh, x);
    FourierScalar out(N);
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
        const QuadNode& q = mesh.nodes[i];
        Vec3 n = -1.0 * q.normal;
        Vec3 gpn = q.w * matvec(grad_P(x - q.y), n);
        for (int k = -N; k <= N; ++k) out.coeff(k) += dot(gpn, density[i].coeff(k));
    }
    return out;
}

FourierField volume_potential(const VolumeForcing& forcing, const Vec3& x,
                              const ModeKernelCache& cache) {
    const KernelParams& p = cache.params();
    const int N = p.n_modes;
    FourierField out(N);
    if (forcing.empty()) return out;
    forcing.validate();
    if (forcing.f[0].n_modes() != N)
        throw std::invalid_argument("volume_potential: forcing mode count mismatch");
    if (norm(x - forcing.support_center) <= forcing.support_radius)
        throw std::domain_error("volume_potential: point inside the forcing support");
    for (std::size_t i = 0; i < forcing.nodes.size(); ++i) {
        Vec3 z = x - forcing.nodes[i];
        double w = forcing.weights[i];
        const FourierField& g = forcing.f[i];
        out.coeff(0) += w * matvec(steady_velocity(z, p), g.coeff(0));
        for (int k = 1; k <= N; ++k) {
            CMat3 G = cache.mode(k).eval(z);
            out.coeff(k) += w * matvec(G, g.coeff(k));
            out.coeff(-k) += w * matvec(conj(G), g.coeff(-k));
        }
    }
    return out;
}

FourierScalar volume_pressure_potential(const VolumeForcing& forcing, const Vec3& x, int n_modes) {
    FourierScalar out(n_modes);
    if (forcing.empty()) return out;
    forcing.validate();
    if (forcing.f[0].n_modes() != n_modes)
        throw std::invalid_argument("volume_pressure_potential: forcing mode count mismatch");
    if (norm(x - forcing.support_center) <= forcing.support_radius)
        throw std::domain_error("volume_pressure_potential: point inside the forcing support");
    for (std::size_t i = 0; i < forcing.nodes.size(); ++i) {
        Vec3 pk = forcing.weights[i] * pressure_P(x - forcing.nodes[i]);
        for (int k = -n_modes; k <= n_modes; ++k) out.coeff(k) += dot(pk, forcing.f[i].coeff(k));
    }
    return out;
}

namespace {

// traction + (zeta . n) v_b, the density of the single-layer term; n is the
// fluid-side normal.
std::vector<FourierField> modified_traction(const SurfaceMesh& mesh, const BoundaryData& bdata,
                                            const Vec3& zeta) {
    std::vector<FourierField> d(mesh.nodes.size(), FourierField(bdata.n_modes));
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
        double zn = dot(zeta, -1.0 * mesh.nodes[i].normal);
        d[i] = bdata.traction[i] + cplx(zn) * bdata.velocity[i];
    }
    return d;
}

// v_b . n with the fluid-side normal.
std::vector<FourierScalar> normal_flux_density(const SurfaceMesh& mesh,
                                               const BoundaryData& bdata) {
    std::vector<FourierScalar> d(mesh.nodes.size(), FourierScalar(bdata.n_modes));
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
        Vec3 n = -1.0 * mesh.nodes[i].normal;
        for (int k = -bdata.n_modes; k <= bdata.n_modes; ++k)
            d[i].coeff(k) = dot(n, bdata.velocity[i].coeff(k));
    }
    return d;
}

}  // namespace

FourierField represent_velocity_linear(const SurfaceMesh& mesh, const BoundaryData& bdata,
                                       const VolumeForcing& forcing, const Vec3& x,
                                       const ModeKernelCache& cache) {
    bdata.validate(mesh);
    if (bdata.n_modes != cache.params().n_modes)
        throw std::invalid_argument("represent_velocity_linear: mode count mismatch");
    FourierField out = single_layer_velocity(mesh, modified_traction(mesh, bdata,
                                                                     cache.params().zeta),
                                             x, cache);
    out += stress_couple_layer(mesh, bdata.velocity, x, cache);
    out -= monopole_layer_P(mesh, normal_flux_density(mesh, bdata), x);
    out += volume_potential(forcing, x, cache);
    return out;
}

FourierScalar represent_pressure_linear(const SurfaceMesh& mesh, const BoundaryData& bdata,
                                        const VolumeForcing& forcing, const Vec3& x,
                                        const ModeKernelCache& cache) {
    bdata.validate(mesh);
    const KernelParams& p = cache.params();
    if (bdata.n_modes != p.n_modes)
        throw std::invalid_argument("represent_pressure_linear: mode count mismatch");
    const int N = p.n_modes;

    FourierScalar out = monopole_layer_Pdot(mesh, modified_traction(mesh, bdata, p.zeta), x);

    std::vector<FourierScalar> vn = normal_flux_density(mesh, bdata);
    FourierField pvn = monopole_layer_P(mesh, vn, x);
    for (int k = -N; k <= N; ++k) out.coeff(k) -= dot(p.zeta, pvn.coeff(k));

    FourierScalar grad_term = monopole_layer_gradPn(mesh, bdata.velocity, x);
    out += cplx(2.0 * p.nu) * grad_term;

    out -= fourier_time_derivative(monopole_layer_E(mesh, vn, x), p.period);

    out += volume_pressure_potential(forcing, x, N);
    return out;
}

NonlinearRepresentation represent_velocity_nonlinear(const SurfaceMesh& mesh,
                                                     const BoundaryData& bdata,
                                                     const VolumeForcing& forcing,
                                                     const VolumeField& vfield, const Vec3& x,
                                                     const ModeKernelCache& cache,
                                                     const VolumeQuadratureSpec& quad) {
    if (!vfield.v || !vfield.grad)
        throw std::invalid_argument("represent_velocity_nonlinear: velocity field not supplied");
    if (!(quad.r_inner > 0) || !(quad.r_trunc > quad.r_inner) || quad.n_shells < 2 ||
        quad.radial_per_shell < 1 || quad.n_polar < 2 || quad.n_azimuth < 3)
        throw std::invalid_argument("represent_velocity_nonlinear: bad quadrature spec");

    const KernelParams& p = cache.params();
    const int N = p.n_modes;
    FourierField boundary = represent_velocity_linear(mesh, bdata, forcing, x, cache);

    // Variant-2 boundary term: -int_Sigma Gamma [(v_b . n) v_b]_k dS, the flux
    // carried through the inner boundary by the advected momentum.
    std::vector<FourierField> adv_density(mesh.nodes.size(), FourierField(N));
    std::vector<FourierScalar> vn = normal_flux_density(mesh, bdata);
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i)
        adv_density[i] = fourier_pointwise(vn[i], bdata.velocity[i]);
    FourierField parts_surface = single_layer_velocity(mesh, adv_density, x, cache);

    std::vector<double> gl_u, gl_wu, gl_r, gl_wr;
    legendre_rule(quad.n_polar, gl_u, gl_wu);
    legendre_rule(quad.radial_per_shell, gl_r, gl_wr);

    Vec3 c = mesh.centroid();
    double ratio = std::pow(quad.r_trunc / quad.r_inner, 1.0 / quad.n_shells);

    FourierField direct_vol(N), parts_vol(N);
    std::vector<double> shell_mag(static_cast<std::size_t>(quad.n_shells), 0.0);

    for (int m = 0; m < quad.n_shells; ++m) {
        double r0 = quad.r_inner * std::pow(ratio, m);
        double r1 = r0 * ratio;
        FourierField shell_direct(N), shell_parts(N);
        for (int ir = 0; ir < quad.radial_per_shell; ++ir) {
            double r = 0.5 * (r0 + r1) + 0.5 * (r1 - r0) * gl_r[static_cast<std::size_t>(ir)];
            double wr = 0.5 * (r1 - r0) * gl_wr[static_cast<std::size_t>(ir)] * r * r;
            for (int iu = 0; iu < quad.n_polar; ++iu) {
                double u = gl_u[static_cast<std::size_t>(iu)];
                double su = std::sqrt(std::max(0.0, 1.0 - u * u));
                double wu = gl_wu[static_cast<std::size_t>(iu)];
                for (int ip = 0; ip < quad.n_azimuth; ++ip) {
                    double phi = 2.0 * pi * (ip + 0.5) / quad.n_azimuth;
                    Vec3 y = c + r * Vec3{su * std::cos(phi), su * std::sin(phi), u};
                    double w = wr * wu * (2.0 * pi / quad.n_azimuth);

                    FourierField v = vfield.v(y);
                    FourierTensor g = vfield.grad(y);
                    if (v.n_modes() != N || g.n_modes() != N)
                        throw std::invalid_argument(
                            "represent_velocity_nonlinear: field mode count mismatch");
                    FourierField adv = fourier_pointwise_advect(v, g);
                    FourierTensor vv = fourier_pointwise_outer(v, v);

                    Vec3 z = x - y;
                    shell_direct.coeff(0) -= w * matvec(steady_velocity(z, p), adv.coeff(0));
                    shell_parts.coeff(0) -=
                        w * couple_contract(to_ctensor(steady_velocity_grad(z, p)), vv.coeff(0));
                    for (int k = 1; k <= N; ++k) {
                        CMat3 G = cache.mode(k).eval(z);
                        CTen3 t =
                            fd_gradient([&](const Vec3& q) { return cache.mode(k).eval(q); }, z);
                        shell_direct.coeff(k) -= w * matvec(G, adv.coeff(k));
                        shell_direct.coeff(-k) -= w * matvec(conj(G), adv.coeff(-k));
                        shell_parts.coeff(k) -= w * couple_contract(t, vv.coeff(k));
                        shell_parts.coeff(-k) -= w * couple_contract(conj(t), vv.coeff(-k));
                    }
                }
            }
        }
        double mag = 0;
        for (int k = -N; k <= N; ++k) mag += std::norm(shell_direct.coeff(k)[0]) +
                                             std::norm(shell_direct.coeff(k)[1]) +
                                             std::norm(shell_direct.coeff(k)[2]);
        shell_mag[static_cast<std::size_t>(m)] = std::sqrt(mag);
        direct_vol += shell_direct;
        parts_vol += shell_parts;
    }

    // Geometric extrapolation of the truncated tail from the outermost shells.
    double tail = 0;
    if (quad.n_shells >= 2) {
        double a = shell_mag[static_cast<std::size_t>(quad.n_shells - 1)];
        double b = shell_mag[static_cast<std::size_t>(quad.n_shells - 2)];
        if (a > 0 && b > 0) {
            double rho = std::min(a / b, 0.95);
            tail = a * rho / (1.0 - rho);
        }
    }

    NonlinearRepresentation rep;
    rep.direct = boundary + direct_vol;
    rep.by_parts = boundary - parts_surface + parts_vol;
    rep.tail_estimate = tail;
    return rep;
}

}  // namespace oseentp
