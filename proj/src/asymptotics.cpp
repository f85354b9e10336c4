#include "oseentp/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "oseentp/kernels.hpp"
#include "oseentp/mode_kernel.hpp"
#include "oseentp/parallel.hpp"

namespace oseentp {

namespace {

int uniform_modes(const std::vector<FourierField>& fields, std::size_t want, const char* who) {
    if (fields.size() != want)
        throw std::invalid_argument(std::string(who) + ": density size does not match the mesh");
    if (fields.empty()) throw std::invalid_argument(std::string(who) + ": empty mesh");
    int n = fields.front().n_modes();
    for (const auto& f : fields)
        if (f.n_modes() != n)
            throw std::invalid_argument(std::string(who) + ": inconsistent mode counts");
    return n;
}

}  // namespace

FourierScalar flux_Phi(const SurfaceMesh& mesh, const std::vector<FourierField>& v_b) {
    int N = uniform_modes(v_b, mesh.nodes.size(), "flux_Phi");
    FourierScalar out(N);
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
        Vec3 n = -1.0 * mesh.nodes[i].normal;  // fluid-side normal
        for (int k = -N; k <= N; ++k)
            out.coeff(k) += mesh.nodes[i].w * dot(n, v_b[i].coeff(k));
    }
    return out;
}

FourierField moment_Psi(const SurfaceMesh& mesh, const std::vector<FourierField>& v_b) {
    int N = uniform_modes(v_b, mesh.nodes.size(), "moment_Psi");
    FourierField out(N);
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
        Vec3 n = -1.0 * mesh.nodes[i].normal;
        for (int k = -N; k <= N; ++k)
            out.coeff(k) += (mesh.nodes[i].w * dot(n, v_b[i].coeff(k))) * CVec3(mesh.nodes[i].y);
    }
    return out;
}

FourierField moment_Lambda(const VolumeForcing& forcing, int n_modes) {
    FourierField out(n_modes);
    if (forcing.empty()) return out;
    forcing.validate();
    if (forcing.f.front().n_modes() != n_modes)
        throw std::invalid_argument("moment_Lambda: forcing mode count mismatch");
    for (std::size_t q = 0; q < forcing.nodes.size(); ++q)
        for (int k = -n_modes; k <= n_modes; ++k)
            out.coeff(k) += forcing.weights[q] * forcing.f[q].coeff(k);
    return out;
}

FourierTensor moment_Xi(const VolumeForcing& forcing, int n_modes) {
    FourierTensor out(n_modes);
    if (forcing.empty()) return out;
    forcing.validate();
    if (forcing.f.front().n_modes() != n_modes)
        throw std::invalid_argument("moment_Xi: forcing mode count mismatch");
    for (std::size_t q = 0; q < forcing.nodes.size(); ++q) {
        CVec3 y{forcing.nodes[q]};
        for (int k = -n_modes; k <= n_modes; ++k)
            out.coeff(k) += forcing.weights[q] * outer(y, forcing.f[q].coeff(k));
    }
    return out;
}

FourierField coeff_F(const SurfaceMesh& mesh, const BoundaryData& bdata,
                     const VolumeForcing& forcing, ForceVariant variant, const Vec3& zeta) {
    bdata.validate(mesh);
    if (bdata.traction.size() != mesh.nodes.size())
        throw std::invalid_argument("coeff_F: traction data missing");
    const int N = bdata.n_modes;

    FourierField out = moment_Lambda(forcing, N);
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
        Vec3 n = -1.0 * mesh.nodes[i].normal;
        double w = mesh.nodes[i].w;
        double zn = dot(zeta, n);
        for (int k = -N; k <= N; ++k)
            out.coeff(k) += w * (bdata.traction[i].coeff(k) + zn * bdata.velocity[i].coeff(k));
        if (variant == ForceVariant::full) {
            FourierScalar vn(N);
            for (int k = -N; k <= N; ++k) vn.coeff(k) = dot(n, bdata.velocity[i].coeff(k));
            FourierField quad = fourier_pointwise(vn, bdata.velocity[i]);
            for (int k = -N; k <= N; ++k) out.coeff(k) -= w * quad.coeff(k);
        }
    }
    return out;
}

ExpansionCoefficients expansion_coefficients(const SurfaceMesh& mesh, const BoundaryData& bdata,
                                             const VolumeForcing& forcing, const Vec3& zeta) {
    ExpansionCoefficients c;
    c.Phi = flux_Phi(mesh, bdata.velocity);
    c.Psi = moment_Psi(mesh, bdata.velocity);
    c.F_lin = coeff_F(mesh, bdata, forcing, ForceVariant::lin, zeta);
    c.F_full = coeff_F(mesh, bdata, forcing, ForceVariant::full, zeta);
    c.Lambda = moment_Lambda(forcing, bdata.n_modes);
    c.Xi = moment_Xi(forcing, bdata.n_modes);
    return c;
}

ExpansionCoefficients exact_expansion_coefficients(const Scenario& scn) {
    scn.validate();
    const int N = scn.params.n_modes;
    const Vec3 ctr = scn.body_center;
    ExpansionCoefficients c;
    c.Phi = FourierScalar(N);
    c.Psi = FourierField(N);
    c.F_lin = FourierField(N);
    c.Lambda = FourierField(N);
    c.Xi = FourierTensor(N);
    for (const Singularity& s : scn.singularities) {
        switch (s.kind) {
            case SingularityKind::steady_oseenlet:
                c.F_lin.coeff(0) += CVec3(s.strength);
                break;
            case SingularityKind::periodic_oseenlet:
                c.F_lin.coeff(s.mode) += s.amplitude;
                c.F_lin.coeff(-s.mode) += conj(s.amplitude);
                break;
            case SingularityKind::pulsating_source:
                // Ball moment of the monopole: int_B P(y - y0) dy =
                // -(y0 - ctr)/3, entering Psi directly and F through the
                // time-derivative term of the momentum balance.
                for (int k = -s.flux.n_modes(); k <= s.flux.n_modes(); ++k) {
                    const cplx q = s.flux.coeff(k);
                    c.Phi.coeff(k) -= q;
                    c.Psi.coeff(k) -= q * CVec3((1.0 / 3.0) * (2.0 * s.location + ctr));
                    c.F_lin.coeff(k) += cplx{0.0, scn.params.lambda(k) / 3.0} * q *
                                        CVec3(s.location - ctr);
                }
                break;
        }
    }
    c.F_full = c.F_lin;
    return c;
}

CVec3 leading_velocity_mode(const ExpansionCoefficients& c, int k, const Vec3& x,
                            const ModeKernelCache& cache, FluxSign sign, ForceVariant variant,
                            ExpansionPart part) {
    const KernelParams& p = cache.params();
    const FourierField& F = variant == ForceVariant::lin ? c.F_lin : c.F_full;
    if (part == ExpansionPart::steady && k != 0) return CVec3{};
    if (part == ExpansionPart::periodic && k == 0) return CVec3{};

    const double sgn = sign == FluxSign::minus ? -1.0 : 1.0;
    CVec3 out;
    if (k == 0) {
        out = matvec(steady_velocity(x, p), F.coeff(0));
        out += sgn * c.Phi.coeff(0) * CVec3(pressure_P(x));
        // The steady split absorbs its flux dipole into the remainder.
        if (part == ExpansionPart::full)
            out -= cplx(sgn) * vecmat(c.Psi.coeff(0), grad_P(x));
    } else {
        out = matvec(mode_velocity(cache, x, k), F.coeff(k));
        out += sgn * c.Phi.coeff(k) * CVec3(pressure_P(x));
        out -= cplx(sgn) * vecmat(c.Psi.coeff(k), grad_P(x));
    }
    return out;
}

Vec3 leading_velocity(const ExpansionCoefficients& c, double t, const Vec3& x,
                      const ModeKernelCache& cache, FluxSign sign, ForceVariant variant,
                      ExpansionPart part) {
    const int N = c.Phi.n_modes();
    FourierField modes(N);
    for (int k = -N; k <= N; ++k)
        modes.coeff(k) = leading_velocity_mode(c, k, x, cache, sign, variant, part);
    return real(modes.eval(t, cache.params().period));
}

cplx leading_pressure_mode(const ExpansionCoefficients& c, int k, const Vec3& x,
                           const KernelParams& params, FluxSign sign, ForceVariant variant) {
    const FourierField& F = variant == ForceVariant::lin ? c.F_lin : c.F_full;
    const double sgn = sign == FluxSign::minus ? -1.0 : 1.0;
    const cplx il{0.0, params.lambda(k)};
    CVec3 w = F.coeff(k) + (sgn * c.Phi.coeff(k)) * CVec3(params.zeta) +
              cplx(sgn) * (il * c.Psi.coeff(k));
    return sgn * il * c.Phi.coeff(k) * laplace_E(x) + dot(w, pressure_P(x));
}

double leading_pressure(const ExpansionCoefficients& c, double t, const Vec3& x,
                        const KernelParams& params, FluxSign sign, ForceVariant variant) {
    const int N = c.Phi.n_modes();
    FourierScalar modes(N);
    for (int k = -N; k <= N; ++k)
        modes.coeff(k) = leading_pressure_mode(c, k, x, params, sign, variant);
    return modes.eval(t, params.period).real();
}

namespace {

template <class T>
RemainderTable remainder_table(const std::function<Fourier<T>(const Vec3&)>& difference,
                               const Ray& ray, double period, TimeNorm tn) {
    ray.validate();
    const std::size_t n = ray.radii.size();
    RemainderTable tab;
    tab.radii = ray.radii;
    tab.steady.assign(n, 0.0);
    tab.periodic.assign(n, 0.0);
    parallel_for(n, [&](std::size_t i) {
        Fourier<T> d = difference(ray.radii[i] * ray.dir);
        tab.steady[i] = norm_of(d.coeff(0));
        if (tn == TimeNorm::l2) {
            double s = 0;
            for (int k = 1; k <= d.n_modes(); ++k) {
                double a = norm_of(d.coeff(k)), b = norm_of(d.coeff(-k));
                s += a * a + b * b;
            }
            tab.periodic[i] = std::sqrt(s);
        } else {
            Fourier<T> pp = d.periodic_part();
            double worst = 0;
            for (double t : time_grid(d.n_modes(), period))
                worst = std::max(worst, norm_of(pp.eval(t, period)));
            tab.periodic[i] = worst;
        }
    });
    return tab;
}

}  // namespace

RemainderTable remainder_samples(const std::function<FourierField(const Vec3&)>& difference,
                                 const Ray& ray, double period, TimeNorm tn) {
    return remainder_table<CVec3>(difference, ray, period, tn);
}

RemainderTable remainder_samples(const std::function<FourierScalar(const Vec3&)>& difference,
                                 const Ray& ray, double period, TimeNorm tn) {
    return remainder_table<cplx>(difference, ray, period, tn);
}

DecayFit fit_decay(std::vector<double> radii, std::vector<double> values, std::string label,
                   const Vec3& ray) {
    if (radii.size() != values.size())
        throw std::invalid_argument("fit_decay: radii/values size mismatch");
    for (std::size_t i = 0; i + 1 < radii.size(); ++i)
        if (!(radii[i] > 0 && radii[i] < radii[i + 1]))
            throw std::invalid_argument("fit_decay: radii must be positive and increasing");
    if (radii.size() < 3) throw std::invalid_argument("fit_decay: too few samples");

    DecayFit fit;
    fit.label = std::move(label);
    fit.ray = ray;
    // The two smallest radii sit in the pre-asymptotic regime.
    for (std::size_t i = 2; i < radii.size(); ++i) {
        if (!(values[i] > 0)) {
            ++fit.n_dropped;
            continue;
        }
        fit.radii.push_back(radii[i]);
        fit.values.push_back(values[i]);
    }
    if (fit.n_dropped > 0)
        std::fprintf(stderr, "fit_decay(%s): dropped %d nonpositive samples\n", fit.label.c_str(),
                     fit.n_dropped);
    if (fit.radii.size() < 5)
        throw std::invalid_argument("fit_decay: fewer than 5 usable samples");
    const double min_ratio = std::sqrt(2.0) * (1.0 - 1e-9);
    for (std::size_t i = 0; i + 1 < fit.radii.size(); ++i)
        if (fit.radii[i + 1] / fit.radii[i] < min_ratio)
            throw std::invalid_argument("fit_decay: radii ratio below sqrt(2)");

    const std::size_t m = fit.radii.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < m; ++i) {
        double lx = std::log(fit.radii[i]), ly = std::log(fit.values[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    double denom = m * sxx - sx * sx;
    fit.exponent = (m * sxy - sx * sy) / denom;
    fit.amplitude = (sy - fit.exponent * sx) / m;
    double rss = 0;
    for (std::size_t i = 0; i < m; ++i) {
        double r = std::log(fit.values[i]) - (fit.amplitude + fit.exponent * std::log(fit.radii[i]));
        rss += r * r;
    }
    fit.residual = std::sqrt(rss / m);
    return fit;
}

AnisotropicDecayFit fit_decay_anisotropic(const std::vector<Vec3>& points,
                                          const std::vector<double>& values, const Vec3& zeta) {
    if (points.size() != values.size())
        throw std::invalid_argument("fit_decay_anisotropic: size mismatch");
    if (!(norm(zeta) > 0)) throw std::invalid_argument("fit_decay_anisotropic: zeta must be nonzero");

    std::vector<double> lr, ls, ly;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!(values[i] > 0)) continue;
        lr.push_back(std::log(norm(points[i])));
        ls.push_back(std::log1p(wake_weight(zeta, points[i])));
        ly.push_back(std::log(values[i]));
    }
    const std::size_t m = lr.size();
    if (m < 5) throw std::invalid_argument("fit_decay_anisotropic: fewer than 5 usable samples");

    double mr = 0, ms = 0, my = 0;
    for (std::size_t i = 0; i < m; ++i) {
        mr += lr[i];
        ms += ls[i];
        my += ly[i];
    }
    mr /= m;
    ms /= m;
    my /= m;
    double srr = 0, sss = 0, srs = 0, sry = 0, ssy = 0;
    for (std::size_t i = 0; i < m; ++i) {
        double a = lr[i] - mr, b = ls[i] - ms, y = ly[i] - my;
        srr += a * a;
        sss += b * b;
        srs += a * b;
        sry += a * y;
        ssy += b * y;
    }
    // On a single off-axis ray s is proportional to r, so log(1+s) is affine
    // in log r up to O(1/s) and the Gram determinant collapses; mixed-angle
    // rays are required.  Reject when the regressors are > 99.5% correlated.
    double det = srr * sss - srs * srs;
    if (!(det > 1e-2 * srr * sss))
        throw std::invalid_argument(
            "fit_decay_anisotropic: points do not separate radius and wake regressors");

    AnisotropicDecayFit fit;
    fit.exp_radial = (sss * sry - srs * ssy) / det;
    fit.exp_wake = (srr * ssy - srs * sry) / det;
    double rss = 0;
    for (std::size_t i = 0; i < m; ++i) {
        double r = (ly[i] - my) - fit.exp_radial * (lr[i] - mr) - fit.exp_wake * (ls[i] - ms);
        rss += r * r;
    }
    fit.residual = std::sqrt(rss / m);
    return fit;
}

}  // namespace oseentp
