// Acceptance gate: each criterion prints exactly one PASS/FAIL line with the
// measured numbers and the pinned tolerance. Run with a criterion id
// (1, 2a, 2b, 3, 4, 5, 6, 7, 8) or with no argument for the full gate.
// The process exits nonzero if any executed criterion fails.

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "oseentp/asymptotics.hpp"
#include "oseentp/fourier.hpp"
#include "oseentp/kernels.hpp"
#include "oseentp/mode_kernel.hpp"
#include "oseentp/oracle.hpp"
#include "oseentp/params.hpp"
#include "oseentp/potentials.hpp"
#include "oseentp/ray.hpp"
#include "oseentp/scenario.hpp"

using namespace oseentp;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list args;
    va_start(args, f);
    std::vsnprintf(buf, sizeof(buf), f, args);
    va_end(args);
    return buf;
}

KernelParams base_params(int n_modes) {
    KernelParams p;
    p.zeta = Vec3{0.5, 0.0, 0.0};
    p.nu = 1.0;
    p.period = 1.0;
    p.n_modes = n_modes;
    return p;
}

std::vector<Vec3> seeded_shell(std::uint64_t seed, int count, double r_min, double r_max) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<Vec3> pts;
    while (static_cast<int>(pts.size()) < count) {
        Vec3 d{gauss(gen), gauss(gen), gauss(gen)};
        if (norm(d) < 1e-6) continue;
        pts.push_back(r_min * std::pow(r_max / r_min, uni(gen)) * normalized(d));
    }
    return pts;
}

double field_norm(const FourierField& f) {
    double s = 0;
    for (int k = -f.n_modes(); k <= f.n_modes(); ++k) {
        double n = norm_of(f.coeff(k));
        s += n * n;
    }
    return std::sqrt(s);
}

double scalar_norm(const FourierScalar& f) {
    double s = 0;
    for (int k = -f.n_modes(); k <= f.n_modes(); ++k) s += std::norm(f.coeff(k));
    return std::sqrt(s);
}

// -------------------------------------------------------------- criterion 1

Outcome crit_1() {
    KernelParams p = base_params(2);
    ModeKernelCache cache(p);
    const double tol = 1e-4;

    double worst_rel = 0, worst_div = 0;
    for (const Vec3& x : seeded_shell(2024, 20, 1.0, 8.0)) {
        for (int k : {0, 1, -1, 2, -2}) {
            for (int j = 0; j < 3; ++j) {
                Vec3 ej{};
                ej[j] = 1.0;
                auto v = [&](const Vec3& y) {
                    return k == 0 ? CVec3(matvec(steady_velocity(y, p), ej))
                                  : matvec(mode_velocity(cache, y, k), ej);
                };
                auto pr = [&](const Vec3& y) { return cplx(pressure_P(y)[j]); };
                ResidualReport rep = pde_residual(v, pr, k, x, p, norm(x));
                worst_rel = std::max(worst_rel, rep.relative);
                worst_div = std::max(worst_div, rep.divergence);
            }
        }
    }

    // Zero-frequency scalar kernel equals the exponentially weighted monopole.
    double worst_k0 = 0;
    for (const Vec3& x : seeded_shell(9, 10, 0.5, 6.0)) {
        cplx k0 = drift_helmholtz_K(x, p, 0.0);
        double ref = std::exp(-wake_weight(p.zeta, x) / p.nu) / (4.0 * pi * p.nu * norm(x));
        worst_k0 = std::max(worst_k0, std::abs(k0 - ref) / ref);
    }

    // Vanishing drift recovers the Stokes kernel.
    KernelParams ps = p;
    ps.zeta = Vec3{1e-6, 0.0, 0.0};
    double worst_stokes = 0;
    for (const Vec3& x : seeded_shell(31, 10, 1.0, 8.0)) {
        Mat3 a = steady_velocity(x, ps);
        Mat3 b = stokeslet(x, p.nu);
        double num = 0, den = 0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                num += (a(i, j) - b(i, j)) * (a(i, j) - b(i, j));
                den += b(i, j) * b(i, j);
            }
        worst_stokes = std::max(worst_stokes, std::sqrt(num / den));
    }

    bool pass = worst_rel < tol && worst_div < tol && worst_k0 < 1e-12 && worst_stokes < 1e-5;
    return {pass, fmt("kernel residuals: max rel %.2e, max div %.2e (pin %.0e); "
                      "weighted-monopole identity %.2e (pin 1e-12); "
                      "Stokes limit at |drift|=1e-6: %.2e (pin 1e-5)",
                      worst_rel, worst_div, tol, worst_k0, worst_stokes)};
}

// ------------------------------------------------------------- criterion 2a

Outcome crit_2a() {
    const double tol = 0.05;
    FFTGridSpec grid;
    grid.L = 16.0;
    grid.n = 64;
    grid.k = 1;
    grid.params = base_params(1);
    ModeKernelCache cache(grid.params);
    FFTModeOracle oracle(grid);
    std::vector<Vec3> nodes = oracle.nodes_in_shell(1.0, 4.0, 200);
    std::vector<CMat3> got, ref;
    for (const Vec3& x : nodes) {
        got.push_back(mode_velocity(cache, x, grid.k));
        ref.push_back(oracle.at_nearest(x));
    }
    double err = mean_subtracted_rel_error(got, ref);
    return {err < tol,
            fmt("mode kernel vs discrete-symbol oracle (box 32, grid 64): mean-subtracted "
                "rel err %.3f (pin %.2f); the oracle is periodization-limited at this box "
                "size, see README",
                err, tol)};
}

// ------------------------------------------------------------- criterion 2b

Outcome crit_2b() {
    const double tol = 1e-4;
    KernelParams p0 = base_params(2);
    p0.zeta = Vec3{};
    ModeKernelCache cache0(p0);
    double worst = 0;
    for (const Vec3& x : seeded_shell(77, 10, 1.0, 4.0)) {
        for (int k : {1, 2}) {
            CMat3 a = mode_velocity(cache0, x, k);
            CMat3 b = mode_velocity_zeta0_closed_form(p0, k, x);
            worst = std::max(worst, norm_of(a - b) / norm_of(b));
        }
    }
    return {worst < tol,
            fmt("zero-drift mode kernel vs closed form: max rel %.2e (pin %.0e)", worst, tol)};
}

// -------------------------------------------------------------- criterion 3

Outcome crit_3() {
    KernelParams p = base_params(2);
    ModeKernelCache cache(p);
    std::vector<double> radii = geometric_radii(4.0, 64.0, std::sqrt(2.0));
    Vec3 zh = normalized(p.zeta);
    Vec3 tr = orthogonal_unit(zh);
    const double s = 1.0 / std::sqrt(2.0);
    std::vector<Ray> rays = {{-1.0 * zh, radii, "wake"},
                             {zh, radii, "upstream"},
                             {tr, radii, "transverse"},
                             {s * (zh + tr), radii, "diagonal"}};

    double worst_gap = 0;
    std::string worst_ray;
    for (const Ray& ray : rays) {
        std::vector<double> vals;
        for (double r : radii) vals.push_back(periodic_l2_norm(cache, r * ray.dir));
        DecayFit fit = fit_decay(radii, vals, "periodic/" + ray.label, ray.dir);
        double gap = std::abs(fit.exponent + 3.0);
        if (gap > worst_gap) {
            worst_gap = gap;
            worst_ray = ray.label + fmt(" %.3f", fit.exponent);
        }
    }

    auto steady_vals = [&](const Vec3& d) {
        std::vector<double> vals;
        for (double r : radii) {
            Mat3 g = steady_velocity(r * d, p);
            double f = 0;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) f += g(i, j) * g(i, j);
            vals.push_back(std::sqrt(f));
        }
        return vals;
    };
    double e_wake = fit_decay(radii, steady_vals(-1.0 * zh), "steady/wake").exponent;
    double e_tr = fit_decay(radii, steady_vals(tr), "steady/transverse").exponent;

    bool pass = worst_gap < 0.15 && std::abs(e_wake + 1.0) < 0.1 && std::abs(e_tr + 2.0) < 0.15;
    return {pass, fmt("oscillating kernel time-norm exponent: worst ray %s (pin -3 +/- 0.15); "
                      "steady kernel wake %.3f (pin -1 +/- 0.1), transverse %.3f "
                      "(pin -2 +/- 0.15)",
                      worst_ray.c_str(), e_wake, e_tr)};
}

// -------------------------------------------------------------- criterion 4

Outcome crit_4() {
    KernelParams p = base_params(1);
    FourierScalar q(1);
    q.coeff(0) = 0.5;
    q.coeff(1) = cplx(0.25, -0.1);
    q.coeff(-1) = std::conj(q.coeff(1));
    struct Manufactured {
        const char* name;
        Singularity sing;
    };
    const Manufactured cases[] = {
        {"steady_oseenlet", steady_oseenlet({0.15, -0.1, 0.05}, {0.4, -0.3, 0.7})},
        {"periodic_oseenlet",
         periodic_oseenlet({0.1, 0.05, -0.1}, 1,
                           CVec3{cplx(0.3, 0.1), cplx(0.5, -0.2), cplx(-0.2, 0.05)})},
        {"pulsating_source", pulsating_source({0.2, 0.0, 0.1}, q)},
    };

    Vec3 zh = normalized(p.zeta);
    Vec3 tr = orthogonal_unit(zh);
    std::vector<Vec3> pts;
    for (double r : {6.0, 9.0, 13.0, 20.0}) {
        pts.push_back(-r * zh);
        pts.push_back(r * tr);
    }

    bool pass = true;
    std::string detail;
    for (const Manufactured& mc : cases) {
        double err[3] = {0, 0, 0};  // levels 2, 3, 4
        for (int level : {2, 3, 4}) {
            Scenario scn = make_scenario(p, {mc.sing}, {}, 1.0, level);
            BoundaryData bd = boundary_data(scn);
            double worst = 0;
            for (const Vec3& x : pts) {
                FourierField va = eval_velocity_modes(scn, x);
                FourierField vr = represent_velocity_linear(scn.mesh, bd, {}, x, *scn.cache);
                FourierScalar pa = eval_pressure_modes(scn, x);
                FourierScalar pr = represent_pressure_linear(scn.mesh, bd, {}, x, *scn.cache);
                worst = std::max(worst, field_norm(va - vr) / field_norm(va));
                worst = std::max(worst, scalar_norm(pa - pr) / scalar_norm(pa));
            }
            err[level - 2] = worst;
        }
        bool ok = err[2] < 1e-3 && err[0] / err[1] >= 3.0 && err[1] / err[2] >= 3.0;
        pass = pass && ok;
        detail += fmt("%s%s: levels 2/3/4 rel err %.1e/%.1e/%.1e", detail.empty() ? "" : "; ",
                      mc.name, err[0], err[1], err[2]);
    }
    detail += " (pin: level 4 < 1e-3, shrink >= 3x per level)";
    return {pass, detail};
}

// -------------------------------------------------------------- criterion 5

Outcome crit_5() {
    KernelParams p = base_params(2);
    auto pair = make_flux_pair(p, 3);
    Ray ray{orthogonal_unit(normalized(p.zeta)), geometric_radii(8.0, 64.0, std::sqrt(2.0)),
            "transverse"};

    auto periodic_exponent = [&](const Scenario& scn, bool pressure) {
        if (pressure) {
            std::function<FourierScalar(const Vec3&)> f = [&](const Vec3& x) {
                return eval_pressure_modes(scn, x);
            };
            RemainderTable t = remainder_samples(f, ray, p.period);
            return fit_decay(t.radii, t.periodic, "p_perp").exponent;
        }
        std::function<FourierField(const Vec3&)> f = [&](const Vec3& x) {
            return eval_velocity_modes(scn, x);
        };
        RemainderTable t = remainder_samples(f, ray, p.period);
        return fit_decay(t.radii, t.periodic, "v_perp").exponent;
    };

    double ov = periodic_exponent(pair.first, false), op = periodic_exponent(pair.first, true);
    double cv = periodic_exponent(pair.second, false), cp = periodic_exponent(pair.second, true);
    bool pass = std::abs(ov + 2.0) < 0.15 && std::abs(op + 1.0) < 0.15 &&
                std::abs(cv + 3.0) < 0.2 && std::abs(cp + 2.0) < 0.2;
    return {pass, fmt("oscillating net flux: velocity %.3f (pin -2 +/- 0.15), pressure %.3f "
                      "(pin -1 +/- 0.15); constant net flux: velocity %.3f (pin -3 +/- 0.2), "
                      "pressure %.3f (pin -2 +/- 0.2)",
                      ov, op, cv, cp)};
}

// -------------------------------------------------------------- criterion 6

Outcome crit_6() {
    KernelParams p = base_params(2);
    Scenario scn = make_flux_pair(p, 3).first;
    ExpansionCoefficients coeffs = exact_expansion_coefficients(scn);
    const int n = p.n_modes;
    Vec3 zh = normalized(p.zeta);
    Vec3 tr = orthogonal_unit(zh);
    Ray ray{(1.0 / std::sqrt(2.0)) * (zh + tr), geometric_radii(8.0, 64.0, std::sqrt(2.0)),
            "diagonal"};

    auto table_for = [&](const ExpansionCoefficients& c) {
        std::function<FourierField(const Vec3&)> diff = [&](const Vec3& x) {
            FourierField d = eval_velocity_modes(scn, x);
            for (int k = -n; k <= n; ++k)
                d.coeff(k) -= leading_velocity_mode(c, k, x, *scn.cache, FluxSign::minus);
            return d;
        };
        return remainder_samples(diff, ray, p.period);
    };

    RemainderTable full = table_for(coeffs);
    double e_per = fit_decay(full.radii, full.periodic, "remainder").exponent;

    double lo = 1e300, hi = 0;
    for (std::size_t i = 0; i < full.radii.size(); ++i) {
        double r = full.radii[i];
        double s = wake_weight(p.zeta, r * ray.dir);
        double scaled = full.steady[i] * std::pow(r * (1.0 + s), 1.5);
        lo = std::min(lo, scaled);
        hi = std::max(hi, scaled);
    }

    ExpansionCoefficients ablated = coeffs;
    ablated.Psi = FourierField(n);
    RemainderTable abl = table_for(ablated);
    double e_abl = fit_decay(abl.radii, abl.periodic, "ablated").exponent;

    bool pass = e_per <= -3.7 && hi / lo < 2.0 && std::abs(e_abl + 3.0) < 0.3;
    return {pass, fmt("purely periodic remainder exponent %.3f (pin <= -3.7); steady remainder "
                      "x [r(1+s)]^{3/2} spread %.2fx (pin < 2x); flux-dipole ablation degrades "
                      "the exponent to %.3f (pin -3 +/- 0.3)",
                      e_per, hi / lo, e_abl)};
}

// -------------------------------------------------------------- criterion 7

Outcome crit_7() {
    KernelParams p = base_params(1);
    ModeKernelCache cache(p);
    struct Case {
        ConvKernel kernel;
        double A, B;
        const char* name;
    };
    const Case cases[] = {
        {ConvKernel::steady_velocity, 3.0, 1.0, "velocity"},
        {ConvKernel::steady_gradient, 3.0, 1.0, "gradient"},
        {ConvKernel::steady_gradient_log, 2.0, 1.5, "gradient-log"},
        {ConvKernel::steady_gradient_weak, 2.0, 0.5, "gradient-weak"},
        {ConvKernel::pressure_dipole_far, 2.0, 2.0, "pressure"},
        {ConvKernel::periodic_velocity, 4.0, 0.0, "periodic-velocity"},
        {ConvKernel::periodic_gradient, 4.0, 0.0, "periodic-gradient"},
    };
    bool pass = true;
    double worst_growth = 0;
    std::string worst_name = "none";
    double log_plain = 0, log_with = 0;
    for (const Case& c : cases) {
        ConvBoundSpec spec;
        spec.kernel = c.kernel;
        spec.A = c.A;
        spec.B = c.B;
        std::vector<double> log_radii = geometric_radii(2.0, 32.0, 2.0);
        if (c.kernel == ConvKernel::steady_gradient_log)
            spec.sample_rays = default_ray_set(p.zeta, log_radii);
        ConvBoundReport rep = verify_conv_bounds(spec, p, &cache);
        double growth = rep.sup_ratio_double / rep.sup_ratio_base;
        if (growth > worst_growth) {
            worst_growth = growth;
            worst_name = c.name;
        }
        pass = pass && growth < 1.5;
        if (c.kernel == ConvKernel::steady_gradient_log) {
            const std::size_t nr = log_radii.size();
            for (std::size_t ray = 0; ray < spec.sample_rays.size(); ++ray) {
                const ConvBoundSample& lo = rep.samples[ray * nr];
                const ConvBoundSample& hi = rep.samples[ray * nr + nr - 1];
                double lg = (hi.value_double / hi.bound) / (lo.value_double / lo.bound);
                log_plain = std::max(log_plain, lg * log_plus(hi.r) / log_plus(lo.r));
                log_with = std::max(log_with, lg);
            }
            pass = pass && log_plain > 2.0 && log_with < 1.2;
        }
    }
    return {pass, fmt("all 7 bound cases: worst doubling growth %.4f on %s (pin < 1.5); "
                      "boundary case without log factor grows %.2fx, with log %.2fx "
                      "(pins > 2.0 and < 1.2)",
                      worst_growth, worst_name.c_str(), log_plain, log_with)};
}

// -------------------------------------------------------------- criterion 8

Outcome crit_8() {
    // No flow solver is in scope, so solver-level decay claims cannot be
    // reproduced; the nonlinear machinery is exercised structurally: both
    // volume routes of the quadratic-term representation are evaluated on a
    // supplied field and their gap must equal the dropped outer-sphere flux
    // term up to facet error.
    KernelParams p;
    p.zeta = Vec3{0.4, 0.0, 0.0};
    p.nu = 1.0;
    p.period = 1.0;
    p.n_modes = 1;
    Vec3 y0{0.2, 0.0, 0.0};
    FourierScalar q(1);
    q.coeff(0) = 0.5;
    q.coeff(1) = 0.25;
    q.coeff(-1) = 0.25;
    Scenario scn = make_scenario(p, {pulsating_source(y0, q)}, {}, 1.0, 3);
    BoundaryData bd = boundary_data(scn);

    VolumeField vf;
    vf.v = [&](const Vec3& y) {
        FourierField f(1);
        for (int k = -1; k <= 1; ++k) f.coeff(k) = q.coeff(k) * CVec3(pressure_P(y - y0));
        return f;
    };
    vf.grad = [&](const Vec3& y) {
        FourierTensor g(1);
        for (int k = -1; k <= 1; ++k) g.coeff(k) = q.coeff(k) * CMat3(grad_P(y - y0));
        return g;
    };

    const Vec3 at{6.0, 0.0, 0.0};
    const double R = 2.0;
    VolumeQuadratureSpec quad;
    quad.r_inner = 1.0;
    quad.r_trunc = R;
    quad.radial_per_shell = 3;
    quad.n_shells = 8;
    quad.n_polar = 16;
    quad.n_azimuth = 24;
    NonlinearRepresentation rep = represent_velocity_nonlinear(scn.mesh, bd, {}, vf, at,
                                                               *scn.cache, quad);

    // Outer-sphere flux term on an independent angular grid.
    FourierField outer(1);
    const int n_polar = 24, n_az = 48;
    for (int iu = 0; iu < n_polar; ++iu) {
        double u = -1.0 + 2.0 * (iu + 0.5) / n_polar;
        double su = std::sqrt(std::max(0.0, 1.0 - u * u));
        for (int ip = 0; ip < n_az; ++ip) {
            double phi = 2.0 * pi * (ip + 0.5) / n_az;
            Vec3 m{su * std::cos(phi), su * std::sin(phi), u};
            Vec3 y = R * m;
            double w = R * R * (2.0 / n_polar) * (2.0 * pi / n_az);
            FourierField v = vf.v(y);
            FourierScalar vm(1);
            for (int k = -1; k <= 1; ++k) vm.coeff(k) = dot(m, v.coeff(k));
            FourierField density = fourier_pointwise(vm, v);
            Vec3 z = at - y;
            outer.coeff(0) += w * matvec(steady_velocity(z, p), density.coeff(0));
            CMat3 G = mode_velocity(*scn.cache, z, 1);
            outer.coeff(1) += w * matvec(G, density.coeff(1));
            outer.coeff(-1) += w * matvec(conj(G), density.coeff(-1));
        }
    }

    FourierField gap = rep.direct - rep.by_parts;
    FourierField want = cplx(-1.0) * outer;
    double rel = field_norm(gap - want) / field_norm(want);
    bool pass = rel < 0.15 && rep.tail_estimate > 0;
    return {pass, fmt("solver-level nonlinear decay claims are out of scope (no flow solver); "
                      "structural exercise: quadratic-term volume routes differ by the dropped "
                      "outer-sphere term within %.1f%% (pin 15%%), truncation tail estimate "
                      "%.2e > 0",
                      100.0 * rel, rep.tail_estimate)};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"1", crit_1}, {"2a", crit_2a}, {"2b", crit_2b}, {"3", crit_3},
        {"4", crit_4}, {"5", crit_5},   {"6", crit_6},   {"7", crit_7},
        {"8", crit_8},
    };

    bool all_pass = true;
    bool ran_any = false;
    for (const auto& [id, fn] : criteria) {
        if (argc > 1 && id != argv[1]) continue;
        ran_any = true;
        Outcome o = fn();
        std::printf("ACCEPTANCE %s: %s - %s\n", id.c_str(), o.pass ? "PASS" : "FAIL",
                    o.detail.c_str());
        std::fflush(stdout);
        all_pass = all_pass && o.pass;
    }
    if (!ran_any) {
        std::fprintf(stderr, "unknown criterion \"%s\"\n", argv[1]);
        return 2;
    }
    return all_pass ? 0 : 1;
}
