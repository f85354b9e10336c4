#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>
#include <vector>

#include "oseentp/fourier.hpp"
#include "oseentp/kernels.hpp"
#include "oseentp/mode_kernel.hpp"
#include "oseentp/params.hpp"
#include "oseentp/ray.hpp"
#include "oseentp/vec.hpp"

using namespace oseentp;

namespace {

Vec3 rand_unit(std::mt19937& rng) {
    std::normal_distribution<double> g;
    Vec3 v{g(rng), g(rng), g(rng)};
    return normalized(v);
}

template <class T>
double rel_diff(const T& a, const T& b) {
    return norm(a - b) / norm(b);
}

// 4th-order central gradient of a scalar field with a step independent of the
// one baked into fd_gradient, so cross-checks are not self-fulfilling.
template <class F>
Vec3 fd_grad_scalar(F&& f, const Vec3& x, double h) {
    Vec3 g;
    for (int a = 0; a < 3; ++a) {
        Vec3 e{};
        e[a] = 1.0;
        g[a] = (-f(x + (2 * h) * e) + 8.0 * f(x + h * e) - 8.0 * f(x - h * e) +
                f(x - (2 * h) * e)) /
               (12.0 * h);
    }
    return g;
}

KernelParams params_e1(int n_modes) {
    KernelParams p;
    p.zeta = Vec3{1, 0, 0};
    p.nu = 1.0;
    p.period = 1.0;
    p.n_modes = n_modes;
    return p;
}

const ModeKernelCache& cache_e1_n3() {
    static ModeKernelCache c(params_e1(3));
    return c;
}

}  // namespace

TEST_CASE("laplace kernel and pressure kernel: values and identities") {
    CHECK(laplace_E(Vec3{1, 0, 0}) == doctest::Approx(1.0 / (4.0 * pi)).epsilon(1e-14));
    CHECK(laplace_E(Vec3{0, 2, 0}) == doctest::Approx(1.0 / (8.0 * pi)).epsilon(1e-14));

    Vec3 p3 = pressure_P(Vec3{0, 0, 2});
    CHECK(p3[0] == doctest::Approx(0.0));
    CHECK(p3[1] == doctest::Approx(0.0));
    CHECK(p3[2] == doctest::Approx(1.0 / (16.0 * pi)).epsilon(1e-14));

    std::mt19937 rng(7);
    for (int i = 0; i < 10; ++i) {
        Vec3 x = (0.5 + 2.0 * i * 0.3) * rand_unit(rng);
        // P = -grad E, checked against an independent finite-difference step.
        Vec3 fd = fd_grad_scalar([](const Vec3& y) { return laplace_E(y); }, x, 3e-5 * norm(x));
        CHECK(norm(pressure_P(x) + fd) < 1e-8 * norm(pressure_P(x)));
        CHECK(norm(grad_E(x) + pressure_P(x)) == doctest::Approx(0.0));

        // div P = -laplacian E = 0 away from the origin.
        Mat3 gp = grad_P(x);
        CHECK(std::abs(trace(gp)) < 1e-13 * norm(gp));
        CHECK(norm(gp - transpose(gp)) < 1e-13 * norm(gp));

        // grad_P against finite differences of P.
        Mat3 fdg;
        for (int a = 0; a < 3; ++a) {
            Vec3 e{};
            e[a] = 1.0;
            double h = 3e-5 * norm(x);
            Vec3 d = (1.0 / (12.0 * h)) *
                     (-1.0 * pressure_P(x + (2 * h) * e) + 8.0 * pressure_P(x + h * e) -
                      8.0 * pressure_P(x - h * e) + pressure_P(x - (2 * h) * e));
            for (int j = 0; j < 3; ++j) fdg(a, j) = d[j];
        }
        CHECK(rel_diff(fdg, gp) < 1e-8);

        // hess_P against finite differences of grad_P.
        Ten3 hp = hess_P(x);
        Ten3 fdh = fd_gradient([](const Vec3& y) { return grad_P(y); }, x);
        CHECK(norm(hp - fdh) < 1e-7 * norm(hp));
    }

    CHECK_THROWS_AS(laplace_E(Vec3{0, 0, 0}), std::domain_error);
    CHECK_THROWS_AS(pressure_P(Vec3{0, 0, 0}), std::domain_error);
    CHECK_THROWS_AS(grad_P(Vec3{0, 0, 0}), std::domain_error);
    CHECK_THROWS_AS(hess_P(Vec3{0, 0, 0}), std::domain_error);
}

TEST_CASE("stokeslet: reference values, parity, scaling") {
    Mat3 s = stokeslet(Vec3{1, 0, 0}, 1.0);
    CHECK(s(0, 0) == doctest::Approx(1.0 / (4.0 * pi)).epsilon(1e-14));
    CHECK(s(1, 1) == doctest::Approx(1.0 / (8.0 * pi)).epsilon(1e-14));
    CHECK(s(2, 2) == doctest::Approx(1.0 / (8.0 * pi)).epsilon(1e-14));
    CHECK(std::abs(s(0, 1)) + std::abs(s(0, 2)) + std::abs(s(1, 2)) == doctest::Approx(0.0));

    std::mt19937 rng(11);
    for (int i = 0; i < 8; ++i) {
        Vec3 x = (0.3 + i) * rand_unit(rng);
        Mat3 a = stokeslet(x, 0.7);
        CHECK(rel_diff(stokeslet(-x, 0.7), a) < 1e-15);           // even in x
        CHECK(norm(a - transpose(a)) < 1e-15 * norm(a));          // symmetric
        CHECK(rel_diff(stokeslet(2.0 * x, 0.7), 0.5 * a) < 1e-14);  // 1/r homogeneity
        CHECK(rel_diff(stokeslet(x, 1.4), 0.5 * a) < 1e-14);        // 1/nu scaling
    }
    CHECK_THROWS_AS(stokeslet(Vec3{0, 0, 0}, 1.0), std::domain_error);
    CHECK_THROWS_AS(stokeslet(Vec3{1, 0, 0}, 0.0), std::invalid_argument);
}

TEST_CASE("steady kernel: closed-form reference values") {
    KernelParams p = params_e1(1);

    // Downstream point on the drift axis: all three terms contribute.
    Mat3 g = oseen_steady(Vec3{1, 0, 0}, p);
    double e1 = std::exp(-1.0);
    CHECK(g(0, 0) == doctest::Approx((1.0 - e1) / (4.0 * pi)).epsilon(1e-13));
    CHECK(g(1, 1) == doctest::Approx((3.0 * e1 - 1.0) / (8.0 * pi)).epsilon(1e-13));
    CHECK(g(2, 2) == doctest::Approx(g(1, 1)).epsilon(1e-13));
    CHECK(std::abs(g(0, 1)) + std::abs(g(0, 2)) + std::abs(g(1, 2)) < 1e-16);

    // Wake-axis point (weight vanishes): the quadratic term drops out.
    Mat3 gw = oseen_steady(Vec3{-1, 0, 0}, p);
    Mat3 ref = (1.0 / (8.0 * pi)) * (Mat3::identity() + outer(Vec3{1, 0, 0}, Vec3{1, 0, 0}));
    CHECK(rel_diff(gw, ref) < 1e-13);
}

TEST_CASE("steady kernel: stokeslet limit, reflection, symmetry, axis continuity") {
    std::mt19937 rng(13);

    KernelParams tiny = params_e1(1);
    tiny.zeta = Vec3{1e-6, 0, 0};
    for (int i = 0; i < 6; ++i) {
        Vec3 x = rand_unit(rng);
        CHECK(rel_diff(oseen_steady(x, tiny), stokeslet(x, 1.0)) < 1e-5);
    }

    for (int i = 0; i < 8; ++i) {
        KernelParams p;
        p.zeta = (0.2 + 1.7 * i * 0.13) * rand_unit(rng);
        p.nu = 0.4 + 0.2 * i;
        Vec3 x = (0.5 + 1.3 * i) * rand_unit(rng);
        Mat3 a = oseen_steady(x, p);
        CHECK(norm(a - transpose(a)) < 1e-14 * norm(a));
        KernelParams q = p;
        q.zeta = -1.0 * p.zeta;
        CHECK(rel_diff(oseen_steady(-x, q), a) < 1e-14);
    }

    // Continuity across the wake axis: points just off the axis agree with the
    // on-axis limit.
    KernelParams p = params_e1(1);
    Mat3 on = oseen_steady(Vec3{-2, 0, 0}, p);
    Mat3 off = oseen_steady(Vec3{-2, 1e-7, 0}, p);
    CHECK(rel_diff(off, on) < 1e-6);

    CHECK_THROWS_AS(oseen_steady(Vec3{0, 0, 0}, p), std::domain_error);
    KernelParams z0 = p;
    z0.zeta = Vec3{0, 0, 0};
    CHECK_THROWS_AS(oseen_steady(Vec3{1, 0, 0}, z0), std::invalid_argument);
}

TEST_CASE("steady kernel: series branch is continuous at the switch point") {
    double s0 = 1e-3;
    for (double eps : {1e-9, 1e-7}) {
        CHECK(detail::oseen_c1(s0 * (1 - eps)) ==
              doctest::Approx(detail::oseen_c1(s0 * (1 + eps))).epsilon(1e-10));
        CHECK(detail::oseen_c2(s0 * (1 - eps)) ==
              doctest::Approx(detail::oseen_c2(s0 * (1 + eps))).epsilon(1e-10));
    }
    CHECK(detail::oseen_c1(1e-8) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(detail::oseen_c2(1e-8) == doctest::Approx(0.5).epsilon(1e-8));
    // Large-argument asymptotics: c1 -> 1/s, c2 -> 1/s^2.
    CHECK(detail::oseen_c1(50.0) == doctest::Approx(1.0 / 50.0).epsilon(1e-12));
    CHECK(detail::oseen_c2(50.0) == doctest::Approx(1.0 / 2500.0).epsilon(1e-12));
}

TEST_CASE("steady kernel gradient: matches independent finite differences") {
    KernelParams p = params_e1(1);
    std::mt19937 rng(17);
    for (int i = 0; i < 5; ++i) {
        Vec3 x = (1.0 + i) * rand_unit(rng);
        Ten3 g = oseen_steady_grad(x, p);
        Vec3 d = rand_unit(rng);
        double h = 3e-5 * norm(x);
        Mat3 fd = (1.0 / (12.0 * h)) *
                  (-1.0 * oseen_steady(x + (2 * h) * d, p) + 8.0 * oseen_steady(x + h * d, p) -
                   8.0 * oseen_steady(x - h * d, p) + oseen_steady(x - (2 * h) * d, p));
        CHECK(rel_diff(contract_first(g, d), fd) < 1e-7);

        // Each column is divergence free away from the origin.
        for (int j = 0; j < 3; ++j) {
            double div = g[0](0, j) + g[1](1, j) + g[2](2, j);
            CHECK(std::abs(div) < 1e-7 * norm(g));
        }
    }
}

TEST_CASE("drift scalar kernel: steady limit, modulus, conjugation") {
    KernelParams p = params_e1(1);
    std::mt19937 rng(19);

    // lambda = 0 reproduces the exponentially weighted monopole exactly.
    for (int i = 0; i < 10; ++i) {
        Vec3 x = (0.3 + 1.1 * i) * rand_unit(rng);
        cplx k0 = drift_helmholtz_K(x, p, 0.0);
        double ref =
            std::exp(-wake_weight(p.zeta, x) / p.nu) / (4.0 * pi * p.nu * norm(x));
        CHECK(std::abs(k0.imag()) < 1e-15 * std::abs(ref));
        CHECK(k0.real() == doctest::Approx(ref).epsilon(1e-13));
    }
    CHECK(drift_helmholtz_K(Vec3{-1, 0, 0}, p, 0.0).real() ==
          doctest::Approx(1.0 / (4.0 * pi)).epsilon(1e-13));

    // Pure oscillation at zeta = 0: modulus e^{-sqrt(pi)}/(4 pi) at unit radius.
    KernelParams z0 = p;
    z0.zeta = Vec3{0, 0, 0};
    cplx kz = drift_helmholtz_K(Vec3{1, 0, 0}, z0, 2.0 * pi);
    CHECK(std::abs(kz) == doctest::Approx(std::exp(-std::sqrt(pi)) / (4.0 * pi)).epsilon(1e-13));

    for (int i = 0; i < 6; ++i) {
        Vec3 x = (0.5 + i) * rand_unit(rng);
        double lam = 2.0 * pi * (1 + i);
        cplx kp = drift_helmholtz_K(x, p, lam);
        cplx km = drift_helmholtz_K(x, p, -lam);
        CHECK(std::abs(km - std::conj(kp)) < 1e-15 * std::abs(kp));
        // Higher frequency decays faster at fixed x.
        CHECK(std::abs(drift_helmholtz_K(x, p, 2.0 * lam)) < std::abs(kp));
    }
    CHECK_THROWS_AS(drift_helmholtz_K(Vec3{0, 0, 0}, p, 1.0), std::domain_error);
}

TEST_CASE("scaled modified spherical bessel functions: frozen references") {
    // Reference values for e^{-z} i_l(z), frozen from an independent
    // arbitrary-precision evaluation.
    struct Ref {
        double z;
        double v[5];  // l = 0, 1, 5, 20, 60
    };
    const int ls[5] = {0, 1, 5, 20, 60};
    const Ref refs[] = {
        {0.1,
         {0.9063462346100909, 0.030191419289002226, 8.7078931258835709e-10,
          6.9010735544708112e-46, 1.0724661109996858e-161}},
        {1.0,
         {0.43233235838169365, 0.13533528323661267, 3.6774102726997153e-05,
          2.8382441747915602e-26, 4.3779042329568678e-102}},
        {5.0,
         {0.099995460007023751, 0.080005447991571499, 0.0050207196820615365,
          6.5413784733448598e-14, 7.6669571167684893e-62}},
        {17.5,
         {0.028571428571428564, 0.026938775510204096, 0.011909913726423556,
          3.8601867194145516e-07, 3.9024504702664457e-34}},
        {40.0,
         {0.012500000000000001, 0.012187500000000007, 0.0085552801513671898,
          6.876683879460559e-05, 3.3133773421525007e-20}},
    };
    for (const Ref& r : refs) {
        std::vector<double> ib = scaled_bessel_i(60, r.z);
        for (int j = 0; j < 5; ++j) {
            CAPTURE(r.z);
            CAPTURE(ls[j]);
            CHECK(ib[static_cast<std::size_t>(ls[j])] ==
                  doctest::Approx(r.v[j]).epsilon(1e-12));
        }
    }

    // Closed forms for l = 0, 1 over a separate grid.
    for (double z : {0.5, 2.0, 9.3, 33.0}) {
        std::vector<double> ib = scaled_bessel_i(10, z);
        double e2 = std::exp(-2.0 * z);
        CHECK(ib[0] == doctest::Approx((1.0 - e2) / (2.0 * z)).epsilon(1e-13));
        CHECK(ib[1] ==
              doctest::Approx((z * (1.0 + e2) - (1.0 - e2)) / (2.0 * z * z)).epsilon(1e-13));
        // Three-term recurrence holds where magnitudes allow.
        for (int l = 1; l <= 8; ++l) {
            double lhs = ib[static_cast<std::size_t>(l - 1)] - ib[static_cast<std::size_t>(l + 1)];
            double rhs = (2.0 * l + 1.0) / z * ib[static_cast<std::size_t>(l)];
            if (std::abs(lhs) > 1e-250) CHECK(rhs == doctest::Approx(lhs).epsilon(1e-10));
        }
    }

    // z = 0 degenerates to the Kronecker delta in l.
    std::vector<double> ib0 = scaled_bessel_i(5, 0.0);
    CHECK(ib0[0] == doctest::Approx(1.0));
    for (int l = 1; l <= 5; ++l) CHECK(ib0[static_cast<std::size_t>(l)] == doctest::Approx(0.0));
}

TEST_CASE("mode kernel: closed form agreement at zero drift") {
    KernelParams p;
    p.zeta = Vec3{0, 0, 0};
    p.nu = 0.7;
    p.period = 1.0;
    p.n_modes = 2;
    ModeKernelCache cache(p);

    std::mt19937 rng(23);
    for (int k : {1, 2}) {
        for (double r : {0.01, 0.05, 0.5, 1.0, 3.0, 7.9}) {
            Vec3 x = r * rand_unit(rng);
            CMat3 got = mode_velocity(cache, x, k);
            CMat3 ref = mode_velocity_zeta0_closed_form(p, k, x);
            CAPTURE(k);
            CAPTURE(r);
            CHECK(rel_diff(got, ref) < 1e-10);
        }
    }
    // Negative mode agrees with the conjugated closed form.
    Vec3 x{0.4, -1.1, 0.6};
    CHECK(rel_diff(mode_velocity(cache, x, -2),
                   conj(mode_velocity_zeta0_closed_form(p, 2, x))) < 1e-10);
}

TEST_CASE("mode kernel: conjugate symmetry holds for directly built negative modes") {
    KernelParams p = params_e1(1);
    ModeKernel plus(p, 1, 1e-10);
    ModeKernel minus(p, -1, 1e-10);
    std::mt19937 rng(29);
    for (int i = 0; i < 6; ++i) {
        Vec3 x = (0.4 + 1.2 * i) * rand_unit(rng);
        CHECK(rel_diff(minus.eval(x), conj(plus.eval(x))) < 1e-13);
        CHECK(std::abs(minus.scalar_K(x) - std::conj(plus.scalar_K(x))) <
              1e-13 * std::abs(plus.scalar_K(x)));
    }
}

TEST_CASE("mode kernel: guards and cache indexing") {
    const ModeKernelCache& cache = cache_e1_n3();
    Vec3 x{1, 0.5, -0.2};
    CHECK_THROWS_AS(mode_velocity(cache, x, 0), std::domain_error);
    CHECK_THROWS_AS(mode_velocity_grad(cache, x, 0), std::domain_error);
    CHECK_THROWS_AS(mode_velocity(cache, x, 4), std::invalid_argument);
    CHECK_THROWS_AS(cache.mode(0), std::invalid_argument);
    CHECK_THROWS_AS(cache.mode(1).eval(Vec3{0, 0, 0}), std::domain_error);

    // Conjugation between +k and -k through the cache path.
    CHECK(rel_diff(mode_velocity(cache, x, -2), conj(mode_velocity(cache, x, 2))) == 0.0);
}

TEST_CASE("mode kernel: columns are divergence free") {
    const ModeKernelCache& cache = cache_e1_n3();
    std::mt19937 rng(31);
    for (int k : {1, 2, 3}) {
        for (double r : {0.05, 1.5, 3.0, 7.0}) {
            Vec3 x = r * rand_unit(rng);
            CTen3 g = mode_velocity_grad(cache, x, k);
            double scale = norm(g);
            for (int j = 0; j < 3; ++j) {
                cplx div = g[0](0, j) + g[1](1, j) + g[2](2, j);
                CAPTURE(k);
                CAPTURE(r);
                CHECK(std::abs(div) < 1e-5 * scale);
            }
        }
    }
}

TEST_CASE("mode kernel: far field approaches the oscillating dipole") {
    const ModeKernelCache& cache = cache_e1_n3();
    const KernelParams& p = cache.params();
    std::mt19937 rng(37);
    auto dev = [&](double r, const Vec3& dir) {
        Vec3 x = r * dir;
        Vec3 xh = normalized(x);
        cplx ilam(0.0, p.lambda(1));
        CMat3 dip = (1.0 / (4.0 * pi * r * r * r) / ilam) *
                    (3.0 * outer(xh, xh) - Mat3::identity());
        return rel_diff(mode_velocity(cache, x, 1), dip);
    };
    Vec3 d = rand_unit(rng);
    double d6 = dev(6.0, d), d12 = dev(12.0, d), d20 = dev(20.0, d);
    CHECK(d6 < 0.08);
    CHECK(d12 < 0.03);
    CHECK(d20 < 0.02);
    CHECK(d12 < d6);
    CHECK(d20 < d12);
}

TEST_CASE("mode kernel: scalar cutoff radii decrease with frequency") {
    const ModeKernelCache& cache = cache_e1_n3();
    CHECK(cache.R_K(1) >= cache.R_K(2));
    CHECK(cache.R_K(2) >= cache.R_K(3));
    CHECK(cache.R_K(-2) == cache.R_K(2));

    // At the cutoff radius the worst-direction modulus sits at the tail
    // tolerance the cache was built with.
    const KernelParams& p = cache.params();
    for (int k : {1, 3}) {
        double R = cache.R_K(k);
        Vec3 x = -R * normalized(p.zeta);
        double m = std::abs(cache.mode(k).scalar_K(x));
        CHECK(m == doctest::Approx(cache.tail_tol()).epsilon(1e-6));
    }
}

TEST_CASE("mode kernel batch: parallel and serial paths agree bitwise") {
    const ModeKernelCache& cache = cache_e1_n3();
    std::mt19937 rng(41);
    std::vector<Vec3> pts;
    for (int i = 0; i < 40; ++i) pts.push_back((0.3 + 0.2 * i) * rand_unit(rng));
    std::vector<CMat3> a = mode_velocity_batch(cache, pts, 2, ExecMode::serial);
    std::vector<CMat3> b = mode_velocity_batch(cache, pts, 2, ExecMode::parallel);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (int e = 0; e < 9; ++e) CHECK(a[i].m[e] == b[i].m[e]);
}

TEST_CASE("periodic assembly: periodicity, zero mean, steady split") {
    const ModeKernelCache& cache = cache_e1_n3();
    const KernelParams& p = cache.params();
    Vec3 x{1.3, -0.4, 0.8};

    Mat3 g0 = periodic_velocity(cache, 0.0, x);
    Mat3 gT = periodic_velocity(cache, p.period, x);
    CHECK(rel_diff(gT, g0) < 1e-13);

    // Mean over one period vanishes; the uniform grid integrates the
    // band-limited assembly exactly.
    Mat3 mean;
    std::vector<double> ts = time_grid(p.n_modes, p.period);
    for (double t : ts) mean += periodic_velocity(cache, t, x);
    mean *= 1.0 / static_cast<double>(ts.size());
    CHECK(norm(mean) < 1e-14 * norm(g0));

    // Same grid recovers the steady part as the mean of the full kernel.
    Mat3 fmean;
    for (double t : ts) fmean += full_velocity(cache, t, x);
    fmean *= 1.0 / static_cast<double>(ts.size());
    CHECK(rel_diff(fmean, oseen_steady(x, p)) < 1e-13);
}

TEST_CASE("periodic assembly: torus norms are consistent") {
    const ModeKernelCache& cache = cache_e1_n3();
    const KernelParams& p = cache.params();
    std::mt19937 rng(43);
    for (double r : {1.0, 3.0, 6.0}) {
        Vec3 x = r * rand_unit(rng);
        double l2 = periodic_l2_norm(cache, x);
        // Time-grid quadrature of the squared Frobenius norm (exact for the
        // band-limited assembly) must reproduce the coefficient-space value.
        double acc = 0;
        std::vector<double> ts = time_grid(p.n_modes, p.period);
        for (double t : ts) {
            double n = norm(periodic_velocity(cache, t, x));
            acc += n * n;
        }
        double l2_grid = std::sqrt(acc / static_cast<double>(ts.size()));
        CHECK(l2_grid == doctest::Approx(l2).epsilon(1e-12));
        // On a probability measure the L1 norm cannot exceed the L2 norm.
        CHECK(periodic_l1_norm(cache, x) <= l2 * (1.0 + 1e-12));
        CHECK(periodic_grad_l1_norm(cache, x) > 0.0);
    }
}

TEST_CASE("periodic gradient: matches finite differences of the assembly") {
    const ModeKernelCache& cache = cache_e1_n3();
    Vec3 x{1.1, 0.7, -0.9};
    double t = 0.37;
    Ten3 g = periodic_velocity_grad(cache, t, x);
    Vec3 d = normalized(Vec3{0.3, -1.0, 0.5});
    double h = 3e-5 * norm(x);
    Mat3 fd = (1.0 / (12.0 * h)) *
              (-1.0 * periodic_velocity(cache, t, x + (2 * h) * d) +
               8.0 * periodic_velocity(cache, t, x + h * d) -
               8.0 * periodic_velocity(cache, t, x - h * d) +
               periodic_velocity(cache, t, x - (2 * h) * d));
    CHECK(rel_diff(contract_first(g, d), fd) < 1e-6);
}

TEST_CASE("full assembly: truncation tail matches the dipole estimate") {
    KernelParams p8 = params_e1(8);
    KernelParams p12 = params_e1(12);
    ModeKernelCache c8(p8), c12(p12);

    for (Vec3 x : {Vec3{0, 2.4, 3.2}, Vec3{-4, 0, 0}}) {
        double r = norm(x);
        double measured = 0;
        for (double t : time_grid(12, p12.period)) {
            double n = norm(full_velocity(c12, t, x) - full_velocity(c8, t, x));
            measured = std::max(measured, n);
        }
        // Each added mode contributes about sqrt(6)/(4 pi r^3 lambda_k) in
        // Frobenius norm (twice, for the conjugate pair).
        double est_sum = 0, est_sq = 0;
        for (int k = 9; k <= 12; ++k) {
            double a = std::sqrt(6.0) / (4.0 * pi * r * r * r * p12.lambda(k));
            est_sum += 2.0 * a;
            est_sq += 2.0 * a * a;
        }
        double est_rms = std::sqrt(est_sq);
        CAPTURE(r);
        CAPTURE(measured);
        CAPTURE(est_sum);
        CHECK(measured < 2.0 * est_sum);
        CHECK(measured > 0.5 * est_rms);
    }
}

TEST_CASE("weighted far-field suprema stay bounded") {
    KernelParams p = params_e1(3);
    const ModeKernelCache& cache = cache_e1_n3();
    std::mt19937 rng(47);
    std::vector<Vec3> dirs;
    for (const Ray& ray : default_ray_set(p.zeta, {2.0, 4.0})) dirs.push_back(ray.dir);
    for (int i = 0; i < 10; ++i) dirs.push_back(rand_unit(rng));

    // Steady kernel decays like 1/(|x| (1 + wake weight)).
    double sup_steady = 0;
    for (double r : {2.0, 4.0, 8.0, 16.0, 32.0, 64.0})
        for (const Vec3& d : dirs) {
            Vec3 x = r * d;
            double w = norm(x) * (1.0 + wake_weight(p.zeta, x));
            sup_steady = std::max(sup_steady, norm(oseen_steady(x, p)) * w);
        }
    MESSAGE("steady weighted sup = " << sup_steady);
    CHECK(sup_steady < 1.0);

    // Purely periodic part decays like 1/|x|^3 in the torus L2 norm.
    double sup_per = 0;
    for (double r : {2.0, 4.0, 8.0, 16.0})
        for (const Vec3& d : dirs) {
            Vec3 x = r * d;
            sup_per = std::max(sup_per, periodic_l2_norm(cache, x) * r * r * r);
        }
    MESSAGE("periodic weighted sup = " << sup_per);
    CHECK(sup_per < 1.0);
}
