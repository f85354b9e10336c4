#include "oseentp/oracle.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

namespace oseentp {

namespace {

// FFTW's planner is not thread-safe; executions on distinct plans are.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

struct Gauss {
    double x, w;
};
// 8-point Gauss-Legendre on [-1, 1].
constexpr Gauss kGauss8[] = {
    {-0.96028985649753623, 0.10122853629037626}, {-0.79666647741362674, 0.22238103445337447},
    {-0.52553240991632899, 0.31370664587788729}, {-0.18343464249564980, 0.36268378337836198},
    {0.18343464249564980, 0.36268378337836198},  {0.52553240991632899, 0.31370664587788729},
    {0.79666647741362674, 0.22238103445337447},  {0.96028985649753623, 0.10122853629037626},
};

}  // namespace

void FFTGridSpec::validate() const {
    if (!power_of_two(n)) throw std::invalid_argument("FFTGridSpec: n must be a power of two");
    if (!(L >= 8.0)) throw std::invalid_argument("FFTGridSpec: box half-length must be >= 8");
    if (k == 0) throw std::invalid_argument("FFTGridSpec: mode k must be nonzero");
    params.validate();
}

FFTModeOracle::FFTModeOracle(const FFTGridSpec& spec) : spec_(spec) {
    spec_.validate();
    const int n = spec_.n;
    const std::size_t total = static_cast<std::size_t>(n) * n * n;
    const double L = spec_.L;
    const double lam = spec_.params.lambda(spec_.k);
    const double nu = spec_.params.nu;
    const Vec3 zeta = spec_.params.zeta;

    fftw_complex* in = fftw_alloc_complex(total);
    fftw_complex* out = fftw_alloc_complex(total);
    if (!in || !out) {
        fftw_free(in);
        fftw_free(out);
        throw std::bad_alloc();
    }
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        plan = fftw_plan_dft_3d(n, n, n, in, out, FFTW_BACKWARD, FFTW_ESTIMATE);
    }

    // Dual-grid frequencies in index order: m = idx for idx < n/2, idx - n
    // otherwise; xi = pi m / L.
    std::vector<double> freq(static_cast<std::size_t>(n));
    for (int idx = 0; idx < n; ++idx)
        freq[static_cast<std::size_t>(idx)] = pi * (idx < n / 2 ? idx : idx - n) / L;

    const double box_volume = 8.0 * L * L * L;
    for (int ci = 0; ci < 3; ++ci)
        for (int cj = 0; cj < 3; ++cj) {
            std::size_t p = 0;
            for (int i0 = 0; i0 < n; ++i0)
                for (int i1 = 0; i1 < n; ++i1)
                    for (int i2 = 0; i2 < n; ++i2, ++p) {
                        // Nyquist planes have no +/- partner on the fftfreq
                        // grid; zero them so conjugate symmetry in k is exact.
                        if (i0 == n / 2 || i1 == n / 2 || i2 == n / 2) {
                            in[p][0] = in[p][1] = 0.0;
                            continue;
                        }
                        Vec3 xi{freq[static_cast<std::size_t>(i0)],
                                freq[static_cast<std::size_t>(i1)],
                                freq[static_cast<std::size_t>(i2)]};
                        double q2 = dot(xi, xi);
                        cplx val;
                        if (q2 == 0.0) {
                            val = ci == cj ? (2.0 / 3.0) / cplx(0.0, lam) : cplx(0.0);
                        } else {
                            double proj = (ci == cj ? 1.0 : 0.0) - xi[ci] * xi[cj] / q2;
                            val = proj / cplx(nu * q2, lam - dot(zeta, xi));
                        }
                        in[p][0] = val.real();
                        in[p][1] = val.imag();
                    }
            fftw_execute(plan);
            field_[ci][cj].resize(total);
            for (std::size_t q = 0; q < total; ++q)
                field_[ci][cj][q] = cplx(out[q][0], out[q][1]) / box_volume;
        }

    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    fftw_free(in);
    fftw_free(out);
}

std::size_t FFTModeOracle::flat(const Vec3& x) const {
    if (!(norm(x) <= spec_.L / 4.0))
        throw std::invalid_argument("FFTModeOracle: evaluation point outside the aliasing guard |x| <= L/4");
    const int n = spec_.n;
    const double d = dx();
    std::size_t idx = 0;
    for (int a = 0; a < 3; ++a) {
        long m = std::lround(x[a] / d);
        long j = ((m % n) + n) % n;
        idx = idx * static_cast<std::size_t>(n) + static_cast<std::size_t>(j);
    }
    return idx;
}

CMat3 FFTModeOracle::at_nearest(const Vec3& x) const {
    std::size_t idx = flat(x);
    CMat3 g;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) g(i, j) = field_[i][j][idx];
    return g;
}

Vec3 FFTModeOracle::snapped(const Vec3& x) const {
    const double d = dx();
    Vec3 s;
    for (int a = 0; a < 3; ++a) s[a] = d * static_cast<double>(std::lround(x[a] / d));
    return s;
}

std::vector<Vec3> FFTModeOracle::nodes_in_shell(double rmin, double rmax,
                                                std::size_t max_count) const {
    const int n = spec_.n;
    const double d = dx();
    std::vector<Vec3> all;
    for (int i0 = 0; i0 < n; ++i0)
        for (int i1 = 0; i1 < n; ++i1)
            for (int i2 = 0; i2 < n; ++i2) {
                Vec3 x{d * (i0 < n / 2 ? i0 : i0 - n), d * (i1 < n / 2 ? i1 : i1 - n),
                       d * (i2 < n / 2 ? i2 : i2 - n)};
                double r = norm(x);
                if (r >= rmin && r <= rmax && r <= spec_.L / 4.0) all.push_back(x);
            }
    if (all.size() <= max_count) return all;
    std::vector<Vec3> out;
    out.reserve(max_count);
    std::size_t stride = (all.size() + max_count - 1) / max_count;
    for (std::size_t i = 0; i < all.size(); i += stride) out.push_back(all[i]);
    return out;
}

double mean_subtracted_rel_error(const std::vector<CMat3>& got, const std::vector<CMat3>& ref) {
    if (got.size() != ref.size() || got.empty())
        throw std::invalid_argument("mean_subtracted_rel_error: size mismatch or empty input");
    CMat3 mg, mr;
    for (std::size_t i = 0; i < got.size(); ++i) {
        mg += got[i];
        mr += ref[i];
    }
    double inv = 1.0 / static_cast<double>(got.size());
    mg *= cplx(inv);
    mr *= cplx(inv);
    double num = 0, den = 0;
    for (std::size_t i = 0; i < got.size(); ++i) {
        double e = norm((got[i] - mg) - (ref[i] - mr));
        double b = norm(ref[i] - mr);
        num += e * e;
        den += b * b;
    }
    if (den == 0.0) throw std::invalid_argument("mean_subtracted_rel_error: reference has no variation");
    return std::sqrt(num / den);
}

std::vector<double> brute_conv_oracle(const std::function<double(const Vec3&)>& kernel,
                                      const std::function<double(const Vec3&)>& density,
                                      const ConvRegion& region, double h,
                                      const std::vector<Vec3>& test_points) {
    if (!(h > 0)) throw std::invalid_argument("brute_conv_oracle: resolution must be positive");
    for (int a = 0; a < 3; ++a)
        if (!(region.hi[a] > region.lo[a]))
            throw std::invalid_argument("brute_conv_oracle: empty region");

    for (const Vec3& x : test_points) {
        Vec3 c = x;
        for (int a = 0; a < 3; ++a) c[a] = std::clamp(c[a], region.lo[a], region.hi[a]);
        double d = norm(x - c);
        if (d > 0 && h > d / 4.0)
            throw std::invalid_argument("brute_conv_oracle: resolution too coarse (h > dist/4)");
    }

    // Midpoint grid with spacing as close to h as divides the box.
    int cnt[3];
    double step[3];
    for (int a = 0; a < 3; ++a) {
        double len = region.hi[a] - region.lo[a];
        cnt[a] = std::max(1, static_cast<int>(std::lround(len / h)));
        step[a] = len / cnt[a];
    }
    const double w = step[0] * step[1] * step[2];
    const double rho = 2.0 * h;

    // Moments of the kernel over the exclusion ball: radial Gauss times a
    // 14-point degree-5 spherical rule (6 axis + 8 diagonal directions).
    // I0 = integral of K, I1 = integral of K(z) z; the excluded mass is
    // density(x) I0 - grad density(x) . I1 up to O(rho^4).
    auto ball_moments = [&](double& I0, Vec3& I1) {
        static const double s3 = 1.0 / std::sqrt(3.0);
        const Vec3 dirs[14] = {{1, 0, 0},    {-1, 0, 0},   {0, 1, 0},    {0, -1, 0},
                               {0, 0, 1},    {0, 0, -1},   {s3, s3, s3}, {s3, s3, -s3},
                               {s3, -s3, s3}, {s3, -s3, -s3}, {-s3, s3, s3}, {-s3, s3, -s3},
                               {-s3, -s3, s3}, {-s3, -s3, -s3}};
        const double wdir[14] = {1.0 / 15, 1.0 / 15, 1.0 / 15, 1.0 / 15, 1.0 / 15,
                                 1.0 / 15, 3.0 / 40, 3.0 / 40, 3.0 / 40, 3.0 / 40,
                                 3.0 / 40, 3.0 / 40, 3.0 / 40, 3.0 / 40};
        I0 = 0;
        I1 = Vec3{};
        for (const Gauss& gn : kGauss8) {
            double r = 0.5 * rho * (gn.x + 1.0);
            double wr = 0.5 * rho * gn.w * 4.0 * pi * r * r;
            for (int j = 0; j < 14; ++j) {
                double kv = wdir[j] * kernel(r * dirs[j]);
                I0 += wr * kv;
                I1 += (wr * kv * r) * dirs[j];
            }
        }
    };
    double I0;
    Vec3 I1;
    ball_moments(I0, I1);

    std::vector<double> out(test_points.size(), 0.0);
    for (std::size_t t = 0; t < test_points.size(); ++t) {
        const Vec3& x = test_points[t];
        double acc = 0, comp = 0;  // Neumaier compensation
        for (int i0 = 0; i0 < cnt[0]; ++i0)
            for (int i1 = 0; i1 < cnt[1]; ++i1)
                for (int i2 = 0; i2 < cnt[2]; ++i2) {
                    Vec3 y{region.lo[0] + (i0 + 0.5) * step[0],
                           region.lo[1] + (i1 + 0.5) * step[1],
                           region.lo[2] + (i2 + 0.5) * step[2]};
                    Vec3 z = x - y;
                    if (norm(z) < rho) continue;
                    double term = kernel(z) * density(y) * w;
                    double s = acc + term;
                    comp += std::abs(acc) >= std::abs(term) ? (acc - s) + term : (term - s) + acc;
                    acc = s;
                }
        double val = acc + comp;
        bool ball_inside = true;
        for (int a = 0; a < 3; ++a)
            ball_inside = ball_inside && x[a] - region.lo[a] >= rho && region.hi[a] - x[a] >= rho;
        if (ball_inside) {
            Vec3 gd;  // central-difference density gradient for the dipole term
            for (int a = 0; a < 3; ++a) {
                Vec3 e{};
                e[a] = 1.0;
                double hd = 0.25 * rho;
                gd[a] = (density(x + hd * e) - density(x - hd * e)) / (2.0 * hd);
            }
            val += density(x) * I0 - dot(gd, I1);
        }
        out[t] = val;
    }
    return out;
}

ResidualReport pde_residual(const std::function<CVec3(const Vec3&)>& v,
                            const std::function<cplx(const Vec3&)>& p, int k, const Vec3& x,
                            const KernelParams& params, double dist_to_singularity,
                            double step_scale) {
    params.validate();
    double h = step_scale * norm(x);
    if (!(h > 0)) throw std::invalid_argument("pde_residual: zero step (is x the origin?)");
    if (!(dist_to_singularity >= 10.0 * h))
        throw std::invalid_argument("pde_residual: FD stencil too close to a singularity");

    CVec3 v0 = v(x);
    CMat3 grad;  // grad(a, i) = d_a v_i
    CVec3 lap;
    CVec3 gradp;
    for (int a = 0; a < 3; ++a) {
        Vec3 e{};
        e[a] = 1.0;
        CVec3 vp2 = v(x + (2 * h) * e), vp1 = v(x + h * e);
        CVec3 vm1 = v(x - h * e), vm2 = v(x - (2 * h) * e);
        for (int i = 0; i < 3; ++i) {
            grad(a, i) = (-vp2[i] + 8.0 * vp1[i] - 8.0 * vm1[i] + vm2[i]) / (12.0 * h);
            lap[i] += (-vp2[i] + 16.0 * vp1[i] - 30.0 * v0[i] + 16.0 * vm1[i] - vm2[i]) /
                      (12.0 * h * h);
        }
        cplx pp2 = p(x + (2 * h) * e), pp1 = p(x + h * e);
        cplx pm1 = p(x - h * e), pm2 = p(x - (2 * h) * e);
        gradp[a] = (-pp2 + 8.0 * pp1 - 8.0 * pm1 + pm2) / (12.0 * h);
    }

    cplx ilam(0.0, params.lambda(k));
    CVec3 t_time{ilam * v0[0], ilam * v0[1], ilam * v0[2]};
    CVec3 t_visc{-params.nu * lap[0], -params.nu * lap[1], -params.nu * lap[2]};
    CVec3 t_drift;
    for (int i = 0; i < 3; ++i)
        t_drift[i] = -(params.zeta[0] * grad(0, i) + params.zeta[1] * grad(1, i) +
                       params.zeta[2] * grad(2, i));

    CVec3 res = t_time + t_visc + t_drift + gradp;
    ResidualReport rep;
    rep.absolute = norm(res);
    double scale = norm(t_time) + norm(t_visc) + norm(t_drift) + norm(gradp);
    rep.relative = scale > 0 ? rep.absolute / scale : 0.0;
    cplx div = grad(0, 0) + grad(1, 1) + grad(2, 2);
    double gn = norm(grad);
    rep.divergence = gn > 0 ? std::abs(div) / gn : 0.0;
    return rep;
}

}  // namespace oseentp
