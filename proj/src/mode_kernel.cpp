#include "oseentp/mode_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "oseentp/fourier.hpp"

namespace oseentp {

namespace {

struct GaussNode {
    double x, w;
};

// 20-point Gauss-Legendre rule on [-1, 1].
constexpr GaussNode kGauss20[] = {
    {-0.99312859918509488, 0.017614007139153273},
    {-0.96397192727791381, 0.040601429800386217},
    {-0.91223442825132584, 0.062672048334109443},
    {-0.83911697182221878, 0.083276741576704671},
    {-0.7463319064601508, 0.10193011981724026},
    {-0.63605368072651502, 0.11819453196151825},
    {-0.51086700195082713, 0.13168863844917653},
    {-0.37370608871541955, 0.14209610931838187},
    {-0.2277858511416451, 0.14917298647260366},
    {-0.076526521133497338, 0.15275338713072578},
    {0.076526521133497338, 0.15275338713072578},
    {0.2277858511416451, 0.14917298647260366},
    {0.37370608871541955, 0.14209610931838187},
    {0.51086700195082713, 0.13168863844917653},
    {0.63605368072651502, 0.11819453196151825},
    {0.7463319064601508, 0.10193011981724026},
    {0.83911697182221878, 0.083276741576704671},
    {0.91223442825132584, 0.062672048334109443},
    {0.96397192727791381, 0.040601429800386217},
    {0.99312859918509488, 0.017614007139153273},
};

// Rodrigues rotation taking unit vector d to e3; identity for d ~ e3,
// x-axis half-turn for d ~ -e3.
Mat3 rotation_to_e3(const Vec3& d) {
    Vec3 v = cross(d, Vec3{0, 0, 1});
    double c = d[2];
    if (norm(v) < 1e-14) {
        if (c > 0) return Mat3::identity();
        Mat3 r;
        r(0, 0) = 1;
        r(1, 1) = -1;
        r(2, 2) = -1;
        return r;
    }
    Mat3 vx;
    vx(0, 1) = -v[2];
    vx(0, 2) = v[1];
    vx(1, 0) = v[2];
    vx(1, 2) = -v[0];
    vx(2, 0) = -v[1];
    vx(2, 1) = v[0];
    return Mat3::identity() + vx + (1.0 / (1.0 + c)) * matmul(vx, vx);
}

}  // namespace

std::vector<double> scaled_bessel_i(int lmax, double z) {
    std::vector<double> out(static_cast<std::size_t>(lmax) + 1, 0.0);
    if (z < 1e-12) {
        out[0] = 1.0;
        return out;
    }
    // Downward recurrence f_{l-1} = f_{l+1} + ((2l+1)/z) f_l from a guarded
    // start order; values only grow downward, rescaling on overflow risk.
    int start = lmax + 30 + static_cast<int>(z);
    std::vector<double> f(static_cast<std::size_t>(start) + 1, 0.0);
    f[static_cast<std::size_t>(start)] = 0.0;
    f[static_cast<std::size_t>(start) - 1] = 1e-280;
    for (int l = start - 1; l >= 1; --l) {
        double next = f[static_cast<std::size_t>(l) + 1] + ((2.0 * l + 1.0) / z) * f[static_cast<std::size_t>(l)];
        if (next > 1e250) {
            for (int j = l; j <= start; ++j) f[static_cast<std::size_t>(j)] *= 1e-250;
            next = f[static_cast<std::size_t>(l) + 1] + ((2.0 * l + 1.0) / z) * f[static_cast<std::size_t>(l)];
        }
        f[static_cast<std::size_t>(l) - 1] = next;
    }
    // ibar_0(z) = (1 - e^{-2z}) / (2z).
    double ibar0 = -std::expm1(-2.0 * z) / (2.0 * z);
    double scale = ibar0 / f[0];
    for (int l = 0; l <= lmax; ++l) out[static_cast<std::size_t>(l)] = f[static_cast<std::size_t>(l)] * scale;
    return out;
}

ModeKernel::ModeKernel(const KernelParams& p, int k, double tail_tol) : p_(p), k_(k) {
    p_.validate();
    if (k == 0) throw std::domain_error("ModeKernel: k = 0 is the steady part");
    lambda_ = p_.lambda(k);
    double zmag = norm(p_.zeta);
    a_ = zmag / (2.0 * p_.nu);
    mu_ = std::sqrt(cplx(a_ * a_, lambda_ / p_.nu));
    if (mu_.real() < 0) mu_ = -mu_;
    rot_ = zmag > 0 ? rotation_to_e3((1.0 / zmag) * p_.zeta) : Mat3::identity();

    double rate = mu_.real() - a_;  // > 0 for every k != 0
    rcut_ = std::max(8.0, 46.0 / rate);
    lmax_ = std::max(24, static_cast<int>(2.5 * a_ * rcut_ + 30.0));

    // |K(x)| <= e^{-rate r} / (4 pi nu r); R_K solves bound = tail_tol.
    double lo = 1e-8, hi = 1e8;
    auto bound = [&](double r) { return std::exp(-rate * r) / (4.0 * pi * p_.nu * r); };
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        (bound(mid) > tail_tol ? lo : hi) = mid;
    }
    R_K_ = 0.5 * (lo + hi);

    build();
}

void ModeKernel::kappa(double s, cplx* out) const {
    std::vector<double> ib = scaled_bessel_i(lmax_, a_ * s);
    cplx phase = std::exp(-(mu_ - a_) * s) / (4.0 * pi * p_.nu * s);
    double sign = 1.0;
    for (int l = 0; l <= lmax_; ++l) {
        out[l] = (2.0 * l + 1.0) * sign * ib[static_cast<std::size_t>(l)] * phase;
        sign = -sign;
    }
}

void ModeKernel::build() {
    grid_.clear();
    grid_.push_back(1e-4);
    while (grid_.back() < std::min(1.0, rcut_)) grid_.push_back(grid_.back() * 1.35);
    const double h = 0.125;
    while (grid_.back() < rcut_) grid_.push_back(std::min(grid_.back() + h, rcut_));

    const std::size_t n = grid_.size();
    const std::size_t L1 = static_cast<std::size_t>(lmax_) + 1;
    Ahat_.assign(n * L1, cplx{});
    Bhat_.assign(n * L1, cplx{});
    std::vector<cplx> kap(L1);

    // Increment of Ahat over [lo, hi]: int (s/hi)^{l+1} s kappa_l(s) ds.
    auto a_inc = [&](double lo, double hi, cplx* acc) {
        double mid = 0.5 * (hi + lo), rad = 0.5 * (hi - lo);
        for (const auto& gn : kGauss20) {
            double s = mid + rad * gn.x, w = rad * gn.w;
            kappa(s, kap.data());
            double ratio = s / hi, pw = ratio;  // (s/hi)^{l+1}, l = 0 term first
            for (int l = 0; l <= lmax_; ++l) {
                acc[l] += w * pw * s * kap[static_cast<std::size_t>(l)];
                pw *= ratio;
            }
        }
    };
    // Increment of Bhat over [lo, hi]: int (lo/s)^l s kappa_l(s) ds.
    auto b_inc = [&](double lo, double hi, cplx* acc) {
        double mid = 0.5 * (hi + lo), rad = 0.5 * (hi - lo);
        for (const auto& gn : kGauss20) {
            double s = mid + rad * gn.x, w = rad * gn.w;
            kappa(s, kap.data());
            double ratio = lo / s, pw = 1.0;  // (lo/s)^l, l = 0 term first
            for (int l = 0; l <= lmax_; ++l) {
                acc[l] += w * pw * s * kap[static_cast<std::size_t>(l)];
                pw *= ratio;
            }
        }
    };

    // Forward cumulative pass: Ahat(r_{j+1}) = (r_j/r_{j+1})^{l+1} Ahat(r_j) + cell.
    a_inc(1e-30, grid_[0], &Ahat_[0]);
    for (std::size_t j = 0; j + 1 < n; ++j) {
        double lo = grid_[j], hi = grid_[j + 1];
        double ratio = lo / hi, pw = ratio;
        for (int l = 0; l <= lmax_; ++l) {
            Ahat_[(j + 1) * L1 + static_cast<std::size_t>(l)] =
                pw * Ahat_[j * L1 + static_cast<std::size_t>(l)];
            pw *= ratio;
        }
        a_inc(lo, hi, &Ahat_[(j + 1) * L1]);
    }
    // Backward cumulative pass: Bhat(r_j) = (r_j/r_{j+1})^l Bhat(r_{j+1}) + cell;
    // the tail beyond rcut is below tail_tol by construction.
    for (std::size_t j = n - 1; j-- > 0;) {
        double lo = grid_[j], hi = grid_[j + 1];
        double ratio = lo / hi, pw = 1.0;
        for (int l = 0; l <= lmax_; ++l) {
            Bhat_[j * L1 + static_cast<std::size_t>(l)] =
                pw * Bhat_[(j + 1) * L1 + static_cast<std::size_t>(l)];
            pw *= ratio;
        }
        b_inc(lo, hi, &Bhat_[j * L1]);
    }
}

void ModeKernel::radial(double r, std::vector<cplx>& A, std::vector<cplx>& B) const {
    const std::size_t L1 = static_cast<std::size_t>(lmax_) + 1;
    A.assign(L1, cplx{});
    B.assign(L1, cplx{});
    std::vector<cplx> kap(L1);

    auto a_inc = [&](double lo, double hi) {
        double mid = 0.5 * (hi + lo), rad = 0.5 * (hi - lo);
        for (const auto& gn : kGauss20) {
            double s = mid + rad * gn.x, w = rad * gn.w;
            kappa(s, kap.data());
            double ratio = s / hi, pw = ratio;
            for (int l = 0; l <= lmax_; ++l) {
                A[static_cast<std::size_t>(l)] += w * pw * s * kap[static_cast<std::size_t>(l)];
                pw *= ratio;
            }
        }
    };
    auto b_inc = [&](double lo, double hi) {
        double mid = 0.5 * (hi + lo), rad = 0.5 * (hi - lo);
        for (const auto& gn : kGauss20) {
            double s = mid + rad * gn.x, w = rad * gn.w;
            kappa(s, kap.data());
            double ratio = lo / s, pw = 1.0;
            for (int l = 0; l <= lmax_; ++l) {
                B[static_cast<std::size_t>(l)] += w * pw * s * kap[static_cast<std::size_t>(l)];
                pw *= ratio;
            }
        }
    };

    const std::vector<double>& g = grid_;
    if (r >= g.back()) {
        // Multipole continuation: Ahat_l(r) = (rcut/r)^{l+1} Ahat_l(rcut).
        double ratio = g.back() / r, pw = ratio;
        for (int l = 0; l <= lmax_; ++l) {
            A[static_cast<std::size_t>(l)] = pw * Ahat_[(g.size() - 1) * L1 + static_cast<std::size_t>(l)];
            pw *= ratio;
        }
        return;
    }
    auto it = std::upper_bound(g.begin(), g.end(), r);
    long j = static_cast<long>(it - g.begin()) - 1;  // g[j] <= r < g[j+1], or -1
    if (j < 0) {
        a_inc(1e-30, r);
        double ratio = r / g[0], pw = 1.0;
        for (int l = 0; l <= lmax_; ++l) {
            B[static_cast<std::size_t>(l)] = pw * Bhat_[static_cast<std::size_t>(l)];
            pw *= ratio;
        }
        b_inc(r, g[0]);
        return;
    }
    std::size_t ju = static_cast<std::size_t>(j);
    {
        double ratio = g[ju] / r, pw = ratio;
        for (int l = 0; l <= lmax_; ++l) {
            A[static_cast<std::size_t>(l)] = pw * Ahat_[ju * L1 + static_cast<std::size_t>(l)];
            pw *= ratio;
        }
        if (r > g[ju]) a_inc(g[ju], r);
    }
    {
        double ratio = r / g[ju + 1], pw = 1.0;
        for (int l = 0; l <= lmax_; ++l) {
            B[static_cast<std::size_t>(l)] = pw * Bhat_[(ju + 1) * L1 + static_cast<std::size_t>(l)];
            pw *= ratio;
        }
        if (r < g[ju + 1]) b_inc(r, g[ju + 1]);
    }
}

cplx ModeKernel::scalar_K(const Vec3& x) const {
    double r = norm(x);
    require_nonzero(r);
    Vec3 xp = matvec(rot_, x);
    return std::exp(cplx(-a_ * xp[2], 0.0) - mu_ * r) / (4.0 * pi * p_.nu * r);
}

CMat3 ModeKernel::eval(const Vec3& x) const {
    double r0 = norm(x);
    require_nonzero(r0);
    Vec3 xp = matvec(rot_, x);
    double r = norm(xp);
    double u = std::clamp(xp[2] / r, -1.0, 1.0);

    const std::size_t L1 = static_cast<std::size_t>(lmax_) + 1;
    std::vector<cplx> A, B, kap(L1);
    radial(r, A, B);
    kappa(r, kap.data());

    // Legendre values/derivatives by upward recurrences (stable on [-1,1]).
    std::vector<double> P(L1), dP(L1, 0.0), d2P(L1, 0.0);
    P[0] = 1.0;
    if (lmax_ >= 1) {
        P[1] = u;
        dP[1] = 1.0;
    }
    for (int l = 1; l < lmax_; ++l) {
        std::size_t li = static_cast<std::size_t>(l);
        P[li + 1] = ((2.0 * l + 1.0) * u * P[li] - l * P[li - 1]) / (l + 1.0);
        dP[li + 1] = dP[li - 1] + (2.0 * l + 1.0) * P[li];
        d2P[li + 1] = d2P[li - 1] + (2.0 * l + 1.0) * dP[li];
    }

    Vec3 xh = (1.0 / r) * xp;
    Vec3 w = Vec3{0, 0, 1} - u * xh;
    Mat3 I = Mat3::identity();
    Mat3 XX = outer(xh, xh);
    Mat3 XW = outer(xh, w) + outer(w, xh);
    Mat3 WW = outer(w, w);

    CMat3 H;
    for (int l = 0; l <= lmax_; ++l) {
        std::size_t li = static_cast<std::size_t>(l);
        cplx f = (A[li] + B[li]) / (2.0 * l + 1.0);
        cplx df = (-(l + 1.0) * A[li] + static_cast<double>(l) * B[li]) / ((2.0 * l + 1.0) * r);
        cplx d2f = ((l + 1.0) * (l + 2.0) * A[li] + static_cast<double>(l) * (l - 1.0) * B[li]) /
                       ((2.0 * l + 1.0) * r * r) -
                   kap[li];
        H += (d2f * P[li]) * XX;
        H += (df / r * P[li] - f * u / (r * r) * dP[li]) * (I - XX);
        H += ((df / r - f / (r * r)) * dP[li]) * XW;
        H += (f / (r * r) * d2P[li]) * WW;
    }

    cplx Kval = std::exp(cplx(-a_ * xp[2], 0.0) - mu_ * r) / (4.0 * pi * p_.nu * r);
    CMat3 G = Kval * I + H;
    // Rotate the tensor back to the original frame: R^T G R.
    CMat3 Rt(transpose(rot_));
    CMat3 Rc(rot_);
    return matmul(matmul(Rt, G), Rc);
}

ModeKernelCache::ModeKernelCache(const KernelParams& p, double tail_tol) : p_(p), tol_(tail_tol) {
    p_.validate();
    modes_.reserve(static_cast<std::size_t>(p_.n_modes));
    for (int k = 1; k <= p_.n_modes; ++k) modes_.emplace_back(p_, k, tail_tol);
}

const ModeKernel& ModeKernelCache::mode(int k_abs) const {
    if (k_abs < 1 || k_abs > p_.n_modes)
        throw std::invalid_argument("ModeKernelCache: mode index outside 1..n_modes");
    return modes_[static_cast<std::size_t>(k_abs) - 1];
}

double ModeKernelCache::R_K(int k) const { return mode(std::abs(k)).R_K(); }

CMat3 mode_velocity(const ModeKernelCache& cache, const Vec3& x, int k) {
    if (k == 0)
        throw std::domain_error("mode_velocity: k = 0 is excluded (steady part lives in oseen_steady)");
    CMat3 g = cache.mode(std::abs(k)).eval(x);
    return k > 0 ? g : conj(g);
}

CTen3 mode_velocity_grad(const ModeKernelCache& cache, const Vec3& x, int k) {
    if (k == 0)
        throw std::domain_error("mode_velocity_grad: k = 0 is excluded");
    const ModeKernel& m = cache.mode(std::abs(k));
    CTen3 g = fd_gradient([&](const Vec3& y) { return m.eval(y); }, x);
    return k > 0 ? g : conj(g);
}

std::vector<CMat3> mode_velocity_batch(const ModeKernelCache& cache, const std::vector<Vec3>& pts,
                                       int k, ExecMode mode) {
    std::vector<CMat3> out(pts.size());
    parallel_for(pts.size(), [&](std::size_t i) { out[i] = mode_velocity(cache, pts[i], k); },
                 mode);
    return out;
}

CMat3 mode_velocity_zeta0_closed_form(const KernelParams& p, int k, const Vec3& x) {
    if (k == 0) throw std::domain_error("mode_velocity_zeta0_closed_form: k = 0 excluded");
    if (norm(p.zeta) != 0.0)
        throw std::invalid_argument("mode_velocity_zeta0_closed_form: requires zeta = 0");
    double lam = p.lambda(k);
    cplx mu = std::sqrt(cplx(0.0, lam / p.nu));
    if (mu.real() < 0) mu = -mu;
    double r = norm(x);
    require_nonzero(r);
    Vec3 xh = (1.0 / r) * x;
    cplx K = std::exp(-mu * r) / (4.0 * pi * p.nu * r);
    cplx il(0.0, lam);
    // Radial Hessian of f(|x|): f'' xhat xhat + (f'/r)(I - xhat xhat).
    double dE = -1.0 / (4.0 * pi * r * r), d2E = 2.0 / (4.0 * pi * r * r * r);
    cplx dK = -(mu + 1.0 / r) * K;
    cplx d2K = (mu * mu + 2.0 * mu / r + 2.0 / (r * r)) * K;
    cplx df = (dE - p.nu * dK) / il;
    cplx d2f = (d2E - p.nu * d2K) / il;
    CMat3 H = d2f * outer(xh, xh) + (df / r) * (Mat3::identity() - outer(xh, xh));
    return K * Mat3::identity() + H;
}

Mat3 periodic_velocity(const ModeKernelCache& cache, double t, const Vec3& x) {
    const KernelParams& p = cache.params();
    Mat3 out;
    for (int k = 1; k <= p.n_modes; ++k) {
        cplx ph = std::exp(cplx(0.0, p.lambda(k) * t));
        CMat3 term = ph * cache.mode(k).eval(x);
        out += 2.0 * real(term);  // k and -k are conjugate partners
    }
    return out;
}

Ten3 periodic_velocity_grad(const ModeKernelCache& cache, double t, const Vec3& x) {
    const KernelParams& p = cache.params();
    Ten3 out;
    for (int k = 1; k <= p.n_modes; ++k) {
        cplx ph = std::exp(cplx(0.0, p.lambda(k) * t));
        CTen3 g = mode_velocity_grad(cache, x, k);
        for (int d = 0; d < 3; ++d) out[d] += 2.0 * real(ph * g[d]);
    }
    return out;
}

Mat3 full_velocity(const ModeKernelCache& cache, double t, const Vec3& x) {
    return oseen_steady(x, cache.params()) + periodic_velocity(cache, t, x);
}

double periodic_l2_norm(const ModeKernelCache& cache, const Vec3& x) {
    double s = 0;
    for (int k = 1; k <= cache.params().n_modes; ++k) {
        double n = norm(cache.mode(k).eval(x));
        s += 2.0 * n * n;
    }
    return std::sqrt(s);
}

double periodic_l1_norm(const ModeKernelCache& cache, const Vec3& x) {
    const KernelParams& p = cache.params();
    std::vector<CMat3> modes;
    for (int k = 1; k <= p.n_modes; ++k) modes.push_back(cache.mode(k).eval(x));
    double acc = 0;
    std::vector<double> ts = time_grid(p.n_modes, p.period);
    for (double t : ts) {
        Mat3 g;
        for (int k = 1; k <= p.n_modes; ++k) {
            cplx ph = std::exp(cplx(0.0, p.lambda(k) * t));
            g += 2.0 * real(ph * modes[static_cast<std::size_t>(k) - 1]);
        }
        acc += norm(g);
    }
    return acc / static_cast<double>(ts.size());
}

double periodic_grad_l1_norm(const ModeKernelCache& cache, const Vec3& x) {
    const KernelParams& p = cache.params();
    std::vector<CTen3> grads;
    for (int k = 1; k <= p.n_modes; ++k) grads.push_back(mode_velocity_grad(cache, x, k));
    double acc = 0;
    std::vector<double> ts = time_grid(p.n_modes, p.period);
    for (double t : ts) {
        Ten3 g;
        for (int k = 1; k <= p.n_modes; ++k) {
            cplx ph = std::exp(cplx(0.0, p.lambda(k) * t));
            for (int d = 0; d < 3; ++d) g[d] += 2.0 * real(ph * grads[static_cast<std::size_t>(k) - 1][d]);
        }
        acc += norm(g);
    }
    return acc / static_cast<double>(ts.size());
}

}  // namespace oseentp
