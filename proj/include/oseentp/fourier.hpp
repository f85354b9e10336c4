#pragma once

#include <stdexcept>
#include <vector>

#include "oseentp/params.hpp"
#include "oseentp/vec.hpp"

// Fourier algebra on the time torus with normalized measure:
//   g(t) = sum_{|k| <= N} g_k exp(i 2 pi k t / period),
//   g_k  = (1/period) \int_0^period g(t) exp(-i 2 pi k t / period) dt.
// Under this convention torus convolution is the mode-wise product with unit
// constant, and the periodic delta has all coefficients equal to 1.
// Real-valued quantities satisfy coeff(-k) = conj(coeff(k)).

namespace oseentp {

template <class T>
class Fourier {
  public:
    Fourier() : n_(0), c_(1) {}
    explicit Fourier(int n_modes) : n_(n_modes), c_(2 * n_modes + 1) {
        if (n_modes < 0) throw std::invalid_argument("Fourier: negative mode count");
    }

    int n_modes() const { return n_; }

    T& coeff(int k) { return c_.at(static_cast<std::size_t>(k + n_)); }
    const T& coeff(int k) const { return c_.at(static_cast<std::size_t>(k + n_)); }

    // Time-domain value (complex); real-valued data yields a real part only.
    T eval(double t, double period) const {
        T s{};
        for (int k = -n_; k <= n_; ++k) {
            cplx ph = std::exp(cplx(0.0, 2.0 * pi * k * t / period));
            s += ph * coeff(k);
        }
        return s;
    }

    Fourier steady_part() const {
        Fourier r(n_);
        r.coeff(0) = coeff(0);
        return r;
    }
    Fourier periodic_part() const {
        Fourier r = *this;
        r.coeff(0) = T{};
        return r;
    }

    Fourier& operator+=(const Fourier& o) {
        require_same_modes(o);
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
        return *this;
    }
    Fourier& operator-=(const Fourier& o) {
        require_same_modes(o);
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
        return *this;
    }
    Fourier& operator*=(cplx s) {
        for (auto& c : c_) c *= s;
        return *this;
    }

    void require_same_modes(const Fourier& o) const {
        if (n_ != o.n_) throw std::invalid_argument("Fourier: mode count mismatch");
    }

  private:
    int n_;
    std::vector<T> c_;
};

using FourierScalar = Fourier<cplx>;
using FourierField = Fourier<CVec3>;
using FourierTensor = Fourier<CMat3>;

template <class T>
Fourier<T> operator+(Fourier<T> a, const Fourier<T>& b) { return a += b; }
template <class T>
Fourier<T> operator-(Fourier<T> a, const Fourier<T>& b) { return a -= b; }
template <class T>
Fourier<T> operator*(cplx s, Fourier<T> a) { return a *= s; }

namespace detail {

template <class TR, class TA, class TB, class F>
Fourier<TR> mode_combine(const Fourier<TA>& a, const Fourier<TB>& b, F&& f) {
    if (a.n_modes() != b.n_modes()) throw std::invalid_argument("Fourier: mode count mismatch");
    Fourier<TR> r(a.n_modes());
    for (int k = -a.n_modes(); k <= a.n_modes(); ++k) r.coeff(k) = f(a.coeff(k), b.coeff(k));
    return r;
}

template <class TR, class TA, class TB, class F>
Fourier<TR> cauchy_combine(const Fourier<TA>& a, const Fourier<TB>& b, F&& f) {
    if (a.n_modes() != b.n_modes()) throw std::invalid_argument("Fourier: mode count mismatch");
    const int n = a.n_modes();
    Fourier<TR> r(n);
    for (int k = -n; k <= n; ++k) {
        TR s{};
        for (int m = -n; m <= n; ++m) {
            int j = k - m;
            if (j < -n || j > n) continue;
            s += f(a.coeff(m), b.coeff(j));
        }
        r.coeff(k) = s;
    }
    return r;
}

}  // namespace detail

// Torus convolution: modes multiply (normalized-measure convention).
inline FourierScalar fourier_convolve(const FourierScalar& a, const FourierScalar& b) {
    return detail::mode_combine<cplx>(a, b, [](const cplx& x, const cplx& y) { return x * y; });
}
inline FourierField fourier_convolve(const FourierScalar& a, const FourierField& b) {
    return detail::mode_combine<CVec3>(a, b, [](const cplx& x, const CVec3& y) { return x * y; });
}
inline FourierField fourier_convolve(const FourierTensor& a, const FourierField& b) {
    return detail::mode_combine<CVec3>(a, b,
                                       [](const CMat3& x, const CVec3& y) { return matvec(x, y); });
}
inline FourierTensor fourier_convolve(const FourierScalar& a, const FourierTensor& b) {
    return detail::mode_combine<CMat3>(a, b, [](const cplx& x, const CMat3& y) { return x * y; });
}

// Pointwise-in-time product (Cauchy product over modes, truncated to |k| <= N).
inline FourierScalar fourier_pointwise(const FourierScalar& a, const FourierScalar& b) {
    return detail::cauchy_combine<cplx>(a, b, [](const cplx& x, const cplx& y) { return x * y; });
}
inline FourierField fourier_pointwise(const FourierScalar& a, const FourierField& b) {
    return detail::cauchy_combine<CVec3>(a, b, [](const cplx& x, const CVec3& y) { return x * y; });
}
inline FourierScalar fourier_pointwise_dot(const FourierField& a, const FourierField& b) {
    return detail::cauchy_combine<cplx>(a, b, [](const CVec3& x, const CVec3& y) { return dot(x, y); });
}
// (a . grad) b with grad(a,j) = d_a b_j supplied as a tensor series.
inline FourierField fourier_pointwise_advect(const FourierField& a, const FourierTensor& g) {
    return detail::cauchy_combine<CVec3>(a, g,
                                         [](const CVec3& x, const CMat3& y) { return vecmat(x, y); });
}
inline FourierTensor fourier_pointwise_outer(const FourierField& a, const FourierField& b) {
    return detail::cauchy_combine<CMat3>(a, b,
                                         [](const CVec3& x, const CVec3& y) { return outer(x, y); });
}

// d/dt in mode space: coeff(k) -> i lambda_k coeff(k).
template <class T>
Fourier<T> fourier_time_derivative(const Fourier<T>& a, double period) {
    Fourier<T> r(a.n_modes());
    for (int k = -a.n_modes(); k <= a.n_modes(); ++k)
        r.coeff(k) = cplx(0.0, 2.0 * pi * k / period) * a.coeff(k);
    return r;
}

inline double norm_of(const cplx& c) { return std::abs(c); }
inline double norm_of(const CVec3& c) { return norm(c); }
inline double norm_of(const CMat3& c) { return norm(c); }

template <class T>
bool is_conj_symmetric(const Fourier<T>& a, double tol) {
    double scale = 0;
    for (int k = -a.n_modes(); k <= a.n_modes(); ++k) scale = std::max(scale, norm_of(a.coeff(k)));
    for (int k = 0; k <= a.n_modes(); ++k) {
        T d = a.coeff(-k) - conj(a.coeff(k));
        if (norm_of(d) > tol * std::max(1.0, scale)) return false;
    }
    return true;
}

// Uniform sampling of one period; 4N+1 points resolve products of two
// N-truncated series without aliasing.
inline std::vector<double> time_grid(int n_modes, double period) {
    int m = 4 * n_modes + 1;
    std::vector<double> t(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) t[static_cast<std::size_t>(j)] = period * j / m;
    return t;
}

}  // namespace oseentp
