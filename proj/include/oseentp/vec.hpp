#pragma once

#include <array>
#include <cmath>
#include <complex>

// Small fixed-size real/complex linear algebra used throughout.
// Conventions:
//   - gradients stack the derivative index first: grad(i,j) = d_i F_j,
//     third-order tensors t[a](i,j) = d_a G_{ij};
//   - norm() of complex objects is the Frobenius norm (a real scalar).

namespace oseentp {

using cplx = std::complex<double>;

template <class T>
struct V3 {
    std::array<T, 3> v{};

    V3() = default;
    V3(T a, T b, T c) : v{a, b, c} {}
    template <class U>
    explicit V3(const V3<U>& o) : v{T(o.v[0]), T(o.v[1]), T(o.v[2])} {}

    T& operator[](int i) { return v[i]; }
    const T& operator[](int i) const { return v[i]; }

    V3& operator+=(const V3& o) {
        for (int i = 0; i < 3; ++i) v[i] += o.v[i];
        return *this;
    }
    V3& operator-=(const V3& o) {
        for (int i = 0; i < 3; ++i) v[i] -= o.v[i];
        return *this;
    }
    V3& operator*=(T s) {
        for (int i = 0; i < 3; ++i) v[i] *= s;
        return *this;
    }
};

template <class T>
struct M3 {
    std::array<T, 9> m{};

    T& operator()(int i, int j) { return m[3 * i + j]; }
    const T& operator()(int i, int j) const { return m[3 * i + j]; }

    M3() = default;
    template <class U>
    explicit M3(const M3<U>& o) {
        for (int i = 0; i < 9; ++i) m[i] = T(o.m[i]);
    }

    static M3 identity() {
        M3 r;
        r(0, 0) = r(1, 1) = r(2, 2) = T(1);
        return r;
    }

    M3& operator+=(const M3& o) {
        for (int i = 0; i < 9; ++i) m[i] += o.m[i];
        return *this;
    }
    M3& operator-=(const M3& o) {
        for (int i = 0; i < 9; ++i) m[i] -= o.m[i];
        return *this;
    }
    M3& operator*=(T s) {
        for (int i = 0; i < 9; ++i) m[i] *= s;
        return *this;
    }
};

// t[a](i,j) = d_a G_{ij}.
template <class T>
struct T3 {
    std::array<M3<T>, 3> t{};
    M3<T>& operator[](int a) { return t[a]; }
    const M3<T>& operator[](int a) const { return t[a]; }
};

using Vec3 = V3<double>;
using CVec3 = V3<cplx>;
using Mat3 = M3<double>;
using CMat3 = M3<cplx>;
using Ten3 = T3<double>;
using CTen3 = T3<cplx>;

template <class T>
V3<T> operator+(V3<T> a, const V3<T>& b) { return a += b; }
template <class T>
V3<T> operator-(V3<T> a, const V3<T>& b) { return a -= b; }
template <class T>
V3<T> operator-(const V3<T>& a) { return V3<T>{-a[0], -a[1], -a[2]}; }
template <class T>
V3<T> operator*(T s, V3<T> a) { return a *= s; }
template <class T>
V3<T> operator*(V3<T> a, T s) { return a *= s; }
inline CVec3 operator*(cplx s, const V3<double>& a) { return CVec3{s * a[0], s * a[1], s * a[2]}; }
inline CVec3 operator*(double s, CVec3 a) { return a *= cplx(s); }

template <class T>
M3<T> operator+(M3<T> a, const M3<T>& b) { return a += b; }
template <class T>
M3<T> operator-(M3<T> a, const M3<T>& b) { return a -= b; }
template <class T>
M3<T> operator*(T s, M3<T> a) { return a *= s; }
template <class T>
M3<T> operator*(M3<T> a, T s) { return a *= s; }
inline CMat3 operator*(cplx s, const Mat3& a) {
    CMat3 r;
    for (int i = 0; i < 9; ++i) r.m[i] = s * a.m[i];
    return r;
}
inline CMat3 operator*(double s, CMat3 a) { return a *= cplx(s); }

template <class T>
T3<T> operator+(T3<T> a, const T3<T>& b) {
    for (int d = 0; d < 3; ++d) a[d] += b[d];
    return a;
}
template <class T>
T3<T> operator-(T3<T> a, const T3<T>& b) {
    for (int d = 0; d < 3; ++d) a[d] -= b[d];
    return a;
}
template <class T>
T3<T> operator*(T s, T3<T> a) {
    for (int d = 0; d < 3; ++d) a[d] *= s;
    return a;
}

template <class T>
T dot(const V3<T>& a, const V3<T>& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline cplx dot(const Vec3& a, const CVec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline cplx dot(const CVec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return Vec3{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

template <class T>
M3<T> outer(const V3<T>& a, const V3<T>& b) {
    M3<T> r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r(i, j) = a[i] * b[j];
    return r;
}

template <class T>
V3<T> matvec(const M3<T>& m, const V3<T>& x) {
    V3<T> r;
    for (int i = 0; i < 3; ++i) r[i] = m(i, 0) * x[0] + m(i, 1) * x[1] + m(i, 2) * x[2];
    return r;
}
inline CVec3 matvec(const CMat3& m, const Vec3& x) { return matvec(m, CVec3(x)); }
inline CVec3 matvec(const Mat3& m, const CVec3& x) {
    CVec3 r;
    for (int i = 0; i < 3; ++i) r[i] = m(i, 0) * x[0] + m(i, 1) * x[1] + m(i, 2) * x[2];
    return r;
}

// Row vector times matrix: (x^T m)_j = x_i m(i,j).
template <class T>
V3<T> vecmat(const V3<T>& x, const M3<T>& m) {
    V3<T> r;
    for (int j = 0; j < 3; ++j) r[j] = x[0] * m(0, j) + x[1] * m(1, j) + x[2] * m(2, j);
    return r;
}
inline CVec3 vecmat(const CVec3& x, const Mat3& m) {
    CVec3 r;
    for (int j = 0; j < 3; ++j) r[j] = x[0] * m(0, j) + x[1] * m(1, j) + x[2] * m(2, j);
    return r;
}

template <class T>
M3<T> matmul(const M3<T>& a, const M3<T>& b) {
    M3<T> r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            T s{};
            for (int k = 0; k < 3; ++k) s += a(i, k) * b(k, j);
            r(i, j) = s;
        }
    return r;
}

template <class T>
M3<T> transpose(const M3<T>& a) {
    M3<T> r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r(i, j) = a(j, i);
    return r;
}

template <class T>
T trace(const M3<T>& a) { return a(0, 0) + a(1, 1) + a(2, 2); }

// Contract the derivative index: sum_a d_a * t[a].
template <class T>
M3<T> contract_first(const T3<T>& t, const V3<T>& d) {
    M3<T> r;
    for (int a = 0; a < 3; ++a) {
        M3<T> s = t[a];
        s *= d[a];
        r += s;
    }
    return r;
}
inline CMat3 contract_first(const CTen3& t, const Vec3& d) { return contract_first(t, CVec3(d)); }

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline double norm(const CVec3& a) {
    return std::sqrt(std::norm(a[0]) + std::norm(a[1]) + std::norm(a[2]));
}
inline double norm(const Mat3& a) {
    double s = 0;
    for (double x : a.m) s += x * x;
    return std::sqrt(s);
}
inline double norm(const CMat3& a) {
    double s = 0;
    for (const cplx& x : a.m) s += std::norm(x);
    return std::sqrt(s);
}
template <class T>
double norm(const T3<T>& t) {
    double s = 0;
    for (int d = 0; d < 3; ++d) {
        double n = norm(t[d]);
        s += n * n;
    }
    return std::sqrt(s);
}

inline Vec3 normalized(const Vec3& a) {
    double n = norm(a);
    return Vec3{a[0] / n, a[1] / n, a[2] / n};
}

inline CVec3 conj(const CVec3& a) { return CVec3{std::conj(a[0]), std::conj(a[1]), std::conj(a[2])}; }
inline CMat3 conj(const CMat3& a) {
    CMat3 r;
    for (int i = 0; i < 9; ++i) r.m[i] = std::conj(a.m[i]);
    return r;
}
inline CTen3 conj(const CTen3& t) {
    CTen3 r;
    for (int d = 0; d < 3; ++d) r[d] = conj(t[d]);
    return r;
}
inline cplx conj(const cplx& a) { return std::conj(a); }

inline Vec3 real(const CVec3& a) { return Vec3{a[0].real(), a[1].real(), a[2].real()}; }
inline Mat3 real(const CMat3& a) {
    Mat3 r;
    for (int i = 0; i < 9; ++i) r.m[i] = a.m[i].real();
    return r;
}

}  // namespace oseentp
