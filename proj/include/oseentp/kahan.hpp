#pragma once

#include <cmath>

#include "oseentp/vec.hpp"

// Neumaier compensated summation. Quadrature loops accumulate in fixed index
// order through these, so results are bitwise reproducible regardless of the
// thread count used for the outer (per-evaluation-point) parallelism.

namespace oseentp {

template <class T>
class NeumaierSum;

template <>
class NeumaierSum<double> {
  public:
    void add(double v) {
        double t = s_ + v;
        c_ += (std::fabs(s_) >= std::fabs(v)) ? (s_ - t) + v : (v - t) + s_;
        s_ = t;
    }
    double value() const { return s_ + c_; }

  private:
    double s_ = 0.0;
    double c_ = 0.0;
};

template <>
class NeumaierSum<cplx> {
  public:
    void add(const cplx& v) {
        re_.add(v.real());
        im_.add(v.imag());
    }
    cplx value() const { return {re_.value(), im_.value()}; }

  private:
    NeumaierSum<double> re_, im_;
};

template <class T>
class NeumaierSum<V3<T>> {
  public:
    void add(const V3<T>& v) {
        for (int i = 0; i < 3; ++i) c_[i].add(v[i]);
    }
    V3<T> value() const { return {c_[0].value(), c_[1].value(), c_[2].value()}; }

  private:
    NeumaierSum<T> c_[3];
};

template <class T>
class NeumaierSum<M3<T>> {
  public:
    void add(const M3<T>& v) {
        for (int i = 0; i < 9; ++i) c_[i].add(v.m[i]);
    }
    M3<T> value() const {
        M3<T> r;
        for (int i = 0; i < 9; ++i) r.m[i] = c_[i].value();
        return r;
    }

  private:
    NeumaierSum<T> c_[9];
};

}  // namespace oseentp
