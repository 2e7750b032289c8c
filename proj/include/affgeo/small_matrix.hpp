#pragma once

// Fixed-size dense vectors and matrices over an arbitrary scalar type, so the
// same code runs on doubles and on nested dual numbers.

#include <algorithm>
#include <array>
#include <cmath>
#include <type_traits>
#include <utility>

#include "affgeo/dual.hpp"
#include "affgeo/errors.hpp"

namespace affgeo {

template <class S, int N>
using Vec = std::array<S, N>;

template <class S, int N>
struct Mat {
  std::array<S, N * N> a{};

  constexpr S& operator()(int i, int j) { return a[i * N + j]; }
  constexpr const S& operator()(int i, int j) const { return a[i * N + j]; }

  static Mat zero() {
    Mat m;
    m.a.fill(S(0.0));
    return m;
  }
  static Mat identity() {
    Mat m = zero();
    for (int i = 0; i < N; ++i) m(i, i) = S(1.0);
    return m;
  }
};

template <class S, int N>
Vec<S, N> zero_vec() {
  Vec<S, N> v;
  v.fill(S(0.0));
  return v;
}

template <class S, int N>
Vec<S, N> unit_vec(int i) {
  Vec<S, N> v = zero_vec<S, N>();
  v[i] = S(1.0);
  return v;
}

template <class S, int N>
Mat<S, N> transpose(const Mat<S, N>& m) {
  Mat<S, N> t;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) t(i, j) = m(j, i);
  return t;
}

template <class S, int N>
Mat<S, N> operator*(const Mat<S, N>& x, const Mat<S, N>& y) {
  Mat<S, N> r = Mat<S, N>::zero();
  for (int i = 0; i < N; ++i)
    for (int k = 0; k < N; ++k)
      for (int j = 0; j < N; ++j) r(i, j) += x(i, k) * y(k, j);
  return r;
}

template <class S, int N>
Vec<S, N> operator*(const Mat<S, N>& m, const std::type_identity_t<Vec<S, N>>& v) {
  Vec<S, N> r = zero_vec<S, N>();
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) r[i] += m(i, j) * v[j];
  return r;
}

template <class S, int N>
S dot(const Vec<S, N>& x, const Vec<S, N>& y) {
  S r(0.0);
  for (int i = 0; i < N; ++i) r += x[i] * y[i];
  return r;
}

// x^T m y
template <class S, int N>
S bilinear(const Mat<S, N>& m, const Vec<S, N>& x, const Vec<S, N>& y) {
  S r(0.0);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) r += m(i, j) * x[i] * y[j];
  return r;
}

// Gaussian elimination with partial pivoting on the primal part.
template <class S, int N>
S determinant(Mat<S, N> m) {
  S det(1.0);
  for (int c = 0; c < N; ++c) {
    int piv = c;
    for (int r = c + 1; r < N; ++r)
      if (std::abs(primal(m(r, c))) > std::abs(primal(m(piv, c)))) piv = r;
    if (primal(m(piv, c)) == 0.0) return S(0.0);
    if (piv != c) {
      for (int j = 0; j < N; ++j) std::swap(m(piv, j), m(c, j));
      det = -det;
    }
    det = det * m(c, c);
    for (int r = c + 1; r < N; ++r) {
      const S f = m(r, c) / m(c, c);
      for (int j = c; j < N; ++j) m(r, j) -= f * m(c, j);
    }
  }
  return det;
}

template <class S, int N>
Mat<S, N> inverse(Mat<S, N> m) {
  Mat<S, N> inv = Mat<S, N>::identity();
  for (int c = 0; c < N; ++c) {
    int piv = c;
    for (int r = c + 1; r < N; ++r)
      if (std::abs(primal(m(r, c))) > std::abs(primal(m(piv, c)))) piv = r;
    if (primal(m(piv, c)) == 0.0) throw Error(ErrorKind::MetricNotSPD, "singular matrix");
    if (piv != c) {
      for (int j = 0; j < N; ++j) {
        std::swap(m(piv, j), m(c, j));
        std::swap(inv(piv, j), inv(c, j));
      }
    }
    const S p = S(1.0) / m(c, c);
    for (int j = 0; j < N; ++j) {
      m(c, j) = m(c, j) * p;
      inv(c, j) = inv(c, j) * p;
    }
    for (int r = 0; r < N; ++r) {
      if (r == c) continue;
      const S f = m(r, c);
      for (int j = 0; j < N; ++j) {
        m(r, j) -= f * m(c, j);
        inv(r, j) -= f * inv(c, j);
      }
    }
  }
  return inv;
}

// Lower-triangular L with m = L L^T; returns false if m is not positive definite.
template <int N>
bool cholesky(const Mat<double, N>& m, Mat<double, N>& L) {
  L = Mat<double, N>::zero();
  for (int j = 0; j < N; ++j) {
    double s = m(j, j);
    for (int k = 0; k < j; ++k) s -= L(j, k) * L(j, k);
    if (!(s > 0.0)) return false;
    L(j, j) = std::sqrt(s);
    for (int i = j + 1; i < N; ++i) {
      double t = m(i, j);
      for (int k = 0; k < j; ++k) t -= L(i, k) * L(j, k);
      L(i, j) = t / L(j, j);
    }
  }
  return true;
}

template <int N>
Mat<double, N> primal(const Mat<double, N>& m) {
  return m;
}
template <class S, int N>
  requires is_dual_v<S>
Mat<double, N> primal(const Mat<S, N>& m) {
  Mat<double, N> r;
  for (int i = 0; i < N * N; ++i) r.a[i] = primal(m.a[i]);
  return r;
}

template <class S, std::size_t N>
std::array<double, N> primal(const std::array<S, N>& v) {
  std::array<double, N> r;
  for (std::size_t i = 0; i < N; ++i) r[i] = primal(v[i]);
  return r;
}

template <int N>
double max_abs_diff(const Mat<double, N>& x, const Mat<double, N>& y) {
  double r = 0.0;
  for (int i = 0; i < N * N; ++i) r = std::max(r, std::abs(x.a[i] - y.a[i]));
  return r;
}

template <int N>
double asymmetry(const Mat<double, N>& m) {
  double r = 0.0;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) r = std::max(r, std::abs(m(i, j) - m(j, i)));
  return r;
}

template <int N>
Mat<double, N> symmetric_part(const Mat<double, N>& m) {
  Mat<double, N> s;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) s(i, j) = 0.5 * (m(i, j) + m(j, i));
  return s;
}

}  // namespace affgeo
