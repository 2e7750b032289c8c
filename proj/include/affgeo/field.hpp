#pragma once

// Closed-form fields that can be evaluated on doubles and on dual numbers
// nested up to depth three. A field is built from one generic lambda; the
// wrapper instantiates it for every supported scalar type.

#include <functional>
#include <span>
#include <stdexcept>
#include <tuple>
#include <type_traits>
#include <utility>

#include "affgeo/dual.hpp"
#include "affgeo/errors.hpp"
#include "affgeo/small_matrix.hpp"

namespace affgeo {

template <int N>
struct PointOf {
  template <class S>
  using type = Vec<S, N>;
};
template <int N>
struct MatOf {
  template <class S>
  using type = Mat<S, N>;
};
template <class S>
using Self = S;

template <template <class> class Arg, template <class> class Ret>
class Lifted {
  template <class S>
  using Fn = std::function<Ret<S>(const Arg<S>&)>;

 public:
  Lifted() = default;

  template <class F, class = std::enable_if_t<!std::is_same_v<std::decay_t<F>, Lifted>>>
  explicit Lifted(F f) : fns_{wrap<double>(f), wrap<D1>(f), wrap<D2>(f), wrap<D3>(f)} {}

  template <class S>
  Ret<S> operator()(const Arg<S>& x) const {
    return std::get<Fn<S>>(fns_)(x);
  }

  explicit operator bool() const { return static_cast<bool>(std::get<0>(fns_)); }

 private:
  template <class S, class F>
  static Fn<S> wrap(const F& f) {
    return [f](const Arg<S>& x) -> Ret<S> { return Ret<S>(f(x)); };
  }

  std::tuple<Fn<double>, Fn<D1>, Fn<D2>, Fn<D3>> fns_;
};

template <int N>
using ScalarField = Lifted<PointOf<N>::template type, Self>;
template <int N>
using VectorField = Lifted<PointOf<N>::template type, PointOf<N>::template type>;
template <int N>
using MatrixField = Lifted<PointOf<N>::template type, MatOf<N>::template type>;
template <int In, int Out>
using MapField = Lifted<PointOf<In>::template type, PointOf<Out>::template type>;

template <int N>
ScalarField<N> constant_field(double c) {
  return ScalarField<N>([c](const auto&) { return c; });
}

template <int N>
VectorField<N> constant_vector_field(const Vec<double, N>& v) {
  return VectorField<N>([v](const auto& x) {
    using S = std::decay_t<decltype(x[0])>;
    Vec<S, N> r;
    for (int i = 0; i < N; ++i) r[i] = S(v[i]);
    return r;
  });
}

// Lift a double point into Dual<S> coordinates seeded along axis `dir`.
template <class S, int N>
Vec<Dual<S>, N> seed(const Vec<S, N>& x, int dir) {
  Vec<Dual<S>, N> r;
  for (int i = 0; i < N; ++i) r[i] = Dual<S>(x[i], S(i == dir ? 1.0 : 0.0));
  return r;
}

template <class S, int N>
Vec<S, N> tangent(const Vec<Dual<S>, N>& v) {
  Vec<S, N> r;
  for (int i = 0; i < N; ++i) r[i] = v[i].d;
  return r;
}

template <class S>
S tangent(const Dual<S>& v) {
  return v.d;
}

template <class S, int N>
Mat<S, N> tangent(const Mat<Dual<S>, N>& m) {
  Mat<S, N> r;
  for (int i = 0; i < N * N; ++i) r.a[i] = m.a[i].d;
  return r;
}

template <class S, int N>
Vec<S, N> value_of(const Vec<Dual<S>, N>& v) {
  Vec<S, N> r;
  for (int i = 0; i < N; ++i) r[i] = v[i].v;
  return r;
}

template <class S, int N>
Mat<S, N> value_of(const Mat<Dual<S>, N>& m) {
  Mat<S, N> r;
  for (int i = 0; i < N * N; ++i) r.a[i] = m.a[i].v;
  return r;
}

// Gradient of a scalar callable at a point of scalar type S; f must accept
// Vec<Dual<S>,N>.
template <class S, int N, class F>
Vec<S, N> gradient(const F& f, const Vec<S, N>& x) {
  Vec<S, N> g;
  for (int i = 0; i < N; ++i) g[i] = f(seed<S, N>(x, i)).d;
  return g;
}

// Value, gradient and Hessian of a scalar callable at a double point.
template <int N>
struct Jet2 {
  double value;
  Vec<double, N> grad;
  Mat<double, N> hess;
};

template <int N, class F>
Jet2<N> jet2(const F& f, const Vec<double, N>& x) {
  Jet2<N> j{};
  for (int i = 0; i < N; ++i) {
    auto xi = seed<double, N>(x, i);
    Vec<D2, N> xx;
    for (int k = 0; k < N; ++k) xx[k] = D2(xi[k], D1(0.0));
    for (int k = 0; k < N; ++k) {
      for (int m = 0; m < N; ++m) xx[m].d = D1(m == k ? 1.0 : 0.0, 0.0);
      const D2 r = f(xx);
      j.hess(k, i) = r.d.d;
      if (k == 0) {
        j.value = r.v.v;
        j.grad[i] = r.v.d;
      }
    }
  }
  return j;
}

namespace detail {

template <int K>
struct DepthType;
template <>
struct DepthType<0> {
  using type = double;
};
template <>
struct DepthType<1> {
  using type = D1;
};
template <>
struct DepthType<2> {
  using type = D2;
};
template <>
struct DepthType<3> {
  using type = D3;
};

// Coordinate value x at depth K with seeds dirs[0..K-1]; level k differentiates along dirs[k-1].
template <int K>
typename DepthType<K>::type lift_coord(double x, int coord, const int* dirs) {
  if constexpr (K == 0) {
    return x;
  } else {
    using Inner = typename DepthType<K - 1>::type;
    const Inner v = lift_coord<K - 1>(x, coord, dirs);
    const Inner d = Inner(coord == dirs[K - 1] ? 1.0 : 0.0);
    return typename DepthType<K>::type(v, d);
  }
}

template <int K>
double extract(const typename DepthType<K>::type& r) {
  if constexpr (K == 0) {
    return r;
  } else {
    return extract<K - 1>(r.d);
  }
}

template <int K, int N>
double derivative_at_depth(const ScalarField<N>& f, const Vec<double, N>& x, const int* dirs) {
  using S = typename DepthType<K>::type;
  Vec<S, N> xs;
  for (int i = 0; i < N; ++i) xs[i] = lift_coord<K>(x[i], i, dirs);
  return extract<K>(f(xs));
}

}  // namespace detail

// Exact partial derivative ∂_{i1}...∂_{ik} f(x) through nested dual numbers, k ≤ 3.
template <int N>
double derivative(const ScalarField<N>& f, const Vec<double, N>& x, std::span<const int> multi_index) {
  const std::size_t k = multi_index.size();
  for (int i : multi_index)
    if (i < 0 || i >= N) throw std::out_of_range("derivative: axis index out of range");
  switch (k) {
    case 0: return f(x);
    case 1: return detail::derivative_at_depth<1, N>(f, x, multi_index.data());
    case 2: return detail::derivative_at_depth<2, N>(f, x, multi_index.data());
    case 3: return detail::derivative_at_depth<3, N>(f, x, multi_index.data());
    default: throw Error(ErrorKind::OrderUnsupported, "derivative order > 3");
  }
}

template <int N>
double derivative(const ScalarField<N>& f, const Vec<double, N>& x, std::initializer_list<int> idx) {
  return derivative<N>(f, x, std::span<const int>(idx.begin(), idx.size()));
}

// Fourth-order central finite differences, nested per index. Independent of
// the dual-number path; used as a cross-check.
template <int N>
double fd_derivative(const ScalarField<N>& f, const Vec<double, N>& x, std::span<const int> multi_index,
                     double h = 1e-3) {
  if (multi_index.size() > 3) throw Error(ErrorKind::OrderUnsupported, "derivative order > 3");
  if (multi_index.empty()) return f(x);
  const int axis = multi_index.front();
  const auto rest = multi_index.subspan(1);
  auto at = [&](double off) {
    Vec<double, N> y = x;
    y[axis] += off;
    return fd_derivative<N>(f, y, rest, h);
  };
  return (-at(2 * h) + 8 * at(h) - 8 * at(-h) + at(-2 * h)) / (12 * h);
}

template <int N>
double fd_derivative(const ScalarField<N>& f, const Vec<double, N>& x, std::initializer_list<int> idx,
                     double h = 1e-3) {
  return fd_derivative<N>(f, x, std::span<const int>(idx.begin(), idx.size()), h);
}

}  // namespace affgeo
