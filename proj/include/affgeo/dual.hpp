#pragma once

// Forward-mode dual numbers. Nesting Dual<Dual<double>> gives exact mixed
// second derivatives, one seeded direction per level.

#include <cmath>
#include <type_traits>

namespace affgeo {

using std::abs;
using std::cos;
using std::exp;
using std::log;
using std::pow;
using std::sin;
using std::sqrt;
using std::tan;

template <class T>
struct Dual;

template <class T>
struct is_dual : std::false_type {};
template <class T>
struct is_dual<Dual<T>> : std::true_type {};
template <class T>
inline constexpr bool is_dual_v = is_dual<T>::value;

template <class T>
concept Arithmetic = std::is_arithmetic_v<T>;

template <class T>
struct Dual {
  T v{};
  T d{};

  constexpr Dual() = default;
  template <Arithmetic U>
  constexpr Dual(U x) : v(static_cast<double>(x)), d(0.0) {}  // NOLINT(implicit)
  constexpr Dual(const T& x)  // NOLINT(implicit)
    requires is_dual_v<T>
      : v(x), d(0.0) {}
  constexpr Dual(const T& value, const T& tangent) : v(value), d(tangent) {}

  constexpr Dual& operator+=(const Dual& o) {
    v += o.v;
    d += o.d;
    return *this;
  }
  constexpr Dual& operator-=(const Dual& o) {
    v -= o.v;
    d -= o.d;
    return *this;
  }
  constexpr Dual& operator*=(const Dual& o) {
    d = d * o.v + v * o.d;
    v *= o.v;
    return *this;
  }
  constexpr Dual& operator/=(const Dual& o) {
    *this = *this / o;
    return *this;
  }
};

using D1 = Dual<double>;
using D2 = Dual<D1>;
using D3 = Dual<D2>;

// Depth of nesting: 0 for double.
template <class T>
struct dual_depth : std::integral_constant<int, 0> {};
template <class T>
struct dual_depth<Dual<T>> : std::integral_constant<int, 1 + dual_depth<T>::value> {};

inline constexpr double primal(double x) { return x; }
template <class T>
constexpr double primal(const Dual<T>& x) {
  return primal(x.v);
}

template <class T>
constexpr Dual<T> operator-(const Dual<T>& a) {
  return {-a.v, -a.d};
}
template <class T>
constexpr Dual<T> operator+(const Dual<T>& a) {
  return a;
}

template <class T>
constexpr Dual<T> operator+(const Dual<T>& a, const Dual<T>& b) {
  return {a.v + b.v, a.d + b.d};
}
template <class T>
constexpr Dual<T> operator+(const Dual<T>& a, const std::type_identity_t<T>& b) {
  return {a.v + b, a.d};
}
template <class T>
constexpr Dual<T> operator+(const std::type_identity_t<T>& a, const Dual<T>& b) {
  return {a + b.v, b.d};
}

template <class T>
constexpr Dual<T> operator-(const Dual<T>& a, const Dual<T>& b) {
  return {a.v - b.v, a.d - b.d};
}
template <class T>
constexpr Dual<T> operator-(const Dual<T>& a, const std::type_identity_t<T>& b) {
  return {a.v - b, a.d};
}
template <class T>
constexpr Dual<T> operator-(const std::type_identity_t<T>& a, const Dual<T>& b) {
  return {a - b.v, -b.d};
}

template <class T>
constexpr Dual<T> operator*(const Dual<T>& a, const Dual<T>& b) {
  return {a.v * b.v, a.d * b.v + a.v * b.d};
}
template <class T>
constexpr Dual<T> operator*(const Dual<T>& a, const std::type_identity_t<T>& b) {
  return {a.v * b, a.d * b};
}
template <class T>
constexpr Dual<T> operator*(const std::type_identity_t<T>& a, const Dual<T>& b) {
  return {a * b.v, a * b.d};
}

template <class T>
constexpr Dual<T> operator/(const Dual<T>& a, const Dual<T>& b) {
  const T inv = T(1.0) / b.v;
  const T q = a.v * inv;
  return {q, (a.d - q * b.d) * inv};
}
template <class T>
constexpr Dual<T> operator/(const Dual<T>& a, const std::type_identity_t<T>& b) {
  const T inv = T(1.0) / b;
  return {a.v * inv, a.d * inv};
}
template <class T>
constexpr Dual<T> operator/(const std::type_identity_t<T>& a, const Dual<T>& b) {
  return Dual<T>(a, T(0.0)) / b;
}

template <class T>
constexpr bool operator<(const Dual<T>& a, const Dual<T>& b) {
  return primal(a) < primal(b);
}
template <class T>
constexpr bool operator>(const Dual<T>& a, const Dual<T>& b) {
  return primal(a) > primal(b);
}
template <class T, Arithmetic U>
constexpr bool operator<(const Dual<T>& a, U b) {
  return primal(a) < static_cast<double>(b);
}
template <class T, Arithmetic U>
constexpr bool operator>(const Dual<T>& a, U b) {
  return primal(a) > static_cast<double>(b);
}

template <class T>
Dual<T> sin(const Dual<T>& x) {
  return {sin(x.v), x.d * cos(x.v)};
}
template <class T>
Dual<T> cos(const Dual<T>& x) {
  return {cos(x.v), -(x.d * sin(x.v))};
}
template <class T>
Dual<T> tan(const Dual<T>& x) {
  const T t = tan(x.v);
  return {t, x.d * (T(1.0) + t * t)};
}
template <class T>
Dual<T> exp(const Dual<T>& x) {
  const T e = exp(x.v);
  return {e, x.d * e};
}
template <class T>
Dual<T> log(const Dual<T>& x) {
  return {log(x.v), x.d / x.v};
}
template <class T>
Dual<T> sqrt(const Dual<T>& x) {
  const T s = sqrt(x.v);
  return {s, x.d / (2.0 * s)};
}
template <class T>
Dual<T> pow(const Dual<T>& x, double p) {
  return {pow(x.v, p), x.d * (p * pow(x.v, p - 1.0))};
}
template <class T>
Dual<T> abs(const Dual<T>& x) {
  return primal(x) < 0.0 ? -x : x;
}

// Integer power by repeated multiplication; valid for negative bases.
template <class S>
S ipow(const S& x, int k) {
  if (k < 0) return S(1.0) / ipow(x, -k);
  S r(1.0);
  S b = x;
  while (k > 0) {
    if (k & 1) r = r * b;
    b = b * b;
    k >>= 1;
  }
  return r;
}

}  // namespace affgeo
