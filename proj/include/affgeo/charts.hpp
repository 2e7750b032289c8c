#pragma once

// Built-in charts. Sphere charts carry their embedding into R^{n+1}, whose
// last component is the height z used by the weight families.

#include <numbers>
#include <type_traits>

#include "affgeo/manifold.hpp"

namespace affgeo {

inline constexpr double kPi = std::numbers::pi;
// Default exclusion near coordinate singularities.
inline constexpr double kPoleMargin = 0.05;

template <int N>
ChartedManifold<N> euclidean_chart(double half_width = 2.0) {
  CoordinateBox<N> box;
  for (auto& a : box.axes) a = Axis{-half_width, half_width, false, 0.0};
  std::vector<ScalarField<N>> emb;
  for (int i = 0; i < N; ++i) emb.emplace_back([i](const auto& x) { return x[i]; });
  return ChartedManifold<N>("euclidean-" + std::to_string(N), box, MatrixField<N>([](const auto& x) {
                              using S = std::decay_t<decltype(x[0])>;
                              return Mat<S, N>::identity();
                            }),
                            std::move(emb));
}

// Constant diagonal metric, for frame tests.
template <int N>
ChartedManifold<N> constant_diagonal_chart(const Vec<double, N>& diag, double half_width = 1.0) {
  CoordinateBox<N> box;
  for (auto& a : box.axes) a = Axis{-half_width, half_width, false, 0.0};
  return ChartedManifold<N>("diagonal", box, MatrixField<N>([diag](const auto& x) {
                              using S = std::decay_t<decltype(x[0])>;
                              Mat<S, N> g = Mat<S, N>::zero();
                              for (int i = 0; i < N; ++i) g(i, i) = S(diag[i]);
                              return g;
                            }));
}

// Round sphere S^n of radius r in hyperspherical coordinates
// (x_0, ..., x_{n-2} ∈ [0, π], x_{n-1} ∈ [0, 2π) periodic).
// Metric: dx_0² + sin²x_0 dx_1² + ... ; embedding height z = r cos x_0.
template <int N>
ChartedManifold<N> round_sphere_chart(double radius = 1.0, double margin = kPoleMargin) {
  static_assert(N >= 2 && N <= 3, "round sphere charts for n = 2, 3");
  CoordinateBox<N> box;
  for (int i = 0; i + 1 < N; ++i) box.axes[i] = Axis{0.0, kPi, false, margin};
  box.axes[N - 1] = Axis{0.0, 2.0 * kPi, true, 0.0};

  MatrixField<N> metric([radius](const auto& x) {
    using S = std::decay_t<decltype(x[0])>;
    Mat<S, N> g = Mat<S, N>::zero();
    S w(radius * radius);
    for (int i = 0; i < N; ++i) {
      g(i, i) = w;
      const S s = sin(x[i]);
      w = w * s * s;
    }
    return g;
  });

  // Embedding components, ordered so the last one is the height z.
  std::vector<ScalarField<N>> emb;
  if constexpr (N == 2) {
    emb.emplace_back([radius](const auto& x) { return radius * sin(x[0]) * cos(x[1]); });
    emb.emplace_back([radius](const auto& x) { return radius * sin(x[0]) * sin(x[1]); });
    emb.emplace_back([radius](const auto& x) { return radius * cos(x[0]); });
  } else {
    emb.emplace_back([radius](const auto& x) { return radius * sin(x[0]) * sin(x[1]) * cos(x[2]); });
    emb.emplace_back([radius](const auto& x) { return radius * sin(x[0]) * sin(x[1]) * sin(x[2]); });
    emb.emplace_back([radius](const auto& x) { return radius * sin(x[0]) * cos(x[1]); });
    emb.emplace_back([radius](const auto& x) { return radius * cos(x[0]); });
  }
  return ChartedManifold<N>("sphere-" + std::to_string(N), box, std::move(metric), std::move(emb));
}

// Stereographic chart of the unit S² from the south pole: (s, t) ↦
// (2s, 2t, 1 - ρ²)/(1 + ρ²). The closed unit disk is the upper hemisphere;
// the metric 4/(1+ρ²)² δ is smooth there, unlike polar coordinates.
inline ChartedManifold<2> stereographic_sphere_chart(double half_width = 1.25) {
  CoordinateBox<2> box;
  for (auto& a : box.axes) a = Axis{-half_width, half_width, false, 0.0};
  MatrixField<2> metric([](const auto& x) {
    using S = std::decay_t<decltype(x[0])>;
    const S q = S(1.0) + x[0] * x[0] + x[1] * x[1];
    const S c = 4.0 / (q * q);
    Mat<S, 2> g = Mat<S, 2>::zero();
    g(0, 0) = c;
    g(1, 1) = c;
    return g;
  });
  std::vector<ScalarField<2>> emb;
  emb.emplace_back([](const auto& x) { return 2.0 * x[0] / (1.0 + x[0] * x[0] + x[1] * x[1]); });
  emb.emplace_back([](const auto& x) { return 2.0 * x[1] / (1.0 + x[0] * x[0] + x[1] * x[1]); });
  emb.emplace_back([](const auto& x) {
    const auto q = x[0] * x[0] + x[1] * x[1];
    return (1.0 - q) / (1.0 + q);
  });
  return ChartedManifold<2>("sphere-2-stereographic", box, std::move(metric), std::move(emb));
}

}  // namespace affgeo
