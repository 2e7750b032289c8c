#pragma once

// Closed-form weight families. Sphere families are written in the ambient
// embedding coordinates, so the same u can be evaluated in any chart of the
// sphere and on vertices of an embedded mesh.

#include <functional>
#include <span>
#include <string>

#include "affgeo/errors.hpp"
#include "affgeo/manifold.hpp"

namespace affgeo {

struct WeightSpec {
  // "zero" | "const" | "zpow" (a z^k, z the last embedding coordinate) |
  // "coord" (a y_axis) | "radial" (a |y|²/2)
  std::string family = "zero";
  double a = 0.0;
  int k = 1;
  int axis = 0;

  bool is_constant() const { return family == "zero" || family == "const" || a == 0.0; }
};

inline void validate(const WeightSpec& w, int embedding_dim) {
  if (w.family == "zero" || w.family == "const" || w.family == "radial") return;
  if (w.family == "zpow") {
    if (w.k < 0) throw Error(ErrorKind::ConfigInvalid, "zpow weight needs k >= 0");
    return;
  }
  if (w.family == "coord") {
    if (w.axis < 0 || w.axis >= embedding_dim) throw Error(ErrorKind::ConfigInvalid, "coord weight axis out of range");
    return;
  }
  throw Error(ErrorKind::ConfigInvalid, "unknown weight family '" + w.family + "'");
}

// u as a function on the embedding space (used on mesh vertices).
using AmbientFunction = std::function<double(std::span<const double>)>;

inline AmbientFunction ambient_weight(const WeightSpec& w) {
  const double a = w.a;
  const int k = w.k;
  const int axis = w.axis;
  if (w.family == "zero") return [](std::span<const double>) { return 0.0; };
  if (w.family == "const") return [a](std::span<const double>) { return a; };
  if (w.family == "zpow") return [a, k](std::span<const double> y) { return a * ipow(y.back(), k); };
  if (w.family == "coord") return [a, axis](std::span<const double> y) { return a * y[axis]; };
  if (w.family == "radial")
    return [a](std::span<const double> y) {
      double r = 0.0;
      for (double c : y) r += c * c;
      return 0.5 * a * r;
    };
  throw Error(ErrorKind::ConfigInvalid, "unknown weight family '" + w.family + "'");
}

// u pulled back to a chart through its embedding.
template <int N>
ScalarField<N> chart_weight(const WeightSpec& w, const ChartedManifold<N>& chart) {
  validate(w, chart.embedding_dim());
  if (w.family == "zero") return constant_field<N>(0.0);
  if (w.family == "const") return constant_field<N>(w.a);
  if (chart.embedding().empty()) throw Error(ErrorKind::ConfigInvalid, "chart has no embedding for weight family");
  const double a = w.a;
  const int k = w.k;
  if (w.family == "zpow") {
    ScalarField<N> z = chart.embedding().back();
    return ScalarField<N>([a, k, z](const auto& x) { return a * ipow(z(x), k); });
  }
  if (w.family == "coord") {
    ScalarField<N> y = chart.embedding()[w.axis];
    return ScalarField<N>([a, y](const auto& x) { return a * y(x); });
  }
  // radial
  auto emb = chart.embedding();
  return ScalarField<N>([a, emb](const auto& x) {
    using S = std::decay_t<decltype(x[0])>;
    S r(0.0);
    for (const auto& c : emb) {
      const S v = c(x);
      r += v * v;
    }
    return 0.5 * a * r;
  });
}

template <int N>
ChartedManifold<N> with_weight(const ChartedManifold<N>& chart, const WeightSpec& w) {
  return chart.with_weight(chart_weight<N>(w, chart));
}

}  // namespace affgeo
