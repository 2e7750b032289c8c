#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "affgeo/errors.hpp"
#include "affgeo/field.hpp"
#include "affgeo/halton.hpp"
#include "affgeo/small_matrix.hpp"
#include "affgeo/tensor.hpp"

namespace affgeo {

struct Axis {
  double lower = 0.0;
  double upper = 1.0;
  bool periodic = false;
  // Fraction of the axis length excluded at each end (non-periodic axes only).
  double margin = 0.0;

  double admissible_lower() const { return periodic ? lower : lower + margin * (upper - lower); }
  double admissible_upper() const { return periodic ? upper : upper - margin * (upper - lower); }
};

template <int N>
struct CoordinateBox {
  std::array<Axis, N> axes{};

  bool admissible(const Vec<double, N>& x) const {
    for (int i = 0; i < N; ++i) {
      const Axis& a = axes[i];
      if (a.periodic) continue;
      if (!(x[i] >= a.admissible_lower() && x[i] <= a.admissible_upper())) return false;
    }
    return true;
  }

  // Map a unit-cube point into the admissible box.
  Vec<double, N> from_unit(const std::array<double, N>& t) const {
    Vec<double, N> x;
    for (int i = 0; i < N; ++i) {
      const Axis& a = axes[i];
      x[i] = a.admissible_lower() + t[i] * (a.admissible_upper() - a.admissible_lower());
    }
    return x;
  }
};

// A single coordinate chart carrying a metric g and a weight function u.
// `embedding` optionally lists the components of an embedding into a
// Euclidean space; weight families written in ambient coordinates use it.
template <int N>
class ChartedManifold {
 public:
  static_assert(N >= 1 && N <= 4, "charts of dimension 1..4 are supported");
  static constexpr int dim = N;

  ChartedManifold() = default;
  ChartedManifold(std::string name, CoordinateBox<N> box, MatrixField<N> metric,
                  std::vector<ScalarField<N>> embedding = {})
      : name_(std::move(name)),
        box_(box),
        metric_(std::move(metric)),
        weight_(constant_field<N>(0.0)),
        embedding_(std::move(embedding)) {}

  const std::string& name() const { return name_; }
  const CoordinateBox<N>& box() const { return box_; }
  const MatrixField<N>& metric() const { return metric_; }
  const ScalarField<N>& weight() const { return weight_; }
  const std::vector<ScalarField<N>>& embedding() const { return embedding_; }
  int embedding_dim() const { return static_cast<int>(embedding_.size()); }

  ChartedManifold with_weight(ScalarField<N> u) const {
    ChartedManifold m = *this;
    m.weight_ = std::move(u);
    return m;
  }

  void require_admissible(const Vec<double, N>& x) const {
    if (!box_.admissible(x)) throw Error(ErrorKind::PointOutOfDomain, "point outside admissible box of " + name_);
  }

  template <class S>
  Mat<S, N> g(const Vec<S, N>& x) const {
    return metric_(x);
  }
  template <class S>
  S u(const Vec<S, N>& x) const {
    return weight_(x);
  }

 private:
  std::string name_;
  CoordinateBox<N> box_{};
  MatrixField<N> metric_;
  ScalarField<N> weight_;
  std::vector<ScalarField<N>> embedding_;
};

template <int N>
struct MetricAt {
  Mat<double, N> g;
  Mat<double, N> inverse;
  double sqrt_det;

  TensorValue tensor() const { return TensorValue::from_matrix<N>(g, Slot::Lower, Slot::Lower); }
  TensorValue inverse_tensor() const { return TensorValue::from_matrix<N>(inverse, Slot::Upper, Slot::Upper); }
};

template <int N>
void require_spd(const Mat<double, N>& g) {
  Mat<double, N> L;
  if (asymmetry<N>(g) > 1e-12 * (1.0 + std::abs(g(0, 0))) || !cholesky<N>(g, L))
    throw Error(ErrorKind::MetricNotSPD, "metric is not symmetric positive definite");
}

template <int N>
MetricAt<N> eval_metric(const ChartedManifold<N>& man, const Vec<double, N>& x) {
  man.require_admissible(x);
  const Mat<double, N> g = man.g(x);
  require_spd<N>(g);
  return {g, inverse<double, N>(g), std::sqrt(determinant<double, N>(g))};
}

// Columns E_1..E_n: Gram-Schmidt of the coordinate basis in axis order.
template <int N>
struct FramePoint {
  Vec<double, N> point;
  Mat<double, N> frame;

  Vec<double, N> column(int i) const {
    Vec<double, N> c;
    for (int k = 0; k < N; ++k) c[k] = frame(k, i);
    return c;
  }
};

template <int N>
FramePoint<N> orthonormal_frame_of(const Mat<double, N>& g, const Vec<double, N>& x) {
  require_spd<N>(g);
  FramePoint<N> f{x, Mat<double, N>::zero()};
  for (int i = 0; i < N; ++i) {
    Vec<double, N> v = unit_vec<double, N>(i);
    // modified Gram-Schmidt, repeated once for stability
    for (int pass = 0; pass < 2; ++pass)
      for (int j = 0; j < i; ++j) {
        const Vec<double, N> e = f.column(j);
        const double c = bilinear<double, N>(g, v, e);
        for (int k = 0; k < N; ++k) v[k] -= c * e[k];
      }
    const double nrm = std::sqrt(bilinear<double, N>(g, v, v));
    for (int k = 0; k < N; ++k) f.frame(k, i) = v[k] / nrm;
  }
  return f;
}

template <int N>
FramePoint<N> orthonormal_frame(const ChartedManifold<N>& man, const Vec<double, N>& x) {
  man.require_admissible(x);
  return orthonormal_frame_of<N>(man.g(x), x);
}

template <int N>
double frame_residual(const FramePoint<N>& f, const Mat<double, N>& g) {
  double r = 0.0;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      r = std::max(r, std::abs(bilinear<double, N>(g, f.column(i), f.column(j)) - (i == j ? 1.0 : 0.0)));
  return r;
}

// Low-discrepancy admissible sample points (Halton indices 1..count).
template <int N>
std::vector<Vec<double, N>> sample_points(const CoordinateBox<N>& box, int count, int prime_offset = 0) {
  std::vector<Vec<double, N>> pts;
  pts.reserve(count);
  for (int i = 1; i <= count; ++i) pts.push_back(box.from_unit(halton<N>(static_cast<std::uint64_t>(i), prime_offset)));
  return pts;
}

template <int N>
std::vector<Vec<double, N>> sample_points(const ChartedManifold<N>& man, int count) {
  return sample_points<N>(man.box(), count);
}

// Metric, its first derivatives, and the weight with its gradient, at a point
// of scalar type S. Derivatives come from one extra dual-number level.
template <class S, int N>
struct GeometryAt {
  Mat<S, N> g;
  Mat<S, N> ginv;
  std::array<Mat<S, N>, N> dg;  // dg[k](i,j) = ∂_k g_ij
  S u;
  Vec<S, N> du;
};

template <class S, int N>
GeometryAt<S, N> geometry_at(const ChartedManifold<N>& man, const Vec<S, N>& x) {
  GeometryAt<S, N> G;
  for (int k = 0; k < N; ++k) {
    const auto xs = seed<S, N>(x, k);
    const Mat<Dual<S>, N> gk = man.g(xs);
    if (k == 0) G.g = value_of<S, N>(gk);
    G.dg[k] = tangent<S, N>(gk);
    const Dual<S> uk = man.u(xs);
    if (k == 0) G.u = uk.v;
    G.du[k] = uk.d;
  }
  G.ginv = inverse<S, N>(G.g);
  return G;
}

}  // namespace affgeo
