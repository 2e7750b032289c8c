#pragma once

// Affine gradient, Hessian and Laplacian of scalar fields for D = ∇^{u,α,β}.

#include <cmath>

#include "affgeo/connections.hpp"
#include "affgeo/curvature.hpp"

namespace affgeo {

// V^{β−α} ∇φ
template <int N>
Vec<double, N> grad_D(const ChartedManifold<N>& man, const WeightParams& p, const ScalarField<N>& phi,
                      const Vec<double, N>& x) {
  const MetricAt<N> m = eval_metric<N>(man, x);
  const double s = std::exp(-p.conformal() * man.u(x));
  Vec<double, N> g = m.inverse * gradient<double, N>(phi, x);
  for (auto& c : g) c *= s;
  return g;
}

// V^{β−α}(Hess φ + β(du⊗dφ + dφ⊗du) + α g(∇u, ∇φ) g)
template <int N>
Mat<double, N> hess_D_matrix(const ChartedManifold<N>& man, const WeightParams& p, const ScalarField<N>& phi,
                             const Vec<double, N>& x) {
  const MetricAt<N> m = eval_metric<N>(man, x);
  const Mat<double, N> hess = levi_civita_hessian<N>(man, phi, x);
  const Vec<double, N> du = gradient<double, N>(man.weight(), x);
  const Vec<double, N> dphi = gradient<double, N>(phi, x);
  const double cross = bilinear<double, N>(m.inverse, du, dphi);
  const double s = std::exp(-p.conformal() * man.u(x));
  Mat<double, N> out;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      out(i, j) =
          s * (hess(i, j) + p.beta * (du[i] * dphi[j] + dphi[i] * du[j]) + p.alpha * cross * m.g(i, j));
  return out;
}

template <int N>
TensorValue hess_D(const ChartedManifold<N>& man, const WeightParams& p, const ScalarField<N>& phi,
                   const Vec<double, N>& x) {
  return TensorValue::from_matrix<N>(hess_D_matrix<N>(man, p, phi, x), Slot::Lower, Slot::Lower);
}

// Laplace-Beltrami in divergence form, (1/√|g|) ∂_i(√|g| g^{ij} ∂_j φ).
template <int N>
double laplace_beltrami(const ChartedManifold<N>& man, const ScalarField<N>& phi, const Vec<double, N>& x) {
  man.require_admissible(x);
  double div = 0.0;
  for (int i = 0; i < N; ++i) {
    const auto xs = seed<double, N>(x, i);
    const Mat<D1, N> g = man.g(xs);
    const Mat<D1, N> gi = inverse<D1, N>(g);
    const D1 vol = sqrt(determinant<D1, N>(g));
    const Vec<D1, N> dphi = gradient<D1, N>(phi, xs);
    D1 flux(0.0);
    for (int j = 0; j < N; ++j) flux += vol * gi(i, j) * dphi[j];
    div += flux.d;
  }
  return div / std::sqrt(determinant<double, N>(man.g(x)));
}

// V^{β−α}(Δφ + (nα + 2β) g(∇u, ∇φ))
template <int N>
double lap_D(const ChartedManifold<N>& man, const WeightParams& p, const ScalarField<N>& phi,
             const Vec<double, N>& x) {
  const MetricAt<N> m = eval_metric<N>(man, x);
  const Vec<double, N> du = gradient<double, N>(man.weight(), x);
  const Vec<double, N> dphi = gradient<double, N>(phi, x);
  const double s = std::exp(-p.conformal() * man.u(x));
  return s * (laplace_beltrami<N>(man, phi, x) + (N * p.alpha + 2 * p.beta) * bilinear<double, N>(m.inverse, du, dphi));
}

// g^{ik} g^{jl} A_ij A_kl
template <int N>
double g_norm_squared(const Mat<double, N>& ginv, const Mat<double, N>& A) {
  const Mat<double, N> B = ginv * A * ginv;
  double s = 0.0;
  for (int i = 0; i < N * N; ++i) s += B.a[i] * A.a[i];
  return s;
}

}  // namespace affgeo
