#pragma once

// Riemann and Ricci curvature of a connection-coefficient field, the static
// and N-weighted Ricci tensors, and the scan for the best curvature constant.
//
// Convention: R(∂_i, ∂_j)∂_k = R^l_{kij} ∂_l and Ric_{jk} = R^i_{kij}.

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <vector>

#include "affgeo/connections.hpp"
#include "affgeo/parallel.hpp"

namespace affgeo {

template <int N>
struct RiemannArray {
  std::array<double, N * N * N * N> r{};

  double& operator()(int l, int k, int i, int j) { return r[((l * N + k) * N + i) * N + j]; }
  double operator()(int l, int k, int i, int j) const { return r[((l * N + k) * N + i) * N + j]; }
};

template <int N>
RiemannArray<N> riemann_components(const ConnectionSpec& spec, const ChartedManifold<N>& man,
                                   const Vec<double, N>& x) {
  man.require_admissible(x);
  // dgam[i] = ∂_i Γ; the primal part of any seeded evaluation is Γ itself.
  std::array<Gamma<double, N>, N> dgam;
  Gamma<double, N> gam;
  for (int i = 0; i < N; ++i) {
    const auto gi = coefficients<D1, N>(spec, man, seed<double, N>(x, i));
    for (int k = 0; k < N; ++k) {
      dgam[i][k] = tangent<double, N>(gi[k]);
      if (i == 0) gam[k] = value_of<double, N>(gi[k]);
    }
  }
  RiemannArray<N> R;
  for (int l = 0; l < N; ++l)
    for (int k = 0; k < N; ++k)
      for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
          double s = dgam[i][l](j, k) - dgam[j][l](i, k);
          for (int m = 0; m < N; ++m) s += gam[l](i, m) * gam[m](j, k) - gam[l](j, m) * gam[m](i, k);
          R(l, k, i, j) = s;
        }
  return R;
}

template <int N>
TensorValue riemann_tensor(const ConnectionSpec& spec, const ChartedManifold<N>& man, const Vec<double, N>& x) {
  const auto R = riemann_components<N>(spec, man, x);
  TensorValue t(N, {Slot::Upper, Slot::Lower, Slot::Lower, Slot::Lower});
  std::copy(R.r.begin(), R.r.end(), t.entries().begin());
  return t;
}

// R(X,Y)Z
template <int N>
Vec<double, N> apply_riemann(const RiemannArray<N>& R, const Vec<double, N>& X, const Vec<double, N>& Y,
                             const Vec<double, N>& Z) {
  Vec<double, N> out = zero_vec<double, N>();
  for (int l = 0; l < N; ++l)
    for (int k = 0; k < N; ++k)
      for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) out[l] += R(l, k, i, j) * X[i] * Y[j] * Z[k];
  return out;
}

template <int N>
Mat<double, N> ricci_of(const RiemannArray<N>& R) {
  Mat<double, N> ric = Mat<double, N>::zero();
  for (int j = 0; j < N; ++j)
    for (int k = 0; k < N; ++k)
      for (int i = 0; i < N; ++i) ric(j, k) += R(i, k, i, j);
  return ric;
}

template <int N>
Mat<double, N> ricci_matrix(const ConnectionSpec& spec, const ChartedManifold<N>& man, const Vec<double, N>& x) {
  return ricci_of<N>(riemann_components<N>(spec, man, x));
}

template <int N>
TensorValue ricci_tensor(const ConnectionSpec& spec, const ChartedManifold<N>& man, const Vec<double, N>& x) {
  return TensorValue::from_matrix<N>(ricci_matrix<N>(spec, man, x), Slot::Lower, Slot::Lower);
}

// Σ_a g(R(E_a, ∂_j)∂_k, E_a) over a g-orthonormal frame.
template <int N>
Mat<double, N> ricci_frame_sum(const ConnectionSpec& spec, const ChartedManifold<N>& man, const Vec<double, N>& x) {
  const auto R = riemann_components<N>(spec, man, x);
  const Mat<double, N> g = man.g(x);
  const auto F = orthonormal_frame_of<N>(g, x);
  Mat<double, N> ric = Mat<double, N>::zero();
  for (int j = 0; j < N; ++j)
    for (int k = 0; k < N; ++k)
      for (int a = 0; a < N; ++a) {
        const Vec<double, N> E = F.column(a);
        const Vec<double, N> v = apply_riemann<N>(R, E, unit_vec<double, N>(j), unit_vec<double, N>(k));
        ric(j, k) += bilinear<double, N>(g, v, E);
      }
  return ric;
}

template <int N>
double sectional_curvature(const ConnectionSpec& spec, const ChartedManifold<N>& man, const Vec<double, N>& x,
                           const Vec<double, N>& X, const Vec<double, N>& Y) {
  const auto R = riemann_components<N>(spec, man, x);
  const Mat<double, N> g = man.g(x);
  const double area = bilinear<double, N>(g, X, X) * bilinear<double, N>(g, Y, Y) -
                      std::pow(bilinear<double, N>(g, X, Y), 2);
  return bilinear<double, N>(g, apply_riemann<N>(R, X, Y, Y), X) / area;
}

// max over coordinate triples of |R(X,Y)Z + R(Y,Z)X + R(Z,X)Y|.
template <int N>
double bianchi_residual(const ConnectionSpec& spec, const ChartedManifold<N>& man, const Vec<double, N>& x) {
  const auto R = riemann_components<N>(spec, man, x);
  double worst = 0.0;
  for (int l = 0; l < N; ++l)
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        for (int k = 0; k < N; ++k)
          worst = std::max(worst, std::abs(R(l, k, i, j) + R(l, i, j, k) + R(l, j, k, i)));
  return worst;
}

// Levi-Civita Hessian ∂_i∂_j φ − Γ^k_ij ∂_k φ of a scalar callable.
template <int N, class F>
Mat<double, N> levi_civita_hessian(const ChartedManifold<N>& man, const F& phi, const Vec<double, N>& x) {
  const auto J = jet2<N>(phi, x);
  const auto gam = coefficients<double, N>(ConnectionSpec::levi_civita(), man, x);
  Mat<double, N> h = J.hess;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k) h(i, j) -= gam[k](i, j) * J.grad[k];
  return h;
}

template <int N>
double trace_with(const Mat<double, N>& ginv, const Mat<double, N>& h) {
  double s = 0.0;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) s += ginv(i, j) * h(i, j);
  return s;
}

// Ric − Hess V / V + (ΔV / V) g with V = e^u.
template <int N>
Mat<double, N> static_ricci_matrix(const ChartedManifold<N>& man, const Vec<double, N>& x) {
  man.require_admissible(x);
  const Mat<double, N> ric = ricci_matrix<N>(ConnectionSpec::levi_civita(), man, x);
  const auto V = [&man](const auto& xs) { return exp(man.u(xs)); };
  const double v = std::exp(man.u(x));
  const Mat<double, N> hess = levi_civita_hessian<N>(man, V, x);
  const Mat<double, N> g = man.g(x);
  const double lap = trace_with<N>(inverse<double, N>(g), hess);
  Mat<double, N> out;
  for (int i = 0; i < N * N; ++i) out.a[i] = ric.a[i] - hess.a[i] / v + (lap / v) * g.a[i];
  return out;
}

template <int N>
TensorValue static_ricci(const ChartedManifold<N>& man, const Vec<double, N>& x) {
  return TensorValue::from_matrix<N>(static_ricci_matrix<N>(man, x), Slot::Lower, Slot::Lower);
}

// Ric + Hess f − df⊗df / (N' − n). N' = ±∞ drops the last term; N' = n
// needs df = 0 at x.
template <int N>
Mat<double, N> weighted_ricci_matrix(const ChartedManifold<N>& man, const ScalarField<N>& f, double n_eff,
                                     const Vec<double, N>& x) {
  man.require_admissible(x);
  if (std::isnan(n_eff) || (n_eff > 1.0 && n_eff < N))
    throw Error(ErrorKind::InvalidN, "N must lie in (-inf, 1] or [n, inf]");
  const Mat<double, N> ric = ricci_matrix<N>(ConnectionSpec::levi_civita(), man, x);
  const Mat<double, N> hess = levi_civita_hessian<N>(man, f, x);
  const Vec<double, N> df = gradient<double, N>(f, x);
  double coef = 0.0;
  if (n_eff == static_cast<double>(N)) {
    double s = 0.0;
    for (double d : df) s = std::max(s, std::abs(d));
    if (s > 1e-14) throw Error(ErrorKind::NonConstantFAtNEqualsN, "N = n requires constant f");
  } else if (std::isfinite(n_eff)) {
    coef = 1.0 / (n_eff - N);
  }
  Mat<double, N> out;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) out(i, j) = ric(i, j) + hess(i, j) - coef * df[i] * df[j];
  return out;
}

template <int N>
TensorValue weighted_ricci_N(const ChartedManifold<N>& man, const ScalarField<N>& f, double n_eff,
                             const Vec<double, N>& x) {
  return TensorValue::from_matrix<N>(weighted_ricci_matrix<N>(man, f, n_eff, x), Slot::Lower, Slot::Lower);
}

// Smallest λ with Sym(A) v = λ B v, B symmetric positive definite.
template <int N>
double min_generalized_eigenvalue(const Mat<double, N>& A, const Mat<double, N>& B) {
  Mat<double, N> L;
  if (!cholesky<N>(B, L)) throw Error(ErrorKind::MetricNotSPD, "reference form is not positive definite");
  Eigen::Matrix<double, N, N> a, b;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      a(i, j) = 0.5 * (A(i, j) + A(j, i));
      b(i, j) = B(i, j);
    }
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::Matrix<double, N, N>> es(a, b, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

template <int N>
struct CurvatureReport {
  std::vector<Vec<double, N>> points;
  std::vector<Mat<double, N>> ric_d;
  std::vector<double> lambda_min;
  double asymmetry = 0.0;
  double K_best = std::numeric_limits<double>::infinity();
  Vec<double, N> argmin{};
};

template <int N>
CurvatureReport<N> curvature_scan_at(const ChartedManifold<N>& man, const ConnectionSpec& spec,
                                     std::vector<Vec<double, N>> points, int workers = 1) {
  struct Item {
    Mat<double, N> ric;
    double lam;
  };
  const double c = spec.params.conformal();
  const auto items = parallel_map<Item>(points.size(), workers, [&](std::size_t i) {
    const auto& x = points[i];
    const Mat<double, N> g = eval_metric<N>(man, x).g;
    const Mat<double, N> ric = ricci_matrix<N>(spec, man, x);
    Mat<double, N> ref;
    const double e = std::exp(c * man.u(x));
    for (int k = 0; k < N * N; ++k) ref.a[k] = e * g.a[k];
    return Item{ric, min_generalized_eigenvalue<N>(ric, ref)};
  });
  CurvatureReport<N> rep;
  rep.points = std::move(points);
  for (std::size_t i = 0; i < items.size(); ++i) {
    rep.ric_d.push_back(items[i].ric);
    rep.lambda_min.push_back(items[i].lam);
    rep.asymmetry = std::max(rep.asymmetry, asymmetry<N>(items[i].ric));
    if (items[i].lam < rep.K_best) {
      rep.K_best = items[i].lam;
      rep.argmin = rep.points[i];
    }
  }
  return rep;
}

template <int N>
CurvatureReport<N> curvature_bound_scan(const ChartedManifold<N>& man, const WeightParams& p, int sample_count,
                                        int workers = 1) {
  if (sample_count < 1) throw Error(ErrorKind::ConfigInvalid, "sample_count must be >= 1");
  return curvature_scan_at<N>(man, ConnectionSpec::lixia(p), sample_points<N>(man, sample_count), workers);
}

}  // namespace affgeo
