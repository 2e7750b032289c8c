#pragma once

// Parametrized hypersurfaces in a chart: unit normal, second fundamental
// form, mean curvature and their D-modified versions.

#include <cmath>
#include <numbers>
#include <string>

#include "affgeo/connections.hpp"
#include "affgeo/quadrature.hpp"

namespace affgeo {

// Σ = X(P) for a parameter box P of dimension N−1. The normal is the g-dual
// of ω_k = det[e_k, ∂_1 X, ..., ∂_{N−1} X], times `orientation`.
template <int N>
struct Hypersurface {
  static constexpr int M = N - 1;
  std::string name;
  ChartedManifold<N> ambient;
  CoordinateBox<M> parameters;
  MapField<M, N> embedding;
  int orientation = 1;
};

template <class S, int N>
struct HypersurfaceFrame {
  Vec<S, N> point;
  std::array<Vec<S, N>, N - 1> tangent;
  Vec<S, N> normal;
  Mat<S, N> g;
  Mat<S, N> ginv;
};

template <class S, int N>
HypersurfaceFrame<S, N> frame_at(const Hypersurface<N>& hyp, const Vec<S, N - 1>& s) {
  constexpr int M = N - 1;
  HypersurfaceFrame<S, N> f;
  for (int a = 0; a < M; ++a) {
    const Vec<Dual<S>, N> Xa = hyp.embedding(seed<S, M>(s, a));
    if (a == 0) f.point = value_of<S, N>(Xa);
    f.tangent[a] = tangent<S, N>(Xa);
  }
  f.g = hyp.ambient.g(f.point);
  f.ginv = inverse<S, N>(f.g);
  Vec<S, N> omega;
  for (int k = 0; k < N; ++k) {
    Mat<S, N> A = Mat<S, N>::zero();
    A(k, 0) = S(1.0);
    for (int a = 0; a < M; ++a)
      for (int r = 0; r < N; ++r) A(r, a + 1) = f.tangent[a][r];
    omega[k] = determinant<S, N>(A);
  }
  const S nrm = sqrt(bilinear<S, N>(f.ginv, omega, omega));
  const Vec<S, N> up = f.ginv * omega;
  for (int k = 0; k < N; ++k) f.normal[k] = double(hyp.orientation) * up[k] / nrm;
  return f;
}

template <int N>
struct ExtrinsicAt {
  static constexpr int M = N - 1;
  Vec<double, N> point;
  Vec<double, N> normal;
  std::array<Vec<double, N>, M> tangent;
  Mat<double, M> h;      // induced metric
  Mat<double, M> h_inv;
  double area_element;   // √det h
  Mat<double, M> II;
  Mat<double, M> II_D;
  double H;
  double H_D;
  double u_nu;
};

template <int N>
void require_immersive(const Mat<double, N - 1>& h) {
  Mat<double, N - 1> L;
  bool ok = cholesky<N - 1>(h, L);
  double lo = INFINITY, hi = 0.0;
  for (int i = 0; ok && i < N - 1; ++i) {
    lo = std::min(lo, L(i, i));
    hi = std::max(hi, L(i, i));
  }
  if (!ok || !(lo > 1e-12 * hi)) throw Error(ErrorKind::DegenerateJacobian, "embedding is not immersive");
}

// II(X, Y) = g(∇_X ν, Y), H = tr_h II, u_ν = du(ν), II^D = II − β u_ν h,
// H^D = H + (n−1) α u_ν.
template <int N>
ExtrinsicAt<N> second_fundamental(const Hypersurface<N>& hyp, const WeightParams& p, const Vec<double, N - 1>& s) {
  constexpr int M = N - 1;
  ExtrinsicAt<N> e;
  const auto f = frame_at<double, N>(hyp, s);
  e.point = f.point;
  e.normal = f.normal;
  e.tangent = f.tangent;
  hyp.ambient.require_admissible(f.point);
  for (int a = 0; a < M; ++a)
    for (int b = 0; b < M; ++b) e.h(a, b) = bilinear<double, N>(f.g, f.tangent[a], f.tangent[b]);
  require_immersive<N>(e.h);
  e.h_inv = inverse<double, M>(e.h);
  e.area_element = std::sqrt(determinant<double, M>(e.h));

  const auto gam = coefficients<double, N>(ConnectionSpec::levi_civita(), hyp.ambient, f.point);
  for (int a = 0; a < M; ++a) {
    const auto fa = frame_at<D1, N>(hyp, seed<double, M>(s, a));
    Vec<double, N> dnu = tangent<double, N>(fa.normal);
    for (int k = 0; k < N; ++k)
      for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) dnu[k] += gam[k](i, j) * f.tangent[a][i] * f.normal[j];
    for (int b = 0; b < M; ++b) e.II(a, b) = bilinear<double, N>(f.g, dnu, f.tangent[b]);
  }
  e.H = 0.0;
  for (int a = 0; a < M; ++a)
    for (int b = 0; b < M; ++b) e.H += e.h_inv(a, b) * e.II(a, b);
  e.u_nu = dot<double, N>(gradient<double, N>(hyp.ambient.weight(), f.point), f.normal);
  for (int i = 0; i < M * M; ++i) e.II_D.a[i] = e.II.a[i] - p.beta * e.u_nu * e.h.a[i];
  e.H_D = e.H + (N - 1) * p.alpha * e.u_nu;
  return e;
}

// g-unit length and g-orthogonality of the computed normal.
template <int N>
double normal_residual(const Hypersurface<N>& hyp, const Vec<double, N - 1>& s) {
  const auto f = frame_at<double, N>(hyp, s);
  double r = std::abs(bilinear<double, N>(f.g, f.normal, f.normal) - 1.0);
  for (const auto& t : f.tangent) r = std::max(r, std::abs(bilinear<double, N>(f.g, f.normal, t)));
  return r;
}

// max |H^D| over Gauss points of the parameter box.
template <int N>
double d_minimal_residual(const Hypersurface<N>& hyp, const WeightParams& p, int order = 6, int cells = 8) {
  const auto rule = box_rule<N - 1>(hyp.parameters, order, cells);
  double r = 0.0;
  for (const auto& s : rule.points) r = std::max(r, std::abs(second_fundamental<N>(hyp, p, s).H_D));
  return r;
}

// Hypersurface D-Laplacian V^{β−α}(Δ_Σ ψ + (mα + 2β) h(∇u, ∇ψ)) with m = n − 1
// and the induced metric h; ψ is an ambient field restricted to Σ.
template <int N>
double lap_D_hypersurface(const Hypersurface<N>& hyp, const WeightParams& p, const ScalarField<N>& psi,
                          const Vec<double, N - 1>& s) {
  constexpr int M = N - 1;
  auto induced = [&](const auto& sv) {
    using S = std::decay_t<decltype(sv[0])>;
    const auto f = frame_at<S, N>(hyp, sv);
    Mat<S, M> h;
    for (int a = 0; a < M; ++a)
      for (int b = 0; b < M; ++b) h(a, b) = bilinear<S, N>(f.g, f.tangent[a], f.tangent[b]);
    return h;
  };
  auto pulled = [&](const ScalarField<N>& fld) {
    return [&hyp, &fld](const auto& sv) { return fld(hyp.embedding(sv)); };
  };
  const auto psi_s = pulled(psi);
  const auto u_s = pulled(hyp.ambient.weight());

  double div = 0.0;
  for (int a = 0; a < M; ++a) {
    const auto sa = seed<double, M>(s, a);
    const Mat<D1, M> h = induced(sa);
    const Mat<D1, M> hi = inverse<D1, M>(h);
    const D1 vol = sqrt(determinant<D1, M>(h));
    const Vec<D1, M> dpsi = gradient<D1, M>(psi_s, sa);
    D1 flux(0.0);
    for (int b = 0; b < M; ++b) flux += vol * hi(a, b) * dpsi[b];
    div += flux.d;
  }
  const Mat<double, M> h = induced(s);
  require_immersive<N>(h);
  const Mat<double, M> hi = inverse<double, M>(h);
  const double lap = div / std::sqrt(determinant<double, M>(h));
  const Vec<double, M> du = gradient<double, M>(u_s, s);
  const Vec<double, M> dpsi = gradient<double, M>(psi_s, s);
  const double u = hyp.ambient.u(hyp.embedding(s));
  return std::exp(-p.conformal() * u) * (lap + (M * p.alpha + 2 * p.beta) * bilinear<double, M>(hi, du, dpsi));
}

// div_Σ(V^e ∇_Σψ) in the induced metric, at parameter s.
template <int N>
double weighted_surface_divergence(const Hypersurface<N>& hyp, double e, const ScalarField<N>& psi,
                                   const Vec<double, N - 1>& s) {
  constexpr int M = N - 1;
  const auto& psi_ref = psi;
  const ScalarField<N> u_fld = hyp.ambient.weight();
  auto flux_of = [&](const Vec<D1, M>& sv, int a) {
    const auto f = frame_at<D1, N>(hyp, sv);
    Mat<D1, M> h;
    for (int i = 0; i < M; ++i)
      for (int j = 0; j < M; ++j) h(i, j) = bilinear<D1, N>(f.g, f.tangent[i], f.tangent[j]);
    const Mat<D1, M> hi = inverse<D1, M>(h);
    const D1 vol = sqrt(determinant<D1, M>(h));
    const Vec<D1, M> dpsi = gradient<D1, M>([&](const auto& q) { return psi_ref(hyp.embedding(q)); }, sv);
    const D1 w = exp(e * u_fld(hyp.embedding(sv)));
    D1 flux(0.0);
    for (int b = 0; b < M; ++b) flux += vol * w * hi(a, b) * dpsi[b];
    return flux;
  };
  double div = 0.0;
  for (int a = 0; a < M; ++a) div += flux_of(seed<double, M>(s, a), a).d;
  Mat<double, M> h;
  const auto f = frame_at<double, N>(hyp, s);
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j) h(i, j) = bilinear<double, N>(f.g, f.tangent[i], f.tangent[j]);
  require_immersive<N>(h);
  return div / std::sqrt(determinant<double, M>(h));
}

// Latitude x_0 = θ0 of a round-sphere chart; ν points towards increasing θ.
template <int N>
Hypersurface<N> latitude_hypersurface(const ChartedManifold<N>& sphere, double theta0) {
  static_assert(N == 2 || N == 3);
  Hypersurface<N> h;
  h.name = sphere.name() + "-latitude";
  h.ambient = sphere;
  for (int a = 0; a < N - 1; ++a) h.parameters.axes[a] = sphere.box().axes[a + 1];
  h.embedding = MapField<N - 1, N>([theta0](const auto& s) {
    using S = std::decay_t<decltype(s[0])>;
    Vec<S, N> x;
    x[0] = S(theta0);
    for (int a = 0; a < N - 1; ++a) x[a + 1] = s[a];
    return x;
  });
  return h;
}

// Circle of radius r about c in a two-dimensional chart, counterclockwise.
inline Hypersurface<2> chart_circle(const ChartedManifold<2>& ambient, const Vec<double, 2>& c, double r) {
  Hypersurface<2> h;
  h.name = ambient.name() + "-circle";
  h.ambient = ambient;
  h.parameters.axes = {Axis{0.0, 2.0 * std::numbers::pi, true, 0.0}};
  h.embedding = MapField<1, 2>([c, r](const auto& t) {
    using S = std::decay_t<decltype(t[0])>;
    return Vec<S, 2>{c[0] + r * cos(t[0]), c[1] + r * sin(t[0])};
  });
  return h;
}

// Round sphere of radius r in a three-dimensional flat chart, outward normal.
inline Hypersurface<3> chart_sphere(const ChartedManifold<3>& ambient, double r, double margin = 0.05) {
  Hypersurface<3> h;
  h.name = ambient.name() + "-sphere";
  h.ambient = ambient;
  h.parameters.axes = {Axis{0.0, std::numbers::pi, false, margin}, Axis{0.0, 2.0 * std::numbers::pi, true, 0.0}};
  h.embedding = MapField<2, 3>([r](const auto& s) {
    using S = std::decay_t<decltype(s[0])>;
    return Vec<S, 3>{r * sin(s[0]) * cos(s[1]), r * sin(s[0]) * sin(s[1]), r * cos(s[0])};
  });
  return h;
}

}  // namespace affgeo
