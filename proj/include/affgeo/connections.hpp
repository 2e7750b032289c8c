#pragma once

// Levi-Civita, Li-Xia and dual Li-Xia connection coefficients, together with
// the residuals that certify duality, the statistical structure and
// equiaffinity of the Li-Xia connection.
//
// Convention: D_{∂_i} ∂_j = Γ^k_{ij} ∂_k, stored as gamma[k](i, j).

#include <cmath>
#include <optional>
#include <string_view>

#include "affgeo/field.hpp"
#include "affgeo/manifold.hpp"
#include "affgeo/tensor.hpp"

namespace affgeo {

struct WeightParams {
  double alpha = 0.0;
  double beta = 0.0;

  // Exponent of the invariant measure V^τ v_g; always recomputed.
  double tau(int n) const { return (n + 1) * alpha + beta; }
  // Exponent of the conformal factor in ḡ = e^{(α-β)u} g.
  double conformal() const { return alpha - beta; }
};

enum class ConnectionKind { LeviCivita, LiXia, DualLiXia };

constexpr std::string_view to_string(ConnectionKind k) {
  switch (k) {
    case ConnectionKind::LeviCivita: return "LeviCivita";
    case ConnectionKind::LiXia: return "LiXia";
    case ConnectionKind::DualLiXia: return "DualLiXia";
  }
  return "?";
}

template <class S, int N>
using Gamma = std::array<Mat<S, N>, N>;

template <class S, int N>
Gamma<S, N> levi_civita(const GeometryAt<S, N>& G) {
  Gamma<S, N> gam;
  for (int k = 0; k < N; ++k) {
    gam[k] = Mat<S, N>::zero();
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        S s(0.0);
        for (int l = 0; l < N; ++l) s += G.ginv(k, l) * (G.dg[i](j, l) + G.dg[j](i, l) - G.dg[l](i, j));
        gam[k](i, j) = 0.5 * s;
      }
  }
  return gam;
}

// Γ + a (du_i δ^k_j + du_j δ^k_i) + b g_ij (∇u)^k. The Li-Xia connection is
// (a, b) = (α, β); its dual is (a, b) = (-β, -α).
template <class S, int N>
Gamma<S, N> deformed(const GeometryAt<S, N>& G, double a, double b) {
  Gamma<S, N> gam = levi_civita<S, N>(G);
  const Vec<S, N> grad_u = G.ginv * G.du;
  for (int k = 0; k < N; ++k)
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        S add = b * G.g(i, j) * grad_u[k];
        if (k == j) add += a * G.du[i];
        if (k == i) add += a * G.du[j];
        gam[k](i, j) += add;
      }
  return gam;
}

struct CoeffPerturbation {
  int k = 0, i = 0, j = 0;
  double delta = 0.0;
};

// A connection-coefficient field: a kind, the weight parameters and an
// optional single-entry perturbation (used only by sensitivity checks).
struct ConnectionSpec {
  ConnectionKind kind = ConnectionKind::LeviCivita;
  WeightParams params{};
  std::optional<CoeffPerturbation> perturbation{};

  static ConnectionSpec levi_civita() { return {ConnectionKind::LeviCivita, {}, {}}; }
  static ConnectionSpec lixia(WeightParams p) { return {ConnectionKind::LiXia, p, {}}; }
  static ConnectionSpec dual(WeightParams p) { return {ConnectionKind::DualLiXia, p, {}}; }
};

template <class S, int N>
Gamma<S, N> coefficients(const ConnectionSpec& spec, const GeometryAt<S, N>& G) {
  Gamma<S, N> gam;
  switch (spec.kind) {
    case ConnectionKind::LeviCivita: gam = levi_civita<S, N>(G); break;
    case ConnectionKind::LiXia: gam = deformed<S, N>(G, spec.params.alpha, spec.params.beta); break;
    case ConnectionKind::DualLiXia: gam = deformed<S, N>(G, -spec.params.beta, -spec.params.alpha); break;
  }
  if (spec.perturbation) {
    const auto& p = *spec.perturbation;
    gam[p.k](p.i, p.j) += p.delta;
  }
  return gam;
}

template <class S, int N>
Gamma<S, N> coefficients(const ConnectionSpec& spec, const ChartedManifold<N>& man, const Vec<S, N>& x) {
  return coefficients<S, N>(spec, geometry_at<S, N>(man, x));
}

template <int N>
struct ConnectionCoeffs {
  Vec<double, N> point;
  Gamma<double, N> gamma;
  ConnectionKind kind;

  double operator()(int k, int i, int j) const { return gamma[k](i, j); }

  double torsion() const {
    double t = 0.0;
    for (int k = 0; k < N; ++k) t = std::max(t, asymmetry<N>(gamma[k]));
    return t;
  }

  double max_abs_diff(const ConnectionCoeffs& o) const {
    double r = 0.0;
    for (int k = 0; k < N; ++k) r = std::max(r, affgeo::max_abs_diff<N>(gamma[k], o.gamma[k]));
    return r;
  }

  TensorValue tensor() const {
    TensorValue t(N, {Slot::Upper, Slot::Lower, Slot::Lower});
    for (int k = 0; k < N; ++k)
      for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) t.at({k, i, j}) = gamma[k](i, j);
    return t;
  }
};

template <int N>
ConnectionCoeffs<N> connection_coeffs(const ConnectionSpec& spec, const ChartedManifold<N>& man,
                                      const Vec<double, N>& x) {
  man.require_admissible(x);
  const auto G = geometry_at<double, N>(man, x);
  require_spd<N>(G.g);
  return {x, coefficients<double, N>(spec, G), spec.kind};
}

template <int N>
ConnectionCoeffs<N> christoffel_lc(const ChartedManifold<N>& man, const Vec<double, N>& x) {
  return connection_coeffs<N>(ConnectionSpec::levi_civita(), man, x);
}

template <int N>
ConnectionCoeffs<N> lixia_coeffs(const ChartedManifold<N>& man, const WeightParams& p, const Vec<double, N>& x) {
  return connection_coeffs<N>(ConnectionSpec::lixia(p), man, x);
}

template <int N>
ConnectionCoeffs<N> dual_coeffs(const ChartedManifold<N>& man, const WeightParams& p, const Vec<double, N>& x) {
  return connection_coeffs<N>(ConnectionSpec::dual(p), man, x);
}

// Covariant derivative (D_X Y)^k = X^i (∂_i Y^k + Γ^k_{ij} Y^j) at a double point.
template <int N>
Vec<double, N> covariant_derivative(const Gamma<double, N>& gam, const VectorField<N>& X, const VectorField<N>& Y,
                                    const Vec<double, N>& x) {
  const Vec<double, N> xv = X(x);
  const Vec<double, N> yv = Y(x);
  Vec<double, N> r = zero_vec<double, N>();
  for (int i = 0; i < N; ++i) {
    const Vec<double, N> dYi = tangent<double, N>(Y(seed<double, N>(x, i)));
    for (int k = 0; k < N; ++k) {
      double s = dYi[k];
      for (int j = 0; j < N; ++j) s += gam[k](i, j) * yv[j];
      r[k] += xv[i] * s;
    }
  }
  return r;
}

// |X ḡ(Y,Z) - ḡ(D_X Y, Z) - ḡ(Y, D*_X Z)| with ḡ = e^{(α-β)u} g. The
// directional derivative of ḡ(Y,Z) is taken exactly with dual numbers.
template <int N>
double duality_residual(const ChartedManifold<N>& man, const WeightParams& p, const Vec<double, N>& x,
                        const VectorField<N>& X, const VectorField<N>& Y, const VectorField<N>& Z,
                        const ConnectionSpec& dual_spec) {
  man.require_admissible(x);
  const double c = p.conformal();
  auto gbar_yz = [&](const auto& xs) {
    using S = std::decay_t<decltype(xs[0])>;
    const Mat<S, N> g = man.g(xs);
    const Vec<S, N> y = Y(xs);
    const Vec<S, N> z = Z(xs);
    return exp(c * man.u(xs)) * bilinear<S, N>(g, y, z);
  };
  const Vec<double, N> dF = gradient<double, N>(gbar_yz, x);
  const Vec<double, N> xv = X(x);
  const double lhs = dot<double, N>(xv, dF);

  const auto G = geometry_at<double, N>(man, x);
  const Vec<double, N> DXY = covariant_derivative<N>(coefficients<double, N>(ConnectionSpec::lixia(p), G), X, Y, x);
  const Vec<double, N> DsXZ = covariant_derivative<N>(coefficients<double, N>(dual_spec, G), X, Z, x);
  const double scale = std::exp(c * G.u);
  const double rhs = scale * (bilinear<double, N>(G.g, DXY, Z(x)) + bilinear<double, N>(G.g, Y(x), DsXZ));
  return std::abs(lhs - rhs);
}

template <int N>
double duality_residual(const ChartedManifold<N>& man, const WeightParams& p, const Vec<double, N>& x,
                        const VectorField<N>& X, const VectorField<N>& Y, const VectorField<N>& Z) {
  return duality_residual<N>(man, p, x, X, Y, Z, ConnectionSpec::dual(p));
}

// C_{ijk} = (D_{∂_i} ḡ)(∂_j, ∂_k) = ∂_i ḡ_jk - Γ^m_ij ḡ_mk - Γ^m_ik ḡ_jm.
template <int N>
TensorValue amari_chentsov(const ChartedManifold<N>& man, const WeightParams& p, const Vec<double, N>& x) {
  man.require_admissible(x);
  const auto G = geometry_at<double, N>(man, x);
  require_spd<N>(G.g);
  const auto gam = coefficients<double, N>(ConnectionSpec::lixia(p), G);
  const double c = p.conformal();
  const double e = std::exp(c * G.u);
  Mat<double, N> gbar;
  for (int i = 0; i < N * N; ++i) gbar.a[i] = e * G.g.a[i];
  TensorValue C(N, {Slot::Lower, Slot::Lower, Slot::Lower});
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k) {
        double s = e * (G.dg[i](j, k) + c * G.du[i] * G.g(j, k));
        for (int m = 0; m < N; ++m) s -= gam[m](i, j) * gbar(m, k) + gam[m](i, k) * gbar(j, m);
        C.at({i, j, k}) = s;
      }
  return C;
}

// -(α+β)(du_i ḡ_jk + du_k ḡ_ij + du_j ḡ_ik).
template <int N>
TensorValue amari_chentsov_closed_form(const ChartedManifold<N>& man, const WeightParams& p,
                                       const Vec<double, N>& x) {
  man.require_admissible(x);
  const auto G = geometry_at<double, N>(man, x);
  const double e = std::exp(p.conformal() * G.u);
  const double f = -(p.alpha + p.beta) * e;
  TensorValue C(N, {Slot::Lower, Slot::Lower, Slot::Lower});
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k)
        C.at({i, j, k}) = f * (G.du[i] * G.g(j, k) + G.du[k] * G.g(i, j) + G.du[j] * G.g(i, k));
  return C;
}

// (D_X μ)(∂_1, ..., ∂_n) for μ = V^s √det g dx^1∧…∧dx^n in the coordinate
// frame: X(μ_{1..n}) - X^j Γ^i_{ji} μ_{1..n}. Vanishes for s = τ.
template <int N>
double equiaffine_residual(const ChartedManifold<N>& man, const WeightParams& p, const Vec<double, N>& x,
                           const VectorField<N>& X, double exponent) {
  man.require_admissible(x);
  auto density = [&](const auto& xs) {
    using S = std::decay_t<decltype(xs[0])>;
    return exp(exponent * man.u(xs)) * sqrt(determinant<S, N>(man.g(xs)));
  };
  const Vec<double, N> dmu = gradient<double, N>(density, x);
  const double mu = density(x);
  const auto gam = coefficients<double, N>(ConnectionSpec::lixia(p), man, x);
  const Vec<double, N> xv = X(x);
  double r = 0.0;
  for (int j = 0; j < N; ++j) {
    double trace = 0.0;
    for (int i = 0; i < N; ++i) trace += gam[i](j, i);
    r += xv[j] * (dmu[j] - trace * mu);
  }
  return std::abs(r);
}

template <int N>
double equiaffine_residual(const ChartedManifold<N>& man, const WeightParams& p, const Vec<double, N>& x,
                           const VectorField<N>& X) {
  return equiaffine_residual<N>(man, p, x, X, p.tau(N));
}

}  // namespace affgeo
