#pragma once

// Quadrature evaluation of both sides of the weighted Reilly identity on a
// region Ω of a chart, and a grid-refinement study of its residual.

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "affgeo/curvature.hpp"
#include "affgeo/hypersurface.hpp"
#include "affgeo/operators.hpp"
#include "affgeo/parallel.hpp"
#include "affgeo/quadrature.hpp"

namespace affgeo {

// Ω = map(P) for a parameter box P; ∂Ω is `boundary` with outward normal.
// Quadrature uses `cells` cells per parameter axis with `order` Gauss points
// per cell and axis.
template <int N>
struct DomainRegion {
  std::string name;
  ChartedManifold<N> ambient;
  CoordinateBox<N> parameters;
  MapField<N, N> map;
  std::function<bool(const Vec<double, N>&)> indicator;
  Hypersurface<N> boundary;
  int order = 8;
  int cells = 8;
};

// Disk of chart radius r about c, in polar parameters (ρ, ϑ) ∈ [0,1]×[0,2π).
inline DomainRegion<2> disk_region(const ChartedManifold<2>& ambient, const Vec<double, 2>& c, double r,
                                   int order = 8, int cells = 8) {
  DomainRegion<2> d;
  d.name = ambient.name() + "-disk";
  d.ambient = ambient;
  d.parameters.axes = {Axis{0.0, 1.0, false, 0.0}, Axis{0.0, 2.0 * std::numbers::pi, true, 0.0}};
  d.map = MapField<2, 2>([c, r](const auto& q) {
    using S = std::decay_t<decltype(q[0])>;
    return Vec<S, 2>{c[0] + r * q[0] * cos(q[1]), c[1] + r * q[0] * sin(q[1])};
  });
  d.indicator = [c, r](const Vec<double, 2>& x) { return std::hypot(x[0] - c[0], x[1] - c[1]) < r; };
  d.boundary.name = d.name + "-boundary";
  d.boundary.ambient = ambient;
  d.boundary.parameters.axes = {Axis{0.0, 2.0 * std::numbers::pi, true, 0.0}};
  d.boundary.embedding = MapField<1, 2>([c, r](const auto& t) {
    using S = std::decay_t<decltype(t[0])>;
    return Vec<S, 2>{c[0] + r * cos(t[0]), c[1] + r * sin(t[0])};
  });
  d.boundary.orientation = 1;
  d.order = order;
  d.cells = cells;
  return d;
}

// True when x − εν lies in Ω and x + εν does not, at every boundary sample.
template <int N>
bool normal_points_outward(const DomainRegion<N>& d, double eps = 1e-6) {
  const auto rule = box_rule<N - 1>(d.boundary.parameters, 2, 8);
  for (const auto& s : rule.points) {
    const auto f = frame_at<double, N>(d.boundary, s);
    Vec<double, N> in = f.point, out = f.point;
    for (int k = 0; k < N; ++k) {
      in[k] -= eps * f.normal[k];
      out[k] += eps * f.normal[k];
    }
    if (!d.indicator(in) || d.indicator(out)) return false;
  }
  return true;
}

struct ReillyResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
};

// V^τ((Δ^D φ)² − |Hess^D φ|²_g − Ric^D(∇^D φ, ∇^D φ)) √|g| at a chart point.
template <int N>
double reilly_bulk_density(const ChartedManifold<N>& man, const WeightParams& p, const ScalarField<N>& phi,
                           const Vec<double, N>& x) {
  const MetricAt<N> m = eval_metric<N>(man, x);
  const double u = man.u(x);
  const double lap = lap_D<N>(man, p, phi, x);
  const Mat<double, N> hess = hess_D_matrix<N>(man, p, phi, x);
  const Vec<double, N> gd = grad_D<N>(man, p, phi, x);
  const Mat<double, N> ric = ricci_matrix<N>(ConnectionSpec::lixia(p), man, x);
  const double integrand = lap * lap - g_norm_squared<N>(m.inverse, hess) - bilinear<double, N>(ric, gd, gd);
  return std::exp(p.tau(N) * u) * integrand * m.sqrt_det;
}

// Boundary integrand per unit parameter volume.
template <int N>
double reilly_boundary_density(const Hypersurface<N>& bd, const WeightParams& p, const ScalarField<N>& phi,
                               const Vec<double, N - 1>& s) {
  constexpr int M = N - 1;
  const auto e = second_fundamental<N>(bd, p, s);
  const double u = bd.ambient.u(e.point);
  const Vec<double, N> dphi = gradient<double, N>(phi, e.point);
  const double phi_nu = dot<double, N>(dphi, e.normal);

  // F = V^β φ_ν along the boundary, differentiated in the parameters
  auto F = [&](const auto& sv) {
    using S = std::decay_t<decltype(sv[0])>;
    const auto f = frame_at<S, N>(bd, sv);
    const Vec<S, N> dp = gradient<S, N>(phi, f.point);
    return exp(p.beta * bd.ambient.u(f.point)) * dot<S, N>(dp, f.normal);
  };
  Vec<double, M> dpsi, dF;
  for (int a = 0; a < M; ++a) {
    dpsi[a] = dot<double, N>(dphi, e.tangent[a]);
    dF[a] = F(seed<double, M>(s, a)).d;
  }
  const Vec<double, M> w = e.h_inv * dpsi;
  const double s2 = std::exp(2.0 * (p.beta - p.alpha) * u);
  const double t1 = e.H_D * s2 * phi_nu * phi_nu;
  const double t2 = s2 * bilinear<double, M>(e.II_D, w, w);
  const double t3 = -2.0 * std::exp(-p.beta * u) * s2 * bilinear<double, M>(e.h_inv, dpsi, dF);
  return std::exp(p.tau(N) * u) * (t1 + t2 + t3) * e.area_element;
}

namespace detail {

template <int D, class F>
double integrate_cells(const BoxRule<D>& rule, int workers, F&& density) {
  std::vector<std::size_t> first(rule.cell_count + 1, rule.points.size());
  for (std::size_t i = rule.points.size(); i-- > 0;) first[rule.cell[i]] = i;
  const auto sums = parallel_map<double>(rule.cell_count, workers, [&](std::size_t c) {
    double s = 0.0;
    for (std::size_t i = first[c]; i < first[c + 1]; ++i) s += rule.weights[i] * density(rule.points[i]);
    return s;
  });
  return pairwise_sum(sums);
}

}  // namespace detail

template <int N>
ReillyResult reilly_residual(const DomainRegion<N>& d, const WeightParams& p, const ScalarField<N>& phi,
                             int workers = 1) {
  const auto bulk = box_rule<N>(d.parameters, d.order, d.cells);
  const auto surf = box_rule<N - 1>(d.boundary.parameters, d.order, d.cells);
  ReillyResult r;
  r.lhs = detail::integrate_cells<N>(bulk, workers, [&](const Vec<double, N>& q) {
    Mat<double, N> J;
    for (int a = 0; a < N; ++a) {
      const Vec<double, N> col = tangent<double, N>(d.map(seed<double, N>(q, a)));
      for (int k = 0; k < N; ++k) J(k, a) = col[k];
    }
    const double jac = std::abs(determinant<double, N>(J));
    if (jac == 0.0) return 0.0;
    return reilly_bulk_density<N>(d.ambient, p, phi, d.map(q)) * jac;
  });
  r.rhs = detail::integrate_cells<N - 1>(surf, workers, [&](const Vec<double, N - 1>& s) {
    return reilly_boundary_density<N>(d.boundary, p, phi, s);
  });
  r.residual = std::abs(r.lhs - r.rhs) / (1.0 + std::abs(r.lhs) + std::abs(r.rhs));
  return r;
}

struct RefinementLevel {
  int cells = 0;
  double h = 0.0;
  double value = 0.0;
  double error = 0.0;
  double observed_order = NAN;
};

// Residual at each cell count; observed order log2-ratio of consecutive
// errors scaled by the mesh ratio. Errors below `floor` count as converged.
template <int N>
std::vector<RefinementLevel> reilly_refinement(DomainRegion<N> d, const WeightParams& p, const ScalarField<N>& phi,
                                               int order, const std::vector<int>& cells, int workers = 1,
                                               double floor = 1e-13) {
  std::vector<RefinementLevel> out;
  for (int c : cells) {
    d.order = order;
    d.cells = c;
    const auto r = reilly_residual<N>(d, p, phi, workers);
    RefinementLevel lv;
    lv.cells = c;
    lv.h = 1.0 / c;
    lv.value = r.lhs;
    lv.error = r.residual;
    if (!out.empty()) {
      const auto& prev = out.back();
      if (prev.error > floor && lv.error > floor)
        lv.observed_order = std::log(prev.error / lv.error) / std::log(prev.h / lv.h);
      if (prev.error > floor && !(lv.error < prev.error))
        throw Error(ErrorKind::QuadratureUnderResolved, "Reilly residual does not decrease under refinement");
    }
    out.push_back(lv);
  }
  return out;
}

}  // namespace affgeo
