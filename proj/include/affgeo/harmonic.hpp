#pragma once

// Dirichlet problem Δ^D φ = 0 on a two-dimensional disk region, solved with
// P1 elements in the divergence form div(V^{nα+2β} ∇φ) = 0, and the
// quantity that the Choi-Wang argument shows to be nonpositive.

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <cmath>
#include <map>
#include <vector>

#include "affgeo/fem.hpp"
#include "affgeo/hypersurface.hpp"
#include "affgeo/parallel.hpp"
#include "affgeo/reilly.hpp"

namespace affgeo {

struct PlanarMesh {
  std::vector<Vec<double, 2>> polar;   // (ρ, ϑ) in the region's parameter box
  std::vector<Vec<double, 2>> chart;   // chart coordinates
  std::vector<std::array<int, 3>> triangles;
  std::vector<bool> on_boundary;
};

// Unit hexagon split into 6 triangles, refined `level` times and stretched
// radially onto the unit disk.
inline PlanarMesh unit_disk_mesh(int level) {
  if (level < 0) throw Error(ErrorKind::ConfigInvalid, "mesh level must be >= 0");
  std::vector<Vec<double, 2>> v = {{0.0, 0.0}};
  for (int k = 0; k < 6; ++k) v.push_back({std::cos(k * std::numbers::pi / 3), std::sin(k * std::numbers::pi / 3)});
  std::vector<std::array<int, 3>> t;
  for (int k = 0; k < 6; ++k) t.push_back({0, 1 + k, 1 + (k + 1) % 6});
  for (int l = 0; l < level; ++l) {
    std::map<std::pair<int, int>, int> mid;
    auto midpoint = [&](int a, int b) {
      const auto key = std::make_pair(std::min(a, b), std::max(a, b));
      if (auto it = mid.find(key); it != mid.end()) return it->second;
      v.push_back({0.5 * (v[a][0] + v[b][0]), 0.5 * (v[a][1] + v[b][1])});
      mid.emplace(key, static_cast<int>(v.size()) - 1);
      return static_cast<int>(v.size()) - 1;
    };
    std::vector<std::array<int, 3>> nt;
    for (const auto& tri : t) {
      const int a = midpoint(tri[0], tri[1]), b = midpoint(tri[1], tri[2]), c = midpoint(tri[2], tri[0]);
      nt.push_back({tri[0], a, c});
      nt.push_back({tri[1], b, a});
      nt.push_back({tri[2], c, b});
      nt.push_back({a, b, c});
    }
    t = std::move(nt);
  }
  std::map<std::pair<int, int>, int> edge_count;
  for (const auto& tri : t)
    for (int i = 0; i < 3; ++i) ++edge_count[{std::min(tri[i], tri[(i + 1) % 3]), std::max(tri[i], tri[(i + 1) % 3])}];
  PlanarMesh m;
  m.triangles = t;
  m.on_boundary.assign(v.size(), false);
  for (const auto& [e, c] : edge_count)
    if (c == 1) m.on_boundary[e.first] = m.on_boundary[e.second] = true;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double r = std::hypot(v[i][0], v[i][1]);
    double th = std::atan2(v[i][1], v[i][0]);
    if (th < 0) th += 2.0 * std::numbers::pi;
    // distance from the centre to the hexagon edge in direction th
    const double sector = std::fmod(th, std::numbers::pi / 3) - std::numbers::pi / 6;
    const double rhex = std::cos(std::numbers::pi / 6) / std::cos(sector);
    const double rho = m.on_boundary[i] ? 1.0 : std::min(1.0, r / rhex);
    m.polar.push_back({rho, th});
  }
  return m;
}

struct HarmonicExtension {
  PlanarMesh mesh;
  Eigen::VectorXd phi;
  SparseMatrix A;  // weighted stiffness, ∫ V^{nα+2β} g(∇·, ∇·)
};

inline HarmonicExtension harmonic_extension_2d(const DomainRegion<2>& region, const WeightParams& p,
                                               const ScalarField<2>& psi, int level, int workers = 1) {
  HarmonicExtension h;
  h.mesh = unit_disk_mesh(level);
  auto& m = h.mesh;
  for (const auto& q : m.polar) m.chart.push_back(region.map(q));
  const double ew = 2 * p.alpha + 2 * p.beta;
  const auto n = static_cast<Eigen::Index>(m.chart.size());

  struct Local {
    std::array<int, 3> idx;
    double k[3][3];
  };
  const auto locals = parallel_map<Local>(m.triangles.size(), workers, [&](std::size_t c) {
    Local L;
    L.idx = m.triangles[c];
    const auto& a = m.chart[L.idx[0]];
    const auto& b = m.chart[L.idx[1]];
    const auto& d = m.chart[L.idx[2]];
    const double det = (b[0] - a[0]) * (d[1] - a[1]) - (d[0] - a[0]) * (b[1] - a[1]);
    const double area = 0.5 * std::abs(det);
    if (!(area > 1e-14)) throw Error(ErrorKind::DegenerateCell, "degenerate triangle in disk mesh");
    // gradients of the barycentric coordinates in the chart
    const std::array<Vec<double, 2>, 3> grad = {Vec<double, 2>{(b[1] - d[1]) / det, (d[0] - b[0]) / det},
                                                Vec<double, 2>{(d[1] - a[1]) / det, (a[0] - d[0]) / det},
                                                Vec<double, 2>{(a[1] - b[1]) / det, (b[0] - a[0]) / det}};
    const Vec<double, 2> centroid{(a[0] + b[0] + d[0]) / 3, (a[1] + b[1] + d[1]) / 3};
    const MetricAt<2> g = eval_metric<2>(region.ambient, centroid);
    const double coef = std::exp(ew * region.ambient.u(centroid)) * g.sqrt_det;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) L.k[i][j] = area * coef * bilinear<double, 2>(g.inverse, grad[i], grad[j]);
    return L;
  });
  std::vector<Eigen::Triplet<double>> trip;
  for (const auto& L : locals)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) trip.emplace_back(L.idx[i], L.idx[j], L.k[i][j]);
  h.A.resize(n, n);
  h.A.setFromTriplets(trip.begin(), trip.end());

  std::vector<Eigen::Index> interior_of(n, -1);
  Eigen::Index ni = 0;
  h.phi = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (m.on_boundary[i])
      h.phi[i] = psi(m.chart[i]);
    else
      interior_of[i] = ni++;
  }
  std::vector<Eigen::Triplet<double>> ti;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(ni);
  for (Eigen::Index k = 0; k < h.A.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(h.A, k); it; ++it) {
      const auto r = interior_of[it.row()];
      if (r < 0) continue;
      const auto c = interior_of[it.col()];
      if (c >= 0)
        ti.emplace_back(r, c, it.value());
      else
        rhs[r] -= it.value() * h.phi[it.col()];
    }
  SparseMatrix Aii(ni, ni);
  Aii.setFromTriplets(ti.begin(), ti.end());
  Eigen::SimplicialLDLT<SparseMatrix> solver(Aii);
  if (solver.info() != Eigen::Success) throw Error(ErrorKind::SingularSystem, "interior system is singular");
  const Eigen::VectorXd x = solver.solve(rhs);
  if (solver.info() != Eigen::Success) throw Error(ErrorKind::SingularSystem, "interior solve failed");
  for (Eigen::Index i = 0; i < n; ++i)
    if (interior_of[i] >= 0) h.phi[i] = x[interior_of[i]];
  return h;
}

inline double max_nodal_error(const HarmonicExtension& h, const ScalarField<2>& exact) {
  double e = 0.0;
  for (std::size_t i = 0; i < h.mesh.chart.size(); ++i)
    e = std::max(e, std::abs(h.phi[static_cast<Eigen::Index>(i)] - exact(h.mesh.chart[i])));
  return e;
}

struct ChoiWangIntermediate {
  double K = 0.0;
  double energy = 0.0;    // ∫_Ω V^{nα+2β} |∇φ|²
  double ii_term = 0.0;   // ∫_∂Ω V^τ II^D(∇^D ψ, ∇^D ψ)
  double flux_term = 0.0; // −2 ∫_∂Ω V^{τ−β} g(∇^D ψ, ∇^D(V^β φ_ν))
  double value = 0.0;     // K·energy + ii_term + flux_term
  double scale = 0.0;     // |K·energy| + |ii_term| + |flux_term|
  bool nonpositive = false;
};

// On a closed boundary the flux term integrates by parts to
// 2 ∫ V^β φ_ν div_∂(V^{τ+β−2α} ∇_∂ψ); the weighted conormal flux of the
// discrete solution at boundary vertex i is (Aφ)_i ≈ ∫ V^{nα+2β} φ_ν χ_i.
inline ChoiWangIntermediate choi_wang_intermediate(const DomainRegion<2>& region, const WeightParams& p,
                                                   const ScalarField<2>& psi, double K, int level,
                                                   double rel_tol = 1e-4, int workers = 1) {
  const auto h = harmonic_extension_2d(region, p, psi, level, workers);
  ChoiWangIntermediate q;
  q.K = K;
  const Eigen::VectorXd Aphi = h.A * h.phi;
  q.energy = h.phi.dot(Aphi);

  const auto& bd = region.boundary;
  const double tau = p.tau(2);
  const auto rule = box_rule<1>(bd.parameters, region.order, region.cells);
  std::vector<double> ii(rule.points.size());
  for (std::size_t i = 0; i < rule.points.size(); ++i) {
    const auto e = second_fundamental<2>(bd, p, rule.points[i]);
    const double u = bd.ambient.u(e.point);
    const double dpsi = dot<double, 2>(gradient<double, 2>(psi, e.point), e.tangent[0]);
    const double w = e.h_inv(0, 0) * dpsi;
    ii[i] = rule.weights[i] * std::exp(tau * u) * std::exp(2 * (p.beta - p.alpha) * u) * e.II_D(0, 0) * w * w *
            e.area_element;
  }
  q.ii_term = pairwise_sum(ii);

  const double ew = 2 * p.alpha + 2 * p.beta;
  const double eg = tau + p.beta - 2 * p.alpha;
  std::vector<double> flux;
  for (std::size_t i = 0; i < h.mesh.chart.size(); ++i) {
    if (!h.mesh.on_boundary[i]) continue;
    const Vec<double, 1> t{h.mesh.polar[i][1]};
    const double u = bd.ambient.u(bd.embedding(t));
    const double G = weighted_surface_divergence<2>(bd, eg, psi, t);
    flux.push_back(Aphi[static_cast<Eigen::Index>(i)] * std::exp(p.beta * u) * G / std::exp(ew * u));
  }
  q.flux_term = 2.0 * pairwise_sum(flux);
  q.value = K * q.energy + q.ii_term + q.flux_term;
  q.scale = std::abs(K * q.energy) + std::abs(q.ii_term) + std::abs(q.flux_term);
  q.nonpositive = q.value <= rel_tol * q.scale;
  return q;
}

}  // namespace affgeo
