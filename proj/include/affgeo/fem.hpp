#pragma once

// P1 finite elements for the D-Laplacian on a closed m-dimensional mesh Σ.
// Weak form: ∫ w g(∇ψ, ∇χ) = λ ∫ w V^{α−β} ψ χ with w = V^{mα+2β}.

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cmath>
#include <vector>

#include "affgeo/connections.hpp"
#include "affgeo/mesh.hpp"
#include "affgeo/parallel.hpp"
#include "affgeo/weights.hpp"

namespace affgeo {

using SparseMatrix = Eigen::SparseMatrix<double>;

struct SpectralProblem {
  SparseMatrix A;  // stiffness
  SparseMatrix B;  // mass
  std::vector<double> u;
  Eigen::MatrixXd coords;  // vertex coordinates, one row per unknown
  WeightParams params{};
  int m = 1;

  Eigen::Index size() const { return A.rows(); }
};

namespace detail {

struct LocalBlock {
  std::array<int, 3> idx{};
  int n = 0;
  double a[3][3]{};
  double b[3][3]{};
};

// Gradients of the hat functions on a triangle in embedding space, as a Gram form:
// K_ij = area · ∇λ_i · ∇λ_j.
inline void triangle_stiffness(const std::array<const double*, 3>& p, int dim, double out[3][3], double& area) {
  double e[3][4]{};  // edge opposite vertex i
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < dim; ++k) e[i][k] = p[(i + 2) % 3][k] - p[(i + 1) % 3][k];
  auto dotp = [&](const double* x, const double* y) {
    double s = 0.0;
    for (int k = 0; k < dim; ++k) s += x[k] * y[k];
    return s;
  };
  const double a = dotp(e[0], e[0]) * dotp(e[1], e[1]) - dotp(e[0], e[1]) * dotp(e[0], e[1]);
  area = 0.5 * std::sqrt(std::max(0.0, a));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[i][j] = dotp(e[i], e[j]) / (4.0 * area);
}

}  // namespace detail

inline SpectralProblem assemble(const SurfaceMesh& mesh, const AmbientFunction& u_fn, const WeightParams& p,
                                int workers = 1) {
  mesh.require_nondegenerate();
  const int m = mesh.dim();
  SpectralProblem prob;
  prob.params = p;
  prob.m = m;
  const std::size_t nv = mesh.vertex_count();
  prob.u.resize(nv);
  prob.coords.resize(static_cast<Eigen::Index>(nv), mesh.embed_dim);
  for (std::size_t i = 0; i < nv; ++i) {
    prob.u[i] = u_fn(mesh.vertex(i));
    for (int k = 0; k < mesh.embed_dim; ++k) prob.coords(static_cast<Eigen::Index>(i), k) = mesh.vertices[i][k];
  }
  const double ew = m * p.alpha + 2 * p.beta;
  const double em = ew + p.conformal();

  const auto blocks = parallel_map<detail::LocalBlock>(mesh.cell_count(), workers, [&](std::size_t c) {
    detail::LocalBlock blk;
    blk.n = mesh.cell_size;
    double w = 0.0, wm = 0.0;
    for (int i = 0; i < blk.n; ++i) {
      blk.idx[i] = mesh.cells[c][i];
      w += std::exp(ew * prob.u[blk.idx[i]]) / blk.n;
      wm += std::exp(em * prob.u[blk.idx[i]]) / blk.n;
    }
    if (blk.n == 2) {
      const double L = mesh.measure(c);
      const double k0[2][2] = {{1, -1}, {-1, 1}};
      const double m0[2][2] = {{2, 1}, {1, 2}};
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          blk.a[i][j] = w * k0[i][j] / L;
          blk.b[i][j] = wm * L * m0[i][j] / 6.0;
        }
    } else {
      const std::array<const double*, 3> pts = {mesh.vertices[blk.idx[0]].data(), mesh.vertices[blk.idx[1]].data(),
                                                mesh.vertices[blk.idx[2]].data()};
      double K[3][3], area = 0.0;
      detail::triangle_stiffness(pts, mesh.embed_dim, K, area);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          blk.a[i][j] = w * K[i][j];
          blk.b[i][j] = wm * area * (i == j ? 2.0 : 1.0) / 12.0;
        }
    }
    return blk;
  });

  std::vector<Eigen::Triplet<double>> ta, tb;
  ta.reserve(blocks.size() * 9);
  tb.reserve(blocks.size() * 9);
  for (const auto& blk : blocks)
    for (int i = 0; i < blk.n; ++i)
      for (int j = 0; j < blk.n; ++j) {
        if (i != j) ta.emplace_back(blk.idx[i], blk.idx[j], blk.a[i][j]);
        tb.emplace_back(blk.idx[i], blk.idx[j], blk.b[i][j]);
      }
  // diagonal as minus the off-diagonal row sum, so that A·1 = 0
  std::vector<double> diag(nv, 0.0);
  for (const auto& t : ta) diag[t.row()] -= t.value();
  for (std::size_t i = 0; i < nv; ++i) ta.emplace_back(static_cast<int>(i), static_cast<int>(i), diag[i]);
  const auto n = static_cast<Eigen::Index>(nv);
  prob.A.resize(n, n);
  prob.B.resize(n, n);
  prob.A.setFromTriplets(ta.begin(), ta.end());
  prob.B.setFromTriplets(tb.begin(), tb.end());
  return prob;
}

inline double sparse_asymmetry(const SparseMatrix& M) {
  const SparseMatrix d = M - SparseMatrix(M.transpose());
  double r = 0.0;
  for (Eigen::Index k = 0; k < d.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(d, k); it; ++it) r = std::max(r, std::abs(it.value()));
  return r;
}

inline double constant_kernel_residual(const SparseMatrix& A) {
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(A.cols());
  return (A * one).cwiseAbs().maxCoeff();
}

}  // namespace affgeo
