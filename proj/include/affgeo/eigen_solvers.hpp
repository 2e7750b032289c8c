#pragma once

// First nonzero eigenvalue of A ψ = λ B ψ with A·1 = 0: a dense generalized
// solve for small systems and shift-invert Lanczos in the B-inner product
// with the constant mode deflated for large ones.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <cmath>
#include <string>

#include "affgeo/errors.hpp"
#include "affgeo/fem.hpp"
#include "affgeo/halton.hpp"

namespace affgeo {

struct EigenResult {
  double lambda = 0.0;
  double residual = 0.0;  // ‖Aψ − λBψ‖ / ‖λBψ‖
  int iterations = 0;
  std::string method;
  Eigen::VectorXd vector;
};

inline double eigen_residual(const SpectralProblem& p, const Eigen::VectorXd& x, double lambda) {
  const Eigen::VectorXd Bx = p.B * x;
  return (p.A * x - lambda * Bx).norm() / std::max(1e-300, std::abs(lambda) * Bx.norm());
}

inline EigenResult dense_first_nonzero(const SpectralProblem& p) {
  const Eigen::MatrixXd A(p.A), B(p.B);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(A, B);
  if (es.info() != Eigen::Success) throw Error(ErrorKind::SolverNoConvergence, "dense generalized eigensolver failed");
  EigenResult r;
  r.lambda = es.eigenvalues()(1);
  r.vector = es.eigenvectors().col(1);
  r.residual = eigen_residual(p, r.vector, r.lambda);
  r.method = "dense";
  return r;
}

struct LanczosOptions {
  int max_iterations = 400;
  double tolerance = 1e-10;  // relative, on the Ritz value of the inverted operator
};

inline EigenResult lanczos_first_nonzero(const SpectralProblem& p, const LanczosOptions& opt = {}) {
  const Eigen::Index n = p.size();
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(n);
  const Eigen::VectorXd B1 = p.B * one;
  const double one_norm2 = one.dot(B1);
  auto deflate = [&](Eigen::VectorXd& v) { v -= (B1.dot(v) / one_norm2) * one; };
  auto bnorm = [&](const Eigen::VectorXd& v) { return std::sqrt(v.dot(p.B * v)); };

  // The coordinate functions are smooth trial vectors: half their smallest
  // Rayleigh quotient, negated, puts the shift safely below λ₁.
  double rq = INFINITY;
  Eigen::VectorXd v0 = Eigen::VectorXd::Zero(n);
  for (Eigen::Index c = 0; c < p.coords.cols(); ++c) {
    Eigen::VectorXd x = p.coords.col(c);
    deflate(x);
    const double xx = x.dot(p.B * x);
    if (xx <= 1e-300) continue;
    rq = std::min(rq, x.dot(p.A * x) / xx);
    v0 += x / std::sqrt(xx);
  }
  QuasiRandomStream rng(11, 3);
  for (Eigen::Index i = 0; i < n; ++i) v0[i] += 1e-3 * rng.next();
  deflate(v0);
  if (!std::isfinite(rq)) rq = v0.dot(p.A * v0) / v0.dot(p.B * v0);
  const double sigma = -0.5 * rq;

  const SparseMatrix K = p.A - sigma * p.B;
  Eigen::SimplicialLDLT<SparseMatrix> solver(K);
  if (solver.info() != Eigen::Success) throw Error(ErrorKind::SingularSystem, "shifted operator factorization failed");

  const int kmax = static_cast<int>(std::min<Eigen::Index>(opt.max_iterations, n - 1));
  Eigen::MatrixXd Q(n, kmax + 1);
  std::vector<double> alpha, beta;
  Q.col(0) = v0 / bnorm(v0);
  EigenResult res;
  res.method = "lanczos";
  double prev_theta = 0.0;
  for (int j = 0; j < kmax; ++j) {
    Eigen::VectorXd w = solver.solve(p.B * Q.col(j));
    deflate(w);
    const Eigen::VectorXd Bw = p.B * w;
    const double a = Q.col(j).dot(Bw);
    alpha.push_back(a);
    // full reorthogonalization, two passes
    for (int pass = 0; pass < 2; ++pass) {
      const Eigen::VectorXd BW = p.B * w;
      for (int i = 0; i <= j; ++i) w -= Q.col(i).dot(BW) * Q.col(i);
    }
    deflate(w);
    const double b = bnorm(w);

    const int k = j + 1;
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(k, k);
    for (int i = 0; i < k; ++i) {
      T(i, i) = alpha[i];
      if (i + 1 < k) T(i, i + 1) = T(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    const double theta = es.eigenvalues()(k - 1);
    const double bound = std::abs(b * es.eigenvectors()(k - 1, k - 1));
    res.iterations = k;
    const bool invariant = b <= 1e-14 * std::abs(theta);
    if (invariant || (k >= 3 && bound <= opt.tolerance * std::abs(theta) &&
                      std::abs(theta - prev_theta) <= opt.tolerance * std::abs(theta))) {
      res.lambda = sigma + 1.0 / theta;
      res.vector = Q.leftCols(k) * es.eigenvectors().col(k - 1);
      res.residual = eigen_residual(p, res.vector, res.lambda);
      return res;
    }
    prev_theta = theta;
    beta.push_back(b);
    Q.col(j + 1) = w / b;
  }
  throw Error(ErrorKind::SolverNoConvergence,
              "Lanczos did not converge in " + std::to_string(kmax) + " iterations");
}

inline constexpr Eigen::Index kDenseLimit = 2000;

inline EigenResult smallest_nonzero_eigenvalue(const SpectralProblem& p) {
  return p.size() < kDenseLimit ? dense_first_nonzero(p) : lanczos_first_nonzero(p);
}

}  // namespace affgeo
