#pragma once

#include <cmath>
#include <string>

#include "affgeo/eigen_solvers.hpp"
#include "affgeo/fem.hpp"
#include "affgeo/hypersurface.hpp"

namespace affgeo {

struct ChoiWangResult {
  double K_best = 0.0;
  double lambda1 = 0.0;
  double margin = 0.0;  // λ₁ − K/2
  double tolerance = 0.0;
  double d_minimal_residual = 0.0;
  double eigen_residual = 0.0;
  std::string method;
  bool pass = false;
};

inline constexpr double kDMinimalTolerance = 1e-8;

// Checks λ₁(Δ^D_Σ) ≥ K/2 for a D-minimal Σ given by a parametrization (for
// the D-minimality test) and a mesh of the same surface (for λ₁).
template <int N>
ChoiWangResult choi_wang_certificate(double K_best, const Hypersurface<N>& sigma, const WeightParams& p,
                                     const SurfaceMesh& mesh, const AmbientFunction& u, double tol_rel = 1e-3,
                                     int workers = 1) {
  ChoiWangResult r;
  r.K_best = K_best;
  r.d_minimal_residual = d_minimal_residual<N>(sigma, p);
  if (!(r.d_minimal_residual <= kDMinimalTolerance))
    throw Error(ErrorKind::NotDMinimal, "hypersurface is not D-minimal: max |H^D| = " + std::to_string(r.d_minimal_residual));
  if (!(K_best > 0.0)) throw Error(ErrorKind::NonpositiveK, "curvature bound K must be positive");
  const auto prob = assemble(mesh, u, p, workers);
  const auto eig = smallest_nonzero_eigenvalue(prob);
  r.lambda1 = eig.lambda;
  r.eigen_residual = eig.residual;
  r.method = eig.method;
  r.margin = r.lambda1 - 0.5 * K_best;
  r.tolerance = tol_rel * K_best;
  r.pass = r.margin >= -r.tolerance;
  return r;
}

}  // namespace affgeo
