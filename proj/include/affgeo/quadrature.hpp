#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "affgeo/manifold.hpp"

namespace affgeo {

struct GaussRule {
  std::vector<double> nodes;  // on [-1, 1]
  std::vector<double> weights;
};

// P_n(x) and P_n'(x) by the three-term recurrence.
inline std::pair<double, double> legendre(int n, double x) {
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double pk = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
    p0 = p1;
    p1 = pk;
  }
  if (n == 1) p0 = 1.0;
  return {p1, n * (x * p1 - p0) / (x * x - 1.0)};
}

// Gauss-Legendre nodes by Newton iteration from the Chebyshev-like guess.
inline GaussRule gauss_legendre(int order) {
  if (order < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
  GaussRule r;
  r.nodes.assign(order, 0.0);
  r.weights.assign(order, 0.0);
  for (int i = 0; i < (order + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre(order, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    if (2 * i + 1 == order) x = 0.0;
    const double dp = legendre(order, x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[order - 1 - i] = x;
    r.weights[i] = w;
    r.weights[order - 1 - i] = w;
  }
  return r;
}

// Tensor-product composite rule on a box: `cells` equal cells per axis and a
// Gauss rule of `order` points per axis in each cell.
template <int D>
struct BoxRule {
  std::vector<Vec<double, D>> points;
  std::vector<double> weights;
  std::vector<int> cell;  // owning cell index of each point
  int cell_count = 0;
};

template <int D>
BoxRule<D> box_rule(const std::array<double, D>& lower, const std::array<double, D>& upper, int order, int cells) {
  const GaussRule g = gauss_legendre(order);
  BoxRule<D> r;
  int total_cells = 1;
  for (int d = 0; d < D; ++d) total_cells *= cells;
  r.cell_count = total_cells;
  int per_cell = 1;
  for (int d = 0; d < D; ++d) per_cell *= order;
  for (int c = 0; c < total_cells; ++c) {
    std::array<int, D> ci;
    int rem = c;
    for (int d = D - 1; d >= 0; --d) {
      ci[d] = rem % cells;
      rem /= cells;
    }
    for (int q = 0; q < per_cell; ++q) {
      int qr = q;
      Vec<double, D> x;
      double w = 1.0;
      for (int d = D - 1; d >= 0; --d) {
        const int k = qr % order;
        qr /= order;
        const double h = (upper[d] - lower[d]) / cells;
        const double a = lower[d] + ci[d] * h;
        x[d] = a + 0.5 * h * (g.nodes[k] + 1.0);
        w *= 0.5 * h * g.weights[k];
      }
      r.points.push_back(x);
      r.weights.push_back(w);
      r.cell.push_back(c);
    }
  }
  return r;
}

template <int D>
BoxRule<D> box_rule(const CoordinateBox<D>& box, int order, int cells) {
  std::array<double, D> lo, hi;
  for (int d = 0; d < D; ++d) {
    lo[d] = box.axes[d].admissible_lower();
    hi[d] = box.axes[d].admissible_upper();
  }
  return box_rule<D>(lo, hi, order, cells);
}

}  // namespace affgeo
