#pragma once

// Simplicial meshes of closed curves and surfaces, stored with vertices in a
// Euclidean embedding space so that ambient weight functions can be sampled
// at vertices directly.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "affgeo/errors.hpp"

namespace affgeo {

struct SurfaceMesh {
  int embed_dim = 3;
  int cell_size = 2;  // 2: segments, 3: triangles
  std::vector<std::array<double, 4>> vertices;
  std::vector<std::array<int, 3>> cells;

  int dim() const { return cell_size - 1; }
  std::size_t vertex_count() const { return vertices.size(); }
  std::size_t cell_count() const { return cells.size(); }
  std::span<const double> vertex(std::size_t i) const { return {vertices[i].data(), static_cast<std::size_t>(embed_dim)}; }

  // Length (segments) or area (triangles) of cell c.
  double measure(std::size_t c) const {
    const auto& v = cells[c];
    auto diff = [&](int a, int b) {
      std::array<double, 4> d{};
      for (int k = 0; k < embed_dim; ++k) d[k] = vertices[v[a]][k] - vertices[v[b]][k];
      return d;
    };
    if (cell_size == 2) {
      const auto d = diff(1, 0);
      double s = 0.0;
      for (double x : d) s += x * x;
      return std::sqrt(s);
    }
    const auto e1 = diff(1, 0), e2 = diff(2, 0);
    double a11 = 0, a22 = 0, a12 = 0;
    for (int k = 0; k < 4; ++k) {
      a11 += e1[k] * e1[k];
      a22 += e2[k] * e2[k];
      a12 += e1[k] * e2[k];
    }
    return 0.5 * std::sqrt(std::max(0.0, a11 * a22 - a12 * a12));
  }

  // Every facet (vertex of a segment, edge of a triangle) is shared by exactly two cells.
  bool is_closed() const {
    std::map<std::pair<int, int>, int> count;
    for (const auto& c : cells) {
      if (cell_size == 2) {
        ++count[{c[0], c[0]}];
        ++count[{c[1], c[1]}];
      } else {
        for (int i = 0; i < 3; ++i) {
          const int a = c[i], b = c[(i + 1) % 3];
          ++count[{std::min(a, b), std::max(a, b)}];
        }
      }
    }
    return std::all_of(count.begin(), count.end(), [](const auto& kv) { return kv.second == 2; });
  }

  double min_measure() const {
    double m = INFINITY;
    for (std::size_t c = 0; c < cells.size(); ++c) m = std::min(m, measure(c));
    return m;
  }

  void require_nondegenerate() const {
    if (!(min_measure() > 1e-14)) throw Error(ErrorKind::DegenerateCell, "mesh has a degenerate cell");
  }

  // Pad or reinterpret vertices in a larger embedding space (extra coordinates 0).
  SurfaceMesh embedded_in(int dim) const {
    SurfaceMesh m = *this;
    for (auto& v : m.vertices)
      for (int k = embed_dim; k < 4; ++k) v[k] = 0.0;
    m.embed_dim = dim;
    return m;
  }
};

// 2^{level+4} uniform segments on the circle of radius r in the plane of the
// first two embedding coordinates.
inline SurfaceMesh circle_mesh(int level, double r = 1.0, int embed_dim = 3) {
  if (level < 0) throw Error(ErrorKind::ConfigInvalid, "mesh level must be >= 0");
  SurfaceMesh m;
  m.embed_dim = embed_dim;
  m.cell_size = 2;
  const int n = 1 << (level + 4);
  for (int i = 0; i < n; ++i) {
    const double t = 2.0 * std::numbers::pi * i / n;
    m.vertices.push_back({r * std::cos(t), r * std::sin(t), 0.0, 0.0});
    m.cells.push_back({i, (i + 1) % n, 0});
  }
  return m;
}

// Icosahedron subdivided `level` times, vertices projected to the sphere of radius r.
inline SurfaceMesh icosphere_mesh(int level, double r = 1.0, int embed_dim = 3) {
  if (level < 0) throw Error(ErrorKind::ConfigInvalid, "mesh level must be >= 0");
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<std::array<double, 3>> v = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                                          {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  std::vector<std::array<int, 3>> f = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                                       {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                                       {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                                       {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  auto project = [](std::array<double, 3> p) {
    const double n = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
    for (auto& c : p) c /= n;
    return p;
  };
  for (auto& p : v) p = project(p);
  for (int l = 0; l < level; ++l) {
    std::map<std::pair<int, int>, int> mid;
    auto midpoint = [&](int a, int b) {
      const auto key = std::make_pair(std::min(a, b), std::max(a, b));
      if (auto it = mid.find(key); it != mid.end()) return it->second;
      std::array<double, 3> p;
      for (int k = 0; k < 3; ++k) p[k] = 0.5 * (v[a][k] + v[b][k]);
      v.push_back(project(p));
      const int idx = static_cast<int>(v.size()) - 1;
      mid.emplace(key, idx);
      return idx;
    };
    std::vector<std::array<int, 3>> nf;
    nf.reserve(f.size() * 4);
    for (const auto& tri : f) {
      const int a = midpoint(tri[0], tri[1]), b = midpoint(tri[1], tri[2]), c = midpoint(tri[2], tri[0]);
      nf.push_back({tri[0], a, c});
      nf.push_back({tri[1], b, a});
      nf.push_back({tri[2], c, b});
      nf.push_back({a, b, c});
    }
    f = std::move(nf);
  }
  SurfaceMesh m;
  m.embed_dim = embed_dim;
  m.cell_size = 3;
  for (const auto& p : v) m.vertices.push_back({r * p[0], r * p[1], r * p[2], 0.0});
  m.cells = std::move(f);
  return m;
}

inline SurfaceMesh build_mesh(const std::string& kind, int level) {
  if (kind == "circle") return circle_mesh(level);
  if (kind == "icosphere") return icosphere_mesh(level);
  throw Error(ErrorKind::UnsupportedKind, "unknown mesh kind '" + kind + "'");
}

// Plain-text dump: header, vertex table, cell table; 17 significant digits.
inline void write_mesh(std::ostream& os, const SurfaceMesh& m) {
  char buf[64];
  os << "vertices " << m.vertex_count() << " " << m.embed_dim << "\n";
  for (std::size_t i = 0; i < m.vertex_count(); ++i) {
    for (int k = 0; k < m.embed_dim; ++k) {
      std::snprintf(buf, sizeof buf, "%.17g", m.vertices[i][k]);
      os << (k ? " " : "") << buf;
    }
    os << "\n";
  }
  os << "cells " << m.cell_count() << " " << m.cell_size << "\n";
  for (const auto& c : m.cells) {
    for (int k = 0; k < m.cell_size; ++k) os << (k ? " " : "") << c[k];
    os << "\n";
  }
}

}  // namespace affgeo
