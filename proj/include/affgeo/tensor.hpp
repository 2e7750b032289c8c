#pragma once

#include <cmath>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

#include "affgeo/small_matrix.hpp"

namespace affgeo {

enum class Slot { Upper, Lower };

// Dense tensor of type (p,q) at one point; every slot has size n.
class TensorValue {
 public:
  TensorValue() = default;
  TensorValue(int n, std::vector<Slot> variance)
      : n_(n), variance_(std::move(variance)), entries_(ipow_size(n, static_cast<int>(variance_.size())), 0.0) {}

  template <int N>
  static TensorValue from_matrix(const Mat<double, N>& m, Slot a, Slot b) {
    TensorValue t(N, {a, b});
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) t.at({i, j}) = m(i, j);
    return t;
  }

  template <int N>
  Mat<double, N> to_matrix() const {
    if (rank() != 2 || n_ != N) throw std::invalid_argument("TensorValue::to_matrix: needs rank 2");
    Mat<double, N> m;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) m(i, j) = at({i, j});
    return m;
  }

  int dim() const { return n_; }
  int rank() const { return static_cast<int>(variance_.size()); }
  const std::vector<Slot>& variance() const { return variance_; }
  std::span<const double> entries() const { return entries_; }
  std::span<double> entries() { return entries_; }
  std::size_t size() const { return entries_.size(); }

  double& at(std::span<const int> idx) { return entries_[offset(idx)]; }
  double at(std::span<const int> idx) const { return entries_[offset(idx)]; }
  double& at(std::initializer_list<int> idx) { return at(std::span<const int>(idx.begin(), idx.size())); }
  double at(std::initializer_list<int> idx) const { return at(std::span<const int>(idx.begin(), idx.size())); }

  // Contract slot `slot` with a rank-2 tensor. Raising uses the inverse
  // metric (two upper slots), lowering the metric (two lower slots).
  TensorValue raised(int slot, const TensorValue& inverse_metric) const {
    return moved(slot, inverse_metric, Slot::Lower, Slot::Upper);
  }
  TensorValue lowered(int slot, const TensorValue& metric) const {
    return moved(slot, metric, Slot::Upper, Slot::Lower);
  }

  double max_abs_diff(const TensorValue& o) const {
    if (o.entries_.size() != entries_.size()) throw std::invalid_argument("TensorValue: shape mismatch");
    double r = 0.0;
    for (std::size_t i = 0; i < entries_.size(); ++i) r = std::max(r, std::abs(entries_[i] - o.entries_[i]));
    return r;
  }

  double max_abs() const {
    double r = 0.0;
    for (double e : entries_) r = std::max(r, std::abs(e));
    return r;
  }

  // Largest |T(..i..j..) - T(..j..i..)| over all pairs of slots.
  double max_asymmetry() const {
    double r = 0.0;
    const int k = rank();
    std::vector<int> idx(k, 0), sw(k);
    for (std::size_t flat = 0; flat < entries_.size(); ++flat) {
      unflatten(flat, idx);
      for (int a = 0; a < k; ++a)
        for (int b = a + 1; b < k; ++b) {
          sw = idx;
          std::swap(sw[a], sw[b]);
          r = std::max(r, std::abs(entries_[flat] - entries_[offset(sw)]));
        }
    }
    return r;
  }

 private:
  static std::size_t ipow_size(int n, int k) {
    std::size_t s = 1;
    for (int i = 0; i < k; ++i) s *= static_cast<std::size_t>(n);
    return s;
  }

  std::size_t offset(std::span<const int> idx) const {
    if (static_cast<int>(idx.size()) != rank()) throw std::invalid_argument("TensorValue: wrong index count");
    std::size_t o = 0;
    for (int i : idx) {
      if (i < 0 || i >= n_) throw std::out_of_range("TensorValue: index out of range");
      o = o * n_ + static_cast<std::size_t>(i);
    }
    return o;
  }

  void unflatten(std::size_t flat, std::vector<int>& idx) const {
    for (int s = rank() - 1; s >= 0; --s) {
      idx[s] = static_cast<int>(flat % n_);
      flat /= n_;
    }
  }

  TensorValue moved(int slot, const TensorValue& G, Slot from, Slot to) const {
    if (slot < 0 || slot >= rank()) throw std::out_of_range("TensorValue: slot out of range");
    if (variance_[slot] != from) throw std::invalid_argument("TensorValue: slot has wrong variance");
    if (G.rank() != 2 || G.dim() != n_ || G.variance_[0] != to || G.variance_[1] != to)
      throw std::invalid_argument("TensorValue: contraction tensor has wrong type");
    TensorValue out(n_, variance_);
    out.variance_[slot] = to;
    std::vector<int> idx(rank()), src(rank());
    for (std::size_t flat = 0; flat < entries_.size(); ++flat) {
      unflatten(flat, idx);
      double s = 0.0;
      src = idx;
      for (int b = 0; b < n_; ++b) {
        src[slot] = b;
        s += G.at({idx[slot], b}) * entries_[offset(src)];
      }
      out.entries_[flat] = s;
    }
    return out;
  }

  int n_ = 0;
  std::vector<Slot> variance_;
  std::vector<double> entries_;
};

}  // namespace affgeo
