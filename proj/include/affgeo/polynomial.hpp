#pragma once

// Polynomial vector fields of total degree ≤ 2 with coefficients taken from
// a deterministic low-discrepancy stream, centred at a chart point.

#include <vector>

#include "affgeo/field.hpp"
#include "affgeo/halton.hpp"

namespace affgeo {

template <int N>
struct QuadraticPolynomial {
  double c0 = 0.0;
  Vec<double, N> c1{};
  Mat<double, N> c2{};  // upper triangle used
  Vec<double, N> centre{};

  template <class S>
  S operator()(const Vec<S, N>& x) const {
    Vec<S, N> y;
    for (int i = 0; i < N; ++i) y[i] = x[i] - centre[i];
    S r(c0);
    for (int i = 0; i < N; ++i) {
      r += c1[i] * y[i];
      for (int j = i; j < N; ++j) r += c2(i, j) * y[i] * y[j];
    }
    return r;
  }
};

template <int N>
QuadraticPolynomial<N> make_quadratic(QuasiRandomStream& s, const Vec<double, N>& centre) {
  QuadraticPolynomial<N> p;
  p.centre = centre;
  p.c0 = s.next();
  for (auto& c : p.c1) c = s.next();
  for (int i = 0; i < N; ++i)
    for (int j = i; j < N; ++j) p.c2(i, j) = s.next();
  return p;
}

template <int N>
VectorField<N> polynomial_vector_field(QuasiRandomStream& s, const Vec<double, N>& centre) {
  std::array<QuadraticPolynomial<N>, N> comps;
  for (auto& c : comps) c = make_quadratic<N>(s, centre);
  return VectorField<N>([comps](const auto& x) {
    using S = std::decay_t<decltype(x[0])>;
    Vec<S, N> r;
    for (int k = 0; k < N; ++k) r[k] = comps[k](x);
    return r;
  });
}

template <int N>
struct FieldTriple {
  VectorField<N> X, Y, Z;
};

// `count` deterministic triples; stream index `salt` keeps suites independent.
template <int N>
std::vector<FieldTriple<N>> polynomial_triples(int count, const Vec<double, N>& centre, std::uint64_t salt = 1) {
  QuasiRandomStream s(7, salt);
  std::vector<FieldTriple<N>> out;
  for (int t = 0; t < count; ++t) {
    auto X = polynomial_vector_field<N>(s, centre);
    auto Y = polynomial_vector_field<N>(s, centre);
    auto Z = polynomial_vector_field<N>(s, centre);
    out.push_back({std::move(X), std::move(Y), std::move(Z)});
  }
  return out;
}

}  // namespace affgeo
