#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace affgeo {

inline constexpr std::array<int, 16> kHaltonPrimes{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

// Radical inverse of `index` in `base`, in [0, 1).
inline double radical_inverse(std::uint64_t index, int base) {
  double result = 0.0;
  double f = 1.0 / base;
  while (index > 0) {
    result += f * static_cast<double>(index % base);
    index /= base;
    f /= base;
  }
  return result;
}

// Halton point `index` (1-based so the origin is skipped) in the unit cube,
// starting at prime number `prime_offset`.
template <int N>
std::array<double, N> halton(std::uint64_t index, int prime_offset = 0) {
  if (prime_offset + N > static_cast<int>(kHaltonPrimes.size()))
    throw std::out_of_range("halton: dimension too large");
  std::array<double, N> p;
  for (int i = 0; i < N; ++i) p[i] = radical_inverse(index, kHaltonPrimes[prime_offset + i]);
  return p;
}

// Deterministic coefficient stream in [-1, 1], used wherever a "random"
// choice is needed. No RNG is used anywhere in the library.
class QuasiRandomStream {
 public:
  explicit QuasiRandomStream(int base_index = 7, std::uint64_t start = 1)
      : base_(kHaltonPrimes.at(base_index)), index_(start) {}

  double next() { return 2.0 * radical_inverse(index_++, base_) - 1.0; }

  std::vector<double> take(std::size_t n) {
    std::vector<double> v(n);
    for (auto& x : v) x = next();
    return v;
  }

 private:
  int base_;
  std::uint64_t index_;
};

}  // namespace affgeo
