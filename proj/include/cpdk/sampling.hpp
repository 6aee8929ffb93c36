#pragma once

// Deterministic random draws.  All sampling goes through Rng; the normal
// generator is a fixed Box-Muller transform because the stdlib
// normal_distribution is implementation-defined and would break seed
// reproducibility across platforms.

#include <cmath>
#include <cstdint>
#include <random>

#include "cpdk/algebra.hpp"

namespace cpdk {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform in [0, 1) with 53 bits of mantissa.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller.
  double normal() {
    double u1 = uniform();
    while (u1 == 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  /// Standard complex normal, E|z|^2 = 1.
  Complex cnormal() { return Complex(normal(), normal()) * M_SQRT1_2; }

  /// Uniform integer in [lo, hi], inclusive, rejection-sampled.
  int uniform_int(int lo, int hi) {
    const std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
    std::uint64_t x = gen_();
    while (x >= limit) x = gen_();
    return lo + static_cast<int>(x % range);
  }

  std::uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

inline AlgebraElement random_element(const AlgebraDescriptor& desc, Rng& rng) {
  std::vector<Matrix> blocks;
  blocks.reserve(desc.block_count());
  for (int n : desc.block_sizes) {
    Matrix m(n, n);
    for (int c = 0; c < n; ++c)
      for (int r = 0; r < n; ++r) m(r, c) = rng.cnormal();
    blocks.push_back(std::move(m));
  }
  return AlgebraElement(desc, std::move(blocks));
}

/// Gaussian draw rescaled into the unit ball (norm at most 1).
inline AlgebraElement random_contraction(const AlgebraDescriptor& desc, Rng& rng) {
  AlgebraElement a = random_element(desc, rng);
  const double n = cstar_norm(a);
  return n > 1.0 ? (1.0 / n) * a : a;
}

inline AlgebraElement random_hermitian(const AlgebraDescriptor& desc, Rng& rng) {
  return hermitian_part(random_element(desc, rng));
}

/// Random positive element with spectrum inside [0, 1].
inline AlgebraElement random_positive_contraction(const AlgebraDescriptor& desc, Rng& rng) {
  AlgebraElement g = random_element(desc, rng);
  AlgebraElement p = g * adjoint(g);
  const double n = cstar_norm(p);
  return n > 0 ? (1.0 / n) * p : p;
}

/// Random superoperator with matrix Frobenius norm at most `bound`.
inline SuperOperator random_superop(const AlgebraDescriptor& desc, Rng& rng, double bound) {
  const int d = desc.coord_dim();
  Matrix m(d, d);
  for (int c = 0; c < d; ++c)
    for (int r = 0; r < d; ++r) m(r, c) = rng.cnormal();
  const double n = m.norm();
  if (n > bound && n > 0) m *= bound / n;
  return SuperOperator(desc, std::move(m));
}

}  // namespace cpdk
