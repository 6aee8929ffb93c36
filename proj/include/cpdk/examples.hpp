#pragma once

// Constructors for the two closed-form kernel families and the randomized
// inner-product-form generator used for fuzzing.
//
// Module family: units carry module vectors ζ ∈ B^m and exponents β; the
// kernel of a pair is b ↦ ⟨ζ, b ζ'⟩ + β*·b + b·β' with the componentwise
// module inner product ⟨ζ, b ζ'⟩ = Σ_k ζ_k*·b·ζ'_k.
//
// Twisted family: over one matrix block, units carry A ∈ B together with a
// global self-adjoint twist h; the kernel of a pair is
// b ↦ b·(A' − ih) + (A* + ih)·b.  All its units collapse to rank zero.

#include <string>
#include <utility>
#include <vector>

#include "cpdk/kernels.hpp"

namespace cpdk {

struct FockUnit {
  std::string name;
  std::vector<AlgebraElement> zeta;
  AlgebraElement beta;
};

struct FockSpec {
  AlgebraDescriptor algebra;
  int fock_dim = 0;
  std::vector<FockUnit> units;
};

/// Σ_k ζ_k*·b·ζ'_k.
inline AlgebraElement componentwise_inner(const std::vector<AlgebraElement>& zx,
                                          const std::vector<AlgebraElement>& zy,
                                          const AlgebraElement& b) {
  if (zx.size() != zy.size()) throw ShapeError("module vectors have different lengths");
  AlgebraElement sum = zero_element(b.algebra);
  for (size_t k = 0; k < zx.size(); ++k) sum = sum + adjoint(zx[k]) * b * zy[k];
  return sum;
}

inline KernelSystem fock_system(const FockSpec& spec) {
  if (spec.fock_dim < 0) throw InputError("module dimension must be nonnegative");
  if (spec.units.empty()) throw InputError("need at least one unit");
  int ref = -1;
  for (size_t i = 0; i < spec.units.size(); ++i) {
    const FockUnit& u = spec.units[i];
    if (static_cast<int>(u.zeta.size()) != spec.fock_dim)
      throw ShapeError("unit '" + u.name + "' has a module vector of the wrong length");
    require_same_algebra(u.beta.algebra, spec.algebra);
    double norm = cstar_norm(u.beta);
    for (const AlgebraElement& z : u.zeta) {
      require_same_algebra(z.algebra, spec.algebra);
      norm = std::max(norm, cstar_norm(z));
    }
    if (ref < 0 && norm == 0.0) ref = static_cast<int>(i);
  }
  if (ref < 0) throw InputError("unit list must include the zero reference unit");

  const int nl = static_cast<int>(spec.units.size());
  std::vector<std::string> labels;
  for (const FockUnit& u : spec.units) labels.push_back(u.name);

  std::vector<SuperOperator> table;
  table.reserve(static_cast<size_t>(nl) * nl);
  for (int x = 0; x < nl; ++x)
    for (int y = 0; y < nl; ++y) {
      Matrix m = left_mult_op(adjoint(spec.units[x].beta)).mat +
                 right_mult_op(spec.units[y].beta).mat;
      for (int k = 0; k < spec.fock_dim; ++k)
        m += left_mult_op(adjoint(spec.units[x].zeta[k])).mat *
             right_mult_op(spec.units[y].zeta[k]).mat;
      table.emplace_back(spec.algebra, std::move(m));
    }
  return make_kernel_system(spec.algebra, std::move(labels), std::move(table),
                            spec.units[ref].name);
}

struct TwistedUnit {
  std::string name;
  AlgebraElement a;
};

struct TwistedSpec {
  AlgebraDescriptor algebra;  // single matrix block
  AlgebraElement h;           // self-adjoint twist
  std::vector<TwistedUnit> units;
};

inline KernelSystem twisted_system(const TwistedSpec& spec) {
  if (spec.algebra.block_count() != 1)
    throw InputError("twisted family is defined over a single matrix block");
  require_same_algebra(spec.h.algebra, spec.algebra);
  if (cstar_norm(spec.h - adjoint(spec.h)) > 1e-12)
    throw InputError("twist element must be self-adjoint");
  if (spec.units.empty()) throw InputError("need at least one unit");

  int ref = -1;
  for (size_t i = 0; i < spec.units.size(); ++i) {
    require_same_algebra(spec.units[i].a.algebra, spec.algebra);
    if (ref < 0 && cstar_norm(spec.units[i].a) == 0.0) ref = static_cast<int>(i);
  }
  if (ref < 0) throw InputError("unit list must include the zero reference unit");

  const Complex i_unit(0, 1);
  const AlgebraElement ih = i_unit * spec.h;
  const int nl = static_cast<int>(spec.units.size());
  std::vector<std::string> labels;
  for (const TwistedUnit& u : spec.units) labels.push_back(u.name);

  std::vector<SuperOperator> table;
  table.reserve(static_cast<size_t>(nl) * nl);
  for (int x = 0; x < nl; ++x)
    for (int y = 0; y < nl; ++y)
      table.push_back(right_mult_op(spec.units[y].a - ih) +
                      left_mult_op(adjoint(spec.units[x].a) + ih));
  return make_kernel_system(spec.algebra, std::move(labels), std::move(table),
                            spec.units[ref].name);
}

/// Random module-family spec: unit_count units including the reference,
/// Gaussian ζ components and exponents rescaled into the unit ball.
inline FockSpec random_fock_spec(const AlgebraDescriptor& algebra, int fock_dim, int unit_count,
                                 std::uint64_t seed) {
  if (fock_dim < 1) throw InputError("module dimension must be positive");
  if (unit_count < 1) throw InputError("unit count must be positive");
  Rng rng(seed);
  FockSpec spec;
  spec.algebra = algebra;
  spec.fock_dim = fock_dim;

  FockUnit ref;
  ref.name = "w";
  ref.beta = zero_element(algebra);
  ref.zeta.assign(fock_dim, zero_element(algebra));
  spec.units.push_back(std::move(ref));

  for (int i = 1; i < unit_count; ++i) {
    FockUnit u;
    u.name = "u" + std::to_string(i);
    for (int k = 0; k < fock_dim; ++k) u.zeta.push_back(random_contraction(algebra, rng));
    u.beta = random_contraction(algebra, rng);
    spec.units.push_back(std::move(u));
  }
  return spec;
}

/// Random system in inner-product form; conditionally positive by
/// construction, so it doubles as a fuzzing source.
inline KernelSystem random_ce_system(const AlgebraDescriptor& algebra, int fock_dim,
                                     int unit_count, std::uint64_t seed) {
  return fock_system(random_fock_spec(algebra, fock_dim, unit_count, seed));
}

}  // namespace cpdk
