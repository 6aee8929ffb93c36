#pragma once

// Formal unit expressions over a kernel system and their evaluated kernels.
//
// An expression is a tree: a base label, an exponential shift of a unit by an
// algebra element, or a coefficient combination (coefficients acting on the
// right or on the left, summing to the algebra unit).  Kernels of compound
// expressions expand recursively:
//
//   L^{x^β, w}      = L^{x,w} + (b ↦ β*·b)
//   L^{Σ x_i κ_i, w}(b) = Σ κ_i*·L^{x_i,w}(b)
//   L^{Σ κ_i x_i, w}(b) = Σ L^{x_i,w}(κ_i*·b)
//
// and mirrored rules on the right argument via swap symmetry.  Equality of
// units is kernel equality: all four pairwise kernels of (e1, e2) agree.

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cpdk/kernels.hpp"

namespace cpdk {

struct UnitExpr;
using UnitExprPtr = std::shared_ptr<const UnitExpr>;

struct UnitExpr {
  enum class Kind { Base, Shift, RightCombo, LeftCombo };

  Kind kind = Kind::Base;
  std::string label;                                            // Base
  UnitExprPtr inner;                                            // Shift
  AlgebraElement shift;                                         // Shift
  std::vector<std::pair<UnitExprPtr, AlgebraElement>> right_terms;  // RightCombo: (unit, kappa)
  std::vector<std::pair<AlgebraElement, UnitExprPtr>> left_terms;   // LeftCombo: (kappa, unit)
};

inline UnitExprPtr base(std::string label) {
  auto e = std::make_shared<UnitExpr>();
  e->kind = UnitExpr::Kind::Base;
  e->label = std::move(label);
  return e;
}

inline UnitExprPtr shifted(UnitExprPtr inner, AlgebraElement beta) {
  if (!inner) throw InputError("shift of an empty expression");
  auto e = std::make_shared<UnitExpr>();
  e->kind = UnitExpr::Kind::Shift;
  e->inner = std::move(inner);
  e->shift = std::move(beta);
  return e;
}

inline UnitExprPtr right_combo(std::vector<std::pair<UnitExprPtr, AlgebraElement>> terms) {
  if (terms.empty()) throw InputError("combination needs at least one term");
  auto e = std::make_shared<UnitExpr>();
  e->kind = UnitExpr::Kind::RightCombo;
  e->right_terms = std::move(terms);
  return e;
}

inline UnitExprPtr left_combo(std::vector<std::pair<AlgebraElement, UnitExprPtr>> terms) {
  if (terms.empty()) throw InputError("combination needs at least one term");
  auto e = std::make_shared<UnitExpr>();
  e->kind = UnitExpr::Kind::LeftCombo;
  e->left_terms = std::move(terms);
  return e;
}

// Module operations, all relative to an explicit reference expression.
// x + y   = x ⊞ y ⊞ (−ω)
// x · a   = x a ⊞ ω (1−a)
// a · x   = a x ⊞ (1−a) ω
// −x      = 2ω ⊞ (−x)

inline UnitExprPtr add(const UnitExprPtr& x, const UnitExprPtr& y, const UnitExprPtr& omega,
                       const AlgebraDescriptor& desc) {
  const AlgebraElement one = unit(desc);
  return right_combo({{x, one}, {y, one}, {omega, -one}});
}

inline UnitExprPtr neg(const UnitExprPtr& x, const UnitExprPtr& omega,
                       const AlgebraDescriptor& desc) {
  const AlgebraElement one = unit(desc);
  return right_combo({{omega, 2.0 * one}, {x, -one}});
}

inline UnitExprPtr sub(const UnitExprPtr& x, const UnitExprPtr& y, const UnitExprPtr& omega,
                       const AlgebraDescriptor& desc) {
  const AlgebraElement one = unit(desc);
  return right_combo({{x, one}, {y, -one}, {omega, one}});
}

inline UnitExprPtr mul_right(const UnitExprPtr& x, const AlgebraElement& a,
                             const UnitExprPtr& omega) {
  return right_combo({{x, a}, {omega, unit(a.algebra) - a}});
}

inline UnitExprPtr mul_left(const AlgebraElement& a, const UnitExprPtr& x,
                            const UnitExprPtr& omega) {
  return left_combo({{a, x}, {unit(a.algebra) - a, omega}});
}

inline UnitExprPtr smul(const Complex& z, const UnitExprPtr& x, const UnitExprPtr& omega,
                        const AlgebraDescriptor& desc) {
  return mul_right(x, z * unit(desc), omega);
}

// Convenience overloads using the system reference.
inline UnitExprPtr reference_expr(const KernelSystem& sys) { return base(sys.reference_label()); }

inline UnitExprPtr add(const KernelSystem& sys, const UnitExprPtr& x, const UnitExprPtr& y) {
  return add(x, y, reference_expr(sys), sys.algebra);
}
inline UnitExprPtr neg(const KernelSystem& sys, const UnitExprPtr& x) {
  return neg(x, reference_expr(sys), sys.algebra);
}
inline UnitExprPtr sub(const KernelSystem& sys, const UnitExprPtr& x, const UnitExprPtr& y) {
  return sub(x, y, reference_expr(sys), sys.algebra);
}
inline UnitExprPtr mul_right(const KernelSystem& sys, const UnitExprPtr& x,
                             const AlgebraElement& a) {
  return mul_right(x, a, reference_expr(sys));
}
inline UnitExprPtr mul_left(const KernelSystem& sys, const AlgebraElement& a,
                            const UnitExprPtr& x) {
  return mul_left(a, x, reference_expr(sys));
}
inline UnitExprPtr smul(const KernelSystem& sys, const Complex& z, const UnitExprPtr& x) {
  return smul(z, x, reference_expr(sys), sys.algebra);
}

namespace detail {

inline void require_combo_normalized(const std::vector<AlgebraElement>& kappas,
                                     const AlgebraDescriptor& desc) {
  AlgebraElement sum = zero_element(desc);
  for (const AlgebraElement& k : kappas) {
    require_same_algebra(k.algebra, desc);
    sum = sum + k;
  }
  const double r = cstar_norm(sum - unit(desc));
  if (r > 1e-12)
    throw NormalizationError("combination coefficients sum to unit + " + std::to_string(r));
}

}  // namespace detail

/// Evaluated kernel L^{e1,e2} of two expressions over the system.
inline SuperOperator eval_kernel(const KernelSystem& sys, const UnitExprPtr& e1,
                                 const UnitExprPtr& e2) {
  if (!e1 || !e2) throw InputError("empty expression");
  switch (e1->kind) {
    case UnitExpr::Kind::Shift:
      return eval_kernel(sys, e1->inner, e2) + left_mult_op(adjoint(e1->shift));
    case UnitExpr::Kind::RightCombo: {
      std::vector<AlgebraElement> kappas;
      for (const auto& [x, k] : e1->right_terms) kappas.push_back(k);
      detail::require_combo_normalized(kappas, sys.algebra);
      SuperOperator acc = super_zero(sys.algebra);
      for (const auto& [x, k] : e1->right_terms)
        acc = acc + compose(left_mult_op(adjoint(k)), eval_kernel(sys, x, e2));
      return acc;
    }
    case UnitExpr::Kind::LeftCombo: {
      std::vector<AlgebraElement> kappas;
      for (const auto& [k, x] : e1->left_terms) kappas.push_back(k);
      detail::require_combo_normalized(kappas, sys.algebra);
      SuperOperator acc = super_zero(sys.algebra);
      for (const auto& [k, x] : e1->left_terms)
        acc = acc + compose(eval_kernel(sys, x, e2), left_mult_op(adjoint(k)));
      return acc;
    }
    case UnitExpr::Kind::Base:
      break;
  }
  // e1 is a base label; peel e2.
  switch (e2->kind) {
    case UnitExpr::Kind::Shift:
      return eval_kernel(sys, e1, e2->inner) + right_mult_op(e2->shift);
    case UnitExpr::Kind::RightCombo: {
      std::vector<AlgebraElement> kappas;
      for (const auto& [y, k] : e2->right_terms) kappas.push_back(k);
      detail::require_combo_normalized(kappas, sys.algebra);
      SuperOperator acc = super_zero(sys.algebra);
      for (const auto& [y, k] : e2->right_terms)
        acc = acc + compose(right_mult_op(k), eval_kernel(sys, e1, y));
      return acc;
    }
    case UnitExpr::Kind::LeftCombo: {
      std::vector<AlgebraElement> kappas;
      for (const auto& [k, y] : e2->left_terms) kappas.push_back(k);
      detail::require_combo_normalized(kappas, sys.algebra);
      SuperOperator acc = super_zero(sys.algebra);
      for (const auto& [k, y] : e2->left_terms)
        acc = acc + compose(eval_kernel(sys, e1, y), right_mult_op(k));
      return acc;
    }
    case UnitExpr::Kind::Base:
      return sys.kernel(e1->label, e2->label);
  }
  throw InputError("unreachable expression kind");
}

/// Distance between two expressions as units: the largest pairwise matrix
/// distance among the four kernels L^{ei,ej}.  Two expressions denote the
/// same unit exactly when all four kernels coincide.
inline double unit_distance(const KernelSystem& sys, const UnitExprPtr& e1,
                            const UnitExprPtr& e2) {
  const Matrix k11 = eval_kernel(sys, e1, e1).mat;
  const Matrix k12 = eval_kernel(sys, e1, e2).mat;
  const Matrix k21 = eval_kernel(sys, e2, e1).mat;
  const Matrix k22 = eval_kernel(sys, e2, e2).mat;
  double r = (k11 - k12).norm();
  r = std::max(r, (k11 - k21).norm());
  r = std::max(r, (k11 - k22).norm());
  r = std::max(r, (k12 - k21).norm());
  r = std::max(r, (k12 - k22).norm());
  r = std::max(r, (k21 - k22).norm());
  return r;
}

inline bool units_equal(const KernelSystem& sys, const UnitExprPtr& e1, const UnitExprPtr& e2,
                        double tol = 1e-9) {
  return unit_distance(sys, e1, e2) <= tol;
}

/// Shift x so that the resulting unit z has apply(L^{z,z}, 1) = 0.
inline UnitExprPtr normalize(const KernelSystem& sys, const UnitExprPtr& x) {
  const AlgebraElement beta = apply(eval_kernel(sys, x, x), unit(sys.algebra));
  if (cstar_norm(beta - adjoint(beta)) > 1e-9)
    throw SymmetryError("diagonal kernel value is not self-adjoint; table is invalid");
  return shifted(x, -0.5 * beta);
}

/// If e1 is an exponential shift of e2, return the shift element.
/// Tests the difference kernel D_ξ = L^{e1,ξ} − L^{e2,ξ} against pure left
/// multiplication for ξ ranging over {e1, e2} and all base labels, then
/// confirms with units_equal.
inline std::optional<AlgebraElement> detect_shift(const KernelSystem& sys, const UnitExprPtr& e1,
                                                  const UnitExprPtr& e2, double tol = 1e-9) {
  std::vector<UnitExprPtr> probes = {e1, e2};
  for (const std::string& l : sys.labels) probes.push_back(base(l));

  std::optional<AlgebraElement> beta_star;
  for (const UnitExprPtr& xi : probes) {
    const SuperOperator d = eval_kernel(sys, e1, xi) - eval_kernel(sys, e2, xi);
    const AlgebraElement cand = apply(d, unit(sys.algebra));
    if (!beta_star) beta_star = cand;
    if ((d.mat - left_mult_op(*beta_star).mat).norm() > tol) return std::nullopt;
  }
  const AlgebraElement beta = adjoint(*beta_star);
  if (!units_equal(sys, e1, shifted(e2, beta), tol)) return std::nullopt;
  return beta;
}

/// Random expression tree over the system's labels, for randomized suites.
inline UnitExprPtr random_unit_expr(const KernelSystem& sys, Rng& rng, int max_depth = 2) {
  if (max_depth <= 0 || rng.uniform() < 0.3)
    return base(sys.labels[rng.uniform_int(0, sys.label_count() - 1)]);
  switch (rng.uniform_int(0, 2)) {
    case 0:
      return shifted(random_unit_expr(sys, rng, max_depth - 1), random_contraction(sys.algebra, rng));
    case 1: {
      const AlgebraElement k = random_contraction(sys.algebra, rng);
      return right_combo({{random_unit_expr(sys, rng, max_depth - 1), k},
                          {random_unit_expr(sys, rng, max_depth - 1), unit(sys.algebra) - k}});
    }
    default: {
      const AlgebraElement k = random_contraction(sys.algebra, rng);
      return left_combo({{k, random_unit_expr(sys, rng, max_depth - 1)},
                         {unit(sys.algebra) - k, random_unit_expr(sys, rng, max_depth - 1)}});
    }
  }
}

/// Randomized check of the bimodule laws for the derived operations.
inline CheckReport check_module_axioms(const KernelSystem& sys, int instances, double tol,
                                       std::uint64_t seed) {
  if (instances < 1) throw InputError("instance count must be positive");
  Rng rng(seed);
  CheckReport rep;
  rep.items = {{"add_commutative"},    {"add_associative"},      {"add_identity"},
               {"add_inverse"},        {"mul_right_associative"}, {"mul_left_associative"},
               {"left_distributive"},  {"right_distributive"},    {"unit_coefficient"}};

  auto record = [&](const std::string& name, double r) {
    for (CheckItem& c : rep.items)
      if (c.name == name) c.residual = std::max(c.residual, r);
  };

  const UnitExprPtr omega = reference_expr(sys);
  for (int s = 0; s < instances; ++s) {
    const UnitExprPtr x = random_unit_expr(sys, rng);
    const UnitExprPtr y = random_unit_expr(sys, rng);
    const UnitExprPtr z = random_unit_expr(sys, rng);
    const AlgebraElement a = random_contraction(sys.algebra, rng);
    const AlgebraElement b = random_contraction(sys.algebra, rng);

    record("add_commutative", unit_distance(sys, add(sys, x, y), add(sys, y, x)));
    record("add_associative",
           unit_distance(sys, add(sys, add(sys, x, y), z), add(sys, x, add(sys, y, z))));
    record("add_identity", unit_distance(sys, add(sys, x, omega), x));
    record("add_inverse", unit_distance(sys, add(sys, x, neg(sys, x)), omega));
    record("mul_right_associative",
           unit_distance(sys, mul_right(sys, mul_right(sys, x, a), b), mul_right(sys, x, a * b)));
    record("mul_left_associative",
           unit_distance(sys, mul_left(sys, a, mul_left(sys, b, x)), mul_left(sys, a * b, x)));
    record("left_distributive",
           unit_distance(sys, mul_left(sys, a, add(sys, x, y)),
                         add(sys, mul_left(sys, a, x), mul_left(sys, a, y))));
    record("right_distributive",
           unit_distance(sys, mul_right(sys, add(sys, x, y), a),
                         add(sys, mul_right(sys, x, a), mul_right(sys, y, a))));
    record("unit_coefficient",
           std::max(unit_distance(sys, mul_left(sys, unit(sys.algebra), x), x),
                    unit_distance(sys, mul_right(sys, x, unit(sys.algebra)), x)));
  }

  for (CheckItem& c : rep.items) c.pass = c.residual <= tol;
  return rep;
}

}  // namespace cpdk
