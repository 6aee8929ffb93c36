#pragma once

// Outer tensor product of two kernel systems.  Labels are factor pairs; the
// kernel of a pair acts on the tensor algebra by the Leibniz rule
//
//   L^{(x,x'),(y,y')} = L^{x,y} ⊗ id + id ⊗ L^{x',y'},
//
// and factor expressions embed as x ⊗ ω' and ω ⊗ y.

#include <string>
#include <utility>
#include <vector>

#include "cpdk/index.hpp"
#include "cpdk/units.hpp"

namespace cpdk {

inline std::string tensor_label(const std::string& x, const std::string& y) {
  return x + "⊗" + y;
}

struct TensorSystem {
  KernelSystem system;
  KernelSystem factor_a;
  KernelSystem factor_b;
};

inline TensorSystem tensor_system(const KernelSystem& a, const KernelSystem& b) {
  const AlgebraDescriptor desc = tensor_algebra(a.algebra, b.algebra);
  const int la = a.label_count();
  const int lb = b.label_count();

  std::vector<std::string> labels;
  labels.reserve(static_cast<size_t>(la) * lb);
  for (int i = 0; i < la; ++i)
    for (int j = 0; j < lb; ++j) labels.push_back(tensor_label(a.labels[i], b.labels[j]));

  // Precompute the one-sided lifts of every factor kernel.
  const SuperOperator id_a = super_identity(a.algebra);
  const SuperOperator id_b = super_identity(b.algebra);
  std::vector<SuperOperator> left(static_cast<size_t>(la) * la);
  std::vector<SuperOperator> right(static_cast<size_t>(lb) * lb);
  for (int x = 0; x < la; ++x)
    for (int y = 0; y < la; ++y)
      left[static_cast<size_t>(x) * la + y] = tensor_superop(a.kernel(x, y), id_b);
  for (int x = 0; x < lb; ++x)
    for (int y = 0; y < lb; ++y)
      right[static_cast<size_t>(x) * lb + y] = tensor_superop(id_a, b.kernel(x, y));

  const size_t lt = labels.size();
  std::vector<SuperOperator> table(lt * lt);
  for (int x = 0; x < la; ++x)
    for (int xp = 0; xp < lb; ++xp)
      for (int y = 0; y < la; ++y)
        for (int yp = 0; yp < lb; ++yp)
          table[(static_cast<size_t>(x) * lb + xp) * lt + (static_cast<size_t>(y) * lb + yp)] =
              left[static_cast<size_t>(x) * la + y] + right[static_cast<size_t>(xp) * lb + yp];

  TensorSystem ts;
  ts.system = make_kernel_system(desc, std::move(labels), std::move(table),
                                 tensor_label(a.reference_label(), b.reference_label()));
  ts.factor_a = a;
  ts.factor_b = b;
  return ts;
}

/// Lift an expression over the left factor to x ⊗ ω'.
inline UnitExprPtr lift_left(const TensorSystem& ts, const UnitExprPtr& e) {
  if (!e) throw InputError("empty expression");
  const AlgebraElement one_b = unit(ts.factor_b.algebra);
  switch (e->kind) {
    case UnitExpr::Kind::Base:
      return base(tensor_label(e->label, ts.factor_b.reference_label()));
    case UnitExpr::Kind::Shift:
      require_same_algebra(e->shift.algebra, ts.factor_a.algebra);
      return shifted(lift_left(ts, e->inner), tensor_element(e->shift, one_b));
    case UnitExpr::Kind::RightCombo: {
      std::vector<std::pair<UnitExprPtr, AlgebraElement>> terms;
      for (const auto& [x, k] : e->right_terms) {
        require_same_algebra(k.algebra, ts.factor_a.algebra);
        terms.emplace_back(lift_left(ts, x), tensor_element(k, one_b));
      }
      return right_combo(std::move(terms));
    }
    case UnitExpr::Kind::LeftCombo: {
      std::vector<std::pair<AlgebraElement, UnitExprPtr>> terms;
      for (const auto& [k, x] : e->left_terms) {
        require_same_algebra(k.algebra, ts.factor_a.algebra);
        terms.emplace_back(tensor_element(k, one_b), lift_left(ts, x));
      }
      return left_combo(std::move(terms));
    }
  }
  throw InputError("unreachable expression kind");
}

/// Lift an expression over the right factor to ω ⊗ y.
inline UnitExprPtr lift_right(const TensorSystem& ts, const UnitExprPtr& e) {
  if (!e) throw InputError("empty expression");
  const AlgebraElement one_a = unit(ts.factor_a.algebra);
  switch (e->kind) {
    case UnitExpr::Kind::Base:
      return base(tensor_label(ts.factor_a.reference_label(), e->label));
    case UnitExpr::Kind::Shift:
      require_same_algebra(e->shift.algebra, ts.factor_b.algebra);
      return shifted(lift_right(ts, e->inner), tensor_element(one_a, e->shift));
    case UnitExpr::Kind::RightCombo: {
      std::vector<std::pair<UnitExprPtr, AlgebraElement>> terms;
      for (const auto& [x, k] : e->right_terms) {
        require_same_algebra(k.algebra, ts.factor_b.algebra);
        terms.emplace_back(lift_right(ts, x), tensor_element(one_a, k));
      }
      return right_combo(std::move(terms));
    }
    case UnitExpr::Kind::LeftCombo: {
      std::vector<std::pair<AlgebraElement, UnitExprPtr>> terms;
      for (const auto& [k, x] : e->left_terms) {
        require_same_algebra(k.algebra, ts.factor_b.algebra);
        terms.emplace_back(tensor_element(one_a, k), lift_right(ts, x));
      }
      return left_combo(std::move(terms));
    }
  }
  throw InputError("unreachable expression kind");
}

/// The isometric embedding of a factor pair with coefficients:
/// z = (x ⊗ ω')·(1 ⊗ β) + (α ⊗ 1')·(ω ⊗ y), satisfying
/// ⟨z,z⟩ = ⟨x,x⟩ ⊗ β*β + α*α ⊗ ⟨y,y⟩.
inline UnitExprPtr embed_pair(const TensorSystem& ts, const UnitExprPtr& x,
                              const AlgebraElement& beta, const AlgebraElement& alpha,
                              const UnitExprPtr& y) {
  require_same_algebra(beta.algebra, ts.factor_b.algebra);
  require_same_algebra(alpha.algebra, ts.factor_a.algebra);
  const UnitExprPtr omega_t = reference_expr(ts.system);
  const UnitExprPtr zx =
      mul_right(lift_left(ts, x), tensor_element(unit(ts.factor_a.algebra), beta), omega_t);
  const UnitExprPtr zy =
      mul_left(tensor_element(alpha, unit(ts.factor_b.algebra)), lift_right(ts, y), omega_t);
  return add(zx, zy, omega_t, ts.system.algebra);
}

/// Randomized check of the factor-pair calculus: inner-product splitting,
/// one-sided multiplications, elementary decomposition, cross commutation,
/// and vanishing of the cross inner product.
inline CheckReport check_tensor_identities(const TensorSystem& ts, int samples, std::uint64_t seed,
                                           double tol = 1e-9) {
  if (samples < 1) throw InputError("sample count must be positive");
  Rng rng(seed);
  CheckReport rep;
  rep.items = {{"inner_splits"},      {"right_mult_left_factor"}, {"right_mult_right_factor"},
               {"elementary_splits"}, {"cross_commute"},          {"cross_inner_zero"}};
  auto record = [&](const std::string& name, double r) {
    for (CheckItem& c : rep.items)
      if (c.name == name) c.residual = std::max(c.residual, r);
  };

  const KernelSystem& t = ts.system;
  const AlgebraElement one_a = unit(ts.factor_a.algebra);
  const AlgebraElement one_b = unit(ts.factor_b.algebra);

  for (int s = 0; s < samples; ++s) {
    const std::string& xa = ts.factor_a.labels[rng.uniform_int(0, ts.factor_a.label_count() - 1)];
    const std::string& ya = ts.factor_a.labels[rng.uniform_int(0, ts.factor_a.label_count() - 1)];
    const std::string& xb = ts.factor_b.labels[rng.uniform_int(0, ts.factor_b.label_count() - 1)];
    const std::string& yb = ts.factor_b.labels[rng.uniform_int(0, ts.factor_b.label_count() - 1)];
    const UnitExprPtr ex = random_unit_expr(ts.factor_a, rng);
    const UnitExprPtr ey = random_unit_expr(ts.factor_b, rng);
    const AlgebraElement alpha = random_contraction(ts.factor_a.algebra, rng);
    const AlgebraElement beta = random_contraction(ts.factor_b.algebra, rng);

    record("inner_splits",
           cstar_norm(inner(t, base(tensor_label(xa, xb)), base(tensor_label(ya, yb))) -
                      tensor_element(one_a, inner(ts.factor_b, base(xb), base(yb))) -
                      tensor_element(inner(ts.factor_a, base(xa), base(ya)), one_b)));

    record("right_mult_left_factor",
           unit_distance(t,
                         mul_right(t, lift_left(ts, ex), tensor_element(alpha, one_b)),
                         lift_left(ts, mul_right(ts.factor_a, ex, alpha))));
    record("right_mult_right_factor",
           unit_distance(t,
                         mul_right(t, lift_right(ts, ey), tensor_element(one_a, beta)),
                         lift_right(ts, mul_right(ts.factor_b, ey, beta))));

    record("elementary_splits",
           unit_distance(t, base(tensor_label(xa, xb)),
                         add(t, lift_left(ts, base(xa)), lift_right(ts, base(xb)))));

    const AlgebraElement cb = tensor_element(one_a, beta);
    const AlgebraElement ca = tensor_element(alpha, one_b);
    record("cross_commute",
           std::max(unit_distance(t, mul_right(t, lift_left(ts, ex), cb),
                                  mul_left(t, cb, lift_left(ts, ex))),
                    unit_distance(t, mul_right(t, lift_right(ts, ey), ca),
                                  mul_left(t, ca, lift_right(ts, ey)))));

    record("cross_inner_zero", cstar_norm(inner(t, lift_left(ts, ex), lift_right(ts, ey))));
  }

  for (CheckItem& c : rep.items) c.pass = c.residual <= tol;
  return rep;
}

}  // namespace cpdk
