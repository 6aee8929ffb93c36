#pragma once

// Kernel systems: a finite label set, a total table of generator
// superoperators L^{x,y}, and a designated reference label.  The table must
// be Hermitian-symmetric under argument swap: L^{y,x}(b) = (L^{x,y}(b*))*.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cpdk/algebra.hpp"
#include "cpdk/errors.hpp"
#include "cpdk/report.hpp"
#include "cpdk/sampling.hpp"

namespace cpdk {

struct KernelSystem {
  AlgebraDescriptor algebra;
  std::vector<std::string> labels;
  std::vector<SuperOperator> table;  // row-major over label pairs
  int reference = 0;                 // index into labels

  int label_count() const { return static_cast<int>(labels.size()); }

  int label_index(const std::string& name) const {
    for (int i = 0; i < label_count(); ++i)
      if (labels[i] == name) return i;
    throw LookupError("unknown label '" + name + "'");
  }

  const SuperOperator& kernel(int i, int j) const {
    return table[static_cast<size_t>(i) * labels.size() + static_cast<size_t>(j)];
  }

  const SuperOperator& kernel(const std::string& x, const std::string& y) const {
    return kernel(label_index(x), label_index(y));
  }

  const std::string& reference_label() const { return labels[reference]; }
};

/// Swap-symmetry residual of the stored table: for each pair (x,y),
/// the distance between L^{y,x} and b ↦ (L^{x,y}(b*))*.
inline SymmetryReport check_symmetry(const KernelSystem& sys, double tol = 1e-10) {
  SymmetryReport rep;
  const int n = sys.label_count();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double r = (sys.kernel(j, i).mat - adjoint_kernel(sys.kernel(i, j)).mat).norm();
      if (r > rep.max_residual) {
        rep.max_residual = r;
        rep.worst_x = sys.labels[i];
        rep.worst_y = sys.labels[j];
      }
    }
  rep.pass = rep.max_residual <= tol;
  return rep;
}

/// Validating constructor.  `enforce_symmetry` is on for every production
/// path; tests that need deliberately broken tables switch it off and call
/// check_symmetry themselves.
inline KernelSystem make_kernel_system(AlgebraDescriptor algebra,
                                       std::vector<std::string> labels,
                                       std::vector<SuperOperator> table,
                                       const std::string& reference,
                                       bool enforce_symmetry = true,
                                       double symmetry_tol = 1e-10) {
  if (labels.empty()) throw InputError("kernel system needs at least one label");
  for (size_t i = 0; i < labels.size(); ++i)
    for (size_t j = i + 1; j < labels.size(); ++j)
      if (labels[i] == labels[j]) throw InputError("duplicate label '" + labels[i] + "'");
  if (table.size() != labels.size() * labels.size())
    throw IncompleteTableError("kernel table must cover every ordered label pair");
  for (const SuperOperator& s : table) require_same_algebra(s.algebra, algebra);

  KernelSystem sys;
  sys.algebra = std::move(algebra);
  sys.labels = std::move(labels);
  sys.table = std::move(table);
  sys.reference = -1;
  for (int i = 0; i < sys.label_count(); ++i)
    if (sys.labels[i] == reference) sys.reference = i;
  if (sys.reference < 0) throw ReferenceError("reference label '" + reference + "' not present");

  if (enforce_symmetry) {
    const SymmetryReport rep = check_symmetry(sys, symmetry_tol);
    if (!rep.pass)
      throw SymmetryError("kernel table breaks swap symmetry at pair (" + rep.worst_x + ", " +
                          rep.worst_y + "), residual " + std::to_string(rep.max_residual));
  }
  return sys;
}

/// K_t^{x,y}(b) = (exp t L^{x,y})(b).
inline AlgebraElement semigroup_eval(const KernelSystem& sys, const std::string& x,
                                     const std::string& y, double t, const AlgebraElement& b) {
  if (!(t >= 0)) throw NumericInputError("time parameter must be nonnegative");
  return apply(super_exp(sys.kernel(x, y), t), b);
}

/// The constraint sum Σ_ij b_i* L^{x_i,x_j}(a_i* a_j) b_j.  Nonnegative for
/// every tuple with Σ a_j b_j = 0 exactly when the table is conditionally
/// completely positive definite.
inline AlgebraElement ccpd_sum(const KernelSystem& sys, const std::vector<int>& labels,
                               const std::vector<AlgebraElement>& a,
                               const std::vector<AlgebraElement>& b) {
  const size_t n = labels.size();
  if (n == 0 || a.size() != n || b.size() != n)
    throw ShapeError("constraint tuple lists must be nonempty and equally long");
  AlgebraElement sum = zero_element(sys.algebra);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      const SuperOperator& l = sys.kernel(labels[i], labels[j]);
      sum = sum + adjoint(b[i]) * apply(l, adjoint(a[i]) * a[j]) * b[j];
    }
  return sum;
}

struct CcpdWitness {
  std::vector<std::string> labels;
  std::vector<AlgebraElement> a;
  std::vector<AlgebraElement> b;
  AlgebraElement value;
  double min_eig = 0.0;
};

struct CcpdReport {
  int samples = 0;
  double min_eigenvalue = 0.0;
  bool pass = true;
  std::optional<CcpdWitness> witness;
};

/// Randomized check of the conditional positivity condition.  Each sample
/// draws 2 or 3 labels (repetition allowed) and a constraint tuple with
/// Σ a_j b_j = 0, built by solving for the last b; the solve is retried with
/// fresh draws when the last a is near-singular.
inline CcpdReport check_ccpd(const KernelSystem& sys, int sample_count, double tol,
                             std::uint64_t seed) {
  if (sample_count < 1) throw InputError("sample count must be positive");
  Rng rng(seed);
  CcpdReport rep;
  rep.samples = sample_count;
  double global_min = std::numeric_limits<double>::infinity();

  for (int s = 0; s < sample_count; ++s) {
    const int n = rng.uniform_int(2, 3);
    std::vector<int> labels(n);
    for (int& l : labels) l = rng.uniform_int(0, sys.label_count() - 1);

    std::vector<AlgebraElement> a, b;
    for (int attempt = 0;; ++attempt) {
      a.clear();
      b.clear();
      for (int i = 0; i < n; ++i) a.push_back(random_element(sys.algebra, rng));
      AlgebraElement rhs = zero_element(sys.algebra);
      for (int i = 0; i + 1 < n; ++i) {
        b.push_back(random_element(sys.algebra, rng));
        rhs = rhs - a[i] * b[i];
      }
      // Solve a_n b_n = rhs blockwise.
      std::vector<Matrix> last;
      for (int k = 0; k < sys.algebra.block_count(); ++k)
        last.push_back(a[n - 1].blocks[k].colPivHouseholderQr().solve(rhs.blocks[k]));
      b.emplace_back(sys.algebra, std::move(last));

      AlgebraElement resid = zero_element(sys.algebra);
      for (int i = 0; i < n; ++i) resid = resid + a[i] * b[i];
      double scale = 1.0;
      for (int i = 0; i < n; ++i) scale = std::max({scale, cstar_norm(a[i]), cstar_norm(b[i])});
      if (cstar_norm(resid) <= 1e-12 * scale * scale) break;
      if (attempt > 64) throw NumericInputError("could not build a well-conditioned constraint tuple");
    }

    // Common rescaling keeps the sum at desk scale without breaking Σ a_j b_j = 0.
    double amax = 1.0, bmax = 1.0;
    for (int i = 0; i < n; ++i) {
      amax = std::max(amax, cstar_norm(a[i]));
      bmax = std::max(bmax, cstar_norm(b[i]));
    }
    for (int i = 0; i < n; ++i) {
      a[i] = (1.0 / amax) * a[i];
      b[i] = (1.0 / bmax) * b[i];
    }

    const AlgebraElement value = ccpd_sum(sys, labels, a, b);
    const double mi = min_eigenvalue(value);
    if (mi < global_min) {
      global_min = mi;
      if (mi < -tol) {
        CcpdWitness w;
        for (int l : labels) w.labels.push_back(sys.labels[l]);
        w.a = a;
        w.b = b;
        w.value = value;
        w.min_eig = mi;
        rep.witness = std::move(w);
      }
    }
  }

  rep.min_eigenvalue = std::isfinite(global_min) ? global_min : 0.0;
  rep.pass = rep.min_eigenvalue >= -tol;
  if (rep.pass) rep.witness.reset();
  return rep;
}

}  // namespace cpdk
