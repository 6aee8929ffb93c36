#pragma once

// Finite-dimensional C*-algebras realized as direct sums of complex matrix
// blocks, plus the superoperator calculus (linear maps on the algebra) in a
// fixed coordinate basis.
//
// Coordinates: stack the columns of each block, blocks in order.  With this
// convention left multiplication by a has matrix ⊕_i (I ⊗ a_i), right
// multiplication has ⊕_i (a_iᵀ ⊗ I), and composition of superoperators is
// plain matrix multiplication.

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "cpdk/errors.hpp"

namespace cpdk {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Shape of a finite-dimensional C*-algebra: sizes of its matrix blocks.
struct AlgebraDescriptor {
  std::vector<int> block_sizes;

  AlgebraDescriptor() = default;
  explicit AlgebraDescriptor(std::vector<int> sizes) : block_sizes(std::move(sizes)) {
    if (block_sizes.empty()) throw ShapeError("algebra needs at least one block");
    for (int n : block_sizes)
      if (n < 1) throw ShapeError("block sizes must be positive");
  }

  int block_count() const { return static_cast<int>(block_sizes.size()); }

  /// Dimension of the faithful block-diagonal representation.
  int embedding_dim() const {
    int n = 0;
    for (int b : block_sizes) n += b;
    return n;
  }

  /// Linear dimension (number of coordinates).
  int coord_dim() const {
    int d = 0;
    for (int b : block_sizes) d += b * b;
    return d;
  }

  /// Coordinate offset of block i.
  int coord_offset(int i) const {
    int off = 0;
    for (int j = 0; j < i; ++j) off += block_sizes[j] * block_sizes[j];
    return off;
  }

  friend bool operator==(const AlgebraDescriptor& a, const AlgebraDescriptor& b) {
    return a.block_sizes == b.block_sizes;
  }
  friend bool operator!=(const AlgebraDescriptor& a, const AlgebraDescriptor& b) {
    return !(a == b);
  }
};

/// Element of a block-diagonal algebra; one dense matrix per block.
struct AlgebraElement {
  AlgebraDescriptor algebra;
  std::vector<Matrix> blocks;

  AlgebraElement() = default;
  AlgebraElement(AlgebraDescriptor desc, std::vector<Matrix> blks)
      : algebra(std::move(desc)), blocks(std::move(blks)) {
    if (static_cast<int>(blocks.size()) != algebra.block_count())
      throw ShapeError("block count mismatch");
    for (int i = 0; i < algebra.block_count(); ++i) {
      const int n = algebra.block_sizes[i];
      if (blocks[i].rows() != n || blocks[i].cols() != n)
        throw ShapeError("block " + std::to_string(i) + " has wrong shape");
      if (!blocks[i].allFinite())
        throw NumericInputError("block " + std::to_string(i) + " has non-finite entries");
    }
  }
};

inline void require_same_algebra(const AlgebraDescriptor& a, const AlgebraDescriptor& b) {
  if (a != b) throw ShapeError("operands live in different algebras");
}

inline AlgebraElement zero_element(const AlgebraDescriptor& desc) {
  std::vector<Matrix> blocks;
  blocks.reserve(desc.block_count());
  for (int n : desc.block_sizes) blocks.push_back(Matrix::Zero(n, n));
  return AlgebraElement(desc, std::move(blocks));
}

inline AlgebraElement unit(const AlgebraDescriptor& desc) {
  std::vector<Matrix> blocks;
  blocks.reserve(desc.block_count());
  for (int n : desc.block_sizes) blocks.push_back(Matrix::Identity(n, n));
  return AlgebraElement(desc, std::move(blocks));
}

/// Matrix unit: 1 at entry (row, col) of the given block, 0 elsewhere.
inline AlgebraElement matrix_unit(const AlgebraDescriptor& desc, int block, int row, int col) {
  if (block < 0 || block >= desc.block_count()) throw ShapeError("block index out of range");
  const int n = desc.block_sizes[block];
  if (row < 0 || row >= n || col < 0 || col >= n) throw ShapeError("entry index out of range");
  AlgebraElement e = zero_element(desc);
  e.blocks[block](row, col) = Complex(1, 0);
  return e;
}

inline AlgebraElement adjoint(const AlgebraElement& a) {
  std::vector<Matrix> blocks;
  blocks.reserve(a.blocks.size());
  for (const Matrix& m : a.blocks) blocks.push_back(m.adjoint());
  return AlgebraElement(a.algebra, std::move(blocks));
}

inline AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b) {
  require_same_algebra(a.algebra, b.algebra);
  std::vector<Matrix> blocks;
  blocks.reserve(a.blocks.size());
  for (size_t i = 0; i < a.blocks.size(); ++i) blocks.push_back(a.blocks[i] + b.blocks[i]);
  return AlgebraElement(a.algebra, std::move(blocks));
}

inline AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b) {
  require_same_algebra(a.algebra, b.algebra);
  std::vector<Matrix> blocks;
  blocks.reserve(a.blocks.size());
  for (size_t i = 0; i < a.blocks.size(); ++i) blocks.push_back(a.blocks[i] - b.blocks[i]);
  return AlgebraElement(a.algebra, std::move(blocks));
}

inline AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
  require_same_algebra(a.algebra, b.algebra);
  std::vector<Matrix> blocks;
  blocks.reserve(a.blocks.size());
  for (size_t i = 0; i < a.blocks.size(); ++i) blocks.push_back(a.blocks[i] * b.blocks[i]);
  return AlgebraElement(a.algebra, std::move(blocks));
}

inline AlgebraElement operator*(const Complex& z, const AlgebraElement& a) {
  std::vector<Matrix> blocks;
  blocks.reserve(a.blocks.size());
  for (const Matrix& m : a.blocks) blocks.push_back(z * m);
  return AlgebraElement(a.algebra, std::move(blocks));
}

inline AlgebraElement operator*(double s, const AlgebraElement& a) {
  return Complex(s, 0) * a;
}

inline AlgebraElement operator-(const AlgebraElement& a) { return Complex(-1, 0) * a; }

/// C*-norm: largest singular value over all blocks.
inline double cstar_norm(const AlgebraElement& a) {
  double r = 0;
  for (const Matrix& m : a.blocks) {
    if (m.rows() == 1) {
      r = std::max(r, std::abs(m(0, 0)));
    } else {
      Eigen::JacobiSVD<Matrix> svd(m);
      r = std::max(r, svd.singularValues()(0));
    }
  }
  return r;
}

inline AlgebraElement hermitian_part(const AlgebraElement& a) {
  return 0.5 * (a + adjoint(a));
}

/// Smallest eigenvalue of the Hermitian part, over all blocks.
inline double min_eigenvalue(const AlgebraElement& a) {
  double r = std::numeric_limits<double>::infinity();
  for (const Matrix& m : a.blocks) {
    Matrix h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
    r = std::min(r, es.eigenvalues().minCoeff());
  }
  return r;
}

/// Self-adjoint up to tol and spectrum bounded below by -tol.
inline bool is_positive(const AlgebraElement& a, double tol = 1e-9) {
  if (cstar_norm(a - adjoint(a)) > tol) return false;
  return min_eigenvalue(a) >= -tol;
}

/// How far a is from being a positive element: Hermitian defect plus
/// negative spectrum overshoot.  Zero exactly when a is positive.
inline double positivity_defect(const AlgebraElement& a) {
  double herm = cstar_norm(a - adjoint(a));
  double neg = std::max(0.0, -min_eigenvalue(a));
  return std::max(herm, neg);
}

/// Faithful representation: the block-diagonal matrix of size embedding_dim().
inline Matrix embed_full(const AlgebraElement& a) {
  const int n = a.algebra.embedding_dim();
  Matrix m = Matrix::Zero(n, n);
  int off = 0;
  for (const Matrix& b : a.blocks) {
    m.block(off, off, b.rows(), b.cols()) = b;
    off += static_cast<int>(b.rows());
  }
  return m;
}

/// Column-stacked coordinates, blocks in order.
inline Vector vec(const AlgebraElement& a) {
  Vector v(a.algebra.coord_dim());
  int off = 0;
  for (const Matrix& b : a.blocks) {
    const int sz = static_cast<int>(b.size());
    v.segment(off, sz) = Eigen::Map<const Vector>(b.data(), sz);
    off += sz;
  }
  return v;
}

inline AlgebraElement unvec(const AlgebraDescriptor& desc, const Vector& v) {
  if (v.size() != desc.coord_dim()) throw ShapeError("coordinate vector has wrong length");
  std::vector<Matrix> blocks;
  blocks.reserve(desc.block_count());
  int off = 0;
  for (int n : desc.block_sizes) {
    blocks.push_back(Eigen::Map<const Matrix>(v.data() + off, n, n));
    off += n * n;
  }
  return AlgebraElement(desc, std::move(blocks));
}

/// Basis dual to the coordinates: element k has vec() equal to the k-th
/// standard basis vector.
inline std::vector<AlgebraElement> basis_elements(const AlgebraDescriptor& desc) {
  std::vector<AlgebraElement> basis;
  basis.reserve(desc.coord_dim());
  for (int i = 0; i < desc.block_count(); ++i) {
    const int n = desc.block_sizes[i];
    for (int col = 0; col < n; ++col)
      for (int row = 0; row < n; ++row) basis.push_back(matrix_unit(desc, i, row, col));
  }
  return basis;
}

/// Linear map on the algebra, stored as its matrix in the vec() coordinates.
struct SuperOperator {
  AlgebraDescriptor algebra;
  Matrix mat;

  SuperOperator() = default;
  SuperOperator(AlgebraDescriptor desc, Matrix m) : algebra(std::move(desc)), mat(std::move(m)) {
    const int d = algebra.coord_dim();
    if (mat.rows() != d || mat.cols() != d) throw ShapeError("superoperator matrix has wrong shape");
    if (!mat.allFinite()) throw NumericInputError("superoperator matrix has non-finite entries");
  }
};

inline SuperOperator super_zero(const AlgebraDescriptor& desc) {
  const int d = desc.coord_dim();
  return SuperOperator(desc, Matrix::Zero(d, d));
}

inline SuperOperator super_identity(const AlgebraDescriptor& desc) {
  const int d = desc.coord_dim();
  return SuperOperator(desc, Matrix::Identity(d, d));
}

inline AlgebraElement apply(const SuperOperator& s, const AlgebraElement& a) {
  require_same_algebra(s.algebra, a.algebra);
  return unvec(s.algebra, s.mat * vec(a));
}

inline SuperOperator operator+(const SuperOperator& p, const SuperOperator& q) {
  require_same_algebra(p.algebra, q.algebra);
  return SuperOperator(p.algebra, p.mat + q.mat);
}

inline SuperOperator operator-(const SuperOperator& p, const SuperOperator& q) {
  require_same_algebra(p.algebra, q.algebra);
  return SuperOperator(p.algebra, p.mat - q.mat);
}

inline SuperOperator operator*(const Complex& z, const SuperOperator& p) {
  return SuperOperator(p.algebra, z * p.mat);
}

inline SuperOperator operator*(double s, const SuperOperator& p) {
  return Complex(s, 0) * p;
}

/// compose(p, q) applies q first, then p.
inline SuperOperator compose(const SuperOperator& p, const SuperOperator& q) {
  require_same_algebra(p.algebra, q.algebra);
  return SuperOperator(p.algebra, p.mat * q.mat);
}

/// Frobenius norm of the coordinate matrix.
inline double super_norm(const SuperOperator& s) { return s.mat.norm(); }

/// b ↦ a b as a superoperator.
inline SuperOperator left_mult_op(const AlgebraElement& a) {
  const int d = a.algebra.coord_dim();
  Matrix m = Matrix::Zero(d, d);
  int off = 0;
  for (const Matrix& blk : a.blocks) {
    const int n = static_cast<int>(blk.rows());
    Matrix id = Matrix::Identity(n, n);
    m.block(off, off, n * n, n * n) = Eigen::kroneckerProduct(id, blk);
    off += n * n;
  }
  return SuperOperator(a.algebra, std::move(m));
}

/// b ↦ b a as a superoperator.
inline SuperOperator right_mult_op(const AlgebraElement& a) {
  const int d = a.algebra.coord_dim();
  Matrix m = Matrix::Zero(d, d);
  int off = 0;
  for (const Matrix& blk : a.blocks) {
    const int n = static_cast<int>(blk.rows());
    Matrix id = Matrix::Identity(n, n);
    m.block(off, off, n * n, n * n) = Eigen::kroneckerProduct(blk.transpose(), id);
    off += n * n;
  }
  return SuperOperator(a.algebra, std::move(m));
}

/// Permutation sending each coordinate (block, row, col) to (block, col, row).
inline std::vector<int> transpose_permutation(const AlgebraDescriptor& desc) {
  std::vector<int> perm(desc.coord_dim());
  for (int i = 0; i < desc.block_count(); ++i) {
    const int n = desc.block_sizes[i];
    const int off = desc.coord_offset(i);
    for (int col = 0; col < n; ++col)
      for (int row = 0; row < n; ++row) perm[off + col * n + row] = off + row * n + col;
  }
  return perm;
}

/// The map b ↦ (s(b*))*.  Matrix form: conjugate by the transpose
/// permutation and take entrywise conjugates.
inline SuperOperator adjoint_kernel(const SuperOperator& s) {
  const std::vector<int> perm = transpose_permutation(s.algebra);
  const int d = s.algebra.coord_dim();
  Matrix m(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) m(perm[r], perm[c]) = std::conj(s.mat(r, c));
  return SuperOperator(s.algebra, std::move(m));
}

/// exp(t s) via scaling-and-squaring on the coordinate matrix.
inline SuperOperator super_exp(const SuperOperator& s, double t) {
  if (!std::isfinite(t)) throw NumericInputError("non-finite time parameter");
  Matrix m = (t * s.mat).exp();
  return SuperOperator(s.algebra, std::move(m));
}

// ---------------------------------------------------------------------------
// Tensor products.

/// Blocks of the tensor product, pairs (i, j) in row-major order.
inline AlgebraDescriptor tensor_algebra(const AlgebraDescriptor& a, const AlgebraDescriptor& b) {
  std::vector<int> sizes;
  sizes.reserve(static_cast<size_t>(a.block_count()) * b.block_count());
  for (int na : a.block_sizes)
    for (int nb : b.block_sizes) sizes.push_back(na * nb);
  return AlgebraDescriptor(std::move(sizes));
}

inline AlgebraElement tensor_element(const AlgebraElement& a, const AlgebraElement& b) {
  AlgebraDescriptor desc = tensor_algebra(a.algebra, b.algebra);
  std::vector<Matrix> blocks;
  blocks.reserve(desc.block_count());
  for (const Matrix& ma : a.blocks)
    for (const Matrix& mb : b.blocks) blocks.push_back(Eigen::kroneckerProduct(ma, mb));
  return AlgebraElement(std::move(desc), std::move(blocks));
}

/// Coordinate permutation aligning kron(vec a, vec b) with vec(a ⊗ b):
/// perm[k] is the tensor-algebra coordinate fed by Kronecker coordinate k.
inline std::vector<int> tensor_coord_perm(const AlgebraDescriptor& a, const AlgebraDescriptor& b) {
  const AlgebraDescriptor t = tensor_algebra(a, b);
  const int db = b.coord_dim();
  std::vector<int> perm(static_cast<size_t>(a.coord_dim()) * db);
  for (int i = 0; i < a.block_count(); ++i) {
    const int n = a.block_sizes[i];
    const int offa = a.coord_offset(i);
    for (int j = 0; j < b.block_count(); ++j) {
      const int m = b.block_sizes[j];
      const int offb = b.coord_offset(j);
      const int offt = t.coord_offset(i * b.block_count() + j);
      for (int s = 0; s < n; ++s)
        for (int r = 0; r < n; ++r)
          for (int q = 0; q < m; ++q)
            for (int p = 0; p < m; ++p) {
              const int kron_idx = (offa + s * n + r) * db + (offb + q * m + p);
              const int tgt_idx = offt + (s * m + q) * (n * m) + (r * m + p);
              perm[kron_idx] = tgt_idx;
            }
    }
  }
  return perm;
}

/// p ⊗ q acting on the tensor algebra: (p ⊗ q)(a ⊗ b) = p(a) ⊗ q(b).
inline SuperOperator tensor_superop(const SuperOperator& p, const SuperOperator& q) {
  const AlgebraDescriptor t = tensor_algebra(p.algebra, q.algebra);
  const std::vector<int> perm = tensor_coord_perm(p.algebra, q.algebra);
  Matrix kron = Eigen::kroneckerProduct(p.mat, q.mat);
  const int d = t.coord_dim();
  Matrix m(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) m(perm[r], perm[c]) = kron(r, c);
  return SuperOperator(t, std::move(m));
}

}  // namespace cpdk
