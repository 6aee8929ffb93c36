#pragma once

// Test-side reference implementations, kept deliberately independent of the
// library code paths they are used to check: the matrix exponential is a
// plain scaled Taylor series, Kronecker products and vectorization are index
// loops, and superoperator matrices are assembled column by column from an
// element-level action.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "cpdk/algebra.hpp"

namespace oracles {

using cpdk::AlgebraDescriptor;
using cpdk::AlgebraElement;
using cpdk::Complex;
using cpdk::Matrix;
using cpdk::Vector;

inline Matrix taylor_exp(const Matrix& a) {
  const double nrm = a.cwiseAbs().sum();
  int squarings = 0;
  Matrix t = a;
  while (t.cwiseAbs().sum() > 0.25) {
    t *= 0.5;
    ++squarings;
  }
  Matrix result = Matrix::Identity(a.rows(), a.cols());
  Matrix term = Matrix::Identity(a.rows(), a.cols());
  for (int k = 1; k <= 30; ++k) {
    term = term * t / static_cast<double>(k);
    result += term;
  }
  (void)nrm;
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

inline Matrix kron_manual(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index k = 0; k < b.rows(); ++k)
        for (Eigen::Index l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

// Coordinates stack the columns of each block, blocks in order.
inline Vector vec_manual(const AlgebraElement& a) {
  Vector v(a.algebra.coord_dim());
  Eigen::Index pos = 0;
  for (std::size_t blk = 0; blk < a.blocks.size(); ++blk) {
    const Matrix& m = a.blocks[blk];
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      for (Eigen::Index r = 0; r < m.rows(); ++r) v(pos++) = m(r, c);
  }
  return v;
}

inline AlgebraElement basis_element(const AlgebraDescriptor& desc, int coord) {
  AlgebraElement e = cpdk::zero_element(desc);
  int pos = 0;
  for (std::size_t blk = 0; blk < desc.block_sizes.size(); ++blk) {
    const int n = desc.block_sizes[blk];
    for (int c = 0; c < n; ++c)
      for (int r = 0; r < n; ++r) {
        if (pos == coord) e.blocks[blk](r, c) = 1.0;
        ++pos;
      }
  }
  return e;
}

// Column k of the matrix is the coordinates of action applied to basis k.
inline Matrix superop_from_action(
    const AlgebraDescriptor& desc,
    const std::function<AlgebraElement(const AlgebraElement&)>& action) {
  const int d = desc.coord_dim();
  Matrix m(d, d);
  for (int k = 0; k < d; ++k) m.col(k) = vec_manual(action(basis_element(desc, k)));
  return m;
}

inline int svd_rank(const Matrix& m, double rel_tol) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return 0;
  const double cut = rel_tol * std::max(sv(0), 1.0);
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++rank;
  return rank;
}

inline double frob(const Matrix& m) { return m.norm(); }

inline double elem_norm(const AlgebraElement& a) {
  double s = 0;
  for (const Matrix& b : a.blocks) s += b.squaredNorm();
  return std::sqrt(s);
}

// Inner-product-form kernel action: sum_k zx_k* b zy_k + bx* b + b by.
inline AlgebraElement fock_action(const std::vector<AlgebraElement>& zx, const AlgebraElement& bx,
                                  const std::vector<AlgebraElement>& zy, const AlgebraElement& by,
                                  const AlgebraElement& b) {
  AlgebraElement out = cpdk::adjoint(bx) * b + b * by;
  for (std::size_t k = 0; k < zx.size(); ++k) out = out + cpdk::adjoint(zx[k]) * b * zy[k];
  return out;
}

// Commutation-twisted kernel action: b (ay - ih) + (ax* + ih) b.
inline AlgebraElement twisted_action(const AlgebraElement& ax, const AlgebraElement& ay,
                                     const AlgebraElement& h, const AlgebraElement& b) {
  const Complex i(0, 1);
  return b * (ay - i * h) + (cpdk::adjoint(ax) + i * h) * b;
}

}  // namespace oracles
