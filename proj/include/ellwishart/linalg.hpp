#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "ellwishart/error.hpp"

namespace ellw {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Column-major vectorization: vec(M)[j*rows + i] = M(i, j).
VectorXd vec(const Eigen::Ref<const MatrixXd>& m);

/// Inverse of vec. Throws dimension_error on length mismatch.
MatrixXd unvec(const Eigen::Ref<const VectorXd>& v, Eigen::Index rows, Eigen::Index cols);

/// Kronecker product, (A (x) B)(i*rB+k, j*cB+l) = A(i,j) B(k,l).
MatrixXd kron(const Eigen::Ref<const MatrixXd>& a, const Eigen::Ref<const MatrixXd>& b);

/// Lower Cholesky factor L with L L^T = sigma; strictly positive diagonal.
/// Throws not_positive_definite when a pivot is <= 0.
MatrixXd cholesky_lower(const Eigen::Ref<const MatrixXd>& sigma);

/// Symmetric square root via eigendecomposition. Rejects matrices whose
/// smallest eigenvalue is <= 1e-12 times the largest.
MatrixXd symmetric_sqrt(const Eigen::Ref<const MatrixXd>& sigma);

/// Validated symmetric positive-definite matrix. Construction enforces
/// symmetry (|a_ij - a_ji| <= tol * max(1, |a_ij|)) and positive
/// definiteness (Cholesky succeeds).
class SpdMatrix {
 public:
  explicit SpdMatrix(MatrixXd m, double symmetry_tol = 1e-12);

  Eigen::Index dim() const { return mat_.rows(); }
  const MatrixXd& mat() const { return mat_; }

 private:
  MatrixXd mat_;
};

/// Weighted sum of index permutations acting on length-dim vectors. This is
/// the lazy representation of the commutation-matrix compositions used by the
/// Kronecker-moment engine; nothing here is ever materialized densely except
/// for small-dimension testing.
///
/// Each term applies as out[i] += weight * in[perm[i]].
class PermSumOperator {
 public:
  struct Term {
    double weight;
    std::vector<std::uint32_t> perm;
  };

  PermSumOperator() = default;
  /// Validates that every term permutation is a bijection on 0..dim-1.
  PermSumOperator(std::size_t dim, std::vector<Term> terms);

  static PermSumOperator identity(std::size_t dim, double weight = 1.0);
  /// K_{p,q}: maps vec(A) to vec(A^T) for A p x q; index map (i + j*p) -> (j + i*q).
  static PermSumOperator commutation(std::size_t p, std::size_t q);

  std::size_t dim() const { return dim_; }
  const std::vector<Term>& terms() const { return terms_; }

  VectorXd apply(const Eigen::Ref<const VectorXd>& v) const;
  /// Raw-block form used when this operator is applied as I_m (x) op.
  void apply_block(const double* in, double* out) const;

  /// a.compose(b): first apply b, then a (operator product a b).
  PermSumOperator compose(const PermSumOperator& b) const;
  static PermSumOperator kron(const PermSumOperator& a, const PermSumOperator& b);
  static PermSumOperator sum(const PermSumOperator& a, const PermSumOperator& b);
  PermSumOperator scaled(double c) const;

  /// Dense materialization, testing only. Refuses dim > 10^4.
  MatrixXd dense() const;

 private:
  std::size_t dim_ = 0;
  std::vector<Term> terms_;
};

/// Commutation matrix K_{p,q} as a PermSumOperator (single unit-weight term).
inline PermSumOperator commutation_matrix(std::size_t p, std::size_t q) {
  return PermSumOperator::commutation(p, q);
}

/// y = (x^k A) v for square A (p x p): contracts every one of the k tensor
/// modes of v (length p^k) with A, without forming the Kronecker power.
VectorXd apply_kron_power(const Eigen::Ref<const MatrixXd>& a, VectorXd v, int k);

}  // namespace ellw
