#include "ellwishart/linalg.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <unsupported/Eigen/KroneckerProduct>

namespace ellw {

VectorXd vec(const Eigen::Ref<const MatrixXd>& m) {
  return Eigen::Map<const VectorXd>(m.data(), m.size());
}

MatrixXd unvec(const Eigen::Ref<const VectorXd>& v, Eigen::Index rows, Eigen::Index cols) {
  if (v.size() != rows * cols) {
    throw dimension_error("unvec: vector length " + std::to_string(v.size()) +
                          " != " + std::to_string(rows) + "x" + std::to_string(cols));
  }
  return Eigen::Map<const MatrixXd>(v.data(), rows, cols);
}

MatrixXd kron(const Eigen::Ref<const MatrixXd>& a, const Eigen::Ref<const MatrixXd>& b) {
  return Eigen::kroneckerProduct(a, b);
}

namespace {

void check_square_symmetric(const Eigen::Ref<const MatrixXd>& m, double tol) {
  if (m.rows() != m.cols()) {
    throw dimension_error("expected a square matrix");
  }
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      const double scale = std::max(1.0, std::abs(m(i, j)));
      if (std::abs(m(i, j) - m(j, i)) > tol * scale) {
        throw not_positive_definite("matrix is not symmetric at (" + std::to_string(i) +
                                    "," + std::to_string(j) + ")");
      }
    }
  }
}

}  // namespace

MatrixXd cholesky_lower(const Eigen::Ref<const MatrixXd>& sigma) {
  check_square_symmetric(sigma, 1e-12);
  Eigen::LLT<MatrixXd> llt(sigma);
  if (llt.info() != Eigen::Success) {
    throw not_positive_definite("Cholesky failed: matrix is not positive definite");
  }
  return llt.matrixL();
}

MatrixXd symmetric_sqrt(const Eigen::Ref<const MatrixXd>& sigma) {
  check_square_symmetric(sigma, 1e-12);
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(sigma);
  if (es.info() != Eigen::Success) {
    throw error("eigendecomposition failed");
  }
  const VectorXd& w = es.eigenvalues();
  const double floor = 1e-12 * w(w.size() - 1);
  if (!(w(0) > floor)) {
    throw not_positive_definite("symmetric_sqrt: min eigenvalue " + std::to_string(w(0)) +
                                " below positive-definite floor");
  }
  return es.eigenvectors() * w.cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
}

SpdMatrix::SpdMatrix(MatrixXd m, double symmetry_tol) : mat_(std::move(m)) {
  check_square_symmetric(mat_, symmetry_tol);
  Eigen::LLT<MatrixXd> llt(mat_);
  if (llt.info() != Eigen::Success) {
    throw not_positive_definite("SpdMatrix: Cholesky failed, matrix is not positive definite");
  }
}

PermSumOperator::PermSumOperator(std::size_t dim, std::vector<Term> terms)
    : dim_(dim), terms_(std::move(terms)) {
  std::vector<bool> seen(dim_);
  for (const Term& t : terms_) {
    if (t.perm.size() != dim_) {
      throw dimension_error("PermSumOperator term has wrong length");
    }
    std::fill(seen.begin(), seen.end(), false);
    for (std::uint32_t idx : t.perm) {
      if (idx >= dim_ || seen[idx]) {
        throw error("PermSumOperator term is not a bijection");
      }
      seen[idx] = true;
    }
  }
}

PermSumOperator PermSumOperator::identity(std::size_t dim, double weight) {
  Term t;
  t.weight = weight;
  t.perm.resize(dim);
  for (std::size_t i = 0; i < dim; ++i) t.perm[i] = static_cast<std::uint32_t>(i);
  return PermSumOperator(dim, {std::move(t)});
}

PermSumOperator PermSumOperator::commutation(std::size_t p, std::size_t q) {
  const std::size_t dim = p * q;
  if (dim >= std::numeric_limits<std::uint32_t>::max()) {
    throw budget_error("commutation dimension exceeds index range");
  }
  Term t;
  t.weight = 1.0;
  t.perm.resize(dim);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < q; ++j) {
      // out[j + i q] = in[i + j p]
      t.perm[j + i * q] = static_cast<std::uint32_t>(i + j * p);
    }
  }
  return PermSumOperator(dim, {std::move(t)});
}

void PermSumOperator::apply_block(const double* in, double* out) const {
  std::fill(out, out + dim_, 0.0);
  for (const Term& t : terms_) {
    const double w = t.weight;
    const std::uint32_t* perm = t.perm.data();
    for (std::size_t i = 0; i < dim_; ++i) {
      out[i] += w * in[perm[i]];
    }
  }
}

VectorXd PermSumOperator::apply(const Eigen::Ref<const VectorXd>& v) const {
  if (static_cast<std::size_t>(v.size()) != dim_) {
    throw dimension_error("PermSumOperator::apply: vector length mismatch");
  }
  VectorXd out(v.size());
  apply_block(v.data(), out.data());
  return out;
}

PermSumOperator PermSumOperator::compose(const PermSumOperator& b) const {
  if (dim_ != b.dim_) {
    throw dimension_error("PermSumOperator::compose: dimension mismatch");
  }
  std::vector<Term> out;
  out.reserve(terms_.size() * b.terms_.size());
  for (const Term& ta : terms_) {
    for (const Term& tb : b.terms_) {
      Term t;
      t.weight = ta.weight * tb.weight;
      t.perm.resize(dim_);
      // (a b) v : out[i] = a-term in mid[ta.perm[i]], mid[j] = in[tb.perm[j]]
      for (std::size_t i = 0; i < dim_; ++i) {
        t.perm[i] = tb.perm[ta.perm[i]];
      }
      out.push_back(std::move(t));
    }
  }
  return PermSumOperator(dim_, std::move(out));
}

PermSumOperator PermSumOperator::kron(const PermSumOperator& a, const PermSumOperator& b) {
  const std::size_t dim = a.dim_ * b.dim_;
  if (a.dim_ != 0 && dim / a.dim_ != b.dim_) {
    throw budget_error("PermSumOperator::kron: dimension overflow");
  }
  if (dim >= std::numeric_limits<std::uint32_t>::max()) {
    throw budget_error("PermSumOperator::kron: dimension exceeds index range");
  }
  std::vector<Term> out;
  out.reserve(a.terms_.size() * b.terms_.size());
  for (const Term& ta : a.terms_) {
    for (const Term& tb : b.terms_) {
      Term t;
      t.weight = ta.weight * tb.weight;
      t.perm.resize(dim);
      for (std::size_t i = 0; i < a.dim_; ++i) {
        const std::size_t base = static_cast<std::size_t>(ta.perm[i]) * b.dim_;
        const std::size_t row = i * b.dim_;
        for (std::size_t k = 0; k < b.dim_; ++k) {
          t.perm[row + k] = static_cast<std::uint32_t>(base + tb.perm[k]);
        }
      }
      out.push_back(std::move(t));
    }
  }
  return PermSumOperator(dim, std::move(out));
}

PermSumOperator PermSumOperator::sum(const PermSumOperator& a, const PermSumOperator& b) {
  if (a.dim_ != b.dim_) {
    throw dimension_error("PermSumOperator::sum: dimension mismatch");
  }
  std::vector<Term> out = a.terms_;
  out.insert(out.end(), b.terms_.begin(), b.terms_.end());
  return PermSumOperator(a.dim_, std::move(out));
}

PermSumOperator PermSumOperator::scaled(double c) const {
  std::vector<Term> out = terms_;
  for (Term& t : out) t.weight *= c;
  return PermSumOperator(dim_, std::move(out));
}

MatrixXd PermSumOperator::dense() const {
  if (dim_ > 10000) {
    throw budget_error("PermSumOperator::dense refused above dim 10^4");
  }
  MatrixXd m = MatrixXd::Zero(dim_, dim_);
  for (const Term& t : terms_) {
    for (std::size_t i = 0; i < dim_; ++i) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(t.perm[i])) += t.weight;
    }
  }
  return m;
}

VectorXd apply_kron_power(const Eigen::Ref<const MatrixXd>& a, VectorXd v, int k) {
  const Eigen::Index p = a.rows();
  if (a.cols() != p) throw dimension_error("apply_kron_power: square matrix required");
  Eigen::Index len = 1;
  for (int i = 0; i < k; ++i) len *= p;
  if (v.size() != len) throw dimension_error("apply_kron_power: vector length mismatch");

  // Mode t (0 = most significant index digit) has stride p^(k-1-t).
  VectorXd scratch(p);
  Eigen::Index stride = len / p;
  for (int t = 0; t < k; ++t) {
    const Eigen::Index block = stride * p;
    for (Eigen::Index base = 0; base < len; base += block) {
      for (Eigen::Index off = 0; off < stride; ++off) {
        double* slot = v.data() + base + off;
        for (Eigen::Index s = 0; s < p; ++s) scratch(s) = slot[s * stride];
        for (Eigen::Index i = 0; i < p; ++i) {
          double acc = 0.0;
          for (Eigen::Index j = 0; j < p; ++j) acc += a(i, j) * scratch(j);
          slot[i * stride] = acc;
        }
      }
    }
    stride /= p;
  }
  return v;
}

}  // namespace ellw
