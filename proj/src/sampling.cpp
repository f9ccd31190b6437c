#include "ellwishart/sampling.hpp"

#include <cmath>
#include <string>

namespace ellw {

MatrixXd sample_wishart_identity(int n, int p, Rng& rng) {
  if (p < 1) throw parameter_error("sample_wishart_identity: p must be >= 1");
  if (n < p) {
    throw parameter_error("sample_wishart_identity: degenerate distribution, n=" +
                          std::to_string(n) + " < p=" + std::to_string(p));
  }
  MatrixXd t = MatrixXd::Zero(p, p);
  for (int k = 0; k < p; ++k) {
    t(k, k) = rng.chi(static_cast<double>(n - k));
    for (int l = 0; l < k; ++l) {
      t(k, l) = rng.normal();
    }
  }
  return t * t.transpose();
}

namespace {

MatrixXd sample_ew_given_chol(const EwParams& params, const MatrixXd& chol_lower,
                              Rng& rng, SamplerMethod method) {
  const int n = params.n;
  const int p = params.p;
  const double q = params.gen.sample_q(n * p, rng);
  if (method == SamplerMethod::Bartlett) {
    const MatrixXd r = sample_wishart_identity(n, p, rng);
    const MatrixXd v = r / r.trace();
    MatrixXd lvl = chol_lower * v * chol_lower.transpose();
    return q * lvl;
  }
  // Naive: vec(X) = sqrt(Q) z / ||z||.
  VectorXd z(static_cast<Eigen::Index>(n) * p);
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = rng.normal();
  z *= std::sqrt(q) / z.norm();
  const MatrixXd x = unvec(z, p, n);
  const MatrixXd lx = chol_lower * x;
  return lx * lx.transpose();
}

}  // namespace

MatrixXd sample_ew(const EwParams& params, Rng& rng, SamplerMethod method) {
  if (params.inverse) {
    throw parameter_error("sample_ew: params describe the inverse distribution");
  }
  return sample_ew_given_chol(params, cholesky_lower(params.sigma.mat()), rng, method);
}

MatrixXd sample_iew(const EwParams& params, Rng& rng) {
  if (!params.inverse) {
    throw parameter_error("sample_iew: params describe the forward distribution");
  }
  const int p = params.p;
  const MatrixXd sigma_inv =
      params.sigma.mat().llt().solve(MatrixXd::Identity(p, p));
  const MatrixXd chol = cholesky_lower(0.5 * (sigma_inv + sigma_inv.transpose()));
  for (int attempt = 0; attempt < 2; ++attempt) {
    const MatrixXd s = sample_ew_given_chol(params, chol, rng, SamplerMethod::Bartlett);
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(s);
    const double emin = es.eigenvalues()(0);
    const double emax = es.eigenvalues()(p - 1);
    if (emin > 0.0 && emax / emin < 1e12) {
      return es.eigenvectors() * es.eigenvalues().cwiseInverse().asDiagonal() *
             es.eigenvectors().transpose();
    }
  }
  throw error("sample_iew: numerically singular draw twice in a row "
              "(condition number > 1e12)");
}

MatrixXd sample_nw(int n, int p, Rng& rng) {
  const MatrixXd s = sample_wishart_identity(n, p, rng);
  return s / s.trace();
}

}  // namespace ellw
