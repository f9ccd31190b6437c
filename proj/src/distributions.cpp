#include "ellwishart/distributions.hpp"

#include <cmath>
#include <string>

namespace ellw {

namespace {
constexpr double kLogPi = 1.1447298858494001741;

double log_det_spd(const Eigen::Ref<const MatrixXd>& m, const char* what) {
  Eigen::LLT<MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) {
    throw not_positive_definite(std::string(what) + ": matrix is not positive definite");
  }
  return 2.0 * MatrixXd(llt.matrixL()).diagonal().array().log().sum();
}
}  // namespace

double log_multigamma(int p, double a) {
  if (!(a > 0.5 * (p - 1))) {
    throw parameter_error("log_multigamma: requires a > (p-1)/2");
  }
  double out = 0.25 * p * (p - 1) * kLogPi;
  for (int j = 0; j < p; ++j) {
    out += std::lgamma(a - 0.5 * j);
  }
  return out;
}

EwParams::EwParams(int n_, SpdMatrix sigma_, DensityGenerator gen_, bool inverse_)
    : n(n_), p(static_cast<int>(sigma_.dim())), sigma(std::move(sigma_)),
      gen(std::move(gen_)), inverse(inverse_) {
  if (n < p) {
    throw parameter_error("EwParams: requires n >= p (non-degenerate), got n=" +
                          std::to_string(n) + ", p=" + std::to_string(p));
  }
}

MomentCoefficients coefficients(const DensityGenerator& gen, int n, int p) {
  MomentCoefficients out;
  const int d = n * p;
  const double np = static_cast<double>(d);
  if (gen.moment_exists(d, 1)) {
    out.a = gen.modular_moment(d, 1) / p;
  }
  if (gen.moment_exists(d, 2)) {
    out.b = gen.modular_moment(d, 2) / (np * (np + 2.0));
    if (gen.moment_exists(d, 1)) {
      const double m1_over_np = gen.modular_moment(d, 1) / np;
      out.c = *out.b - m1_over_np * m1_over_np;
    }
  }
  if (n > p + 1 && gen.moment_exists(d, -1)) {
    out.d = (np - 2.0) / (n - p - 1.0) * gen.modular_moment(d, -1);
  }
  if (n > p + 3 && gen.moment_exists(d, -2)) {
    out.e = (np - 2.0) * (np - 4.0) /
            ((n - p) * (n - p - 1.0) * (n - p - 3.0)) * gen.modular_moment(d, -2);
    if (out.d) {
      out.f = *out.e - (*out.d) * (*out.d) / (n - p - 2.0);
    }
  }
  return out;
}

double ew_log_pdf(const EwParams& params, const Eigen::Ref<const MatrixXd>& s) {
  if (params.inverse) {
    throw parameter_error("ew_log_pdf: params describe the inverse distribution");
  }
  const int n = params.n;
  const int p = params.p;
  if (s.rows() != p || s.cols() != p) {
    throw dimension_error("ew_log_pdf: S has wrong dimension");
  }
  const double log_det_s = log_det_spd(s, "ew_log_pdf(S)");
  Eigen::LLT<MatrixXd> llt(params.sigma.mat());
  const double log_det_sigma = 2.0 * MatrixXd(llt.matrixL()).diagonal().array().log().sum();
  const double tr = (llt.solve(s)).trace();
  return 0.5 * n * p * kLogPi - log_multigamma(p, 0.5 * n) - 0.5 * n * log_det_sigma +
         0.5 * (n - p - 1) * log_det_s + params.gen.log_h(n * p, tr);
}

double iew_log_pdf(const EwParams& params, const Eigen::Ref<const MatrixXd>& s) {
  if (!params.inverse) {
    throw parameter_error("iew_log_pdf: params describe the forward distribution");
  }
  const int n = params.n;
  const int p = params.p;
  if (s.rows() != p || s.cols() != p) {
    throw dimension_error("iew_log_pdf: S has wrong dimension");
  }
  Eigen::LLT<MatrixXd> llt_s(s);
  if (llt_s.info() != Eigen::Success) {
    throw not_positive_definite("iew_log_pdf: S is not positive definite");
  }
  const double log_det_s = 2.0 * MatrixXd(llt_s.matrixL()).diagonal().array().log().sum();
  const double log_det_sigma = log_det_spd(params.sigma.mat(), "iew_log_pdf(Sigma)");
  const double tr = (llt_s.solve(params.sigma.mat())).trace();
  return 0.5 * n * p * kLogPi - log_multigamma(p, 0.5 * n) + 0.5 * n * log_det_sigma -
         0.5 * (n + p + 1) * log_det_s + params.gen.log_h(n * p, tr);
}

namespace {

/// (I + K_{p,p})(Sigma (x) Sigma) without building K densely.
MatrixXd sym_kron(const MatrixXd& sigma) {
  const Eigen::Index p = sigma.rows();
  MatrixXd ss = kron(sigma, sigma);
  MatrixXd out = ss;
  const PermSumOperator k = PermSumOperator::commutation(p, p);
  for (Eigen::Index col = 0; col < ss.cols(); ++col) {
    out.col(col) += k.apply(ss.col(col));
  }
  return out;
}

}  // namespace

MatrixXd ew_mean(const EwParams& params) {
  const MomentCoefficients c = coefficients(params.gen, params.n, params.p);
  if (!c.a) {
    throw moment_error("ew_mean: m_1 does not exist; " +
                       params.gen.moment_bound(params.n * params.p));
  }
  return *c.a * params.sigma.mat();
}

MatrixXd ew_variance(const EwParams& params) {
  const MomentCoefficients c = coefficients(params.gen, params.n, params.p);
  if (!c.b || !c.c) {
    throw moment_error("ew_variance: m_2 (and m_1) must exist; " +
                       params.gen.moment_bound(params.n * params.p));
  }
  const double n = params.n;
  const VectorXd vs = vec(params.sigma.mat());
  return n * (*c.b) * sym_kron(params.sigma.mat()) + n * n * (*c.c) * vs * vs.transpose();
}

MatrixXd iew_mean(const EwParams& params) {
  const MomentCoefficients c = coefficients(params.gen, params.n, params.p);
  if (!c.d) {
    throw moment_error("iew_mean: requires n > p+1 and finite m_{-1}; n=" +
                       std::to_string(params.n) + ", p=" + std::to_string(params.p));
  }
  return *c.d * params.sigma.mat();
}

MatrixXd iew_variance(const EwParams& params) {
  const MomentCoefficients c = coefficients(params.gen, params.n, params.p);
  if (!c.e || !c.f) {
    throw moment_error("iew_variance: requires n > p+3 and finite m_{-2}; n=" +
                       std::to_string(params.n) + ", p=" + std::to_string(params.p));
  }
  const VectorXd vs = vec(params.sigma.mat());
  return *c.e * sym_kron(params.sigma.mat()) +
         (params.n - params.p - 2.0) * (*c.f) * vs * vs.transpose();
}

NwMoments nw_moments(int n, int p) {
  if (n < p || p < 1) throw parameter_error("nw_moments: requires n >= p >= 1");
  NwMoments out;
  out.mean = MatrixXd::Identity(p, p) / p;
  const double np = static_cast<double>(n) * p;
  const MatrixXd eye = MatrixXd::Identity(p, p);
  const VectorXd vi = vec(eye);
  out.second_moment =
      (n * sym_kron(eye) + static_cast<double>(n) * n * vi * vi.transpose()) /
      (np * (np + 2.0));
  return out;
}

NwMoments nw_inverse_moments(int n, int p) {
  if (n <= p + 3) {
    throw moment_error("nw_inverse_moments: requires n > p+3 (inherited from the "
                       "Inverse Wishart variance condition)");
  }
  NwMoments out;
  const double np = static_cast<double>(n) * p;
  out.mean = (np - 2.0) / (n - p - 1.0) * MatrixXd::Identity(p, p);
  const MatrixXd eye = MatrixXd::Identity(p, p);
  const VectorXd vi = vec(eye);
  out.second_moment = (np - 2.0) * (np - 4.0) /
                      ((n - p) * (n - p - 1.0) * (n - p - 3.0)) *
                      (sym_kron(eye) + (n - p - 2.0) * vi * vi.transpose());
  return out;
}

}  // namespace ellw
