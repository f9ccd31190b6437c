#pragma once

#include <optional>

#include "ellwishart/generators.hpp"
#include "ellwishart/linalg.hpp"

namespace ellw {

/// log of the multivariate Gamma function Gamma_p(a).
double log_multigamma(int p, double a);

/// Full parameterization of an Elliptical Wishart (inverse = false) or
/// Inverse Elliptical Wishart (inverse = true) distribution.
struct EwParams {
  EwParams(int n_, SpdMatrix sigma_, DensityGenerator gen_, bool inverse_ = false);

  int n;
  int p;
  SpdMatrix sigma;
  DensityGenerator gen;
  bool inverse;
};

/// The (a, b, c, d, e, f) coefficient sextet of the EW/IEW first and second
/// moments. A field is absent exactly when its existence condition fails for
/// these parameters; absence is encoded, never NaN.
struct MomentCoefficients {
  std::optional<double> a;
  std::optional<double> b;
  std::optional<double> c;
  std::optional<double> d;
  std::optional<double> e;
  std::optional<double> f;
};

MomentCoefficients coefficients(const DensityGenerator& gen, int n, int p);

/// log-density of the Elliptical Wishart distribution at SPD S.
double ew_log_pdf(const EwParams& params, const Eigen::Ref<const MatrixXd>& s);

/// log-density of the Inverse Elliptical Wishart distribution at SPD S.
double iew_log_pdf(const EwParams& params, const Eigen::Ref<const MatrixXd>& s);

MatrixXd ew_mean(const EwParams& params);
/// Variance in the E[vec S vec S^T] convention, as a p^2 x p^2 matrix.
MatrixXd ew_variance(const EwParams& params);

MatrixXd iew_mean(const EwParams& params);
MatrixXd iew_variance(const EwParams& params);

struct NwMoments {
  MatrixXd mean;           // p x p
  MatrixXd second_moment;  // p^2 x p^2, E[vec V vec V^T] convention
};

/// First/second moments of the Normalized Wishart distribution NW(n, p).
NwMoments nw_moments(int n, int p);
/// Moments of the inverse of a Normalized Wishart matrix; requires n > p+3.
NwMoments nw_inverse_moments(int n, int p);

}  // namespace ellw
