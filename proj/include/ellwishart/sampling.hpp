#pragma once

#include "ellwishart/distributions.hpp"
#include "ellwishart/rng.hpp"

namespace ellw {

enum class SamplerMethod { Bartlett, Naive };

/// One draw from W(n, I_p) via the Bartlett decomposition: lower-triangular T
/// with T_kk ~ chi_{n-k+1} and strictly-lower entries ~ N(0,1), returns T T^T.
MatrixXd sample_wishart_identity(int n, int p, Rng& rng);

/// One draw from EW(n, Sigma, h_np). Bartlett path: Q * L V L^T with
/// V = R / tr(R). Naive path: vec(X) = sqrt(Q) u with u uniform on the unit
/// sphere of dimension np, returns L X X^T L^T.
MatrixXd sample_ew(const EwParams& params, Rng& rng,
                   SamplerMethod method = SamplerMethod::Bartlett);

/// One draw from IEW(n, Sigma, h_np): inverse of an EW draw centered at
/// Sigma^{-1}. A numerically singular draw (condition number > 1e12) is
/// redrawn once, then reported as an error.
MatrixXd sample_iew(const EwParams& params, Rng& rng);

/// One draw from the Normalized Wishart NW(n, p); trace is exactly 1.
MatrixXd sample_nw(int n, int p, Rng& rng);

}  // namespace ellw
