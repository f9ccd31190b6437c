#pragma once

#include <cstdint>
#include <optional>

#include "ellwishart/distributions.hpp"
#include "ellwishart/rng.hpp"

namespace ellw {

/// Default hard budget for Kronecker-moment work vectors (bytes).
inline constexpr std::uint64_t kDefaultKronBudgetBytes = std::uint64_t{2} << 30;

/// Without an explicit budget, requests are confined to the documented
/// envelope: work vectors of at most 3^8 = 6561 entries (p <= 3, k <= 4).
inline constexpr std::uint64_t kDefaultKronEnvelopeLen = 6561;

/// H_{(k,l)} = I_{p^l} (x) K_{p,p^{k-1-l}} (x) I_p.
PermSumOperator build_H(int p, int k, int l);

/// The p^4 x p^4 block of the Wishart derivative chain: four permutation
/// terms of weight 1/2 mapping vec(S (x) Sigma) to -2 vec(dS/dSigma^{-1}).
PermSumOperator build_G(int p);

/// Inverse-side analogue: two permutation terms mapping vec(S (x) S) to
/// -2 vec(dT^{-1}/dT) at S = T^{-1}.
PermSumOperator build_G_inverse(int p);

/// J_{(k)} on dim p^{2k+2} (the Sigma-free part of the Wishart recursion).
PermSumOperator build_J(int p, int k);

/// M_{(k)} = [n (I (x) K_{p,p^k} (x) I) + J_{(k)}] K_{p^{2k},p^2}: one stage
/// of the Wishart Kronecker-moment product, dim p^{2k+2}, 4k+1 terms.
PermSumOperator build_M(int p, int k, double n);

/// A(k) = (n-p-1) I - N_{(k)} on dim p^{2k+2}: the inverse-Wishart stage
/// operator. The moment pipeline applies its inverse (the printed product
/// form only closes with the resolvent; see iew_kron_moment). The spectral
/// radius of N_{(k)} is 2k, so the resolvent exists iff n > p + 2k + 1.
PermSumOperator build_A(int p, int k, double n);

/// vec(E[(x)^k S]) for S ~ W(n, Sigma), length p^{2k}.
VectorXd wishart_kron_moment(int n, const Eigen::Ref<const MatrixXd>& sigma, int k,
                             std::optional<std::uint64_t> budget_bytes = {});

/// vec(E[(x)^k S]) for S ~ EW(n, Sigma, h). Gaussian generator reproduces
/// wishart_kron_moment exactly.
VectorXd ew_kron_moment(const EwParams& params, int k,
                        std::optional<std::uint64_t> budget_bytes = {});

/// vec(E[(x)^{k+1} S]) for S ~ IEW(n, Sigma, h); pass the full order k+1.
/// Requires k+1 < np/2, finite m_{-(k+1)}, and n > p + 2k + 1.
VectorXd iew_kron_moment(const EwParams& params, int k_plus_1,
                         std::optional<std::uint64_t> budget_bytes = {});

struct McKronMoment {
  VectorXd estimate;   // sample mean of vec((x)^k S)
  VectorXd std_error;  // per-entry standard error of the mean
};

/// Monte Carlo estimate of vec(E[(x)^k S]) over n_draws samples of the
/// distribution described by params (EW or IEW per the inverse flag).
McKronMoment mc_kron_moment(const EwParams& params, int k, long n_draws, Rng& rng,
                            std::optional<std::uint64_t> budget_bytes = {});

/// The vectorized rearrangement between E[S (x) S] and E[vec S vec S^T]
/// (both p^2 x p^2); involutive.
MatrixXd rearrange_second_moment(const Eigen::Ref<const MatrixXd>& m);

}  // namespace ellw
