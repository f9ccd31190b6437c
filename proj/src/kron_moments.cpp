#include "ellwishart/kron_moments.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "ellwishart/sampling.hpp"

namespace ellw {

namespace {

std::uint64_t checked_pow(std::uint64_t base, int exp) {
  std::uint64_t out = 1;
  for (int i = 0; i < exp; ++i) {
    if (out > std::numeric_limits<std::uint64_t>::max() / base) {
      throw budget_error("dimension overflow computing p^" + std::to_string(exp));
    }
    out *= base;
  }
  return out;
}

std::size_t pw(int p, int e) { return static_cast<std::size_t>(checked_pow(p, e)); }

PermSumOperator eye(std::size_t dim) { return PermSumOperator::identity(dim); }

PermSumOperator K(std::size_t p, std::size_t q) {
  return PermSumOperator::commutation(p, q);
}

/// I_a (x) op (x) I_b.
PermSumOperator pad(std::size_t a, const PermSumOperator& op, std::size_t b) {
  PermSumOperator out = op;
  if (a > 1) out = PermSumOperator::kron(eye(a), out);
  if (b > 1) out = PermSumOperator::kron(out, eye(b));
  return out;
}

void check_request(int p, std::uint64_t max_len, std::optional<std::uint64_t> budget) {
  const std::uint64_t bytes = max_len > std::numeric_limits<std::uint64_t>::max() / 8
                                  ? std::numeric_limits<std::uint64_t>::max()
                                  : max_len * 8;
  if (!budget) {
    if (max_len > kDefaultKronEnvelopeLen) {
      throw budget_error(
          "Kronecker-moment request needs a work vector of " + std::to_string(max_len) +
          " entries (" + std::to_string(bytes) + " bytes) at p=" + std::to_string(p) +
          ", beyond the default envelope of " + std::to_string(kDefaultKronEnvelopeLen) +
          " entries (p <= 3, k <= 4); pass an explicit memory budget to raise it");
    }
    return;
  }
  if (bytes > *budget) {
    throw budget_error("Kronecker-moment request needs " + std::to_string(bytes) +
                       " bytes per work vector, exceeding the memory budget of " +
                       std::to_string(*budget) + " bytes");
  }
  if (max_len >= std::numeric_limits<std::uint32_t>::max()) {
    throw budget_error("Kronecker-moment request exceeds the 32-bit index range "
                       "of the permutation engine");
  }
}

/// work <- (I_{len/op.dim} (x) op) work, using scratch as the output buffer.
void apply_padded(const PermSumOperator& op, VectorXd& work, VectorXd& scratch) {
  const std::size_t d = op.dim();
  const std::size_t len = static_cast<std::size_t>(work.size());
  scratch.resize(work.size());
  for (std::size_t base = 0; base < len; base += d) {
    op.apply_block(work.data() + base, scratch.data() + base);
  }
  work.swap(scratch);
}

}  // namespace

PermSumOperator build_H(int p, int k, int l) {
  if (l < 0 || l > k - 1) throw parameter_error("build_H: requires 0 <= l <= k-1");
  return pad(pw(p, l), K(p, pw(p, k - 1 - l)), p);
}

PermSumOperator build_G(int p) {
  const std::size_t p2 = pw(p, 2);
  const PermSumOperator kpp = K(p, p);
  const PermSumOperator sym = PermSumOperator::sum(eye(p2), kpp);
  return PermSumOperator::kron(kpp, kpp)
      .compose(pad(p, kpp, p))
      .compose(PermSumOperator::kron(sym, sym))
      .scaled(0.5);
}

PermSumOperator build_G_inverse(int p) {
  const std::size_t p2 = pw(p, 2);
  const PermSumOperator kpp = K(p, p);
  const PermSumOperator sym = PermSumOperator::sum(eye(p2), kpp);
  return PermSumOperator::kron(kpp, kpp)
      .compose(pad(p, kpp, p))
      .compose(PermSumOperator::kron(sym, eye(p2)));
}

namespace {

/// Shared chain of J_{(k)} / N_{(k)}: [sum_l H (x) H] (I (x) K_{p^2,p^{k-1}} (x) I)
/// (I_{p^{2k-2}} (x) g) (I (x) K_{p^{k-1},p^2} (x) I), on dim p^{2k+2}.
PermSumOperator derivative_chain(int p, int k, const PermSumOperator& g) {
  const std::size_t pk1 = pw(p, k - 1);
  const std::size_t p2 = pw(p, 2);
  PermSumOperator hsum = [&] {
    PermSumOperator h0 = build_H(p, k, 0);
    PermSumOperator acc = PermSumOperator::kron(h0, h0);
    for (int l = 1; l < k; ++l) {
      PermSumOperator hl = build_H(p, k, l);
      acc = PermSumOperator::sum(acc, PermSumOperator::kron(hl, hl));
    }
    return acc;
  }();
  return hsum.compose(pad(pk1, K(p2, pk1), p2))
      .compose(pad(pw(p, 2 * k - 2), g, 1))
      .compose(pad(pk1, K(pk1, p2), p2));
}

}  // namespace

PermSumOperator build_J(int p, int k) {
  if (k < 1) throw parameter_error("build_J: requires k >= 1");
  return derivative_chain(p, k, build_G(p)).compose(pad(pw(p, k), K(p, pw(p, k)), p));
}

PermSumOperator build_M(int p, int k, double n) {
  if (k < 0) throw parameter_error("build_M: requires k >= 0");
  const std::size_t p2 = pw(p, 2);
  if (k == 0) {
    return eye(p2).scaled(n);
  }
  PermSumOperator lhs = PermSumOperator::sum(
      pad(pw(p, k), K(p, pw(p, k)), p).scaled(n), build_J(p, k));
  return lhs.compose(K(pw(p, 2 * k), p2));
}

PermSumOperator build_A(int p, int k, double n) {
  if (k < 1) throw parameter_error("build_A: requires k >= 1");
  if (!(n > p + 2 * k + 1)) {
    throw moment_error("build_A: requires n > p + 2k + 1 (got n=" + std::to_string(n) +
                       ", p=" + std::to_string(p) + ", k=" + std::to_string(k) + ")");
  }
  const std::size_t dim = pw(p, 2 * k + 2);
  PermSumOperator neg = derivative_chain(p, k, build_G_inverse(p)).scaled(-1.0);
  return PermSumOperator::sum(eye(dim).scaled(n - p - 1.0), neg);
}

namespace {

/// vec(E[(x)^k R]) for R ~ W(n, I_p), by successive M-stage application.
VectorXd wishart_identity_kron(int n, int p, int k) {
  const std::size_t len = pw(p, 2 * k);
  VectorXd work(static_cast<Eigen::Index>(len));
  // (x)^k vec(I_p)
  {
    const VectorXd vi = vec(MatrixXd::Identity(p, p));
    work.head(vi.size()) = vi;
    Eigen::Index cur = vi.size();
    for (int i = 1; i < k; ++i) {
      // descend so the head block is read before it is overwritten
      for (Eigen::Index a = vi.size() - 1; a >= 0; --a) {
        work.segment(a * cur, cur) = vi(a) * work.head(cur);
      }
      cur *= vi.size();
    }
  }
  VectorXd scratch;
  for (int m = 0; m < k; ++m) {
    apply_padded(build_M(p, m, n), work, scratch);
  }
  return work;
}

}  // namespace

VectorXd wishart_kron_moment(int n, const Eigen::Ref<const MatrixXd>& sigma, int k,
                             std::optional<std::uint64_t> budget_bytes) {
  const int p = static_cast<int>(sigma.rows());
  if (k < 1) throw parameter_error("wishart_kron_moment: requires k >= 1");
  if (n < p) throw parameter_error("wishart_kron_moment: requires n >= p");
  check_request(p, checked_pow(p, 2 * k), budget_bytes);
  VectorXd work = wishart_identity_kron(n, p, k);
  return apply_kron_power(symmetric_sqrt(sigma), std::move(work), 2 * k);
}

VectorXd ew_kron_moment(const EwParams& params, int k,
                        std::optional<std::uint64_t> budget_bytes) {
  if (params.inverse) {
    throw parameter_error("ew_kron_moment: params describe the inverse distribution");
  }
  if (k < 1) throw parameter_error("ew_kron_moment: requires k >= 1");
  const int d = params.n * params.p;
  if (!params.gen.moment_exists(d, k)) {
    throw moment_error("ew_kron_moment: m_" + std::to_string(k) + " does not exist; " +
                       params.gen.moment_bound(d));
  }
  VectorXd base = wishart_kron_moment(params.n, params.sigma.mat(), k, budget_bytes);
  // Prop.-6 prefactor, as the ratio of the generator's m_k to the Gaussian one
  // (exactly 1 for the Gaussian generator).
  const double log_scale = params.gen.log_modular_moment(d, k) -
                           DensityGenerator::gaussian().log_modular_moment(d, k);
  return std::exp(log_scale) * base;
}

namespace {

/// Solves [(n-p-1) I - N] x = b by the fixed-point iteration
/// x <- (b + N x) / (n-p-1); converges geometrically with ratio
/// rho(N)/(n-p-1) = 2k/(n-p-1) < 1 under the existence condition.
VectorXd resolvent_solve(const PermSumOperator& neg_n_part, double npm1, VectorXd b) {
  // neg_n_part holds -N (as built inside A); apply N = -neg_n_part.
  VectorXd x = b / npm1;
  VectorXd nx(b.size());
  const double tol = 1e-15;
  for (int it = 0; it < 100000; ++it) {
    neg_n_part.apply_block(x.data(), nx.data());
    VectorXd next = (b - nx) / npm1;
    const double delta = (next - x).cwiseAbs().maxCoeff();
    const double scale = std::max(1e-300, next.cwiseAbs().maxCoeff());
    x.swap(next);
    if (delta <= tol * scale) return x;
  }
  throw convergence_error("iew_kron_moment: resolvent iteration did not converge", 0.0);
}

}  // namespace

VectorXd iew_kron_moment(const EwParams& params, int k_plus_1,
                         std::optional<std::uint64_t> budget_bytes) {
  if (!params.inverse) {
    throw parameter_error("iew_kron_moment: params describe the forward distribution");
  }
  const int order = k_plus_1;
  if (order < 1) throw parameter_error("iew_kron_moment: requires order >= 1");
  const int k = order - 1;
  const int n = params.n;
  const int p = params.p;
  const int d = n * p;
  if (!(order < 0.5 * d)) {
    throw moment_error("iew_kron_moment: requires k+1 < np/2 (got k+1=" +
                       std::to_string(order) + ", np/2=" + std::to_string(0.5 * d) + ")");
  }
  if (!(n > p + 2 * k + 1)) {
    throw moment_error("iew_kron_moment: requires n > p + 2k + 1 (got n=" +
                       std::to_string(n) + ", p=" + std::to_string(p) +
                       ", k=" + std::to_string(k) + ")");
  }
  if (!params.gen.moment_exists(d, -order)) {
    throw moment_error("iew_kron_moment: m_{-(k+1)} does not exist; " +
                       params.gen.moment_bound(d));
  }
  check_request(p, checked_pow(p, 2 * order), budget_bytes);

  const double npm1 = n - p - 1.0;
  const VectorXd vsigma = vec(params.sigma.mat());
  VectorXd f = vsigma / npm1;
  for (int m = 1; m <= k; ++m) {
    // b = (I (x) K_{p,p^m} (x) I) K_{p^{2m},p^2} (vec Sigma (x) F)
    VectorXd u(vsigma.size() * f.size());
    for (Eigen::Index a = 0; a < vsigma.size(); ++a) {
      u.segment(a * f.size(), f.size()) = vsigma(a) * f;
    }
    const PermSumOperator w =
        pad(pw(p, m), K(p, pw(p, m)), p).compose(K(pw(p, 2 * m), pw(p, 2)));
    VectorXd b = w.apply(u);
    const PermSumOperator neg_n = derivative_chain(p, m, build_G_inverse(p)).scaled(-1.0);
    f = resolvent_solve(neg_n, npm1, std::move(b));
  }
  const double log_scale = params.gen.log_modular_moment(d, -order) -
                           DensityGenerator::gaussian().log_modular_moment(d, -order);
  return std::exp(log_scale) * f;
}

McKronMoment mc_kron_moment(const EwParams& params, int k, long n_draws, Rng& rng,
                            std::optional<std::uint64_t> budget_bytes) {
  if (k < 1) throw parameter_error("mc_kron_moment: requires k >= 1");
  if (n_draws < 1000) throw parameter_error("mc_kron_moment: requires N >= 1000");
  const int p = params.p;
  check_request(p, checked_pow(p, 2 * k), budget_bytes);
  const Eigen::Index len = static_cast<Eigen::Index>(pw(p, 2 * k));
  VectorXd sum = VectorXd::Zero(len);
  VectorXd sumsq = VectorXd::Zero(len);
  for (long i = 0; i < n_draws; ++i) {
    const MatrixXd s = params.inverse ? sample_iew(params, rng) : sample_ew(params, rng);
    MatrixXd power = s;
    for (int j = 1; j < k; ++j) power = kron(power, s);
    const Eigen::Map<const VectorXd> v(power.data(), power.size());
    sum += v;
    sumsq += v.cwiseProduct(v);
  }
  McKronMoment out;
  out.estimate = sum / static_cast<double>(n_draws);
  const VectorXd var =
      (sumsq / static_cast<double>(n_draws) - out.estimate.cwiseProduct(out.estimate))
          .cwiseMax(0.0);
  out.std_error = (var / static_cast<double>(n_draws)).cwiseSqrt();
  return out;
}

MatrixXd rearrange_second_moment(const Eigen::Ref<const MatrixXd>& m) {
  if (m.rows() != m.cols()) {
    throw dimension_error("rearrange_second_moment: square matrix required");
  }
  const auto p2 = m.rows();
  const auto p = static_cast<Eigen::Index>(std::llround(std::sqrt(double(p2))));
  if (p * p != p2) {
    throw dimension_error("rearrange_second_moment: dimension is not a perfect square");
  }
  if (p == 1) return m;
  const PermSumOperator op = pad(pw(int(p), 1), K(p, p), pw(int(p), 1));
  return unvec(op.apply(vec(m)), p2, p2);
}

}  // namespace ellw
