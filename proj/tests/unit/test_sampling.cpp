#include "ellwishart/sampling.hpp"

#include <cmath>

#include "doctest.h"
#include "ellwishart/fitting.hpp"

using namespace ellw;

namespace {

MatrixXd random_spd(Rng& rng, Eigen::Index p) {
  MatrixXd a(p, p);
  for (Eigen::Index j = 0; j < p; ++j)
    for (Eigen::Index i = 0; i < p; ++i) a(i, j) = rng.normal();
  return a * a.transpose() + static_cast<double>(p) * MatrixXd::Identity(p, p);
}

}  // namespace

TEST_SUITE_BEGIN("sampling");

TEST_CASE("bartlett wishart identity moments") {
  Rng rng(11);
  // (1,1): chi^2_1, mean 1
  double acc = 0.0;
  const long n1 = 200000;
  for (long i = 0; i < n1; ++i) acc += sample_wishart_identity(1, 1, rng)(0, 0);
  CHECK(acc / n1 == doctest::Approx(1.0).epsilon(0.012));

  // (20,4): mean = 20 I within 2%
  MatrixXd mean = MatrixXd::Zero(4, 4);
  const long n2 = 50000;
  for (long i = 0; i < n2; ++i) mean += sample_wishart_identity(20, 4, rng);
  mean /= static_cast<double>(n2);
  CHECK((mean - 20.0 * MatrixXd::Identity(4, 4)).norm() / (20.0 * 2.0) < 0.02);

  CHECK_THROWS_AS(sample_wishart_identity(3, 4, rng), parameter_error);
}

TEST_CASE("bartlett outputs satisfy the spd invariant") {
  Rng rng(12);
  for (int i = 0; i < 10000; ++i) {
    CHECK_NOTHROW(SpdMatrix{sample_wishart_identity(8, 8, rng)});
  }
}

TEST_CASE("ew sampler mean, both methods") {
  const int n = 20;
  const int p = 3;
  Rng rng(13);
  const MatrixXd sigma = random_spd(rng, p);
  const EwParams params(n, SpdMatrix(sigma), DensityGenerator::gaussian());
  const MatrixXd want = n * sigma;
  for (SamplerMethod method : {SamplerMethod::Bartlett, SamplerMethod::Naive}) {
    MatrixXd acc = MatrixXd::Zero(p, p);
    const long draws = 30000;
    for (long i = 0; i < draws; ++i) acc += sample_ew(params, rng, method);
    acc /= static_cast<double>(draws);
    CHECK((acc - want).norm() / want.norm() < 0.02);
  }
}

TEST_CASE("bartlett and naive agree in distribution") {
  const int n = 50;
  const int p = 4;
  Rng rng(14);
  const MatrixXd sigma = random_spd(rng, p);
  const EwParams params(n, SpdMatrix(sigma), DensityGenerator::t(5.0));
  std::vector<double> tr_bartlett;
  std::vector<double> tr_naive;
  std::vector<double> ld_bartlett;
  std::vector<double> ld_naive;
  const long draws = 10000;
  for (long i = 0; i < draws; ++i) {
    const MatrixXd a = sample_ew(params, rng, SamplerMethod::Bartlett);
    const MatrixXd b = sample_ew(params, rng, SamplerMethod::Naive);
    tr_bartlett.push_back(a.trace());
    tr_naive.push_back(b.trace());
    ld_bartlett.push_back(statistic(a, StatisticKind::NegLog10Det));
    ld_naive.push_back(statistic(b, StatisticKind::NegLog10Det));
  }
  CHECK(ks_two_sample(tr_bartlett, tr_naive).p_value > 0.01);
  CHECK(ks_two_sample(ld_bartlett, ld_naive).p_value > 0.01);
}

TEST_CASE("tr(Sigma^-1 S) is distributed as Q") {
  const int n = 12;
  const int p = 3;
  Rng rng(15);
  const MatrixXd sigma = random_spd(rng, p);
  const EwParams params(n, SpdMatrix(sigma), DensityGenerator::t(7.0));
  const MatrixXd sigma_inv = sigma.inverse();
  const double want = params.gen.modular_moment(n * p, 1);
  double acc = 0.0;
  const long draws = 100000;
  for (long i = 0; i < draws; ++i) {
    acc += (sigma_inv * sample_ew(params, rng)).trace();
  }
  CHECK(acc / draws == doctest::Approx(want).epsilon(0.02));
}

TEST_CASE("Q and V are uncorrelated across draws") {
  const int n = 10;
  const int p = 2;
  Rng rng(16);
  const EwParams params(n, SpdMatrix(MatrixXd::Identity(p, p)), DensityGenerator::t(6.0));
  // Q = tr(S), V = S / tr(S); correlation between Q and each entry of V
  const long draws = 100000;
  std::vector<VectorXd> vs;
  std::vector<double> qs;
  for (long i = 0; i < draws; ++i) {
    const MatrixXd s = sample_ew(params, rng);
    const double q = s.trace();
    qs.push_back(q);
    vs.push_back(vec((s / q).eval()));
  }
  const double q_mean = std::accumulate(qs.begin(), qs.end(), 0.0) / draws;
  double q_var = 0.0;
  for (double q : qs) q_var += (q - q_mean) * (q - q_mean);
  q_var /= draws;
  for (int e = 0; e < p * p; ++e) {
    double v_mean = 0.0;
    for (const auto& v : vs) v_mean += v(e);
    v_mean /= draws;
    double v_var = 0.0;
    double cov = 0.0;
    for (long i = 0; i < draws; ++i) {
      v_var += (vs[i](e) - v_mean) * (vs[i](e) - v_mean);
      cov += (qs[i] - q_mean) * (vs[i](e) - v_mean);
    }
    v_var /= draws;
    cov /= draws;
    const double corr = cov / std::sqrt(q_var * v_var);
    CHECK(std::abs(corr) < 0.02);
  }
}

TEST_CASE("gaussian algorithm-1 output matches direct bartlett wishart") {
  const int n = 15;
  const int p = 3;
  Rng rng(17);
  const MatrixXd sigma = random_spd(rng, p);
  const MatrixXd chol = cholesky_lower(sigma);
  const EwParams params(n, SpdMatrix(sigma), DensityGenerator::gaussian());
  std::vector<double> tr_alg1;
  std::vector<double> tr_direct;
  std::vector<double> ld_alg1;
  std::vector<double> ld_direct;
  const long draws = 10000;
  for (long i = 0; i < draws; ++i) {
    const MatrixXd a = sample_ew(params, rng);
    const MatrixXd b = chol * sample_wishart_identity(n, p, rng) * chol.transpose();
    tr_alg1.push_back(a.trace());
    tr_direct.push_back(b.trace());
    ld_alg1.push_back(statistic(a, StatisticKind::NegLog10Det));
    ld_direct.push_back(statistic(b, StatisticKind::NegLog10Det));
  }
  CHECK(ks_two_sample(tr_alg1, tr_direct).p_value > 0.01);
  CHECK(ks_two_sample(ld_alg1, ld_direct).p_value > 0.01);
}

TEST_CASE("iew sampler mean") {
  const int n = 12;
  const int p = 2;
  Rng rng(18);
  const MatrixXd sigma = random_spd(rng, p);
  const EwParams gauss(n, SpdMatrix(sigma), DensityGenerator::gaussian(), true);
  MatrixXd acc = MatrixXd::Zero(p, p);
  const long draws = 200000;
  for (long i = 0; i < draws; ++i) acc += sample_iew(gauss, rng);
  acc /= static_cast<double>(draws);
  const MatrixXd want = sigma / (n - p - 1.0);
  CHECK((acc - want).norm() / want.norm() < 0.02);

  const EwParams t6(n, SpdMatrix(sigma), DensityGenerator::t(6.0), true);
  const MatrixXd want_t = iew_mean(t6);
  acc.setZero();
  for (long i = 0; i < draws; ++i) acc += sample_iew(t6, rng);
  acc /= static_cast<double>(draws);
  CHECK((acc - want_t).norm() / want_t.norm() < 0.02);
}

TEST_CASE("iew draw inverts an ew draw") {
  Rng rng(19);
  const MatrixXd sigma = random_spd(rng, 3);
  const EwParams params(8, SpdMatrix(sigma), DensityGenerator::gaussian(), true);
  Rng a(42);
  Rng b(42);
  const MatrixXd s_inv = sample_iew(params, a);
  const EwParams fwd(8, SpdMatrix(sigma.inverse().eval()), DensityGenerator::gaussian());
  const MatrixXd s_fwd = sample_ew(fwd, b);
  CHECK((s_inv.inverse() - s_fwd).norm() / s_fwd.norm() < 1e-10);
}

TEST_CASE("normalized wishart sampler") {
  Rng rng(20);
  const int n = 10;
  const int p = 2;
  MatrixXd second = MatrixXd::Zero(p * p, p * p);
  MatrixXd mean = MatrixXd::Zero(p, p);
  const long draws = 100000;
  for (long i = 0; i < draws; ++i) {
    const MatrixXd v = sample_nw(n, p, rng);
    CHECK(v.trace() == doctest::Approx(1.0).epsilon(1e-12));
    mean += v;
    const VectorXd vv = vec(v);
    second += vv * vv.transpose();
  }
  mean /= static_cast<double>(draws);
  second /= static_cast<double>(draws);
  CHECK((mean - MatrixXd::Identity(p, p) / p).cwiseAbs().maxCoeff() < 0.003);

  const auto want = nw_moments(n, p);
  // entries are bounded by 1, so 4 / sqrt(draws) is a generous SE envelope
  CHECK((second - want.second_moment).cwiseAbs().maxCoeff() < 4.0 / std::sqrt(double(draws)));
}

TEST_CASE("determinism: same seed, same stream") {
  const MatrixXd sigma = MatrixXd::Identity(3, 3);
  const EwParams params(9, SpdMatrix(sigma), DensityGenerator::t(5.0));
  Rng a(77);
  Rng b(77);
  for (int i = 0; i < 20; ++i) {
    const MatrixXd sa = sample_ew(params, a);
    const MatrixXd sb = sample_ew(params, b);
    CHECK((sa - sb).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_SUITE_END();
