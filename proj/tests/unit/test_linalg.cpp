#include "ellwishart/linalg.hpp"

#include <random>

#include "doctest.h"
#include "ellwishart/rng.hpp"

using namespace ellw;

namespace {

MatrixXd random_matrix(Rng& rng, Eigen::Index r, Eigen::Index c) {
  MatrixXd m(r, c);
  for (Eigen::Index j = 0; j < c; ++j)
    for (Eigen::Index i = 0; i < r; ++i) m(i, j) = rng.normal();
  return m;
}

MatrixXd random_spd(Rng& rng, Eigen::Index p) {
  const MatrixXd a = random_matrix(rng, p, p);
  return a * a.transpose() + static_cast<double>(p) * MatrixXd::Identity(p, p);
}

}  // namespace

TEST_SUITE_BEGIN("linalg");

TEST_CASE("vec stacks columns") {
  MatrixXd m(2, 2);
  m << 1, 2, 3, 4;
  const VectorXd v = vec(m);
  CHECK(v(0) == 1);
  CHECK(v(1) == 3);
  CHECK(v(2) == 2);
  CHECK(v(3) == 4);

  const VectorXd vi = vec(MatrixXd::Identity(2, 2));
  CHECK(vi(0) == 1);
  CHECK(vi(1) == 0);
  CHECK(vi(2) == 0);
  CHECK(vi(3) == 1);
}

TEST_CASE("unvec inverts vec") {
  VectorXd v(4);
  v << 1, 3, 2, 4;
  MatrixXd m = unvec(v, 2, 2);
  CHECK(m(0, 0) == 1);
  CHECK(m(0, 1) == 2);
  CHECK(m(1, 0) == 3);
  CHECK(m(1, 1) == 4);

  CHECK(unvec(VectorXd::Zero(6), 2, 3).isZero());
  CHECK_THROWS_AS(unvec(VectorXd::Zero(5), 2, 3), dimension_error);

  Rng rng(7);
  const MatrixXd a = random_matrix(rng, 3, 2);
  CHECK(unvec(vec(a), 3, 2).isApprox(a, 0.0));
  const MatrixXd b = random_matrix(rng, 4, 5);
  CHECK(vec(unvec(vec(b), 4, 5)).isApprox(vec(b), 0.0));
}

TEST_CASE("kron block structure") {
  CHECK(kron(MatrixXd::Identity(2, 2), MatrixXd::Identity(2, 2))
            .isApprox(MatrixXd::Identity(4, 4), 0.0));

  MatrixXd scalar(1, 1);
  scalar << 2.0;
  Rng rng(11);
  const MatrixXd b = random_matrix(rng, 3, 3);
  CHECK(kron(scalar, b).isApprox(2.0 * b, 0.0));

  // vec(A (x) B) = (I (x) K (x) I)(vec A (x) vec B)
  const MatrixXd a2 = random_matrix(rng, 2, 2);
  const MatrixXd b2 = random_matrix(rng, 2, 2);
  const MatrixXd mixer =
      kron(kron(MatrixXd::Identity(2, 2), commutation_matrix(2, 2).dense()),
           MatrixXd::Identity(2, 2));
  const VectorXd lhs = vec(kron(a2, b2));
  const VectorXd rhs = mixer * kron(vec(a2), vec(b2));
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
}

TEST_CASE("commutation matrix permutes vec to vec-transpose") {
  const PermSumOperator k11 = commutation_matrix(1, 1);
  VectorXd one(1);
  one << 3.5;
  CHECK(k11.apply(one)(0) == 3.5);

  VectorXd v(4);
  v << 1, 3, 2, 4;  // vec of [[1,2],[3,4]]
  const VectorXd kv = commutation_matrix(2, 2).apply(v);
  CHECK(kv(0) == 1);
  CHECK(kv(1) == 2);
  CHECK(kv(2) == 3);
  CHECK(kv(3) == 4);

  // K_{q,p} K_{p,q} = identity
  const PermSumOperator kqp_kpq = commutation_matrix(3, 2).compose(commutation_matrix(2, 3));
  CHECK(kqp_kpq.dense().isApprox(MatrixXd::Identity(6, 6), 0.0));

  Rng rng(3);
  for (int p = 1; p <= 4; ++p) {
    for (int q = 1; q <= 4; ++q) {
      const MatrixXd a = random_matrix(rng, p, q);
      const VectorXd got = commutation_matrix(p, q).apply(vec(a));
      CHECK((got - vec(a.transpose())).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("K_pp is symmetric and involutive") {
  for (int p = 1; p <= 4; ++p) {
    const MatrixXd k = commutation_matrix(p, p).dense();
    CHECK(k.isApprox(k.transpose(), 0.0));
    CHECK((k * k).isApprox(MatrixXd::Identity(p * p, p * p), 0.0));
  }
}

TEST_CASE("cholesky_lower") {
  const int p = 3;
  CHECK(cholesky_lower(MatrixXd::Identity(p, p)).isApprox(MatrixXd::Identity(p, p)));

  MatrixXd m(2, 2);
  m << 4, 2, 2, 5;
  MatrixXd expect(2, 2);
  expect << 2, 0, 1, 2;
  CHECK(cholesky_lower(m).isApprox(expect, 1e-14));

  Rng rng(5);
  const MatrixXd sigma = random_spd(rng, 4);
  const MatrixXd l = cholesky_lower(sigma);
  CHECK((l * l.transpose() - sigma).norm() / sigma.norm() < 1e-10);
  CHECK((l.diagonal().array() > 0.0).all());

  MatrixXd bad(2, 2);
  bad << 1, 2, 2, 1;  // indefinite
  CHECK_THROWS_AS(cholesky_lower(bad), not_positive_definite);
}

TEST_CASE("symmetric_sqrt") {
  CHECK(symmetric_sqrt(MatrixXd::Identity(3, 3)).isApprox(MatrixXd::Identity(3, 3)));

  MatrixXd d(2, 2);
  d << 4, 0, 0, 9;
  MatrixXd expect(2, 2);
  expect << 2, 0, 0, 3;
  CHECK(symmetric_sqrt(d).isApprox(expect, 1e-14));

  Rng rng(9);
  const MatrixXd sigma = random_spd(rng, 4);
  const MatrixXd h = symmetric_sqrt(sigma);
  CHECK((h * h - sigma).norm() / sigma.norm() < 1e-9);
  CHECK(h.isApprox(h.transpose(), 1e-12));

  MatrixXd bad(2, 2);
  bad << 1, 2, 2, 1;
  CHECK_THROWS_AS(symmetric_sqrt(bad), not_positive_definite);
}

TEST_CASE("both factorizations reconstruct sigma") {
  Rng rng(13);
  const MatrixXd sigma = random_spd(rng, 3);
  const MatrixXd l = cholesky_lower(sigma);
  const MatrixXd h = symmetric_sqrt(sigma);
  CHECK((l * l.transpose() - h * h).norm() / sigma.norm() < 1e-9);
}

TEST_CASE("apply_operator basics") {
  VectorXd v(4);
  v << 1, 2, 3, 4;
  CHECK(PermSumOperator::identity(4).apply(v).isApprox(v, 0.0));

  const PermSumOperator k = commutation_matrix(2, 2);
  CHECK(k.apply(k.apply(v)).isApprox(v, 0.0));

  // (K + I) checked against the dense oracle
  const PermSumOperator op = PermSumOperator::sum(k, PermSumOperator::identity(4));
  const VectorXd got = op.apply(v);
  const VectorXd want = op.dense() * v;
  CHECK((got - want).cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(op.apply(VectorXd::Zero(5)), dimension_error);
}

TEST_CASE("operator application agrees with dense materialization") {
  Rng rng(17);
  // random compositions on dims up to 81
  for (int trial = 0; trial < 20; ++trial) {
    const int p = 3;
    PermSumOperator a = commutation_matrix(p, p * p);             // dim 27
    PermSumOperator b = PermSumOperator::kron(commutation_matrix(p, p),
                                              PermSumOperator::identity(p));
    PermSumOperator op = PermSumOperator::sum(
        a.compose(b).scaled(rng.normal()),
        PermSumOperator::kron(PermSumOperator::identity(p * p),
                              PermSumOperator::identity(p)).scaled(rng.normal()));
    op = PermSumOperator::kron(op, commutation_matrix(1, 3));      // dim 81
    const MatrixXd dense = op.dense();
    VectorXd v(81);
    for (int i = 0; i < 81; ++i) v(i) = rng.normal();
    const VectorXd got = op.apply(v);
    const VectorXd want = dense * v;
    CHECK((got - want).cwiseAbs().maxCoeff() < 1e-12 * want.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("operator terms must be bijections") {
  std::vector<PermSumOperator::Term> terms(1);
  terms[0].weight = 1.0;
  terms[0].perm = {0, 0, 1};  // not a bijection
  CHECK_THROWS(PermSumOperator(3, std::move(terms)));
}

TEST_CASE("apply_kron_power matches dense kronecker power") {
  Rng rng(23);
  const MatrixXd a = random_matrix(rng, 3, 3);
  const MatrixXd a4 = kron(kron(a, a), kron(a, a));
  VectorXd v(81);
  for (int i = 0; i < 81; ++i) v(i) = rng.normal();
  const VectorXd got = apply_kron_power(a, v, 4);
  const VectorXd want = a4 * v;
  CHECK((got - want).cwiseAbs().maxCoeff() < 1e-10 * want.cwiseAbs().maxCoeff());
}

TEST_CASE("spd matrix invariant") {
  Rng rng(29);
  CHECK_NOTHROW(SpdMatrix(random_spd(rng, 3)));
  MatrixXd asym(2, 2);
  asym << 1, 0.5, 0.2, 1;
  CHECK_THROWS_AS(SpdMatrix{asym}, not_positive_definite);
  MatrixXd indef(2, 2);
  indef << 1, 2, 2, 1;
  CHECK_THROWS_AS(SpdMatrix{indef}, not_positive_definite);
}

TEST_SUITE_END();
