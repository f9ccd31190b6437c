#include "ellwishart/generators.hpp"

#include <cmath>
#include <functional>
#include <vector>

#include "doctest.h"
#include "ellwishart/error.hpp"
#include "ellwishart/fitting.hpp"

using namespace ellw;

namespace {

// Adaptive Simpson quadrature, test oracle only.
double simpson(const std::function<double(double)>& f, double a, double b, double fa,
               double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
         simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-10) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson(f, a, b, fa, fm, fb, whole, tol, 40);
}

double empirical_moment(const DensityGenerator& gen, int d, double k, long n, Rng& rng) {
  double acc = 0.0;
  for (long i = 0; i < n; ++i) acc += std::pow(gen.sample_q(d, rng), k);
  return acc / static_cast<double>(n);
}

}  // namespace

TEST_SUITE_BEGIN("generators");

TEST_CASE("log_h closed forms") {
  const auto gauss = DensityGenerator::gaussian();
  CHECK(gauss.log_h(2, 0.0) == doctest::Approx(std::log(1.0 / (2.0 * M_PI))).epsilon(1e-14));

  // Kotz(1, 1, 1/2) is the Gaussian generator
  const auto kotz = DensityGenerator::kotz(1.0, 1.0, 0.5);
  CHECK(kotz.log_h(4, 3.7) == doctest::Approx(gauss.log_h(4, 3.7)).epsilon(1e-13));

  // GG(1) is the Gaussian generator
  const auto gg = DensityGenerator::generalized_gaussian(1.0);
  CHECK(gg.log_h(6, 1.2) == doctest::Approx(gauss.log_h(6, 1.2)).epsilon(1e-13));
}

TEST_CASE("generator parameter domains") {
  CHECK_THROWS_AS(DensityGenerator::t(0.0), parameter_error);
  CHECK_THROWS_AS(DensityGenerator::generalized_gaussian(-1.0), parameter_error);
  CHECK_THROWS_AS(DensityGenerator::kotz(1.0, 1.0, 0.0), parameter_error);
  // Kotz alpha + d/2 > 1 is checked at the use site
  const auto kotz = DensityGenerator::kotz(-3.0, 1.0, 0.5);
  CHECK_THROWS_AS(kotz.log_h(2, 1.0), parameter_error);
  CHECK_NOTHROW(kotz.log_h(10, 1.0));
}

TEST_CASE("modular moments") {
  const auto gauss = DensityGenerator::gaussian();
  CHECK(gauss.modular_moment(8, 1) == doctest::Approx(8.0).epsilon(1e-14));

  const auto t6 = DensityGenerator::t(6.0);
  CHECK(t6.modular_moment(8, 1) == doctest::Approx(12.0).epsilon(1e-13));

  // zeroth moment is 1 for every generator
  for (const auto& gen : {gauss, t6, DensityGenerator::generalized_gaussian(0.7),
                          DensityGenerator::kotz(2.0, 1.5, 0.8)}) {
    CHECK(gen.modular_moment(6, 0) == doctest::Approx(1.0).epsilon(1e-14));
  }

  const auto t4 = DensityGenerator::t(4.0);
  CHECK_THROWS_AS(t4.modular_moment(8, 2), moment_error);
  CHECK_THROWS_AS(gauss.modular_moment(4, -2), moment_error);
  CHECK_THROWS_AS(DensityGenerator::kotz(0.5, 1.0, 1.0).modular_moment(4, -2),
                  moment_error);
}

TEST_CASE("modular pdf") {
  const auto gauss = DensityGenerator::gaussian();
  // chi^2_2 density at t=2 is exp(-1)/2
  CHECK(gauss.modular_pdf(2, 2.0) == doctest::Approx(std::exp(-1.0) / 2.0).epsilon(1e-13));

  // chi^2_8 mode at t = d - 2 = 6
  const double at_mode = gauss.modular_pdf(8, 6.0);
  CHECK(at_mode > gauss.modular_pdf(8, 5.9));
  CHECK(at_mode > gauss.modular_pdf(8, 6.1));

  // density integrates to 1 (adaptive quadrature with tail cutoff)
  const auto t5 = DensityGenerator::t(5.0);
  const double mass =
      integrate([&](double t) { return t <= 0.0 ? 0.0 : t5.modular_pdf(6, t); }, 0.0, 4000.0);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));

  const double gmass =
      integrate([&](double t) { return t <= 0.0 ? 0.0 : gauss.modular_pdf(16, t); }, 0.0, 300.0);
  CHECK(gmass == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("sampler matches closed-form moments") {
  Rng rng(101);
  const long n = 200000;

  const auto gauss = DensityGenerator::gaussian();
  CHECK(empirical_moment(gauss, 8, 1, n, rng) == doctest::Approx(8.0).epsilon(0.01));

  const auto t6 = DensityGenerator::t(6.0);
  CHECK(empirical_moment(t6, 8, 1, n, rng) == doctest::Approx(12.0).epsilon(0.02));

  const auto kotz = DensityGenerator::kotz(2.0, 1.0, 0.5);
  CHECK(empirical_moment(kotz, 4, 1, n, rng) ==
        doctest::Approx(kotz.modular_moment(4, 1)).epsilon(0.02));
}

TEST_CASE("moment-sampler consistency across the family") {
  // empirical k-th moments within 4 standard errors wherever they exist
  Rng rng(202);
  const long n = 150000;
  const std::vector<DensityGenerator> gens = {
      DensityGenerator::gaussian(), DensityGenerator::t(9.0),
      DensityGenerator::generalized_gaussian(0.8), DensityGenerator::kotz(1.5, 1.2, 0.6)};
  for (const auto& gen : gens) {
    for (int d : {4, 8}) {
      for (double k : {-1.0, 1.0, 2.0}) {
        if (!gen.moment_exists(d, k) || !gen.moment_exists(d, 2 * k)) continue;
        const double want = gen.modular_moment(d, k);
        const double m2 = gen.modular_moment(d, 2 * k);
        const double se = std::sqrt(std::max(0.0, m2 - want * want) / n);
        double acc = 0.0;
        for (long i = 0; i < n; ++i) acc += std::pow(gen.sample_q(d, rng), k);
        acc /= n;
        INFO(gen.name(), " d=", d, " k=", k);
        CHECK(std::abs(acc - want) < 4.0 * se + 1e-12);
      }
    }
  }
}

TEST_CASE("specialization chain kotz -> gg -> gaussian") {
  const double beta = 0.9;
  const auto kotz = DensityGenerator::kotz(1.0, beta, 0.5);
  const auto gg = DensityGenerator::generalized_gaussian(beta);
  for (int d : {4, 8}) {
    CHECK(kotz.log_h(d, 2.3) == doctest::Approx(gg.log_h(d, 2.3)).epsilon(1e-12));
    for (int k : {-1, 1, 2}) {
      CHECK(kotz.modular_moment(d, k) ==
            doctest::Approx(gg.modular_moment(d, k)).epsilon(1e-12));
    }
  }

  const auto gg1 = DensityGenerator::generalized_gaussian(1.0);
  const auto gauss = DensityGenerator::gaussian();
  for (int k : {-1, 1, 2}) {
    CHECK(gg1.modular_moment(8, k) ==
          doctest::Approx(gauss.modular_moment(8, k)).epsilon(1e-12));
  }

  // sampled distributions agree (two-sample KS)
  Rng rng(303);
  const long n = 20000;
  std::vector<double> a;
  std::vector<double> b;
  for (long i = 0; i < n; ++i) a.push_back(kotz.sample_q(8, rng));
  for (long i = 0; i < n; ++i) b.push_back(gg.sample_q(8, rng));
  CHECK(ks_two_sample(a, b).p_value > 0.01);

  std::vector<double> c;
  std::vector<double> d;
  for (long i = 0; i < n; ++i) c.push_back(gg1.sample_q(8, rng));
  for (long i = 0; i < n; ++i) d.push_back(gauss.sample_q(8, rng));
  CHECK(ks_two_sample(c, d).p_value > 0.01);
}

TEST_CASE("t moments converge to gaussian as nu grows") {
  const auto t_big = DensityGenerator::t(1e6);
  const auto gauss = DensityGenerator::gaussian();
  for (int k : {1, 2}) {
    const double a = t_big.modular_moment(8, k);
    const double b = gauss.modular_moment(8, k);
    CHECK(std::abs(a - b) / b < 1e-4);
  }
}

TEST_SUITE_END();
