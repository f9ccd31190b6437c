#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ellwishart/distributions.hpp"
#include "ellwishart/rng.hpp"

namespace ellw {

enum class StatisticKind {
  Trace,
  TracePow2,
  TracePow3,
  FrobNorm,
  FrobNormPow2,
  FrobNormPow3,
  NegLog10Det,
};

/// All seven statistics, in the canonical order used by reports.
const std::vector<StatisticKind>& all_statistics();

std::string statistic_name(StatisticKind kind);
std::optional<StatisticKind> statistic_from_name(const std::string& name);

/// Scalar summary of an SPD matrix: traces and Frobenius norms of powers,
/// and -log10 |S| via the Cholesky log-determinant.
double statistic(const Eigen::Ref<const MatrixXd>& s, StatisticKind kind);

/// Right-continuous empirical CDF, F(x) = #{v <= x} / N.
struct EcdfCurve {
  std::vector<double> x;  // sorted support
  std::vector<double> f;  // F at each support point, nondecreasing, last = 1

  double operator()(double t) const;
};

EcdfCurve ecdf(std::vector<double> values);

struct KsResult {
  double d;        // sup |F_x - F_y| over the pooled support
  double p_value;  // asymptotic Kolmogorov p-value, clamped to [0, 1]
};

KsResult ks_two_sample(std::vector<double> xs, std::vector<double> ys);

/// Wishart MLE of the center: (1 / (n K)) sum_i S_i.
MatrixXd mle_wishart(const std::vector<MatrixXd>& samples, int n);

/// t-Wishart center MLE by fixed-point iteration
///   Sigma <- (1/(nK)) sum_i w_i S_i,  w_i = (nu + np) / (nu + tr(Sigma^{-1} S_i)),
/// started at the Wishart MLE. Throws convergence_error (carrying the last
/// residual) when max_iter is reached before the relative Frobenius change
/// drops below tol.
MatrixXd mle_t_wishart(const std::vector<MatrixXd>& samples, int n, double nu,
                       double tol = 1e-9, int max_iter = 5000);

struct StatModelFit {
  KsResult wishart;
  KsResult t_wishart;
};

struct StatCurves {
  std::vector<double> grid;
  std::vector<double> data_cdf;
  std::vector<double> wishart_cdf;
  std::vector<double> t_wishart_cdf;
};

struct ClassFitReport {
  std::string label;
  std::size_t count = 0;
  double nu = 0.0;
  MatrixXd center_wishart;
  MatrixXd center_t_wishart;
  std::map<StatisticKind, StatModelFit> ks;
  std::map<StatisticKind, StatCurves> curves;
};

struct FitReport {
  std::uint64_t seed = 0;
  int n = 0;
  long mc_count = 0;
  std::vector<ClassFitReport> classes;
};

struct FitOptions {
  int n = 0;
  std::vector<StatisticKind> stats = all_statistics();
  long mc_count = 100000;  // the paper's figure default
  std::uint64_t seed = 0;
  int grid_size = 512;
  /// Per-class t degrees of freedom; falls back to nu_default, then to the
  /// EEG table defaults for labels "13", "17", "21", "resting".
  std::map<std::string, double> nu_by_class;
  std::optional<double> nu_default;
  double mle_tol = 1e-8;
  int mle_max_iter = 5000;
};

/// Runs the whole per-class fitting pipeline: center estimation (Wishart and
/// t-Wishart MLEs), model sampling, statistics, two-sample KS tests, and
/// shared-grid CDF curves. Classes use rng streams derived from the master
/// seed by label, so results do not depend on evaluation order.
FitReport fit_report(const std::map<std::string, std::vector<MatrixXd>>& dataset,
                     const FitOptions& options);

/// Heuristic helper: picks the nu from candidates maximizing the
/// trace-statistic KS p-value for one class.
double grid_search_nu(const std::vector<MatrixXd>& samples, int n,
                      const std::vector<double>& candidates, long mc_count,
                      std::uint64_t seed);

}  // namespace ellw
