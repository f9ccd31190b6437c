#include "ellwishart/fitting.hpp"

#include <algorithm>
#include <cmath>

#include "ellwishart/sampling.hpp"

namespace ellw {

const std::vector<StatisticKind>& all_statistics() {
  static const std::vector<StatisticKind> kinds = {
      StatisticKind::Trace,        StatisticKind::TracePow2,
      StatisticKind::TracePow3,    StatisticKind::FrobNorm,
      StatisticKind::FrobNormPow2, StatisticKind::FrobNormPow3,
      StatisticKind::NegLog10Det};
  return kinds;
}

std::string statistic_name(StatisticKind kind) {
  switch (kind) {
    case StatisticKind::Trace: return "trace";
    case StatisticKind::TracePow2: return "trace2";
    case StatisticKind::TracePow3: return "trace3";
    case StatisticKind::FrobNorm: return "norm";
    case StatisticKind::FrobNormPow2: return "norm2";
    case StatisticKind::FrobNormPow3: return "norm3";
    case StatisticKind::NegLog10Det: return "neglog10det";
  }
  return "?";
}

std::optional<StatisticKind> statistic_from_name(const std::string& name) {
  for (StatisticKind k : all_statistics()) {
    if (statistic_name(k) == name) return k;
  }
  return std::nullopt;
}

double statistic(const Eigen::Ref<const MatrixXd>& s, StatisticKind kind) {
  switch (kind) {
    case StatisticKind::Trace:
      return s.trace();
    case StatisticKind::TracePow2:
      return (s * s).trace();
    case StatisticKind::TracePow3:
      return (s * s * s).trace();
    case StatisticKind::FrobNorm:
      return s.norm();
    case StatisticKind::FrobNormPow2:
      return (s * s).norm();
    case StatisticKind::FrobNormPow3:
      return (s * s * s).norm();
    case StatisticKind::NegLog10Det: {
      Eigen::LLT<MatrixXd> llt(s);
      if (llt.info() != Eigen::Success) {
        throw not_positive_definite("statistic: S is not positive definite");
      }
      const double log_det =
          2.0 * MatrixXd(llt.matrixL()).diagonal().array().log().sum();
      return -log_det / std::log(10.0);
    }
  }
  throw error("unreachable");
}

double EcdfCurve::operator()(double t) const {
  const auto it = std::upper_bound(x.begin(), x.end(), t);
  if (it == x.begin()) return 0.0;
  return f[static_cast<std::size_t>(it - x.begin()) - 1];
}

EcdfCurve ecdf(std::vector<double> values) {
  if (values.empty()) throw parameter_error("ecdf: empty input");
  std::sort(values.begin(), values.end());
  EcdfCurve out;
  const double n = static_cast<double>(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i + 1 < values.size() && values[i + 1] == values[i]) continue;  // collapse ties
    out.x.push_back(values[i]);
    out.f.push_back(static_cast<double>(i + 1) / n);
  }
  return out;
}

namespace {

double kolmogorov_p(double lambda) {
  // 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 lambda^2), truncated below 1e-12.
  // Below lambda ~ 0.2 the survival probability is 1 within 5e-13 and the
  // alternating series stops converging usefully, so short-circuit.
  if (lambda < 0.2) return 1.0;
  const double l2 = lambda * lambda;
  double sum = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= 1000; ++j) {
    const double term = std::exp(-2.0 * j * j * l2);
    sum += sign * term;
    if (term < 1e-12) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

}  // namespace

KsResult ks_two_sample(std::vector<double> xs, std::vector<double> ys) {
  if (xs.empty() || ys.empty()) throw parameter_error("ks_two_sample: empty sample");
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  const double nx = static_cast<double>(xs.size());
  const double ny = static_cast<double>(ys.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < xs.size() && j < ys.size()) {
    const double t = std::min(xs[i], ys[j]);
    while (i < xs.size() && xs[i] <= t) ++i;
    while (j < ys.size() && ys[j] <= t) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  const double ne = nx * ny / (nx + ny);
  return {d, kolmogorov_p(std::sqrt(ne) * d)};
}

MatrixXd mle_wishart(const std::vector<MatrixXd>& samples, int n) {
  if (samples.empty()) throw parameter_error("mle_wishart: empty sample list");
  const Eigen::Index p = samples.front().rows();
  MatrixXd sum = MatrixXd::Zero(p, p);
  for (const MatrixXd& s : samples) {
    if (s.rows() != p || s.cols() != p) {
      throw dimension_error("mle_wishart: inconsistent sample dimensions");
    }
    sum += s;
  }
  return sum / (static_cast<double>(n) * static_cast<double>(samples.size()));
}

MatrixXd mle_t_wishart(const std::vector<MatrixXd>& samples, int n, double nu,
                       double tol, int max_iter) {
  if (samples.empty()) throw parameter_error("mle_t_wishart: empty sample list");
  if (!(nu > 0.0)) throw parameter_error("mle_t_wishart: requires nu > 0");
  if (!(tol > 0.0)) throw parameter_error("mle_t_wishart: requires tol > 0");
  const Eigen::Index p = samples.front().rows();
  const double np = static_cast<double>(n) * static_cast<double>(p);
  const double denom = static_cast<double>(n) * static_cast<double>(samples.size());
  MatrixXd sigma = mle_wishart(samples, n);
  double residual = std::numeric_limits<double>::infinity();
  for (int it = 0; it < max_iter; ++it) {
    Eigen::LLT<MatrixXd> llt(sigma);
    if (llt.info() != Eigen::Success) {
      throw not_positive_definite("mle_t_wishart: iterate lost positive definiteness");
    }
    MatrixXd next = MatrixXd::Zero(p, p);
    for (const MatrixXd& s : samples) {
      const double w = (nu + np) / (nu + llt.solve(s).trace());
      next += w * s;
    }
    next /= denom;
    residual = (next - sigma).norm() / std::max(1e-300, sigma.norm());
    sigma = next;
    if (residual < tol) return sigma;
  }
  throw convergence_error("mle_t_wishart: no convergence after " +
                              std::to_string(max_iter) +
                              " iterations (relative change " + std::to_string(residual) +
                              ")",
                          residual);
}

namespace {

const std::map<std::string, double>& eeg_nu_defaults() {
  // Degrees of freedom the paper used per stimulation class.
  static const std::map<std::string, double> table = {
      {"13", 40.0}, {"17", 35.0}, {"21", 50.0}, {"resting", 23.0}};
  return table;
}

double resolve_nu(const FitOptions& options, const std::string& label) {
  if (auto it = options.nu_by_class.find(label); it != options.nu_by_class.end()) {
    return it->second;
  }
  if (options.nu_default) return *options.nu_default;
  if (auto it = eeg_nu_defaults().find(label); it != eeg_nu_defaults().end()) {
    return it->second;
  }
  throw parameter_error("fit_report: no degrees of freedom given for class '" + label +
                        "' (pass nu_by_class or nu_default)");
}

std::vector<double> collect_stats(const std::vector<MatrixXd>& samples,
                                  StatisticKind kind) {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const MatrixXd& s : samples) out.push_back(statistic(s, kind));
  return out;
}

}  // namespace

FitReport fit_report(const std::map<std::string, std::vector<MatrixXd>>& dataset,
                     const FitOptions& options) {
  if (options.n <= 0) throw parameter_error("fit_report: n must be positive");
  if (options.stats.empty()) throw parameter_error("fit_report: no statistics requested");
  FitReport report;
  report.seed = options.seed;
  report.n = options.n;
  report.mc_count = options.mc_count;

  for (const auto& [label, samples] : dataset) {
    if (samples.empty()) {
      throw parameter_error("fit_report: class '" + label + "' is empty");
    }
    ClassFitReport cls;
    cls.label = label;
    cls.count = samples.size();
    cls.nu = resolve_nu(options, label);
    cls.center_wishart = mle_wishart(samples, options.n);
    cls.center_t_wishart = mle_t_wishart(samples, options.n, cls.nu, options.mle_tol,
                                         options.mle_max_iter);

    Rng rng(derive_seed(options.seed, hash_label(label)));
    const EwParams wishart_model(options.n, SpdMatrix(cls.center_wishart),
                                 DensityGenerator::gaussian());
    const EwParams t_model(options.n, SpdMatrix(cls.center_t_wishart),
                           DensityGenerator::t(cls.nu));
    std::vector<MatrixXd> wishart_draws;
    std::vector<MatrixXd> t_draws;
    wishart_draws.reserve(options.mc_count);
    t_draws.reserve(options.mc_count);
    for (long i = 0; i < options.mc_count; ++i) {
      wishart_draws.push_back(sample_ew(wishart_model, rng));
    }
    for (long i = 0; i < options.mc_count; ++i) {
      t_draws.push_back(sample_ew(t_model, rng));
    }

    for (StatisticKind kind : options.stats) {
      std::vector<double> data_vals = collect_stats(samples, kind);
      std::vector<double> wishart_vals = collect_stats(wishart_draws, kind);
      std::vector<double> t_vals = collect_stats(t_draws, kind);

      StatModelFit fit;
      fit.wishart = ks_two_sample(data_vals, wishart_vals);
      fit.t_wishart = ks_two_sample(data_vals, t_vals);
      cls.ks[kind] = fit;

      const EcdfCurve data_cdf = ecdf(data_vals);
      const EcdfCurve wishart_cdf = ecdf(wishart_vals);
      const EcdfCurve t_cdf = ecdf(t_vals);
      double lo = std::min({data_cdf.x.front(), wishart_cdf.x.front(), t_cdf.x.front()});
      double hi = std::max({data_cdf.x.back(), wishart_cdf.x.back(), t_cdf.x.back()});
      if (lo == hi) hi = lo + 1.0;
      StatCurves curves;
      const int g = std::max(2, options.grid_size);
      curves.grid.resize(g);
      for (int i = 0; i < g; ++i) {
        const double t = lo + (hi - lo) * static_cast<double>(i) / (g - 1);
        curves.grid[i] = t;
        curves.data_cdf.push_back(data_cdf(t));
        curves.wishart_cdf.push_back(wishart_cdf(t));
        curves.t_wishart_cdf.push_back(t_cdf(t));
      }
      cls.curves[kind] = std::move(curves);
    }
    report.classes.push_back(std::move(cls));
  }
  return report;
}

double grid_search_nu(const std::vector<MatrixXd>& samples, int n,
                      const std::vector<double>& candidates, long mc_count,
                      std::uint64_t seed) {
  if (candidates.empty()) throw parameter_error("grid_search_nu: no candidates");
  const std::vector<double> data_vals = collect_stats(samples, StatisticKind::Trace);
  double best_nu = candidates.front();
  double best_p = -1.0;
  for (double nu : candidates) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(nu * 1024.0)));
    const MatrixXd center = mle_t_wishart(samples, n, nu);
    const EwParams model(n, SpdMatrix(center), DensityGenerator::t(nu));
    std::vector<double> model_vals;
    model_vals.reserve(mc_count);
    for (long i = 0; i < mc_count; ++i) {
      model_vals.push_back(statistic(sample_ew(model, rng), StatisticKind::Trace));
    }
    const KsResult ks = ks_two_sample(data_vals, model_vals);
    if (ks.p_value > best_p) {
      best_p = ks.p_value;
      best_nu = nu;
    }
  }
  return best_nu;
}

}  // namespace ellw
