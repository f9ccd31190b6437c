// Command-line frontend: sampling, moment computation, distribution fitting,
// and the acceptance/verification suite.
//
// Exit codes: 0 success, 1 verification failure, 2 bad flags or unreadable
// input, 3 parameter-domain error, 4 non-SPD data record.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "ellwishart/dataset_io.hpp"
#include "ellwishart/fitting.hpp"
#include "ellwishart/kron_moments.hpp"
#include "ellwishart/sampling.hpp"
#include "ellwishart/verify.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace ellw;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitBadFlags = 2;
constexpr int kExitParameterDomain = 3;
constexpr int kExitNotSpd = 4;

struct DistFlags {
  std::string dist = "wishart";
  bool inverse = false;
  int n = 0;
  int p = 0;
  std::string sigma_spec = "identity";
  std::optional<double> nu;
  std::optional<double> beta;
  std::optional<double> alpha;
  std::optional<double> bigr;
};

void add_dist_flags(CLI::App* cmd, DistFlags& flags) {
  cmd->add_option("--dist", flags.dist, "wishart|t-wishart|gg-wishart|kotz-wishart")
      ->check(CLI::IsMember({"wishart", "t-wishart", "gg-wishart", "kotz-wishart"}));
  cmd->add_flag("--inverse", flags.inverse, "use the inverse distribution");
  cmd->add_option("--n", flags.n, "degrees of freedom")->required();
  cmd->add_option("--p", flags.p, "matrix dimension")->required();
  cmd->add_option("--sigma", flags.sigma_spec,
                  "center matrix: 'identity' or a one-record dataset file");
  cmd->add_option("--nu", flags.nu, "t- degrees of freedom");
  cmd->add_option("--beta", flags.beta, "generalized-Gaussian / Kotz shape");
  cmd->add_option("--alpha", flags.alpha, "Kotz alpha");
  cmd->add_option("--bigr", flags.bigr, "Kotz R");
}

DensityGenerator make_generator(const DistFlags& flags) {
  if (flags.dist == "wishart") return DensityGenerator::gaussian();
  if (flags.dist == "t-wishart") {
    if (!flags.nu) throw CLI::ValidationError("--dist t-wishart requires --nu");
    return DensityGenerator::t(*flags.nu);
  }
  if (flags.dist == "gg-wishart") {
    if (!flags.beta) throw CLI::ValidationError("--dist gg-wishart requires --beta");
    return DensityGenerator::generalized_gaussian(*flags.beta);
  }
  if (!flags.alpha || !flags.beta || !flags.bigr) {
    throw CLI::ValidationError("--dist kotz-wishart requires --alpha, --beta, --bigr");
  }
  return DensityGenerator::kotz(*flags.alpha, *flags.beta, *flags.bigr);
}

MatrixXd load_sigma(const DistFlags& flags) {
  if (flags.sigma_spec == "identity") {
    return MatrixXd::Identity(flags.p, flags.p);
  }
  const auto records = read_matrix_dataset(flags.sigma_spec, flags.p, false);
  if (records.size() != 1) {
    throw dataset_format_error("--sigma file must hold exactly one record, got " +
                               std::to_string(records.size()));
  }
  return records.front().matrix;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("ELLWISHART_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return 0;
}

json matrix_to_json(const MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_to_json(const VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

int run_sample(const DistFlags& flags, long count, std::uint64_t seed,
               const std::string& method_name, const std::string& out_path) {
  const DensityGenerator gen = make_generator(flags);
  const EwParams params(flags.n, SpdMatrix(load_sigma(flags)), gen, flags.inverse);
  const SamplerMethod method =
      method_name == "naive" ? SamplerMethod::Naive : SamplerMethod::Bartlett;

  Rng rng(seed);
  std::vector<MatrixXd> draws;
  draws.reserve(count);
  double trace_acc = 0.0;
  for (long i = 0; i < count; ++i) {
    MatrixXd s = flags.inverse ? sample_iew(params, rng) : sample_ew(params, rng, method);
    trace_acc += s.trace();
    draws.push_back(std::move(s));
  }
  write_matrix_dataset(out_path, draws, nullptr,
                       "ellwishart sample: dist=" + flags.dist +
                           (flags.inverse ? " (inverse)" : "") +
                           " n=" + std::to_string(flags.n) +
                           " p=" + std::to_string(flags.p) +
                           " seed=" + std::to_string(seed));

  std::printf("wrote %ld records to %s\n", count, out_path.c_str());
  std::printf("empirical mean trace: %.6g\n", trace_acc / static_cast<double>(count));
  const MomentCoefficients coeff = coefficients(gen, flags.n, flags.p);
  const std::optional<double> scale = flags.inverse ? coeff.d : coeff.a;
  if (scale) {
    std::printf("closed-form mean trace: %.6g\n", *scale * params.sigma.mat().trace());
  } else {
    std::printf("closed-form mean trace: nonexistent (%s)\n",
                gen.moment_bound(flags.n * flags.p).c_str());
  }
  return kExitOk;
}

int run_moments(const DistFlags& flags, const std::vector<int>& orders, long mc_count,
                std::uint64_t seed, std::optional<std::uint64_t> budget,
                const std::string& out_path) {
  const DensityGenerator gen = make_generator(flags);
  const EwParams params(flags.n, SpdMatrix(load_sigma(flags)), gen, flags.inverse);

  json doc;
  doc["schema_version"] = 1;
  doc["distribution"] = {{"dist", flags.dist},
                         {"inverse", flags.inverse},
                         {"n", flags.n},
                         {"p", flags.p},
                         {"generator", gen.name()}};
  int computed = 0;

  const MomentCoefficients coeff = coefficients(gen, flags.n, flags.p);
  json cj;
  const std::pair<const char*, std::optional<double>> coeffs[] = {
      {"a", coeff.a}, {"b", coeff.b}, {"c", coeff.c},
      {"d", coeff.d}, {"e", coeff.e}, {"f", coeff.f}};
  for (const auto& [name, value] : coeffs) {
    cj[name] = value ? json(*value) : json(nullptr);
  }
  doc["coefficients"] = cj;

  auto try_block = [&](const char* key, auto&& fn) {
    try {
      doc[key] = {{"exists", true}, {"value", fn()}};
      ++computed;
    } catch (const moment_error& e) {
      doc[key] = {{"exists", false}, {"reason", e.what()}};
    }
  };
  try_block("mean", [&] {
    return matrix_to_json(flags.inverse ? iew_mean(params) : ew_mean(params));
  });
  try_block("variance", [&] {
    return matrix_to_json(flags.inverse ? iew_variance(params) : ew_variance(params));
  });

  json kron_list = json::array();
  for (int order : orders) {
    json entry;
    entry["order"] = order;
    try {
      const VectorXd value = flags.inverse ? iew_kron_moment(params, order, budget)
                                           : ew_kron_moment(params, order, budget);
      entry["exists"] = true;
      entry["value"] = vector_to_json(value);
      ++computed;
      if (mc_count > 0) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(order)));
        const McKronMoment mc = mc_kron_moment(params, order, mc_count, rng, budget);
        double max_z = 0.0;
        for (Eigen::Index i = 0; i < value.size(); ++i) {
          max_z = std::max(max_z, std::abs(mc.estimate(i) - value(i)) /
                                      std::max(mc.std_error(i), 1e-300));
        }
        entry["mc"] = {{"count", mc_count},
                       {"estimate", vector_to_json(mc.estimate)},
                       {"std_error", vector_to_json(mc.std_error)},
                       {"max_abs_z", max_z}};
      }
    } catch (const error& e) {
      entry["exists"] = false;
      entry["reason"] = e.what();
    }
    kron_list.push_back(std::move(entry));
  }
  doc["kron_moments"] = kron_list;

  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::binary);
    out << doc.dump(2) << "\n";
  } else {
    std::cout << doc.dump(2) << "\n";
  }
  if (computed == 0) {
    std::fprintf(stderr, "no requested quantity exists for these parameters\n");
    return kExitParameterDomain;
  }
  return kExitOk;
}

int run_fit(const std::string& data_path, int dim, int n, bool labeled,
            const std::string& nu_per_class, std::optional<double> nu,
            const std::string& stats_csv, long mc_samples, std::uint64_t seed,
            int grid_size, const std::string& out_dir) {
  std::vector<MatrixRecord> records = read_matrix_dataset(data_path, dim, labeled);
  if (records.empty()) {
    throw dataset_format_error("dataset '" + data_path + "' holds no records");
  }
  std::map<std::string, std::vector<MatrixXd>> dataset;
  for (MatrixRecord& rec : records) {
    dataset[labeled ? rec.label : "all"].push_back(std::move(rec.matrix));
  }

  FitOptions options;
  options.n = n;
  options.mc_count = mc_samples;
  options.seed = seed;
  options.grid_size = grid_size;
  options.nu_default = nu;
  if (!nu_per_class.empty()) {
    std::stringstream ss(nu_per_class);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) {
        throw CLI::ValidationError("--nu-per-class expects label=nu[,label=nu...]");
      }
      options.nu_by_class[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
    }
  }
  if (!stats_csv.empty()) {
    options.stats.clear();
    std::stringstream ss(stats_csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto kind = statistic_from_name(item);
      if (!kind) throw CLI::ValidationError("unknown statistic '" + item + "'");
      options.stats.push_back(*kind);
    }
  }

  const FitReport report = fit_report(dataset, options);

  fs::create_directories(out_dir);
  json doc;
  doc["schema_version"] = 1;
  doc["seed"] = report.seed;
  doc["n"] = report.n;
  doc["mc_count"] = report.mc_count;
  doc["version"] = "ellwishart 1.0.0";
  json classes;
  for (const ClassFitReport& cls : report.classes) {
    json cj;
    cj["count"] = cls.count;
    cj["nu"] = cls.nu;
    cj["centers"] = {{"wishart", matrix_to_json(cls.center_wishart)},
                     {"t_wishart", matrix_to_json(cls.center_t_wishart)}};
    json stats;
    for (const auto& [kind, fit] : cls.ks) {
      stats[statistic_name(kind)] = {
          {"wishart", {{"D", fit.wishart.d}, {"p", fit.wishart.p_value}}},
          {"t_wishart", {{"D", fit.t_wishart.d}, {"p", fit.t_wishart.p_value}}}};
    }
    cj["stats"] = std::move(stats);
    classes[cls.label] = std::move(cj);

    for (const auto& [kind, curves] : cls.curves) {
      const fs::path path = fs::path(out_dir) / ("cdf_" + statistic_name(kind) +
                                                 "_class_" + cls.label + ".csv");
      std::ofstream out(path, std::ios::binary);
      out << "x,data_cdf,wishart_cdf,t_wishart_cdf\n";
      char buf[128];
      for (std::size_t i = 0; i < curves.grid.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n", curves.grid[i],
                      curves.data_cdf[i], curves.wishart_cdf[i], curves.t_wishart_cdf[i]);
        out << buf;
      }
    }
  }
  doc["classes"] = std::move(classes);
  std::ofstream out(fs::path(out_dir) / "report.json", std::ios::binary);
  out << doc.dump(2) << "\n";

  for (const ClassFitReport& cls : report.classes) {
    for (const auto& [kind, fit] : cls.ks) {
      std::printf("class %-10s %-12s wishart p=%.4g  t-wishart p=%.4g\n",
                  cls.label.c_str(), statistic_name(kind).c_str(), fit.wishart.p_value,
                  fit.t_wishart.p_value);
    }
  }
  return kExitOk;
}

int run_verify(bool quick, std::uint64_t seed, const std::string& inject_fault,
               const char* self_path) {
  verify::Options options;
  options.quick = quick;
  options.seed = seed;
  options.inject_fault = inject_fault;
  if (self_path != nullptr && inject_fault.empty()) {
    options.cli_path = self_path;
  }
  const auto results = verify::run_acceptance(options);
  bool all_pass = true;
  for (const auto& r : results) {
    std::printf("[%s] %2d %-70s (%.1fs) %s\n", r.pass ? "PASS" : "FAIL", r.id,
                r.name.c_str(), r.seconds, r.pass ? "" : r.detail.c_str());
    all_pass = all_pass && r.pass;
  }
  return all_pass ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Elliptical Wishart distributions: sampling, moments, fitting"};
  app.require_subcommand(1);

  DistFlags sample_flags;
  long sample_count = 1000;
  std::uint64_t sample_seed = default_seed();
  std::string sample_method = "bartlett";
  std::string sample_out;
  CLI::App* sample = app.add_subcommand("sample", "draw random matrices");
  add_dist_flags(sample, sample_flags);
  sample->add_option("--count", sample_count, "number of draws");
  sample->add_option("--seed", sample_seed, "rng seed (default: ELLWISHART_SEED or 0)");
  sample->add_option("--method", sample_method, "bartlett|naive")
      ->check(CLI::IsMember({"bartlett", "naive"}));
  sample->add_option("--out", sample_out, "output dataset file")->required();

  DistFlags moment_flags;
  std::vector<int> moment_orders;
  long moment_mc = 0;
  std::uint64_t moment_seed = default_seed();
  std::optional<std::uint64_t> moment_budget;
  std::string moments_out;
  CLI::App* moments = app.add_subcommand("moments", "closed-form moments");
  add_dist_flags(moments, moment_flags);
  moments->add_option("--order", moment_orders, "Kronecker moment order(s)");
  moments->add_option("--mc", moment_mc, "Monte Carlo cross-check draw count");
  moments->add_option("--seed", moment_seed, "rng seed for the MC cross-check");
  moments->add_option("--budget", moment_budget, "memory budget in bytes");
  moments->add_option("--out", moments_out, "output JSON file (default: stdout)");

  std::string fit_data;
  int fit_dim = 0;
  int fit_n = 0;
  bool fit_labeled = false;
  std::string fit_nu_per_class;
  std::optional<double> fit_nu;
  std::string fit_stats;
  long fit_mc = 100000;
  std::uint64_t fit_seed = default_seed();
  int fit_grid = 512;
  std::string fit_out_dir;
  CLI::App* fit = app.add_subcommand("fit", "fit Wishart and t-Wishart models");
  fit->add_option("--data", fit_data, "dataset file")->required();
  fit->add_option("--dim", fit_dim, "matrix dimension p")->required();
  fit->add_option("--n", fit_n, "degrees of freedom of the models")->required();
  fit->add_flag("--labeled", fit_labeled, "records carry a class label first");
  fit->add_option("--nu-per-class", fit_nu_per_class, "label=nu[,label=nu...]");
  fit->add_option("--nu", fit_nu, "t- degrees of freedom for every class");
  fit->add_option("--stats", fit_stats,
                  "comma list of trace,trace2,trace3,norm,norm2,norm3,neglog10det");
  fit->add_option("--mc-samples", fit_mc, "model samples per class");
  fit->add_option("--seed", fit_seed, "master rng seed");
  fit->add_option("--grid-size", fit_grid, "CDF grid points");
  fit->add_option("--out-dir", fit_out_dir, "output directory")->required();

  bool verify_quick = false;
  std::uint64_t verify_seed = 20240915;
  std::string verify_fault;
  CLI::App* verify_cmd = app.add_subcommand("verify", "run the acceptance suite");
  verify_cmd->add_flag("--quick", verify_quick, "smaller Monte Carlo sizes");
  verify_cmd->add_option("--seed", verify_seed, "suite seed");
  verify_cmd->add_option("--inject-fault", verify_fault,
                         "test hook: e.g. commutation-index")
      ->group("");  // hidden

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitBadFlags;
  }

  try {
    if (sample->parsed()) {
      return run_sample(sample_flags, sample_count, sample_seed, sample_method,
                        sample_out);
    }
    if (moments->parsed()) {
      return run_moments(moment_flags, moment_orders, moment_mc, moment_seed,
                         moment_budget, moments_out);
    }
    if (fit->parsed()) {
      return run_fit(fit_data, fit_dim, fit_n, fit_labeled, fit_nu_per_class, fit_nu,
                     fit_stats, fit_mc, fit_seed, fit_grid, fit_out_dir);
    }
    if (verify_cmd->parsed()) {
      return run_verify(verify_quick, verify_seed, verify_fault, argv[0]);
    }
  } catch (const CLI::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitBadFlags;
  } catch (const dataset_spd_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNotSpd;
  } catch (const dataset_format_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitBadFlags;
  } catch (const parameter_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitParameterDomain;
  } catch (const moment_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitParameterDomain;
  } catch (const budget_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitParameterDomain;
  } catch (const error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitParameterDomain;
  }
  return kExitBadFlags;
}
