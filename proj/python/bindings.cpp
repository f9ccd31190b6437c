// Python bindings for the main operations: generators, densities, moments,
// samplers, Kronecker moments, and the fitting toolbox.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ellwishart/dataset_io.hpp"
#include "ellwishart/fitting.hpp"
#include "ellwishart/kron_moments.hpp"
#include "ellwishart/sampling.hpp"
#include "ellwishart/verify.hpp"

namespace py = pybind11;
using namespace ellw;

namespace {

DensityGenerator generator_from_args(const std::string& kind, py::kwargs kwargs) {
  auto need = [&](const char* name) {
    if (!kwargs.contains(name)) {
      throw py::value_error(std::string("generator '") + kind + "' needs " + name);
    }
    return kwargs[name].cast<double>();
  };
  if (kind == "gaussian") return DensityGenerator::gaussian();
  if (kind == "t") return DensityGenerator::t(need("nu"));
  if (kind == "gg") return DensityGenerator::generalized_gaussian(need("beta"));
  if (kind == "kotz") {
    return DensityGenerator::kotz(need("alpha"), need("beta"), need("r"));
  }
  throw py::value_error("unknown generator kind '" + kind + "'");
}

EwParams make_params(int n, const MatrixXd& sigma, const DensityGenerator& gen,
                     bool inverse) {
  return EwParams(n, SpdMatrix(sigma), gen, inverse);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Elliptical Wishart distributions: densities, moments, samplers, fitting";

  py::register_exception<moment_error>(m, "MomentError", PyExc_ArithmeticError);
  py::register_exception<not_positive_definite>(m, "NotPositiveDefinite",
                                                PyExc_ValueError);
  py::register_exception<budget_error>(m, "BudgetError", PyExc_MemoryError);
  py::register_exception<parameter_error>(m, "ParameterError", PyExc_ValueError);

  py::class_<Rng>(m, "Rng")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def("normal", &Rng::normal)
      .def("gamma", &Rng::gamma, py::arg("shape"), py::arg("scale"))
      .def("chi_square", &Rng::chi_square, py::arg("df"))
      .def("uniform", &Rng::uniform);

  py::class_<DensityGenerator>(m, "DensityGenerator")
      .def_static("make",
                  [](const std::string& kind, py::kwargs kwargs) {
                    return generator_from_args(kind, kwargs);
                  },
                  py::arg("kind"),
                  "kind: gaussian | t (nu=) | gg (beta=) | kotz (alpha=, beta=, r=)")
      .def("name", &DensityGenerator::name)
      .def("log_h", &DensityGenerator::log_h, py::arg("d"), py::arg("t"))
      .def("moment_exists", &DensityGenerator::moment_exists, py::arg("d"), py::arg("k"))
      .def("modular_moment", &DensityGenerator::modular_moment, py::arg("d"),
           py::arg("k"))
      .def("modular_pdf", &DensityGenerator::modular_pdf, py::arg("d"), py::arg("t"))
      .def("sample_q", &DensityGenerator::sample_q, py::arg("d"), py::arg("rng"));

  py::class_<EwParams>(m, "EwParams")
      .def(py::init(&make_params), py::arg("n"), py::arg("sigma"), py::arg("generator"),
           py::arg("inverse") = false)
      .def_readonly("n", &EwParams::n)
      .def_readonly("p", &EwParams::p)
      .def_readonly("inverse", &EwParams::inverse)
      .def_property_readonly("sigma",
                             [](const EwParams& p) { return p.sigma.mat(); });

  py::class_<MomentCoefficients>(m, "MomentCoefficients")
      .def_readonly("a", &MomentCoefficients::a)
      .def_readonly("b", &MomentCoefficients::b)
      .def_readonly("c", &MomentCoefficients::c)
      .def_readonly("d", &MomentCoefficients::d)
      .def_readonly("e", &MomentCoefficients::e)
      .def_readonly("f", &MomentCoefficients::f);

  m.def("coefficients", &coefficients, py::arg("generator"), py::arg("n"), py::arg("p"));
  m.def("ew_log_pdf", &ew_log_pdf, py::arg("params"), py::arg("s"));
  m.def("iew_log_pdf", &iew_log_pdf, py::arg("params"), py::arg("s"));
  m.def("ew_mean", &ew_mean, py::arg("params"));
  m.def("ew_variance", &ew_variance, py::arg("params"));
  m.def("iew_mean", &iew_mean, py::arg("params"));
  m.def("iew_variance", &iew_variance, py::arg("params"));

  m.def("sample_wishart_identity", &sample_wishart_identity, py::arg("n"), py::arg("p"),
        py::arg("rng"));
  m.def("sample_ew",
        [](const EwParams& params, Rng& rng, const std::string& method) {
          return sample_ew(params, rng,
                           method == "naive" ? SamplerMethod::Naive
                                             : SamplerMethod::Bartlett);
        },
        py::arg("params"), py::arg("rng"), py::arg("method") = "bartlett");
  m.def("sample_iew", &sample_iew, py::arg("params"), py::arg("rng"));
  m.def("sample_nw", &sample_nw, py::arg("n"), py::arg("p"), py::arg("rng"));

  m.def("wishart_kron_moment",
        [](int n, const MatrixXd& sigma, int k, std::optional<std::uint64_t> budget) {
          return wishart_kron_moment(n, sigma, k, budget);
        },
        py::arg("n"), py::arg("sigma"), py::arg("k"), py::arg("budget") = py::none());
  m.def("ew_kron_moment",
        [](const EwParams& params, int k, std::optional<std::uint64_t> budget) {
          return ew_kron_moment(params, k, budget);
        },
        py::arg("params"), py::arg("k"), py::arg("budget") = py::none());
  m.def("iew_kron_moment",
        [](const EwParams& params, int k_plus_1, std::optional<std::uint64_t> budget) {
          return iew_kron_moment(params, k_plus_1, budget);
        },
        py::arg("params"), py::arg("k_plus_1"), py::arg("budget") = py::none());
  m.def("mc_kron_moment",
        [](const EwParams& params, int k, long n_draws, Rng& rng) {
          const McKronMoment r = mc_kron_moment(params, k, n_draws, rng);
          return py::make_tuple(r.estimate, r.std_error);
        },
        py::arg("params"), py::arg("k"), py::arg("n_draws"), py::arg("rng"));
  m.def("rearrange_second_moment", &rearrange_second_moment, py::arg("m"));

  m.def("statistic",
        [](const MatrixXd& s, const std::string& name) {
          const auto kind = statistic_from_name(name);
          if (!kind) throw py::value_error("unknown statistic '" + name + "'");
          return statistic(s, *kind);
        },
        py::arg("s"), py::arg("kind"));
  m.def("ks_two_sample",
        [](std::vector<double> xs, std::vector<double> ys) {
          const KsResult r = ks_two_sample(std::move(xs), std::move(ys));
          return py::make_tuple(r.d, r.p_value);
        },
        py::arg("xs"), py::arg("ys"));
  m.def("mle_wishart", &mle_wishart, py::arg("samples"), py::arg("n"));
  m.def("mle_t_wishart", &mle_t_wishart, py::arg("samples"), py::arg("n"), py::arg("nu"),
        py::arg("tol") = 1e-9, py::arg("max_iter") = 5000);

  m.def("fit_report",
        [](const std::map<std::string, std::vector<MatrixXd>>& dataset, int n, double nu,
           long mc_count, std::uint64_t seed) {
          FitOptions options;
          options.n = n;
          options.nu_default = nu;
          options.mc_count = mc_count;
          options.seed = seed;
          const FitReport rep = fit_report(dataset, options);
          py::dict out;
          for (const ClassFitReport& cls : rep.classes) {
            py::dict stats;
            for (const auto& [kind, fit] : cls.ks) {
              stats[statistic_name(kind).c_str()] = py::dict(
                  py::arg("wishart") = py::make_tuple(fit.wishart.d, fit.wishart.p_value),
                  py::arg("t_wishart") =
                      py::make_tuple(fit.t_wishart.d, fit.t_wishart.p_value));
            }
            out[cls.label.c_str()] = py::dict(
                py::arg("count") = cls.count, py::arg("nu") = cls.nu,
                py::arg("center_wishart") = cls.center_wishart,
                py::arg("center_t_wishart") = cls.center_t_wishart,
                py::arg("stats") = stats);
          }
          return out;
        },
        py::arg("dataset"), py::arg("n"), py::arg("nu"), py::arg("mc_count") = 10000,
        py::arg("seed") = 0);

  m.def("run_acceptance",
        [](bool quick, std::uint64_t seed) {
          verify::Options options;
          options.quick = quick;
          options.seed = seed;
          py::list out;
          for (const auto& r : verify::run_acceptance(options)) {
            out.append(py::dict(py::arg("id") = r.id, py::arg("name") = r.name,
                                py::arg("pass") = r.pass, py::arg("detail") = r.detail,
                                py::arg("seconds") = r.seconds));
          }
          return out;
        },
        py::arg("quick") = true, py::arg("seed") = 20240915);
}
