#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <vector>

#include "nearinterp/eigenlearning.hpp"
#include "nearinterp/errors.hpp"
#include "nearinterp/harness.hpp"
#include "nearinterp/regression.hpp"
#include "nearinterp/rmt.hpp"
#include "nearinterp/specfun.hpp"

namespace py = pybind11;
using namespace nearinterp;

PYBIND11_MODULE(_nearinterp, m) {
  m.doc() = "Ridge near-interpolation: asymptotic trade-off, spectral checks and simulations.";

  auto numerical_error = py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const IoError& e) {
      PyErr_SetString(PyExc_OSError, e.what());
    }
  });
  (void)numerical_error;

  m.def(
      "hyp2f1", [](double a, double b, double c, double z) { return hyp2f1({a, b, c, z}); }, py::arg("a"),
      py::arg("b"), py::arg("c"), py::arg("z"), "2F1(a, b; b + 1; z) for z <= 0.");

  py::class_<AsymptoticRegime>(m, "Regime")
      .def(py::init([](double alpha, double gamma, double sigma_sq) {
             AsymptoticRegime g{alpha, gamma, sigma_sq};
             g.validate();
             return g;
           }),
           py::arg("alpha") = 1.75, py::arg("gamma") = 0.5, py::arg("sigma_sq") = 1.0)
      .def_readwrite("alpha", &AsymptoticRegime::alpha)
      .def_readwrite("gamma", &AsymptoticRegime::gamma_star)
      .def_readwrite("sigma_sq", &AsymptoticRegime::sigma_sq)
      .def("__repr__", [](const AsymptoticRegime& g) {
        return "Regime(alpha=" + py::repr(py::float_(g.alpha)).cast<std::string>() +
               ", gamma=" + py::repr(py::float_(g.gamma_star)).cast<std::string>() +
               ", sigma_sq=" + py::repr(py::float_(g.sigma_sq)).cast<std::string>() + ")";
      });

  py::class_<EigenlearningPoint>(m, "EigenlearningPoint")
      .def_readonly("k", &EigenlearningPoint::k)
      .def_readonly("r", &EigenlearningPoint::r)
      .def_readonly("e_train", &EigenlearningPoint::e_train)
      .def_readonly("e_test", &EigenlearningPoint::e_test)
      .def_readonly("i_of_k", &EigenlearningPoint::i_of_k)
      .def_readonly("j_of_k", &EigenlearningPoint::j_of_k);

  py::class_<RegularizerChoice>(m, "RegularizerChoice")
      .def_readonly("k", &RegularizerChoice::k)
      .def_readonly("r", &RegularizerChoice::r)
      .def_readonly("rho_n", &RegularizerChoice::rho_n);

  py::class_<FiniteNPrediction>(m, "FiniteNPrediction")
      .def_readonly("kappa", &FiniteNPrediction::kappa)
      .def_readonly("delta", &FiniteNPrediction::delta)
      .def_readonly("e_coef", &FiniteNPrediction::e_coef)
      .def_readonly("e_test", &FiniteNPrediction::e_test_n)
      .def_readonly("e_train", &FiniteNPrediction::e_train_n)
      .def_readonly("signal_term", &FiniteNPrediction::signal_term_c);

  m.def("integral_i", &integral_i, py::arg("regime"), py::arg("k"));
  m.def("integral_j", &integral_j, py::arg("regime"), py::arg("k"));
  m.def("r_of_k", &r_of_k, py::arg("regime"), py::arg("k"));
  m.def("k_crit", &k_crit, py::arg("regime"));
  m.def("k_of_r", &k_of_r, py::arg("regime"), py::arg("r"));
  m.def("asymptotic_errors", &asymptotic_errors, py::arg("regime"), py::arg("k"));
  m.def("train_error_floor", &train_error_floor, py::arg("regime"));
  m.def("select_regularizer", &select_regularizer, py::arg("regime"), py::arg("tau"), py::arg("n"));
  m.def(
      "finite_n_prediction",
      [](const std::vector<double>& eigenvalues, double rho, double sigma_sq, const std::vector<double>& beta_star,
         long n) { return finite_n_prediction(eigenvalues, rho, sigma_sq, beta_star, n); },
      py::arg("eigenvalues"), py::arg("rho"), py::arg("sigma_sq"), py::arg("beta_star"), py::arg("n"));

  py::class_<Dataset>(m, "Dataset")
      .def_readonly("X", &Dataset::X)
      .def_readonly("y", &Dataset::y)
      .def_readonly("beta_star", &Dataset::beta_star)
      .def_readonly("eigenvalues", &Dataset::eigenvalues)
      .def_readonly("sigma_sq", &Dataset::sigma_sq)
      .def_readonly("seed", &Dataset::seed)
      .def_property_readonly("n", &Dataset::n)
      .def_property_readonly("p", &Dataset::p);

  py::class_<RidgeFit>(m, "RidgeFit")
      .def_readonly("beta_hat", &RidgeFit::beta_hat)
      .def_readonly("rho", &RidgeFit::rho)
      .def_readonly("train_mse", &RidgeFit::train_mse)
      .def_readonly("test_mse", &RidgeFit::test_mse_analytic)
      .def_readonly("sq_norm", &RidgeFit::sq_norm);

  m.def(
      "generate",
      [](long n, long p, double alpha, double sigma_sq, std::optional<double> beta_star_scale, std::uint64_t seed) {
        return generate({n, p, alpha, sigma_sq, beta_star_scale, seed});
      },
      py::arg("n"), py::arg("p"), py::arg("alpha"), py::arg("sigma_sq") = 1.0, py::arg("beta_star_scale") = py::none(),
      py::arg("seed") = 0, "Draw X (p x n), y and beta* from the power-law Gaussian model.");
  m.def("fit_ridge", &fit_ridge, py::arg("data"), py::arg("rho"));
  m.def(
      "sweep_rho", [](const Dataset& data, const std::vector<double>& rhos) { return sweep_rho(data, rhos); },
      py::arg("data"), py::arg("rhos"));
  m.def("expected_noise_norm", &expected_noise_norm, py::arg("data"), py::arg("rho"));

  m.def(
      "stieltjes", [](const std::vector<double>& atoms, double z) { return stieltjes(SpectralMeasure(atoms), z); },
      py::arg("atoms"), py::arg("z"));
  m.def(
      "esd_cdf", [](const std::vector<double>& atoms, double t) { return esd_cdf(SpectralMeasure(atoms), t); },
      py::arg("atoms"), py::arg("t"));
  m.def(
      "limit_cdf", [](double alpha, double gamma, double t) { return limit_cdf({alpha, gamma}, t); }, py::arg("alpha"),
      py::arg("gamma"), py::arg("t"));
  m.def(
      "positivity_check",
      [](double alpha, double gamma, long n, const std::vector<double>& r_grid, int trials, std::uint64_t seed) {
        std::vector<std::pair<double, double>> out;
        for (const auto& row :
             positivity_check({.alpha = alpha, .gamma = gamma, .n = n, .r_grid = r_grid, .trials = trials, .seed = seed}))
          out.emplace_back(row.r, row.mean_derivative);
        return out;
      },
      py::arg("alpha"), py::arg("gamma"), py::arg("n"), py::arg("r_grid"), py::arg("trials") = 10, py::arg("seed") = 0,
      "List of (r, mean d/dr[r S(-r)]) over HDA draws.");

  m.def(
      "tradeoff_sweep",
      [](const AsymptoticRegime& regime, const std::vector<double>& taus, long n, int trials, std::uint64_t seed) {
        SweepConfig config;
        config.regime = regime;
        config.kind = SweepKind::kTauGrid;
        config.grid = taus;
        config.n_fixed = n;
        config.trials_per_point = trials;
        config.base_seed = seed;
        py::gil_scoped_release release;
        return run_tradeoff_sweep(config);
      },
      py::arg("regime"), py::arg("taus"), py::arg("n") = 2000, py::arg("trials") = 10, py::arg("seed") = 0);

  py::class_<SweepRow>(m, "SweepRow")
      .def_readonly("sweep_value", &SweepRow::sweep_value)
      .def_readonly("trial", &SweepRow::trial)
      .def_readonly("seed", &SweepRow::seed)
      .def_readonly("k", &SweepRow::k)
      .def_readonly("r", &SweepRow::r)
      .def_readonly("rho_n", &SweepRow::rho_n)
      .def_readonly("train_mse", &SweepRow::train_mse)
      .def_readonly("test_mse", &SweepRow::test_mse)
      .def_readonly("sq_norm", &SweepRow::sq_norm);

  py::class_<AggregateRow>(m, "AggregateRow")
      .def_readonly("sweep_value", &AggregateRow::sweep_value)
      .def_readonly("metric", &AggregateRow::metric)
      .def_readonly("mean", &AggregateRow::mean)
      .def_readonly("q20", &AggregateRow::q20)
      .def_readonly("q50", &AggregateRow::q50)
      .def_readonly("q80", &AggregateRow::q80)
      .def_readonly("theory", &AggregateRow::theory);

  py::class_<SweepResult>(m, "SweepResult")
      .def_readonly("rows", &SweepResult::rows)
      .def_readonly("aggregates", &SweepResult::aggregates);
}
