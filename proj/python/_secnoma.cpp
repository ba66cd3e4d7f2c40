#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "secnoma/analytic.hpp"
#include "secnoma/experiments.hpp"
#include "secnoma/geometry.hpp"
#include "secnoma/simulator.hpp"
#include "secnoma/special_math.hpp"

namespace py = pybind11;
using namespace secnoma;

namespace {

void export_math(py::module_& m) {
  m.def("gamma_fn", &math::gamma_fn, py::arg("s"));
  m.def("upper_incomplete_gamma", &math::upper_incomplete_gamma, py::arg("p"), py::arg("q"));
  m.def("chebyshev_nodes", [](int order) { return math::chebyshev_scheme(order).nodes; },
        py::arg("order"));
  m.def("integrate_semi_infinite", [](const std::function<double(double)>& f, double abs_tol) {
    return math::integrate_semi_infinite(f, abs_tol);
  }, py::arg("f"), py::arg("abs_tol") = math::kDefaultAbsTol);
}

void export_types(py::module_& m) {
  py::class_<NetworkGeometry>(m, "NetworkGeometry")
      .def(py::init<>())
      .def_readwrite("r_p", &NetworkGeometry::r_p)
      .def_readwrite("r_l", &NetworkGeometry::r_l)
      .def_readwrite("r_e", &NetworkGeometry::r_e)
      .def_readwrite("alpha", &NetworkGeometry::alpha)
      .def_readwrite("lambda_e", &NetworkGeometry::lambda_e)
      .def("validate", &NetworkGeometry::validate);

  py::class_<PairConfig>(m, "PairConfig")
      .def(py::init<>())
      .def_readwrite("n_l", &PairConfig::n_l)
      .def_readwrite("m", &PairConfig::m)
      .def_readwrite("n", &PairConfig::n)
      .def_readwrite("a_m_sq", &PairConfig::a_m_sq)
      .def_readwrite("a_n_sq", &PairConfig::a_n_sq)
      .def_readwrite("p_bs", &PairConfig::p_bs)
      .def_readwrite("p_c", &PairConfig::p_c)
      .def_readwrite("r_m", &PairConfig::r_m)
      .def_readwrite("r_n", &PairConfig::r_n)
      .def_readwrite("beta", &PairConfig::beta)
      .def_readwrite("lambda_mn", &PairConfig::lambda_mn)
      .def("validate", &PairConfig::validate);

  py::enum_<SamplingModeKind>(m, "SamplingModeKind")
      .value("PAPER_GEOMETRY", SamplingModeKind::kPaperGeometry)
      .value("ANALYTIC_MATCHED", SamplingModeKind::kAnalyticMatched);

  py::class_<SamplingMode>(m, "SamplingMode")
      .def(py::init<>())
      .def_readwrite("kind", &SamplingMode::kind)
      .def_readwrite("r_max", &SamplingMode::r_max)
      .def_readwrite("lambda_ref", &SamplingMode::lambda_ref);

  py::enum_<analytic::SopKind>(m, "SopKind")
      .value("ANALYTIC_EXACT", analytic::SopKind::kAnalyticExact)
      .value("ANALYTIC_LOWER_BOUND", analytic::SopKind::kAnalyticLowerBound)
      .value("ANALYTIC_UPPER_BOUND", analytic::SopKind::kAnalyticUpperBound)
      .value("MONTE_CARLO", analytic::SopKind::kMonteCarlo);

  py::enum_<analytic::CoopStrategy>(m, "CoopStrategy")
      .value("RELAY", analytic::CoopStrategy::kRelay)
      .value("FJR", analytic::CoopStrategy::kFriendlyJammerRelay);

  py::class_<analytic::SopEstimate>(m, "SopEstimate")
      .def_readonly("value", &analytic::SopEstimate::value)
      .def_readonly("kind", &analytic::SopEstimate::kind)
      .def_property_readonly("stderr", [](const analytic::SopEstimate& e) { return e.stderr_; })
      .def_property_readonly("abs_tol", [](const analytic::SopEstimate& e) { return e.metadata.abs_tol; })
      .def_property_readonly("quadrature_order",
                             [](const analytic::SopEstimate& e) { return e.metadata.quadrature_order; })
      .def("__repr__", [](const analytic::SopEstimate& e) {
        return "SopEstimate(value=" + std::to_string(e.value) + ", kind=" +
               std::string(analytic::to_string(e.kind)) + ")";
      });

  py::class_<analytic::QuadratureConstants>(m, "QuadratureConstants")
      .def_static("build", &analytic::QuadratureConstants::build, py::arg("order"), py::arg("r_l"),
                  py::arg("alpha"))
      .def_property_readonly("order", &analytic::QuadratureConstants::order)
      .def_readonly("disc_weights", &analytic::QuadratureConstants::disc_weights)
      .def_readonly("disc_rates", &analytic::QuadratureConstants::disc_rates)
      .def_readonly("pair_weights", &analytic::QuadratureConstants::pair_weights)
      .def_readonly("pair_rates", &analytic::QuadratureConstants::pair_rates);

  py::register_exception<analytic::PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<experiments::ConfigError>(m, "ConfigError", PyExc_ValueError);
}

void export_analytic(py::module_& m) {
  using namespace analytic;
  m.def("sop_case1", &sop_case1, py::arg("config"), py::arg("geometry"), py::arg("constants"),
        py::arg("abs_tol") = math::kDefaultAbsTol);
  m.def("sop_weak_high_snr", &sop_weak_high_snr, py::arg("config"), py::arg("geometry"),
        py::arg("constants"), py::arg("strategy"), py::arg("abs_tol") = math::kDefaultAbsTol);
  m.def("sop_case2", &sop_case2, py::arg("config"), py::arg("geometry"), py::arg("constants"),
        py::arg("strategy"), py::arg("abs_tol") = math::kDefaultAbsTol);
  m.def("pr_strong_secrecy_outage", &pr_strong_secrecy_outage, py::arg("config"),
        py::arg("geometry"), py::arg("constants"), py::arg("abs_tol") = math::kDefaultAbsTol);
  m.def("pr_weak_combined_outage", &pr_weak_combined_outage, py::arg("config"),
        py::arg("geometry"), py::arg("constants"), py::arg("abs_tol") = math::kDefaultAbsTol);
  m.def("cdf_ordered_user_gain_snr", &cdf_ordered_user_gain_snr, py::arg("y"), py::arg("order"),
        py::arg("n_l"), py::arg("constants"), py::arg("p_bs"), py::arg("a_m_sq"));
  m.def("cdf_eve_snr_phase1",
        [](double x, const NetworkGeometry& g, const PairConfig& c) {
          return cdf_eve_snr_phase1(x, DerivedScalars::build(g, c), c.p_bs, c.a_m_sq);
        },
        py::arg("x"), py::arg("geometry"), py::arg("config"));
  m.def("cdf_weak_user_phase1_sinr", &cdf_weak_user_phase1_sinr, py::arg("x"),
        py::arg("constants"), py::arg("config"));
  m.def("cdf_coop_link_snr", &cdf_coop_link_snr, py::arg("y"), py::arg("constants"),
        py::arg("config"));
  m.def("cdf_eve_coop_relay",
        [](double x, const NetworkGeometry& g, const PairConfig& c) {
          return cdf_eve_coop_relay(x, DerivedScalars::build(g, c), c.p_c);
        },
        py::arg("x"), py::arg("geometry"), py::arg("config"));
  m.def("cdf_eve_coop_fjr",
        [](double x, const NetworkGeometry& g, const PairConfig& c) {
          return cdf_eve_coop_fjr(x, c.beta, DerivedScalars::build(g, c), c.p_c);
        },
        py::arg("x"), py::arg("geometry"), py::arg("config"));
  m.def("diagnostic_count", &diagnostic_count);
}

void export_simulator(py::module_& m) {
  py::enum_<sim::Scenario>(m, "Scenario")
      .value("CASE1", sim::Scenario::kCase1)
      .value("CASE2_RELAY", sim::Scenario::kCase2Relay)
      .value("CASE2_FJR", sim::Scenario::kCase2Fjr)
      .value("NONCOOP_NOMA", sim::Scenario::kNonCoopNoma)
      .value("COOP_NO_EVES", sim::Scenario::kCoopNoEves);

  py::class_<sim::TrialSpec>(m, "TrialSpec")
      .def(py::init<>())
      .def_readwrite("config", &sim::TrialSpec::config)
      .def_readwrite("geometry", &sim::TrialSpec::geometry)
      .def_readwrite("mode", &sim::TrialSpec::mode)
      .def_readwrite("scenario", &sim::TrialSpec::scenario)
      .def_readwrite("high_snr_proxy", &sim::TrialSpec::high_snr_proxy);

  py::class_<sim::SopMonteCarlo>(m, "SopMonteCarlo")
      .def_readonly("outage_count", &sim::SopMonteCarlo::outage_count)
      .def_readonly("n_trials", &sim::SopMonteCarlo::n_trials)
      .def_readonly("estimate", &sim::SopMonteCarlo::estimate)
      .def_readonly("stderr", &sim::SopMonteCarlo::stderr_)
      .def_readonly("master_seed", &sim::SopMonteCarlo::master_seed);

  m.def("estimate_sop", &sim::estimate_sop, py::arg("spec"), py::arg("n_trials"),
        py::arg("master_seed"), py::arg("workers") = 0u,
        py::call_guard<py::gil_scoped_release>());
}

void export_experiments(py::module_& m) {
  m.def("canonical_config",
        [](const std::string& text) { return experiments::canonical_config(experiments::parse_config(text)); },
        py::arg("text"));
  // Runs a CLI command on config text; returns (csv, exit_code).
  m.def("run_command",
        [](const std::string& command, const std::string& config_text) {
          const auto config = experiments::parse_config(config_text);
          experiments::CommandResult r;
          {
            py::gil_scoped_release release;
            if (command == "validate") r = experiments::cmd_validate(config);
            else if (command == "fig2") r = experiments::cmd_fig2(config);
            else if (command == "fig3") r = experiments::cmd_fig3(config);
            else if (command == "fig4") r = experiments::cmd_fig4(config);
            else if (command == "sweep") r = experiments::cmd_sweep(config);
            else throw std::invalid_argument("unknown command '" + command + "'");
          }
          return py::make_tuple(experiments::to_csv(r.table, config), r.exit_code);
        },
        py::arg("command"), py::arg("config_text") = "");
}

}  // namespace

PYBIND11_MODULE(_secnoma, m) {
  m.doc() = "Secrecy outage probability of cooperative NOMA pairs";
  export_math(m);
  export_types(m);
  export_analytic(m);
  export_simulator(m);
  export_experiments(m);
}
