// bindings.cpp — pybind11 surface for the heatflux core
//
// Exposes the model/generator/propagator/heat/trajectory operations with
// Eigen <-> numpy conversion. Report `pass` flags are exposed as `passed`
// (Python keyword).

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "heatflux/ensemble.hpp"
#include "heatflux/generator.hpp"
#include "heatflux/heat.hpp"
#include "heatflux/model.hpp"
#include "heatflux/propagator.hpp"
#include "heatflux/trajectory.hpp"
#include "heatflux/version.hpp"

namespace py = pybind11;
using namespace heatflux;

namespace {

std::string report_json(const VerificationReport& r) { return to_json(r).dump(2); }

}  // namespace

PYBIND11_MODULE(_heatflux, m) {
    m.doc() = "Thermalizing Markovian generators and heat-exchange statistics";
    m.attr("__version__") = HEATFLUX_VERSION;

    py::register_exception<ModelError>(m, "ModelError", PyExc_ValueError);
    py::register_exception<RegimeError>(m, "RegimeError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

    py::class_<CheckItem>(m, "CheckItem")
        .def_readonly("label", &CheckItem::label)
        .def_readonly("measured", &CheckItem::measured)
        .def_readonly("expected", &CheckItem::expected)
        .def_readonly("residual", &CheckItem::residual)
        .def_readonly("passed", &CheckItem::pass)
        .def_readonly("note", &CheckItem::note)
        .def("__repr__", [](const CheckItem& it) {
            return "<CheckItem " + it.label + (it.pass ? " ok>" : " FAIL>");
        });

    py::class_<VerificationReport>(m, "VerificationReport")
        .def_readonly("check", &VerificationReport::check)
        .def_readonly("tolerance", &VerificationReport::tolerance)
        .def_readonly("passed", &VerificationReport::pass)
        .def_readonly("worst_residual", &VerificationReport::worst_residual)
        .def_readonly("worst_label", &VerificationReport::worst_label)
        .def_readonly("items", &VerificationReport::items)
        .def_readonly("skipped", &VerificationReport::skipped)
        .def("summary", &summary_line)
        .def("to_json", &report_json)
        .def("__repr__", [](const VerificationReport& r) {
            return "<VerificationReport " + r.check + (r.pass ? " PASS>" : " FAIL>");
        });

    py::class_<ModelSpec>(m, "ModelSpec")
        .def(py::init<>())
        .def_readwrite("dimension", &ModelSpec::dimension)
        .def_readwrite("bare_energies", &ModelSpec::bare_energies)
        .def_readwrite("effective_energies", &ModelSpec::effective_energies)
        .def_readwrite("beta_S", &ModelSpec::beta_s)
        .def_readwrite("beta_B", &ModelSpec::beta_b)
        .def_readwrite("coupling", &ModelSpec::coupling)
        .def("delta_beta", &ModelSpec::delta_beta)
        .def("energy_range", &ModelSpec::energy_range);

    m.def("load_model", [](const std::string& text) { return load_model(text); },
          py::arg("config_text"), "Parse and validate a JSON model config");
    m.def("parse_model", [](const std::string& text) { return parse_model(text); },
          py::arg("config_text"),
          "Parse a JSON model config without enforcing invariants");
    m.def("gibbs_populations", &gibbs_populations, py::arg("energies"), py::arg("beta"));
    m.def("validate_model", &validate_model, py::arg("spec"));
    m.def("validate_density", &validate_density, py::arg("rho"));

    py::class_<RateMatrix>(m, "RateMatrix")
        .def_readonly("rates", &RateMatrix::rates)
        .def_property_readonly("dimension", &RateMatrix::dimension);

    py::class_<Generator>(m, "Generator")
        .def_readonly("a", &Generator::a)
        .def_readonly("rate_matrix", &Generator::rate_matrix)
        .def_property_readonly("dimension", &Generator::dimension)
        .def("norm_inf", &Generator::norm_inf);

    py::class_<DephasingTable>(m, "DephasingTable")
        .def_readonly("gamma", &DephasingTable::gamma)
        .def_readonly("omega", &DephasingTable::omega);

    py::class_<SymmetricForm>(m, "SymmetricForm")
        .def_readonly("sym", &SymmetricForm::sym)
        .def_readonly("weights", &SymmetricForm::weights)
        .def_readonly("asymmetry", &SymmetricForm::asymmetry);

    py::class_<SpectralReport>(m, "SpectralReport")
        .def_readonly("eigenvalues", &SpectralReport::eigenvalues)
        .def_readonly("stationary", &SpectralReport::stationary)
        .def_readonly("gap", &SpectralReport::gap)
        .def_readonly("report", &SpectralReport::report);

    m.def("jump_rates", &jump_rates, py::arg("spec"));
    m.def("build_generator", &build_generator, py::arg("rates"));
    m.def("decay_rates", &decay_rates, py::arg("rates"), py::arg("spec"));
    m.def("symmetrize", &symmetrize, py::arg("gen"), py::arg("spec"));
    m.def("spectral_report", &spectral_report, py::arg("gen"), py::arg("spec"));

    py::class_<StochasticMatrix>(m, "StochasticMatrix")
        .def_readonly("entries", &StochasticMatrix::entries)
        .def_readonly("tau", &StochasticMatrix::tau)
        .def_property_readonly("dimension", &StochasticMatrix::dimension);

    m.def("propagator", &propagator, py::arg("gen"), py::arg("spec"), py::arg("tau"));
    m.def("expm_taylor", &expm_taylor, py::arg("a"), py::arg("tau"),
          py::arg("terms") = 40,
          "Scaled Taylor-series e^{-tau a}, independent of the eigendecomposition");
    m.def("evolve_populations", &evolve_populations, py::arg("p"), py::arg("v0"));
    m.def("evolve_density", &evolve_density, py::arg("rho0"), py::arg("spec"),
          py::arg("gen"), py::arg("tau"));
    m.def("power_symmetry_check", &power_symmetry_check, py::arg("gen"), py::arg("spec"),
          py::arg("s_max") = 10, py::arg("tau") = 1.0);
    m.def("stochastic_deviation", &stochastic_deviation, py::arg("p"));

    py::class_<HeatSupport>(m, "HeatSupport")
        .def_readonly("values", &HeatSupport::values)
        .def_readonly("pairs", &HeatSupport::pairs)
        .def_readonly("tol", &HeatSupport::tol)
        .def("__len__", &HeatSupport::size);

    py::class_<HeatDistribution>(m, "HeatDistribution")
        .def_readonly("support", &HeatDistribution::support)
        .def_readonly("mass", &HeatDistribution::mass)
        .def_readonly("pair_mass", &HeatDistribution::pair_mass)
        .def_readonly("tau", &HeatDistribution::tau)
        .def_readonly("forward", &HeatDistribution::forward)
        .def("total", &HeatDistribution::total);

    py::class_<MeanHeatResult>(m, "MeanHeatResult")
        .def_readonly("mean_heat", &MeanHeatResult::mean_heat)
        .def_readonly("energy_change", &MeanHeatResult::energy_change)
        .def_readonly("first_law_residual", &MeanHeatResult::first_law_residual);

    m.def("heat_support", &heat_support, py::arg("spec"), py::arg("tol") = -1.0);
    m.def("forward_distribution", &forward_distribution, py::arg("spec"), py::arg("p"),
          py::arg("support"));
    m.def("reverse_distribution", &reverse_distribution, py::arg("spec"), py::arg("p"),
          py::arg("support"));
    m.def("fr_check", &fr_check, py::arg("spec"), py::arg("p"), py::arg("support"),
          py::arg("tol") = 1e-9);
    m.def("detailed_balance_check", &detailed_balance_check, py::arg("p"),
          py::arg("spec"), py::arg("tol") = 1e-9);
    m.def("tail_bound_check", &tail_bound_check, py::arg("forward"), py::arg("spec"),
          py::arg("q_grid"));
    m.def("mean_heat", &mean_heat, py::arg("forward"), py::arg("spec"), py::arg("p"));

    py::class_<TrajectoryBatch>(m, "TrajectoryBatch")
        .def_readonly("n_traj", &TrajectoryBatch::n_traj)
        .def_readonly("master_seed", &TrajectoryBatch::master_seed)
        .def_readonly("tau", &TrajectoryBatch::tau)
        .def_readonly("counts", &TrajectoryBatch::counts);

    py::class_<EmpiricalConditional>(m, "EmpiricalConditional")
        .def_readonly("batch", &EmpiricalConditional::batch)
        .def_readonly("probs", &EmpiricalConditional::probs)
        .def_readonly("std_error", &EmpiricalConditional::std_error);

    py::class_<EmpiricalHeat>(m, "EmpiricalHeat")
        .def_readonly("dist", &EmpiricalHeat::dist)
        .def_readonly("std_error", &EmpiricalHeat::std_error)
        .def_readonly("counts", &EmpiricalHeat::counts)
        .def_readonly("n_traj", &EmpiricalHeat::n_traj)
        .def_readonly("master_seed", &EmpiricalHeat::master_seed);

    m.def("empirical_conditional", &empirical_conditional, py::arg("rates"),
          py::arg("tau"), py::arg("n_traj"), py::arg("master_seed"),
          py::call_guard<py::gil_scoped_release>());
    m.def("empirical_heat_distribution", &empirical_heat_distribution, py::arg("spec"),
          py::arg("rates"), py::arg("support"), py::arg("tau"), py::arg("n_traj"),
          py::arg("master_seed"), py::call_guard<py::gil_scoped_release>());
    m.def("oracle_compare",
          py::overload_cast<const Eigen::MatrixXd&, const EmpiricalConditional&>(
              &oracle_compare),
          py::arg("exact"), py::arg("empirical"));
    m.def("oracle_compare",
          py::overload_cast<const HeatDistribution&, const EmpiricalHeat&>(
              &oracle_compare),
          py::arg("exact"), py::arg("empirical"));
    m.def("worker_count", &worker_count);

    py::class_<RandomModelOptions>(m, "RandomModelOptions")
        .def(py::init<>())
        .def_readwrite("beta_low", &RandomModelOptions::beta_low)
        .def_readwrite("beta_high", &RandomModelOptions::beta_high)
        .def_readwrite("gap_low", &RandomModelOptions::gap_low)
        .def_readwrite("gap_high", &RandomModelOptions::gap_high)
        .def_readwrite("coupling_low", &RandomModelOptions::coupling_low)
        .def_readwrite("coupling_high", &RandomModelOptions::coupling_high);

    py::class_<EnsembleOptions>(m, "EnsembleOptions")
        .def(py::init<>())
        .def_readwrite("dims", &EnsembleOptions::dims)
        .def_readwrite("seeds", &EnsembleOptions::seeds)
        .def_readwrite("tau_units", &EnsembleOptions::tau_units)
        .def_readwrite("model", &EnsembleOptions::model)
        .def_readwrite("master_seed", &EnsembleOptions::master_seed);

    py::class_<EnsembleResult>(m, "EnsembleResult")
        .def_readonly("checks", &EnsembleResult::checks)
        .def_readonly("models_run", &EnsembleResult::models_run)
        .def_readonly("taus_run", &EnsembleResult::taus_run)
        .def_readonly("passed", &EnsembleResult::pass)
        .def("to_json", [](const EnsembleResult& r) { return to_json(r).dump(2); });

    m.def("random_model", &random_model, py::arg("dim"), py::arg("seed"),
          py::arg("opts") = RandomModelOptions{});
    m.def("run_ensemble", &run_ensemble, py::arg("opts"),
          py::call_guard<py::gil_scoped_release>());
}
