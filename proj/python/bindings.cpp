#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qestkit/bayes.hpp"
#include "qestkit/models.hpp"
#include "qestkit/operators.hpp"
#include "qestkit/optimize.hpp"
#include "qestkit/reduction.hpp"
#include "qestkit/subalgebra.hpp"

namespace py = pybind11;
using namespace qestkit;

namespace {

Ring ring_from(const std::string& name) {
  if (name == "R" || name == "REAL") return Ring::real;
  if (name == "C" || name == "COMPLEX") return Ring::complex;
  if (name == "H" || name == "QUATERNION") return Ring::quaternion;
  throw ValidationError("ring must be one of R, C, H");
}

SubalgebraSpec make_subalgebra(
    const std::vector<std::tuple<std::string, int, int>>& blocks,
    const std::optional<CMatrix>& basis_change) {
  std::vector<BlockSpec> specs;
  specs.reserve(blocks.size());
  for (const auto& [ring, n, m] : blocks) {
    specs.push_back(BlockSpec{ring_from(ring), n, m});
  }
  return SubalgebraSpec(std::move(specs),
                        basis_change.value_or(CMatrix()));
}

OptimizerConfig make_config(int support, int restarts, int max_iters,
                            double grad_tol, std::uint64_t seed) {
  OptimizerConfig config;
  config.support_size = support;
  config.restarts = restarts;
  config.max_iters = max_iters;
  config.grad_tol = grad_tol;
  config.seed = seed;
  return config;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Support-size reduction and measurement design for finite-outcome "
      "quantum estimation";

  py::register_exception<Error>(m, "QestkitError", PyExc_RuntimeError);
  py::register_exception<NumericalError>(m, "NumericalError",
                                         PyExc_RuntimeError);
  py::register_exception<ValidationError>(m, "ValidationError",
                                          PyExc_ValueError);

  py::class_<Povm>(m, "Povm")
      .def(py::init([](const std::vector<CMatrix>& elements) {
             return validate_povm(elements);
           }),
           py::arg("elements"))
      .def_readonly("dim", &Povm::dim)
      .def_readonly("elements", &Povm::elements)
      .def("__len__", [](const Povm& p) { return p.elements.size(); })
      .def("__repr__", [](const Povm& p) {
        return "Povm(dim=" + std::to_string(p.dim) +
               ", outcomes=" + std::to_string(p.outcomes()) + ")";
      });

  py::class_<SubalgebraSpec>(m, "Subalgebra")
      .def(py::init(&make_subalgebra), py::arg("blocks"),
           py::arg("basis_change") = std::nullopt,
           "blocks: list of (ring, n, m) with ring in {'R', 'C', 'H'}")
      .def_property_readonly("ambient_dim", &SubalgebraSpec::ambient_dim)
      .def_property_readonly("dim_h",
                             [](const SubalgebraSpec& s) { return dim_h(s); })
      .def("project",
           [](const SubalgebraSpec& s, const CMatrix& b) {
             return project(s, b);
           },
           py::arg("operator"))
      .def("membership_deviation",
           [](const SubalgebraSpec& s, const CMatrix& b) {
             return membership_deviation(s, b);
           },
           py::arg("operator"));

  py::class_<StateModel>(m, "StateModel")
      .def_property_readonly("hilbert_dim", &StateModel::hilbert_dim)
      .def_property_readonly("param_dim", &StateModel::param_dim)
      .def("state_at", &StateModel::state_at, py::arg("theta"))
      .def("derivatives_at",
           [](const StateModel& model, const RVector& theta) {
             return model.derivatives_at(theta);
           },
           py::arg("theta"));

  m.def("qubit_xz", &qubit_xz,
        "Qubit model rho = (I + x X + z Z)/2 on the open Bloch disk");
  m.def("tensor_power", &tensor_power, py::arg("base"), py::arg("copies"));
  m.def(
      "point_model",
      [](int hilbert_dim, int d, const CMatrix& rho,
         const std::vector<CMatrix>& drho) {
        return point_model(hilbert_dim, d, rho, drho);
      },
      py::arg("hilbert_dim"), py::arg("d"), py::arg("rho"), py::arg("drho"));
  m.def("qubit_xz_subalgebra", &qubit_xz_subalgebra);
  m.def("qubit_xz_two_copy_subalgebra", &qubit_xz_two_copy_subalgebra);

  m.def(
      "sld",
      [](const StateModel& model, const RVector& theta) {
        SldSet s = sld(model, theta);
        return py::make_tuple(s.sld, s.fisher);
      },
      py::arg("model"), py::arg("theta"),
      "Returns (list of SLD operators, quantum Fisher matrix)");
  m.def(
      "classical_fisher",
      [](const Povm& povm, const StateModel& model, const RVector& theta) {
        return classical_fisher(povm, tangent_at(model, theta));
      },
      py::arg("povm"), py::arg("model"), py::arg("theta"));
  m.def("weighted_cost", &weighted_cost, py::arg("weight"), py::arg("fisher"));
  m.def("dim_h", &dim_h, py::arg("subalgebra"));

  py::class_<ReductionCertificate>(m, "ReductionCertificate")
      .def_readonly("round", &ReductionCertificate::round)
      .def_readonly("alphas", &ReductionCertificate::alphas)
      .def_readonly("t", &ReductionCertificate::t)
      .def_readonly("removed_index", &ReductionCertificate::removed_index)
      .def_readonly("also_removed", &ReductionCertificate::also_removed)
      .def_readonly("r", &ReductionCertificate::r)
      .def_readonly("drift", &ReductionCertificate::drift);

  py::enum_<ReductionMode>(m, "ReductionMode")
      .value("preserve", ReductionMode::preserve)
      .value("improve", ReductionMode::improve)
      .value("bayes", ReductionMode::bayes);

  py::class_<ReducedPovm>(m, "ReducedPovm")
      .def_readonly("mode", &ReducedPovm::mode)
      .def_readonly("povm", &ReducedPovm::povm)
      .def_readonly("certificates", &ReducedPovm::certificates)
      .def_readonly("fisher_before", &ReducedPovm::fisher_before)
      .def_readonly("fisher_after", &ReducedPovm::fisher_after)
      .def_readonly("cost_before", &ReducedPovm::cost_before)
      .def_readonly("cost_after", &ReducedPovm::cost_after)
      .def_readonly("sufficiency_residual", &ReducedPovm::sufficiency_residual)
      .def_property_readonly("rounds", &ReducedPovm::rounds);

  m.def(
      "reduce_preserving",
      [](const Povm& povm, const StateModel& model, const RVector& theta,
         const SubalgebraSpec& spec) {
        return reduce_preserving(povm, spec, tangent_at(model, theta));
      },
      py::arg("povm"), py::arg("model"), py::arg("theta"),
      py::arg("subalgebra"));
  m.def(
      "reduce_improving",
      [](const Povm& povm, const StateModel& model, const RVector& theta,
         const SubalgebraSpec& spec) {
        return reduce_improving(povm, spec, tangent_at(model, theta));
      },
      py::arg("povm"), py::arg("model"), py::arg("theta"),
      py::arg("subalgebra"));

  py::class_<PriorPoint>(m, "PriorPoint")
      .def(py::init([](const RVector& theta, double pi, const RMatrix& w,
                       const CMatrix& rho) {
             return PriorPoint{theta, pi, w, rho};
           }),
           py::arg("theta"), py::arg("pi"), py::arg("W"), py::arg("rho"))
      .def_readonly("theta", &PriorPoint::theta)
      .def_readonly("pi", &PriorPoint::weight)
      .def_readonly("W", &PriorPoint::w)
      .def_readonly("rho", &PriorPoint::rho);

  py::class_<DiscretePrior>(m, "DiscretePrior")
      .def(py::init<int, std::vector<PriorPoint>>(), py::arg("d"),
           py::arg("points"))
      .def_property_readonly("param_dim", &DiscretePrior::param_dim)
      .def_property_readonly("hilbert_dim", &DiscretePrior::hilbert_dim)
      .def_property_readonly("points", &DiscretePrior::points)
      .def("mean", &DiscretePrior::mean);

  m.def("qubit_disk_prior", &qubit_disk_prior, py::arg("grid"),
        py::arg("copies") = 1,
        "Polar-grid prior on the Bloch disk, weight proportional to radius");
  m.def(
      "bayes_cost",
      [](const Povm& povm, const DiscretePrior& prior) {
        return bayes_cost(povm, prior);
      },
      py::arg("povm"), py::arg("prior"));
  m.def(
      "reduce_bayes",
      [](const Povm& povm, const DiscretePrior& prior,
         const SubalgebraSpec& spec) {
        return reduce_bayes(povm, spec, prior);
      },
      py::arg("povm"), py::arg("prior"), py::arg("subalgebra"));

  py::enum_<OptimizeMode>(m, "OptimizeMode")
      .value("local", OptimizeMode::local)
      .value("bayes", OptimizeMode::bayes);

  py::class_<OptimizationReport>(m, "OptimizationReport")
      .def_readonly("mode", &OptimizationReport::mode)
      .def_readonly("best_cost", &OptimizationReport::best_cost)
      .def_readonly("best_povm", &OptimizationReport::best_povm)
      .def_readonly("best_fisher", &OptimizationReport::best_fisher)
      .def_readonly("per_restart_costs",
                    &OptimizationReport::per_restart_costs)
      .def_readonly("fisher_spread", &OptimizationReport::fisher_spread)
      .def_readonly("near_optimal_fishers",
                    &OptimizationReport::near_optimal_fishers)
      .def_readonly("estimator_step_violation",
                    &OptimizationReport::estimator_step_violation);

  m.def(
      "minimize_local",
      [](const StateModel& model, const RVector& theta, const RMatrix& weight,
         const SubalgebraSpec& spec, int support, int restarts, int max_iters,
         double grad_tol, std::uint64_t seed) {
        return minimize_local(model, theta, weight, spec,
                              make_config(support, restarts, max_iters,
                                          grad_tol, seed));
      },
      py::arg("model"), py::arg("theta"), py::arg("weight"),
      py::arg("subalgebra"), py::arg("support"), py::arg("restarts") = 32,
      py::arg("max_iters") = 2000, py::arg("grad_tol") = 1e-9,
      py::arg("seed") = 0);
  m.def(
      "minimize_bayes",
      [](const DiscretePrior& prior, const SubalgebraSpec& spec, int support,
         int restarts, int max_iters, double grad_tol, std::uint64_t seed) {
        return minimize_bayes(prior, spec,
                              make_config(support, restarts, max_iters,
                                          grad_tol, seed));
      },
      py::arg("prior"), py::arg("subalgebra"), py::arg("support"),
      py::arg("restarts") = 32, py::arg("max_iters") = 2000,
      py::arg("grad_tol") = 1e-9, py::arg("seed") = 0);
  m.def("uniqueness_audit", &uniqueness_audit, py::arg("report"),
        "Max pairwise Fisher distance among near-optimal restarts");
}
