#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sgdcert/analysis.hpp"
#include "sgdcert/harness.hpp"
#include "sgdcert/objective.hpp"
#include "sgdcert/optimizers.hpp"
#include "sgdcert/problems.hpp"

namespace py = pybind11;
using namespace sgdcert;

namespace {

Trajectory run_with_method_name(const ProblemInstance& instance,
                                const std::string& method, double alpha,
                                Index iters, std::uint64_t seed,
                                const DenseVector& initial_point) {
  StepConfig config;
  config.alpha = alpha;
  config.iteration_budget = iters;
  config.seed = seed;
  config.initial_point = initial_point;
  return run(parse_method(method), *instance.objective, config,
             instance.minimizer, instance.optimal_value,
             DivergencePolicy::kRecordAndStop);
}

std::vector<double> record_series(const Trajectory& t,
                                  double TrajectoryRecord::*field) {
  std::vector<double> out;
  out.reserve(t.records.size());
  for (const auto& r : t.records) out.push_back(r.*field);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "finite-sum SGD experiment core";

  py::register_exception<ContractViolation>(m, "ContractViolation",
                                            PyExc_ValueError);
  py::register_exception<GrowthViolation>(m, "GrowthViolation",
                                          PyExc_RuntimeError);
  py::register_exception<WindowViolation>(m, "WindowViolation",
                                          PyExc_ValueError);

  py::class_<ProblemConstants>(m, "ProblemConstants")
      .def_readonly("L", &ProblemConstants::lipschitz)
      .def_readonly("mu", &ProblemConstants::strong_convexity)
      .def_readonly("B", &ProblemConstants::growth)
      .def("__repr__", [](const ProblemConstants& c) {
        return "ProblemConstants(L=" + std::to_string(c.lipschitz) +
               ", mu=" + std::to_string(c.strong_convexity) +
               ", B=" + std::to_string(c.growth) + ")";
      });

  py::class_<ProblemInstance>(m, "Problem")
      .def_property_readonly(
          "minimizer", [](const ProblemInstance& p) { return p.minimizer; })
      .def_property_readonly(
          "optimal_value",
          [](const ProblemInstance& p) { return p.optimal_value; })
      .def_property_readonly(
          "components",
          [](const ProblemInstance& p) {
            return p.objective->component_count();
          })
      .def_property_readonly(
          "dimension",
          [](const ProblemInstance& p) { return p.objective->dimension(); })
      .def("value",
           [](const ProblemInstance& p, const DenseVector& x) {
             return full_value(*p.objective, x);
           })
      .def("gradient",
           [](const ProblemInstance& p, const DenseVector& x) {
             return full_gradient(*p.objective, x);
           })
      .def("component_gradient",
           [](const ProblemInstance& p, Index i, const DenseVector& x) {
             return p.objective->component_gradient(i, x);
           })
      .def("growth_ratio",
           [](const ProblemInstance& p, const DenseVector& x) {
             return growth_ratio(*p.objective, x);
           })
      .def("error_second_moment",
           [](const ProblemInstance& p, const DenseVector& x) {
             return error_second_moment(*p.objective, x);
           })
      .def("exact_expected_one_step",
           [](const ProblemInstance& p, const DenseVector& x, double alpha) {
             return exact_expected_one_step(*p.objective, x, alpha);
           });

  m.def("scaled_quadratic", &generate_scaled_quadratic, py::arg("curvatures"),
        py::arg("minimizer"), py::arg("seed") = 0,
        "Quadratic components c_i/2 * ||x - minimizer||^2");
  m.def("consistent_least_squares", &generate_consistent_least_squares,
        py::arg("components"), py::arg("dimension"), py::arg("rank"),
        py::arg("condition"), py::arg("seed") = 0,
        "Zero-residual least squares with planted rank and conditioning");
  m.def("compute_constants", &compute_constants, py::arg("problem"));
  m.def("estimate_growth_constant",
        [](const ProblemInstance& p, Index n_samples, double radius,
           std::uint64_t seed) {
          return estimate_growth_constant(*p.objective, p.minimizer,
                                          n_samples, radius, seed);
        },
        py::arg("problem"), py::arg("n_samples") = 1000,
        py::arg("radius") = 1.0, py::arg("seed") = 0);

  m.def("max_stable_step", &max_stable_step, py::arg("L"), py::arg("B"));
  m.def("reference_step", &reference_step, py::arg("L"), py::arg("B"));
  m.def("geometric_rate", &geometric_rate, py::arg("mu"), py::arg("L"),
        py::arg("B"), py::arg("alpha"));
  m.def("descent_bound_rhs", &descent_bound_rhs, py::arg("f_x"),
        py::arg("grad_norm_sq"), py::arg("alpha"), py::arg("L"),
        py::arg("B"));
  m.def("sublinear_bound", &sublinear_bound, py::arg("B"), py::arg("L"),
        py::arg("initial_gap"), py::arg("initial_dist"), py::arg("k"));
  m.def("fit_geometric_rate",
        py::overload_cast<const std::vector<double>&>(&fit_geometric_rate),
        py::arg("gaps"));

  m.def(
      "run",
      [](const ProblemInstance& instance, const std::string& method,
         double alpha, Index iters, std::uint64_t seed,
         std::optional<DenseVector> x0) {
        const DenseVector start =
            x0 ? *x0 : default_initial_point(instance.minimizer);
        const Trajectory t =
            run_with_method_name(instance, method, alpha, iters, seed, start);
        py::dict out;
        out["gap"] = record_series(t, &TrajectoryRecord::gap);
        out["grad_norm"] = record_series(t, &TrajectoryRecord::grad_norm);
        out["dist_to_opt"] = record_series(t, &TrajectoryRecord::dist_to_opt);
        out["final"] = t.final_iterate;
        out["diverged_at"] = t.diverged_at
                                 ? py::cast(*t.diverged_at)
                                 : py::none();
        return out;
      },
      py::arg("problem"), py::arg("method"), py::arg("alpha"),
      py::arg("iters"), py::arg("seed") = 0,
      py::arg("x0") = py::none(),
      "Run one trajectory; returns gap/grad_norm/dist_to_opt series");
}
