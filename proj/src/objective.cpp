#include "sgdcert/objective.hpp"

#include <cmath>
#include <string>

namespace sgdcert {

FiniteSumObjective::FiniteSumObjective(Index component_count, Index dimension)
    : component_count_(component_count), dimension_(dimension) {
  if (component_count < 1)
    throw ContractViolation("objective: component count must be >= 1");
  if (dimension < 1) throw ContractViolation("objective: dimension must be >= 1");
}

void FiniteSumObjective::check_point(const DenseVector& x) const {
  if (x.size() != dimension_)
    throw ContractViolation("objective: point has dimension " +
                            std::to_string(x.size()) + ", expected " +
                            std::to_string(dimension_));
}

void FiniteSumObjective::check_component(Index i) const {
  if (i < 0 || i >= component_count_)
    throw ContractViolation("objective: component index " + std::to_string(i) +
                            " out of range [0, " +
                            std::to_string(component_count_) + ")");
}

double FiniteSumObjective::value(const DenseVector& x) const {
  double sum = 0.0;
  for (Index i = 0; i < component_count_; ++i) sum += component_value(i, x);
  return sum / static_cast<double>(component_count_);
}

DenseVector FiniteSumObjective::gradient(const DenseVector& x) const {
  DenseVector sum = component_gradient(0, x);
  for (Index i = 1; i < component_count_; ++i) sum += component_gradient(i, x);
  return sum / static_cast<double>(component_count_);
}

double full_value(const FiniteSumObjective& obj, const DenseVector& x) {
  if (x.size() != obj.dimension())
    throw ContractViolation("full_value: dimension mismatch");
  const double v = obj.value(x);
  if (!std::isfinite(v)) throw NumericFailure("full_value: non-finite result");
  return v;
}

DenseVector full_gradient(const FiniteSumObjective& obj, const DenseVector& x) {
  if (x.size() != obj.dimension())
    throw ContractViolation("full_gradient: dimension mismatch");
  DenseVector g = obj.gradient(x);
  if (!g.allFinite()) throw NumericFailure("full_gradient: non-finite result");
  return g;
}

GradientError gradient_error(const FiniteSumObjective& obj, Index i,
                             const DenseVector& x) {
  if (i < 0 || i >= obj.component_count())
    throw ContractViolation("gradient_error: component index out of range");
  if (x.size() != obj.dimension())
    throw ContractViolation("gradient_error: dimension mismatch");
  return GradientError{obj.component_gradient(i, x) - obj.gradient(x), i};
}

double error_second_moment(const FiniteSumObjective& obj, const DenseVector& x) {
  if (x.size() != obj.dimension())
    throw ContractViolation("error_second_moment: dimension mismatch");
  const Index n = obj.component_count();
  double sum_sq = 0.0;
  for (Index i = 0; i < n; ++i) sum_sq += obj.component_gradient(i, x).squaredNorm();
  const double moment = sum_sq / static_cast<double>(n) - obj.gradient(x).squaredNorm();
  return moment < 0.0 ? 0.0 : moment;
}

double stationarity_tol(const DenseVector& x) { return 1e-10 * (1.0 + x.norm()); }

double growth_ratio(const FiniteSumObjective& obj, const DenseVector& x,
                    double tol) {
  if (x.size() != obj.dimension())
    throw ContractViolation("growth_ratio: dimension mismatch");
  if (!(tol > 0.0)) throw ContractViolation("growth_ratio: tol must be > 0");

  double max_component = 0.0;
  for (Index i = 0; i < obj.component_count(); ++i)
    max_component = std::max(max_component, obj.component_gradient(i, x).norm());
  const double full = obj.gradient(x).norm();

  if (full <= tol) {
    if (max_component <= tol) return 1.0;
    throw GrowthViolation(
        "growth violation: average gradient vanishes (|f'| = " +
        std::to_string(full) + ") but a component gradient does not (max = " +
        std::to_string(max_component) + ")");
  }
  return max_component / full;
}

double growth_ratio(const FiniteSumObjective& obj, const DenseVector& x) {
  return growth_ratio(obj, x, stationarity_tol(x));
}

GradientCheckReport check_gradient(const FiniteSumObjective& obj,
                                   const DenseVector& x, double h) {
  if (x.size() != obj.dimension())
    throw ContractViolation("check_gradient: dimension mismatch");
  if (!(h > 0.0)) throw ContractViolation("check_gradient: h must be > 0");

  GradientCheckReport report;
  DenseVector probe = x;
  for (Index i = 0; i < obj.component_count(); ++i) {
    const DenseVector analytic = obj.component_gradient(i, x);
    const double scale = std::max(1.0, analytic.norm());
    for (Index j = 0; j < obj.dimension(); ++j) {
      const double old = probe[j];
      probe[j] = old + h;
      const double plus = obj.component_value(i, probe);
      probe[j] = old - h;
      const double minus = obj.component_value(i, probe);
      probe[j] = old;
      const double fd = (plus - minus) / (2.0 * h);
      const double rel = std::abs(fd - analytic[j]) / scale;
      if (rel > report.max_rel_error) {
        report.max_rel_error = rel;
        report.worst_component = i;
        report.worst_coordinate = j;
      }
    }
  }
  return report;
}

}  // namespace sgdcert
