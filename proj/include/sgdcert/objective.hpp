#ifndef SGDCERT_OBJECTIVE_HPP
#define SGDCERT_OBJECTIVE_HPP

#include "sgdcert/types.hpp"

namespace sgdcert {

/// Finite-sum objective f(x) = (1/N) * sum_i f_i(x).
///
/// Components are stored unscaled; the averaging is applied here and only
/// here, so generators and optimizers never disagree about scaling. Component
/// indices are 0-based. Instances are immutable after construction and safe
/// to share across threads.
class FiniteSumObjective {
 public:
  virtual ~FiniteSumObjective() = default;

  Index component_count() const { return component_count_; }
  Index dimension() const { return dimension_; }

  virtual double component_value(Index i, const DenseVector& x) const = 0;
  virtual DenseVector component_gradient(Index i, const DenseVector& x) const = 0;

  /// Lipschitz constant of the gradient of component i; used to scale
  /// interpolation tolerances.
  virtual double component_smoothness(Index i) const = 0;

  /// (1/N) * sum_i f_i(x), accumulated in component order. Kept as the one
  /// evaluation route so the averaging identity holds to the last ulp; family
  /// closed forms live in the tests as oracles.
  double value(const DenseVector& x) const;

  /// (1/N) * sum_i f_i'(x), accumulated in component order.
  DenseVector gradient(const DenseVector& x) const;

 protected:
  FiniteSumObjective(Index component_count, Index dimension);
  void check_point(const DenseVector& x) const;
  void check_component(Index i) const;

 private:
  Index component_count_;
  Index dimension_;
};

/// Difference between one component gradient and the average gradient at a
/// fixed point; the per-draw error of a stochastic gradient step.
struct GradientError {
  DenseVector error;  // f_i'(x) - f'(x)
  Index component;
};

struct GradientCheckReport {
  double max_rel_error = 0.0;
  Index worst_component = -1;
  Index worst_coordinate = -1;
};

double full_value(const FiniteSumObjective& obj, const DenseVector& x);
DenseVector full_gradient(const FiniteSumObjective& obj, const DenseVector& x);

GradientError gradient_error(const FiniteSumObjective& obj, Index i,
                             const DenseVector& x);

/// Exact E[||e||^2] over the uniform component draw at x, via
/// (1/N) * sum_i ||f_i'(x)||^2 - ||f'(x)||^2, clamped at zero against
/// rounding. Always >= 0.
double error_second_moment(const FiniteSumObjective& obj, const DenseVector& x);

/// Default stationarity tolerance: scale-relative detection of f'(x) = 0.
double stationarity_tol(const DenseVector& x);

/// max_i ||f_i'(x)|| / ||f'(x)||.
///
/// At a point where the average gradient and every component gradient are
/// below `tol` the ratio is defined as 1 (a common stationary point, which is
/// exactly what the growth condition demands). If the average gradient
/// vanishes but some component gradient does not, throws GrowthViolation.
double growth_ratio(const FiniteSumObjective& obj, const DenseVector& x,
                    double tol);
double growth_ratio(const FiniteSumObjective& obj, const DenseVector& x);

/// Compares every analytic component gradient against central finite
/// differences with step h; reports the worst relative deviation.
GradientCheckReport check_gradient(const FiniteSumObjective& obj,
                                   const DenseVector& x, double h);

}  // namespace sgdcert

#endif  // SGDCERT_OBJECTIVE_HPP
