#include "sgdcert/analysis.hpp"

#include <cmath>
#include <limits>

#include "sgdcert/optimizers.hpp"
#include "sgdcert/rng.hpp"

namespace sgdcert {

namespace {

double window_denominator(double lipschitz, double growth) {
  if (!(lipschitz > 0.0) || !std::isfinite(lipschitz)) {
    throw ContractViolation("Lipschitz constant must be positive and finite");
  }
  if (!(growth >= 1.0) || !std::isfinite(growth)) {
    throw ContractViolation("growth constant must be finite and >= 1");
  }
  return lipschitz * (growth * growth);
}

}  // namespace

double max_stable_step(double lipschitz, double growth) {
  return 2.0 / window_denominator(lipschitz, growth);
}

double reference_step(double lipschitz, double growth) {
  return 1.0 / window_denominator(lipschitz, growth);
}

double geometric_rate(double strong_convexity, double lipschitz, double growth,
                      double alpha) {
  if (!(strong_convexity > 0.0) || !std::isfinite(strong_convexity)) {
    throw ContractViolation("strong convexity constant must be positive");
  }
  const double denom = window_denominator(lipschitz, growth);
  if (!(alpha > 0.0) || !(alpha < 2.0 / denom)) {
    throw WindowViolation("step size outside the guaranteed-descent window");
  }
  return 1.0 - 2.0 * strong_convexity * alpha * (1.0 - alpha * denom / 2.0);
}

double descent_bound_rhs(double f_x, double grad_norm_sq, double alpha,
                         double lipschitz, double growth) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw ContractViolation("step size must be positive and finite");
  }
  const double denom = window_denominator(lipschitz, growth);
  return f_x - alpha * (1.0 - alpha * denom / 2.0) * grad_norm_sq;
}

double sublinear_bound(double growth, double lipschitz, double initial_gap,
                       double initial_dist, double k) {
  const double denom = window_denominator(lipschitz, growth);
  if (!(k >= 1.0)) throw ContractViolation("iteration count must be >= 1");
  if (initial_gap < 0.0 || initial_dist < 0.0) {
    throw ContractViolation("initial gap and distance must be non-negative");
  }
  const double gap_term = 2.0 * (growth * growth - 1.0) * initial_gap;
  const double dist_term = denom * initial_dist * initial_dist;
  return (gap_term + dist_term) / (2.0 * k);
}

double fit_geometric_rate(const std::vector<double>& gaps, Index burn_in,
                          double floor) {
  if (burn_in < 0) throw ContractViolation("burn-in must be non-negative");
  if (!(floor > 0.0)) throw ContractViolation("floor must be positive");
  if (gaps.size() <= static_cast<std::size_t>(burn_in) + 10) {
    throw InsufficientData("gap series too short for the requested burn-in");
  }

  // Plain least squares of log(gap) on k; solved via the centered normal
  // equations, which are well conditioned at desk-scale series lengths.
  double sum_k = 0.0, sum_y = 0.0;
  Index count = 0;
  for (std::size_t k = static_cast<std::size_t>(burn_in); k < gaps.size();
       ++k) {
    const double g = gaps[k];
    if (!std::isfinite(g) || g <= floor) continue;
    sum_k += static_cast<double>(k);
    sum_y += std::log(g);
    ++count;
  }
  if (count < 10) {
    throw InsufficientData("fewer than 10 usable points above the floor");
  }
  const double mean_k = sum_k / static_cast<double>(count);
  const double mean_y = sum_y / static_cast<double>(count);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = static_cast<std::size_t>(burn_in); k < gaps.size();
       ++k) {
    const double g = gaps[k];
    if (!std::isfinite(g) || g <= floor) continue;
    const double dk = static_cast<double>(k) - mean_k;
    sxx += dk * dk;
    sxy += dk * (std::log(g) - mean_y);
  }
  if (sxx == 0.0) {
    throw InsufficientData("usable points share a single iteration index");
  }
  return std::exp(sxy / sxx);
}

double fit_geometric_rate(const std::vector<double>& gaps) {
  if (gaps.empty() || !(gaps.front() > 0.0)) {
    throw ContractViolation("series must start from a positive gap");
  }
  return fit_geometric_rate(gaps, 5, 1e-13 * gaps.front());
}

DescentCheckReport verify_descent(const FiniteSumObjective& obj,
                                  const ProblemConstants& constants,
                                  double alpha, Index n_points,
                                  std::uint64_t seed) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw ContractViolation("step size must be positive and finite");
  }
  if (n_points < 1) throw ContractViolation("need at least one check point");

  const double lipschitz = constants.lipschitz;
  const double growth = constants.growth;
  DescentCheckReport report;
  report.points_checked = n_points;
  report.in_window = alpha < max_stable_step(lipschitz, growth);
  report.worst_slack = std::numeric_limits<double>::infinity();

  Rng rng(seed);
  for (Index s = 0; s < n_points; ++s) {
    const DenseVector x = gaussian_vector(rng, obj.dimension());
    const double f_x = full_value(obj, x);
    const DenseVector g = full_gradient(obj, x);
    const double g_sq = g.squaredNorm();
    const double expected = exact_expected_one_step(obj, x, alpha);
    const double rhs = descent_bound_rhs(f_x, g_sq, alpha, lipschitz, growth);

    report.worst_slack = std::min(report.worst_slack, rhs - expected);
    if (expected > rhs + 1e-9 * std::abs(f_x)) ++report.descent_violations;

    const double second = error_second_moment(obj, x);
    if (second > (growth * growth - 1.0) * g_sq + 1e-9) {
      ++report.variance_violations;
    }

    if (std::sqrt(g_sq) > stationarity_tol(x) && expected >= f_x) {
      ++report.decrease_violations;
    }
  }

  report.passed = report.in_window && report.descent_violations == 0 &&
                  report.variance_violations == 0 &&
                  report.decrease_violations == 0;
  return report;
}

}  // namespace sgdcert
