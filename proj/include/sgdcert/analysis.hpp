#ifndef SGDCERT_ANALYSIS_HPP
#define SGDCERT_ANALYSIS_HPP

#include <cstdint>
#include <vector>

#include "sgdcert/objective.hpp"
#include "sgdcert/problems.hpp"
#include "sgdcert/types.hpp"

namespace sgdcert {

/// A theoretical convergence guarantee on the expected gap E[f(x_k)] - f*.
/// Geometric: gap <= rho^k * initial gap. Sublinear: gap <= constant / k.
struct RateBound {
  enum class Kind { kGeometric, kSublinear };
  Kind kind = Kind::kGeometric;
  double rho = 0.0;       // geometric contraction factor
  double constant = 0.0;  // sublinear numerator
  // Constants the bound was derived from.
  double alpha = 0.0;
  double lipschitz = 0.0;
  double strong_convexity = 0.0;
  double growth = 1.0;
};

/// Open upper endpoint 2/(L*B^2) of the step-size range with guaranteed
/// expected descent.
double max_stable_step(double lipschitz, double growth);

/// The step size 1/(L*B^2) all rate statements specialize to; exactly half
/// of max_stable_step.
double reference_step(double lipschitz, double growth);

/// Contraction factor rho = 1 - 2*mu*alpha*(1 - alpha*L*B^2/2) of the
/// expected gap under strong convexity. Requires mu > 0 and alpha inside the
/// open window (0, max_stable_step); outside it the guarantee is void and
/// WindowViolation is thrown.
double geometric_rate(double strong_convexity, double lipschitz, double growth,
                      double alpha);

/// Right-hand side f(x) - alpha*(1 - alpha*L*B^2/2)*||f'(x)||^2 of the
/// expected one-step descent inequality. Defined for every alpha > 0; above
/// the window the coefficient flips sign and the bound allows growth.
double descent_bound_rhs(double f_x, double grad_norm_sq, double alpha,
                         double lipschitz, double growth);

/// O(1/k) guarantee [2*(B^2-1)*initial_gap + L*B^2*initial_dist^2] / (2k) on
/// the expected gap after k steps at the reference step size. Valid for
/// convex interpolating problems; requires k >= 1.
double sublinear_bound(double growth, double lipschitz, double initial_gap,
                       double initial_dist, double k);

/// Least-squares slope of log(gap) vs. iteration over entries with index
/// >= burn_in that are finite and above floor, exponentiated to a
/// per-iteration contraction factor. Throws InsufficientData when fewer than
/// 10 entries survive the filter.
double fit_geometric_rate(const std::vector<double>& gaps, Index burn_in,
                          double floor);

/// Defaults: burn_in 5, floor 1e-13 * gaps.front().
double fit_geometric_rate(const std::vector<double>& gaps);

struct DescentCheckReport {
  Index points_checked = 0;
  bool in_window = false;          // alpha < max_stable_step
  // expected one-step value above the descent bound (beyond 1e-9*|f| slack)
  Index descent_violations = 0;
  // gradient-error second moment above (B^2-1)*||f'||^2 + 1e-9
  Index variance_violations = 0;
  // no strict expected decrease at a non-stationary point
  Index decrease_violations = 0;
  double worst_slack = 0.0;  // min over points of bound - expected value
  bool passed = false;       // in_window and all violation counts zero
};

/// Samples n_points standard-gaussian points around the origin and checks,
/// exactly (full enumeration, no Monte Carlo), the expected descent
/// inequality, the gradient-error variance bound, and strict expected
/// decrease away from stationarity. Violations are reported, never thrown:
/// probing deliberately bad step sizes is a supported use.
DescentCheckReport verify_descent(const FiniteSumObjective& obj,
                                  const ProblemConstants& constants,
                                  double alpha, Index n_points,
                                  std::uint64_t seed);

}  // namespace sgdcert

#endif  // SGDCERT_ANALYSIS_HPP
