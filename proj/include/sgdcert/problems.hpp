#ifndef SGDCERT_PROBLEMS_HPP
#define SGDCERT_PROBLEMS_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <string>

#include "sgdcert/objective.hpp"
#include "sgdcert/rng.hpp"
#include "sgdcert/types.hpp"

namespace sgdcert {

enum class Family {
  kScaledQuadratic,
  kConsistentLeastSquares,
  // Explicit row/rhs data, used for hand-built fixtures (in particular the
  // non-interpolating one the verifier must reject). Not produced by the
  // generators.
  kLeastSquaresData,
};

std::string family_name(Family family);
Family parse_family(const std::string& name);

/// f_i(x) = (c_i / 2) * ||x - center||^2 with curvatures c_i > 0.
/// Every component shares the minimizer, so the growth ratio is the constant
/// max(c) / mean(c) everywhere away from it.
class ScaledQuadraticObjective final : public FiniteSumObjective {
 public:
  ScaledQuadraticObjective(DenseVector curvatures, DenseVector center);

  double component_value(Index i, const DenseVector& x) const override;
  DenseVector component_gradient(Index i, const DenseVector& x) const override;
  double component_smoothness(Index i) const override;

  const DenseVector& curvatures() const { return curvatures_; }
  const DenseVector& center() const { return center_; }
  double mean_curvature() const { return mean_curvature_; }

 private:
  DenseVector curvatures_;
  DenseVector center_;
  double mean_curvature_;
};

/// f_i(x) = 1/2 * (a_i^T x - b_i)^2 for rows a_i and targets b_i.
class LeastSquaresObjective final : public FiniteSumObjective {
 public:
  LeastSquaresObjective(DenseMatrix rows, DenseVector rhs);

  double component_value(Index i, const DenseVector& x) const override;
  DenseVector component_gradient(Index i, const DenseVector& x) const override;
  double component_smoothness(Index i) const override;

  const DenseMatrix& rows() const { return rows_; }
  const DenseVector& rhs() const { return rhs_; }

 private:
  DenseMatrix rows_;  // N x P, one equation per row
  DenseVector rhs_;
};

/// A generated problem: objective plus the planted minimizer, its value, and
/// generation metadata. Generated instances interpolate (every component is
/// stationary at `minimizer`).
struct ProblemInstance {
  std::shared_ptr<const FiniteSumObjective> objective;
  DenseVector minimizer;
  double optimal_value = 0.0;
  Family family = Family::kScaledQuadratic;
  std::uint64_t seed = 0;
  // Least-squares construction data: planted rank and singular values.
  Index rank = 0;
  DenseVector singular_values;
};

/// Certified constants: gradient Lipschitz constant L, strong convexity mu
/// (0 means merely convex) and growth constant B >= 1.
struct ProblemConstants {
  double lipschitz = 0.0;
  double strong_convexity = 0.0;
  double growth = 1.0;
};

ProblemInstance generate_scaled_quadratic(const DenseVector& curvatures,
                                          const DenseVector& minimizer,
                                          std::uint64_t seed);

/// Consistent (zero-residual) least squares with prescribed rank and
/// singular-value spread. A = U diag(sigma) V^T from seeded orthonormal
/// factors; sigma_1 = 1 and sigma_r = 1/condition are pinned so rank and
/// conditioning are controlled exactly; interior squared values are
/// log-uniform inside a band that keeps a spectral gap at both ends (see
/// the generator for the margin rule). b = A x* for a planted x*, so all
/// residuals vanish at the solution.
ProblemInstance generate_consistent_least_squares(Index n_components,
                                                  Index dimension, Index rank,
                                                  double condition,
                                                  std::uint64_t seed);

/// Builds an instance around explicit least-squares data. `optimal_value`
/// defaults to f(minimizer); nothing is certified, the verifier decides.
ProblemInstance make_least_squares_data(DenseMatrix rows, DenseVector rhs,
                                        DenseVector minimizer);
ProblemInstance make_least_squares_data(DenseMatrix rows, DenseVector rhs,
                                        DenseVector minimizer,
                                        double optimal_value);

/// Certifies L, mu, B for a supported instance. Scaled quadratics are closed
/// form. Least squares uses power iteration on A^T A for the extremal
/// eigenvalues (relative tolerance 1e-10, cap 100*P iterations) and the
/// conservative growth certificate B = N * max_i ||a_i|| / sigma_plus with
/// sigma_plus the smallest nonzero singular value.
ProblemConstants compute_constants(const ProblemInstance& instance);

/// Empirical sup of the growth ratio over points sampled uniformly in the
/// ball of `radius` around the minimizer; a lower bound on any valid B.
double estimate_growth_constant(const FiniteSumObjective& obj,
                                const DenseVector& minimizer, Index n_samples,
                                double radius, std::uint64_t seed);

struct PowerIterationResult {
  double eigenvalue = 0.0;
  Index iterations = 0;
  double residual = 0.0;
};

/// Largest eigenvalue of a symmetric PSD operator on R^dim by power
/// iteration with Rayleigh-quotient estimates. Converged when the residual
/// ||M v - theta v|| drops below 1e-12 * max(theta, scale_floor); after the
/// iteration cap a residual within 1e-10 of the same reference is still
/// accepted, anything worse throws NumericFailure. The floor matters for
/// spectrum-flip passes, where the operator can be numerically zero and the
/// meaningful scale is the unflipped eigenvalue.
PowerIterationResult largest_eigenvalue(
    const std::function<DenseVector(const DenseVector&)>& apply, Index dim,
    Index iteration_cap, Rng& rng, double scale_floor = 0.0);

}  // namespace sgdcert

#endif  // SGDCERT_PROBLEMS_HPP
