#include "sgdcert/problems.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <utility>

namespace sgdcert {

namespace {

void check_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ContractViolation(std::string(what) + " must be positive and finite");
  }
}

// Orthonormal columns: QR of a seeded gaussian matrix, signs fixed so the
// factor is unique (R diagonal made positive).
DenseMatrix random_orthonormal(Index rows, Index cols, Rng& rng) {
  DenseMatrix g(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    g.col(j) = gaussian_vector(rng, rows);
  }
  Eigen::HouseholderQR<DenseMatrix> qr(g);
  DenseMatrix q = qr.householderQ() * DenseMatrix::Identity(rows, cols);
  DenseMatrix r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
  for (Index j = 0; j < cols; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return q;
}

}  // namespace

std::string family_name(Family family) {
  switch (family) {
    case Family::kScaledQuadratic:
      return "scaled_quadratic";
    case Family::kConsistentLeastSquares:
      return "consistent_least_squares";
    case Family::kLeastSquaresData:
      return "least_squares_data";
  }
  throw ContractViolation("unknown family");
}

Family parse_family(const std::string& name) {
  if (name == "scaled_quadratic") return Family::kScaledQuadratic;
  if (name == "consistent_least_squares") return Family::kConsistentLeastSquares;
  if (name == "least_squares_data") return Family::kLeastSquaresData;
  throw ConfigError("unknown problem family '" + name + "'");
}

ScaledQuadraticObjective::ScaledQuadraticObjective(DenseVector curvatures,
                                                   DenseVector center)
    : FiniteSumObjective(curvatures.size(), center.size()),
      curvatures_(std::move(curvatures)),
      center_(std::move(center)) {
  for (Index i = 0; i < curvatures_.size(); ++i) {
    check_positive(curvatures_[i], "curvature");
  }
  mean_curvature_ = curvatures_.mean();
}

double ScaledQuadraticObjective::component_value(Index i,
                                                 const DenseVector& x) const {
  check_component(i);
  check_point(x);
  return 0.5 * curvatures_[i] * (x - center_).squaredNorm();
}

DenseVector ScaledQuadraticObjective::component_gradient(
    Index i, const DenseVector& x) const {
  check_component(i);
  check_point(x);
  return curvatures_[i] * (x - center_);
}

double ScaledQuadraticObjective::component_smoothness(Index i) const {
  check_component(i);
  return curvatures_[i];
}

LeastSquaresObjective::LeastSquaresObjective(DenseMatrix rows, DenseVector rhs)
    : FiniteSumObjective(rows.rows(), rows.cols()),
      rows_(std::move(rows)),
      rhs_(std::move(rhs)) {
  if (rhs_.size() != rows_.rows()) {
    throw ContractViolation("rhs length must match the number of rows");
  }
}

double LeastSquaresObjective::component_value(Index i,
                                              const DenseVector& x) const {
  check_component(i);
  check_point(x);
  const double r = rows_.row(i).dot(x) - rhs_[i];
  return 0.5 * r * r;
}

DenseVector LeastSquaresObjective::component_gradient(
    Index i, const DenseVector& x) const {
  check_component(i);
  check_point(x);
  const double r = rows_.row(i).dot(x) - rhs_[i];
  return r * rows_.row(i).transpose();
}

double LeastSquaresObjective::component_smoothness(Index i) const {
  check_component(i);
  return rows_.row(i).squaredNorm();
}

ProblemInstance generate_scaled_quadratic(const DenseVector& curvatures,
                                          const DenseVector& minimizer,
                                          std::uint64_t seed) {
  if (curvatures.size() < 1) {
    throw ContractViolation("need at least one curvature");
  }
  if (minimizer.size() < 1) {
    throw ContractViolation("minimizer must have positive dimension");
  }
  ProblemInstance inst;
  inst.objective =
      std::make_shared<ScaledQuadraticObjective>(curvatures, minimizer);
  inst.minimizer = minimizer;
  inst.optimal_value = 0.0;
  inst.family = Family::kScaledQuadratic;
  inst.seed = seed;
  inst.rank = minimizer.size();
  inst.singular_values = curvatures;
  return inst;
}

ProblemInstance generate_consistent_least_squares(Index n_components,
                                                  Index dimension, Index rank,
                                                  double condition,
                                                  std::uint64_t seed) {
  if (n_components < 1 || dimension < 1) {
    throw ContractViolation("need at least one row and one column");
  }
  if (rank < 1 || rank > std::min(n_components, dimension)) {
    throw ContractViolation("rank must lie in [1, min(rows, cols)]");
  }
  if (!(condition >= 1.0) || !std::isfinite(condition)) {
    throw ContractViolation("condition number must be finite and >= 1");
  }

  Rng rng(seed);
  DenseVector sigma(rank);
  sigma[0] = 1.0;
  if (rank > 1) {
    sigma[rank - 1] = 1.0 / condition;
    if (rank > 2) {
      // Interior spectrum: log-uniform in sigma^2, kept 36/cap away from
      // both endpoints so the extremal power iterations (budget 100*P)
      // retain a workable spectral gap. When condition ~ 1 leaves no such
      // window the interior ties an endpoint exactly; exact clusters
      // converge immediately, only near-ties stall.
      const double lambda_min = sigma[rank - 1] * sigma[rank - 1];
      const double margin = 36.0 / (100.0 * static_cast<double>(dimension));
      const double hi = std::exp(-margin);
      const double lo = lambda_min + (1.0 - lambda_min) * margin;
      for (Index j = 1; j + 1 < rank; ++j) {
        double lambda;
        if (lo < hi) {
          lambda = std::exp(std::log(lo) +
                            (std::log(hi) - std::log(lo)) * rng.next_double());
        } else {
          lambda = rng.next_double() < 0.5 ? lambda_min : 1.0;
        }
        sigma[j] = std::sqrt(lambda);
      }
      std::sort(sigma.data() + 1, sigma.data() + rank - 1,
                [](double a, double b) { return a > b; });
    }
  }

  DenseMatrix u = random_orthonormal(n_components, rank, rng);
  DenseMatrix v = random_orthonormal(dimension, rank, rng);
  DenseMatrix a = u * sigma.asDiagonal() * v.transpose();

  DenseVector x_star = gaussian_vector(rng, dimension);
  DenseVector b = a * x_star;

  ProblemInstance inst;
  inst.objective = std::make_shared<LeastSquaresObjective>(std::move(a), std::move(b));
  inst.minimizer = std::move(x_star);
  inst.optimal_value = 0.0;
  inst.family = Family::kConsistentLeastSquares;
  inst.seed = seed;
  inst.rank = rank;
  inst.singular_values = sigma;
  return inst;
}

ProblemInstance make_least_squares_data(DenseMatrix rows, DenseVector rhs,
                                        DenseVector minimizer) {
  auto obj = std::make_shared<LeastSquaresObjective>(std::move(rows),
                                                     std::move(rhs));
  const double opt = full_value(*obj, minimizer);
  ProblemInstance inst;
  inst.objective = std::move(obj);
  inst.minimizer = std::move(minimizer);
  inst.optimal_value = opt;
  inst.family = Family::kLeastSquaresData;
  inst.rank = 0;
  return inst;
}

ProblemInstance make_least_squares_data(DenseMatrix rows, DenseVector rhs,
                                        DenseVector minimizer,
                                        double optimal_value) {
  ProblemInstance inst = make_least_squares_data(
      std::move(rows), std::move(rhs), std::move(minimizer));
  inst.optimal_value = optimal_value;
  return inst;
}

PowerIterationResult largest_eigenvalue(
    const std::function<DenseVector(const DenseVector&)>& apply, Index dim,
    Index iteration_cap, Rng& rng, double scale_floor) {
  if (dim < 1) throw ContractViolation("dimension must be positive");
  if (iteration_cap < 1) throw ContractViolation("iteration cap must be positive");

  DenseVector v = gaussian_vector(rng, dim);
  double norm = v.norm();
  while (norm == 0.0) {
    v = gaussian_vector(rng, dim);
    norm = v.norm();
  }
  v /= norm;

  PowerIterationResult result;
  for (Index it = 1; it <= iteration_cap; ++it) {
    DenseVector mv = apply(v);
    const double theta = v.dot(mv);
    const double residual = (mv - theta * v).norm();
    result.eigenvalue = theta;
    result.iterations = it;
    result.residual = residual;
    if (residual <= 1e-12 * std::max({theta, scale_floor, 1e-300})) {
      return result;
    }
    const double mv_norm = mv.norm();
    if (mv_norm == 0.0) {
      // v is in the kernel; the operator restricted to this start is zero.
      result.eigenvalue = 0.0;
      result.residual = 0.0;
      return result;
    }
    v = mv / mv_norm;
  }
  if (result.residual <=
      1e-10 * std::max({result.eigenvalue, scale_floor, 1e-300})) {
    return result;
  }
  throw NumericFailure("power iteration did not converge within the cap");
}

ProblemConstants compute_constants(const ProblemInstance& instance) {
  if (!instance.objective) throw ContractViolation("instance has no objective");
  ProblemConstants out;

  if (instance.family == Family::kScaledQuadratic) {
    const auto& obj =
        dynamic_cast<const ScaledQuadraticObjective&>(*instance.objective);
    const double mean = obj.mean_curvature();
    out.lipschitz = mean;
    out.strong_convexity = mean;
    out.growth = obj.curvatures().maxCoeff() / mean;
    return out;
  }

  const auto& obj =
      dynamic_cast<const LeastSquaresObjective&>(*instance.objective);
  const DenseMatrix& a = obj.rows();
  const Index n = a.rows();
  const Index p = a.cols();
  const Index cap = 100 * p;
  const double n_inv = 1.0 / static_cast<double>(n);

  Rng rng(Rng::stream(instance.seed, 0x5e5).next_u64());
  const auto apply_h = [&](const DenseVector& x) {
    return DenseVector(a.transpose() * (a * x));
  };
  const double lambda_max = largest_eigenvalue(apply_h, p, cap, rng).eigenvalue;
  out.lipschitz = lambda_max * n_inv;

  double lambda_min = 0.0;
  const bool full_rank =
      instance.family == Family::kConsistentLeastSquares
          ? instance.rank == p
          : n >= p;
  if (full_rank) {
    // Smallest eigenvalue via the spectrum flip lambda_max * I - A^T A.
    const auto apply_flip = [&](const DenseVector& x) {
      return DenseVector(lambda_max * x - a.transpose() * (a * x));
    };
    const double flipped =
        largest_eigenvalue(apply_flip, p, cap, rng, lambda_max).eigenvalue;
    lambda_min = std::max(lambda_max - flipped, 0.0);
    if (instance.family == Family::kLeastSquaresData &&
        lambda_min <= 1e-10 * lambda_max) {
      lambda_min = 0.0;  // numerically rank deficient, certify convexity only
    }
  }
  out.strong_convexity = lambda_min * n_inv;

  // B certificate for a consistent system, d = x - x*, y = A d:
  //   max_i ||f_i'(x)|| = max_i |y_i| ||a_i|| <= max_i ||a_i|| * ||y||
  //   ||f'(x)|| = ||A^T y|| / N >= sigma_plus ||y|| / N   (y in range(A))
  // so B = N * max_i ||a_i|| / sigma_plus is valid, with sigma_plus the
  // smallest nonzero singular value of A.
  double sigma_plus;
  if (instance.family == Family::kConsistentLeastSquares) {
    sigma_plus = instance.singular_values[instance.rank - 1];
  } else if (lambda_min > 0.0) {
    sigma_plus = std::sqrt(lambda_min);
  } else {
    throw NumericFailure(
        "cannot certify a growth constant for rank-deficient data without "
        "planted singular values");
  }
  double max_row_norm = 0.0;
  for (Index i = 0; i < n; ++i) {
    max_row_norm = std::max(max_row_norm, a.row(i).norm());
  }
  out.growth =
      std::max(static_cast<double>(n) * max_row_norm / sigma_plus, 1.0);
  return out;
}

double estimate_growth_constant(const FiniteSumObjective& obj,
                                const DenseVector& minimizer, Index n_samples,
                                double radius, std::uint64_t seed) {
  if (n_samples < 1) throw ContractViolation("need at least one sample");
  Rng rng(seed);
  double sup = 1.0;
  for (Index s = 0; s < n_samples; ++s) {
    const DenseVector x = sample_in_ball(rng, minimizer, radius);
    sup = std::max(sup, growth_ratio(obj, x));
  }
  return sup;
}

}  // namespace sgdcert
