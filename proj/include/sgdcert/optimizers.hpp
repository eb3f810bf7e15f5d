#ifndef SGDCERT_OPTIMIZERS_HPP
#define SGDCERT_OPTIMIZERS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sgdcert/objective.hpp"
#include "sgdcert/rng.hpp"
#include "sgdcert/types.hpp"

namespace sgdcert {

enum class Method { kSgd, kGd, kCyclicIg };

std::string method_name(Method method);
Method parse_method(const std::string& name);

struct StepConfig {
  double alpha = 0.0;              // constant step size, > 0
  Index iteration_budget = 0;      // number of steps K; K+1 records
  std::uint64_t seed = 0;          // stream seed for sampled methods
  DenseVector initial_point;
};

struct TrajectoryRecord {
  double value = 0.0;        // f(x_k)
  double gap = 0.0;          // f(x_k) - f*
  double grad_norm = 0.0;    // ||f'(x_k)||
  double dist_to_opt = 0.0;  // ||x_k - x*||
};

struct Trajectory {
  Method method = Method::kGd;
  std::vector<TrajectoryRecord> records;  // indexed by iteration k
  DenseVector final_iterate;
  std::vector<Index> visited_components;  // empty for gd
  std::optional<Index> diverged_at;       // first iteration with a non-finite
                                          // record, only under kRecordAndStop
};

/// What `run` does when an iterate or recorded value goes non-finite.
/// kThrow raises DivergenceError with the iteration index. kRecordAndStop
/// marks the trajectory, pads the remaining records with +inf and returns,
/// which keeps replica series aligned when step sizes are deliberately hot.
enum class DivergencePolicy { kThrow, kRecordAndStop };

/// Full-gradient step x - alpha * f'(x).
DenseVector gd_step(const FiniteSumObjective& obj, const DenseVector& x,
                    double alpha);

struct SampledStep {
  DenseVector next;
  Index component;
};

/// One stochastic step: draws a component uniformly from the generator and
/// returns x - alpha * f_i'(x).
SampledStep sgd_step(const FiniteSumObjective& obj, const DenseVector& x,
                     double alpha, Rng& rng);

struct CyclicStep {
  DenseVector next;
  Index component;
  Index cursor;  // advanced modulo N
};

/// Incremental step through components in fixed cyclic order.
CyclicStep cyclic_ig_step(const FiniteSumObjective& obj, const DenseVector& x,
                          double alpha, Index cursor);

/// Runs `iteration_budget` steps of the chosen method from `initial_point`,
/// recording value, gap, gradient norm and distance to `minimizer` at every
/// iteration including k = 0. Bit-deterministic given (method, obj, config).
Trajectory run(Method method, const FiniteSumObjective& obj,
               const StepConfig& config, const DenseVector& minimizer,
               double optimal_value,
               DivergencePolicy policy = DivergencePolicy::kThrow);

/// Exact expectation of f after one stochastic step from x: enumerates all N
/// component choices, (1/N) * sum_i f(x - alpha * f_i'(x)). No sampling.
double exact_expected_one_step(const FiniteSumObjective& obj,
                               const DenseVector& x, double alpha);

}  // namespace sgdcert

#endif  // SGDCERT_OPTIMIZERS_HPP
