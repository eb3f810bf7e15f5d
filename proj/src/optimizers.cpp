#include "sgdcert/optimizers.hpp"

#include <cmath>
#include <limits>

namespace sgdcert {

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw ContractViolation("step size must be positive and finite");
  }
}

}  // namespace

std::string method_name(Method method) {
  switch (method) {
    case Method::kSgd:
      return "sgd";
    case Method::kGd:
      return "gd";
    case Method::kCyclicIg:
      return "cyclic-ig";
  }
  throw ContractViolation("unknown method");
}

Method parse_method(const std::string& name) {
  if (name == "sgd") return Method::kSgd;
  if (name == "gd") return Method::kGd;
  if (name == "cyclic-ig") return Method::kCyclicIg;
  throw ConfigError("unknown method '" + name + "'");
}

DenseVector gd_step(const FiniteSumObjective& obj, const DenseVector& x,
                    double alpha) {
  check_alpha(alpha);
  return x - alpha * obj.gradient(x);
}

SampledStep sgd_step(const FiniteSumObjective& obj, const DenseVector& x,
                     double alpha, Rng& rng) {
  check_alpha(alpha);
  const Index i = rng.next_index(obj.component_count());
  return SampledStep{x - alpha * obj.component_gradient(i, x), i};
}

CyclicStep cyclic_ig_step(const FiniteSumObjective& obj, const DenseVector& x,
                          double alpha, Index cursor) {
  check_alpha(alpha);
  const Index n = obj.component_count();
  if (cursor < 0 || cursor >= n) {
    throw ContractViolation("cyclic cursor out of range");
  }
  return CyclicStep{x - alpha * obj.component_gradient(cursor, x), cursor,
                    (cursor + 1) % n};
}

Trajectory run(Method method, const FiniteSumObjective& obj,
               const StepConfig& config, const DenseVector& minimizer,
               double optimal_value, DivergencePolicy policy) {
  check_alpha(config.alpha);
  if (config.iteration_budget < 0) {
    throw ContractViolation("iteration budget must be non-negative");
  }
  if (config.initial_point.size() != obj.dimension()) {
    throw ContractViolation("initial point dimension mismatch");
  }
  if (minimizer.size() != obj.dimension()) {
    throw ContractViolation("minimizer dimension mismatch");
  }

  const Index budget = config.iteration_budget;
  Trajectory out;
  out.method = method;
  out.records.reserve(static_cast<std::size_t>(budget) + 1);
  if (method != Method::kGd) {
    out.visited_components.reserve(static_cast<std::size_t>(budget));
  }

  Rng rng(config.seed);
  DenseVector x = config.initial_point;
  Index cursor = 0;

  const auto record_or_diverge = [&](Index k) {
    TrajectoryRecord rec;
    if (x.allFinite()) {
      // Raw evaluation routes: a blown-up value must reach the policy check
      // below instead of throwing from the checked wrappers.
      rec.value = obj.value(x);
      rec.gap = rec.value - optimal_value;
      rec.grad_norm = obj.gradient(x).norm();
      rec.dist_to_opt = (x - minimizer).norm();
    } else {
      rec.value = std::numeric_limits<double>::quiet_NaN();
    }
    const bool finite = x.allFinite() && std::isfinite(rec.value) &&
                        std::isfinite(rec.grad_norm) &&
                        std::isfinite(rec.dist_to_opt);
    if (finite) {
      out.records.push_back(rec);
      return true;
    }
    if (policy == DivergencePolicy::kThrow) {
      throw DivergenceError("iterate diverged", static_cast<long>(k));
    }
    out.diverged_at = k;
    const double inf = std::numeric_limits<double>::infinity();
    while (out.records.size() < static_cast<std::size_t>(budget) + 1) {
      out.records.push_back(TrajectoryRecord{inf, inf, inf, inf});
    }
    return false;
  };

  if (record_or_diverge(0)) {
    for (Index k = 1; k <= budget; ++k) {
      switch (method) {
        case Method::kGd:
          x = gd_step(obj, x, config.alpha);
          break;
        case Method::kSgd: {
          SampledStep s = sgd_step(obj, x, config.alpha, rng);
          x = std::move(s.next);
          out.visited_components.push_back(s.component);
          break;
        }
        case Method::kCyclicIg: {
          CyclicStep s = cyclic_ig_step(obj, x, config.alpha, cursor);
          x = std::move(s.next);
          cursor = s.cursor;
          out.visited_components.push_back(s.component);
          break;
        }
      }
      if (!record_or_diverge(k)) break;
    }
  }

  out.final_iterate = std::move(x);
  return out;
}

double exact_expected_one_step(const FiniteSumObjective& obj,
                               const DenseVector& x, double alpha) {
  check_alpha(alpha);
  const Index n = obj.component_count();
  double acc = 0.0;
  for (Index i = 0; i < n; ++i) {
    acc += full_value(obj, x - alpha * obj.component_gradient(i, x));
  }
  return acc / static_cast<double>(n);
}

}  // namespace sgdcert
