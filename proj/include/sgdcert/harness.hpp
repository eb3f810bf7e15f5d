#ifndef SGDCERT_HARNESS_HPP
#define SGDCERT_HARNESS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sgdcert/analysis.hpp"
#include "sgdcert/kvfile.hpp"
#include "sgdcert/optimizers.hpp"
#include "sgdcert/problems.hpp"
#include "sgdcert/types.hpp"

namespace sgdcert {

/// Step-size specification: either an explicit value or a symbol resolved
/// once the problem constants are certified. `window:<m>` means m times the
/// upper window endpoint, so m >= 1 is deliberately outside the guarantee.
struct StepSpec {
  enum class Kind { kReference, kHalfMax, kWindowMultiple, kExplicit };
  Kind kind = Kind::kReference;
  double value = 0.0;  // window multiple, or the explicit step size

  double resolve(double lipschitz, double growth) const;
  std::string serialize() const;
  static StepSpec parse(const std::string& text);
};

/// Declarative problem description as stored in problem files. Generated
/// families are re-instantiated from (parameters, seed), which reproduces
/// the instance bit for bit.
struct ProblemSpec {
  Family family = Family::kScaledQuadratic;
  std::uint64_t seed = 0;
  // scaled quadratic
  std::vector<double> curvatures;
  std::vector<double> minimizer;
  // consistent least squares
  Index components = 0;
  Index dimension = 0;
  Index rank = 0;
  double condition = 1.0;
  // explicit least-squares data (rows indexed row_0..row_{N-1} in the file)
  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;

  static ProblemSpec from_kv(const KvFile& kv);
  void to_kv(KvFile& kv) const;
  ProblemInstance instantiate() const;
};

struct ExperimentConfig {
  ProblemSpec problem;
  std::vector<Method> methods;
  StepSpec step;
  Index replicas = 1;
  Index iterations = 0;
  std::uint64_t master_seed = 0;
  std::string output_path;  // may be empty; the CLI --out flag overrides

  static ExperimentConfig from_kv(const KvFile& kv);
  void to_kv(KvFile& kv) const;
  static ExperimentConfig load(const std::string& path);
  void save(const std::string& path) const;
};

struct MethodReport {
  Method method = Method::kSgd;
  std::vector<double> mean_gap;   // pointwise replica average, length K+1
  std::vector<double> std_error;  // zero for deterministic methods and R=1
  std::vector<double> bound;      // theoretical curve, NaN where none applies
  std::optional<RateBound> bound_info;
  double fitted_rho = 0.0;  // NaN when too few informative points to fit
  Index bound_violations = 0;  // mean_gap > bound + 3*std_error
  Index diverged_replicas = 0;
};

struct ExperimentReport {
  // Constants resolved for the run.
  double alpha = 0.0;
  double lipschitz = 0.0;
  double strong_convexity = 0.0;
  double growth = 1.0;
  Index replicas = 0;  // 0 when reconstructed from a CSV
  Index iterations = 0;
  std::vector<MethodReport> methods;
};

/// Seed of replica r's stream: full-avalanche mix of (master, r), identical
/// to Rng::stream's derivation.
std::uint64_t replica_seed(std::uint64_t master, Index replica);

/// Starting point used by every experiment: minimizer + ones/sqrt(P), i.e.
/// unit distance from the planted solution in every dimension.
DenseVector default_initial_point(const DenseVector& minimizer);

/// Certifies constants, resolves the step size, runs every configured method
/// for `replicas` independent streams, averages gaps pointwise and overlays
/// the applicable theoretical bound. Deterministic methods run one replica
/// (the others would be identical). The report is bitwise independent of
/// `n_threads` and of replica execution order: per-replica series are stored
/// by index and reduced sequentially.
ExperimentReport run_experiment(const ExperimentConfig& config,
                                int n_threads = 1);

/// Contraction factor fitted to the informative prefix of a mean-gap series:
/// entries are used until the first that is non-finite, non-positive, or has
/// standard error above mean/3 (beyond that the Monte Carlo estimate carries
/// no rate information). NaN when fewer than 10 points survive.
double fitted_contraction(const std::vector<double>& mean_gap,
                          const std::vector<double>& std_error);

/// CSV schema: header `k,method,mean_gap,stderr,bound,alpha,L,mu,B`, one row
/// per (iteration, method), methods in report order. Floats in shortest
/// round-trip form, divergence sentinel `inf`, empty bound column where no
/// bound applies.
std::string render_csv(const ExperimentReport& report);
void emit_csv(const ExperimentReport& report, const std::string& path);

/// Rebuilds series and constants from a CSV produced by emit_csv; fitted
/// rates and violation counts are recomputed, replica-level details are not
/// recoverable (replicas is set to 0).
ExperimentReport parse_csv(const std::string& path);

/// Human-readable summary in the key-value format: resolved constants plus
/// per-method fitted rate, bound description and violation counts.
std::string render_summary(const ExperimentReport& report);
void write_summary(const ExperimentReport& report, const std::string& path);

}  // namespace sgdcert

#endif  // SGDCERT_HARNESS_HPP
