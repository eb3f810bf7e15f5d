#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "doctest.h"
#include "sgdcert/harness.hpp"
#include "sgdcert/numfmt.hpp"
#include "sgdcert/rng.hpp"

using namespace sgdcert;

namespace {

ProblemSpec scalar_pair_spec() {
  ProblemSpec p;
  p.family = Family::kScaledQuadratic;
  p.seed = 1;
  p.curvatures = {1.0, 3.0};
  p.minimizer = {0.0};
  return p;
}

ExperimentConfig pair_experiment(Method method, Index replicas,
                                 Index iterations) {
  ExperimentConfig cfg;
  cfg.problem = scalar_pair_spec();
  cfg.methods = {method};
  cfg.step.kind = StepSpec::Kind::kReference;
  cfg.replicas = replicas;
  cfg.iterations = iterations;
  cfg.master_seed = 20240811;
  return cfg;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

}  // namespace

TEST_CASE("step specs parse, serialize and resolve") {
  CHECK(StepSpec::parse("reference").kind == StepSpec::Kind::kReference);
  CHECK(StepSpec::parse("half-max").kind == StepSpec::Kind::kHalfMax);
  const StepSpec window = StepSpec::parse("window:1.2");
  CHECK(window.kind == StepSpec::Kind::kWindowMultiple);
  CHECK(window.value == 1.2);
  const StepSpec explicit_step = StepSpec::parse("0.25");
  CHECK(explicit_step.kind == StepSpec::Kind::kExplicit);
  CHECK(explicit_step.value == 0.25);

  for (const std::string text : {"reference", "half-max", "window:1.2", "0.25"}) {
    CHECK(StepSpec::parse(text).serialize() == text);
  }

  CHECK(StepSpec::parse("reference").resolve(2.0, 1.5) ==
        doctest::Approx(2.0 / 9.0).epsilon(1e-15));
  CHECK(window.resolve(2.0, 1.5) ==
        doctest::Approx(1.2 * 4.0 / 9.0).epsilon(1e-15));
  CHECK(explicit_step.resolve(2.0, 1.5) == 0.25);
}

TEST_CASE("half-max resolves bitwise equal to the reference step") {
  const StepSpec half = StepSpec::parse("half-max");
  const StepSpec ref = StepSpec::parse("reference");
  for (double l : {0.5, 2.0, 17.0, 3e5}) {
    for (double b : {1.0, 1.5, 192.59336225119}) {
      CHECK(half.resolve(l, b) == ref.resolve(l, b));
    }
  }
}

TEST_CASE("step spec rejects malformed text") {
  for (const std::string bad :
       {"", "junk", "0", "-0.5", "window:", "window:-1", "window:abc", "inf"}) {
    CHECK_THROWS_AS((void)StepSpec::parse(bad), ConfigError);
  }
}

TEST_CASE("problem specs round-trip through the kv format") {
  ProblemSpec quad = scalar_pair_spec();

  ProblemSpec ls;
  ls.family = Family::kConsistentLeastSquares;
  ls.seed = 42;
  ls.components = 50;
  ls.dimension = 10;
  ls.rank = 10;
  ls.condition = 10.0;

  ProblemSpec data;
  data.family = Family::kLeastSquaresData;
  data.components = 2;
  data.dimension = 1;
  data.rows = {{1.0}, {1.0}};
  data.rhs = {1.0, -1.0};
  data.minimizer = {0.0};

  for (ProblemSpec* spec : {&quad, &ls, &data}) {
    KvFile kv;
    spec->to_kv(kv);
    const ProblemSpec back = ProblemSpec::from_kv(kv);
    KvFile kv2;
    back.to_kv(kv2);
    CHECK(kv2.serialize() == kv.serialize());
    CHECK(back.family == spec->family);
  }
}

TEST_CASE("problem spec validation names the offending key") {
  KvFile kv;
  scalar_pair_spec().to_kv(kv);
  kv.set("problem", "surprise", "1");
  CHECK_THROWS_AS((void)ProblemSpec::from_kv(kv), ConfigError);

  KvFile bad_curv;
  bad_curv.set("problem", "family", "scaled_quadratic");
  bad_curv.set_u64("problem", "seed", 1);
  bad_curv.set("problem", "curvatures", "1,-3");
  bad_curv.set("problem", "minimizer", "0");
  CHECK_THROWS_AS((void)ProblemSpec::from_kv(bad_curv), ConfigError);

  KvFile bad_rank;
  bad_rank.set("problem", "family", "consistent_least_squares");
  bad_rank.set_u64("problem", "seed", 1);
  bad_rank.set_int("problem", "components", 4);
  bad_rank.set_int("problem", "dimension", 3);
  bad_rank.set_int("problem", "rank", 5);
  bad_rank.set_real("problem", "condition", 2.0);
  CHECK_THROWS_AS((void)ProblemSpec::from_kv(bad_rank), ConfigError);
  bad_rank.set("problem", "rank", "3");
  bad_rank.set("problem", "condition", "0.5");
  CHECK_THROWS_AS((void)ProblemSpec::from_kv(bad_rank), ConfigError);
}

TEST_CASE("experiment configs round-trip through files") {
  ExperimentConfig cfg = pair_experiment(Method::kSgd, 8, 5);
  cfg.methods = {Method::kSgd, Method::kGd, Method::kCyclicIg};
  cfg.output_path = "series.csv";
  const std::string path = temp_path("sgdcert_cfg_roundtrip.kv");
  cfg.save(path);
  const ExperimentConfig back = ExperimentConfig::load(path);
  std::filesystem::remove(path);

  CHECK(back.methods == cfg.methods);
  CHECK(back.step.kind == cfg.step.kind);
  CHECK(back.replicas == 8);
  CHECK(back.iterations == 5);
  CHECK(back.master_seed == 20240811);
  CHECK(back.output_path == "series.csv");
  KvFile a, b;
  cfg.to_kv(a);
  back.to_kv(b);
  CHECK(a.serialize() == b.serialize());
}

TEST_CASE("experiment config rejects duplicates and unknown keys") {
  KvFile kv;
  pair_experiment(Method::kSgd, 1, 1).to_kv(kv);
  kv.set("experiment", "methods", "sgd,sgd");
  CHECK_THROWS_AS((void)ExperimentConfig::from_kv(kv), ConfigError);
  kv.set("experiment", "methods", "");
  CHECK_THROWS_AS((void)ExperimentConfig::from_kv(kv), ConfigError);
  kv.set("experiment", "methods", "sgd");
  kv.set("experiment", "walltime", "60");
  CHECK_THROWS_AS((void)ExperimentConfig::from_kv(kv), ConfigError);
}

TEST_CASE("replica seeds equal the stream derivation") {
  CHECK(replica_seed(7, 0) == Rng::stream(7, 0).state());
  CHECK(replica_seed(7, 0) == 0x63CBE1E459320DD7ULL);
  CHECK(replica_seed(7, 1) == 0x044C3CD7F43C661CULL);
  CHECK(replica_seed(8, 0) != replica_seed(7, 0));
}

TEST_CASE("default initial point sits at unit distance from the minimizer") {
  for (Index p : {1, 4, 9}) {
    const DenseVector m = DenseVector::Constant(p, 2.0);
    const DenseVector x0 = default_initial_point(m);
    REQUIRE(x0.size() == p);
    CHECK((x0 - m).norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("gd on the scalar pair reproduces the closed-form decay") {
  const ExperimentReport rep = run_experiment(pair_experiment(Method::kGd, 5, 6));
  REQUIRE(rep.methods.size() == 1);
  const MethodReport& m = rep.methods[0];
  CHECK(rep.alpha == doctest::Approx(2.0 / 9.0).epsilon(1e-15));
  CHECK(rep.lipschitz == 2.0);
  CHECK(rep.growth == 1.5);
  REQUIRE(m.mean_gap.size() == 7);

  // Deterministic methods collapse to one replica with zero standard error.
  for (double se : m.std_error) CHECK(se == 0.0);

  // gap_k = (25/81)^k exactly in reals; the certified gd rate equals it, so
  // the bound curve is tight and must not be counted as violated.
  REQUIRE(m.bound_info.has_value());
  CHECK(m.bound_info->kind == RateBound::Kind::kGeometric);
  CHECK(m.bound_info->rho == doctest::Approx(25.0 / 81.0).epsilon(1e-15));
  for (std::size_t k = 0; k < 7; ++k) {
    CHECK(m.mean_gap[k] ==
          doctest::Approx(std::pow(25.0 / 81.0, static_cast<double>(k)))
              .epsilon(1e-12));
  }
  CHECK(m.bound_violations == 0);
  CHECK(m.diverged_replicas == 0);
}

TEST_CASE("an sgd experiment with one replica equals a direct run") {
  ExperimentConfig cfg = pair_experiment(Method::kSgd, 1, 20);
  const ExperimentReport rep = run_experiment(cfg);
  const ProblemInstance inst = cfg.problem.instantiate();
  StepConfig sc;
  sc.alpha = rep.alpha;
  sc.iteration_budget = 20;
  sc.seed = replica_seed(cfg.master_seed, 0);
  sc.initial_point = default_initial_point(inst.minimizer);
  const Trajectory t = run(Method::kSgd, *inst.objective, sc, inst.minimizer,
                           inst.optimal_value, DivergencePolicy::kRecordAndStop);
  REQUIRE(rep.methods[0].mean_gap.size() == t.records.size());
  for (std::size_t k = 0; k < t.records.size(); ++k) {
    CHECK(rep.methods[0].mean_gap[k] == t.records[k].gap);
    CHECK(rep.methods[0].std_error[k] == 0.0);
  }
}

TEST_CASE("sgd means contract and respect the certified bound") {
  // The per-replica gap spread grows like 1.48^k / sqrt(R) on this problem,
  // so 4000 replicas keep enough informative iterations for a rate fit.
  const ExperimentReport rep =
      run_experiment(pair_experiment(Method::kSgd, 4000, 30));
  const MethodReport& m = rep.methods[0];
  REQUIRE(m.bound_info.has_value());
  CHECK(m.bound_info->rho == doctest::Approx(5.0 / 9.0).epsilon(1e-15));
  CHECK(m.bound_violations == 0);
  CHECK(m.fitted_rho > 0.2);
  CHECK(m.fitted_rho < 0.5);  // exact per-step factor is 29/81
  for (std::size_t k = 1; k < m.std_error.size(); ++k) {
    CHECK(m.std_error[k] > 0.0);
  }
}

TEST_CASE("reports are bitwise independent of the thread count") {
  ExperimentConfig cfg = pair_experiment(Method::kSgd, 64, 40);
  const std::string csv1 = render_csv(run_experiment(cfg, 1));
  const std::string csv3 = render_csv(run_experiment(cfg, 3));
  const std::string csv8 = render_csv(run_experiment(cfg, 8));
  CHECK(csv1 == csv3);
  CHECK(csv1 == csv8);
}

TEST_CASE("csv emission and parsing are mutually inverse") {
  ExperimentConfig cfg = pair_experiment(Method::kSgd, 30, 15);
  cfg.methods = {Method::kSgd, Method::kGd, Method::kCyclicIg};
  const ExperimentReport rep = run_experiment(cfg);
  const std::string path = temp_path("sgdcert_roundtrip.csv");
  emit_csv(rep, path);

  const ExperimentReport back = parse_csv(path);
  CHECK(back.alpha == rep.alpha);
  CHECK(back.lipschitz == rep.lipschitz);
  CHECK(back.strong_convexity == rep.strong_convexity);
  CHECK(back.growth == rep.growth);
  CHECK(back.replicas == 0);
  CHECK(back.iterations == rep.iterations);
  REQUIRE(back.methods.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(back.methods[i].method == rep.methods[i].method);
    CHECK(back.methods[i].mean_gap == rep.methods[i].mean_gap);
    CHECK(back.methods[i].std_error == rep.methods[i].std_error);
    CHECK(back.methods[i].bound_violations == rep.methods[i].bound_violations);
    const bool fit_matches =
        back.methods[i].fitted_rho == rep.methods[i].fitted_rho ||
        (std::isnan(back.methods[i].fitted_rho) &&
         std::isnan(rep.methods[i].fitted_rho));
    CHECK(fit_matches);
  }

  // Re-emission of the parsed report is byte-identical.
  CHECK(render_csv(back) == render_csv(rep));
  std::filesystem::remove(path);
}

TEST_CASE("a deliberately hot step records divergence sentinels end to end") {
  ExperimentConfig cfg = pair_experiment(Method::kSgd, 3, 700);
  cfg.step.kind = StepSpec::Kind::kExplicit;
  cfg.step.value = 3.0;
  const ExperimentReport rep = run_experiment(cfg);
  const MethodReport& m = rep.methods[0];
  CHECK(m.diverged_replicas == 3);
  CHECK(std::isinf(m.mean_gap.back()));
  CHECK(!m.bound_info.has_value());
  CHECK(std::isnan(m.fitted_rho));

  const std::string path = temp_path("sgdcert_divergent.csv");
  emit_csv(rep, path);
  std::ifstream in(path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  CHECK(text.find(",inf,") != std::string::npos);
  const ExperimentReport back = parse_csv(path);
  CHECK(std::isinf(back.methods[0].mean_gap.back()));
  std::filesystem::remove(path);
}

TEST_CASE("a merely convex instance gets the reciprocal-iteration bound") {
  ExperimentConfig cfg;
  cfg.problem.family = Family::kConsistentLeastSquares;
  cfg.problem.seed = 3;
  cfg.problem.components = 6;
  cfg.problem.dimension = 4;
  cfg.problem.rank = 2;
  cfg.problem.condition = 2.0;
  cfg.methods = {Method::kSgd};
  cfg.step.kind = StepSpec::Kind::kReference;
  cfg.replicas = 40;
  cfg.iterations = 30;
  cfg.master_seed = 99;
  const ExperimentReport rep = run_experiment(cfg);
  CHECK(rep.strong_convexity == 0.0);
  const MethodReport& m = rep.methods[0];
  REQUIRE(m.bound_info.has_value());
  CHECK(m.bound_info->kind == RateBound::Kind::kSublinear);
  CHECK(std::isnan(m.bound[0]));
  for (std::size_t k = 1; k < m.bound.size(); ++k) {
    CHECK(m.bound[k] ==
          m.bound_info->constant / static_cast<double>(k));
  }
  CHECK(m.bound_violations == 0);
}

TEST_CASE("fitted contraction ignores the noise-dominated tail") {
  std::vector<double> mean, se;
  double g = 1.0;
  for (int k = 0; k <= 40; ++k) {
    mean.push_back(g);
    se.push_back(k < 20 ? 0.0 : g);  // stderr equals the mean from k = 20 on
    g *= 0.5;
  }
  CHECK(fitted_contraction(mean, se) == doctest::Approx(0.5).epsilon(1e-9));

  // Too few informative points before the noise floor: no fit.
  std::vector<double> se_early(mean.size(), 0.0);
  for (std::size_t k = 8; k < se_early.size(); ++k) se_early[k] = mean[k];
  CHECK(std::isnan(fitted_contraction(mean, se_early)));
}

TEST_CASE("summaries list constants and per-method verdicts") {
  ExperimentConfig cfg = pair_experiment(Method::kSgd, 20, 12);
  cfg.methods = {Method::kSgd, Method::kGd};
  const ExperimentReport rep = run_experiment(cfg);
  const std::string text = render_summary(rep);
  CHECK(text.find("[constants]") != std::string::npos);
  CHECK(text.find("alpha = ") != std::string::npos);
  CHECK(text.find("[method:sgd]") != std::string::npos);
  CHECK(text.find("[method:gd]") != std::string::npos);
  CHECK(text.find("bound_kind = geometric") != std::string::npos);
  CHECK(text.find("bound_violations = 0") != std::string::npos);
  CHECK(text.find("replicas = 20") != std::string::npos);

  const std::string path = temp_path("sgdcert_summary.report");
  write_summary(rep, path);
  const KvFile kv = KvFile::load(path);
  CHECK(kv.get_real("constants", "L") == 2.0);
  CHECK(kv.get_real("constants", "B") == 1.5);
  std::filesystem::remove(path);
}

TEST_CASE("csv parsing rejects structural damage with the line number") {
  const std::string path = temp_path("sgdcert_bad.csv");

  write_text(path, "wrong,header\n0,sgd,1,0,,0.1,2,2,1.5\n");
  CHECK_THROWS_AS((void)parse_csv(path), IoError);

  write_text(path, "k,method,mean_gap,stderr,bound,alpha,L,mu,B\n");
  CHECK_THROWS_AS((void)parse_csv(path), IoError);

  write_text(path,
             "k,method,mean_gap,stderr,bound,alpha,L,mu,B\n"
             "0,sgd,1,0,,0.1,2,2\n");
  CHECK_THROWS_AS((void)parse_csv(path), IoError);

  write_text(path,
             "k,method,mean_gap,stderr,bound,alpha,L,mu,B\n"
             "0,sgd,1,0,,0.1,2,2,1.5\n"
             "2,sgd,0.5,0,,0.1,2,2,1.5\n");
  CHECK_THROWS_AS((void)parse_csv(path), IoError);

  write_text(path,
             "k,method,mean_gap,stderr,bound,alpha,L,mu,B\n"
             "0,sgd,1,0,,0.1,2,2,1.5\n"
             "1,sgd,0.5,0,,0.2,2,2,1.5\n");
  CHECK_THROWS_AS((void)parse_csv(path), IoError);

  write_text(path,
             "k,method,mean_gap,stderr,bound,alpha,L,mu,B\n"
             "0,sgd,abc,0,,0.1,2,2,1.5\n");
  CHECK_THROWS_AS((void)parse_csv(path), IoError);

  std::filesystem::remove(path);
  CHECK_THROWS_AS((void)parse_csv(path), IoError);
}

TEST_CASE("run_experiment validates its configuration") {
  ExperimentConfig cfg = pair_experiment(Method::kSgd, 1, 1);
  cfg.methods.clear();
  CHECK_THROWS_AS((void)run_experiment(cfg), ConfigError);
  cfg = pair_experiment(Method::kSgd, 0, 1);
  CHECK_THROWS_AS((void)run_experiment(cfg), ConfigError);
  cfg = pair_experiment(Method::kSgd, 1, -1);
  CHECK_THROWS_AS((void)run_experiment(cfg), ConfigError);
}
