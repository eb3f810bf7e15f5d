#include "sgdcert/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "sgdcert/numfmt.hpp"
#include "sgdcert/rng.hpp"

namespace sgdcert {

namespace {

constexpr char kCsvHeader[] = "k,method,mean_gap,stderr,bound,alpha,L,mu,B";

DenseVector to_vector(const std::vector<double>& v) {
  return Eigen::Map<const DenseVector>(v.data(),
                                       static_cast<Index>(v.size()));
}

void check_known_keys(const KvFile& kv, const std::string& section,
                      const std::vector<std::string>& allowed) {
  for (const auto& key : kv.keys(section)) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError("unknown key '" + key + "' in [" + section + "]");
    }
  }
}

Index get_count(const KvFile& kv, const std::string& section,
                const std::string& key, Index minimum) {
  const std::int64_t raw = kv.get_int(section, key);
  if (raw < minimum) {
    throw ConfigError("key '" + key + "' in [" + section + "] must be >= " +
                      format_int(minimum));
  }
  return static_cast<Index>(raw);
}

void run_indexed(Index count, int n_threads,
                 const std::function<void(Index)>& body) {
  if (n_threads <= 1 || count <= 1) {
    for (Index r = 0; r < count; ++r) body(r);
    return;
  }
  const int workers =
      static_cast<int>(std::min<Index>(n_threads, count));
  std::atomic<Index> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      while (true) {
        const Index r = next.fetch_add(1);
        if (r >= count) return;
        try {
          body(r);
        } catch (...) {
          const std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace

double StepSpec::resolve(double lipschitz, double growth) const {
  switch (kind) {
    case Kind::kReference:
      return reference_step(lipschitz, growth);
    case Kind::kHalfMax:
      return 0.5 * max_stable_step(lipschitz, growth);
    case Kind::kWindowMultiple:
      return value * max_stable_step(lipschitz, growth);
    case Kind::kExplicit:
      return value;
  }
  throw ContractViolation("unknown step kind");
}

std::string StepSpec::serialize() const {
  switch (kind) {
    case Kind::kReference:
      return "reference";
    case Kind::kHalfMax:
      return "half-max";
    case Kind::kWindowMultiple:
      return "window:" + format_real(value);
    case Kind::kExplicit:
      return format_real(value);
  }
  throw ContractViolation("unknown step kind");
}

StepSpec StepSpec::parse(const std::string& text) {
  StepSpec out;
  if (text == "reference") {
    out.kind = Kind::kReference;
    return out;
  }
  if (text == "half-max") {
    out.kind = Kind::kHalfMax;
    return out;
  }
  const std::string prefix = "window:";
  if (text.rfind(prefix, 0) == 0) {
    const auto mult = try_parse_real(text.substr(prefix.size()));
    if (!mult || !(*mult > 0.0) || !std::isfinite(*mult)) {
      throw ConfigError("step window multiplier must be a positive number: '" +
                        text + "'");
    }
    out.kind = Kind::kWindowMultiple;
    out.value = *mult;
    return out;
  }
  const auto explicit_value = try_parse_real(text);
  if (!explicit_value || !(*explicit_value > 0.0) ||
      !std::isfinite(*explicit_value)) {
    throw ConfigError(
        "step must be 'reference', 'half-max', 'window:<m>' or a positive "
        "number: '" +
        text + "'");
  }
  out.kind = Kind::kExplicit;
  out.value = *explicit_value;
  return out;
}

ProblemSpec ProblemSpec::from_kv(const KvFile& kv) {
  ProblemSpec out;
  out.family = parse_family(kv.get("problem", "family"));
  switch (out.family) {
    case Family::kScaledQuadratic: {
      check_known_keys(kv, "problem",
                       {"family", "seed", "curvatures", "minimizer"});
      out.seed = kv.get_u64("problem", "seed");
      out.curvatures = kv.get_reals("problem", "curvatures");
      out.minimizer = kv.get_reals("problem", "minimizer");
      for (double c : out.curvatures) {
        if (!(c > 0.0) || !std::isfinite(c)) {
          throw ConfigError("key 'curvatures' in [problem]: entries must be "
                            "positive and finite");
        }
      }
      break;
    }
    case Family::kConsistentLeastSquares: {
      check_known_keys(kv, "problem", {"family", "seed", "components",
                                       "dimension", "rank", "condition"});
      out.seed = kv.get_u64("problem", "seed");
      out.components = get_count(kv, "problem", "components", 1);
      out.dimension = get_count(kv, "problem", "dimension", 1);
      out.rank = get_count(kv, "problem", "rank", 1);
      out.condition = kv.get_real("problem", "condition");
      if (out.rank > std::min(out.components, out.dimension)) {
        throw ConfigError(
            "key 'rank' in [problem] must be <= min(components, dimension)");
      }
      if (!(out.condition >= 1.0) || !std::isfinite(out.condition)) {
        throw ConfigError("key 'condition' in [problem] must be >= 1");
      }
      break;
    }
    case Family::kLeastSquaresData: {
      out.components = get_count(kv, "problem", "components", 1);
      out.dimension = get_count(kv, "problem", "dimension", 1);
      std::vector<std::string> allowed = {"family", "components", "dimension",
                                          "rhs", "minimizer"};
      out.rows.reserve(static_cast<std::size_t>(out.components));
      for (Index i = 0; i < out.components; ++i) {
        const std::string key = "row_" + format_int(i);
        allowed.push_back(key);
        out.rows.push_back(kv.get_reals("problem", key));
        if (static_cast<Index>(out.rows.back().size()) != out.dimension) {
          throw ConfigError("key '" + key +
                            "' in [problem]: expected 'dimension' entries");
        }
      }
      check_known_keys(kv, "problem", allowed);
      out.rhs = kv.get_reals("problem", "rhs");
      out.minimizer = kv.get_reals("problem", "minimizer");
      if (static_cast<Index>(out.rhs.size()) != out.components) {
        throw ConfigError(
            "key 'rhs' in [problem]: expected 'components' entries");
      }
      break;
    }
  }
  if (out.family == Family::kScaledQuadratic && out.minimizer.empty()) {
    throw ConfigError("key 'minimizer' in [problem] must not be empty");
  }
  if (out.family == Family::kLeastSquaresData &&
      static_cast<Index>(out.minimizer.size()) != out.dimension) {
    throw ConfigError(
        "key 'minimizer' in [problem]: expected 'dimension' entries");
  }
  return out;
}

void ProblemSpec::to_kv(KvFile& kv) const {
  kv.set("problem", "family", family_name(family));
  switch (family) {
    case Family::kScaledQuadratic:
      kv.set_u64("problem", "seed", seed);
      kv.set_reals("problem", "curvatures", curvatures);
      kv.set_reals("problem", "minimizer", minimizer);
      break;
    case Family::kConsistentLeastSquares:
      kv.set_u64("problem", "seed", seed);
      kv.set_int("problem", "components", components);
      kv.set_int("problem", "dimension", dimension);
      kv.set_int("problem", "rank", rank);
      kv.set_real("problem", "condition", condition);
      break;
    case Family::kLeastSquaresData:
      kv.set_int("problem", "components", components);
      kv.set_int("problem", "dimension", dimension);
      for (std::size_t i = 0; i < rows.size(); ++i) {
        kv.set_reals("problem", "row_" + format_int(static_cast<Index>(i)),
                     rows[i]);
      }
      kv.set_reals("problem", "rhs", rhs);
      kv.set_reals("problem", "minimizer", minimizer);
      break;
  }
}

ProblemInstance ProblemSpec::instantiate() const {
  switch (family) {
    case Family::kScaledQuadratic:
      return generate_scaled_quadratic(to_vector(curvatures),
                                       to_vector(minimizer), seed);
    case Family::kConsistentLeastSquares:
      return generate_consistent_least_squares(components, dimension, rank,
                                               condition, seed);
    case Family::kLeastSquaresData: {
      DenseMatrix a(components, dimension);
      for (Index i = 0; i < components; ++i) {
        a.row(i) = to_vector(rows[static_cast<std::size_t>(i)]).transpose();
      }
      return make_least_squares_data(std::move(a), to_vector(rhs),
                                     to_vector(minimizer));
    }
  }
  throw ContractViolation("unknown family");
}

ExperimentConfig ExperimentConfig::from_kv(const KvFile& kv) {
  ExperimentConfig out;
  out.problem = ProblemSpec::from_kv(kv);
  check_known_keys(kv, "experiment",
                   {"methods", "step", "replicas", "iters", "seed", "output"});
  for (const auto piece : split(kv.get("experiment", "methods"), ',')) {
    std::string name(piece);
    name.erase(0, name.find_first_not_of(' '));
    name.erase(name.find_last_not_of(' ') + 1);
    const Method m = parse_method(name);
    if (std::find(out.methods.begin(), out.methods.end(), m) !=
        out.methods.end()) {
      throw ConfigError("key 'methods' in [experiment]: duplicate method '" +
                        name + "'");
    }
    out.methods.push_back(m);
  }
  if (out.methods.empty()) {
    throw ConfigError("key 'methods' in [experiment] must list a method");
  }
  out.step = StepSpec::parse(kv.get("experiment", "step"));
  out.replicas = get_count(kv, "experiment", "replicas", 1);
  out.iterations = get_count(kv, "experiment", "iters", 0);
  out.master_seed = kv.get_u64("experiment", "seed");
  out.output_path = kv.get_or("experiment", "output", "");
  return out;
}

void ExperimentConfig::to_kv(KvFile& kv) const {
  problem.to_kv(kv);
  std::string joined;
  for (std::size_t i = 0; i < methods.size(); ++i) {
    if (i > 0) joined += ",";
    joined += method_name(methods[i]);
  }
  kv.set("experiment", "methods", joined);
  kv.set("experiment", "step", step.serialize());
  kv.set_int("experiment", "replicas", replicas);
  kv.set_int("experiment", "iters", iterations);
  kv.set_u64("experiment", "seed", master_seed);
  if (!output_path.empty()) kv.set("experiment", "output", output_path);
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  return from_kv(KvFile::load(path));
}

void ExperimentConfig::save(const std::string& path) const {
  KvFile kv;
  to_kv(kv);
  kv.save(path);
}

std::uint64_t replica_seed(std::uint64_t master, Index replica) {
  return Rng::stream(master, static_cast<std::uint64_t>(replica)).state();
}

DenseVector default_initial_point(const DenseVector& minimizer) {
  const Index p = minimizer.size();
  return minimizer +
         DenseVector::Constant(p, 1.0 / std::sqrt(static_cast<double>(p)));
}

double fitted_contraction(const std::vector<double>& mean_gap,
                          const std::vector<double>& std_error) {
  std::vector<double> usable;
  usable.reserve(mean_gap.size());
  for (std::size_t k = 0; k < mean_gap.size(); ++k) {
    const double m = mean_gap[k];
    if (!std::isfinite(m) || !(m > 0.0)) break;
    const double se = k < std_error.size() ? std_error[k] : 0.0;
    if (se > m / 3.0) break;
    usable.push_back(m);
  }
  if (usable.empty()) return std::numeric_limits<double>::quiet_NaN();
  try {
    return fit_geometric_rate(usable, 5, 1e-13 * usable.front());
  } catch (const InsufficientData&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

ExperimentReport run_experiment(const ExperimentConfig& config,
                                int n_threads) {
  if (config.methods.empty()) throw ConfigError("no methods configured");
  if (config.replicas < 1) throw ConfigError("replicas must be >= 1");
  if (config.iterations < 0) throw ConfigError("iters must be >= 0");

  const ProblemInstance instance = config.problem.instantiate();
  const ProblemConstants constants = compute_constants(instance);
  const double alpha =
      config.step.resolve(constants.lipschitz, constants.growth);

  ExperimentReport report;
  report.alpha = alpha;
  report.lipschitz = constants.lipschitz;
  report.strong_convexity = constants.strong_convexity;
  report.growth = constants.growth;
  report.replicas = config.replicas;
  report.iterations = config.iterations;

  const DenseVector x0 = default_initial_point(instance.minimizer);
  const double dist0 = (x0 - instance.minimizer).norm();
  const Index budget = config.iterations;
  const std::size_t length = static_cast<std::size_t>(budget) + 1;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double inf = std::numeric_limits<double>::infinity();

  for (const Method method : config.methods) {
    MethodReport mr;
    mr.method = method;
    // gd and cyclic-ig ignore the sampling stream, so every replica would
    // repeat the same trajectory; one stands for all of them.
    const Index reps = method == Method::kSgd ? config.replicas : 1;

    std::vector<std::vector<double>> gaps(
        static_cast<std::size_t>(reps));
    std::vector<char> diverged(static_cast<std::size_t>(reps), 0);
    run_indexed(reps, n_threads, [&](Index r) {
      StepConfig sc;
      sc.alpha = alpha;
      sc.iteration_budget = budget;
      sc.seed = replica_seed(config.master_seed, r);
      sc.initial_point = x0;
      const Trajectory t =
          run(method, *instance.objective, sc, instance.minimizer,
              instance.optimal_value, DivergencePolicy::kRecordAndStop);
      auto& g = gaps[static_cast<std::size_t>(r)];
      g.resize(length);
      for (std::size_t k = 0; k < length; ++k) g[k] = t.records[k].gap;
      if (t.diverged_at) diverged[static_cast<std::size_t>(r)] = 1;
    });

    mr.mean_gap.assign(length, 0.0);
    mr.std_error.assign(length, 0.0);
    const double r_count = static_cast<double>(reps);
    for (std::size_t k = 0; k < length; ++k) {
      double sum = 0.0;
      for (const auto& g : gaps) sum += g[k];
      mr.mean_gap[k] = sum / r_count;
    }
    if (reps > 1) {
      for (std::size_t k = 0; k < length; ++k) {
        const double mean = mr.mean_gap[k];
        if (!std::isfinite(mean)) {
          mr.std_error[k] = inf;
          continue;
        }
        double ss = 0.0;
        for (const auto& g : gaps) {
          const double d = g[k] - mean;
          ss += d * d;
        }
        mr.std_error[k] = std::sqrt(ss / (r_count * (r_count - 1.0)));
      }
    }
    for (const char d : diverged) mr.diverged_replicas += d;

    const double delta0 = mr.mean_gap[0];
    mr.bound.assign(length, nan);
    const double mu = constants.strong_convexity;
    const double lipschitz = constants.lipschitz;
    const double growth = constants.growth;
    if (method == Method::kGd && mu > 0.0 &&
        alpha < max_stable_step(lipschitz, 1.0)) {
      RateBound b;
      b.kind = RateBound::Kind::kGeometric;
      b.rho = geometric_rate(mu, lipschitz, 1.0, alpha);
      b.alpha = alpha;
      b.lipschitz = lipschitz;
      b.strong_convexity = mu;
      b.growth = 1.0;
      mr.bound_info = b;
    } else if (method == Method::kSgd && mu > 0.0 &&
               alpha < max_stable_step(lipschitz, growth)) {
      RateBound b;
      b.kind = RateBound::Kind::kGeometric;
      b.rho = geometric_rate(mu, lipschitz, growth, alpha);
      b.alpha = alpha;
      b.lipschitz = lipschitz;
      b.strong_convexity = mu;
      b.growth = growth;
      mr.bound_info = b;
    } else if (method == Method::kSgd && mu == 0.0 &&
               alpha == reference_step(lipschitz, growth)) {
      RateBound b;
      b.kind = RateBound::Kind::kSublinear;
      b.constant = sublinear_bound(growth, lipschitz, delta0, dist0, 1.0);
      b.alpha = alpha;
      b.lipschitz = lipschitz;
      b.strong_convexity = 0.0;
      b.growth = growth;
      mr.bound_info = b;
    }
    if (mr.bound_info) {
      if (mr.bound_info->kind == RateBound::Kind::kGeometric) {
        for (std::size_t k = 0; k < length; ++k) {
          mr.bound[k] =
              std::pow(mr.bound_info->rho, static_cast<double>(k)) * delta0;
        }
      } else {
        for (std::size_t k = 1; k < length; ++k) {
          mr.bound[k] = mr.bound_info->constant / static_cast<double>(k);
        }
      }
      for (std::size_t k = 0; k < length; ++k) {
        if (std::isnan(mr.bound[k])) continue;
        // The 1e-12 relative term absorbs rounding on bounds that are
        // exactly tight (gd on an isotropic quadratic hits rho^k to the ulp).
        if (mr.mean_gap[k] >
            mr.bound[k] + 3.0 * mr.std_error[k] + 1e-12 * mr.bound[k]) {
          ++mr.bound_violations;
        }
      }
    }

    mr.fitted_rho = fitted_contraction(mr.mean_gap, mr.std_error);
    report.methods.push_back(std::move(mr));
  }
  return report;
}

std::string render_csv(const ExperimentReport& report) {
  std::string out(kCsvHeader);
  out += "\n";
  for (const auto& mr : report.methods) {
    const std::string name = method_name(mr.method);
    for (std::size_t k = 0; k < mr.mean_gap.size(); ++k) {
      out += format_int(static_cast<Index>(k));
      out += ",";
      out += name;
      out += ",";
      out += format_real(mr.mean_gap[k]);
      out += ",";
      out += format_real(mr.std_error[k]);
      out += ",";
      if (!std::isnan(mr.bound[k])) out += format_real(mr.bound[k]);
      out += ",";
      out += format_real(report.alpha);
      out += ",";
      out += format_real(report.lipschitz);
      out += ",";
      out += format_real(report.strong_convexity);
      out += ",";
      out += format_real(report.growth);
      out += "\n";
    }
  }
  return out;
}

void emit_csv(const ExperimentReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << render_csv(report);
  out.flush();
  if (!out) throw IoError("cannot write " + path);
}

ExperimentReport parse_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path);
  const std::string text = buf.str();

  std::vector<std::string_view> lines = split(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty() || lines.front() != kCsvHeader) {
    throw IoError(path + ": unexpected CSV header");
  }

  ExperimentReport report;
  report.replicas = 0;
  bool have_constants = false;
  std::vector<std::string> method_names;

  const auto parse_field = [&](std::string_view field, std::size_t line_no,
                               const char* what) {
    const auto v = try_parse_real(field);
    if (!v) {
      throw IoError(path + ": line " + std::to_string(line_no) + ": bad " +
                    what + " value '" + std::string(field) + "'");
    }
    return *v;
  };

  for (std::size_t ln = 1; ln < lines.size(); ++ln) {
    const auto fields = split(lines[ln], ',');
    if (fields.size() != 9) {
      throw IoError(path + ": line " + std::to_string(ln + 1) +
                    ": expected 9 fields");
    }
    const auto k = try_parse_int(fields[0]);
    if (!k || *k < 0) {
      throw IoError(path + ": line " + std::to_string(ln + 1) +
                    ": bad iteration index");
    }
    const std::string name(fields[1]);
    const double mean = parse_field(fields[2], ln + 1, "mean_gap");
    const double se = parse_field(fields[3], ln + 1, "stderr");
    const double bound = fields[4].empty()
                             ? std::numeric_limits<double>::quiet_NaN()
                             : parse_field(fields[4], ln + 1, "bound");
    const double alpha = parse_field(fields[5], ln + 1, "alpha");
    const double lipschitz = parse_field(fields[6], ln + 1, "L");
    const double mu = parse_field(fields[7], ln + 1, "mu");
    const double growth = parse_field(fields[8], ln + 1, "B");

    if (!have_constants) {
      report.alpha = alpha;
      report.lipschitz = lipschitz;
      report.strong_convexity = mu;
      report.growth = growth;
      have_constants = true;
    } else if (alpha != report.alpha || lipschitz != report.lipschitz ||
               mu != report.strong_convexity || growth != report.growth) {
      throw IoError(path + ": line " + std::to_string(ln + 1) +
                    ": constants differ between rows");
    }

    std::size_t m = 0;
    for (; m < method_names.size(); ++m) {
      if (method_names[m] == name) break;
    }
    if (m == method_names.size()) {
      method_names.push_back(name);
      MethodReport mr;
      mr.method = parse_method(name);
      report.methods.push_back(std::move(mr));
    }
    MethodReport& mr = report.methods[m];
    if (static_cast<Index>(mr.mean_gap.size()) != *k) {
      throw IoError(path + ": line " + std::to_string(ln + 1) +
                    ": iterations out of order for method '" + name + "'");
    }
    mr.mean_gap.push_back(mean);
    mr.std_error.push_back(se);
    mr.bound.push_back(bound);
  }

  if (report.methods.empty()) throw IoError(path + ": no data rows");
  const std::size_t length = report.methods.front().mean_gap.size();
  for (const auto& mr : report.methods) {
    if (mr.mean_gap.size() != length) {
      throw IoError(path + ": methods cover different iteration ranges");
    }
  }
  report.iterations = static_cast<Index>(length) - 1;

  for (auto& mr : report.methods) {
    for (std::size_t k = 0; k < length; ++k) {
      if (std::isnan(mr.bound[k])) continue;
      if (mr.mean_gap[k] >
          mr.bound[k] + 3.0 * mr.std_error[k] + 1e-12 * mr.bound[k]) {
        ++mr.bound_violations;
      }
    }
    mr.fitted_rho = fitted_contraction(mr.mean_gap, mr.std_error);
  }
  return report;
}

std::string render_summary(const ExperimentReport& report) {
  KvFile kv;
  kv.set_real("constants", "alpha", report.alpha);
  kv.set_real("constants", "L", report.lipschitz);
  kv.set_real("constants", "mu", report.strong_convexity);
  kv.set_real("constants", "B", report.growth);
  if (report.replicas > 0) {
    kv.set_int("run", "replicas", report.replicas);
    kv.set_int("run", "iters", report.iterations);
  }
  for (const auto& mr : report.methods) {
    const std::string section = "method:" + method_name(mr.method);
    kv.set_real(section, "fitted_rho", mr.fitted_rho);
    std::string kind = "none";
    if (mr.bound_info) {
      kind = mr.bound_info->kind == RateBound::Kind::kGeometric ? "geometric"
                                                                : "sublinear";
    } else if (!mr.bound.empty() && mr.bound.size() > 1) {
      if (!std::isnan(mr.bound[1])) {
        kind = std::isnan(mr.bound[0]) ? "sublinear" : "geometric";
      }
    }
    kv.set(section, "bound_kind", kind);
    if (mr.bound_info) {
      if (mr.bound_info->kind == RateBound::Kind::kGeometric) {
        kv.set_real(section, "bound_rho", mr.bound_info->rho);
      } else {
        kv.set_real(section, "bound_constant", mr.bound_info->constant);
      }
    }
    if (kind != "none") {
      kv.set_int(section, "bound_violations", mr.bound_violations);
    }
    if (report.replicas > 0) {
      kv.set_int(section, "diverged_replicas", mr.diverged_replicas);
    }
    if (!mr.mean_gap.empty()) {
      kv.set_real(section, "final_mean_gap", mr.mean_gap.back());
    }
  }
  return kv.serialize();
}

void write_summary(const ExperimentReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << render_summary(report);
  out.flush();
  if (!out) throw IoError("cannot write " + path);
}

}  // namespace sgdcert
