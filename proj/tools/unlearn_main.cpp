// Command-line front end: train / unlearn / retrain / audit / capacity /
// demo-population-risk / experiment, all driven by a single JSON config.
// Every run is deterministic given the seeds in the config.

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "unlearn/audit.hpp"
#include "unlearn/capacity.hpp"
#include "unlearn/distributions.hpp"
#include "unlearn/model_io.hpp"
#include "unlearn/removal.hpp"
#include "unlearn/rng.hpp"
#include "unlearn/solver.hpp"

namespace {

using json = nlohmann::json;
using namespace unlearn;

enum ExitCode {
  kOk = 0,
  kInternalError = 1,
  kConfigError = 2,
  kDataError = 3,
  kSolverError = 4,
  kBudgetError = 5,
};

void validate_keys(const json& object, const std::set<std::string>& allowed,
                   const std::string& context) {
  if (!object.is_object()) throw ConfigError(context + " must be a JSON object");
  for (const auto& [key, value] : object.items()) {
    (void)value;
    if (!allowed.contains(key)) {
      throw ConfigError(context + ": unknown key '" + key + "'");
    }
  }
}

template <typename T>
T require(const json& object, const std::string& key, const std::string& context) {
  if (!object.contains(key)) throw ConfigError(context + ": missing key '" + key + "'");
  try {
    return object.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(context + ": key '" + key + "' has the wrong type");
  }
}

template <typename T>
T optional_or(const json& object, const std::string& key, T fallback,
              const std::string& context) {
  if (!object.contains(key)) return fallback;
  try {
    return object.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(context + ": key '" + key + "' has the wrong type");
  }
}

struct RunConfig {
  json root;
  std::optional<std::uint64_t> seed_override;
  std::optional<std::string> out_override;
};

json load_config(const std::string& path) {
  json doc;
  try {
    doc = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  } catch (const DataError& e) {
    throw ConfigError(e.what());
  }
  validate_keys(doc,
                {"loss", "mode", "dataset", "budget", "output", "capacity", "demo", "audit",
                 "experiment"},
                "config");
  return doc;
}

bool convex_mode(const RunConfig& config) {
  const json& root = config.root;
  if (root.contains("mode")) {
    const auto mode = require<std::string>(root, "mode", "config");
    if (mode == "convex") return true;
    if (mode == "strongly-convex") return false;
    throw ConfigError("mode must be 'convex' or 'strongly-convex'");
  }
  // default: strongly convex when the declared lambda allows it
  const json& loss = root.contains("loss") ? root.at("loss") : json::object();
  const auto kind = optional_or<std::string>(loss, "kind", "mean-squared", "loss");
  if (kind == "mean-squared") return false;
  return optional_or<double>(loss, "lambda", 0.0, "loss") == 0.0;
}

LossModel loss_from_config(const RunConfig& config) {
  if (!config.root.contains("loss")) throw ConfigError("config: missing 'loss' block");
  const json& block = config.root.at("loss");
  validate_keys(block, {"kind", "dimension", "lambda", "data_radius", "domain_radius", "B"},
                "loss");
  const LossKind kind = loss_kind_from_string(require<std::string>(block, "kind", "loss"));
  const int d = require<int>(block, "dimension", "loss");
  const double data_radius = require<double>(block, "data_radius", "loss");
  const double domain_radius = optional_or<double>(block, "domain_radius", 1.0, "loss");
  const double lambda = optional_or<double>(block, "lambda", 0.0, "loss");
  const bool convex = convex_mode(config);

  LossModel loss;
  switch (kind) {
    case LossKind::MeanSquared:
      if (block.contains("lambda")) {
        throw ConfigError("mean-squared has fixed curvature; use ridge-regression for a "
                          "regularized quadratic");
      }
      loss = make_mean_squared(d, data_radius, domain_radius);
      if (convex) loss.strong_convexity_lambda = 0.0;
      break;
    case LossKind::Ridge:
      loss = make_ridge(d, lambda, data_radius, domain_radius);
      break;
    case LossKind::Logistic:
      loss = make_logistic(d, lambda, data_radius, domain_radius);
      break;
  }
  if (block.contains("B")) loss.minimizer_norm_bound_B = require<double>(block, "B", "loss");
  if (convex) {
    if (loss.strong_convexity_lambda != 0.0) {
      throw ConfigError("convex mode requires a loss declared with lambda = 0");
    }
    if (!loss.minimizer_norm_bound_B) throw ConfigError("convex mode requires 'B' in the loss block");
  }
  return loss;
}

PrivacyBudget budget_from_config(const RunConfig& config) {
  if (!config.root.contains("budget")) throw ConfigError("config: missing 'budget' block");
  const json& block = config.root.at("budget");
  validate_keys(block, {"epsilon", "delta", "m_budget", "seed"}, "budget");
  PrivacyBudget budget;
  budget.epsilon = require<double>(block, "epsilon", "budget");
  budget.delta = require<double>(block, "delta", "budget");
  budget.m_budget = require<long>(block, "m_budget", "budget");
  budget.seed = optional_or<std::uint64_t>(block, "seed", 0, "budget");
  if (config.seed_override) budget.seed = *config.seed_override;
  validate_budget(budget);
  return budget;
}

Distribution distribution_from_json(const json& block, const std::string& context) {
  validate_keys(block, {"kind", "p", "a", "b", "margin", "dimension", "n", "seed"}, context);
  const auto kind = require<std::string>(block, "kind", context);
  const int d = optional_or<int>(block, "dimension", 1, context);
  if (kind == "bernoulli") {
    return Distribution::bernoulli(require<double>(block, "p", context), d);
  }
  if (kind == "uniform") {
    return Distribution::uniform_interval(require<double>(block, "a", context),
                                          require<double>(block, "b", context), d);
  }
  if (kind == "gaussian-logistic") {
    return Distribution::gaussian_logistic(d, require<double>(block, "margin", context));
  }
  throw ConfigError(context + ": unknown synthetic kind '" + kind + "'");
}

Dataset dataset_from_config(const RunConfig& config, const LossModel& loss) {
  if (!config.root.contains("dataset")) throw ConfigError("config: missing 'dataset' block");
  const json& block = config.root.at("dataset");
  validate_keys(block, {"path", "synthetic"}, "dataset");
  if (block.contains("path") == block.contains("synthetic")) {
    throw ConfigError("dataset needs exactly one of 'path' or 'synthetic'");
  }
  if (block.contains("path")) {
    return read_dataset_csv(require<std::string>(block, "path", "dataset"), loss);
  }
  const json& synth = block.at("synthetic");
  const Distribution dist = distribution_from_json(synth, "dataset.synthetic");
  const long n = require<long>(synth, "n", "dataset.synthetic");
  const std::uint64_t seed = require<std::uint64_t>(synth, "seed", "dataset.synthetic");
  Dataset data = dist.sample_dataset(n, seed);
  for (const auto& z : data.instances) check_admissible(loss, z);
  return data;
}

std::string output_path(const RunConfig& config, const std::string& fallback) {
  if (config.out_override) return *config.out_override;
  return optional_or<std::string>(config.root, "output", fallback, "config");
}

DeleteRequest deletions_from_csv(const std::string& path, const LossModel& loss) {
  // a header-only deletions file is the empty comparison-arm request
  DeleteRequest request;
  Dataset rows = read_dataset_csv(path, loss, true);
  request.samples = std::move(rows.instances);
  return request;
}

// For convex mode the solved loss is the regularized one; lambda comes from
// the budget, exactly as learn_c chose it.
LossModel solved_loss(const RunConfig& config, const LossModel& base, long n,
                      const PrivacyBudget& budget) {
  if (!convex_mode(config)) return base;
  return regularize(base, select_lambda_convex(base, n, budget));
}

int cmd_train(const RunConfig& config) {
  const LossModel base = loss_from_config(config);
  const Dataset data = dataset_from_config(config, base);
  TrainedModel model;
  if (convex_mode(config)) {
    model = learn_c(base, data, budget_from_config(config));
  } else {
    model = learn_sc(base, data);
  }
  const std::string path = output_path(config, "model.json");
  save_model(model, path);
  std::cout << "n=" << model.n << " d=" << model.fingerprint.dimension
            << " tol=" << format_double(model.solve_tol)
            << " w_norm=" << format_double(model.w_hat.norm()) << "\n"
            << "model written to " << path << "\n";
  return kOk;
}

int cmd_unlearn(const RunConfig& config, const std::string& model_path,
                const std::string& deletions_path, bool include_audit_fields) {
  const LossModel base = loss_from_config(config);
  const TrainedModel model = load_model(model_path);
  const PrivacyBudget budget = budget_from_config(config);
  const DeleteRequest request = deletions_from_csv(deletions_path, base);
  UnlearnOutput out;
  if (convex_mode(config)) {
    out = unlearn_c(model, base, request, budget);
  } else {
    out = unlearn_sc(model, base, request, budget);
  }
  const std::string path = output_path(config, "unlearn_output.json");
  write_text_file(path, unlearn_output_to_json(out, budget.seed, include_audit_fields));
  std::cout << "m_used=" << out.m_used << " gamma=" << format_double(out.gamma)
            << " sigma=" << format_double(out.sigma) << "\n"
            << "output written to " << path << "\n";
  return kOk;
}

int cmd_retrain(const RunConfig& config, const std::string& model_path,
                const std::string& deletions_path) {
  const LossModel base = loss_from_config(config);
  const Dataset data = dataset_from_config(config, base);
  const TrainedModel original = load_model(model_path);
  const LossModel loss = convex_mode(config)
                             ? solved_loss(config, base, original.n, budget_from_config(config))
                             : base;
  if (!(original.fingerprint == fingerprint_of(loss))) {
    throw DataError("model fingerprint does not match the configured loss");
  }
  const DeleteRequest request = deletions_from_csv(deletions_path, base);
  const TrainedModel retrained = retrain_oracle(loss, data, request);
  const std::string path = output_path(config, "retrained_model.json");
  save_model(retrained, path);
  std::cout << "retrained on n=" << retrained.n << " samples\n"
            << "model written to " << path << "\n";
  return kOk;
}

nlohmann::ordered_json check_to_json(const BoundCheck& check) {
  nlohmann::ordered_json entry;
  entry["name"] = check.name;
  entry["measured"] = check.measured;
  entry["bound"] = check.bound;
  entry["slack"] = check.slack;
  entry["pass"] = check.pass;
  return entry;
}

int cmd_audit(const RunConfig& config) {
  const LossModel base = loss_from_config(config);
  const Dataset data = dataset_from_config(config, base);
  const PrivacyBudget budget = budget_from_config(config);
  const LossModel loss = solved_loss(config, base, data.size(), budget);

  const json& block =
      config.root.contains("audit") ? config.root.at("audit") : json::object();
  validate_keys(block, {"m", "seed"}, "audit");
  const long m = optional_or<long>(block, "m", budget.m_budget, "audit");
  std::uint64_t seed = optional_or<std::uint64_t>(block, "seed", 0, "audit");
  if (config.seed_override) seed = *config.seed_override;
  if (m > budget.m_budget) throw BudgetError("audit deletion count exceeds m_budget");
  if (m >= data.size()) throw DataError("audit deletion count must be smaller than n");

  // random deletions without replacement
  Rng rng(seed);
  std::vector<long> indices(static_cast<size_t>(data.size()));
  for (size_t i = 0; i < indices.size(); ++i) indices[i] = static_cast<long>(i);
  DeleteRequest request;
  for (long i = 0; i < m; ++i) {
    const long j = i + static_cast<long>(rng.below(static_cast<std::uint64_t>(data.size() - i)));
    std::swap(indices[static_cast<size_t>(i)], indices[static_cast<size_t>(j)]);
    request.samples.push_back(data.instances[static_cast<size_t>(indices[static_cast<size_t>(i)])]);
  }

  const BoundCheck sensitivity = sensitivity_check(loss, data, request);
  const BoundCheck drift = drift_check(loss, data, request);
  const NoiseScale scale = noise_scale(loss, data.size(), budget);
  const BoundCheck privacy = privacy_audit(sensitivity.measured, budget, scale.sigma);

  nlohmann::ordered_json report;
  report["n"] = data.size();
  report["m"] = m;
  report["checks"] = nlohmann::ordered_json::array(
      {check_to_json(sensitivity), check_to_json(drift), check_to_json(privacy)});
  bool all_pass = sensitivity.pass && drift.pass && privacy.pass;
  if (convex_mode(config)) {
    const TrainedModel model = learn_sc(loss, data);
    const BoundCheck norm = make_bound_check("norm-bound", model.w_hat.norm(),
                                             base.lipschitz_L / (loss.strong_convexity_lambda -
                                                                 base.strong_convexity_lambda),
                                             1e-6);
    report["checks"].push_back(check_to_json(norm));
    all_pass = all_pass && norm.pass;
  }
  report["all_pass"] = all_pass;

  const std::string path = output_path(config, "audit_report.json");
  write_text_file(path, report.dump(2) + "\n");
  for (const auto& entry : report["checks"]) {
    std::cout << entry["name"].get<std::string>() << ": "
              << (entry["pass"].get<bool>() ? "pass" : "FAIL") << "\n";
  }
  std::cout << "report written to " << path << "\n";
  return all_pass ? kOk : kDataError;
}

template <typename T>
std::vector<T> list_of(const json& block, const std::string& key, const std::string& context) {
  if (!block.contains(key)) throw ConfigError(context + ": missing list '" + key + "'");
  const json& value = block.at(key);
  std::vector<T> out;
  if (value.is_array()) {
    for (const auto& x : value) out.push_back(x.get<T>());
  } else {
    out.push_back(value.get<T>());
  }
  if (out.empty()) throw ConfigError(context + ": list '" + key + "' is empty");
  return out;
}

int cmd_capacity(const RunConfig& config) {
  if (!config.root.contains("capacity")) throw ConfigError("config: missing 'capacity' block");
  const json& block = config.root.at("capacity");
  validate_keys(block, {"d", "n", "epsilon", "delta", "c_unlearn", "c_dp"}, "capacity");
  const auto ds = list_of<long>(block, "d", "capacity");
  const auto ns = list_of<long>(block, "n", "capacity");
  const auto epsilons = list_of<double>(block, "epsilon", "capacity");
  const auto deltas = list_of<double>(block, "delta", "capacity");
  const double c_unlearn = optional_or<double>(block, "c_unlearn", 1.0, "capacity");
  const double c_dp = optional_or<double>(block, "c_dp", 1.0, "capacity");

  std::string csv = "d,n,epsilon,delta,m_unlearn,m_dp,ratio\n";
  for (const long d : ds) {
    for (const long n : ns) {
      for (const double epsilon : epsilons) {
        for (const double delta : deltas) {
          CapacityInputs inputs{d, n, epsilon, delta, c_unlearn, c_dp};
          const CapacityReport report = capacity_report(inputs);
          if (dp_lower_bound_regime(d, n, epsilon)) {
            std::cerr << "warning: d=" << d << " n=" << n
                      << " is in the regime n <= sqrt(d)/epsilon where DP-based "
                         "unlearning cannot delete a single sample\n";
          }
          csv += std::to_string(d) + "," + std::to_string(n) + "," + format_double(epsilon) +
                 "," + format_double(delta) + "," + format_double(report.m_unlearn) + "," +
                 format_double(report.m_dp) + "," + format_double(report.ratio) + "\n";
        }
      }
    }
  }
  const std::string path = output_path(config, "capacity.csv");
  write_text_file(path, csv);
  std::cout << "capacity table written to " << path << "\n";
  return kOk;
}

int cmd_demo(const RunConfig& config) {
  if (!config.root.contains("demo")) throw ConfigError("config: missing 'demo' block");
  const json& block = config.root.at("demo");
  validate_keys(block, {"n", "m", "seeds", "seed"}, "demo");
  const long n = require<long>(block, "n", "demo");
  const long m = require<long>(block, "m", "demo");
  const long trials = optional_or<long>(block, "seeds", 200, "demo");
  std::uint64_t base_seed = optional_or<std::uint64_t>(block, "seed", 1, "demo");
  if (config.seed_override) base_seed = *config.seed_override;
  if (trials < 1) throw ConfigError("demo: seeds must be >= 1");

  double adv_mean = 0.0, adv_excess = 0.0, adv_m2 = 0.0;
  double rnd_mean = 0.0, rnd_excess = 0.0, rnd_m2 = 0.0;
  for (long i = 0; i < trials; ++i) {
    const PopulationDemoReport report = population_risk_demo(n, m, derived_seed(base_seed, i));
    const double t = static_cast<double>(i + 1);
    double delta = report.adversarial.excess_risk - adv_excess;
    adv_excess += delta / t;
    adv_m2 += delta * (report.adversarial.excess_risk - adv_excess);
    adv_mean += (report.adversarial.mean_exact - adv_mean) / t;
    delta = report.random_arm.excess_risk - rnd_excess;
    rnd_excess += delta / t;
    rnd_m2 += delta * (report.random_arm.excess_risk - rnd_excess);
    rnd_mean += (report.random_arm.mean_exact - rnd_mean) / t;
  }
  const double denom = trials > 1 ? static_cast<double>(trials - 1) * trials : 1.0;
  const double adv_se = std::sqrt(adv_m2 / denom);
  const double rnd_se = std::sqrt(rnd_m2 / denom);

  std::string csv = "arm,n,m,mean_estimate,excess_risk,std_error\n";
  csv += "adversarial," + std::to_string(n) + "," + std::to_string(m) + "," +
         format_double(adv_mean) + "," + format_double(adv_excess) + "," +
         format_double(adv_se) + "\n";
  csv += "random," + std::to_string(n) + "," + std::to_string(m) + "," +
         format_double(rnd_mean) + "," + format_double(rnd_excess) + "," +
         format_double(rnd_se) + "\n";
  const std::string path = output_path(config, "demo.csv");
  write_text_file(path, csv);
  std::cout << "adversarial excess=" << format_double(adv_excess)
            << " random excess=" << format_double(rnd_excess) << "\n"
            << "demo table written to " << path << "\n";
  return kOk;
}

struct ExperimentCell {
  long d, n, m;
  double epsilon, delta;
  std::uint64_t seed;
};

int cmd_experiment(const RunConfig& config) {
  if (!config.root.contains("experiment")) throw ConfigError("config: missing 'experiment' block");
  const json& block = config.root.at("experiment");
  validate_keys(block,
                {"loss_kind", "lambda", "distribution", "d", "n", "m", "epsilon", "delta", "seed",
                 "mc_trials", "reference_n"},
                "experiment");
  const auto loss_kind = optional_or<std::string>(block, "loss_kind", "mean-squared", "experiment");
  const double lambda = optional_or<double>(block, "lambda", 1.0, "experiment");
  const auto dist_kind =
      optional_or<std::string>(block, "distribution", "bernoulli", "experiment");
  const auto ds = list_of<long>(block, "d", "experiment");
  const auto ns = list_of<long>(block, "n", "experiment");
  const auto ms = list_of<long>(block, "m", "experiment");
  const auto epsilons = list_of<double>(block, "epsilon", "experiment");
  const auto deltas = list_of<double>(block, "delta", "experiment");
  std::uint64_t base_seed = optional_or<std::uint64_t>(block, "seed", 1, "experiment");
  if (config.seed_override) base_seed = *config.seed_override;
  const long mc_trials = optional_or<long>(block, "mc_trials", 20000, "experiment");
  const long reference_n = optional_or<long>(block, "reference_n", 20000, "experiment");

  // loss+distribution per sweep dimension; per-coordinate radii scale the
  // certified ball by sqrt(d)
  const auto build_cell = [&](long d) -> std::pair<LossModel, Distribution> {
    const double root_d = std::sqrt(static_cast<double>(d));
    if (dist_kind == "bernoulli") {
      if (loss_kind != "mean-squared") {
        throw ConfigError("experiment: bernoulli sweeps use the mean-squared loss");
      }
      return {make_mean_squared(static_cast<int>(d), root_d, root_d),
              Distribution::bernoulli(0.5, static_cast<int>(d))};
    }
    if (dist_kind == "gaussian-logistic") {
      if (loss_kind != "regularized-logistic") {
        throw ConfigError("experiment: gaussian-logistic sweeps use the regularized-logistic loss");
      }
      if (lambda <= 0.0) throw ConfigError("experiment: logistic sweeps need lambda > 0");
      const double domain = std::max(1.0, 1.0 / lambda);
      return {make_logistic(static_cast<int>(d), lambda, 1.0, domain),
              Distribution::gaussian_logistic(static_cast<int>(d), 2.0)};
    }
    throw ConfigError("experiment: unknown distribution '" + dist_kind + "'");
  };

  // reference optimum for distributions without a closed form, one per d
  std::vector<std::optional<double>> f_star_by_d(ds.size());
  for (size_t i = 0; i < ds.size(); ++i) {
    const auto [loss, dist] = build_cell(ds[i]);
    if (dist.analytic_optimum()) continue;
    const std::uint64_t ref_seed = base_seed + 1000000 + static_cast<std::uint64_t>(ds[i]);
    const Dataset reference = dist.sample_dataset(reference_n, ref_seed);
    const TrainedModel ref_model = learn_sc(loss, reference);
    Rng rng(ref_seed + 1);
    double mean = 0.0;
    for (long t = 0; t < mc_trials; ++t) {
      mean += (evaluate(loss, ref_model.w_hat, dist.sample(rng)) - mean) / static_cast<double>(t + 1);
    }
    f_star_by_d[i] = mean;
  }

  std::vector<ExperimentCell> cells;
  std::vector<size_t> cell_d_index;
  std::uint64_t index = 0;
  for (size_t di = 0; di < ds.size(); ++di) {
    for (const long n : ns) {
      for (const long m : ms) {
        for (const double epsilon : epsilons) {
          for (const double delta : deltas) {
            cells.push_back({ds[di], n, m, epsilon, delta, base_seed + 4 * index});
            cell_d_index.push_back(di);
            ++index;
          }
        }
      }
    }
  }

  std::vector<std::string> rows(cells.size());
  std::atomic<size_t> next{0};
  const auto worker = [&]() {
    while (true) {
      const size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      const ExperimentCell& cell = cells[i];
      const auto [loss, dist] = build_cell(cell.d);
      if (cell.m >= cell.n) throw ConfigError("experiment: m must be smaller than n");

      const Dataset data = dist.sample_dataset(cell.n, cell.seed);
      const TrainedModel model = learn_sc(loss, data);

      Rng pick(cell.seed + 1);
      std::vector<long> indices(static_cast<size_t>(cell.n));
      for (size_t k = 0; k < indices.size(); ++k) indices[k] = static_cast<long>(k);
      DeleteRequest request;
      for (long k = 0; k < cell.m; ++k) {
        const long j =
            k + static_cast<long>(pick.below(static_cast<std::uint64_t>(cell.n - k)));
        std::swap(indices[static_cast<size_t>(k)], indices[static_cast<size_t>(j)]);
        request.samples.push_back(data.instances[static_cast<size_t>(indices[static_cast<size_t>(k)])]);
      }

      PrivacyBudget budget{cell.epsilon, cell.delta, cell.m, cell.seed + 2};
      const UnlearnOutput out = unlearn_sc(model, loss, request, budget);
      const TrainedModel retrained = retrain_oracle(loss, data, request);

      const std::optional<double> f_star = f_star_by_d[cell_d_index[i]];
      const auto risk_of = [&](const Vector& w, std::uint64_t mc_seed) {
        return excess_risk_mc(loss, dist, w, mc_trials, mc_seed, f_star).estimate;
      };
      const double excess_learn = risk_of(model.w_hat, cell.seed + 3);
      const double excess_unlearn = risk_of(out.w_tilde, cell.seed + 3);
      const double excess_retrain = risk_of(retrained.w_hat, cell.seed + 3);

      const double mm = static_cast<double>(cell.m);
      const double nn = static_cast<double>(cell.n);
      const double lam = loss.strong_convexity_lambda;
      const double sensitivity_bound = 2.0 * loss.hessian_lipschitz_M * loss.lipschitz_L *
                                       loss.lipschitz_L * mm * mm / (lam * lam * lam * nn * nn);
      const double sensitivity_measured = (retrained.w_hat - out.w_bar).norm();

      rows[i] = std::to_string(cell.d) + "," + std::to_string(cell.n) + "," +
                std::to_string(cell.m) + "," + format_double(cell.epsilon) + "," +
                format_double(cell.delta) + "," + std::to_string(cell.seed) + "," +
                format_double(excess_learn) + "," + format_double(excess_unlearn) + "," +
                format_double(excess_retrain) + "," + format_double(out.gamma) + "," +
                format_double(out.sigma) + "," + format_double(sensitivity_measured) + "," +
                format_double(sensitivity_bound);
    }
  };

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const size_t n_threads = std::min<size_t>(hw, cells.size());
  std::vector<std::thread> threads;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  for (size_t t = 0; t < n_threads; ++t) {
    threads.emplace_back([&]() {
      try {
        worker();
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);

  std::string csv =
      "d,n,m,epsilon,delta,seed,excess_learn,excess_unlearn,excess_retrain,gamma,sigma,"
      "sensitivity_measured,sensitivity_bound\n";
  for (const auto& row : rows) csv += row + "\n";
  const std::string path = output_path(config, "experiment.csv");
  write_text_file(path, csv);
  std::cout << cells.size() << " cells written to " << path << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"certified unlearning for convex empirical risk minimization"};
  app.require_subcommand(1);

  std::string config_path;
  std::string model_path;
  std::string deletions_path;
  std::string out_path;
  std::uint64_t seed_value = 0;
  bool audit_fields = false;

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON run configuration")->required();
    cmd->add_option("--out", out_path, "output path (overrides config)");
    cmd->add_option("--seed", seed_value, "seed override");
  };

  CLI::App* train = app.add_subcommand("train", "fit a model and store its statistic");
  add_common(train);
  CLI::App* unlearn_cmd = app.add_subcommand("unlearn", "apply a delete request to a model");
  add_common(unlearn_cmd);
  unlearn_cmd->add_option("--model", model_path, "trained model file")->required();
  unlearn_cmd->add_option("--deletions", deletions_path, "CSV of samples to delete")->required();
  unlearn_cmd->add_flag("--audit", audit_fields, "include the pre-noise point in the output");
  CLI::App* retrain = app.add_subcommand("retrain", "retrain from scratch without the deletions");
  add_common(retrain);
  retrain->add_option("--model", model_path, "trained model file")->required();
  retrain->add_option("--deletions", deletions_path, "CSV of samples to delete")->required();
  CLI::App* audit = app.add_subcommand("audit", "run the bound checks on one instance");
  add_common(audit);
  CLI::App* capacity = app.add_subcommand("capacity", "deletion-capacity sweep table");
  add_common(capacity);
  CLI::App* demo =
      app.add_subcommand("demo-population-risk", "adversarial vs random deletion demo");
  add_common(demo);
  CLI::App* experiment = app.add_subcommand("experiment", "grid sweep with excess-risk estimates");
  add_common(experiment);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    RunConfig config;
    config.root = load_config(config_path);
    for (const auto* cmd : {train, unlearn_cmd, retrain, audit, capacity, demo, experiment}) {
      if (cmd->parsed()) {
        if (cmd->count("--seed") > 0) config.seed_override = seed_value;
        if (cmd->count("--out") > 0) config.out_override = out_path;
      }
    }
    if (train->parsed()) return cmd_train(config);
    if (unlearn_cmd->parsed()) return cmd_unlearn(config, model_path, deletions_path, audit_fields);
    if (retrain->parsed()) return cmd_retrain(config, model_path, deletions_path);
    if (audit->parsed()) return cmd_audit(config);
    if (capacity->parsed()) return cmd_capacity(config);
    if (demo->parsed()) return cmd_demo(config);
    if (experiment->parsed()) return cmd_experiment(config);
    return kConfigError;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const BudgetError& e) {
    std::cerr << "budget error: " << e.what() << "\n";
    return kBudgetError;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kSolverError;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kDataError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInternalError;
  }
}
