// Acceptance suite: runs every release criterion at its stated tolerance and
// prints one pass/fail line per criterion. Exits nonzero if any fail.

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "test_support.hpp"
#include "unlearn/audit.hpp"
#include "unlearn/capacity.hpp"
#include "unlearn/distributions.hpp"
#include "unlearn/model_io.hpp"
#include "unlearn/removal.hpp"

using namespace unlearn;
using namespace unlearn::testing;

namespace {

namespace fs = std::filesystem;

struct CriterionResult {
  bool pass = false;
  std::string detail;
};

// ---------------------------------------------------------------------------
// 1. Exact unlearning for quadratic losses (M = 0)
CriterionResult exact_unlearning_quadratic() {
  Rng rng(101);
  double worst_newton = 0.0;
  double worst_mean = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 1 + static_cast<int>(rng.below(20));
    const long n = 50 + static_cast<long>(rng.below(951));
    const long m = static_cast<long>(rng.below(static_cast<std::uint64_t>(n / 10 + 1)));
    const bool mean_kind = trial % 2 == 0;
    const LossModel loss = mean_kind ? make_mean_squared(d, 1.0, 1.0)
                                     : make_ridge(d, 0.5 + rng.uniform(), 1.0, 1.0);
    const Dataset data = random_dataset(rng, loss, n);
    const TrainedModel model = learn_sc(loss, data);
    const DeleteRequest request = random_request(rng, data, m);
    const Vector newton = newton_unlearn_point(model, loss, request);
    const TrainedModel retrained = retrain_oracle(loss, data, request);
    worst_newton = std::max(worst_newton, (newton - retrained.w_hat).norm());
    if (mean_kind) {
      const Vector renormalized = exact_mean_unlearn(model.w_hat, n, request);
      worst_mean = std::max(worst_mean, (renormalized - retrained.w_hat).norm());
    }
  }
  CriterionResult result;
  result.pass = worst_newton <= 1e-8 && worst_mean <= 1e-10;
  std::ostringstream detail;
  detail << "max |newton - retrain| = " << worst_newton << " (<= 1e-8), max |renorm - retrain| = "
         << worst_mean << " (<= 1e-10) over 100 instances";
  result.detail = detail.str();
  return result;
}

// shared instance suite for criteria 2 and 3
struct LogisticInstance {
  LossModel loss;
  Dataset data;
  DeleteRequest request;
};

std::vector<LogisticInstance> logistic_suite() {
  const int dims[] = {2, 10, 50};
  const long sizes[] = {200, 500, 2000};
  const double lambdas[] = {0.5, 1.0, 1.5};
  std::vector<LogisticInstance> suite;
  Rng rng(202);
  for (int i = 0; i < 100; ++i) {
    const int d = dims[i % 3];
    const long n = sizes[(i / 3) % 3];
    const double lambda = lambdas[(i / 9) % 3];
    LogisticInstance instance{
        make_logistic(d, lambda, 1.0, std::max(1.0, 1.0 / lambda)),
        Distribution::gaussian_logistic(d, 1.5).sample_dataset(n, derived_seed(5000, i)),
        {},
    };
    const long m = (i == 0) ? 0 : 1 + static_cast<long>(rng.below(static_cast<std::uint64_t>(n / 10)));
    instance.request = random_request(rng, instance.data, m);
    suite.push_back(std::move(instance));
  }
  return suite;
}

CriterionResult bound_suite(const std::vector<LogisticInstance>& suite, bool sensitivity) {
  int violations = 0;
  double worst_margin = -1e300;  // measured - (bound + slack), most positive is worst
  for (const auto& instance : suite) {
    const BoundCheck check = sensitivity
                                 ? sensitivity_check(instance.loss, instance.data, instance.request)
                                 : drift_check(instance.loss, instance.data, instance.request);
    if (!check.pass) ++violations;
    worst_margin = std::max(worst_margin, check.measured - (check.bound + check.slack));
  }
  CriterionResult result;
  result.pass = violations == 0;
  std::ostringstream detail;
  detail << violations << " violations over " << suite.size()
         << " logistic instances (worst measured-minus-allowed = " << worst_margin << ")";
  result.detail = detail.str();
  return result;
}

// ---------------------------------------------------------------------------
// 4. ERM learning guarantee on mean estimation
CriterionResult learning_guarantee() {
  const LossModel loss = make_mean_squared(1, 1.0, 1.0);
  const long n = 100;
  const double bound =
      4.0 * loss.lipschitz_L * loss.lipschitz_L / (loss.strong_convexity_lambda * n);
  const Distribution dist = Distribution::bernoulli(0.5, 1);
  const int seeds = 1000;
  double mean = 0.0;
  double m2 = 0.0;
  for (int s = 0; s < seeds; ++s) {
    const Dataset data = dist.sample_dataset(n, derived_seed(40000, s));
    const TrainedModel model = learn_sc(loss, data);
    const double w = model.w_hat[0];
    const double excess = (w - 0.5) * (w - 0.5);  // analytic population risk gap
    const double delta = excess - mean;
    mean += delta / static_cast<double>(s + 1);
    m2 += delta * (excess - mean);
  }
  const double sem = std::sqrt(m2 / (seeds - 1) / seeds);
  CriterionResult result;
  result.pass = mean <= bound + 3.0 * sem;
  std::ostringstream detail;
  detail << "mean excess " << mean << " +- " << sem << " vs bound 4L^2/(lambda n) = " << bound;
  result.detail = detail.str();
  return result;
}

// ---------------------------------------------------------------------------
// 5. Noise calibration identity and the privacy audit
CriterionResult calibration_identity() {
  const LossModel loss = make_logistic(4, 1.0, 1.0, 1.0);
  const Dataset data = Distribution::gaussian_logistic(4, 1.5).sample_dataset(300, 777);
  const TrainedModel model = learn_sc(loss, data);
  Rng rng(505);
  bool ok = true;
  std::ostringstream detail;
  double worst_rel = 0.0;
  for (int trial = 0; trial < 25; ++trial) {
    PrivacyBudget budget;
    budget.epsilon = 0.05 + 0.95 * rng.uniform();
    budget.delta = std::pow(10.0, -1.0 - 5.0 * rng.uniform());
    budget.m_budget = 1 + static_cast<long>(rng.below(20));
    budget.seed = derived_seed(606, trial);
    const DeleteRequest request =
        random_request(rng, data, std::min<long>(budget.m_budget, 5));
    const UnlearnOutput out = unlearn_sc(model, loss, request, budget);

    const double target = std::sqrt(2.0 * std::log(1.25 / budget.delta));
    const double rel = std::abs(out.sigma * budget.epsilon / out.gamma - target) / target;
    worst_rel = std::max(worst_rel, rel);
    if (rel > 1e-12) ok = false;

    const BoundCheck audit = privacy_audit(out.gamma, budget, out.sigma);
    if (!audit.pass) ok = false;
    const BoundCheck undersized = privacy_audit(out.gamma, budget, out.sigma / 2.0);
    if (undersized.pass) ok = false;
  }
  detail << "worst relative identity error " << worst_rel
         << " over 25 outputs; calibrated sigma passes the audit, sigma/2 fails";
  return {ok, detail.str()};
}

// ---------------------------------------------------------------------------
// 6. Population-risk separation demo
CriterionResult separation_demo() {
  const int seeds = 200;
  double adv_sum = 0.0;
  double rnd_sum = 0.0;
  int above_threshold = 0;
  for (int s = 0; s < seeds; ++s) {
    const PopulationDemoReport report = population_risk_demo(1000, 200, derived_seed(1, s));
    adv_sum += report.adversarial.excess_risk;
    rnd_sum += report.random_arm.excess_risk;
    if (report.adversarial.excess_risk > 0.01) ++above_threshold;
  }
  const double adv_mean = adv_sum / seeds;
  const double rnd_mean = rnd_sum / seeds;
  const bool mean_in_band = adv_mean >= 0.5 * 0.015625 && adv_mean <= 1.5 * 0.015625;
  const bool threshold_rate = above_threshold >= static_cast<int>(0.9 * seeds);
  const bool random_small = rnd_mean < 0.002;
  CriterionResult result;
  result.pass = mean_in_band && threshold_rate && random_small;
  std::ostringstream detail;
  detail << "adversarial mean excess " << adv_mean << " (target 0.015625 +-50%), > 0.01 in "
         << above_threshold << "/" << seeds << " seeds (need >= 180), random mean excess "
         << rnd_mean << " (< 0.002)";
  result.detail = detail.str();
  return result;
}

// ---------------------------------------------------------------------------
// 7. Capacity separation
CriterionResult capacity_separation() {
  const double delta = std::exp(-1.0);
  bool ok = true;
  double worst = 0.0;
  for (long d : {1L, 16L, 256L}) {
    const double q = separation_ratio(16 * d, 4096, 1.0, delta) /
                     separation_ratio(d, 4096, 1.0, delta);
    worst = std::max(worst, std::abs(q - 2.0));
    if (std::abs(q - 2.0) > 1e-12) ok = false;
  }
  const double spot = separation_ratio(16, 10000, 1.0, delta);
  const double expected = 2.0 * std::sqrt(2.0);
  if (std::abs(spot - expected) > 1e-6) ok = false;
  std::ostringstream detail;
  detail << "ratio(16d)/ratio(d) within " << worst << " of 2; spot ratio " << spot << " vs 2*sqrt(2)";
  return {ok, detail.str()};
}

// ---------------------------------------------------------------------------
// 8. Convex wrapper: norm bound and lambda formulas
CriterionResult convex_wrapper() {
  Rng rng(808);
  bool ok = true;
  double worst_norm_margin = -1e300;
  double worst_lambda_rel = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const bool logistic = trial % 2 == 0;
    const int d = 1 + static_cast<int>(rng.below(8));
    const long n = 50 + static_cast<long>(rng.below(451));
    const double B = 0.5 + 1.5 * rng.uniform();
    const LossModel base = logistic ? make_logistic_convex(d, 1.0, 1.0, B)
                                    : make_mean_squared_convex(d, 1.0, 1.0, B);
    PrivacyBudget budget;
    budget.epsilon = 0.1 + 0.9 * rng.uniform();
    budget.delta = 1e-4;
    budget.m_budget = (trial % 5 == 0) ? 0 : static_cast<long>(1 + rng.below(static_cast<std::uint64_t>(n / 10)));
    budget.seed = derived_seed(809, trial);
    const Dataset data = logistic
                             ? Distribution::gaussian_logistic(d, 1.5).sample_dataset(
                                   n, derived_seed(8100, trial))
                             : Distribution::uniform_interval(-1.0 / std::sqrt(d), 1.0 / std::sqrt(d), d)
                                   .sample_dataset(n, derived_seed(8100, trial));

    const double lambda = select_lambda_convex(base, n, budget);
    // independent recomputation of the selection formula
    const double L = base.lipschitz_L;
    double expected;
    if (budget.m_budget == 0) {
      expected = L / (B * std::sqrt(static_cast<double>(n)));
    } else {
      const double m = static_cast<double>(budget.m_budget);
      const double nn = static_cast<double>(n);
      const double a = (L / B) * std::sqrt(m / nn);
      const double b = std::pow(std::sqrt(static_cast<double>(d)) * base.hessian_lipschitz_M *
                                    m * m * L * L * L * std::sqrt(std::log(1.0 / budget.delta)) /
                                    (B * B * nn * nn * budget.epsilon),
                                0.25);
      expected = std::max(a, b);
    }
    const double rel = std::abs(lambda - expected) / expected;
    worst_lambda_rel = std::max(worst_lambda_rel, rel);
    if (rel > 1e-12) ok = false;

    const TrainedModel model = learn_c(base, data, budget);
    const double margin = model.w_hat.norm() - (base.lipschitz_L / lambda + 1e-6);
    worst_norm_margin = std::max(worst_norm_margin, margin);
    if (margin > 0.0) ok = false;
  }
  std::ostringstream detail;
  detail << "50 instances: worst ||w|| minus allowed " << worst_norm_margin
         << ", worst lambda relative error " << worst_lambda_rel;
  return {ok, detail.str()};
}

// ---------------------------------------------------------------------------
// 9. Adversary calibration on the shifted-uniform pair
CriterionResult adversary_calibration() {
  const double alpha = 0.1;
  const long n = 5000;
  const auto pair = make_shifted_uniform_pair(alpha);
  const long cap = static_cast<long>(2.0 * n * alpha);
  long deleted = 0;
  long total = 0;
  for (int s = 0; s < 100; ++s) {
    const Dataset data = pair.d1.sample_dataset(n, derived_seed(91000, s));
    deleted += adversarial_delete(data, pair.d1, pair.d2, cap, derived_seed(92000, s)).count();
    total += n;
  }
  const double rate = static_cast<double>(deleted) / static_cast<double>(total);
  const double expected = alpha / 2.0;
  const double sd = std::sqrt(expected * (1.0 - expected) / static_cast<double>(total));
  CriterionResult result;
  result.pass = std::abs(rate - expected) <= 3.0 * sd;
  std::ostringstream detail;
  detail << "per-sample deletion rate " << rate << " vs alpha/2 = " << expected << " +- "
         << 3.0 * sd;
  result.detail = detail.str();
  return result;
}

// ---------------------------------------------------------------------------
// 10. CLI determinism, byte for byte, for every subcommand
struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("unlearn_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

CriterionResult cli_determinism() {
  const char* cli = std::getenv("UNLEARN_CLI");
  if (cli == nullptr) {
    return {false, "UNLEARN_CLI is not set; cannot exercise the binary"};
  }
  TempDir dir;
  const std::string data = dir.file("data.csv");
  write_file(data, "x1\n0\n1\n1\n0\n1\n");
  const std::string deletions = dir.file("deletions.csv");
  write_file(deletions, "x1\n1\n");
  const std::string config = dir.file("config.json");
  write_file(config, std::string(R"({
  "loss": {"kind": "mean-squared", "dimension": 1, "data_radius": 1.0, "domain_radius": 1.0},
  "dataset": {"path": ")") + data + R"("},
  "budget": {"epsilon": 1.0, "delta": 1e-5, "m_budget": 2, "seed": 42},
  "capacity": {"d": [16, 256], "n": [10000], "epsilon": [1.0], "delta": [1e-4]},
  "demo": {"n": 400, "m": 60, "seeds": 25, "seed": 3},
  "audit": {"m": 1, "seed": 5},
  "experiment": {"d": [1, 2], "n": [150], "m": [4], "epsilon": [1.0], "delta": [1e-4],
                 "seed": 3, "mc_trials": 1000}
})");

  const std::string model = dir.file("model.json");
  const auto run = [&](const std::string& args, const std::string& out) {
    const std::string command =
        std::string(cli) + " " + args + " --out " + out + " > /dev/null 2>&1";
    return WEXITSTATUS(std::system(command.c_str()));
  };
  const auto slurp = [](const std::string& path) { return read_text_file(path); };

  struct Step {
    std::string name;
    std::string args;
  };
  if (run("train --config " + config, model) != 0) {
    return {false, "train failed; cannot continue"};
  }
  const std::vector<Step> steps = {
      {"train", "train --config " + config},
      {"unlearn", "unlearn --config " + config + " --model " + model + " --deletions " + deletions},
      {"retrain", "retrain --config " + config + " --model " + model + " --deletions " + deletions},
      {"audit", "audit --config " + config},
      {"capacity", "capacity --config " + config},
      {"demo-population-risk", "demo-population-risk --config " + config},
      {"experiment", "experiment --config " + config},
  };
  std::ostringstream detail;
  for (const auto& step : steps) {
    const std::string first = dir.file(step.name + "_1.out");
    const std::string second = dir.file(step.name + "_2.out");
    const int code1 = run(step.args, first);
    const int code2 = run(step.args, second);
    if (code1 != 0 || code2 != 0) {
      return {false, step.name + " exited with " + std::to_string(code1) + "/" +
                         std::to_string(code2)};
    }
    if (slurp(first) != slurp(second)) {
      return {false, step.name + " output differs between identical runs"};
    }
  }
  detail << steps.size() << " subcommands, byte-identical outputs on repeated runs";
  return {true, detail.str()};
}

}  // namespace

int main() {
  struct Entry {
    int id;
    std::string name;
    std::function<CriterionResult()> run;
    double budget_seconds;  // 0 = no stated budget
  };

  std::vector<LogisticInstance> suite;
  const std::vector<Entry> entries = {
      {1, "exact unlearning at M=0", exact_unlearning_quadratic, 30.0},
      {2, "sensitivity bound suite",
       [&]() {
         if (suite.empty()) suite = logistic_suite();
         return bound_suite(suite, true);
       },
       120.0},
      {3, "drift bound suite",
       [&]() {
         if (suite.empty()) suite = logistic_suite();
         return bound_suite(suite, false);
       },
       0.0},
      {4, "learning guarantee on mean estimation", learning_guarantee, 60.0},
      {5, "noise calibration identity", calibration_identity, 0.0},
      {6, "population-risk separation demo", separation_demo, 60.0},
      {7, "capacity separation", capacity_separation, 0.0},
      {8, "convex wrapper norm bound and lambda selection", convex_wrapper, 0.0},
      {9, "adversary calibration", adversary_calibration, 0.0},
      {10, "CLI determinism", cli_determinism, 0.0},
  };

  int failures = 0;
  for (const auto& entry : entries) {
    const auto start = std::chrono::steady_clock::now();
    CriterionResult result;
    try {
      result = entry.run();
    } catch (const std::exception& e) {
      result.pass = false;
      result.detail = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (entry.budget_seconds > 0.0 && seconds > entry.budget_seconds) {
      result.pass = false;
      result.detail += " [over the " + std::to_string(entry.budget_seconds) + "s budget]";
    }
    std::cout << (result.pass ? "[PASS]" : "[FAIL]") << " criterion " << entry.id << ": "
              << entry.name << " (" << result.detail << ") [" << seconds << "s]\n";
    if (!result.pass) ++failures;
  }
  if (failures > 0) {
    std::cout << failures << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all criteria passed\n";
  return 0;
}
