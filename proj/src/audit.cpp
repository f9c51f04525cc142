#include "unlearn/audit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "unlearn/solver.hpp"

namespace unlearn {

Dataset remove_multiset(const Dataset& data, const DeleteRequest& request) {
  if (request.count() >= data.size()) {
    throw DataError("delete request would empty the dataset");
  }
  std::vector<bool> removed(data.instances.size(), false);
  for (const auto& u : request.samples) {
    bool found = false;
    for (size_t i = 0; i < data.instances.size(); ++i) {
      if (!removed[i] && data.instances[i] == u) {
        removed[i] = true;
        found = true;
        break;
      }
    }
    if (!found) throw DataError("delete request contains a sample not present in the dataset");
  }
  std::vector<Instance> kept;
  kept.reserve(data.instances.size() - request.samples.size());
  for (size_t i = 0; i < data.instances.size(); ++i) {
    if (!removed[i]) kept.push_back(data.instances[i]);
  }
  return Dataset(std::move(kept));
}

TrainedModel retrain_oracle(const LossModel& loss, const Dataset& data,
                            const DeleteRequest& request) {
  return learn_sc(loss, remove_multiset(data, request));
}

BoundCheck sensitivity_check(const LossModel& loss, const Dataset& data,
                             const DeleteRequest& request) {
  const TrainedModel model = learn_sc(loss, data);
  const Vector newton_point = newton_unlearn_point(model, loss, request);
  const TrainedModel retrained = retrain_oracle(loss, data, request);

  const double m = static_cast<double>(request.count());
  const double n = static_cast<double>(data.size());
  const double lambda = loss.strong_convexity_lambda;
  const double L = loss.lipschitz_L;
  const double bound =
      2.0 * loss.hessian_lipschitz_M * L * L * m * m / (lambda * lambda * lambda * n * n);
  const double slack = 2.0 * model.solve_tol / lambda + 2.0 * retrained.solve_tol / lambda;
  return make_bound_check("sensitivity", (retrained.w_hat - newton_point).norm(), bound, slack);
}

BoundCheck drift_check(const LossModel& loss, const Dataset& data, const DeleteRequest& request) {
  const TrainedModel model = learn_sc(loss, data);
  const TrainedModel retrained = retrain_oracle(loss, data, request);

  const double m = static_cast<double>(request.count());
  const double n = static_cast<double>(data.size());
  const double bound =
      2.0 * m * loss.lipschitz_L / (loss.strong_convexity_lambda * n);
  const double slack = 2.0 * model.solve_tol / loss.strong_convexity_lambda +
                       2.0 * retrained.solve_tol / loss.strong_convexity_lambda;
  return make_bound_check("drift", (model.w_hat - retrained.w_hat).norm(), bound, slack);
}

BoundCheck privacy_audit(double gamma_measured, const PrivacyBudget& budget, double sigma) {
  validate_budget(budget);
  if (sigma < 0.0) throw ConfigError("sigma must be >= 0");
  if (gamma_measured < 0.0) throw ConfigError("measured sensitivity must be >= 0");
  const double required =
      (gamma_measured / budget.epsilon) * std::sqrt(2.0 * std::log(1.25 / budget.delta));
  return make_bound_check("privacy", required, sigma, 1e-12);
}

RiskEstimate excess_risk_mc(const LossModel& loss, const Distribution& dist, const Vector& w,
                            long trials, std::uint64_t seed,
                            std::optional<double> f_star_reference) {
  if (trials < 2) throw ConfigError("excess risk estimation needs at least 2 trials");
  double f_star = 0.0;
  if (dist.analytic_optimum()) {
    f_star = dist.analytic_optimum()->f_star;
  } else if (f_star_reference) {
    f_star = *f_star_reference;
  } else {
    throw ConfigError("distribution has no analytic optimum and no reference value was supplied");
  }

  Rng rng(seed);
  double mean = 0.0;
  double m2 = 0.0;
  for (long i = 0; i < trials; ++i) {
    const Instance z = dist.sample(rng);
    const double value = evaluate(loss, w, z);
    const double delta = value - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (value - mean);
  }
  RiskEstimate estimate;
  estimate.estimate = mean - f_star;
  estimate.std_error =
      std::sqrt(m2 / static_cast<double>(trials - 1) / static_cast<double>(trials));
  return estimate;
}

DeleteRequest adversarial_delete(const Dataset& data, const Distribution& d1,
                                 const Distribution& d2, long m_max, std::uint64_t seed) {
  if (m_max < 0) throw ConfigError("m_max must be >= 0");
  DeleteRequest request;
  Rng rng(seed);
  for (const auto& z : data.instances) {
    if (request.count() >= m_max) break;
    const double p1 = d1.density(z);
    if (p1 <= 0.0) {
      throw DataError("observed a sample with zero density under the source distribution");
    }
    const double p_delete = std::max(p1 - d2.density(z), 0.0) / p1;
    if (rng.uniform() < p_delete) request.samples.push_back(z);
  }
  return request;
}

Vector exact_mean_unlearn(const Vector& w_hat, long n, const DeleteRequest& request) {
  const long m = request.count();
  if (m >= n) throw DataError("cannot unlearn " + std::to_string(m) + " of " + std::to_string(n));
  Vector sum = Vector::Zero(w_hat.size());
  for (const auto& z : request.samples) {
    if (z.x.size() != w_hat.size()) throw DataError("deletion dimension mismatch");
    sum += z.x;
  }
  const double nn = static_cast<double>(n);
  return (nn / (nn - static_cast<double>(m))) * (w_hat - sum / nn);
}

PopulationDemoReport population_risk_demo(long n, long m, std::uint64_t seed) {
  if (n < 2 || m < 0 || m >= n) throw ConfigError("demo needs n >= 2 and 0 <= m < n");
  const Distribution source = Distribution::bernoulli(0.5, 1);
  const Dataset data = source.sample_dataset(n, seed);
  const LossModel loss = make_mean_squared(1, 1.0, 1.0);
  const TrainedModel base = learn_sc(loss, data);

  PopulationDemoReport report;
  report.n = n;
  report.m = m;
  for (const auto& z : data.instances) {
    if (z.x[0] == 1.0) ++report.ones;
  }
  if (report.ones < m) throw DataError("sample has fewer ones than the adversary wants to delete");

  const auto excess_of = [](double w) {
    return (w - 0.5) * (w - 0.5);
  };
  report.baseline_excess = excess_of(base.w_hat[0]);

  const auto run_arm = [&](const DeleteRequest& request) {
    DemoArm arm;
    arm.mean_exact = exact_mean_unlearn(base.w_hat, n, request)[0];
    arm.mean_retrain = retrain_oracle(loss, data, request).w_hat[0];
    arm.excess_risk = excess_of(arm.mean_exact);
    return arm;
  };

  // adversary: delete m points of value 1
  DeleteRequest adversarial;
  adversarial.samples.assign(static_cast<size_t>(m), Instance(Vector::Constant(1, 1.0)));
  report.adversarial = run_arm(adversarial);

  // reference: delete m points uniformly without replacement
  Rng rng(seed + 1);
  std::vector<long> indices(static_cast<size_t>(n));
  std::iota(indices.begin(), indices.end(), 0);
  for (long i = 0; i < m; ++i) {
    const long j = i + static_cast<long>(rng.below(static_cast<std::uint64_t>(n - i)));
    std::swap(indices[static_cast<size_t>(i)], indices[static_cast<size_t>(j)]);
  }
  DeleteRequest random_request;
  for (long i = 0; i < m; ++i) {
    random_request.samples.push_back(data.instances[static_cast<size_t>(indices[static_cast<size_t>(i)])]);
  }
  report.random_arm = run_arm(random_request);

  report.gap_ratio =
      report.adversarial.excess_risk / std::max(report.random_arm.excess_risk, 1e-300);
  return report;
}

}  // namespace unlearn
