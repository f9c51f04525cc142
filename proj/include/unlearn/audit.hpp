#pragma once

#include <string>

#include "unlearn/distributions.hpp"
#include "unlearn/removal.hpp"
#include "unlearn/types.hpp"

namespace unlearn {

struct BoundCheck {
  std::string name;
  double measured = 0.0;
  double bound = 0.0;
  double slack = 0.0;
  bool pass = false;
};

inline BoundCheck make_bound_check(std::string name, double measured, double bound, double slack) {
  BoundCheck check;
  check.name = std::move(name);
  check.measured = measured;
  check.bound = bound;
  check.slack = slack;
  check.pass = measured <= bound + slack;
  return check;
}

/// data minus one occurrence of each requested sample; DataError if any
/// sample is missing (multiset semantics).
Dataset remove_multiset(const Dataset& data, const DeleteRequest& request);

/// Retrains from scratch on S \ U under the same (already regularized, if
/// convex-mode) loss. The ground truth every unlearning bound is checked
/// against.
TrainedModel retrain_oracle(const LossModel& loss, const Dataset& data,
                            const DeleteRequest& request);

/// ||retrain(S\U) - newton point|| against 2 M L^2 m^2 / (lambda^3 n^2),
/// with slack 2 tol/lambda per solved arm.
BoundCheck sensitivity_check(const LossModel& loss, const Dataset& data,
                             const DeleteRequest& request);

/// ||w_hat - retrain(S\U)|| against 2 m L / (lambda n), same slack.
BoundCheck drift_check(const LossModel& loss, const Dataset& data, const DeleteRequest& request);

/// Analytic Gaussian-mechanism certificate: the released pair satisfies the
/// (eps, delta) indistinguishability definition iff sigma covers the
/// measured shift, i.e. sigma >= (gamma_measured/eps) sqrt(2 ln(1.25/delta)).
BoundCheck privacy_audit(double gamma_measured, const PrivacyBudget& budget, double sigma);

struct RiskEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

/// Monte-Carlo excess population risk of w over fresh draws from dist,
/// relative to the distribution's analytic optimum (or a supplied reference
/// value when there is none).
RiskEstimate excess_risk_mc(const LossModel& loss, const Distribution& dist, const Vector& w,
                            long trials, std::uint64_t seed,
                            std::optional<double> f_star_reference = std::nullopt);

/// Density-ratio deleter: removes z with probability [d1(z) - d2(z)]_+ / d1(z),
/// scanning the data in order and stopping after m_max deletions.
DeleteRequest adversarial_delete(const Dataset& data, const Distribution& d1,
                                 const Distribution& d2, long m_max, std::uint64_t seed);

/// Mean-estimation renormalization update: n/(n-m) (w_hat - (1/n) sum_U z).
/// Exactly the retrained mean; exact unlearning of the empirical objective.
Vector exact_mean_unlearn(const Vector& w_hat, long n, const DeleteRequest& request);

struct DemoArm {
  double mean_exact = 0.0;    // renormalized-mean estimator
  double mean_retrain = 0.0;  // retrain-from-scratch estimator
  double excess_risk = 0.0;   // analytic (w - 1/2)^2 at the exact-mean point
};

/// One draw of the population-vs-empirical demonstration: S ~ Bernoulli(1/2)^n,
/// then m deletions chosen adversarially (all ones) vs uniformly at random.
struct PopulationDemoReport {
  long n = 0;
  long m = 0;
  long ones = 0;
  DemoArm adversarial;
  DemoArm random_arm;
  double baseline_excess = 0.0;  // before any deletion
  double gap_ratio = 0.0;        // adversarial excess / random excess
};

PopulationDemoReport population_risk_demo(long n, long m, std::uint64_t seed);

}  // namespace unlearn
