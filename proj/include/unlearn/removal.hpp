#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "unlearn/loss.hpp"
#include "unlearn/solver.hpp"
#include "unlearn/types.hpp"

namespace unlearn {

/// Binds a trained model to the loss (and constants) it was trained under.
struct LossFingerprint {
  std::string kind;
  int dimension = 0;
  double lipschitz_L = 0.0;
  double strong_convexity_lambda = 0.0;
  double hessian_lipschitz_M = 0.0;
  std::optional<double> minimizer_norm_bound_B;
  double data_radius = 0.0;

  bool operator==(const LossFingerprint&) const = default;
};

LossFingerprint fingerprint_of(const LossModel& loss);

/// Everything the unlearner is allowed to keep: the trained point, the
/// O(d^2) Hessian statistic, and metadata. The training set itself is not
/// retained.
struct TrainedModel {
  Vector w_hat;
  Matrix hessian_stat;
  long n = 0;
  LossFingerprint fingerprint;
  double solve_tol = 0.0;
};

/// The samples to delete, by value. m = samples.size().
struct DeleteRequest {
  std::vector<Instance> samples;

  long count() const { return static_cast<long>(samples.size()); }
};

struct PrivacyBudget {
  double epsilon = 1.0;    // in (0, 1]
  double delta = 1e-6;     // in (0, 1)
  long m_budget = 0;       // max deletions the calibration covers
  std::uint64_t seed = 0;  // noise seed
};

struct NoiseScale {
  double gamma = 0.0;  // sensitivity bound the noise is calibrated to
  double sigma = 0.0;
};

struct UnlearnOutput {
  Vector w_tilde;  // released point
  Vector w_bar;    // pre-noise point, audit only
  double gamma = 0.0;
  double sigma = 0.0;
  long m_used = 0;
};

void validate_budget(const PrivacyBudget& budget);

/// Enforces the model invariants: consistent dimensions, n >= 1, symmetric
/// statistic with min eigenvalue >= lambda - 1e-8. Run on every model read
/// back from disk.
void validate_model(const TrainedModel& model);

/// Trains to the default tolerance and packages (w_hat, T(S)).
TrainedModel learn_sc(const LossModel& loss, const Dataset& data);

/// Hessian of the empirical loss over S \ U at w_hat, reconstructed from the
/// stored statistic: (n T(S) - sum_{z in U} hess f(w_hat, z)) / (n - m).
/// Strong convexity guarantees this is >= lambda I; a smaller eigenvalue
/// means the inputs are inconsistent and raises DataError.
Matrix assemble_deleted_hessian(const TrainedModel& model, const LossModel& loss,
                                const DeleteRequest& request);

/// w_bar = w_hat + (n-m)^{-1} H^{-1} sum_{z in U} grad f(w_hat, z), via one
/// SPD solve. Empty requests return w_hat unchanged.
Vector newton_unlearn_point(const TrainedModel& model, const LossModel& loss,
                            const DeleteRequest& request);

/// gamma = 2 M m^2 L^2 / (lambda^3 n^2) with m = m_budget, and
/// sigma = (gamma/epsilon) sqrt(2 ln(1.25/delta)).
NoiseScale noise_scale(const LossModel& loss, long n, const PrivacyBudget& budget);

/// The full removal mechanism: Newton point plus seeded Gaussian noise at
/// the budget-calibrated scale. sigma is set from m_budget, not |U|, so the
/// deletion arm and the empty-request comparison arm share one noise scale.
UnlearnOutput unlearn_sc(const TrainedModel& model, const LossModel& loss,
                         const DeleteRequest& request, const PrivacyBudget& budget);

/// Regularization weight for convex losses. With no deletion budget this is
/// the classical L/(B sqrt(n)); otherwise the max of (L/B) sqrt(m/n) and the
/// fourth root of sqrt(d) M m^2 L^3 sqrt(ln(1/delta)) / (B^2 n^2 epsilon).
double select_lambda_convex(const LossModel& loss, long n, const PrivacyBudget& budget);

/// Convex wrapper: picks lambda, trains on the regularized loss, and checks
/// the ||w_hat|| <= L/lambda guarantee.
TrainedModel learn_c(const LossModel& loss, const Dataset& data, const PrivacyBudget& budget);

/// Convex-wrapper unlearning; re-derives lambda from the budget and requires
/// the model fingerprint to match the regularized loss.
UnlearnOutput unlearn_c(const TrainedModel& model, const LossModel& base_loss,
                        const DeleteRequest& request, const PrivacyBudget& budget);

}  // namespace unlearn
