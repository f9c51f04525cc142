#include "unlearn/removal.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>

#include "unlearn/rng.hpp"

namespace unlearn {

namespace {

constexpr double kPsdTolerance = 1e-8;

void require_fingerprint(const TrainedModel& model, const LossModel& loss) {
  if (!(model.fingerprint == fingerprint_of(loss))) {
    throw DataError("model fingerprint does not match the supplied loss");
  }
}

void check_request(const TrainedModel& model, const LossModel& loss,
                   const DeleteRequest& request) {
  if (request.count() >= model.n) {
    throw DataError("cannot delete " + std::to_string(request.count()) + " of " +
                    std::to_string(model.n) + " training samples");
  }
  for (const auto& z : request.samples) check_admissible(loss, z);
}

}  // namespace

LossFingerprint fingerprint_of(const LossModel& loss) {
  LossFingerprint fp;
  fp.kind = to_string(loss.kind);
  fp.dimension = loss.dimension;
  fp.lipschitz_L = loss.lipschitz_L;
  fp.strong_convexity_lambda = loss.strong_convexity_lambda;
  fp.hessian_lipschitz_M = loss.hessian_lipschitz_M;
  fp.minimizer_norm_bound_B = loss.minimizer_norm_bound_B;
  fp.data_radius = loss.data_radius;
  return fp;
}

void validate_budget(const PrivacyBudget& budget) {
  if (!(budget.epsilon > 0.0 && budget.epsilon <= 1.0)) {
    throw BudgetError("epsilon must lie in (0, 1]");
  }
  if (!(budget.delta > 0.0 && budget.delta < 1.0)) {
    throw BudgetError("delta must lie in (0, 1)");
  }
  if (budget.m_budget < 0) throw BudgetError("m_budget must be >= 0");
}

void validate_model(const TrainedModel& model) {
  const long d = model.fingerprint.dimension;
  if (d < 1 || model.n < 1) throw DataError("model must have d >= 1 and n >= 1");
  if (model.w_hat.size() != d) throw DataError("model w_hat has the wrong dimension");
  if (model.hessian_stat.rows() != d || model.hessian_stat.cols() != d) {
    throw DataError("model hessian statistic has the wrong shape");
  }
  if ((model.hessian_stat - model.hessian_stat.transpose()).norm() > 1e-8) {
    throw DataError("model hessian statistic is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(model.hessian_stat, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < model.fingerprint.strong_convexity_lambda - kPsdTolerance) {
    throw DataError("model hessian statistic violates the strong-convexity floor");
  }
}

TrainedModel learn_sc(const LossModel& loss, const Dataset& data) {
  const double tol = default_tolerance(loss, data.size());
  SolveReport report = minimize_empirical(loss, data, tol);
  TrainedModel model;
  model.w_hat = std::move(report.w_hat);
  model.hessian_stat = hessian_statistic(loss, data, model.w_hat);
  model.n = data.size();
  model.fingerprint = fingerprint_of(loss);
  model.solve_tol = tol;
  return model;
}

Matrix assemble_deleted_hessian(const TrainedModel& model, const LossModel& loss,
                                const DeleteRequest& request) {
  require_fingerprint(model, loss);
  check_request(model, loss, request);
  const double n = static_cast<double>(model.n);
  const double m = static_cast<double>(request.count());
  Matrix h = n * model.hessian_stat;
  for (const auto& z : request.samples) h -= hessian(loss, model.w_hat, z);
  h /= (n - m);
  h = 0.5 * (h + h.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Matrix> eig(h, Eigen::EigenvaluesOnly);
  const double min_eig = eig.eigenvalues().minCoeff();
  if (min_eig < loss.strong_convexity_lambda - kPsdTolerance) {
    throw DataError("deleted Hessian violates the strong-convexity floor (min eigenvalue " +
                    std::to_string(min_eig) + " < lambda " +
                    std::to_string(loss.strong_convexity_lambda) +
                    "); deletions are inconsistent with this model");
  }
  return h;
}

Vector newton_unlearn_point(const TrainedModel& model, const LossModel& loss,
                            const DeleteRequest& request) {
  require_fingerprint(model, loss);
  check_request(model, loss, request);
  if (request.count() == 0) return model.w_hat;

  const Matrix h = assemble_deleted_hessian(model, loss, request);
  Vector grad_sum = Vector::Zero(loss.dimension);
  for (const auto& z : request.samples) grad_sum += gradient(loss, model.w_hat, z);

  Eigen::LLT<Matrix> llt(h);
  if (llt.info() != Eigen::Success) {
    throw DataError("deleted Hessian is not positive definite");
  }
  const double scale = 1.0 / static_cast<double>(model.n - request.count());
  return model.w_hat + scale * llt.solve(grad_sum);
}

NoiseScale noise_scale(const LossModel& loss, long n, const PrivacyBudget& budget) {
  validate_budget(budget);
  if (n < 1) throw DataError("n must be >= 1");
  if (budget.m_budget >= n) throw BudgetError("m_budget must be smaller than n");
  if (loss.strong_convexity_lambda <= 0.0) {
    throw ConfigError("noise calibration requires strong convexity; regularize the loss first");
  }
  const double m = static_cast<double>(budget.m_budget);
  const double nn = static_cast<double>(n);
  const double lambda = loss.strong_convexity_lambda;
  const double L = loss.lipschitz_L;
  NoiseScale scale;
  scale.gamma = 2.0 * loss.hessian_lipschitz_M * m * m * L * L / (lambda * lambda * lambda * nn * nn);
  scale.sigma = (scale.gamma / budget.epsilon) * std::sqrt(2.0 * std::log(1.25 / budget.delta));
  return scale;
}

UnlearnOutput unlearn_sc(const TrainedModel& model, const LossModel& loss,
                         const DeleteRequest& request, const PrivacyBudget& budget) {
  validate_budget(budget);
  if (request.count() > budget.m_budget) {
    throw BudgetError("delete request of size " + std::to_string(request.count()) +
                      " exceeds m_budget " + std::to_string(budget.m_budget));
  }
  UnlearnOutput out;
  out.w_bar = newton_unlearn_point(model, loss, request);
  const NoiseScale scale = noise_scale(loss, model.n, budget);
  out.gamma = scale.gamma;
  out.sigma = scale.sigma;
  out.m_used = request.count();
  Rng rng(budget.seed);
  out.w_tilde = out.w_bar + scale.sigma * rng.normal_vector(loss.dimension);
  return out;
}

double select_lambda_convex(const LossModel& loss, long n, const PrivacyBudget& budget) {
  validate_budget(budget);
  if (n < 1) throw DataError("n must be >= 1");
  if (!loss.minimizer_norm_bound_B) {
    throw ConfigError("convex-mode lambda selection requires a declared minimizer norm bound B");
  }
  if (loss.strong_convexity_lambda != 0.0) {
    throw ConfigError("convex-mode lambda selection expects a loss declared with zero strong convexity");
  }
  const double L = loss.lipschitz_L;
  const double B = *loss.minimizer_norm_bound_B;
  const double nn = static_cast<double>(n);
  if (budget.m_budget == 0) return L / (B * std::sqrt(nn));

  const double m = static_cast<double>(budget.m_budget);
  const double drift_term = (L / B) * std::sqrt(m / nn);
  const double noise_term =
      std::pow(std::sqrt(static_cast<double>(loss.dimension)) * loss.hessian_lipschitz_M * m * m *
                   L * L * L * std::sqrt(std::log(1.0 / budget.delta)) /
                   (B * B * nn * nn * budget.epsilon),
               0.25);
  return std::max(drift_term, noise_term);
}

TrainedModel learn_c(const LossModel& loss, const Dataset& data, const PrivacyBudget& budget) {
  const double lambda = select_lambda_convex(loss, data.size(), budget);
  const LossModel reg = regularize(loss, lambda);
  TrainedModel model = learn_sc(reg, data);
  const double ball = loss.lipschitz_L / lambda;
  if (model.w_hat.norm() > ball + 1e-6) {
    throw SolverError("regularized minimizer escaped the L/lambda ball; constants are inconsistent");
  }
  return model;
}

UnlearnOutput unlearn_c(const TrainedModel& model, const LossModel& base_loss,
                        const DeleteRequest& request, const PrivacyBudget& budget) {
  const double lambda = select_lambda_convex(base_loss, model.n, budget);
  const LossModel reg = regularize(base_loss, lambda);
  if (!(model.fingerprint == fingerprint_of(reg))) {
    throw DataError("model was not trained with this budget's regularization");
  }
  return unlearn_sc(model, reg, request, budget);
}

}  // namespace unlearn
