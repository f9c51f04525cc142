#pragma once

#include "unlearn/loss.hpp"
#include "unlearn/types.hpp"

namespace unlearn {

struct SolveReport {
  Vector w_hat;
  double grad_norm_achieved = 0.0;
  long iterations = 0;
  bool closed_form = false;
};

/// (1/n) sum_i f(w, z_i)
double empirical_loss(const LossModel& loss, const Dataset& data, const Vector& w);

/// (1/n) sum_i grad f(w, z_i), fixed summation order
Vector empirical_gradient(const LossModel& loss, const Dataset& data, const Vector& w);

/// (1/n) sum_i hess f(w, z_i); this is the statistic T(S) when evaluated at
/// the trained point.
Matrix hessian_statistic(const LossModel& loss, const Dataset& data, const Vector& w);

/// Gradient-norm tolerance for training: min(1e-10, lambda / (10 n^2)).
/// Through strong convexity this pins the minimizer to O(1/n^2) in
/// parameter distance.
double default_tolerance(const LossModel& loss, long n);

/// Minimizes the empirical loss to ||grad|| <= tol. Mean-squared and ridge
/// are solved in closed form (sample mean, regularized normal equations);
/// everything else runs Nesterov accelerated gradient descent from w = 0.
/// Requires strong_convexity_lambda > 0; throws SolverError if the iteration
/// cap is hit before the tolerance.
SolveReport minimize_empirical(const LossModel& loss, const Dataset& data, double tol,
                               bool force_iterative = false,
                               long max_iterations = 1'000'000);

}  // namespace unlearn
