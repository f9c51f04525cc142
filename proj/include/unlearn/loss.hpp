#pragma once

#include <optional>
#include <string>

#include "unlearn/types.hpp"

namespace unlearn {

enum class LossKind { MeanSquared, Ridge, Logistic };

std::string to_string(LossKind kind);
LossKind loss_kind_from_string(const std::string& name);

/// A convex per-sample loss together with the constants its analysis is
/// certified for. Instances are immutable after construction; the constants
/// are declared, never estimated, and every bound downstream is stated in
/// terms of them.
///
/// lipschitz_L is certified over the ball ||w|| <= domain_radius_R and
/// ||z|| <= data_radius only; quadratic losses have no global Lipschitz
/// constant.
struct LossModel {
  LossKind kind = LossKind::MeanSquared;
  int dimension = 1;
  double lipschitz_L = 0.0;
  double strong_convexity_lambda = 0.0;
  double hessian_lipschitz_M = 0.0;
  std::optional<double> minimizer_norm_bound_B;
  double domain_radius_R = 1.0;
  double data_radius = 1.0;
  // coefficient of the (1/2)||w||^2 term included in evaluate()
  double ridge_coefficient = 0.0;
};

// Built-in families. Constants follow from the declared radii:
//   mean-squared  f(w,z) = ||w - z||^2
//   ridge         f(w,(x,y)) = (<w,x> - y)^2 + (lambda/2)||w||^2
//   logistic      f(w,(x,y)) = ln(1 + exp(-y<w,x>)) + (lambda/2)||w||^2
LossModel make_mean_squared(int dimension, double data_radius, double domain_radius);
LossModel make_ridge(int dimension, double lambda, double data_radius, double domain_radius);
LossModel make_logistic(int dimension, double lambda, double data_radius, double domain_radius);

// Same losses declared with strong convexity 0, for the regularization
// wrapper. B bounds the norm of some population minimizer.
LossModel make_mean_squared_convex(int dimension, double data_radius, double domain_radius,
                                   double minimizer_norm_bound);
LossModel make_logistic_convex(int dimension, double data_radius, double domain_radius,
                               double minimizer_norm_bound);

/// Throws DataError unless z has the right shape for the loss: dimension
/// match, ||x|| <= data_radius, |y| <= data_radius for ridge, y in {-1,+1}
/// for logistic.
void check_admissible(const LossModel& loss, const Instance& z);

double evaluate(const LossModel& loss, const Vector& w, const Instance& z);
Vector gradient(const LossModel& loss, const Vector& w, const Instance& z);
Matrix hessian(const LossModel& loss, const Vector& w, const Instance& z);

/// f + (lambda/2)||w||^2 with the regularized constants: strong convexity
/// base + lambda, Lipschitz 2L over the effective ball ||w|| <= L/lambda
/// (recorded as the new domain radius), Hessian-Lipschitz unchanged.
LossModel regularize(const LossModel& base, double lambda);

}  // namespace unlearn
