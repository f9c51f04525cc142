#include "unlearn/loss.hpp"

#include <cmath>

namespace unlearn {

namespace {

constexpr double kAdmissibleSlack = 1e-9;

// max |sigma''| over R, attained at t = ln(2 +- sqrt(3))
const double kLogisticThirdDerivBound = 1.0 / (6.0 * std::sqrt(3.0));

double sigmoid(double t) {
  if (t >= 0.0) {
    return 1.0 / (1.0 + std::exp(-t));
  }
  const double e = std::exp(t);
  return e / (1.0 + e);
}

// ln(1 + exp(t)) without overflow
double log1p_exp(double t) {
  if (t > 0.0) return t + std::log1p(std::exp(-t));
  return std::log1p(std::exp(t));
}

void require_dimension(const LossModel& loss, const Vector& w) {
  if (w.size() != loss.dimension) {
    throw DataError("parameter dimension " + std::to_string(w.size()) +
                    " does not match loss dimension " + std::to_string(loss.dimension));
  }
}

double label_of(const LossModel& loss, const Instance& z) {
  if (!z.label) throw DataError(to_string(loss.kind) + " loss requires labeled instances");
  return *z.label;
}

}  // namespace

std::string to_string(LossKind kind) {
  switch (kind) {
    case LossKind::MeanSquared: return "mean-squared";
    case LossKind::Ridge: return "ridge-regression";
    case LossKind::Logistic: return "regularized-logistic";
  }
  return "unknown";
}

LossKind loss_kind_from_string(const std::string& name) {
  if (name == "mean-squared") return LossKind::MeanSquared;
  if (name == "ridge-regression" || name == "ridge") return LossKind::Ridge;
  if (name == "regularized-logistic" || name == "logistic") return LossKind::Logistic;
  throw ConfigError("unknown loss kind: " + name);
}

LossModel make_mean_squared(int dimension, double data_radius, double domain_radius) {
  if (dimension < 1) throw ConfigError("dimension must be >= 1");
  if (data_radius <= 0.0 || domain_radius <= 0.0) throw ConfigError("radii must be positive");
  LossModel loss;
  loss.kind = LossKind::MeanSquared;
  loss.dimension = dimension;
  loss.data_radius = data_radius;
  loss.domain_radius_R = domain_radius;
  loss.lipschitz_L = 2.0 * (domain_radius + data_radius);
  loss.strong_convexity_lambda = 2.0;
  loss.hessian_lipschitz_M = 0.0;
  loss.ridge_coefficient = 0.0;
  return loss;
}

LossModel make_ridge(int dimension, double lambda, double data_radius, double domain_radius) {
  if (dimension < 1) throw ConfigError("dimension must be >= 1");
  if (lambda < 0.0) throw ConfigError("ridge lambda must be >= 0");
  if (data_radius <= 0.0 || domain_radius <= 0.0) throw ConfigError("radii must be positive");
  LossModel loss;
  loss.kind = LossKind::Ridge;
  loss.dimension = dimension;
  loss.data_radius = data_radius;
  loss.domain_radius_R = domain_radius;
  loss.lipschitz_L =
      2.0 * data_radius * (domain_radius * data_radius + data_radius) + lambda * domain_radius;
  loss.strong_convexity_lambda = lambda;
  loss.hessian_lipschitz_M = 0.0;
  loss.ridge_coefficient = lambda;
  return loss;
}

LossModel make_logistic(int dimension, double lambda, double data_radius, double domain_radius) {
  if (dimension < 1) throw ConfigError("dimension must be >= 1");
  if (lambda < 0.0) throw ConfigError("logistic lambda must be >= 0");
  if (data_radius <= 0.0 || domain_radius <= 0.0) throw ConfigError("radii must be positive");
  LossModel loss;
  loss.kind = LossKind::Logistic;
  loss.dimension = dimension;
  loss.data_radius = data_radius;
  loss.domain_radius_R = domain_radius;
  loss.lipschitz_L = data_radius + lambda * domain_radius;
  loss.strong_convexity_lambda = lambda;
  loss.hessian_lipschitz_M =
      kLogisticThirdDerivBound * data_radius * data_radius * data_radius;
  loss.ridge_coefficient = lambda;
  return loss;
}

LossModel make_mean_squared_convex(int dimension, double data_radius, double domain_radius,
                                   double minimizer_norm_bound) {
  if (minimizer_norm_bound <= 0.0) throw ConfigError("minimizer norm bound must be positive");
  LossModel loss = make_mean_squared(dimension, data_radius, domain_radius);
  loss.strong_convexity_lambda = 0.0;
  loss.minimizer_norm_bound_B = minimizer_norm_bound;
  return loss;
}

LossModel make_logistic_convex(int dimension, double data_radius, double domain_radius,
                               double minimizer_norm_bound) {
  if (minimizer_norm_bound <= 0.0) throw ConfigError("minimizer norm bound must be positive");
  LossModel loss = make_logistic(dimension, 0.0, data_radius, domain_radius);
  loss.minimizer_norm_bound_B = minimizer_norm_bound;
  return loss;
}

void check_admissible(const LossModel& loss, const Instance& z) {
  if (z.x.size() != loss.dimension) {
    throw DataError("instance dimension " + std::to_string(z.x.size()) +
                    " does not match loss dimension " + std::to_string(loss.dimension));
  }
  if (z.x.norm() > loss.data_radius + kAdmissibleSlack) {
    throw DataError("instance norm exceeds data radius " + std::to_string(loss.data_radius));
  }
  switch (loss.kind) {
    case LossKind::MeanSquared:
      break;
    case LossKind::Ridge: {
      const double y = label_of(loss, z);
      if (std::abs(y) > loss.data_radius + kAdmissibleSlack) {
        throw DataError("ridge label magnitude exceeds data radius");
      }
      break;
    }
    case LossKind::Logistic: {
      const double y = label_of(loss, z);
      if (y != 1.0 && y != -1.0) throw DataError("logistic labels must be -1 or +1");
      break;
    }
  }
}

double evaluate(const LossModel& loss, const Vector& w, const Instance& z) {
  require_dimension(loss, w);
  check_admissible(loss, z);
  const double reg = 0.5 * loss.ridge_coefficient * w.squaredNorm();
  switch (loss.kind) {
    case LossKind::MeanSquared:
      return (w - z.x).squaredNorm() + reg;
    case LossKind::Ridge: {
      const double r = w.dot(z.x) - label_of(loss, z);
      return r * r + reg;
    }
    case LossKind::Logistic: {
      const double margin = label_of(loss, z) * w.dot(z.x);
      return log1p_exp(-margin) + reg;
    }
  }
  throw Error("unreachable");
}

Vector gradient(const LossModel& loss, const Vector& w, const Instance& z) {
  require_dimension(loss, w);
  check_admissible(loss, z);
  switch (loss.kind) {
    case LossKind::MeanSquared:
      return 2.0 * (w - z.x) + loss.ridge_coefficient * w;
    case LossKind::Ridge: {
      const double r = w.dot(z.x) - label_of(loss, z);
      return (2.0 * r) * z.x + loss.ridge_coefficient * w;
    }
    case LossKind::Logistic: {
      const double y = label_of(loss, z);
      const double s = sigmoid(-y * w.dot(z.x));
      return (-y * s) * z.x + loss.ridge_coefficient * w;
    }
  }
  throw Error("unreachable");
}

Matrix hessian(const LossModel& loss, const Vector& w, const Instance& z) {
  require_dimension(loss, w);
  check_admissible(loss, z);
  const long d = loss.dimension;
  switch (loss.kind) {
    case LossKind::MeanSquared:
      return (2.0 + loss.ridge_coefficient) * Matrix::Identity(d, d);
    case LossKind::Ridge: {
      Matrix h = 2.0 * (z.x * z.x.transpose());
      h.diagonal().array() += loss.ridge_coefficient;
      return h;
    }
    case LossKind::Logistic: {
      const double s = sigmoid(w.dot(z.x));
      Matrix h = (s * (1.0 - s)) * (z.x * z.x.transpose());
      h.diagonal().array() += loss.ridge_coefficient;
      return h;
    }
  }
  throw Error("unreachable");
}

LossModel regularize(const LossModel& base, double lambda) {
  if (lambda <= 0.0) throw ConfigError("regularization lambda must be positive");
  LossModel reg = base;
  reg.ridge_coefficient += lambda;
  reg.strong_convexity_lambda += lambda;
  reg.lipschitz_L = 2.0 * base.lipschitz_L;
  reg.domain_radius_R = base.lipschitz_L / lambda;
  return reg;
}

}  // namespace unlearn
