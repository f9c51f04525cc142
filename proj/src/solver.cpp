#include "unlearn/solver.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>

namespace unlearn {

namespace {

void require_nonempty(const Dataset& data) {
  if (data.empty()) throw DataError("dataset must contain at least one instance");
}

// Upper bound on the spectral norm of the empirical Hessian, per loss kind.
double smoothness_bound(const LossModel& loss) {
  const double r2 = loss.data_radius * loss.data_radius;
  switch (loss.kind) {
    case LossKind::MeanSquared:
      return 2.0 + loss.ridge_coefficient;
    case LossKind::Ridge:
      return 2.0 * r2 + loss.ridge_coefficient;
    case LossKind::Logistic:
      return 0.25 * r2 + loss.ridge_coefficient;
  }
  throw Error("unreachable");
}

SolveReport solve_closed_form(const LossModel& loss, const Dataset& data, double tol) {
  const long d = loss.dimension;
  const long n = data.size();
  Vector w(d);
  if (loss.kind == LossKind::MeanSquared) {
    // grad = 2(w - mean) + c w  =>  (2 + c) w = 2 mean
    Vector mean = Vector::Zero(d);
    for (const auto& z : data.instances) mean += z.x;
    mean /= static_cast<double>(n);
    w = (2.0 / (2.0 + loss.ridge_coefficient)) * mean;
  } else {
    // ridge: ((2/n) X^T X + c I) w = (2/n) X^T y
    Matrix a = Matrix::Zero(d, d);
    Vector b = Vector::Zero(d);
    for (const auto& z : data.instances) {
      a.selfadjointView<Eigen::Lower>().rankUpdate(z.x, 2.0 / static_cast<double>(n));
      b += (2.0 * *z.label / static_cast<double>(n)) * z.x;
    }
    a = a.selfadjointView<Eigen::Lower>();
    a.diagonal().array() += loss.ridge_coefficient;
    Eigen::LLT<Matrix> llt(a);
    if (llt.info() != Eigen::Success) throw SolverError("normal equations are not positive definite");
    w = llt.solve(b);
  }
  SolveReport report;
  report.w_hat = std::move(w);
  report.grad_norm_achieved = empirical_gradient(loss, data, report.w_hat).norm();
  report.iterations = 0;
  report.closed_form = true;
  if (report.grad_norm_achieved > tol) {
    throw SolverError("closed-form solve missed the requested tolerance");
  }
  return report;
}

SolveReport solve_agd(const LossModel& loss, const Dataset& data, double tol,
                      long max_iterations) {
  const double lambda = loss.strong_convexity_lambda;
  const double beta = smoothness_bound(loss);
  const double kappa = beta / lambda;
  const double momentum = (std::sqrt(kappa) - 1.0) / (std::sqrt(kappa) + 1.0);

  Vector x = Vector::Zero(loss.dimension);
  Vector y = x;
  Vector grad_x = empirical_gradient(loss, data, x);
  SolveReport report;
  for (long it = 0; it < max_iterations; ++it) {
    const double gnorm = grad_x.norm();
    if (gnorm <= tol) {
      report.w_hat = std::move(x);
      report.grad_norm_achieved = gnorm;
      report.iterations = it;
      report.closed_form = false;
      return report;
    }
    const Vector grad_y = (it == 0) ? grad_x : empirical_gradient(loss, data, y);
    Vector x_next = y - grad_y / beta;
    y = x_next + momentum * (x_next - x);
    x = std::move(x_next);
    grad_x = empirical_gradient(loss, data, x);
  }
  throw SolverError("accelerated gradient descent hit the iteration cap without reaching tolerance " +
                    std::to_string(tol));
}

}  // namespace

double empirical_loss(const LossModel& loss, const Dataset& data, const Vector& w) {
  require_nonempty(data);
  double total = 0.0;
  for (const auto& z : data.instances) total += evaluate(loss, w, z);
  return total / static_cast<double>(data.size());
}

Vector empirical_gradient(const LossModel& loss, const Dataset& data, const Vector& w) {
  require_nonempty(data);
  if (w.size() != loss.dimension) throw DataError("parameter dimension mismatch");
  const double n = static_cast<double>(data.size());
  Vector g = Vector::Zero(loss.dimension);
  switch (loss.kind) {
    case LossKind::MeanSquared:
      for (const auto& z : data.instances) {
        check_admissible(loss, z);
        g += w - z.x;
      }
      g *= 2.0 / n;
      break;
    case LossKind::Ridge:
      for (const auto& z : data.instances) {
        check_admissible(loss, z);
        g += (2.0 * (w.dot(z.x) - *z.label)) * z.x;
      }
      g /= n;
      break;
    case LossKind::Logistic:
      for (const auto& z : data.instances) {
        check_admissible(loss, z);
        const double y = *z.label;
        const double t = -y * w.dot(z.x);
        const double s = (t >= 0.0) ? 1.0 / (1.0 + std::exp(-t)) : std::exp(t) / (1.0 + std::exp(t));
        g += (-y * s) * z.x;
      }
      g /= n;
      break;
  }
  g += loss.ridge_coefficient * w;
  return g;
}

Matrix hessian_statistic(const LossModel& loss, const Dataset& data, const Vector& w) {
  require_nonempty(data);
  if (w.size() != loss.dimension) throw DataError("parameter dimension mismatch");
  const long d = loss.dimension;
  const double n = static_cast<double>(data.size());
  Matrix h = Matrix::Zero(d, d);
  switch (loss.kind) {
    case LossKind::MeanSquared:
      h.diagonal().array() += 2.0;
      break;
    case LossKind::Ridge:
      for (const auto& z : data.instances) {
        check_admissible(loss, z);
        h.selfadjointView<Eigen::Lower>().rankUpdate(z.x, 2.0 / n);
      }
      h = h.selfadjointView<Eigen::Lower>();
      break;
    case LossKind::Logistic:
      for (const auto& z : data.instances) {
        check_admissible(loss, z);
        const double t = w.dot(z.x);
        const double s = (t >= 0.0) ? 1.0 / (1.0 + std::exp(-t)) : std::exp(t) / (1.0 + std::exp(t));
        h.selfadjointView<Eigen::Lower>().rankUpdate(z.x, s * (1.0 - s) / n);
      }
      h = h.selfadjointView<Eigen::Lower>();
      break;
  }
  h.diagonal().array() += loss.ridge_coefficient;
  return h;
}

double default_tolerance(const LossModel& loss, long n) {
  if (n < 1) throw DataError("n must be >= 1");
  const double nn = static_cast<double>(n);
  return std::min(1e-10, loss.strong_convexity_lambda / (10.0 * nn * nn));
}

SolveReport minimize_empirical(const LossModel& loss, const Dataset& data, double tol,
                               bool force_iterative, long max_iterations) {
  require_nonempty(data);
  if (tol <= 0.0) throw ConfigError("tolerance must be positive");
  if (max_iterations < 1) throw ConfigError("iteration cap must be positive");
  if (loss.strong_convexity_lambda <= 0.0) {
    throw ConfigError("minimize_empirical requires strong convexity; regularize the loss first");
  }
  for (const auto& z : data.instances) check_admissible(loss, z);
  const bool quadratic = loss.kind == LossKind::MeanSquared || loss.kind == LossKind::Ridge;
  if (quadratic && !force_iterative) return solve_closed_form(loss, data, tol);
  return solve_agd(loss, data, tol, max_iterations);
}

}  // namespace unlearn
