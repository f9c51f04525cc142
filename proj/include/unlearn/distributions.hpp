#pragma once

#include <optional>
#include <string>

#include "unlearn/rng.hpp"
#include "unlearn/types.hpp"

namespace unlearn {

enum class DistributionKind { Bernoulli, UniformInterval, GaussianLogistic };

/// Closed-form optimum of the mean-squared population risk over the
/// distribution, where one exists.
struct AnalyticOptimum {
  Vector w_star;
  double f_star = 0.0;
};

/// A synthetic data source with deterministic seeded sampling. Bernoulli and
/// uniform-interval draw each coordinate i.i.d. and expose pointwise
/// densities; gaussian-logistic produces labeled (x, y) pairs with x in the
/// unit ball and y from a logistic model of slope `margin` along the first
/// coordinate.
class Distribution {
 public:
  static Distribution bernoulli(double p, int dimension = 1);
  static Distribution uniform_interval(double a, double b, int dimension = 1);
  static Distribution gaussian_logistic(int dimension, double margin);

  DistributionKind kind() const { return kind_; }
  int dimension() const { return dimension_; }
  double param_a() const { return a_; }
  double param_b() const { return b_; }

  Instance sample(Rng& rng) const;
  Dataset sample_dataset(long n, std::uint64_t seed) const;

  /// Density (or probability mass) at z. Only Bernoulli and
  /// uniform-interval support this; gaussian-logistic throws.
  double density(const Instance& z) const;

  const std::optional<AnalyticOptimum>& analytic_optimum() const { return optimum_; }

 private:
  Distribution() = default;

  DistributionKind kind_ = DistributionKind::Bernoulli;
  int dimension_ = 1;
  double a_ = 0.0;  // p for bernoulli, lower endpoint for uniform, margin for logistic
  double b_ = 0.0;  // upper endpoint for uniform
  std::optional<AnalyticOptimum> optimum_;
};

/// The two uniform distributions used to calibrate the density-ratio
/// deleter: supports [0.25 + alpha/4, 0.75 + alpha/4] and [0.25, 0.75].
/// Their L1 distance is alpha, so a deleter that removes z with probability
/// [D1(z) - D2(z)]_+ / D1(z) fires on an alpha/2 fraction of D1 samples.
struct ShiftedUniformPair {
  Distribution d1;
  Distribution d2;
};
ShiftedUniformPair make_shifted_uniform_pair(double alpha);

}  // namespace unlearn
