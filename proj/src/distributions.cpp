#include "unlearn/distributions.hpp"

#include <cmath>

namespace unlearn {

Distribution Distribution::bernoulli(double p, int dimension) {
  if (p < 0.0 || p > 1.0) throw ConfigError("bernoulli p must lie in [0, 1]");
  if (dimension < 1) throw ConfigError("dimension must be >= 1");
  Distribution d;
  d.kind_ = DistributionKind::Bernoulli;
  d.dimension_ = dimension;
  d.a_ = p;
  AnalyticOptimum opt;
  opt.w_star = Vector::Constant(dimension, p);
  opt.f_star = static_cast<double>(dimension) * p * (1.0 - p);
  d.optimum_ = std::move(opt);
  return d;
}

Distribution Distribution::uniform_interval(double a, double b, int dimension) {
  if (!(a < b)) throw ConfigError("uniform interval needs a < b");
  if (dimension < 1) throw ConfigError("dimension must be >= 1");
  Distribution d;
  d.kind_ = DistributionKind::UniformInterval;
  d.dimension_ = dimension;
  d.a_ = a;
  d.b_ = b;
  AnalyticOptimum opt;
  opt.w_star = Vector::Constant(dimension, 0.5 * (a + b));
  opt.f_star = static_cast<double>(dimension) * (b - a) * (b - a) / 12.0;
  d.optimum_ = std::move(opt);
  return d;
}

Distribution Distribution::gaussian_logistic(int dimension, double margin) {
  if (dimension < 1) throw ConfigError("dimension must be >= 1");
  Distribution d;
  d.kind_ = DistributionKind::GaussianLogistic;
  d.dimension_ = dimension;
  d.a_ = margin;
  return d;
}

Instance Distribution::sample(Rng& rng) const {
  switch (kind_) {
    case DistributionKind::Bernoulli: {
      Vector x(dimension_);
      for (int i = 0; i < dimension_; ++i) x[i] = rng.bernoulli(a_) ? 1.0 : 0.0;
      return Instance(std::move(x));
    }
    case DistributionKind::UniformInterval: {
      Vector x(dimension_);
      for (int i = 0; i < dimension_; ++i) x[i] = rng.uniform(a_, b_);
      return Instance(std::move(x));
    }
    case DistributionKind::GaussianLogistic: {
      // features ~ N(0, I/d) rejected onto the unit ball, so E||x||^2 ~ 1
      const double scale = 1.0 / std::sqrt(static_cast<double>(dimension_));
      Vector x(dimension_);
      do {
        for (int i = 0; i < dimension_; ++i) x[i] = scale * rng.normal();
      } while (x.norm() > 1.0);
      const double t = a_ * std::sqrt(static_cast<double>(dimension_)) * x[0];
      const double p_pos = 1.0 / (1.0 + std::exp(-t));
      const double y = rng.bernoulli(p_pos) ? 1.0 : -1.0;
      return Instance(std::move(x), y);
    }
  }
  throw Error("unreachable");
}

Dataset Distribution::sample_dataset(long n, std::uint64_t seed) const {
  if (n < 1) throw DataError("dataset size must be >= 1");
  Rng rng(seed);
  std::vector<Instance> instances;
  instances.reserve(static_cast<size_t>(n));
  for (long i = 0; i < n; ++i) instances.push_back(sample(rng));
  return Dataset(std::move(instances));
}

double Distribution::density(const Instance& z) const {
  if (z.x.size() != dimension_) throw DataError("instance dimension mismatch in density");
  switch (kind_) {
    case DistributionKind::Bernoulli: {
      double mass = 1.0;
      for (int i = 0; i < dimension_; ++i) {
        const double v = z.x[i];
        if (v == 1.0) {
          mass *= a_;
        } else if (v == 0.0) {
          mass *= 1.0 - a_;
        } else {
          return 0.0;
        }
      }
      return mass;
    }
    case DistributionKind::UniformInterval: {
      double density = 1.0;
      for (int i = 0; i < dimension_; ++i) {
        const double v = z.x[i];
        if (v < a_ || v > b_) return 0.0;
        density /= (b_ - a_);
      }
      return density;
    }
    case DistributionKind::GaussianLogistic:
      throw ConfigError("gaussian-logistic has no evaluable pointwise density");
  }
  throw Error("unreachable");
}

ShiftedUniformPair make_shifted_uniform_pair(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
  ShiftedUniformPair pair{
      Distribution::uniform_interval(0.25 + alpha / 4.0, 0.75 + alpha / 4.0),
      Distribution::uniform_interval(0.25, 0.75),
  };
  return pair;
}

}  // namespace unlearn
