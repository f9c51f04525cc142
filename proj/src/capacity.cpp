#include "unlearn/capacity.hpp"

#include <cmath>

#include "unlearn/types.hpp"

namespace unlearn {

namespace {

void validate(long d, long n, double epsilon, double delta, double c) {
  if (d < 1 || n < 1) throw ConfigError("capacity formulas need d >= 1 and n >= 1");
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw ConfigError("epsilon must lie in (0, 1]");
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta must lie in (0, 1)");
  if (c <= 0.0) throw ConfigError("capacity constant must be positive");
}

}  // namespace

double capacity_unlearn(long d, long n, double epsilon, double delta, double c) {
  validate(d, n, epsilon, delta, c);
  const double dd = static_cast<double>(d);
  return c * static_cast<double>(n) * std::sqrt(epsilon) /
         std::pow(dd * std::log(1.0 / delta), 0.25);
}

double capacity_dp(long d, long n, double epsilon, double delta, double c) {
  validate(d, n, epsilon, delta, c);
  const double dd = static_cast<double>(d);
  return c * static_cast<double>(n) * epsilon /
         std::sqrt(dd * std::log(std::exp(epsilon) / delta));
}

double separation_ratio(long d, long n, double epsilon, double delta) {
  return capacity_unlearn(d, n, epsilon, delta, 1.0) / capacity_dp(d, n, epsilon, delta, 1.0);
}

bool dp_lower_bound_regime(long d, long n, double epsilon) {
  return static_cast<double>(n) <= std::sqrt(static_cast<double>(d)) / epsilon;
}

CapacityReport capacity_report(const CapacityInputs& in) {
  CapacityReport report;
  report.inputs = in;
  report.m_unlearn = capacity_unlearn(in.dimension, in.n, in.epsilon, in.delta, in.c_unlearn);
  report.m_dp = capacity_dp(in.dimension, in.n, in.epsilon, in.delta, in.c_dp);
  report.ratio = report.m_unlearn / report.m_dp;
  return report;
}

}  // namespace unlearn
