#pragma once

namespace unlearn {

struct CapacityInputs {
  long dimension = 1;
  long n = 1;
  double epsilon = 1.0;
  double delta = 0.5;
  double c_unlearn = 1.0;
  double c_dp = 1.0;
};

struct CapacityReport {
  double m_unlearn = 0.0;
  double m_dp = 0.0;
  double ratio = 0.0;
  CapacityInputs inputs;
};

/// Deletion capacity of the Newton mechanism: c n sqrt(eps) / (d ln(1/delta))^{1/4}.
double capacity_unlearn(long d, long n, double epsilon, double delta, double c = 1.0);

/// Deletion capacity via group differential privacy: c n eps / sqrt(d ln(e^eps/delta)).
double capacity_dp(long d, long n, double epsilon, double delta, double c = 1.0);

/// capacity_unlearn / capacity_dp at c = 1; scales as d^{1/4}.
double separation_ratio(long d, long n, double epsilon, double delta);

/// True when n <= sqrt(d)/eps, the regime where DP-based unlearning cannot
/// delete even a single point. Reported as a warning, not a computation.
bool dp_lower_bound_regime(long d, long n, double epsilon);

CapacityReport capacity_report(const CapacityInputs& inputs);

}  // namespace unlearn
