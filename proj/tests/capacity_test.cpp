#include <doctest.h>

#include <cmath>

#include "unlearn/capacity.hpp"
#include "unlearn/types.hpp"

using namespace unlearn;

TEST_CASE("capacity formulas at the worked instance") {
  const double delta = std::exp(-1.0);
  CHECK(capacity_unlearn(16, 10000, 1.0, delta) == doctest::Approx(5000.0).epsilon(1e-12));
  CHECK(capacity_dp(16, 10000, 1.0, delta) == doctest::Approx(10000.0 / std::sqrt(32.0)).epsilon(1e-12));
  CHECK(separation_ratio(16, 10000, 1.0, delta) ==
        doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("scaling laws") {
  const double delta = 1e-4;
  // fourth-root law: d x16 halves the unlearning capacity
  CHECK(capacity_unlearn(16, 1000, 0.5, delta) ==
        doctest::Approx(0.5 * capacity_unlearn(1, 1000, 0.5, delta)).epsilon(1e-12));
  // sqrt law: eps / 4 halves it
  CHECK(capacity_unlearn(4, 1000, 0.25, delta) ==
        doctest::Approx(0.5 * capacity_unlearn(4, 1000, 1.0, delta)).epsilon(1e-12));
  // DP: d x4 halves
  CHECK(capacity_dp(64, 1000, 0.5, delta) ==
        doctest::Approx(0.5 * capacity_dp(16, 1000, 0.5, delta)).epsilon(1e-12));
}

TEST_CASE("separation ratio scales as d^{1/4} and is n-independent") {
  for (long d : {1L, 16L, 256L}) {
    const double r16 = separation_ratio(16 * d, 500, 0.7, 1e-3);
    const double r1 = separation_ratio(d, 500, 0.7, 1e-3);
    CHECK(r16 / r1 == doctest::Approx(2.0).epsilon(1e-12));
  }
  CHECK(separation_ratio(8, 100, 0.9, 1e-2) ==
        doctest::Approx(separation_ratio(8, 100000, 0.9, 1e-2)).epsilon(1e-12));
}

TEST_CASE("monotonicity") {
  const double delta = 1e-3;
  CHECK(capacity_unlearn(4, 2000, 1.0, delta) > capacity_unlearn(4, 1000, 1.0, delta));
  CHECK(capacity_unlearn(4, 1000, 1.0, delta) > capacity_unlearn(4, 1000, 0.5, delta));
  CHECK(capacity_unlearn(8, 1000, 1.0, delta) < capacity_unlearn(4, 1000, 1.0, delta));
  CHECK(capacity_dp(4, 2000, 1.0, delta) > capacity_dp(4, 1000, 1.0, delta));
  CHECK(capacity_dp(4, 1000, 1.0, delta) > capacity_dp(4, 1000, 0.5, delta));
  CHECK(capacity_dp(8, 1000, 1.0, delta) < capacity_dp(4, 1000, 1.0, delta));
  // delta decay rates: (.)^{-1/4} vs (.)^{-1/2} in ln(1/delta)
  const double shrink_unlearn = capacity_unlearn(4, 1000, 1.0, 1e-8) / capacity_unlearn(4, 1000, 1.0, 1e-2);
  const double shrink_dp = capacity_dp(4, 1000, 1.0, 1e-8) / capacity_dp(4, 1000, 1.0, 1e-2);
  CHECK(shrink_unlearn > shrink_dp);
}

TEST_CASE("dp lower-bound warning regime") {
  CHECK(dp_lower_bound_regime(10000, 100, 1.0));
  CHECK_FALSE(dp_lower_bound_regime(16, 100, 1.0));
  CHECK(dp_lower_bound_regime(16, 100, 0.04));
}

TEST_CASE("invalid inputs are rejected") {
  CHECK_THROWS_AS(capacity_unlearn(4, 100, 1.0, 1.5), ConfigError);
  CHECK_THROWS_AS(capacity_unlearn(4, 100, 0.0, 0.1), ConfigError);
  CHECK_THROWS_AS(capacity_dp(0, 100, 1.0, 0.1), ConfigError);
}

TEST_CASE("capacity report wires the inputs through") {
  CapacityInputs inputs{16, 10000, 1.0, std::exp(-1.0), 1.0, 1.0};
  const CapacityReport report = capacity_report(inputs);
  CHECK(report.ratio == doctest::Approx(report.m_unlearn / report.m_dp));
  CHECK(report.m_unlearn == doctest::Approx(5000.0));
}
