#pragma once

#include <Eigen/Core>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace unlearn {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Error classes map 1:1 onto the CLI exit codes.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConfigError : Error {
  using Error::Error;
};
struct DataError : Error {
  using Error::Error;
};
struct SolverError : Error {
  using Error::Error;
};
struct BudgetError : Error {
  using Error::Error;
};

/// One training point: a plain vector, or a (features, label) pair when
/// `label` is set.
struct Instance {
  Vector x;
  std::optional<double> label;

  Instance() = default;
  explicit Instance(Vector v) : x(std::move(v)) {}
  Instance(Vector v, double y) : x(std::move(v)), label(y) {}

  bool operator==(const Instance& other) const {
    if (label.has_value() != other.label.has_value()) return false;
    if (label && *label != *other.label) return false;
    return x.size() == other.x.size() && x == other.x;
  }
};

struct Dataset {
  std::vector<Instance> instances;

  Dataset() = default;
  explicit Dataset(std::vector<Instance> v) : instances(std::move(v)) {}

  long size() const { return static_cast<long>(instances.size()); }
  bool empty() const { return instances.empty(); }
  const Instance& operator[](long i) const { return instances[static_cast<size_t>(i)]; }
};

}  // namespace unlearn
