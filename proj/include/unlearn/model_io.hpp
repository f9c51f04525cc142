#pragma once

#include <string>

#include "unlearn/removal.hpp"
#include "unlearn/types.hpp"

namespace unlearn {

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

/// Model persistence. JSON with w_hat and the row-major d x d Hessian
/// statistic; floats round-trip exactly.
std::string model_to_json(const TrainedModel& model);
TrainedModel model_from_json(const std::string& text);

void save_model(const TrainedModel& model, const std::string& path);
TrainedModel load_model(const std::string& path);

std::string unlearn_output_to_json(const UnlearnOutput& output, std::uint64_t seed,
                                   bool include_w_bar);

/// Dataset CSV: mandatory header row, then one instance per line. Labeled
/// losses expect d feature columns plus a final label column; unlabeled
/// losses expect exactly d columns. A header-only file is accepted when
/// allow_empty is set (an empty delete request).
Dataset read_dataset_csv(const std::string& path, const LossModel& loss,
                         bool allow_empty = false);
void write_dataset_csv(const Dataset& data, const LossModel& loss, const std::string& path);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace unlearn
