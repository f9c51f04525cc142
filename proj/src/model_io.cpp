#include "unlearn/model_io.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <sstream>

namespace unlearn {

namespace {

using json = nlohmann::ordered_json;

constexpr int kFormatVersion = 1;

json vector_to_json(const Vector& v) {
  json array = json::array();
  for (long i = 0; i < v.size(); ++i) array.push_back(v[i]);
  return array;
}

Vector vector_from_json(const json& array) {
  Vector v(static_cast<long>(array.size()));
  long i = 0;
  for (const auto& x : array) v[i++] = x.get<double>();
  return v;
}

double parse_csv_double(const std::string& token, const std::string& path, long line) {
  double value = 0.0;
  const char* begin = token.data();
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw DataError(path + ":" + std::to_string(line) + ": cannot parse '" + token +
                    "' as a number");
  }
  return value;
}

bool looks_numeric(const std::string& token) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  return ec == std::errc() && ptr == token.data() + token.size();
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> tokens;
  std::string token;
  std::stringstream stream(line);
  while (std::getline(stream, token, ',')) {
    // trim surrounding spaces
    const auto first = token.find_first_not_of(" \t\r");
    const auto last = token.find_last_not_of(" \t\r");
    tokens.push_back(first == std::string::npos ? "" : token.substr(first, last - first + 1));
  }
  return tokens;
}

}  // namespace

std::string format_double(double value) {
  char buffer[32];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) throw Error("double formatting failed");
  return std::string(buffer, ptr);
}

std::string model_to_json(const TrainedModel& model) {
  json doc;
  doc["format_version"] = kFormatVersion;
  json fp;
  fp["kind"] = model.fingerprint.kind;
  fp["d"] = model.fingerprint.dimension;
  fp["L"] = model.fingerprint.lipschitz_L;
  fp["lambda"] = model.fingerprint.strong_convexity_lambda;
  fp["M"] = model.fingerprint.hessian_lipschitz_M;
  if (model.fingerprint.minimizer_norm_bound_B) {
    fp["B"] = *model.fingerprint.minimizer_norm_bound_B;
  } else {
    fp["B"] = nullptr;
  }
  fp["data_radius"] = model.fingerprint.data_radius;
  doc["loss_fingerprint"] = std::move(fp);
  doc["n"] = model.n;
  doc["solve_tol"] = model.solve_tol;
  doc["w_hat"] = vector_to_json(model.w_hat);
  json hessian = json::array();
  for (long r = 0; r < model.hessian_stat.rows(); ++r) {
    for (long c = 0; c < model.hessian_stat.cols(); ++c) {
      hessian.push_back(model.hessian_stat(r, c));
    }
  }
  doc["hessian_stat"] = std::move(hessian);
  return doc.dump(2) + "\n";
}

TrainedModel model_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw DataError(std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    if (doc.at("format_version").get<int>() != kFormatVersion) {
      throw DataError("unsupported model format version");
    }
    TrainedModel model;
    const json& fp = doc.at("loss_fingerprint");
    model.fingerprint.kind = fp.at("kind").get<std::string>();
    model.fingerprint.dimension = fp.at("d").get<int>();
    model.fingerprint.lipschitz_L = fp.at("L").get<double>();
    model.fingerprint.strong_convexity_lambda = fp.at("lambda").get<double>();
    model.fingerprint.hessian_lipschitz_M = fp.at("M").get<double>();
    if (!fp.at("B").is_null()) model.fingerprint.minimizer_norm_bound_B = fp.at("B").get<double>();
    model.fingerprint.data_radius = fp.at("data_radius").get<double>();
    model.n = doc.at("n").get<long>();
    model.solve_tol = doc.at("solve_tol").get<double>();
    model.w_hat = vector_from_json(doc.at("w_hat"));
    const long d = model.fingerprint.dimension;
    if (model.w_hat.size() != d) throw DataError("w_hat length does not match dimension");
    const json& hessian = doc.at("hessian_stat");
    if (static_cast<long>(hessian.size()) != d * d) {
      throw DataError("hessian_stat length does not match dimension");
    }
    model.hessian_stat.resize(d, d);
    long i = 0;
    for (const auto& x : hessian) {
      model.hessian_stat(i / d, i % d) = x.get<double>();
      ++i;
    }
    return model;
  } catch (const json::exception& e) {
    throw DataError(std::string("model file is missing fields: ") + e.what());
  }
}

void save_model(const TrainedModel& model, const std::string& path) {
  write_text_file(path, model_to_json(model));
}

TrainedModel load_model(const std::string& path) {
  TrainedModel model = model_from_json(read_text_file(path));
  validate_model(model);
  return model;
}

std::string unlearn_output_to_json(const UnlearnOutput& output, std::uint64_t seed,
                                   bool include_w_bar) {
  json doc;
  doc["format_version"] = kFormatVersion;
  doc["w_tilde"] = vector_to_json(output.w_tilde);
  doc["gamma"] = output.gamma;
  doc["sigma"] = output.sigma;
  doc["m_used"] = output.m_used;
  doc["seed"] = seed;
  if (include_w_bar) doc["w_bar"] = vector_to_json(output.w_bar);
  return doc.dump(2) + "\n";
}

Dataset read_dataset_csv(const std::string& path, const LossModel& loss, bool allow_empty) {
  std::ifstream input(path);
  if (!input) throw DataError("cannot open dataset file " + path);
  const bool labeled = loss.kind != LossKind::MeanSquared;
  const size_t expected = static_cast<size_t>(loss.dimension) + (labeled ? 1 : 0);

  std::string line;
  long line_number = 0;
  if (!std::getline(input, line)) throw DataError(path + ": empty dataset file");
  ++line_number;
  const auto header = split_csv_line(line);
  if (header.empty() || looks_numeric(header[0])) {
    throw DataError(path + ": first row must be a header");
  }
  if (header.size() != expected) {
    throw DataError(path + ": header has " + std::to_string(header.size()) +
                    " columns, expected " + std::to_string(expected));
  }

  std::vector<Instance> instances;
  while (std::getline(input, line)) {
    ++line_number;
    if (line.empty()) continue;
    const auto tokens = split_csv_line(line);
    if (tokens.size() != expected) {
      throw DataError(path + ":" + std::to_string(line_number) + ": row has " +
                      std::to_string(tokens.size()) + " columns, expected " +
                      std::to_string(expected));
    }
    Vector x(loss.dimension);
    for (int i = 0; i < loss.dimension; ++i) {
      x[i] = parse_csv_double(tokens[static_cast<size_t>(i)], path, line_number);
    }
    Instance z = labeled
                     ? Instance(std::move(x), parse_csv_double(tokens.back(), path, line_number))
                     : Instance(std::move(x));
    check_admissible(loss, z);
    instances.push_back(std::move(z));
  }
  if (instances.empty() && !allow_empty) throw DataError(path + ": dataset has no rows");
  return Dataset(std::move(instances));
}

void write_dataset_csv(const Dataset& data, const LossModel& loss, const std::string& path) {
  const bool labeled = loss.kind != LossKind::MeanSquared;
  std::string out;
  for (int i = 0; i < loss.dimension; ++i) {
    if (i > 0) out += ',';
    out += "x" + std::to_string(i + 1);
  }
  if (labeled) out += ",y";
  out += '\n';
  for (const auto& z : data.instances) {
    for (long i = 0; i < z.x.size(); ++i) {
      if (i > 0) out += ',';
      out += format_double(z.x[i]);
    }
    if (labeled) {
      out += ',';
      out += format_double(z.label.value());
    }
    out += '\n';
  }
  write_text_file(path, out);
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream output(path, std::ios::binary);
  if (!output) throw DataError("cannot open " + path + " for writing");
  output << content;
  if (!output) throw DataError("failed while writing " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream input(path, std::ios::binary);
  if (!input) throw DataError("cannot open " + path);
  std::stringstream buffer;
  buffer << input.rdbuf();
  return buffer.str();
}

}  // namespace unlearn
