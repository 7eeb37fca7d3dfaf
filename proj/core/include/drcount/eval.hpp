#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace drcount {

struct EvalPair {
  std::string image_id;
  double predicted = 0.0;
  std::size_t truth = 0;
};

struct MseResult {
  double mse = 0.0;   // mean of squared errors
  double rmse = 0.0;  // its square root
};

/// Mean absolute count error. Throws std::invalid_argument when empty.
double mae(std::span<const EvalPair> pairs);

/// Mean squared count error and its root. Counting benchmarks usually
/// publish the root under the name "MSE". Throws std::invalid_argument when
/// empty.
MseResult mse(std::span<const EvalPair> pairs);

struct EvalReport {
  double mae = 0.0;
  double mse = 0.0;
  double rmse = 0.0;
  std::size_t n = 0;
  std::vector<std::string> unmatched;  // prediction ids absent from the manifest
};

/// Reads "<image id> <count>" records, one per line. Commas and tabs also
/// separate fields; blank lines and lines starting with '#' are skipped.
/// Throws drcount::Error on malformed lines or duplicate ids.
std::vector<std::pair<std::string, double>> read_predictions(const std::filesystem::path& path);

/// Joins predictions with the manifest's records by image id and scores the
/// intersection. Throws drcount::Error when nothing matches.
EvalReport evaluate(const std::filesystem::path& predictions,
                    const std::filesystem::path& manifest);

/// Same join on in-memory data: truth maps image id -> count.
EvalReport evaluate(std::span<const std::pair<std::string, double>> predictions,
                    std::span<const std::pair<std::string, std::size_t>> truth);

nlohmann::json to_json(const EvalReport& report);

}  // namespace drcount
