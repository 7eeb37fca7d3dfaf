#include "drcount/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "drcount/error.hpp"
#include "drcount/pipeline.hpp"

namespace drcount {

double mae(std::span<const EvalPair> pairs) {
  if (pairs.empty()) {
    throw std::invalid_argument("mae: no pairs");
  }
  double total = 0.0;
  for (const EvalPair& p : pairs) {
    total += std::abs(p.predicted - static_cast<double>(p.truth));
  }
  return total / static_cast<double>(pairs.size());
}

MseResult mse(std::span<const EvalPair> pairs) {
  if (pairs.empty()) {
    throw std::invalid_argument("mse: no pairs");
  }
  double total = 0.0;
  for (const EvalPair& p : pairs) {
    const double e = p.predicted - static_cast<double>(p.truth);
    total += e * e;
  }
  const double m = total / static_cast<double>(pairs.size());
  return {m, std::sqrt(m)};
}

std::vector<std::pair<std::string, double>> read_predictions(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error("cannot read predictions: " + path.string());
  }
  std::vector<std::pair<std::string, double>> out;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    for (char& c : line) {
      if (c == ',' || c == '\t') {
        c = ' ';
      }
    }
    std::istringstream ls(line);
    std::string id;
    if (!(ls >> id) || id.front() == '#') {
      continue;
    }
    double value = 0.0;
    std::string extra;
    if (!(ls >> value) || (ls >> extra) || !std::isfinite(value) || value < 0.0) {
      throw Error(path.string() + ":" + std::to_string(line_no) +
                  ": expected '<image id> <non-negative count>'");
    }
    if (!seen.insert(id).second) {
      throw Error(path.string() + ":" + std::to_string(line_no) + ": duplicate prediction id '" +
                  id + "'");
    }
    out.emplace_back(std::move(id), value);
  }
  return out;
}

EvalReport evaluate(std::span<const std::pair<std::string, double>> predictions,
                    std::span<const std::pair<std::string, std::size_t>> truth) {
  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& [id, count] : truth) {
    counts.emplace(id, count);
  }
  std::unordered_set<std::string> seen;
  std::vector<EvalPair> pairs;
  EvalReport report;
  for (const auto& [id, value] : predictions) {
    if (!seen.insert(id).second) {
      throw Error("duplicate prediction id '" + id + "'");
    }
    const auto it = counts.find(id);
    if (it == counts.end()) {
      report.unmatched.push_back(id);
      continue;
    }
    pairs.push_back({id, value, it->second});
  }
  if (pairs.empty()) {
    throw Error("no prediction matches a manifest record");
  }
  // Accumulate in manifest order so the report does not depend on the order
  // of the prediction file.
  std::unordered_map<std::string, std::size_t> rank;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    rank.emplace(truth[i].first, i);
  }
  std::sort(pairs.begin(), pairs.end(), [&rank](const EvalPair& a, const EvalPair& b) {
    return rank.at(a.image_id) < rank.at(b.image_id);
  });
  std::sort(report.unmatched.begin(), report.unmatched.end());
  report.mae = mae(pairs);
  const MseResult m = mse(pairs);
  report.mse = m.mse;
  report.rmse = m.rmse;
  report.n = pairs.size();
  return report;
}

EvalReport evaluate(const std::filesystem::path& predictions,
                    const std::filesystem::path& manifest) {
  const DatasetManifest m = read_manifest(manifest);
  std::vector<std::pair<std::string, std::size_t>> truth;
  truth.reserve(m.records.size());
  for (const ManifestRecord& r : m.records) {
    truth.emplace_back(r.image_id, r.count);
  }
  const auto preds = read_predictions(predictions);
  return evaluate(preds, truth);
}

nlohmann::json to_json(const EvalReport& report) {
  return nlohmann::json{{"n", report.n},
                        {"mae", report.mae},
                        {"mse", report.mse},
                        {"rmse", report.rmse},
                        {"unmatched", report.unmatched}};
}

}  // namespace drcount
