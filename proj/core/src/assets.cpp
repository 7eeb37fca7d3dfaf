#include "drcount/assets.hpp"

#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "drcount/error.hpp"

namespace drcount {

namespace {

template <typename Item, typename LoadFn>
std::vector<Item> load_entries(const std::filesystem::path& dir, LoadFn load) {
  const std::vector<IndexEntry> entries = read_index(dir);
  std::vector<Item> items;
  items.reserve(entries.size());
  std::string failures;
  for (const IndexEntry& e : entries) {
    try {
      items.push_back(Item{e.id, e.category, load(dir / e.file)});
    } catch (const Error& err) {
      failures += "\n  " + e.id + ": " + err.what();
    }
  }
  if (!failures.empty()) {
    throw AssetError("bad assets in " + dir.string() + ":" + failures);
  }
  if (items.empty()) {
    throw AssetError("asset library is empty: " + dir.string());
  }
  return items;
}

}  // namespace

std::vector<IndexEntry> read_index(const std::filesystem::path& dir) {
  const std::filesystem::path path = dir / kIndexFileName;
  std::ifstream in(path);
  if (!in) {
    throw AssetError("missing asset index: " + path.string());
  }
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw AssetError(path.string() + ": " + e.what());
  }
  if (!doc.is_object() || !doc.contains("assets") || !doc["assets"].is_array()) {
    throw AssetError(path.string() + ": expected {\"assets\": [...]}");
  }
  std::vector<IndexEntry> out;
  std::set<std::string> seen;
  for (const auto& item : doc["assets"]) {
    if (!item.is_object() || !item.contains("id") || !item.contains("file") ||
        !item["id"].is_string() || !item["file"].is_string()) {
      throw AssetError(path.string() + ": every asset needs string 'id' and 'file'");
    }
    IndexEntry e;
    e.id = item["id"].get<std::string>();
    e.file = item["file"].get<std::string>();
    if (item.contains("category")) {
      e.category = item["category"].get<std::string>();
    }
    if (!seen.insert(e.id).second) {
      throw AssetError(path.string() + ": duplicate asset id '" + e.id + "'");
    }
    out.push_back(std::move(e));
  }
  return out;
}

void write_index(const std::filesystem::path& dir, const std::vector<IndexEntry>& entries) {
  nlohmann::json doc;
  doc["assets"] = nlohmann::json::array();
  for (const IndexEntry& e : entries) {
    nlohmann::json item{{"id", e.id}, {"file", e.file}};
    if (!e.category.empty()) {
      item["category"] = e.category;
    }
    doc["assets"].push_back(std::move(item));
  }
  std::ofstream out(dir / kIndexFileName);
  out << doc.dump(2) << '\n';
  if (!out) {
    throw Error("cannot write " + (dir / kIndexFileName).string());
  }
}

ImageLibrary load_image_library(const std::filesystem::path& dir) {
  return ImageLibrary{dir, load_entries<ImageAsset>(dir, [](const std::filesystem::path& p) {
                        return load_image(p);
                      })};
}

MeshLibrary load_mesh_library(const std::filesystem::path& dir, std::size_t face_budget) {
  return MeshLibrary{dir, load_entries<MeshAsset>(dir, [face_budget](const std::filesystem::path& p) {
                       return load_mesh(p, face_budget);
                     })};
}

}  // namespace drcount
