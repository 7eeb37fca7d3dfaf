#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "drcount/annotate.hpp"
#include "drcount/assets.hpp"
#include "drcount/config.hpp"
#include "drcount/image.hpp"
#include "drcount/scene.hpp"

namespace drcount {

inline constexpr int kManifestVersion = 1;
inline constexpr const char* kManifestFileName = "manifest.json";

enum class Variant { kOriginal, kHflip, kCrop };

std::string_view to_string(Variant v);

/// One emitted image. File paths are relative to the manifest's directory.
struct ManifestRecord {
  std::string image_id;
  std::string image_file;
  std::string annotation_file;
  std::string density_file;  // empty when density maps are not exported
  std::size_t count = 0;
  std::size_t requested_objects = 0;
  std::uint64_t seed = 0;  // per-image seed of the source scene
  std::string transform;
  std::string background_id;
  Variant variant = Variant::kOriginal;
  std::size_t source_index = 0;
  std::vector<std::string> flags;

  friend bool operator==(const ManifestRecord&, const ManifestRecord&) = default;
};

struct DatasetManifest {
  int version = kManifestVersion;
  std::uint64_t master_seed = 0;
  nlohmann::json config;  // full snapshot, accepted by parse_config
  std::vector<ManifestRecord> records;
};

nlohmann::json to_json(const DatasetManifest& manifest);
DatasetManifest manifest_from_json(const nlohmann::json& doc);

/// Throws drcount::Error on unreadable or malformed manifests.
DatasetManifest read_manifest(const std::filesystem::path& path);

/// Writes to a temporary file in the same directory and renames it into
/// place.
void write_manifest_atomic(const DatasetManifest& manifest, const std::filesystem::path& path);

/// Seed of image `index`'s scene.
std::uint64_t image_seed(std::uint64_t master_seed, std::size_t index);

/// Loads the three asset libraries named by the configuration.
AssetLibraries load_assets(const SceneConfig& config);

/// The scene, rendered image and annotation of one dataset index.
struct Sample {
  Scene scene;
  Image image;
  Annotation annotation;
};

Sample render_sample(const DatasetConfig& config, const AssetLibraries& assets,
                     std::size_t index);

/// Generates config.dataset_size scenes with `workers` threads (0 means one
/// per hardware thread) and writes images/, annotations/, density/ and the
/// manifest under `out_dir`. Output bytes depend only on the configuration.
DatasetManifest generate_dataset(const DatasetConfig& config, const AssetLibraries& assets,
                                 const std::filesystem::path& out_dir, std::size_t workers = 1);

/// Loads assets from the configured directories first.
DatasetManifest generate_dataset(const DatasetConfig& config,
                                 const std::filesystem::path& out_dir, std::size_t workers = 1);

struct ValidationReport {
  std::size_t records_checked = 0;
  std::vector<std::string> failures;

  bool ok() const { return failures.empty(); }
};

/// Re-checks a generated dataset: record count, referenced files, image
/// sizes, count == |dots|, dot bounds, density integrals and excluded
/// background categories. Never throws for dataset defects; they become
/// failures. A manifest that cannot be read at all is also reported as a
/// failure.
ValidationReport validate_dataset(const std::filesystem::path& manifest_path);

}  // namespace drcount
