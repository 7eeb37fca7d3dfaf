#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "drcount/camera.hpp"
#include "drcount/math.hpp"
#include "drcount/mesh.hpp"

namespace drcount {

/// The per-instance 3D transform applied in a run. A run uses exactly one.
enum class TransformType { kNone, kScale, kRandomize, kExtrude };

enum class PlacementMode { kGmm, kUniform };

enum class MixtureWeights { kUniform, kDirichlet };

std::string_view to_string(TransformType t);
std::string_view to_string(PlacementMode m);
std::string_view to_string(MixtureWeights w);

struct LightConfig {
  std::size_t count_min = 2;
  std::size_t count_max = 4;
  Vec3 color_min{0.3, 0.3, 0.3};
  Vec3 color_max{1.0, 1.0, 1.0};
  double intensity_min = 0.3;
  double intensity_max = 0.9;
  double ambient_min = 0.15;
  double ambient_max = 0.45;
  // Lights are placed in the placement region inflated by this margin.
  double margin = 6.0;

  friend bool operator==(const LightConfig&, const LightConfig&) = default;
};

struct PlacementConfig {
  PlacementMode mode = PlacementMode::kGmm;
  MixtureWeights weights = MixtureWeights::kUniform;
  // Explicit region; when absent the camera's ground footprint is used.
  std::optional<Box3> region;
  double ground_y = 0.0;
  double depth_near = 4.0;
  double depth_far = 30.0;
  double height = 0.5;

  friend bool operator==(const PlacementConfig&, const PlacementConfig&) = default;
};

struct SceneConfig {
  std::size_t objects_min = 20;
  std::size_t objects_max = 60;
  std::size_t face_budget = kDefaultFaceBudget;

  TransformType transform = TransformType::kRandomize;
  double randomize_factor = 0.4;
  double axis_scale_min = 0.5;
  double axis_scale_max = 2.0;
  // World height of an instance with object scale K is K * scale_reference.
  double scale_reference = 10.0;

  PlacementConfig placement;
  LightConfig lights;
  Camera camera;

  bool shadows = false;
  double shadow_strength = 0.35;

  std::filesystem::path mesh_dir;
  std::filesystem::path texture_dir;
  std::filesystem::path background_dir;
  std::vector<std::string> excluded_categories;

  friend bool operator==(const SceneConfig&, const SceneConfig&) = default;
};

struct AugmentConfig {
  bool hflip = false;
  std::size_t crops_per_image = 0;
  std::size_t crop_size = 512;

  friend bool operator==(const AugmentConfig&, const AugmentConfig&) = default;
};

struct DensityConfig {
  bool export_maps = false;
  double sigma = 4.0;

  friend bool operator==(const DensityConfig&, const DensityConfig&) = default;
};

struct DatasetConfig {
  std::uint64_t seed = 0;
  std::size_t dataset_size = 2000;
  SceneConfig scene;
  AugmentConfig augment;
  DensityConfig density;

  /// Records produced per generated scene.
  std::size_t records_per_image() const {
    return 1 + (augment.hflip ? 1 : 0) + augment.crops_per_image;
  }

  friend bool operator==(const DatasetConfig&, const DatasetConfig&) = default;
};

/// Throws ConfigError when a value is out of range.
void validate_config(const DatasetConfig& config);

/// Parses a configuration document. Missing keys take the defaults above;
/// unknown keys and wrongly typed values are ConfigErrors. Relative asset
/// directories are resolved against `base_dir`.
DatasetConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});

/// Reads a JSON configuration file. Throws ConfigError.
DatasetConfig load_config(const std::filesystem::path& path);

/// Complete snapshot, accepted back by parse_config.
nlohmann::json to_json(const DatasetConfig& config);

}  // namespace drcount
