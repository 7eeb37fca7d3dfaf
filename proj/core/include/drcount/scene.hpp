#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "drcount/assets.hpp"
#include "drcount/camera.hpp"
#include "drcount/config.hpp"
#include "drcount/math.hpp"
#include "drcount/mesh.hpp"
#include "drcount/rng.hpp"
#include "drcount/transforms.hpp"

namespace drcount {

/// Mixture of identity-covariance Gaussians over 3D positions.
struct GmmSpec {
  std::vector<double> weights;
  std::vector<Vec3> means;

  std::size_t size() const { return means.size(); }

  /// Throws std::invalid_argument unless there is at least one component,
  /// weights and means agree in length, weights are in [0,1] and sum to 1
  /// within 1e-9.
  void validate() const;
};

/// Number of mixture components for a scene with `n_objects` instances:
/// a real draw from U(1 + n/20, 2 + n/8), rounded to nearest, at least 1.
/// Returns 0 for an empty scene.
std::size_t sample_component_count(std::size_t n_objects, Rng& rng);

/// Optional restriction of the region to its visible part. Uniform draws are
/// rejected until they satisfy it (up to kMaxRejections tries, after which
/// the last draw is kept).
using PointFilter = std::function<bool(const Vec3&)>;
inline constexpr int kMaxRejections = 256;

/// Point uniform in `region` (and accepted by `filter` when given).
Vec3 sample_uniform_point(const Box3& region, Rng& rng, const PointFilter& filter = {});

/// Component count and means uniform in `region`; weights uniform (1/K) or
/// flat-Dirichlet.
GmmSpec make_gmm(std::size_t n_objects, const Box3& region, MixtureWeights weights, Rng& rng,
                 const PointFilter& filter = {});

/// Unclamped draws: pick a component by weight, add a standard normal offset
/// per axis to its mean.
std::vector<Vec3> sample_gmm(const GmmSpec& gmm, std::size_t n, Rng& rng);

/// Instance positions inside `region`. In GMM mode the means are uniform
/// points and samples that leave the region are clamped onto it. Uniform mode
/// draws every position as a uniform point. Throws std::invalid_argument for
/// a region without positive volume.
std::vector<Vec3> sample_placements(std::size_t n_objects, const Box3& region, PlacementMode mode,
                                    MixtureWeights weights, Rng& rng,
                                    const PointFilter& filter = {});

/// One uniformly drawn texture index per part; duplicates allowed.
/// Throws std::invalid_argument for an empty library.
std::vector<std::size_t> assign_textures(std::size_t part_count, std::size_t library_size,
                                         Rng& rng);

/// Uniform draw over the library entries whose category is not excluded.
/// Throws std::invalid_argument when nothing is eligible.
std::size_t select_background(const ImageLibrary& library,
                              std::span<const std::string> excluded, Rng& rng);

struct Light {
  Vec3 position;
  Vec3 color;  // linear RGB in [0,1]
  double intensity = 1.0;

  friend bool operator==(const Light&, const Light&) = default;
};

/// Throws std::invalid_argument for count_min == 0 or min > max.
std::vector<Light> place_lights(const LightConfig& config, const Box3& region, Rng& rng);

/// Everything needed to rebuild an instance's geometry from its base asset.
struct TransformRecord {
  TransformType type = TransformType::kNone;
  double object_scale = 1.0;  // K
  Axis axis = Axis::kY;       // scale only
  double axis_factor = 1.0;   // scale only
  double randomize_factor = 0.0;
  double thickness = 0.0;     // extrude only
  std::uint64_t seed = 0;     // randomize stream

  friend bool operator==(const TransformRecord&, const TransformRecord&) = default;
};

struct SceneInstance {
  std::size_t asset_index = 0;
  std::string asset_id;
  TransformRecord transform;
  Vec3 position;
  double yaw = 0.0;
  std::vector<std::size_t> part_textures;  // indexed by part label
  Mesh world;                              // transformed, placed geometry

  friend bool operator==(const SceneInstance&, const SceneInstance&) = default;
};

struct Scene {
  std::vector<SceneInstance> instances;
  std::size_t requested_objects = 0;
  std::size_t background_index = 0;
  std::string background_id;
  std::vector<Light> lights;
  double ambient = 0.3;
  Camera camera;
  Box3 region;

  friend bool operator==(const Scene&, const Scene&) = default;
};

/// Rebuilds the world-space mesh of an instance from its unmodified asset.
/// The base is normalized to unit height, transformed, scaled by
/// K * scale_reference, rotated by yaw about +y and moved to `position`.
Mesh instantiate(const Mesh& base, const TransformRecord& record, double scale_reference,
                 double yaw, const Vec3& position);

/// The placement region the scene samples from.
Box3 placement_region(const SceneConfig& config);

/// For camera-derived regions, accepts points that project into the image;
/// empty for an explicit region.
PointFilter placement_filter(const SceneConfig& config);

/// Samples a complete scene. Each stage draws from its own fork of `rng`
/// so the stages do not perturb one another.
Scene build_scene(const SceneConfig& config, const AssetLibraries& assets, const Rng& rng);

}  // namespace drcount
