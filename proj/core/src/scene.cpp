#include "drcount/scene.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace drcount {

void GmmSpec::validate() const {
  if (means.empty() || weights.size() != means.size()) {
    throw std::invalid_argument("gmm: need matching, non-empty weights and means");
  }
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0 && w <= 1.0)) {
      throw std::invalid_argument("gmm: weights must be in [0,1]");
    }
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("gmm: weights must sum to 1");
  }
}

std::size_t sample_component_count(std::size_t n_objects, Rng& rng) {
  if (n_objects == 0) {
    return 0;
  }
  const double n = static_cast<double>(n_objects);
  const double draw = rng.uniform(1.0 + n / 20.0, 2.0 + n / 8.0);
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(draw)));
}

Vec3 sample_uniform_point(const Box3& region, Rng& rng, const PointFilter& filter) {
  Vec3 p;
  for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
    p = {rng.uniform(region.min.x, region.max.x), rng.uniform(region.min.y, region.max.y),
         rng.uniform(region.min.z, region.max.z)};
    if (!filter || filter(p)) {
      break;
    }
  }
  return p;
}

GmmSpec make_gmm(std::size_t n_objects, const Box3& region, MixtureWeights weights, Rng& rng,
                 const PointFilter& filter) {
  GmmSpec gmm;
  const std::size_t k = std::max<std::size_t>(1, sample_component_count(n_objects, rng));
  gmm.means.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    gmm.means.push_back(sample_uniform_point(region, rng, filter));
  }
  if (weights == MixtureWeights::kUniform) {
    gmm.weights.assign(k, 1.0 / static_cast<double>(k));
  } else {
    // Normalized unit exponentials are Dirichlet(1, ..., 1).
    double total = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      gmm.weights.push_back(-std::log(1.0 - rng.uniform01()));
      total += gmm.weights.back();
    }
    if (total > 0.0) {
      for (double& w : gmm.weights) {
        w /= total;
      }
    } else {
      gmm.weights.assign(k, 1.0 / static_cast<double>(k));
    }
  }
  return gmm;
}

std::vector<Vec3> sample_gmm(const GmmSpec& gmm, std::size_t n, Rng& rng) {
  gmm.validate();
  std::vector<Vec3> points;
  points.reserve(n);
  for (std::size_t s = 0; s < n; ++s) {
    const double u = rng.uniform01();
    std::size_t component = gmm.size() - 1;
    double cumulative = 0.0;
    for (std::size_t i = 0; i < gmm.size(); ++i) {
      cumulative += gmm.weights[i];
      if (u < cumulative) {
        component = i;
        break;
      }
    }
    const Vec3& mu = gmm.means[component];
    const double dx = rng.standard_normal();
    const double dy = rng.standard_normal();
    const double dz = rng.standard_normal();
    points.push_back({mu.x + dx, mu.y + dy, mu.z + dz});
  }
  return points;
}

std::vector<Vec3> sample_placements(std::size_t n_objects, const Box3& region, PlacementMode mode,
                                    MixtureWeights weights, Rng& rng, const PointFilter& filter) {
  if (!(region.volume() > 0.0)) {
    throw std::invalid_argument("sample_placements: region must have positive volume");
  }
  if (n_objects == 0) {
    return {};
  }
  if (mode == PlacementMode::kUniform) {
    std::vector<Vec3> points;
    points.reserve(n_objects);
    for (std::size_t i = 0; i < n_objects; ++i) {
      points.push_back(sample_uniform_point(region, rng, filter));
    }
    return points;
  }
  const GmmSpec gmm = make_gmm(n_objects, region, weights, rng, filter);
  std::vector<Vec3> points = sample_gmm(gmm, n_objects, rng);
  for (Vec3& p : points) {
    p = region.clamp(p);
  }
  return points;
}

std::vector<std::size_t> assign_textures(std::size_t part_count, std::size_t library_size,
                                         Rng& rng) {
  if (library_size == 0) {
    throw std::invalid_argument("assign_textures: texture library is empty");
  }
  std::vector<std::size_t> out(part_count);
  for (std::size_t& t : out) {
    t = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(library_size) - 1));
  }
  return out;
}

std::size_t select_background(const ImageLibrary& library,
                              std::span<const std::string> excluded, Rng& rng) {
  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < library.items.size(); ++i) {
    if (std::find(excluded.begin(), excluded.end(), library.items[i].category) == excluded.end()) {
      eligible.push_back(i);
    }
  }
  if (eligible.empty()) {
    throw std::invalid_argument("select_background: every background category is excluded");
  }
  return eligible[static_cast<std::size_t>(
      rng.uniform_int(0, static_cast<std::int64_t>(eligible.size()) - 1))];
}

std::vector<Light> place_lights(const LightConfig& config, const Box3& region, Rng& rng) {
  if (config.count_min == 0 || config.count_min > config.count_max) {
    throw std::invalid_argument("place_lights: need 1 <= min count <= max count");
  }
  const auto count = static_cast<std::size_t>(
      rng.uniform_int(static_cast<std::int64_t>(config.count_min),
                      static_cast<std::int64_t>(config.count_max)));
  const Vec3 lo{region.min.x - config.margin, region.min.y, region.min.z - config.margin};
  const Vec3 hi{region.max.x + config.margin, region.max.y + config.margin,
                region.max.z + config.margin};
  std::vector<Light> lights;
  lights.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Light l;
    l.position = {rng.uniform(lo.x, hi.x), rng.uniform(lo.y, hi.y), rng.uniform(lo.z, hi.z)};
    l.color = {rng.uniform(config.color_min.x, config.color_max.x),
               rng.uniform(config.color_min.y, config.color_max.y),
               rng.uniform(config.color_min.z, config.color_max.z)};
    l.intensity = rng.uniform(config.intensity_min, config.intensity_max);
    lights.push_back(l);
  }
  return lights;
}

Mesh instantiate(const Mesh& base, const TransformRecord& record, double scale_reference,
                 double yaw, const Vec3& position) {
  Mesh m = normalize_to_unit_height(base);
  switch (record.type) {
    case TransformType::kNone:
      break;
    case TransformType::kScale:
      m = scale_axis(m, record.axis, record.axis_factor);
      break;
    case TransformType::kRandomize: {
      Rng rng(record.seed);
      m = randomize_vertices(m, record.randomize_factor, rng);
      break;
    }
    case TransformType::kExtrude:
      m = solidify(m, record.thickness);
      break;
  }
  m = scale_uniform(m, record.object_scale * scale_reference);
  return place(m, yaw, position);
}

Box3 placement_region(const SceneConfig& config) {
  if (config.placement.region) {
    return *config.placement.region;
  }
  return frustum_footprint(config.camera, config.placement.ground_y, config.placement.depth_near,
                           config.placement.depth_far, config.placement.height);
}

PointFilter placement_filter(const SceneConfig& config) {
  if (config.placement.region) {
    return {};
  }
  return [cam = config.camera](const Vec3& p) {
    const auto pr = project(cam, p);
    return pr && in_image(pr->x, pr->y, cam.width, cam.height);
  };
}

Scene build_scene(const SceneConfig& config, const AssetLibraries& assets, const Rng& rng) {
  if (assets.meshes.size() == 0 || assets.textures.size() == 0) {
    throw std::invalid_argument("build_scene: mesh and texture libraries must be non-empty");
  }
  Scene scene;
  scene.camera = config.camera;
  scene.region = placement_region(config);

  Rng count_rng = rng.fork("count");
  scene.requested_objects = static_cast<std::size_t>(
      count_rng.uniform_int(static_cast<std::int64_t>(config.objects_min),
                            static_cast<std::int64_t>(config.objects_max)));
  const std::size_t n = scene.requested_objects;

  Rng placement_rng = rng.fork("placement");
  const std::vector<Vec3> positions =
      sample_placements(n, scene.region, config.placement.mode, config.placement.weights,
                        placement_rng, placement_filter(config));

  scene.instances.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Rng inst_rng = rng.fork("instance", i);
    SceneInstance inst;
    inst.asset_index = static_cast<std::size_t>(
        inst_rng.uniform_int(0, static_cast<std::int64_t>(assets.meshes.size()) - 1));
    const MeshAsset& asset = assets.meshes.items[inst.asset_index];
    inst.asset_id = asset.id;
    inst.position = positions[i];
    inst.yaw = inst_rng.uniform(0.0, 2.0 * std::numbers::pi);

    TransformRecord& t = inst.transform;
    t.type = config.transform;
    t.object_scale = sample_object_scale(n, inst_rng);
    switch (config.transform) {
      case TransformType::kNone:
        break;
      case TransformType::kScale:
        t.axis = static_cast<Axis>(inst_rng.uniform_int(0, 2));
        t.axis_factor = inst_rng.uniform(config.axis_scale_min, config.axis_scale_max);
        break;
      case TransformType::kRandomize:
        t.randomize_factor = config.randomize_factor;
        t.seed = inst_rng.fork("randomize").seed();
        break;
      case TransformType::kExtrude:
        t.thickness = sample_thickness(inst_rng);
        break;
    }

    Rng texture_rng = rng.fork("texture", i);
    inst.part_textures =
        assign_textures(asset.mesh.part_count(), assets.textures.size(), texture_rng);
    inst.world = instantiate(asset.mesh, t, config.scale_reference, inst.yaw, inst.position);
    scene.instances.push_back(std::move(inst));
  }

  if (assets.backgrounds.size() > 0) {
    Rng bg_rng = rng.fork("background");
    scene.background_index =
        select_background(assets.backgrounds, config.excluded_categories, bg_rng);
    scene.background_id = assets.backgrounds.items[scene.background_index].id;
  }

  Rng light_rng = rng.fork("lights");
  scene.lights = place_lights(config.lights, scene.region, light_rng);
  scene.ambient = light_rng.uniform(config.lights.ambient_min, config.lights.ambient_max);
  return scene;
}

}  // namespace drcount
