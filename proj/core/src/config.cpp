#include "drcount/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <utility>

#include "drcount/error.hpp"

namespace drcount {

using nlohmann::json;

namespace {

// Reads one JSON object, tracking which keys were consumed so that leftovers
// can be reported as unknown.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) {
      throw ConfigError(where() + "expected an object");
    }
  }

  std::optional<ObjectReader> child(const std::string& key) {
    if (!obj_.contains(key)) {
      return std::nullopt;
    }
    used_.insert(key);
    return ObjectReader(obj_.at(key), path_.empty() ? key : path_ + "." + key);
  }

  void get(const std::string& key, std::size_t& out) {
    if (const json* v = take(key)) {
      if (!v->is_number_unsigned()) {
        throw ConfigError(where(key) + "expected a non-negative integer");
      }
      out = v->get<std::size_t>();
    }
  }

  void get_u64(const std::string& key, std::uint64_t& out) {
    if (const json* v = take(key)) {
      if (!v->is_number_unsigned()) {
        throw ConfigError(where(key) + "expected a non-negative integer");
      }
      out = v->get<std::uint64_t>();
    }
  }

  void get(const std::string& key, double& out) {
    if (const json* v = take(key)) {
      out = number(*v, key);
    }
  }

  void get(const std::string& key, bool& out) {
    if (const json* v = take(key)) {
      if (!v->is_boolean()) {
        throw ConfigError(where(key) + "expected true or false");
      }
      out = v->get<bool>();
    }
  }

  void get(const std::string& key, std::string& out) {
    if (const json* v = take(key)) {
      if (!v->is_string()) {
        throw ConfigError(where(key) + "expected a string");
      }
      out = v->get<std::string>();
    }
  }

  void get(const std::string& key, Vec3& out) {
    if (const json* v = take(key)) {
      if (!v->is_array() || v->size() != 3) {
        throw ConfigError(where(key) + "expected [x, y, z]");
      }
      out = {number((*v)[0], key), number((*v)[1], key), number((*v)[2], key)};
    }
  }

  void get_range(const std::string& key, double& lo, double& hi) {
    if (const json* v = take(key)) {
      if (!v->is_array() || v->size() != 2) {
        throw ConfigError(where(key) + "expected [min, max]");
      }
      lo = number((*v)[0], key);
      hi = number((*v)[1], key);
    }
  }

  void get_range(const std::string& key, std::size_t& lo, std::size_t& hi) {
    if (const json* v = take(key)) {
      if (!v->is_array() || v->size() != 2 || !(*v)[0].is_number_unsigned() ||
          !(*v)[1].is_number_unsigned()) {
        throw ConfigError(where(key) + "expected [min, max] of non-negative integers");
      }
      lo = (*v)[0].get<std::size_t>();
      hi = (*v)[1].get<std::size_t>();
    }
  }

  void get(const std::string& key, std::vector<std::string>& out) {
    if (const json* v = take(key)) {
      if (!v->is_array()) {
        throw ConfigError(where(key) + "expected an array of strings");
      }
      out.clear();
      for (const json& s : *v) {
        if (!s.is_string()) {
          throw ConfigError(where(key) + "expected an array of strings");
        }
        out.push_back(s.get<std::string>());
      }
    }
  }

  /// Throws on the first key that nothing consumed.
  void finish() const {
    for (const auto& item : obj_.items()) {
      if (!used_.contains(item.key())) {
        throw ConfigError("unknown configuration key '" +
                          (path_.empty() ? item.key() : path_ + "." + item.key()) + "'");
      }
    }
  }

 private:
  const json* take(const std::string& key) {
    if (!obj_.contains(key)) {
      return nullptr;
    }
    used_.insert(key);
    return &obj_.at(key);
  }

  double number(const json& v, const std::string& key) const {
    if (!v.is_number()) {
      throw ConfigError(where(key) + "expected a number");
    }
    const double d = v.get<double>();
    if (!std::isfinite(d)) {
      throw ConfigError(where(key) + "expected a finite number");
    }
    return d;
  }

  std::string where(const std::string& key = {}) const {
    std::string p = path_;
    if (!key.empty()) {
      p = p.empty() ? key : p + "." + key;
    }
    return "config" + (p.empty() ? std::string() : " '" + p + "'") + ": ";
  }

  const json& obj_;
  std::string path_;
  std::set<std::string> used_;
};

template <typename Enum, std::size_t N>
Enum parse_enum(const std::string& text, const std::pair<Enum, const char*> (&table)[N],
                const std::string& key) {
  std::string options;
  for (const auto& [value, name] : table) {
    if (text == name) {
      return value;
    }
    options += std::string(options.empty() ? "" : "|") + name;
  }
  throw ConfigError("config '" + key + "': expected one of " + options + ", got '" + text + "'");
}

constexpr std::pair<TransformType, const char*> kTransformNames[] = {
    {TransformType::kNone, "none"},
    {TransformType::kScale, "scale"},
    {TransformType::kRandomize, "randomize"},
    {TransformType::kExtrude, "extrude"},
};
constexpr std::pair<PlacementMode, const char*> kPlacementNames[] = {
    {PlacementMode::kGmm, "gmm"},
    {PlacementMode::kUniform, "uniform"},
};
constexpr std::pair<MixtureWeights, const char*> kWeightNames[] = {
    {MixtureWeights::kUniform, "uniform"},
    {MixtureWeights::kDirichlet, "dirichlet"},
};

template <typename Enum, std::size_t N>
std::string_view enum_name(Enum v, const std::pair<Enum, const char*> (&table)[N]) {
  for (const auto& [value, name] : table) {
    if (value == v) {
      return name;
    }
  }
  return "?";
}

json vec_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

std::filesystem::path resolve(const std::string& p, const std::filesystem::path& base) {
  if (p.empty()) {
    return {};
  }
  std::filesystem::path path(p);
  if (path.is_relative() && !base.empty()) {
    path = base / path;
  }
  return path.lexically_normal();
}

}  // namespace

std::string_view to_string(TransformType t) { return enum_name(t, kTransformNames); }
std::string_view to_string(PlacementMode m) { return enum_name(m, kPlacementNames); }
std::string_view to_string(MixtureWeights w) { return enum_name(w, kWeightNames); }

void validate_config(const DatasetConfig& c) {
  const SceneConfig& s = c.scene;
  auto require = [](bool ok, const char* what) {
    if (!ok) {
      throw ConfigError(std::string("config: ") + what);
    }
  };
  require(c.dataset_size >= 1, "dataset_size must be at least 1");
  require(s.objects_min <= s.objects_max, "objects.min must not exceed objects.max");
  require(s.face_budget >= 1, "objects.face_budget must be at least 1");
  require(s.randomize_factor >= 0.0, "transform.randomize_factor must be non-negative");
  require(s.axis_scale_min > 0.0 && s.axis_scale_min <= s.axis_scale_max,
          "transform.axis_scale_range must satisfy 0 < min <= max");
  require(s.scale_reference > 0.0, "scale_reference must be positive");
  require(s.placement.depth_near > 0.0 && s.placement.depth_near < s.placement.depth_far,
          "placement.depth_band must satisfy 0 < near < far");
  require(s.placement.height > 0.0, "placement.height must be positive");
  if (s.placement.region) {
    require(s.placement.region->volume() > 0.0, "placement.region must have positive volume");
  }
  require(s.lights.count_min >= 1 && s.lights.count_min <= s.lights.count_max,
          "lights.count must satisfy 1 <= min <= max");
  for (std::size_t a = 0; a < 3; ++a) {
    require(s.lights.color_min[a] >= 0.0 && s.lights.color_min[a] <= s.lights.color_max[a],
            "lights color bounds must satisfy 0 <= min <= max");
  }
  require(s.lights.intensity_min >= 0.0 && s.lights.intensity_min <= s.lights.intensity_max,
          "lights.intensity must satisfy 0 <= min <= max");
  require(s.lights.ambient_min >= 0.0 && s.lights.ambient_min <= s.lights.ambient_max,
          "lights.ambient must satisfy 0 <= min <= max");
  require(s.lights.margin >= 0.0, "lights.margin must be non-negative");
  require(s.shadow_strength >= 0.0 && s.shadow_strength <= 1.0,
          "shadows.strength must be in [0, 1]");
  require(c.augment.crop_size >= 1, "augment.crop_size must be at least 1");
  require(c.density.sigma > 0.0, "density.sigma must be positive");
  try {
    s.camera.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

DatasetConfig parse_config(const json& doc, const std::filesystem::path& base_dir) {
  DatasetConfig c;
  SceneConfig& s = c.scene;
  ObjectReader root(doc, "");
  root.get_u64("seed", c.seed);
  root.get("dataset_size", c.dataset_size);
  root.get("scale_reference", s.scale_reference);

  if (auto r = root.child("image")) {
    r->get("width", s.camera.width);
    r->get("height", s.camera.height);
    r->finish();
  }
  if (auto r = root.child("objects")) {
    r->get("min", s.objects_min);
    r->get("max", s.objects_max);
    r->get("face_budget", s.face_budget);
    r->finish();
  }
  if (auto r = root.child("transform")) {
    std::string type(to_string(s.transform));
    r->get("type", type);
    s.transform = parse_enum(type, kTransformNames, "transform.type");
    r->get("randomize_factor", s.randomize_factor);
    r->get_range("axis_scale_range", s.axis_scale_min, s.axis_scale_max);
    r->finish();
  }
  if (auto r = root.child("placement")) {
    std::string mode(to_string(s.placement.mode));
    std::string weights(to_string(s.placement.weights));
    r->get("mode", mode);
    r->get("weights", weights);
    s.placement.mode = parse_enum(mode, kPlacementNames, "placement.mode");
    s.placement.weights = parse_enum(weights, kWeightNames, "placement.weights");
    if (auto region = r->child("region")) {
      Box3 box;
      region->get("min", box.min);
      region->get("max", box.max);
      region->finish();
      s.placement.region = box;
    }
    r->get("ground_y", s.placement.ground_y);
    r->get_range("depth_band", s.placement.depth_near, s.placement.depth_far);
    r->get("height", s.placement.height);
    r->finish();
  }
  if (auto r = root.child("assets")) {
    std::string meshes;
    std::string textures;
    std::string backgrounds;
    r->get("meshes", meshes);
    r->get("textures", textures);
    r->get("backgrounds", backgrounds);
    r->get("excluded_categories", s.excluded_categories);
    r->finish();
    s.mesh_dir = resolve(meshes, base_dir);
    s.texture_dir = resolve(textures, base_dir);
    s.background_dir = resolve(backgrounds, base_dir);
  }
  if (auto r = root.child("lights")) {
    r->get_range("count", s.lights.count_min, s.lights.count_max);
    r->get("color_min", s.lights.color_min);
    r->get("color_max", s.lights.color_max);
    r->get_range("intensity", s.lights.intensity_min, s.lights.intensity_max);
    r->get_range("ambient", s.lights.ambient_min, s.lights.ambient_max);
    r->get("margin", s.lights.margin);
    r->finish();
  }
  if (auto r = root.child("camera")) {
    r->get("position", s.camera.position);
    r->get("target", s.camera.target);
    r->get("up", s.camera.up);
    r->get("fov_deg", s.camera.fov_y_deg);
    r->get("near", s.camera.near_clip);
    r->get("far", s.camera.far_clip);
    r->finish();
  }
  if (auto r = root.child("shadows")) {
    r->get("enabled", s.shadows);
    r->get("strength", s.shadow_strength);
    r->finish();
  }
  if (auto r = root.child("augment")) {
    r->get("hflip", c.augment.hflip);
    r->get("crops_per_image", c.augment.crops_per_image);
    r->get("crop_size", c.augment.crop_size);
    r->finish();
  }
  if (auto r = root.child("density")) {
    r->get("export", c.density.export_maps);
    r->get("sigma", c.density.sigma);
    r->finish();
  }
  root.finish();
  validate_config(c);
  return c;
}

DatasetConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot read config file: " + path.string());
  }
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_config(doc, path.parent_path());
}

json to_json(const DatasetConfig& c) {
  const SceneConfig& s = c.scene;
  json placement{
      {"mode", to_string(s.placement.mode)},
      {"weights", to_string(s.placement.weights)},
      {"ground_y", s.placement.ground_y},
      {"depth_band", {s.placement.depth_near, s.placement.depth_far}},
      {"height", s.placement.height},
  };
  if (s.placement.region) {
    placement["region"] = {{"min", vec_json(s.placement.region->min)},
                           {"max", vec_json(s.placement.region->max)}};
  }
  return json{
      {"seed", c.seed},
      {"dataset_size", c.dataset_size},
      {"scale_reference", s.scale_reference},
      {"image", {{"width", s.camera.width}, {"height", s.camera.height}}},
      {"objects",
       {{"min", s.objects_min}, {"max", s.objects_max}, {"face_budget", s.face_budget}}},
      {"transform",
       {{"type", to_string(s.transform)},
        {"randomize_factor", s.randomize_factor},
        {"axis_scale_range", {s.axis_scale_min, s.axis_scale_max}}}},
      {"placement", placement},
      {"assets",
       {{"meshes", s.mesh_dir.generic_string()},
        {"textures", s.texture_dir.generic_string()},
        {"backgrounds", s.background_dir.generic_string()},
        {"excluded_categories", s.excluded_categories}}},
      {"lights",
       {{"count", {s.lights.count_min, s.lights.count_max}},
        {"color_min", vec_json(s.lights.color_min)},
        {"color_max", vec_json(s.lights.color_max)},
        {"intensity", {s.lights.intensity_min, s.lights.intensity_max}},
        {"ambient", {s.lights.ambient_min, s.lights.ambient_max}},
        {"margin", s.lights.margin}}},
      {"camera",
       {{"position", vec_json(s.camera.position)},
        {"target", vec_json(s.camera.target)},
        {"up", vec_json(s.camera.up)},
        {"fov_deg", s.camera.fov_y_deg},
        {"near", s.camera.near_clip},
        {"far", s.camera.far_clip}}},
      {"shadows", {{"enabled", s.shadows}, {"strength", s.shadow_strength}}},
      {"augment",
       {{"hflip", c.augment.hflip},
        {"crops_per_image", c.augment.crops_per_image},
        {"crop_size", c.augment.crop_size}}},
      {"density", {{"export", c.density.export_maps}, {"sigma", c.density.sigma}}},
  };
}

}  // namespace drcount
