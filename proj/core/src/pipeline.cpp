#include "drcount/pipeline.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "drcount/error.hpp"
#include "drcount/render.hpp"

namespace drcount {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr const char* kManifestFormat = "drcount-manifest";

std::string index_id(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%06zu", index);
  return buf;
}

Variant parse_variant(const std::string& s) {
  if (s == "original") {
    return Variant::kOriginal;
  }
  if (s == "hflip") {
    return Variant::kHflip;
  }
  if (s == "crop") {
    return Variant::kCrop;
  }
  throw Error("unknown record variant '" + s + "'");
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) {
    throw Error("cannot write " + path.string());
  }
}

struct Emitter {
  const DatasetConfig& config;
  const fs::path& out_dir;

  ManifestRecord emit(const std::string& id, const Image& image, const Annotation& ann,
                      const Sample& source, std::size_t index, Variant variant, bool padded) const {
    ManifestRecord r;
    r.image_id = id;
    r.image_file = "images/" + id + ".png";
    r.annotation_file = "annotations/" + id + ".json";
    if (ann.density) {
      r.density_file = "density/" + id + ".dmap";
      write_density(*ann.density, out_dir / r.density_file);
    }
    save_png(image, out_dir / r.image_file);
    write_text(out_dir / r.annotation_file,
               annotation_to_json(ann, fs::path(r.image_file).filename().string(),
                                  r.density_file.empty()
                                      ? std::string()
                                      : fs::path(r.density_file).filename().string())
                       .dump(2) +
                   "\n");
    r.count = ann.count();
    r.requested_objects = source.scene.requested_objects;
    r.seed = image_seed(config.seed, index);
    r.transform = std::string(to_string(config.scene.transform));
    r.background_id = source.scene.background_id;
    r.variant = variant;
    r.source_index = index;
    if (padded) {
      r.flags.push_back("padded");
    }
    return r;
  }

  std::vector<ManifestRecord> run(const AssetLibraries& assets, std::size_t index) const {
    const Sample sample = render_sample(config, assets, index);
    const std::string base = index_id(index);
    std::vector<ManifestRecord> records;
    records.push_back(
        emit(base, sample.image, sample.annotation, sample, index, Variant::kOriginal, false));
    if (config.augment.hflip) {
      const Augmented f = hflip(sample.image, sample.annotation);
      records.push_back(
          emit(base + "_flip", f.image, f.annotation, sample, index, Variant::kHflip, false));
    }
    const Rng crop_stream(derive_seed(config.seed, index, "crop"));
    for (std::size_t k = 0; k < config.augment.crops_per_image; ++k) {
      Rng rng = crop_stream.fork("window", k);
      const Augmented c = crop(sample.image, sample.annotation, config.augment.crop_size, rng,
                               config.density.sigma);
      records.push_back(emit(base + "_crop" + std::to_string(k), c.image, c.annotation, sample,
                             index, Variant::kCrop, c.padded));
    }
    return records;
  }
};

}  // namespace

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::kOriginal:
      return "original";
    case Variant::kHflip:
      return "hflip";
    case Variant::kCrop:
      return "crop";
  }
  return "?";
}

json to_json(const DatasetManifest& m) {
  json records = json::array();
  for (const ManifestRecord& r : m.records) {
    json rec{{"id", r.image_id},
             {"image", r.image_file},
             {"annotation", r.annotation_file},
             {"count", r.count},
             {"requested_objects", r.requested_objects},
             {"seed", r.seed},
             {"transform", r.transform},
             {"background", r.background_id},
             {"variant", to_string(r.variant)},
             {"source_index", r.source_index},
             {"flags", r.flags}};
    if (!r.density_file.empty()) {
      rec["density"] = r.density_file;
    }
    records.push_back(std::move(rec));
  }
  return json{{"format", kManifestFormat},
              {"version", m.version},
              {"master_seed", m.master_seed},
              {"config", m.config},
              {"records", std::move(records)}};
}

DatasetManifest manifest_from_json(const json& doc) {
  try {
    if (doc.at("format").get<std::string>() != kManifestFormat) {
      throw Error("not a dataset manifest");
    }
    DatasetManifest m;
    m.version = doc.at("version").get<int>();
    if (m.version != kManifestVersion) {
      throw Error("unsupported manifest version " + std::to_string(m.version));
    }
    m.master_seed = doc.at("master_seed").get<std::uint64_t>();
    m.config = doc.at("config");
    for (const json& rec : doc.at("records")) {
      ManifestRecord r;
      r.image_id = rec.at("id").get<std::string>();
      r.image_file = rec.at("image").get<std::string>();
      r.annotation_file = rec.at("annotation").get<std::string>();
      r.density_file = rec.value("density", std::string());
      r.count = rec.at("count").get<std::size_t>();
      r.requested_objects = rec.at("requested_objects").get<std::size_t>();
      r.seed = rec.at("seed").get<std::uint64_t>();
      r.transform = rec.at("transform").get<std::string>();
      r.background_id = rec.at("background").get<std::string>();
      r.variant = parse_variant(rec.at("variant").get<std::string>());
      r.source_index = rec.at("source_index").get<std::size_t>();
      r.flags = rec.at("flags").get<std::vector<std::string>>();
      m.records.push_back(std::move(r));
    }
    return m;
  } catch (const json::exception& e) {
    throw Error(std::string("malformed manifest: ") + e.what());
  }
}

DatasetManifest read_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error("cannot read manifest: " + path.string());
  }
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw Error(path.string() + ": " + e.what());
  }
  return manifest_from_json(doc);
}

void write_manifest_atomic(const DatasetManifest& manifest, const fs::path& path) {
  fs::path tmp = path;
  tmp += ".tmp";
  write_text(tmp, to_json(manifest).dump(2) + "\n");
  fs::rename(tmp, path);
}

std::uint64_t image_seed(std::uint64_t master_seed, std::size_t index) {
  return derive_seed(master_seed, index, "image");
}

AssetLibraries load_assets(const SceneConfig& config) {
  AssetLibraries libs;
  libs.meshes = load_mesh_library(config.mesh_dir, config.face_budget);
  libs.textures = load_image_library(config.texture_dir);
  libs.backgrounds = load_image_library(config.background_dir);
  return libs;
}

Sample render_sample(const DatasetConfig& config, const AssetLibraries& assets,
                     std::size_t index) {
  const SceneConfig& sc = config.scene;
  Sample s;
  s.scene = build_scene(sc, assets, Rng(image_seed(config.seed, index)));
  const Image background =
      resize_cover(assets.backgrounds.items.at(s.scene.background_index).image, sc.camera.width,
                   sc.camera.height);
  const Framebuffer fb = rasterize(s.scene, sc.camera, background, assets.textures,
                                   RenderOptions{sc.shadows, sc.shadow_strength});
  s.image = fb.to_image();
  s.annotation = make_dots(s.scene, sc.camera);
  s.annotation.image_id = index_id(index);
  if (config.density.export_maps) {
    s.annotation.density =
        density_map(s.annotation.dots, sc.camera.width, sc.camera.height, config.density.sigma);
  }
  return s;
}

DatasetManifest generate_dataset(const DatasetConfig& config, const AssetLibraries& assets,
                                 const fs::path& out_dir, std::size_t workers) {
  validate_config(config);
  if (assets.backgrounds.size() == 0) {
    throw AssetError("background library is empty");
  }
  fs::create_directories(out_dir / "images");
  fs::create_directories(out_dir / "annotations");
  if (config.density.export_maps) {
    fs::create_directories(out_dir / "density");
  }
  // A manifest left by an earlier run must not outlive the files it names.
  fs::remove(out_dir / kManifestFileName);

  if (workers == 0) {
    workers = std::max(1u, std::thread::hardware_concurrency());
  }
  workers = std::min(workers, config.dataset_size);

  const Emitter emitter{config, out_dir};
  std::vector<std::vector<ManifestRecord>> per_image(config.dataset_size);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto work = [&] {
    while (!failed.load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= config.dataset_size) {
        return;
      }
      try {
        per_image[i] = emitter.run(assets, i);
      } catch (...) {
        const std::lock_guard lock(error_mutex);
        if (!error) {
          error = std::current_exception();
        }
        failed.store(true);
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back(work);
    }
  }
  if (error) {
    std::rethrow_exception(error);
  }

  DatasetManifest manifest;
  manifest.master_seed = config.seed;
  manifest.config = to_json(config);
  for (auto& recs : per_image) {
    for (auto& r : recs) {
      manifest.records.push_back(std::move(r));
    }
  }
  write_manifest_atomic(manifest, out_dir / kManifestFileName);
  return manifest;
}

DatasetManifest generate_dataset(const DatasetConfig& config, const fs::path& out_dir,
                                 std::size_t workers) {
  validate_config(config);
  return generate_dataset(config, load_assets(config.scene), out_dir, workers);
}

ValidationReport validate_dataset(const fs::path& manifest_path) {
  ValidationReport report;
  auto fail = [&report](std::string msg) { report.failures.push_back(std::move(msg)); };

  DatasetManifest manifest;
  DatasetConfig config;
  try {
    manifest = read_manifest(manifest_path);
    config = parse_config(manifest.config);
  } catch (const std::exception& e) {
    fail(e.what());
    return report;
  }
  const fs::path root = manifest_path.parent_path();

  if (manifest.master_seed != config.seed) {
    fail("manifest seed differs from the config snapshot seed");
  }
  const std::size_t expected = config.dataset_size * config.records_per_image();
  if (manifest.records.size() != expected) {
    fail("expected " + std::to_string(expected) + " records, found " +
         std::to_string(manifest.records.size()));
  }

  std::unordered_map<std::string, std::string> bg_category;
  try {
    for (const IndexEntry& e : read_index(config.scene.background_dir)) {
      bg_category.emplace(e.id, e.category);
    }
  } catch (const std::exception& e) {
    fail(std::string("cannot check background categories: ") + e.what());
  }
  const std::set<std::string> excluded(config.scene.excluded_categories.begin(),
                                       config.scene.excluded_categories.end());

  std::set<std::string> ids;
  for (const ManifestRecord& r : manifest.records) {
    ++report.records_checked;
    const std::string tag = "record " + r.image_id + ": ";
    if (!ids.insert(r.image_id).second) {
      fail(tag + "duplicate id");
    }
    if (!bg_category.empty()) {
      const auto it = bg_category.find(r.background_id);
      if (it == bg_category.end()) {
        fail(tag + "unknown background '" + r.background_id + "'");
      } else if (excluded.contains(it->second)) {
        fail(tag + "background '" + r.background_id + "' is in excluded category '" +
             it->second + "'");
      }
    }

    const fs::path image_path = root / r.image_file;
    const fs::path ann_path = root / r.annotation_file;
    std::size_t img_w = 0;
    std::size_t img_h = 0;
    if (!fs::exists(image_path)) {
      fail(tag + "missing image file " + r.image_file);
    } else {
      try {
        const Image img = load_image(image_path);
        img_w = img.width();
        img_h = img.height();
      } catch (const std::exception& e) {
        fail(tag + "unreadable image " + r.image_file + ": " + e.what());
      }
    }
    if (!fs::exists(ann_path)) {
      fail(tag + "missing annotation file " + r.annotation_file);
      continue;
    }
    json ann;
    try {
      std::ifstream in(ann_path);
      in >> ann;
      const auto count = ann.at("count").get<std::size_t>();
      const auto& dots = ann.at("dots");
      const auto w = ann.at("width").get<std::size_t>();
      const auto h = ann.at("height").get<std::size_t>();
      if (count != dots.size()) {
        fail(tag + "annotation count " + std::to_string(count) + " != " +
             std::to_string(dots.size()) + " dots");
      }
      if (count != r.count) {
        fail(tag + "manifest count " + std::to_string(r.count) + " != annotation count " +
             std::to_string(count));
      }
      if (img_w != 0 && (w != img_w || h != img_h)) {
        fail(tag + "annotation size does not match the image");
      }
      for (const json& d : dots) {
        const double x = d.at(0).get<double>();
        const double y = d.at(1).get<double>();
        if (!in_image(x, y, w, h)) {
          fail(tag + "dot outside the image");
          break;
        }
      }
      if (!r.density_file.empty()) {
        const fs::path dpath = root / r.density_file;
        if (!fs::exists(dpath)) {
          fail(tag + "missing density file " + r.density_file);
        } else {
          const DensityMap map = read_density(dpath);
          const double integral = map.sum();
          const double n = static_cast<double>(dots.size());
          if (map.width != w || map.height != h) {
            fail(tag + "density map size does not match the annotation");
          }
          if (std::abs(integral - n) > 1e-6 * n) {
            std::ostringstream msg;
            msg.precision(12);
            msg << tag << "density integral " << integral << " != count " << dots.size();
            fail(msg.str());
          }
        }
      }
    } catch (const std::exception& e) {
      fail(tag + "corrupt annotation " + r.annotation_file + ": " + e.what());
    }
  }
  return report;
}

}  // namespace drcount
