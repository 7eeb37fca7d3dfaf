#include <doctest.h>

#include "drcount/config.hpp"
#include "drcount/error.hpp"
#include "test_support.hpp"

using namespace drcount;
using namespace drcount::testing;
using nlohmann::json;

TEST_SUITE("config") {
  TEST_CASE("empty document gives the defaults") {
    const DatasetConfig c = parse_config(json::object());
    CHECK(c == DatasetConfig{});
    CHECK(c.dataset_size == 2000);
    CHECK(c.scene.transform == TransformType::kRandomize);
    CHECK(c.scene.randomize_factor == 0.4);
    CHECK(c.scene.placement.mode == PlacementMode::kGmm);
    CHECK(c.scene.face_budget == 200);
    CHECK(c.records_per_image() == 1);
  }

  TEST_CASE("values are read") {
    const json doc = json::parse(R"({
      "seed": 7,
      "dataset_size": 12,
      "scale_reference": 3.5,
      "image": {"width": 320, "height": 200},
      "objects": {"min": 2, "max": 9, "face_budget": 150},
      "transform": {"type": "extrude", "axis_scale_range": [0.7, 1.5]},
      "placement": {"mode": "uniform", "weights": "dirichlet",
                    "region": {"min": [-1, 0, -2], "max": [1, 1, 2]}},
      "assets": {"meshes": "m", "textures": "/abs/t", "backgrounds": "b",
                 "excluded_categories": ["iceberg"]},
      "lights": {"count": [1, 2], "ambient": [0.2, 0.3]},
      "camera": {"position": [1, 2, 3], "fov_deg": 45},
      "shadows": {"enabled": true, "strength": 0.5},
      "augment": {"hflip": true, "crops_per_image": 3, "crop_size": 64},
      "density": {"export": true, "sigma": 2.5}
    })");
    const DatasetConfig c = parse_config(doc, "/base");
    CHECK(c.seed == 7);
    CHECK(c.dataset_size == 12);
    CHECK(c.scene.scale_reference == 3.5);
    CHECK(c.scene.camera.width == 320);
    CHECK(c.scene.camera.height == 200);
    CHECK(c.scene.objects_min == 2);
    CHECK(c.scene.objects_max == 9);
    CHECK(c.scene.face_budget == 150);
    CHECK(c.scene.transform == TransformType::kExtrude);
    CHECK(c.scene.axis_scale_min == 0.7);
    CHECK(c.scene.placement.mode == PlacementMode::kUniform);
    CHECK(c.scene.placement.weights == MixtureWeights::kDirichlet);
    REQUIRE(c.scene.placement.region.has_value());
    CHECK(c.scene.placement.region->min == Vec3{-1, 0, -2});
    CHECK(c.scene.mesh_dir == std::filesystem::path("/base/m"));
    CHECK(c.scene.texture_dir == std::filesystem::path("/abs/t"));
    CHECK(c.scene.excluded_categories == std::vector<std::string>{"iceberg"});
    CHECK(c.scene.lights.count_max == 2);
    CHECK(c.scene.lights.ambient_min == 0.2);
    CHECK(c.scene.camera.position == Vec3{1, 2, 3});
    CHECK(c.scene.camera.fov_y_deg == 45);
    CHECK(c.scene.shadows);
    CHECK(c.augment.hflip);
    CHECK(c.augment.crops_per_image == 3);
    CHECK(c.density.export_maps);
    CHECK(c.density.sigma == 2.5);
    CHECK(c.records_per_image() == 5);
  }

  TEST_CASE("unknown keys are rejected") {
    CHECK_THROWS_WITH_AS(parse_config(json::parse(R"({"sede": 1})")),
                         doctest::Contains("sede"), ConfigError);
    CHECK_THROWS_AS(parse_config(json::parse(R"({"objects": {"maximum": 3}})")), ConfigError);
  }

  TEST_CASE("wrong types and values are rejected") {
    for (const char* text : {
             R"({"seed": "x"})",
             R"({"seed": -1})",
             R"({"dataset_size": 0})",
             R"({"objects": {"min": 5, "max": 2}})",
             R"({"transform": {"type": "twist"}})",
             R"({"transform": {"randomize_factor": -0.1}})",
             R"({"transform": {"axis_scale_range": [0, 2]}})",
             R"({"placement": {"mode": "grid"}})",
             R"({"placement": {"region": {"min": [0, 0, 0], "max": [1, 0, 1]}}})",
             R"({"image": {"width": 0}})",
             R"({"camera": {"position": [0, 0]}})",
             R"({"camera": {"near": 5, "far": 1}})",
             R"({"lights": {"count": [0, 2]}})",
             R"({"shadows": {"enabled": 1}})",
             R"({"shadows": {"strength": 2}})",
             R"({"density": {"sigma": 0}})",
             R"({"augment": {"crop_size": 0}})",
             R"({"assets": {"excluded_categories": "x"}})",
             R"([1, 2])",
         }) {
      CAPTURE(text);
      CHECK_THROWS_AS(parse_config(json::parse(text)), ConfigError);
    }
  }

  TEST_CASE("snapshot round trip") {
    DatasetConfig c = small_config(17);
    c.scene.placement.region = Box3{{-3, 0, -4}, {3, 1, 4}};
    c.scene.placement.weights = MixtureWeights::kDirichlet;
    c.augment.hflip = true;
    c.augment.crops_per_image = 2;
    c.density.export_maps = true;
    c.seed = 0xFFFFFFFFFFFFFFFFull;
    CHECK(parse_config(to_json(c)) == c);
    const DatasetConfig d{};
    CHECK(parse_config(to_json(d)) == d);
  }

  TEST_CASE("load_config resolves paths next to the file") {
    TempDir dir;
    write_text(dir / "c.json", R"({"assets": {"meshes": "meshes/person"}})");
    const DatasetConfig c = load_config(dir / "c.json");
    CHECK(c.scene.mesh_dir == (dir.path() / "meshes/person").lexically_normal());
    CHECK_THROWS_AS(load_config(dir / "missing.json"), ConfigError);
    write_text(dir / "broken.json", "{ not json");
    CHECK_THROWS_AS(load_config(dir / "broken.json"), ConfigError);
  }

  TEST_CASE("shipped configs load") {
    for (const char* name : {"crowd.json", "vehicles.json", "penguins.json", "apples.json"}) {
      CAPTURE(name);
      const DatasetConfig c = load_config(source_dir() / "configs" / name);
      CHECK(std::filesystem::is_directory(c.scene.mesh_dir));
      CHECK(std::filesystem::is_directory(c.scene.texture_dir));
      CHECK(std::filesystem::is_directory(c.scene.background_dir));
    }
  }
}
