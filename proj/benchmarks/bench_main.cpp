#include <benchmark/benchmark.h>

#include <filesystem>

#include "drcount/annotate.hpp"
#include "drcount/pipeline.hpp"
#include "drcount/render.hpp"
#include "drcount/transforms.hpp"

namespace {

using namespace drcount;

const std::filesystem::path kAssets = std::filesystem::path(DRCOUNT_SOURCE_DIR) / "assets";

DatasetConfig bench_config(std::size_t width, std::size_t height) {
  DatasetConfig c;
  c.seed = 7;
  c.dataset_size = 1;
  c.scene.objects_min = 40;
  c.scene.objects_max = 40;
  c.scene.camera.width = width;
  c.scene.camera.height = height;
  c.scene.camera.position = {0, 10, 8};
  c.scene.camera.target = {0, 0, -8};
  c.scene.scale_reference = 20.0;
  c.scene.mesh_dir = kAssets / "meshes" / "person";
  c.scene.texture_dir = kAssets / "textures";
  c.scene.background_dir = kAssets / "backgrounds";
  return c;
}

const AssetLibraries& assets() {
  static const AssetLibraries a = load_assets(bench_config(1, 1).scene);
  return a;
}

void BM_BuildScene(benchmark::State& state) {
  const DatasetConfig c = bench_config(1024, 768);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_scene(c.scene, assets(), Rng(seed++)));
  }
}
BENCHMARK(BM_BuildScene);

void BM_Rasterize(benchmark::State& state) {
  const auto w = static_cast<std::size_t>(state.range(0));
  const DatasetConfig c = bench_config(w, w * 3 / 4);
  const Scene scene = build_scene(c.scene, assets(), Rng(1));
  const Image bg = resize_cover(assets().backgrounds.items[scene.background_index].image,
                                c.scene.camera.width, c.scene.camera.height);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rasterize(scene, c.scene.camera, bg, assets().textures));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(w * w * 3 / 4));
}
BENCHMARK(BM_Rasterize)->Arg(320)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_RenderSample(benchmark::State& state) {
  const DatasetConfig c = bench_config(1024, 768);
  std::size_t index = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(render_sample(c, assets(), index++));
  }
}
BENCHMARK(BM_RenderSample)->Unit(benchmark::kMillisecond);

void BM_Solidify(benchmark::State& state) {
  const Mesh& m = assets().meshes.items.front().mesh;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solidify(m, 0.2));
  }
}
BENCHMARK(BM_Solidify);

void BM_DensityMap(benchmark::State& state) {
  Rng rng(3);
  std::vector<Vec2> dots(static_cast<std::size_t>(state.range(0)));
  for (Vec2& d : dots) {
    d = {rng.uniform(0, 1023), rng.uniform(0, 767)};
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(density_map(dots, 1024, 768, kDefaultSigma));
  }
}
BENCHMARK(BM_DensityMap)->Arg(60)->Arg(600)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
