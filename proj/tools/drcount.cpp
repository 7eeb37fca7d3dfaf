// drcount: generate, validate, evaluate and preview synthetic counting
// datasets.
//
// Exit codes: 0 success, 1 validation/evaluation/runtime failure,
// 2 configuration or usage error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "drcount/error.hpp"
#include "drcount/eval.hpp"
#include "drcount/pipeline.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;

drcount::DatasetConfig read_config(const fs::path& path, std::optional<std::uint64_t> seed) {
  drcount::DatasetConfig config = drcount::load_config(path);
  if (seed) {
    config.seed = *seed;
  }
  return config;
}

int run_generate(const fs::path& config_path, const fs::path& out,
                 std::optional<std::uint64_t> seed, std::size_t workers,
                 std::optional<std::size_t> size) {
  drcount::DatasetConfig config = read_config(config_path, seed);
  if (size) {
    config.dataset_size = *size;
    drcount::validate_config(config);
  }
  const drcount::DatasetManifest manifest = drcount::generate_dataset(config, out, workers);
  std::cout << "wrote " << manifest.records.size() << " records to "
            << (out / drcount::kManifestFileName).string() << '\n';
  return 0;
}

int run_validate(const fs::path& manifest) {
  const drcount::ValidationReport report = drcount::validate_dataset(manifest);
  for (const std::string& f : report.failures) {
    std::cout << "FAIL " << f << '\n';
  }
  std::cout << report.records_checked << " records checked, " << report.failures.size()
            << " failures\n";
  return report.ok() ? 0 : kExitFailure;
}

int run_evaluate(const fs::path& manifest, const fs::path& predictions,
                 const std::optional<fs::path>& report_path) {
  const drcount::EvalReport report = drcount::evaluate(predictions, manifest);
  for (const std::string& id : report.unmatched) {
    std::cerr << "warning: prediction id '" << id << "' is not in the manifest\n";
  }
  const std::string text = drcount::to_json(report).dump(2);
  std::cout << text << '\n';
  if (report_path) {
    std::ofstream out(*report_path);
    out << text << '\n';
    if (!out) {
      throw drcount::Error("cannot write report: " + report_path->string());
    }
  }
  return 0;
}

int run_preview(const fs::path& config_path, std::size_t index, const fs::path& out,
                std::optional<std::uint64_t> seed) {
  const drcount::DatasetConfig config = read_config(config_path, seed);
  const drcount::AssetLibraries assets = drcount::load_assets(config.scene);
  const drcount::Sample sample = drcount::render_sample(config, assets, index);
  drcount::save_png(sample.image, out);
  std::cout << "index " << index << ": " << sample.annotation.count() << " annotated of "
            << sample.scene.requested_objects << " placed, background "
            << sample.scene.background_id << " -> " << out.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Domain-randomized synthetic object-counting datasets"};
  app.require_subcommand(1);

  fs::path config_path;
  fs::path out_dir;
  std::optional<std::uint64_t> seed;
  std::size_t workers = 1;
  std::optional<std::size_t> size;
  auto* generate = app.add_subcommand("generate", "Generate a dataset");
  generate->add_option("--config", config_path, "Configuration file")->required();
  generate->add_option("--out", out_dir, "Output directory")->required();
  generate->add_option("--seed", seed, "Override the configured master seed");
  generate->add_option("--workers", workers, "Worker threads (0 = hardware concurrency)");
  generate->add_option("--size", size, "Override the configured dataset size");

  fs::path manifest_path;
  auto* validate = app.add_subcommand("validate", "Check a generated dataset");
  validate->add_option("manifest", manifest_path, "manifest.json")->required();

  fs::path eval_manifest;
  fs::path predictions;
  std::optional<fs::path> report_path;
  auto* evaluate = app.add_subcommand("evaluate", "Score count predictions");
  evaluate->add_option("--manifest", eval_manifest, "manifest.json")->required();
  evaluate->add_option("--predictions", predictions, "Lines of '<image id> <count>'")
      ->required();
  evaluate->add_option("--report", report_path, "Also write the report here");

  fs::path preview_config;
  std::size_t preview_index = 0;
  fs::path preview_out = "preview.png";
  std::optional<std::uint64_t> preview_seed;
  auto* preview = app.add_subcommand("preview", "Render one dataset image");
  preview->add_option("--config", preview_config, "Configuration file")->required();
  preview->add_option("--index", preview_index, "Image index")->required();
  preview->add_option("--out", preview_out, "Output PNG");
  preview->add_option("--seed", preview_seed, "Override the configured master seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*generate) {
      return run_generate(config_path, out_dir, seed, workers, size);
    }
    if (*validate) {
      return run_validate(manifest_path);
    }
    if (*evaluate) {
      return run_evaluate(eval_manifest, predictions, report_path);
    }
    if (*preview) {
      return run_preview(preview_config, preview_index, preview_out, preview_seed);
    }
  } catch (const drcount::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitConfig;
}
