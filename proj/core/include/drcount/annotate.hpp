#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "drcount/camera.hpp"
#include "drcount/image.hpp"
#include "drcount/math.hpp"
#include "drcount/rng.hpp"
#include "drcount/scene.hpp"

namespace drcount {

inline constexpr double kDefaultSigma = 4.0;

/// Dots are snapped to multiples of 1/kDotGrid pixel, which keeps mirroring
/// and crop shifts exact in floating point.
inline constexpr double kDotGrid = 1024.0;

/// Non-negative real grid, row-major.
struct DensityMap {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<double> values;

  double at(std::size_t x, std::size_t y) const { return values[y * width + x]; }
  double sum() const;
};

/// Counting ground truth for one image. The count is the number of dots.
struct Annotation {
  std::string image_id;
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<Vec2> dots;
  std::optional<DensityMap> density;

  std::size_t count() const { return dots.size(); }
};

/// Projects every instance's anchor and snaps it to the dot grid. Anchors
/// that are clipped or fall outside the image are dropped; occluded anchors
/// are kept.
Annotation make_dots(const Scene& scene, const Camera& camera);

/// Sum of isotropic Gaussians, one per dot. Each kernel is truncated to a
/// window of radius ceil(4 sigma) and to the image, then renormalized to mass
/// exactly 1. Kernels are evaluated at pixel centers. Throws
/// std::invalid_argument for sigma <= 0.
DensityMap density_map(const std::vector<Vec2>& dots, std::size_t width, std::size_t height,
                       double sigma);

struct Augmented {
  Image image;
  Annotation annotation;
  bool padded = false;  // source was smaller than the crop window
};

/// Mirrors about the vertical axis: x -> width - 1 - x.
Augmented hflip(const Image& image, const Annotation& ann);

/// Crops a size x size window at `origin`. Dots with origin <= p <= origin +
/// size - 1 (per axis) are kept and shifted. The density map, when present,
/// is recomputed from the kept dots with `sigma`.
Augmented crop_at(const Image& image, const Annotation& ann, std::size_t origin_x,
                  std::size_t origin_y, std::size_t size, double sigma = kDefaultSigma);

/// crop_at with a uniformly drawn integer origin. Images smaller than the
/// window are zero-padded at the right/bottom and flagged.
Augmented crop(const Image& image, const Annotation& ann, std::size_t size, Rng& rng,
               double sigma = kDefaultSigma);

/// Sidecar record: {"image", "width", "height", "count", "dots": [[x, y], ...]}
/// plus "density" (file name) when a density map was exported.
nlohmann::json annotation_to_json(const Annotation& ann, const std::string& image_file,
                                  const std::string& density_file = {});

/// Binary density grid: 16-byte header (magic "DMAP", uint32 width,
/// uint32 height, uint32 format version 1, all little-endian) followed by
/// width*height little-endian float32 values, row-major.
void write_density(const DensityMap& map, const std::filesystem::path& path);
DensityMap read_density(const std::filesystem::path& path);

}  // namespace drcount
