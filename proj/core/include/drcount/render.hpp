#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "drcount/assets.hpp"
#include "drcount/camera.hpp"
#include "drcount/image.hpp"
#include "drcount/math.hpp"
#include "drcount/scene.hpp"

namespace drcount {

/// Color in [0,1] per channel during shading, plus a view-depth buffer.
struct Framebuffer {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<Vec3> color;
  std::vector<double> depth;  // +inf where nothing was drawn

  Framebuffer(std::size_t w, std::size_t h)
      : width(w),
        height(h),
        color(w * h),
        depth(w * h, std::numeric_limits<double>::infinity()) {}

  /// Rounds to 8 bits per channel.
  Image to_image() const;
};

struct RenderOptions {
  // Darken the background under each instance with a soft ellipse. This is
  // a screen-space stand-in for cast shadows.
  bool shadows = false;
  double shadow_strength = 0.35;
};

/// Draws `scene` over `background` (which must already match the camera
/// size; see resize_cover).
///
/// Triangles are clipped against the near plane, rasterized with a top-left
/// fill rule at pixel centers, depth tested on view depth (a fragment must be
/// strictly nearer to replace one already drawn) and discarded at or beyond
/// the far plane. UVs are interpolated perspective-correctly and textures are
/// sampled nearest-texel. Shading per channel is
///   texel * clamp(ambient + sum_l intensity_l * max(0, n.l) * color_l, 0, 1)
/// with the face normal turned toward the camera. No back-face culling.
Framebuffer rasterize(const Scene& scene, const Camera& camera, const Image& background,
                      const ImageLibrary& textures, const RenderOptions& options = {});

}  // namespace drcount
