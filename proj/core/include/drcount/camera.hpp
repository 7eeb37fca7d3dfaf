#pragma once

#include <cstddef>
#include <optional>

#include "drcount/math.hpp"

namespace drcount {

/// Pinhole camera.
///
/// Pixel coordinates put the center of pixel (i, j) at (i, j); the image
/// spans [-0.5, width - 0.5] x [-0.5, height - 0.5], y pointing down.
struct Camera {
  Vec3 position{0.0, 8.0, 12.0};
  Vec3 target{0.0, 0.0, -6.0};
  Vec3 up{0.0, 1.0, 0.0};
  double fov_y_deg = 60.0;
  double near_clip = 0.1;
  double far_clip = 200.0;
  std::size_t width = 1024;
  std::size_t height = 768;

  /// Throws std::invalid_argument on a degenerate camera.
  void validate() const;

  double aspect() const { return static_cast<double>(width) / static_cast<double>(height); }

  friend bool operator==(const Camera&, const Camera&) = default;
};

struct Projection {
  double x = 0.0;
  double y = 0.0;
  double depth = 0.0;  // view-space distance along the optical axis
};

/// Orthonormal view frame of a camera.
struct ViewBasis {
  Vec3 right;
  Vec3 up;
  Vec3 forward;
  Vec3 origin;

  explicit ViewBasis(const Camera& cam);

  /// (right, up, depth) coordinates of a world point.
  Vec3 to_view(const Vec3& p) const {
    const Vec3 d = p - origin;
    return {dot(d, right), dot(d, up), dot(d, forward)};
  }
};

/// Viewport mapping of a view-space point with positive depth.
Vec2 view_to_pixel(const Camera& cam, const Vec3& view);

/// Projects a world point; std::nullopt when its depth is outside
/// (near_clip, far_clip).
std::optional<Projection> project(const Camera& cam, const Vec3& point);

/// True when (x, y) lies in [0, width-1] x [0, height-1]. Dots are kept under
/// exactly this rule, which is closed under horizontal mirroring.
bool in_image(double x, double y, std::size_t width, std::size_t height);

/// Approximate ground footprint of the view frustum within a depth band.
/// Each corner ray contributes its point at `depth_near` and the point where
/// it meets the plane y = ground_y (clamped to the band, or at `depth_far`
/// when it never descends). The result is the x/z bounding box of those
/// points, spanning [ground_y, ground_y + height] in y.
Box3 frustum_footprint(const Camera& cam, double ground_y, double depth_near, double depth_far,
                       double height);

}  // namespace drcount
