#include "drcount/camera.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace drcount {

void Camera::validate() const {
  if (!(near_clip > 0.0 && near_clip < far_clip)) {
    throw std::invalid_argument("camera: need 0 < near < far");
  }
  if (!(fov_y_deg > 0.0 && fov_y_deg < 180.0)) {
    throw std::invalid_argument("camera: need 0 < fov < 180");
  }
  if (width < 1 || height < 1) {
    throw std::invalid_argument("camera: image size must be at least 1x1");
  }
  const Vec3 f = target - position;
  if (length(f) == 0.0 || length(cross(f, up)) == 0.0) {
    throw std::invalid_argument("camera: view direction is zero or parallel to up");
  }
}

ViewBasis::ViewBasis(const Camera& cam) : origin(cam.position) {
  forward = normalized(cam.target - cam.position);
  right = normalized(cross(forward, cam.up));
  up = cross(right, forward);
}

Vec2 view_to_pixel(const Camera& cam, const Vec3& view) {
  const double tan_half = std::tan(cam.fov_y_deg * std::numbers::pi / 360.0);
  const double ndc_x = view.x / (view.z * tan_half * cam.aspect());
  const double ndc_y = view.y / (view.z * tan_half);
  return {(ndc_x + 1.0) * 0.5 * static_cast<double>(cam.width) - 0.5,
          (1.0 - ndc_y) * 0.5 * static_cast<double>(cam.height) - 0.5};
}

std::optional<Projection> project(const Camera& cam, const Vec3& point) {
  const Vec3 v = ViewBasis(cam).to_view(point);
  if (!(v.z > cam.near_clip && v.z < cam.far_clip)) {
    return std::nullopt;
  }
  const Vec2 px = view_to_pixel(cam, v);
  return Projection{px.x, px.y, v.z};
}

bool in_image(double x, double y, std::size_t width, std::size_t height) {
  return x >= 0.0 && y >= 0.0 && x <= static_cast<double>(width) - 1.0 &&
         y <= static_cast<double>(height) - 1.0;
}

Box3 frustum_footprint(const Camera& cam, double ground_y, double depth_near, double depth_far,
                       double height) {
  const ViewBasis basis(cam);
  const double tan_half = std::tan(cam.fov_y_deg * std::numbers::pi / 360.0);
  constexpr double inf = std::numeric_limits<double>::infinity();
  Box3 box{{inf, ground_y, inf}, {-inf, ground_y + height, -inf}};
  auto include = [&box](const Vec3& p) {
    box.min.x = std::min(box.min.x, p.x);
    box.max.x = std::max(box.max.x, p.x);
    box.min.z = std::min(box.min.z, p.z);
    box.max.z = std::max(box.max.z, p.z);
  };
  for (double sx : {-1.0, 1.0}) {
    for (double sy : {-1.0, 1.0}) {
      // Scaled so that the ray parameter equals view depth.
      const Vec3 dir = basis.forward + basis.right * (sx * tan_half * cam.aspect()) +
                       basis.up * (sy * tan_half);
      double t_ground = depth_far;
      if (dir.y < 0.0) {
        t_ground = std::clamp((ground_y - basis.origin.y) / dir.y, depth_near, depth_far);
      }
      include(basis.origin + dir * depth_near);
      include(basis.origin + dir * t_ground);
    }
  }
  return box;
}

}  // namespace drcount
