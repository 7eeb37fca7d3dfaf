#include "drcount/render.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace drcount {

namespace {

struct ClipVertex {
  Vec3 view;   // (right, up, depth)
  Vec3 world;
  Vec2 uv;
};

ClipVertex lerp(const ClipVertex& a, const ClipVertex& b, double t) {
  return {a.view + (b.view - a.view) * t, a.world + (b.world - a.world) * t,
          {a.uv.x + (b.uv.x - a.uv.x) * t, a.uv.y + (b.uv.y - a.uv.y) * t}};
}

// Sutherland-Hodgman against depth > near. At most 4 vertices come out.
std::vector<ClipVertex> clip_near(const std::array<ClipVertex, 3>& tri, double near_clip) {
  std::vector<ClipVertex> out;
  out.reserve(4);
  for (std::size_t i = 0; i < 3; ++i) {
    const ClipVertex& a = tri[i];
    const ClipVertex& b = tri[(i + 1) % 3];
    const bool a_in = a.view.z > near_clip;
    const bool b_in = b.view.z > near_clip;
    if (a_in) {
      out.push_back(a);
    }
    if (a_in != b_in) {
      const double t = (near_clip - a.view.z) / (b.view.z - a.view.z);
      ClipVertex v = lerp(a, b, t);
      // Nudge inside so the clipped vertex has depth strictly > near.
      v.view.z = std::nextafter(near_clip, std::numeric_limits<double>::infinity());
      out.push_back(v);
    }
  }
  return out;
}

double edge(const Vec2& a, const Vec2& b, double px, double py) {
  return (b.x - a.x) * (py - a.y) - (b.y - a.y) * (px - a.x);
}

// Top-left rule for an edge a->b of a triangle whose third vertex is c,
// image y pointing down. The inward normal decides: left edges have an
// interior to their +x side, top edges are horizontal with the interior
// below.
bool is_top_left(const Vec2& a, const Vec2& b, const Vec2& c) {
  double nx = -(b.y - a.y);
  double ny = b.x - a.x;
  if (nx * (c.x - a.x) + ny * (c.y - a.y) < 0.0) {
    nx = -nx;
    ny = -ny;
  }
  if (a.y == b.y) {
    return ny > 0.0;
  }
  return nx > 0.0;
}

struct Shader {
  const Scene& scene;
  const Image* texture = nullptr;
  Vec3 normal;

  Vec3 shade(const Vec3& world, const Vec2& uv) const {
    Vec3 light{scene.ambient, scene.ambient, scene.ambient};
    for (const Light& l : scene.lights) {
      const Vec3 dir = normalized(l.position - world);
      const double lambert = std::max(0.0, dot(normal, dir));
      light += l.color * (l.intensity * lambert);
    }
    light = {std::clamp(light.x, 0.0, 1.0), std::clamp(light.y, 0.0, 1.0),
             std::clamp(light.z, 0.0, 1.0)};
    Vec3 texel{1.0, 1.0, 1.0};
    if (texture != nullptr && !texture->empty()) {
      const auto tw = texture->width();
      const auto th = texture->height();
      const double u = std::clamp(uv.x, 0.0, 1.0);
      const double v = std::clamp(uv.y, 0.0, 1.0);
      const auto tx = std::min(tw - 1, static_cast<std::size_t>(u * static_cast<double>(tw)));
      const auto ty =
          std::min(th - 1, static_cast<std::size_t>((1.0 - v) * static_cast<double>(th)));
      const Rgb8 c = texture->at(tx, ty);
      texel = {c[0] / 255.0, c[1] / 255.0, c[2] / 255.0};
    }
    return hadamard(texel, light);
  }
};

void draw_triangle(Framebuffer& fb, const Camera& cam, const std::array<ClipVertex, 3>& v,
                   const Shader& shader) {
  std::array<Vec2, 3> p;
  for (std::size_t i = 0; i < 3; ++i) {
    p[i] = view_to_pixel(cam, v[i].view);
  }
  const double area = edge(p[0], p[1], p[2].x, p[2].y);
  if (area == 0.0 || !std::isfinite(area)) {
    return;
  }
  const double sign = area > 0.0 ? 1.0 : -1.0;
  const std::array<bool, 3> top_left = {is_top_left(p[1], p[2], p[0]),
                                        is_top_left(p[2], p[0], p[1]),
                                        is_top_left(p[0], p[1], p[2])};

  const double min_x = std::min({p[0].x, p[1].x, p[2].x});
  const double max_x = std::max({p[0].x, p[1].x, p[2].x});
  const double min_y = std::min({p[0].y, p[1].y, p[2].y});
  const double max_y = std::max({p[0].y, p[1].y, p[2].y});
  const double w_max = static_cast<double>(fb.width) - 1.0;
  const double h_max = static_cast<double>(fb.height) - 1.0;
  if (max_x < 0.0 || max_y < 0.0 || min_x > w_max || min_y > h_max) {
    return;
  }
  const auto x0 = static_cast<std::size_t>(std::max(0.0, std::ceil(min_x)));
  const auto x1 = static_cast<std::size_t>(std::min(w_max, std::floor(max_x)));
  const auto y0 = static_cast<std::size_t>(std::max(0.0, std::ceil(min_y)));
  const auto y1 = static_cast<std::size_t>(std::min(h_max, std::floor(max_y)));

  const std::array<double, 3> inv_z = {1.0 / v[0].view.z, 1.0 / v[1].view.z, 1.0 / v[2].view.z};

  for (std::size_t y = y0; y <= y1; ++y) {
    const auto py = static_cast<double>(y);
    for (std::size_t x = x0; x <= x1; ++x) {
      const auto px = static_cast<double>(x);
      const std::array<double, 3> w = {sign * edge(p[1], p[2], px, py),
                                       sign * edge(p[2], p[0], px, py),
                                       sign * edge(p[0], p[1], px, py)};
      bool inside = true;
      for (std::size_t k = 0; k < 3; ++k) {
        if (w[k] < 0.0 || (w[k] == 0.0 && !top_left[k])) {
          inside = false;
          break;
        }
      }
      if (!inside) {
        continue;
      }
      const double abs_area = sign * area;
      const double b0 = w[0] / abs_area;
      const double b1 = w[1] / abs_area;
      const double b2 = w[2] / abs_area;
      const double iz = b0 * inv_z[0] + b1 * inv_z[1] + b2 * inv_z[2];
      const double depth = 1.0 / iz;
      const std::size_t idx = y * fb.width + x;
      if (!(depth < cam.far_clip) || !(depth < fb.depth[idx])) {
        continue;
      }
      const double c0 = b0 * inv_z[0] / iz;
      const double c1 = b1 * inv_z[1] / iz;
      const double c2 = b2 * inv_z[2] / iz;
      const Vec3 world = v[0].world * c0 + v[1].world * c1 + v[2].world * c2;
      const Vec2 uv{v[0].uv.x * c0 + v[1].uv.x * c1 + v[2].uv.x * c2,
                    v[0].uv.y * c0 + v[1].uv.y * c1 + v[2].uv.y * c2};
      fb.depth[idx] = depth;
      fb.color[idx] = shader.shade(world, uv);
    }
  }
}

void draw_shadows(Framebuffer& fb, const Scene& scene, const Camera& cam, double strength) {
  const ViewBasis basis(cam);
  for (const SceneInstance& inst : scene.instances) {
    const Box3 box = inst.world.bounds();
    const Vec3 foot{box.center().x, box.min.y, box.center().z};
    const auto center = project(cam, foot);
    if (!center) {
      continue;
    }
    const double half_width = 0.5 * std::max(box.extent().x, box.extent().z);
    const auto side = project(cam, foot + basis.right * half_width);
    if (!side) {
      continue;
    }
    const double rx = std::abs(side->x - center->x) * 1.2;
    const double ry = rx * 0.35;
    if (!(rx > 0.5)) {
      continue;
    }
    const double w_max = static_cast<double>(fb.width) - 1.0;
    const double h_max = static_cast<double>(fb.height) - 1.0;
    const double xa = std::max(0.0, std::ceil(center->x - rx));
    const double xb = std::min(w_max, std::floor(center->x + rx));
    const double ya = std::max(0.0, std::ceil(center->y - ry));
    const double yb = std::min(h_max, std::floor(center->y + ry));
    for (double y = ya; y <= yb; y += 1.0) {
      for (double x = xa; x <= xb; x += 1.0) {
        const double dx = (x - center->x) / rx;
        const double dy = (y - center->y) / ry;
        const double r2 = dx * dx + dy * dy;
        if (r2 >= 1.0) {
          continue;
        }
        const auto idx = static_cast<std::size_t>(y) * fb.width + static_cast<std::size_t>(x);
        fb.color[idx] *= 1.0 - strength * (1.0 - r2);
      }
    }
  }
}

}  // namespace

Image Framebuffer::to_image() const {
  Image img(width, height);
  auto to8 = [](double c) {
    return static_cast<std::uint8_t>(std::lround(std::clamp(c, 0.0, 1.0) * 255.0));
  };
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      const Vec3& c = color[y * width + x];
      img.set(x, y, {to8(c.x), to8(c.y), to8(c.z)});
    }
  }
  return img;
}

Framebuffer rasterize(const Scene& scene, const Camera& camera, const Image& background,
                      const ImageLibrary& textures, const RenderOptions& options) {
  camera.validate();
  if (background.width() != camera.width || background.height() != camera.height) {
    throw std::invalid_argument("rasterize: background size does not match the camera");
  }
  Framebuffer fb(camera.width, camera.height);
  for (std::size_t y = 0; y < fb.height; ++y) {
    for (std::size_t x = 0; x < fb.width; ++x) {
      const Rgb8 c = background.at(x, y);
      fb.color[y * fb.width + x] = {c[0] / 255.0, c[1] / 255.0, c[2] / 255.0};
    }
  }
  if (options.shadows) {
    draw_shadows(fb, scene, camera, options.shadow_strength);
  }

  const ViewBasis basis(camera);
  for (const SceneInstance& inst : scene.instances) {
    const Mesh& mesh = inst.world;
    for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
      const Face& face = mesh.faces[f];
      std::array<ClipVertex, 3> tri;
      for (std::size_t k = 0; k < 3; ++k) {
        const Vec3& w = mesh.vertices[face[k]];
        tri[k] = {basis.to_view(w), w, mesh.uvs[face[k]]};
      }
      Shader shader{scene, nullptr, {}};
      const std::size_t part = mesh.part_labels[f];
      if (part < inst.part_textures.size() && inst.part_textures[part] < textures.size()) {
        shader.texture = &textures.items[inst.part_textures[part]].image;
      }
      shader.normal = normalized(cross(tri[1].world - tri[0].world, tri[2].world - tri[0].world));
      if (dot(shader.normal, camera.position - tri[0].world) < 0.0) {
        shader.normal = -shader.normal;
      }

      if (tri[0].view.z > camera.near_clip && tri[1].view.z > camera.near_clip &&
          tri[2].view.z > camera.near_clip) {
        draw_triangle(fb, camera, tri, shader);
        continue;
      }
      const std::vector<ClipVertex> poly = clip_near(tri, camera.near_clip);
      for (std::size_t k = 1; k + 1 < poly.size(); ++k) {
        draw_triangle(fb, camera, {poly[0], poly[k], poly[k + 1]}, shader);
      }
    }
  }
  return fb;
}

}  // namespace drcount
