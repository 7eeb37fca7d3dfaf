#include "drcount/transforms.hpp"

#include <cmath>
#include <set>
#include <stdexcept>
#include <utility>

namespace drcount {

std::string_view to_string(Axis axis) {
  switch (axis) {
    case Axis::kX:
      return "x";
    case Axis::kY:
      return "y";
    case Axis::kZ:
      return "z";
  }
  return "?";
}

Mesh scale_axis(const Mesh& mesh, Axis axis, double factor) {
  if (!(factor > 0.0)) {
    throw std::invalid_argument("scale_axis: factor must be positive");
  }
  Mesh out = mesh;
  const auto a = static_cast<std::size_t>(axis);
  for (Vec3& v : out.vertices) {
    v[a] *= factor;
  }
  return out;
}

Mesh scale_uniform(const Mesh& mesh, double factor) {
  if (!(factor > 0.0)) {
    throw std::invalid_argument("scale_uniform: factor must be positive");
  }
  Mesh out = mesh;
  for (Vec3& v : out.vertices) {
    v *= factor;
  }
  return out;
}

double sample_object_scale(std::size_t n_objects, Rng& rng) {
  if (n_objects == 0) {
    throw std::invalid_argument("sample_object_scale: object count must be at least 1");
  }
  const double n = static_cast<double>(n_objects);
  return rng.uniform(1.0 / n, 8.0 / n);
}

double sample_thickness(Rng& rng) { return rng.uniform(kThicknessMin, kThicknessMax); }

double mean_edge_length(const Mesh& mesh) {
  std::set<std::pair<std::uint32_t, std::uint32_t>> edges;
  for (const Face& f : mesh.faces) {
    for (std::size_t k = 0; k < 3; ++k) {
      const std::uint32_t a = f[k];
      const std::uint32_t b = f[(k + 1) % 3];
      edges.emplace(std::min(a, b), std::max(a, b));
    }
  }
  if (edges.empty()) {
    return 0.0;
  }
  double total = 0.0;
  for (const auto& [a, b] : edges) {
    total += length(mesh.vertices[a] - mesh.vertices[b]);
  }
  return total / static_cast<double>(edges.size());
}

Mesh randomize_vertices(const Mesh& mesh, double factor, Rng& rng) {
  if (!(factor >= 0.0)) {
    throw std::invalid_argument("randomize_vertices: factor must be non-negative");
  }
  Mesh out = mesh;
  if (factor == 0.0) {
    return out;
  }
  const double bound = factor * mean_edge_length(mesh);
  for (Vec3& v : out.vertices) {
    v.x += rng.uniform(-bound, bound);
    v.y += rng.uniform(-bound, bound);
    v.z += rng.uniform(-bound, bound);
  }
  return out;
}

VertexNormals vertex_normals(const Mesh& mesh) {
  VertexNormals result;
  result.normals.assign(mesh.vertices.size(), Vec3{});
  result.isolated.assign(mesh.vertices.size(), true);
  for (const Face& f : mesh.faces) {
    const Vec3& a = mesh.vertices[f[0]];
    const Vec3& b = mesh.vertices[f[1]];
    const Vec3& c = mesh.vertices[f[2]];
    // |cross| is twice the area, so the unnormalized cross is already
    // area-weighted.
    const Vec3 n = cross(b - a, c - a);
    if (n == Vec3{}) {
      continue;
    }
    for (std::uint32_t idx : f) {
      result.normals[idx] += n;
      result.isolated[idx] = false;
    }
  }
  for (std::size_t i = 0; i < result.normals.size(); ++i) {
    result.normals[i] = normalized(result.normals[i]);
    if (result.normals[i] == Vec3{}) {
      result.isolated[i] = true;
    }
  }
  return result;
}

Mesh solidify(const Mesh& mesh, double thickness) {
  const VertexNormals vn = vertex_normals(mesh);
  const auto nv = static_cast<std::uint32_t>(mesh.vertices.size());
  Mesh out = mesh;
  out.vertices.reserve(2 * mesh.vertices.size());
  out.uvs.reserve(2 * mesh.uvs.size());
  out.faces.reserve(2 * mesh.faces.size());
  out.part_labels.reserve(2 * mesh.part_labels.size());
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    out.vertices.push_back(mesh.vertices[i] + vn.normals[i] * thickness);
    out.uvs.push_back(mesh.uvs[i]);
  }
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    const Face& face = mesh.faces[f];
    out.faces.push_back({face[0] + nv, face[2] + nv, face[1] + nv});
    out.part_labels.push_back(mesh.part_labels[f]);
  }
  return out;
}

Mesh normalize_to_unit_height(const Mesh& mesh) {
  const Box3 box = mesh.bounds();
  const Vec3 e = box.extent();
  double size = e.y;
  if (!(size > 0.0)) {
    size = std::max({e.x, e.y, e.z});
  }
  const double s = size > 0.0 ? 1.0 / size : 1.0;
  const Vec3 base{box.center().x, box.min.y, box.center().z};
  Mesh out = mesh;
  for (Vec3& v : out.vertices) {
    v = (v - base) * s;
  }
  return out;
}

Mesh place(const Mesh& mesh, double yaw_radians, const Vec3& position) {
  const double c = std::cos(yaw_radians);
  const double s = std::sin(yaw_radians);
  Mesh out = mesh;
  for (Vec3& v : out.vertices) {
    const Vec3 r{c * v.x + s * v.z, v.y, -s * v.x + c * v.z};
    v = r + position;
  }
  return out;
}

}  // namespace drcount
