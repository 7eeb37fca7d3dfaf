#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "drcount/math.hpp"
#include "drcount/mesh.hpp"
#include "drcount/rng.hpp"

namespace drcount {

enum class Axis : std::uint8_t { kX = 0, kY = 1, kZ = 2 };

std::string_view to_string(Axis axis);

/// Bounds of the thickness distribution used by the extrude transform.
inline constexpr double kThicknessMin = -0.1;
inline constexpr double kThicknessMax = 0.5;

/// Vertex displacement factor of the randomize transform.
inline constexpr double kRandomizeFactor = 0.4;

/// Multiplies one coordinate of every vertex by `factor`. Throws
/// std::invalid_argument unless factor > 0.
Mesh scale_axis(const Mesh& mesh, Axis axis, double factor);

/// Multiplies every coordinate by `factor` (> 0).
Mesh scale_uniform(const Mesh& mesh, double factor);

/// Object scale K ~ U(1/n, 8/n). Throws std::invalid_argument for n == 0.
double sample_object_scale(std::size_t n_objects, Rng& rng);

/// Solidify thickness T ~ U(-0.1, 0.5).
double sample_thickness(Rng& rng);

/// Mean length over the mesh's unique undirected edges; 0 without faces.
double mean_edge_length(const Mesh& mesh);

/// Moves every vertex by an independent per-axis offset drawn from
/// U(-factor*e, factor*e), e = mean_edge_length(mesh). Draw order is vertex by
/// vertex, x then y then z. Throws std::invalid_argument for factor < 0.
Mesh randomize_vertices(const Mesh& mesh, double factor, Rng& rng);

struct VertexNormals {
  std::vector<Vec3> normals;      // unit length, or zero when isolated
  std::vector<bool> isolated;     // no incident face with non-zero area
};

/// Area-weighted average of incident face normals, normalized.
VertexNormals vertex_normals(const Mesh& mesh);

/// Shell thickening without rim faces: appends one copy of every vertex moved
/// by `thickness` along its vertex normal, and one copy of every face with
/// reversed winding. Output has 2V vertices and 2F faces; the anchor stays on
/// the original shell.
Mesh solidify(const Mesh& mesh, double thickness);

/// Uniformly rescales so the bounding-box height is 1 and moves the
/// bounding-box bottom center to the origin. Flat meshes (zero height) are
/// scaled by their largest extent instead.
Mesh normalize_to_unit_height(const Mesh& mesh);

/// Rotation about +y by `radians` followed by a translation.
Mesh place(const Mesh& mesh, double yaw_radians, const Vec3& position);

}  // namespace drcount
