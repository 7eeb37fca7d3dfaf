#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "drcount/math.hpp"

namespace drcount {

inline constexpr std::size_t kDefaultFaceBudget = 200;

using Face = std::array<std::uint32_t, 3>;

/// Where an instance's dot annotation comes from.
enum class AnchorMode {
  kVertex,    // mesh.vertices[anchor_index]
  kCentroid,  // mean of all vertices of the transformed mesh
};

/// Triangle mesh with per-vertex UVs and per-face part labels.
///
/// Meshes are values; every transform returns a new one.
struct Mesh {
  std::vector<Vec3> vertices;
  std::vector<Face> faces;
  std::vector<Vec2> uvs;                  // one per vertex, in [0,1]^2
  std::vector<std::uint16_t> part_labels; // one per face
  std::vector<std::string> part_names;    // indexed by part label
  std::uint32_t anchor_index = 0;
  AnchorMode anchor_mode = AnchorMode::kVertex;

  std::size_t part_count() const { return part_names.empty() ? 1 : part_names.size(); }

  /// Anchor position under the current anchor mode.
  Vec3 anchor_point() const;

  Box3 bounds() const;

  friend bool operator==(const Mesh&, const Mesh&) = default;
};

/// Throws AssetError describing the first violated invariant: index range,
/// repeated vertex in a face, array sizes, UV range, face budget.
void validate_mesh(const Mesh& mesh, std::size_t face_budget = kDefaultFaceBudget);

/// Index of the maximum-y vertex; the lowest index wins ties.
std::uint32_t highest_vertex(const Mesh& mesh);

/// Loads a Wavefront OBJ file.
///
/// Supports `v`, `vt`, `f` (any of v, v/vt, v//vn, v/vt/vn; negative indices;
/// polygons are fan-triangulated), and `g`/`usemtl`/`o` which start a new part
/// label. A vertex takes the UV of the first face corner that references it.
/// Meshes without texture coordinates get a cylindrical projection around the
/// y axis.
///
/// The anchor defaults to the highest-y vertex. A sidecar `<stem>.meta.json`
/// next to the file may override it with `{"anchor": <index>}` or
/// `{"anchor": "centroid"}`.
Mesh load_mesh(const std::filesystem::path& path, std::size_t face_budget = kDefaultFaceBudget);

/// Writes `mesh` as OBJ with one `g` group per part label.
void save_obj(const Mesh& mesh, const std::filesystem::path& path);

}  // namespace drcount
