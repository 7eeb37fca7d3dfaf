#include "drcount/mesh.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <string_view>

#include <nlohmann/json.hpp>

#include "drcount/error.hpp"

namespace drcount {

namespace {

AssetError malformed(const std::filesystem::path& path, std::size_t line, const std::string& what) {
  return AssetError(path.string() + ":" + std::to_string(line) + ": malformed geometry: " + what);
}

double wrap_unit(double t) {
  if (t >= 0.0 && t <= 1.0) {
    return t;
  }
  return t - std::floor(t);
}

// Resolves a 1-based (or negative, relative) OBJ index against `count`.
std::int64_t resolve_index(std::string_view token, std::size_t count, bool& ok) {
  std::int64_t idx = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), idx);
  ok = ec == std::errc() && ptr == token.data() + token.size() && idx != 0;
  if (!ok) {
    return -1;
  }
  const std::int64_t resolved = idx > 0 ? idx - 1 : static_cast<std::int64_t>(count) + idx;
  ok = resolved >= 0 && resolved < static_cast<std::int64_t>(count);
  return resolved;
}

void synthesize_cylindrical_uvs(Mesh& mesh) {
  const Box3 box = mesh.bounds();
  const Vec3 c = box.center();
  const double height = box.extent().y;
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    const Vec3& p = mesh.vertices[i];
    const double u = std::atan2(p.z - c.z, p.x - c.x) / (2.0 * std::numbers::pi) + 0.5;
    const double v = height > 0.0 ? (p.y - box.min.y) / height : 0.5;
    mesh.uvs[i] = {std::clamp(u, 0.0, 1.0), std::clamp(v, 0.0, 1.0)};
  }
}

void apply_sidecar(Mesh& mesh, const std::filesystem::path& obj_path) {
  std::filesystem::path meta = obj_path;
  meta.replace_extension(".meta.json");
  if (!std::filesystem::exists(meta)) {
    return;
  }
  std::ifstream in(meta);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw AssetError(meta.string() + ": " + e.what());
  }
  if (!doc.is_object()) {
    throw AssetError(meta.string() + ": expected a JSON object");
  }
  for (const auto& [key, value] : doc.items()) {
    if (key != "anchor") {
      throw AssetError(meta.string() + ": unknown key '" + key + "'");
    }
    if (value.is_string() && value.get<std::string>() == "centroid") {
      mesh.anchor_mode = AnchorMode::kCentroid;
    } else if (value.is_number_unsigned()) {
      const auto idx = value.get<std::uint64_t>();
      if (idx >= mesh.vertices.size()) {
        throw AssetError(meta.string() + ": anchor index " + std::to_string(idx) +
                         " out of range");
      }
      mesh.anchor_index = static_cast<std::uint32_t>(idx);
      mesh.anchor_mode = AnchorMode::kVertex;
    } else {
      throw AssetError(meta.string() + ": anchor must be a vertex index or \"centroid\"");
    }
  }
}

}  // namespace

Vec3 Mesh::anchor_point() const {
  if (anchor_mode == AnchorMode::kCentroid) {
    Vec3 sum;
    for (const Vec3& v : vertices) {
      sum += v;
    }
    return vertices.empty() ? sum : sum * (1.0 / static_cast<double>(vertices.size()));
  }
  return vertices.at(anchor_index);
}

Box3 Mesh::bounds() const {
  if (vertices.empty()) {
    return {};
  }
  constexpr double inf = std::numeric_limits<double>::infinity();
  Box3 box{{inf, inf, inf}, {-inf, -inf, -inf}};
  for (const Vec3& v : vertices) {
    for (std::size_t a = 0; a < 3; ++a) {
      box.min[a] = std::min(box.min[a], v[a]);
      box.max[a] = std::max(box.max[a], v[a]);
    }
  }
  return box;
}

void validate_mesh(const Mesh& mesh, std::size_t face_budget) {
  const std::size_t nv = mesh.vertices.size();
  if (mesh.faces.size() > face_budget) {
    throw AssetError("face budget exceeded: " + std::to_string(mesh.faces.size()) + " > " +
                     std::to_string(face_budget));
  }
  if (mesh.uvs.size() != nv) {
    throw AssetError("uv count does not match vertex count");
  }
  if (mesh.part_labels.size() != mesh.faces.size()) {
    throw AssetError("part label count does not match face count");
  }
  if (nv == 0 || mesh.anchor_index >= nv) {
    throw AssetError("anchor index out of range");
  }
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    const Face& face = mesh.faces[f];
    for (std::uint32_t idx : face) {
      if (idx >= nv) {
        throw AssetError("face " + std::to_string(f) + " references vertex out of range");
      }
    }
    if (face[0] == face[1] || face[1] == face[2] || face[0] == face[2]) {
      throw AssetError("face " + std::to_string(f) + " repeats a vertex");
    }
    if (mesh.part_labels[f] >= mesh.part_count()) {
      throw AssetError("face " + std::to_string(f) + " has an unknown part label");
    }
  }
  for (const Vec2& uv : mesh.uvs) {
    if (!(uv.x >= 0.0 && uv.x <= 1.0 && uv.y >= 0.0 && uv.y <= 1.0)) {
      throw AssetError("uv outside [0,1]");
    }
  }
}

std::uint32_t highest_vertex(const Mesh& mesh) {
  std::uint32_t best = 0;
  for (std::uint32_t i = 1; i < mesh.vertices.size(); ++i) {
    if (mesh.vertices[i].y > mesh.vertices[best].y) {
      best = i;
    }
  }
  return best;
}

Mesh load_mesh(const std::filesystem::path& path, std::size_t face_budget) {
  std::ifstream in(path);
  if (!in) {
    throw AssetError("cannot open mesh file: " + path.string());
  }

  Mesh mesh;
  std::vector<Vec2> tex_coords;
  std::vector<bool> has_uv;
  bool any_uv = false;
  std::string current_name = "default";

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.resize(hash);
    }
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) {
      continue;
    }
    if (tag == "v") {
      Vec3 p;
      if (!(ls >> p.x >> p.y >> p.z) || !std::isfinite(p.x) || !std::isfinite(p.y) ||
          !std::isfinite(p.z)) {
        throw malformed(path, line_no, "bad vertex");
      }
      mesh.vertices.push_back(p);
    } else if (tag == "vt") {
      Vec2 t;
      if (!(ls >> t.x >> t.y)) {
        throw malformed(path, line_no, "bad texture coordinate");
      }
      tex_coords.push_back({wrap_unit(t.x), wrap_unit(t.y)});
    } else if (tag == "g" || tag == "o" || tag == "usemtl") {
      std::string name;
      ls >> name;
      current_name = name.empty() ? "default" : name;
    } else if (tag == "f") {
      has_uv.resize(mesh.vertices.size(), false);
      mesh.uvs.resize(mesh.vertices.size());
      std::vector<std::uint32_t> polygon;
      std::string corner;
      while (ls >> corner) {
        const auto slash = corner.find('/');
        bool ok = false;
        const std::int64_t vi =
            resolve_index(std::string_view(corner).substr(0, slash), mesh.vertices.size(), ok);
        if (!ok) {
          throw malformed(path, line_no, "bad face vertex index '" + corner + "'");
        }
        if (slash != std::string::npos) {
          const auto rest = std::string_view(corner).substr(slash + 1);
          const auto tex = rest.substr(0, rest.find('/'));
          if (!tex.empty()) {
            const std::int64_t ti = resolve_index(tex, tex_coords.size(), ok);
            if (!ok) {
              throw malformed(path, line_no, "bad face uv index '" + corner + "'");
            }
            if (!has_uv[vi]) {
              mesh.uvs[vi] = tex_coords[ti];
              has_uv[vi] = true;
              any_uv = true;
            }
          }
        }
        polygon.push_back(static_cast<std::uint32_t>(vi));
      }
      if (polygon.size() < 3) {
        throw malformed(path, line_no, "face with fewer than 3 vertices");
      }
      auto part = std::find(mesh.part_names.begin(), mesh.part_names.end(), current_name);
      if (part == mesh.part_names.end()) {
        mesh.part_names.push_back(current_name);
        part = mesh.part_names.end() - 1;
      }
      const auto current_part = static_cast<std::uint16_t>(part - mesh.part_names.begin());
      for (std::size_t k = 1; k + 1 < polygon.size(); ++k) {
        const Face face{polygon[0], polygon[k], polygon[k + 1]};
        if (face[0] == face[1] || face[1] == face[2] || face[0] == face[2]) {
          throw malformed(path, line_no, "face repeats a vertex");
        }
        mesh.faces.push_back(face);
        mesh.part_labels.push_back(current_part);
      }
    }
    // vn, s, mtllib and other statements carry nothing we use.
  }

  if (mesh.vertices.empty() || mesh.faces.empty()) {
    throw AssetError(path.string() + ": malformed geometry: no triangles");
  }
  if (mesh.faces.size() > face_budget) {
    throw AssetError(path.string() + ": face budget exceeded (" +
                     std::to_string(mesh.faces.size()) + " > " + std::to_string(face_budget) +
                     ")");
  }
  if (mesh.part_names.empty()) {
    mesh.part_names.push_back("default");
  }
  mesh.uvs.resize(mesh.vertices.size());
  if (!any_uv) {
    synthesize_cylindrical_uvs(mesh);
  }
  mesh.anchor_index = highest_vertex(mesh);
  apply_sidecar(mesh, path);
  validate_mesh(mesh, face_budget);
  return mesh;
}

void save_obj(const Mesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw AssetError("cannot write mesh file: " + path.string());
  }
  auto num = [](double d) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), d);
    return std::string(buf, res.ptr);
  };
  for (const Vec3& v : mesh.vertices) {
    out << "v " << num(v.x) << ' ' << num(v.y) << ' ' << num(v.z) << '\n';
  }
  for (const Vec2& t : mesh.uvs) {
    out << "vt " << num(t.x) << ' ' << num(t.y) << '\n';
  }
  for (std::size_t part = 0; part < mesh.part_count(); ++part) {
    out << "g " << (mesh.part_names.empty() ? "default" : mesh.part_names[part]) << '\n';
    for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
      if (mesh.part_labels[f] != part) {
        continue;
      }
      out << 'f';
      for (std::uint32_t idx : mesh.faces[f]) {
        out << ' ' << idx + 1 << '/' << idx + 1;
      }
      out << '\n';
    }
  }
}

}  // namespace drcount
