// Writes a small self-contained asset set: low-poly meshes, procedural
// textures and procedural backgrounds, each directory with its index.json.
//
//   make_sample_assets <out_dir>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include "drcount/assets.hpp"
#include "drcount/image.hpp"
#include "drcount/mesh.hpp"
#include "drcount/rng.hpp"

namespace fs = std::filesystem;
using drcount::Image;
using drcount::Mesh;
using drcount::Rgb8;
using drcount::Vec2;
using drcount::Vec3;

namespace {

std::uint16_t part_id(Mesh& m, const std::string& name) {
  for (std::size_t i = 0; i < m.part_names.size(); ++i) {
    if (m.part_names[i] == name) {
      return static_cast<std::uint16_t>(i);
    }
  }
  m.part_names.push_back(name);
  return static_cast<std::uint16_t>(m.part_names.size() - 1);
}

void add_box(Mesh& m, Vec3 lo, Vec3 hi, const std::string& part) {
  const auto base = static_cast<std::uint32_t>(m.vertices.size());
  for (int i = 0; i < 8; ++i) {
    m.vertices.push_back({(i & 1) ? hi.x : lo.x, (i & 2) ? hi.y : lo.y, (i & 4) ? hi.z : lo.z});
  }
  // Outward winding, two triangles per side.
  static constexpr std::uint32_t quads[6][4] = {{0, 2, 3, 1}, {4, 5, 7, 6}, {0, 1, 5, 4},
                                                {2, 6, 7, 3}, {0, 4, 6, 2}, {1, 3, 7, 5}};
  const std::uint16_t label = part_id(m, part);
  for (const auto& q : quads) {
    m.faces.push_back({base + q[0], base + q[1], base + q[2]});
    m.faces.push_back({base + q[0], base + q[2], base + q[3]});
    m.part_labels.push_back(label);
    m.part_labels.push_back(label);
  }
}

// Closed UV sphere; rings above `split_ring` get `top_part`.
void add_ellipsoid(Mesh& m, Vec3 center, Vec3 radii, int segments, int rings,
                   const std::string& top_part, const std::string& bottom_part, int split_ring) {
  const auto top = static_cast<std::uint32_t>(m.vertices.size());
  m.vertices.push_back({center.x, center.y + radii.y, center.z});
  for (int r = 1; r < rings; ++r) {
    const double phi = std::numbers::pi * r / rings;
    for (int s = 0; s < segments; ++s) {
      const double theta = 2.0 * std::numbers::pi * s / segments;
      m.vertices.push_back({center.x + radii.x * std::sin(phi) * std::cos(theta),
                            center.y + radii.y * std::cos(phi),
                            center.z + radii.z * std::sin(phi) * std::sin(theta)});
    }
  }
  const auto bottom = static_cast<std::uint32_t>(m.vertices.size());
  m.vertices.push_back({center.x, center.y - radii.y, center.z});
  auto ring_vertex = [&](int r, int s) {
    return top + 1 + static_cast<std::uint32_t>((r - 1) * segments + (s % segments));
  };
  const std::uint16_t top_label = part_id(m, top_part);
  const std::uint16_t bottom_label = part_id(m, bottom_part);
  for (int s = 0; s < segments; ++s) {
    m.faces.push_back({top, ring_vertex(1, s + 1), ring_vertex(1, s)});
    m.part_labels.push_back(top_label);
    m.faces.push_back({bottom, ring_vertex(rings - 1, s), ring_vertex(rings - 1, s + 1)});
    m.part_labels.push_back(bottom_label);
  }
  for (int r = 1; r + 1 < rings; ++r) {
    const std::uint16_t label = r < split_ring ? top_label : bottom_label;
    for (int s = 0; s < segments; ++s) {
      const auto a = ring_vertex(r, s);
      const auto b = ring_vertex(r, s + 1);
      const auto c = ring_vertex(r + 1, s + 1);
      const auto d = ring_vertex(r + 1, s);
      m.faces.push_back({a, b, c});
      m.faces.push_back({a, c, d});
      m.part_labels.push_back(label);
      m.part_labels.push_back(label);
    }
  }
}

void finish(Mesh& m) {
  const drcount::Box3 box = m.bounds();
  const Vec3 c = box.center();
  const double h = box.extent().y;
  m.uvs.clear();
  for (const Vec3& p : m.vertices) {
    const double u = std::atan2(p.z - c.z, p.x - c.x) / (2.0 * std::numbers::pi) + 0.5;
    m.uvs.push_back({std::clamp(u, 0.0, 1.0), h > 0 ? (p.y - box.min.y) / h : 0.5});
  }
  m.anchor_index = drcount::highest_vertex(m);
  drcount::validate_mesh(m);
}

Mesh make_person() {
  Mesh m;
  add_box(m, {-0.12, 0.0, -0.08}, {-0.02, 0.45, 0.08}, "pants");
  add_box(m, {0.02, 0.0, -0.08}, {0.12, 0.45, 0.08}, "pants");
  add_box(m, {-0.16, 0.45, -0.1}, {0.16, 0.8, 0.1}, "shirt");
  add_box(m, {-0.24, 0.45, -0.06}, {-0.17, 0.78, 0.06}, "skin");
  add_box(m, {0.17, 0.45, -0.06}, {0.24, 0.78, 0.06}, "skin");
  add_box(m, {-0.08, 0.82, -0.08}, {0.08, 0.96, 0.08}, "skin");
  add_box(m, {-0.085, 0.96, -0.085}, {0.085, 1.0, 0.085}, "hair");
  finish(m);
  return m;
}

Mesh make_car() {
  Mesh m;
  add_box(m, {-0.9, 0.15, -0.4}, {0.9, 0.5, 0.4}, "body");
  add_box(m, {-0.45, 0.5, -0.35}, {0.35, 0.8, 0.35}, "cabin");
  add_box(m, {-0.75, 0.0, -0.45}, {-0.45, 0.3, -0.35}, "wheels");
  add_box(m, {0.45, 0.0, -0.45}, {0.75, 0.3, -0.35}, "wheels");
  add_box(m, {-0.75, 0.0, 0.35}, {-0.45, 0.3, 0.45}, "wheels");
  add_box(m, {0.45, 0.0, 0.35}, {0.75, 0.3, 0.45}, "wheels");
  finish(m);
  return m;
}

Mesh make_penguin() {
  Mesh m;
  add_ellipsoid(m, {0.0, 0.45, 0.0}, {0.22, 0.45, 0.2}, 8, 7, "head", "body", 3);
  add_box(m, {-0.03, 0.62, 0.17}, {0.03, 0.66, 0.3}, "beak");
  finish(m);
  return m;
}

Mesh make_apple() {
  Mesh m;
  add_ellipsoid(m, {0.0, 0.5, 0.0}, {0.55, 0.5, 0.55}, 10, 6, "skin", "skin", 0);
  add_box(m, {-0.02, 0.95, -0.02}, {0.02, 1.15, 0.02}, "stem");
  finish(m);
  return m;
}

Mesh make_cube() {
  Mesh m;
  add_box(m, {0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}, "default");
  finish(m);
  return m;
}

Rgb8 mix(Rgb8 a, Rgb8 b, double t) {
  auto ch = [t](std::uint8_t x, std::uint8_t y) {
    return static_cast<std::uint8_t>(std::lround(x + (y - x) * t));
  };
  return {ch(a[0], b[0]), ch(a[1], b[1]), ch(a[2], b[2])};
}

Rgb8 random_color(drcount::Rng& rng) {
  return {static_cast<std::uint8_t>(rng.uniform_int(0, 255)),
          static_cast<std::uint8_t>(rng.uniform_int(0, 255)),
          static_cast<std::uint8_t>(rng.uniform_int(0, 255))};
}

Image make_texture(const std::string& kind, drcount::Rng& rng) {
  constexpr std::size_t n = 64;
  const Rgb8 a = random_color(rng);
  const Rgb8 b = random_color(rng);
  const double freq = rng.uniform(2.0, 8.0);
  const double angle = rng.uniform(0.0, std::numbers::pi);
  Image img(n, n);
  for (std::size_t y = 0; y < n; ++y) {
    for (std::size_t x = 0; x < n; ++x) {
      const double u = static_cast<double>(x) / n;
      const double v = static_cast<double>(y) / n;
      Rgb8 c = a;
      if (kind == "checkered") {
        c = ((static_cast<int>(u * freq) + static_cast<int>(v * freq)) % 2) ? a : b;
      } else if (kind == "striped") {
        const double t = u * std::cos(angle) + v * std::sin(angle);
        c = std::fmod(t * freq * 2.0, 2.0) < 1.0 ? a : b;
      } else if (kind == "dotted") {
        const double fu = std::fmod(u * freq, 1.0) - 0.5;
        const double fv = std::fmod(v * freq, 1.0) - 0.5;
        c = fu * fu + fv * fv < 0.09 ? a : b;
      } else {
        c = mix(a, b, rng.uniform01());
      }
      img.set(x, y, c);
    }
  }
  return img;
}

Image make_background(const std::string& category, drcount::Rng& rng) {
  constexpr std::size_t w = 320;
  constexpr std::size_t h = 240;
  Rgb8 sky{120, 170, 230};
  Rgb8 ground{90, 90, 90};
  if (category == "park") {
    ground = {70, 140, 60};
  } else if (category == "stadium-football") {
    ground = {40, 160, 50};
  } else if (category == "iceberg") {
    sky = {180, 210, 240};
    ground = {230, 240, 250};
  } else if (category == "desert") {
    ground = {210, 180, 120};
  } else if (category == "indoor") {
    sky = {200, 190, 170};
    ground = {140, 100, 70};
  }
  const double horizon = rng.uniform(0.3, 0.55);
  Image img(w, h);
  for (std::size_t y = 0; y < h; ++y) {
    const double v = static_cast<double>(y) / h;
    for (std::size_t x = 0; x < w; ++x) {
      const Rgb8 base = v < horizon ? mix(sky, {255, 255, 255}, v / horizon * 0.5)
                                    : mix(ground, {20, 20, 20}, (v - horizon) * 0.6);
      const double noise = rng.uniform(-12.0, 12.0);
      auto ch = [noise](std::uint8_t c) {
        return static_cast<std::uint8_t>(std::clamp(c + noise, 0.0, 255.0));
      };
      img.set(x, y, {ch(base[0]), ch(base[1]), ch(base[2])});
    }
  }
  return img;
}

void write_sidecar(const fs::path& path, const std::string& body) {
  std::ofstream out(path);
  out << body << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_sample_assets <out_dir>\n";
    return 2;
  }
  const fs::path root = argv[1];
  const fs::path meshes = root / "meshes";
  const fs::path textures = root / "textures";
  const fs::path backgrounds = root / "backgrounds";
  for (const auto& d : {meshes, textures, backgrounds}) {
    fs::create_directories(d);
  }

  // One library per object domain so that a configuration picks its object
  // type through assets.meshes.
  const std::pair<const char*, Mesh> shapes[] = {{"person", make_person()},
                                                 {"car", make_car()},
                                                 {"penguin", make_penguin()},
                                                 {"apple", make_apple()},
                                                 {"cube", make_cube()}};
  for (const auto& [name, mesh] : shapes) {
    const fs::path dir = meshes / name;
    fs::create_directories(dir);
    drcount::save_obj(mesh, dir / (std::string(name) + ".obj"));
    drcount::write_index(dir, {{name, std::string(name) + ".obj", name}});
  }
  write_sidecar(meshes / "car" / "car.meta.json", R"({"anchor": "centroid"})");
  write_sidecar(meshes / "apple" / "apple.meta.json", R"({"anchor": "centroid"})");
  write_sidecar(meshes / "penguin" / "penguin.meta.json", R"({"anchor": "centroid"})");

  drcount::Rng rng(20240601);
  std::vector<drcount::IndexEntry> tex_index;
  const char* kinds[] = {"checkered", "striped", "dotted", "noisy"};
  for (int i = 0; i < 16; ++i) {
    const std::string kind = kinds[i % 4];
    const std::string id = kind + "_" + std::to_string(i / 4);
    drcount::save_png(make_texture(kind, rng), textures / (id + ".png"));
    tex_index.push_back({id, id + ".png", kind});
  }
  drcount::write_index(textures, tex_index);

  std::vector<drcount::IndexEntry> bg_index;
  const char* categories[] = {"street", "park", "indoor", "desert", "stadium-football", "iceberg"};
  for (int i = 0; i < 12; ++i) {
    const std::string category = categories[i % 6];
    const std::string id = category + "_" + std::to_string(i / 6);
    drcount::save_png(make_background(category, rng), backgrounds / (id + ".png"));
    bg_index.push_back({id, id + ".png", category});
  }
  drcount::write_index(backgrounds, bg_index);
  std::cout << "wrote sample assets to " << root.string() << '\n';
  return 0;
}
