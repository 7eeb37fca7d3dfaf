#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "drcount/error.hpp"
#include "drcount/mesh.hpp"
#include "drcount/transforms.hpp"
#include "test_support.hpp"

using namespace drcount;
using namespace drcount::testing;

namespace {

Box3 bbox(const Mesh& m) { return m.bounds(); }

std::string cube_obj() {
  return R"(# unit cube
v 0 0 0
v 1 0 0
v 0 1 0
v 1 1 0
v 0 0 1
v 1 0 1
v 0 1 1
v 1 1 1
f 1 3 4
f 1 4 2
f 5 6 8
f 5 8 7
f 1 2 6
f 1 6 5
f 3 7 8
f 3 8 4
f 1 5 7
f 1 7 3
f 2 4 8
f 2 8 6
)";
}

}  // namespace

TEST_SUITE("load_mesh") {
  TEST_CASE("single triangle") {
    TempDir dir;
    write_text(dir / "tri.obj", "v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\n");
    const Mesh m = load_mesh(dir / "tri.obj");
    CHECK(m.vertices.size() == 3);
    CHECK(m.faces.size() == 1);
    CHECK(m.part_count() == 1);
    CHECK(m.anchor_index == 2);
  }

  TEST_CASE("closed cube anchors on a top vertex") {
    TempDir dir;
    write_text(dir / "cube.obj", cube_obj());
    const Mesh m = load_mesh(dir / "cube.obj");
    CHECK(m.vertices.size() == 8);
    CHECK(m.faces.size() == 12);
    CHECK(m.vertices[m.anchor_index].y == 1.0);
    // Lowest index among the y = 1 vertices.
    CHECK(m.anchor_index == 2);
  }

  TEST_CASE("face budget") {
    TempDir dir;
    std::string text = "v 0 0 0\nv 1 0 0\nv 0 1 0\nv 1 1 0\n";
    for (int i = 0; i < 500; ++i) {
      text += "f 1 2 3\n";
    }
    write_text(dir / "big.obj", text);
    CHECK_THROWS_WITH_AS(load_mesh(dir / "big.obj"), doctest::Contains("face budget exceeded"),
                         AssetError);
    // The cap is configurable.
    CHECK(load_mesh(dir / "big.obj", 500).faces.size() == 500);
  }

  TEST_CASE("errors") {
    TempDir dir;
    CHECK_THROWS_AS(load_mesh(dir / "missing.obj"), AssetError);
    write_text(dir / "bad_index.obj", "v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 9\n");
    CHECK_THROWS_WITH_AS(load_mesh(dir / "bad_index.obj"), doctest::Contains("malformed"),
                         AssetError);
    write_text(dir / "repeat.obj", "v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 2\n");
    CHECK_THROWS_AS(load_mesh(dir / "repeat.obj"), AssetError);
    write_text(dir / "no_faces.obj", "v 0 0 0\nv 1 0 0\n");
    CHECK_THROWS_AS(load_mesh(dir / "no_faces.obj"), AssetError);
    write_text(dir / "bad_vertex.obj", "v 0 zero 0\n");
    CHECK_THROWS_AS(load_mesh(dir / "bad_vertex.obj"), AssetError);
  }

  TEST_CASE("groups become part labels and quads are triangulated") {
    TempDir dir;
    write_text(dir / "parts.obj", R"(v 0 0 0
v 1 0 0
v 1 1 0
v 0 1 0
v 0 2 0
vt 0 0
vt 1 0
vt 1 1
vt 0 1
g shirt
f 1/1 2/2 3/3 4/4
usemtl hair
f -4/2 -2/3 -1/4
g shirt
f 1//1 3//1 4//1
)");
    const Mesh m = load_mesh(dir / "parts.obj");
    REQUIRE(m.faces.size() == 4);
    CHECK(m.part_names == std::vector<std::string>{"shirt", "hair"});
    CHECK(m.part_labels == std::vector<std::uint16_t>{0, 0, 1, 0});
    CHECK(m.faces[2] == Face{1, 3, 4});
    CHECK(m.uvs[2] == Vec2{1.0, 1.0});
    CHECK(m.anchor_index == 4);
  }

  TEST_CASE("sidecar overrides the anchor") {
    TempDir dir;
    write_text(dir / "cube.obj", cube_obj());
    write_text(dir / "cube.meta.json", R"({"anchor": 5})");
    CHECK(load_mesh(dir / "cube.obj").anchor_index == 5);
    write_text(dir / "cube.meta.json", R"({"anchor": "centroid"})");
    const Mesh m = load_mesh(dir / "cube.obj");
    CHECK(m.anchor_mode == AnchorMode::kCentroid);
    CHECK(m.anchor_point() == Vec3{0.5, 0.5, 0.5});
    write_text(dir / "cube.meta.json", R"({"anchor": 8})");
    CHECK_THROWS_AS(load_mesh(dir / "cube.obj"), AssetError);
    write_text(dir / "cube.meta.json", R"({"anchr": 1})");
    CHECK_THROWS_AS(load_mesh(dir / "cube.obj"), AssetError);
  }

  TEST_CASE("synthesized UVs stay in the unit square") {
    TempDir dir;
    write_text(dir / "cube.obj", cube_obj());
    const Mesh m = load_mesh(dir / "cube.obj");
    for (const Vec2& uv : m.uvs) {
      CHECK(uv.x >= 0.0);
      CHECK(uv.x <= 1.0);
      CHECK(uv.y >= 0.0);
      CHECK(uv.y <= 1.0);
    }
  }

  TEST_CASE("save_obj round trip") {
    TempDir dir;
    Rng rng(3);
    Mesh m = random_mesh(rng);
    m.part_names = {"a", "b"};
    for (std::size_t f = 0; f < m.part_labels.size(); ++f) {
      m.part_labels[f] = static_cast<std::uint16_t>(f % 2);
    }
    save_obj(m, dir / "m.obj");
    const Mesh back = load_mesh(dir / "m.obj");
    CHECK(back.vertices == m.vertices);
    CHECK(back.part_names == m.part_names);
    CHECK(back.faces.size() == m.faces.size());
  }

  TEST_CASE("every shipped sample mesh loads") {
    for (const auto& entry : std::filesystem::directory_iterator(asset_dir() / "meshes")) {
      CAPTURE(entry.path().string());
      const Mesh m = load_mesh(entry.path() / (entry.path().filename().string() + ".obj"));
      CHECK(m.faces.size() < 200);
      CHECK_NOTHROW(validate_mesh(m));
    }
  }
}

TEST_SUITE("scale_axis") {
  TEST_CASE("identity") {
    const Mesh cube = unit_cube();
    for (Axis a : {Axis::kX, Axis::kY, Axis::kZ}) {
      CHECK(scale_axis(cube, a, 1.0) == cube);
    }
  }

  TEST_CASE("factor 2 on z of the unit cube") {
    const Box3 b = bbox(scale_axis(unit_cube(), Axis::kZ, 2.0));
    CHECK(b.extent().z == 2.0);
    CHECK(b.extent().x == 1.0);
    CHECK(b.extent().y == 1.0);
  }

  TEST_CASE("non-positive factors are rejected") {
    CHECK_THROWS_AS(scale_axis(unit_cube(), Axis::kX, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(scale_axis(unit_cube(), Axis::kX, -1.0), std::invalid_argument);
  }

  TEST_CASE("inverse round trip on random meshes") {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
      const Mesh m = random_mesh(rng);
      const auto axis = static_cast<Axis>(rng.uniform_int(0, 2));
      const double s = std::exp(rng.uniform(-5.0, 5.0));
      const Mesh back = scale_axis(scale_axis(m, axis, s), axis, 1.0 / s);
      for (std::size_t i = 0; i < m.vertices.size(); ++i) {
        for (std::size_t k = 0; k < 3; ++k) {
          const double a = m.vertices[i][k];
          CHECK(std::abs(back.vertices[i][k] - a) <= 1e-9 * std::max(1.0, std::abs(a)));
        }
      }
      CHECK(back.faces == m.faces);
      CHECK(back.part_labels == m.part_labels);
      CHECK(back.anchor_index == m.anchor_index);
    }
  }
}

TEST_SUITE("sample_object_scale") {
  TEST_CASE("bounds") {
    Rng rng(5);
    for (int i = 0; i < 10000; ++i) {
      const double k1 = sample_object_scale(1, rng);
      CHECK((k1 >= 1.0 && k1 <= 8.0));
      const double k8 = sample_object_scale(8, rng);
      CHECK((k8 >= 0.125 && k8 <= 1.0));
    }
  }

  TEST_CASE("zero objects") {
    Rng rng(5);
    CHECK_THROWS_AS(sample_object_scale(0, rng), std::invalid_argument);
  }

  TEST_CASE("thickness bounds") {
    Rng rng(6);
    for (int i = 0; i < 10000; ++i) {
      const double t = sample_thickness(rng);
      CHECK((t >= -0.1 && t <= 0.5));
    }
  }
}

TEST_SUITE("randomize_vertices") {
  TEST_CASE("factor 0 is bit-identical") {
    Rng rng(1);
    const Mesh m = random_mesh(rng);
    CHECK(randomize_vertices(m, 0.0, rng) == m);
  }

  TEST_CASE("per-axis displacement bounded by factor times mean edge") {
    // Scale the cube so that its mean edge length is exactly 1.
    const Mesh cube = unit_cube();
    const Mesh m = scale_uniform(cube, 1.0 / mean_edge_length(cube));
    CHECK(mean_edge_length(m) == doctest::Approx(1.0).epsilon(1e-12));
    Rng rng(2);
    for (int trial = 0; trial < 1000; ++trial) {
      const Mesh out = randomize_vertices(m, 0.4, rng);
      for (std::size_t i = 0; i < m.vertices.size(); ++i) {
        for (std::size_t k = 0; k < 3; ++k) {
          CHECK(std::abs(out.vertices[i][k] - m.vertices[i][k]) <= 0.4 + 1e-12);
        }
      }
    }
  }

  TEST_CASE("deterministic and topology preserving") {
    Rng gen(9);
    const Mesh m = random_mesh(gen);
    Rng a(77);
    Rng b(77);
    const Mesh x = randomize_vertices(m, 0.4, a);
    const Mesh y = randomize_vertices(m, 0.4, b);
    CHECK(x == y);
    CHECK(x.faces == m.faces);
    CHECK(x.uvs == m.uvs);
    CHECK(x.part_labels == m.part_labels);
    CHECK(x.anchor_index == m.anchor_index);
    CHECK(x.vertices != m.vertices);
  }

  TEST_CASE("negative factor") {
    Rng rng(1);
    CHECK_THROWS_AS(randomize_vertices(unit_cube(), -0.1, rng), std::invalid_argument);
  }

  TEST_CASE("mean edge length of the unit cube") {
    // 12 unit edges and 6 face diagonals of length sqrt(2).
    CHECK(mean_edge_length(unit_cube()) ==
          doctest::Approx((12.0 + 6.0 * std::sqrt(2.0)) / 18.0).epsilon(1e-15));
  }
}

TEST_SUITE("vertex_normals") {
  TEST_CASE("unit cube") {
    const Mesh cube = unit_cube();
    for (const Face& f : cube.faces) {
      const Vec3 n = normalized(cross(cube.vertices[f[1]] - cube.vertices[f[0]],
                                      cube.vertices[f[2]] - cube.vertices[f[0]]));
      int nonzero = 0;
      for (std::size_t k = 0; k < 3; ++k) {
        nonzero += n[k] != 0.0 ? 1 : 0;
      }
      CHECK(nonzero == 1);
    }
    const VertexNormals vn = vertex_normals(cube);
    const Vec3 center{0.5, 0.5, 0.5};
    for (std::size_t i = 0; i < 8; ++i) {
      CHECK_FALSE(vn.isolated[i]);
      CHECK(length(vn.normals[i]) == doctest::Approx(1.0));
      // Outward winding puts every corner normal in the corner's octant.
      const Vec3 diagonal = cube.vertices[i] - center;
      for (std::size_t k = 0; k < 3; ++k) {
        CHECK(vn.normals[i][k] * diagonal[k] > 0.0);
      }
    }
  }

  TEST_CASE("flat fan") {
    Mesh fan;
    fan.vertices.push_back({0, 0, 0});
    for (int k = 0; k < 6; ++k) {
      const double a = 2.0 * std::numbers::pi * k / 6.0;
      fan.vertices.push_back({std::cos(a), std::sin(a), 0.0});
    }
    for (std::uint32_t k = 0; k < 6; ++k) {
      fan.faces.push_back({0, 1 + k, 1 + (k + 1) % 6});
    }
    const VertexNormals vn = vertex_normals(fan);
    for (const Vec3& n : vn.normals) {
      CHECK(n.x == doctest::Approx(0.0));
      CHECK(n.y == doctest::Approx(0.0));
      CHECK(std::abs(n.z) == doctest::Approx(1.0));
    }
  }

  TEST_CASE("sphere approximation is within 15 degrees of radial") {
    const Vec3 c{1.0, -2.0, 0.5};
    const Mesh sphere = uv_sphere(c, 2.0, 12, 8);
    const VertexNormals vn = vertex_normals(sphere);
    const double cos15 = std::cos(15.0 * std::numbers::pi / 180.0);
    for (std::size_t i = 0; i < sphere.vertices.size(); ++i) {
      const Vec3 radial = normalized(sphere.vertices[i] - c);
      CHECK(dot(vn.normals[i], radial) >= cos15);
    }
  }

  TEST_CASE("isolated vertex is flagged") {
    Mesh m = unit_cube();
    m.vertices.push_back({5, 5, 5});
    const VertexNormals vn = vertex_normals(m);
    CHECK(vn.isolated.back());
    CHECK(vn.normals.back() == Vec3{});
  }

  TEST_CASE("zero-area faces contribute nothing") {
    Mesh m = unit_cube();
    const VertexNormals before = vertex_normals(m);
    m.vertices.push_back({0, 0, 0});
    m.vertices.push_back({1, 1, 1});
    m.faces.push_back({0, 8, 9});  // collinear with vertex 0
    const VertexNormals after = vertex_normals(m);
    CHECK(after.normals[0] == before.normals[0]);
    CHECK(after.isolated[8]);
  }
}

TEST_SUITE("solidify") {
  TEST_CASE("cube doubles vertices and faces") {
    const Mesh cube = unit_cube();
    const Mesh s = solidify(cube, 0.25);
    CHECK(s.vertices.size() == 16);
    CHECK(s.faces.size() == 24);
    CHECK(s.part_labels.size() == 24);
    CHECK(s.uvs.size() == 16);
    CHECK(s.anchor_index == cube.anchor_index);
    CHECK_NOTHROW(validate_mesh(s));
    const VertexNormals vn = vertex_normals(cube);
    for (std::size_t i = 0; i < 8; ++i) {
      CHECK(s.vertices[i] == cube.vertices[i]);
      const Vec3 expected = cube.vertices[i] + vn.normals[i] * 0.25;
      CHECK(length(s.vertices[8 + i] - expected) == doctest::Approx(0.0));
    }
    for (std::size_t f = 0; f < 12; ++f) {
      const Face& a = cube.faces[f];
      const Face& b = s.faces[12 + f];
      CHECK(b == Face{a[0] + 8, a[2] + 8, a[1] + 8});
    }
  }

  TEST_CASE("zero thickness duplicates coincide") {
    Rng rng(4);
    const Mesh m = random_mesh(rng);
    const Mesh s = solidify(m, 0.0);
    for (std::size_t i = 0; i < m.vertices.size(); ++i) {
      CHECK(s.vertices[m.vertices.size() + i] == m.vertices[i]);
    }
  }

  TEST_CASE("negative thickness moves the shell inward") {
    const Mesh s = solidify(unit_cube(), -0.1);
    const Vec3 c{0.5, 0.5, 0.5};
    for (std::size_t i = 0; i < 8; ++i) {
      CHECK(length(s.vertices[8 + i] - c) < length(s.vertices[i] - c));
    }
  }
}

TEST_SUITE("placement helpers") {
  TEST_CASE("normalize_to_unit_height") {
    const Mesh m = normalize_to_unit_height(scale_uniform(unit_cube(), 3.0));
    const Box3 b = m.bounds();
    CHECK(b.extent().y == doctest::Approx(1.0));
    CHECK(b.min.y == doctest::Approx(0.0));
    CHECK(b.center().x == doctest::Approx(0.0));
    CHECK(b.center().z == doctest::Approx(0.0));
  }

  TEST_CASE("place rotates about y then translates") {
    Mesh m;
    m.vertices = {{1, 0, 0}};
    const Mesh p = place(m, std::numbers::pi / 2.0, {10, 1, 0});
    CHECK(p.vertices[0].x == doctest::Approx(10.0));
    CHECK(p.vertices[0].y == doctest::Approx(1.0));
    CHECK(p.vertices[0].z == doctest::Approx(-1.0));
  }
}
