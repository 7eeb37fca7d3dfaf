#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "drcount/camera.hpp"
#include "drcount/render.hpp"
#include "test_support.hpp"

using namespace drcount;
using namespace drcount::testing;

namespace {

const Rgb8 kGray{40, 50, 60};

Image render_flat(const Scene& scene, const Camera& cam, const std::vector<Rgb8>& colors,
                  const Image& bg) {
  return rasterize(scene, cam, bg, flat_textures(colors)).to_image();
}

std::size_t covered(const Image& img, const Image& bg) {
  std::size_t n = 0;
  for (std::size_t y = 0; y < img.height(); ++y) {
    for (std::size_t x = 0; x < img.width(); ++x) {
      n += img.at(x, y) != bg.at(x, y) ? 1 : 0;
    }
  }
  return n;
}

}  // namespace

TEST_SUITE("projection") {
  TEST_CASE("optical axis maps to the image center") {
    const Camera cam = test_camera(65, 49);
    const auto p = project(cam, {0, 0, -5});
    REQUIRE(p.has_value());
    CHECK(p->x == 32.0);
    CHECK(p->y == 24.0);
    CHECK(p->depth == doctest::Approx(5.0));
  }

  TEST_CASE("frustum edges map to the image border") {
    const Camera cam = test_camera(64, 48);
    const double t = std::tan(30.0 * std::numbers::pi / 180.0);
    const double z = 3.0;
    const auto right = project(cam, {t * cam.aspect() * z, 0, -z});
    const auto top = project(cam, {0, t * z, -z});
    REQUIRE(right.has_value());
    REQUIRE(top.has_value());
    CHECK(right->x == doctest::Approx(63.5));
    CHECK(top->y == doctest::Approx(-0.5));
  }

  TEST_CASE("points outside the depth range do not project") {
    const Camera cam = test_camera();
    CHECK_FALSE(project(cam, {0, 0, 1}).has_value());
    CHECK_FALSE(project(cam, {0, 0, -0.05}).has_value());
    CHECK_FALSE(project(cam, {0, 0, -150}).has_value());
  }

  TEST_CASE("in_image is closed at pixel centers") {
    CHECK(in_image(0, 0, 10, 10));
    CHECK(in_image(9, 9, 10, 10));
    CHECK_FALSE(in_image(9.0001, 0, 10, 10));
    CHECK_FALSE(in_image(-0.0001, 0, 10, 10));
  }

  TEST_CASE("degenerate cameras are rejected") {
    Camera cam = test_camera();
    cam.target = cam.position;
    CHECK_THROWS_AS(cam.validate(), std::invalid_argument);
    cam = test_camera();
    cam.near_clip = 0.0;
    CHECK_THROWS_AS(cam.validate(), std::invalid_argument);
    cam = test_camera();
    cam.up = {0, 0, -1};
    CHECK_THROWS_AS(cam.validate(), std::invalid_argument);
  }
}

TEST_SUITE("rasterize") {
  TEST_CASE("empty scene reproduces the background exactly") {
    const Camera cam = test_camera();
    Image bg(cam.width, cam.height);
    Rng rng(1);
    for (auto& b : bg.bytes()) {
      b = static_cast<std::uint8_t>(rng.uniform_int(0, 255));
    }
    Scene scene;
    scene.camera = cam;
    CHECK(rasterize(scene, cam, bg, ImageLibrary{}).to_image() == bg);
  }

  TEST_CASE("background size must match") {
    const Camera cam = test_camera();
    Scene scene;
    CHECK_THROWS_AS(rasterize(scene, cam, Image(3, 3), ImageLibrary{}), std::invalid_argument);
  }

  TEST_CASE("nearer triangle wins in either draw order") {
    const Camera cam = test_camera();
    const Image bg(cam.width, cam.height, kGray);
    const std::vector<Vec3> near_tri{{-1, -1, -3}, {1, -1, -3}, {0, 1, -3}};
    const std::vector<Vec3> far_tri{{-3, -3, -6}, {3, -3, -6}, {0, 3, -6}};
    const std::vector<Rgb8> colors{{255, 0, 0}, {0, 255, 0}};
    const Image a = render_flat(flat_scene(cam, {near_tri, far_tri}), cam, colors, bg);
    const Image b = render_flat(flat_scene(cam, {far_tri, near_tri}), cam, {colors[1], colors[0]}, bg);
    CHECK(a == b);
    CHECK(a.at(32, 24) == Rgb8{255, 0, 0});
  }

  TEST_CASE("equal depth keeps the first fragment") {
    const Camera cam = test_camera();
    const Image bg(cam.width, cam.height, kGray);
    const std::vector<Vec3> tri{{-1, -1, -3}, {1, -1, -3}, {0, 1, -3}};
    const Image img =
        render_flat(flat_scene(cam, {tri, tri}), cam, {{255, 0, 0}, {0, 0, 255}}, bg);
    CHECK(img.at(32, 24) == Rgb8{255, 0, 0});
  }

  TEST_CASE("ambient 0.3 on white gives 76 or 77") {
    const Camera cam = test_camera();
    const Image bg(cam.width, cam.height, kGray);
    Scene scene = flat_scene(cam, {{{-1, -1, -3}, {1, -1, -3}, {0, 1, -3}}});
    scene.ambient = 0.3;
    const Image img = render_flat(scene, cam, {{255, 255, 255}}, bg);
    for (std::uint8_t c : img.at(32, 24)) {
      CHECK(c >= 76);
      CHECK(c <= 77);
    }
  }

  TEST_CASE("lambert term from a frontal light") {
    const Camera cam = test_camera();
    const Image bg(cam.width, cam.height, kGray);
    Scene scene = flat_scene(cam, {{{-1, -1, -3}, {1, -1, -3}, {0, 1, -3}}});
    scene.ambient = 0.2;
    scene.lights = {{{0, 0, 100}, {1, 0.5, 0}, 0.5}};
    const Image img = render_flat(scene, cam, {{200, 200, 200}}, bg);
    const Rgb8 c = img.at(32, 24);
    // n.l is within 1e-3 of 1 for a light this far along the normal.
    CHECK(std::abs(c[0] - 200 * 0.7) <= 1.0);
    CHECK(std::abs(c[1] - 200 * 0.45) <= 1.0);
    CHECK(std::abs(c[2] - 200 * 0.2) <= 1.0);
  }

  TEST_CASE("back faces are drawn with the flipped normal") {
    const Camera cam = test_camera();
    const Image bg(cam.width, cam.height, kGray);
    Scene scene = flat_scene(cam, {{{-1, -1, -3}, {0, 1, -3}, {1, -1, -3}}});
    scene.ambient = 0.0;
    scene.lights = {{{0, 0, 100}, {1, 1, 1}, 1.0}};
    const Image img = render_flat(scene, cam, {{200, 200, 200}}, bg);
    CHECK(img.at(32, 24)[0] >= 199);
  }

  TEST_CASE("shared edges through pixel centers are drawn exactly once") {
    // Odd sizes put the axis lines exactly on a pixel row and column, so the
    // four triangles of this diamond tie on the shared edges.
    const Camera cam = test_camera(41, 31);
    const Image bg(cam.width, cam.height, kGray);
    const double z = -4.0;
    const Vec3 c{0, 0, z};
    const std::vector<std::vector<Vec3>> tris = {{c, {1.5, 0, z}, {0, 1.5, z}},
                                                 {c, {0, 1.5, z}, {-1.5, 0, z}},
                                                 {c, {-1.5, 0, z}, {0, -1.5, z}},
                                                 {c, {0, -1.5, z}, {1.5, 0, z}}};
    std::vector<Image> alone;
    for (const auto& t : tris) {
      alone.push_back(render_flat(flat_scene(cam, {t}), cam, {{255, 255, 255}}, bg));
    }
    const std::vector<Rgb8> colors{{255, 0, 0}, {0, 255, 0}, {0, 0, 255}, {255, 255, 0}};
    const Image all = render_flat(flat_scene(cam, tris), cam, colors, bg);
    std::size_t union_pixels = 0;
    for (std::size_t y = 0; y < cam.height; ++y) {
      for (std::size_t x = 0; x < cam.width; ++x) {
        int hits = 0;
        int which = -1;
        for (int k = 0; k < 4; ++k) {
          if (alone[k].at(x, y) != kGray) {
            ++hits;
            which = k;
          }
        }
        CHECK(hits <= 1);
        if (hits == 1) {
          ++union_pixels;
          CHECK(all.at(x, y) == colors[which]);
        } else {
          CHECK(all.at(x, y) == kGray);
        }
      }
    }
    // The shared vertex and the axis pixels inside the diamond are covered.
    const std::size_t cx = 20;
    const std::size_t cy = 15;
    CHECK(all.at(cx, cy) != kGray);
    CHECK(all.at(cx + 1, cy) != kGray);
    CHECK(all.at(cx, cy + 1) != kGray);
    CHECK(all.at(cx - 1, cy) != kGray);
    CHECK(all.at(cx, cy - 1) != kGray);
    CHECK(union_pixels > 20);
  }

  TEST_CASE("matches the ray-cast reference on random flat scenes") {
    const Camera cam = test_camera(48, 36);
    const Image bg(cam.width, cam.height, kGray);
    Rng rng(21);
    for (int trial = 0; trial < 40; ++trial) {
      std::vector<std::vector<Vec3>> tris;
      for (double zmid : {-4.0, -9.0}) {
        std::vector<Vec3> t;
        for (int k = 0; k < 3; ++k) {
          t.push_back({rng.uniform(-4, 4), rng.uniform(-3, 3), zmid + rng.uniform(-1.5, 1.5)});
        }
        tris.push_back(t);
      }
      if (rng.uniform01() < 0.5) {
        std::swap(tris[0], tris[1]);
      }
      const Scene scene = flat_scene(cam, tris);
      const std::vector<Rgb8> colors{{255, 0, 0}, {0, 0, 255}};
      CHECK(render_flat(scene, cam, colors, bg) == ray_cast_flat(scene, cam, bg, colors));
    }
  }

  TEST_CASE("triangles crossing the near plane are clipped") {
    const Camera cam = test_camera(48, 36);
    const Image bg(cam.width, cam.height, kGray);
    // A floor strip running from behind the camera to well in front of it.
    const std::vector<std::vector<Vec3>> tris = {{{-3, -1, 2}, {3, -1, 2}, {0, -1, -20}}};
    const Scene scene = flat_scene(cam, tris);
    const Framebuffer fb = rasterize(scene, cam, bg, flat_textures({{255, 0, 0}}));
    std::size_t drawn = 0;
    for (double d : fb.depth) {
      if (std::isfinite(d)) {
        ++drawn;
        CHECK(d > cam.near_clip);
      }
    }
    CHECK(drawn > 0);
    CHECK(fb.to_image() == ray_cast_flat(scene, cam, bg, {{255, 0, 0}}));
  }

  TEST_CASE("geometry beyond the far plane is discarded") {
    Camera cam = test_camera();
    cam.far_clip = 10.0;
    const Image bg(cam.width, cam.height, kGray);
    const Scene scene = flat_scene(cam, {{{-5, -5, -12}, {5, -5, -12}, {0, 5, -12}}});
    CHECK(covered(render_flat(scene, cam, {{255, 0, 0}}, bg), bg) == 0);
  }

  TEST_CASE("texture sampling is nearest texel") {
    const Camera cam = test_camera();
    const Image bg(cam.width, cam.height, kGray);
    Scene scene = flat_scene(cam, {{{-2, -2, -6}, {2, -2, -6}, {-2, 2, -6}}});
    scene.instances[0].world.uvs = {{0, 0}, {1, 0}, {0, 1}};
    ImageLibrary lib;
    Image tex(2, 2);
    tex.set(0, 0, {255, 0, 0});
    tex.set(1, 0, {0, 255, 0});
    tex.set(0, 1, {0, 0, 255});
    tex.set(1, 1, {255, 255, 0});
    lib.items.push_back({"t", "", tex});
    const Image img = rasterize(scene, cam, bg, lib).to_image();
    // Lower-left corner (u, v near 0) reads the bottom-left texel.
    const auto p = project(cam, {-1.8, -1.8, -6});
    REQUIRE(p.has_value());
    CHECK(img.at(static_cast<std::size_t>(std::lround(p->x)),
                 static_cast<std::size_t>(std::lround(p->y))) == Rgb8{0, 0, 255});
    const auto q = project(cam, {-1.8, 1.5, -6});
    REQUIRE(q.has_value());
    CHECK(img.at(static_cast<std::size_t>(std::lround(q->x)),
                 static_cast<std::size_t>(std::lround(q->y))) == Rgb8{255, 0, 0});
  }

  TEST_CASE("shadows only darken") {
    const DatasetConfig cfg = small_config();
    Scene scene;
    scene.camera = cfg.scene.camera;
    SceneInstance inst;
    inst.world = unit_cube();
    inst.world = place(scale_uniform(inst.world, 2.0), 0.0, {0, 0, -8});
    inst.part_textures = {0};
    scene.instances.push_back(inst);
    const Image bg(scene.camera.width, scene.camera.height, {200, 200, 200});
    RenderOptions opt;
    opt.shadows = true;
    const Image with = rasterize(scene, scene.camera, bg, flat_textures({{0, 0, 0}}), opt).to_image();
    const Image without = rasterize(scene, scene.camera, bg, flat_textures({{0, 0, 0}})).to_image();
    std::size_t darker = 0;
    for (std::size_t i = 0; i < with.bytes().size(); ++i) {
      CHECK(with.bytes()[i] <= without.bytes()[i]);
      darker += with.bytes()[i] < without.bytes()[i] ? 1 : 0;
    }
    CHECK(darker > 0);
  }
}
