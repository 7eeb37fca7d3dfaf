#include "drcount/annotate.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "drcount/error.hpp"

namespace drcount {

namespace {

constexpr char kDensityMagic[4] = {'D', 'M', 'A', 'P'};
constexpr std::uint32_t kDensityVersion = 1;

void put_u32(std::ostream& out, std::uint32_t v) {
  const unsigned char bytes[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                                  static_cast<unsigned char>(v >> 16),
                                  static_cast<unsigned char>(v >> 24)};
  out.write(reinterpret_cast<const char*>(bytes), 4);
}

std::uint32_t get_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
         static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}

}  // namespace

double DensityMap::sum() const { return std::accumulate(values.begin(), values.end(), 0.0); }

Annotation make_dots(const Scene& scene, const Camera& camera) {
  Annotation ann;
  ann.width = camera.width;
  ann.height = camera.height;
  for (const SceneInstance& inst : scene.instances) {
    const auto p = project(camera, inst.world.anchor_point());
    if (!p) {
      continue;
    }
    const Vec2 dot{std::round(p->x * kDotGrid) / kDotGrid, std::round(p->y * kDotGrid) / kDotGrid};
    if (in_image(dot.x, dot.y, camera.width, camera.height)) {
      ann.dots.push_back(dot);
    }
  }
  return ann;
}

DensityMap density_map(const std::vector<Vec2>& dots, std::size_t width, std::size_t height,
                       double sigma) {
  if (!(sigma > 0.0)) {
    throw std::invalid_argument("density_map: sigma must be positive");
  }
  DensityMap map{width, height, std::vector<double>(width * height, 0.0)};
  if (width == 0 || height == 0) {
    return map;
  }
  const double radius = std::ceil(4.0 * sigma);
  const double inv_two_sigma2 = 1.0 / (2.0 * sigma * sigma);
  std::vector<double> kernel;
  for (const Vec2& d : dots) {
    const double w_max = static_cast<double>(width) - 1.0;
    const double h_max = static_cast<double>(height) - 1.0;
    const double cx = std::clamp(std::round(d.x), 0.0, w_max);
    const double cy = std::clamp(std::round(d.y), 0.0, h_max);
    const auto x0 = static_cast<std::size_t>(std::max(0.0, cx - radius));
    const auto x1 = static_cast<std::size_t>(std::min(w_max, cx + radius));
    const auto y0 = static_cast<std::size_t>(std::max(0.0, cy - radius));
    const auto y1 = static_cast<std::size_t>(std::min(h_max, cy + radius));
    const std::size_t kw = x1 - x0 + 1;
    kernel.assign(kw * (y1 - y0 + 1), 0.0);
    double mass = 0.0;
    for (std::size_t y = y0; y <= y1; ++y) {
      const double dy = static_cast<double>(y) - d.y;
      for (std::size_t x = x0; x <= x1; ++x) {
        const double dx = static_cast<double>(x) - d.x;
        const double g = std::exp(-(dx * dx + dy * dy) * inv_two_sigma2);
        kernel[(y - y0) * kw + (x - x0)] = g;
        mass += g;
      }
    }
    if (!(mass > 0.0)) {
      // A tiny sigma underflows every sample; put the unit mass on the
      // nearest pixel.
      kernel[(static_cast<std::size_t>(cy) - y0) * kw + (static_cast<std::size_t>(cx) - x0)] = 1.0;
      mass = 1.0;
    }
    for (std::size_t y = y0; y <= y1; ++y) {
      for (std::size_t x = x0; x <= x1; ++x) {
        map.values[y * width + x] += kernel[(y - y0) * kw + (x - x0)] / mass;
      }
    }
  }
  return map;
}

Augmented hflip(const Image& image, const Annotation& ann) {
  Augmented out{mirror_horizontal(image), ann, false};
  const double w1 = static_cast<double>(ann.width) - 1.0;
  for (Vec2& d : out.annotation.dots) {
    d.x = w1 - d.x;
  }
  if (ann.density) {
    DensityMap& m = *out.annotation.density;
    for (std::size_t y = 0; y < m.height; ++y) {
      for (std::size_t x = 0; x < m.width; ++x) {
        m.values[y * m.width + x] = ann.density->at(m.width - 1 - x, y);
      }
    }
  }
  return out;
}

Augmented crop_at(const Image& image, const Annotation& ann, std::size_t origin_x,
                  std::size_t origin_y, std::size_t size, double sigma) {
  Augmented out;
  out.image = crop_window(image, origin_x, origin_y, size, size);
  out.padded = image.width() < size || image.height() < size;
  out.annotation.image_id = ann.image_id;
  out.annotation.width = size;
  out.annotation.height = size;
  const double ox = static_cast<double>(origin_x);
  const double oy = static_cast<double>(origin_y);
  for (const Vec2& d : ann.dots) {
    const double x = d.x - ox;
    const double y = d.y - oy;
    if (in_image(x, y, size, size)) {
      out.annotation.dots.push_back({x, y});
    }
  }
  if (ann.density) {
    out.annotation.density = density_map(out.annotation.dots, size, size, sigma);
  }
  return out;
}

Augmented crop(const Image& image, const Annotation& ann, std::size_t size, Rng& rng,
               double sigma) {
  const std::size_t max_x = image.width() > size ? image.width() - size : 0;
  const std::size_t max_y = image.height() > size ? image.height() - size : 0;
  const auto ox = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(max_x)));
  const auto oy = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(max_y)));
  return crop_at(image, ann, ox, oy, size, sigma);
}

nlohmann::json annotation_to_json(const Annotation& ann, const std::string& image_file,
                                  const std::string& density_file) {
  nlohmann::json dots = nlohmann::json::array();
  for (const Vec2& d : ann.dots) {
    dots.push_back({d.x, d.y});
  }
  nlohmann::json doc{{"image", image_file},
                     {"width", ann.width},
                     {"height", ann.height},
                     {"count", ann.count()},
                     {"dots", std::move(dots)}};
  if (!density_file.empty()) {
    doc["density"] = density_file;
  }
  return doc;
}

void write_density(const DensityMap& map, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error("cannot write density map: " + path.string());
  }
  out.write(kDensityMagic, 4);
  put_u32(out, static_cast<std::uint32_t>(map.width));
  put_u32(out, static_cast<std::uint32_t>(map.height));
  put_u32(out, kDensityVersion);
  for (double v : map.values) {
    put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  }
  if (!out) {
    throw Error("write failed: " + path.string());
  }
}

DensityMap read_density(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("cannot read density map: " + path.string());
  }
  unsigned char header[16];
  in.read(reinterpret_cast<char*>(header), 16);
  if (!in || std::memcmp(header, kDensityMagic, 4) != 0 || get_u32(header + 12) != kDensityVersion) {
    throw Error("not a density map: " + path.string());
  }
  DensityMap map;
  map.width = get_u32(header + 4);
  map.height = get_u32(header + 8);
  const std::size_t n = map.width * map.height;
  std::vector<unsigned char> raw(4 * n);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (!in) {
    throw Error("truncated density map: " + path.string());
  }
  map.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    map.values[i] = std::bit_cast<float>(get_u32(raw.data() + 4 * i));
  }
  return map;
}

}  // namespace drcount
