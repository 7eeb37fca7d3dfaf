#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

namespace drcount {

using Rgb8 = std::array<std::uint8_t, 3>;

/// Row-major 8-bit RGB image.
class Image {
 public:
  Image() = default;
  Image(std::size_t width, std::size_t height, Rgb8 fill = {0, 0, 0});

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  bool empty() const { return width_ == 0 || height_ == 0; }

  Rgb8 at(std::size_t x, std::size_t y) const {
    const std::size_t i = 3 * (y * width_ + x);
    return {data_[i], data_[i + 1], data_[i + 2]};
  }
  void set(std::size_t x, std::size_t y, Rgb8 c) {
    const std::size_t i = 3 * (y * width_ + x);
    data_[i] = c[0];
    data_[i + 1] = c[1];
    data_[i + 2] = c[2];
  }

  const std::vector<std::uint8_t>& bytes() const { return data_; }
  std::vector<std::uint8_t>& bytes() { return data_; }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<std::uint8_t> data_;
};

/// Reads PNG (any bit depth / color type, converted to 8-bit RGB; alpha is
/// dropped) or binary PPM (P6, maxval 255). Throws AssetError.
Image load_image(const std::filesystem::path& path);

/// Writes an 8-bit RGB PNG with fixed compression settings and no time
/// chunk, so identical pixels give identical bytes.
void save_png(const Image& image, const std::filesystem::path& path);

/// Nearest-neighbour scale so the image covers width x height, then a
/// centered crop to exactly that size.
Image resize_cover(const Image& image, std::size_t width, std::size_t height);

Image mirror_horizontal(const Image& image);

/// Copies the window starting at (x0, y0). Parts of the window beyond the
/// source are zero-filled.
Image crop_window(const Image& image, std::size_t x0, std::size_t y0, std::size_t width,
                  std::size_t height);

}  // namespace drcount
