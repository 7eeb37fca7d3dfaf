#include "drcount/image.hpp"

#include <png.h>

#include <cstdio>
#include <fstream>
#include <memory>
#include <string>

#include "drcount/error.hpp"

namespace drcount {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

Image load_ppm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::string magic;
  std::size_t w = 0;
  std::size_t h = 0;
  int maxval = 0;
  in >> magic >> w >> h >> maxval;
  if (!in || magic != "P6" || maxval != 255 || w == 0 || h == 0) {
    throw AssetError(path.string() + ": unsupported PPM (need binary P6, maxval 255)");
  }
  in.get();
  Image img(w, h);
  in.read(reinterpret_cast<char*>(img.bytes().data()),
          static_cast<std::streamsize>(img.bytes().size()));
  if (!in) {
    throw AssetError(path.string() + ": truncated PPM");
  }
  return img;
}

Image load_png(const std::filesystem::path& path) {
  png_image desc{};
  desc.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&desc, path.string().c_str())) {
    throw AssetError(path.string() + ": " + desc.message);
  }
  desc.format = PNG_FORMAT_RGB;
  Image img(desc.width, desc.height);
  if (!png_image_finish_read(&desc, nullptr, img.bytes().data(), 0, nullptr)) {
    const std::string msg = desc.message;
    png_image_free(&desc);
    throw AssetError(path.string() + ": " + msg);
  }
  return img;
}

}  // namespace

Image::Image(std::size_t width, std::size_t height, Rgb8 fill)
    : width_(width), height_(height), data_(3 * width * height) {
  for (std::size_t i = 0; i < width * height; ++i) {
    data_[3 * i] = fill[0];
    data_[3 * i + 1] = fill[1];
    data_[3 * i + 2] = fill[2];
  }
}

Image load_image(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw AssetError("missing image file: " + path.string());
  }
  std::ifstream probe(path, std::ios::binary);
  char sig[2] = {};
  probe.read(sig, 2);
  if (sig[0] == 'P' && sig[1] == '6') {
    return load_ppm(path);
  }
  return load_png(path);
}

void save_png(const Image& image, const std::filesystem::path& path) {
  FilePtr file(std::fopen(path.string().c_str(), "wb"));
  if (!file) {
    throw Error("cannot open for writing: " + path.string());
  }
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw Error("libpng initialisation failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error("PNG encoding failed: " + path.string());
  }
  png_init_io(png, file.get());
  png_set_compression_level(png, 6);
  png_set_filter(png, PNG_FILTER_TYPE_BASE, PNG_FILTER_SUB);
  png_set_IHDR(png, info, static_cast<png_uint_32>(image.width()),
               static_cast<png_uint_32>(image.height()), 8, PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  const std::size_t stride = 3 * image.width();
  for (std::size_t y = 0; y < image.height(); ++y) {
    // libpng takes a non-const row pointer but does not modify it.
    png_write_row(png, const_cast<png_bytep>(image.bytes().data() + y * stride));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  if (std::fflush(file.get()) != 0) {
    throw Error("write failed: " + path.string());
  }
}

Image resize_cover(const Image& image, std::size_t width, std::size_t height) {
  if (image.empty()) {
    throw AssetError("resize_cover: empty source image");
  }
  if (image.width() == width && image.height() == height) {
    return image;
  }
  const double sx = static_cast<double>(width) / static_cast<double>(image.width());
  const double sy = static_cast<double>(height) / static_cast<double>(image.height());
  const double s = std::max(sx, sy);
  const double scaled_w = static_cast<double>(image.width()) * s;
  const double scaled_h = static_cast<double>(image.height()) * s;
  const double off_x = (scaled_w - static_cast<double>(width)) * 0.5;
  const double off_y = (scaled_h - static_cast<double>(height)) * 0.5;
  Image out(width, height);
  for (std::size_t y = 0; y < height; ++y) {
    const auto src_y = std::min(image.height() - 1,
                                static_cast<std::size_t>((static_cast<double>(y) + 0.5 + off_y) / s));
    for (std::size_t x = 0; x < width; ++x) {
      const auto src_x = std::min(
          image.width() - 1, static_cast<std::size_t>((static_cast<double>(x) + 0.5 + off_x) / s));
      out.set(x, y, image.at(src_x, src_y));
    }
  }
  return out;
}

Image mirror_horizontal(const Image& image) {
  Image out(image.width(), image.height());
  for (std::size_t y = 0; y < image.height(); ++y) {
    for (std::size_t x = 0; x < image.width(); ++x) {
      out.set(image.width() - 1 - x, y, image.at(x, y));
    }
  }
  return out;
}

Image crop_window(const Image& image, std::size_t x0, std::size_t y0, std::size_t width,
                  std::size_t height) {
  Image out(width, height);
  for (std::size_t y = 0; y < height && y0 + y < image.height(); ++y) {
    for (std::size_t x = 0; x < width && x0 + x < image.width(); ++x) {
      out.set(x, y, image.at(x0 + x, y0 + y));
    }
  }
  return out;
}

}  // namespace drcount
