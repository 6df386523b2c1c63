#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace pap {

using Rgb = std::array<std::uint8_t, 3>;

/// 8-bit RGB raster, row-major, three interleaved samples per pixel.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  Image() = default;
  Image(int w, int h, Rgb fill = {0, 0, 0});

  /// True when the buffer holds exactly width*height*3 samples.
  bool consistent() const;

  std::span<std::uint8_t, 3> at(int x, int y) {
    return std::span<std::uint8_t, 3>(pixels.data() + offset(x, y), 3);
  }
  std::span<const std::uint8_t, 3> at(int x, int y) const {
    return std::span<const std::uint8_t, 3>(pixels.data() + offset(x, y), 3);
  }
  Rgb rgb(int x, int y) const;

  void fill_rect(int x0, int y0, int x1, int y1, Rgb color);

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::size_t offset(int x, int y) const {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)) * 3;
  }
};

/// Non-interlaced 8-bit RGB PNG. Output bytes depend only on the pixels.
std::vector<std::uint8_t> encode_png(const Image& image);
void write_png(const std::filesystem::path& path, const Image& image);

/// Accepts any PNG libpng can decode; the result is converted to 8-bit RGB.
Image decode_png(std::span<const std::uint8_t> bytes);
Image read_png(const std::filesystem::path& path);

}  // namespace pap
