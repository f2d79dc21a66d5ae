#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace histofeat {

/// Row-major 8-bit RGB raster.
struct RgbImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> data;  // width * height * 3, R G B order

  RgbImage() = default;
  RgbImage(std::size_t w, std::size_t h, std::vector<std::uint8_t> pixels);
};

/// Row-major 8-bit intensity raster. All descriptors operate on this.
struct GrayImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> data;

  GrayImage() = default;
  GrayImage(std::size_t w, std::size_t h, std::vector<std::uint8_t> pixels);
  GrayImage(std::size_t w, std::size_t h, std::uint8_t fill);

  std::uint8_t at(std::size_t col, std::size_t row) const { return data[row * width + col]; }
  std::uint8_t& at(std::size_t col, std::size_t row) { return data[row * width + col]; }
  std::span<const std::uint8_t> row(std::size_t r) const { return {data.data() + r * width, width}; }

  bool operator==(const GrayImage&) const = default;
};

/// BT.601 luma, rounded half away from zero and clamped to [0, 255].
std::uint8_t luma(std::uint8_t r, std::uint8_t g, std::uint8_t b) noexcept;

GrayImage to_gray(const RgbImage& image);

/// Counter-clockwise quarter turns. The result of rotating a WxH image is HxW.
GrayImage rotate90(const GrayImage& image, int quarter_turns = 1);

/// Reads a PNG, BMP or JPEG file and converts it to grayscale with `luma`.
GrayImage decode_and_gray(const std::filesystem::path& path);

RgbImage decode_rgb(const std::filesystem::path& path);

/// Writes a lossless PNG (used by tests and tooling).
void write_png(const GrayImage& image, const std::filesystem::path& path);

}  // namespace histofeat
