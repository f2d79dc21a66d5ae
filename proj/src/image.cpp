#include "histofeat/image.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <iterator>
#include <string>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "histofeat/error.hpp"

namespace histofeat {

namespace {

std::string describe(std::size_t w, std::size_t h) {
  return std::to_string(w) + "x" + std::to_string(h);
}

void check_dims(std::size_t w, std::size_t h, std::size_t data_size, std::size_t channels) {
  if (data_size != w * h * channels)
    throw Error(ErrorKind::Shape, "pixel buffer of " + std::to_string(data_size) +
                                      " bytes does not match " + describe(w, h) + "x" +
                                      std::to_string(channels));
}

enum class FileFormat { Png, Bmp, Jpeg, Unknown };

FileFormat sniff(const std::vector<std::uint8_t>& bytes) {
  auto starts = [&](std::initializer_list<std::uint8_t> magic) {
    if (bytes.size() < magic.size()) return false;
    return std::equal(magic.begin(), magic.end(), bytes.begin());
  };
  if (starts({0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A})) return FileFormat::Png;
  if (starts({'B', 'M'})) return FileFormat::Bmp;
  if (starts({0xFF, 0xD8, 0xFF})) return FileFormat::Jpeg;
  return FileFormat::Unknown;
}

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorKind::Io, "read failed for " + path.string());
  return bytes;
}

}  // namespace

RgbImage::RgbImage(std::size_t w, std::size_t h, std::vector<std::uint8_t> pixels)
    : width(w), height(h), data(std::move(pixels)) {
  check_dims(w, h, data.size(), 3);
}

GrayImage::GrayImage(std::size_t w, std::size_t h, std::vector<std::uint8_t> pixels)
    : width(w), height(h), data(std::move(pixels)) {
  check_dims(w, h, data.size(), 1);
}

GrayImage::GrayImage(std::size_t w, std::size_t h, std::uint8_t fill)
    : width(w), height(h), data(w * h, fill) {}

std::uint8_t luma(std::uint8_t r, std::uint8_t g, std::uint8_t b) noexcept {
  // Integer form of round(0.299 R + 0.587 G + 0.114 B); the maximum is 255.
  const unsigned v = (299u * r + 587u * g + 114u * b + 500u) / 1000u;
  return static_cast<std::uint8_t>(v > 255u ? 255u : v);
}

GrayImage to_gray(const RgbImage& image) {
  GrayImage out(image.width, image.height, std::uint8_t{0});
  for (std::size_t i = 0; i < out.data.size(); ++i)
    out.data[i] = luma(image.data[3 * i], image.data[3 * i + 1], image.data[3 * i + 2]);
  return out;
}

GrayImage rotate90(const GrayImage& image, int quarter_turns) {
  quarter_turns = ((quarter_turns % 4) + 4) % 4;
  GrayImage cur = image;
  for (int t = 0; t < quarter_turns; ++t) {
    GrayImage next(cur.height, cur.width, std::uint8_t{0});
    for (std::size_t r = 0; r < cur.height; ++r)
      for (std::size_t c = 0; c < cur.width; ++c) next.at(r, cur.width - 1 - c) = cur.at(c, r);
    cur = std::move(next);
  }
  return cur;
}

RgbImage decode_rgb(const std::filesystem::path& path) {
  const auto bytes = read_bytes(path);
  if (sniff(bytes) == FileFormat::Unknown)
    throw Error(ErrorKind::Format, path.string() + " is not a PNG, BMP or JPEG file");

  const cv::Mat raw(1, static_cast<int>(bytes.size()), CV_8UC1, const_cast<std::uint8_t*>(bytes.data()));
  cv::Mat bgr = cv::imdecode(raw, cv::IMREAD_COLOR);
  if (bgr.empty()) throw Error(ErrorKind::Format, "cannot decode " + path.string());

  const auto w = static_cast<std::size_t>(bgr.cols);
  const auto h = static_cast<std::size_t>(bgr.rows);
  std::vector<std::uint8_t> rgb(w * h * 3);
  for (std::size_t r = 0; r < h; ++r) {
    const auto* src = bgr.ptr<std::uint8_t>(static_cast<int>(r));
    auto* dst = rgb.data() + r * w * 3;
    for (std::size_t c = 0; c < w; ++c) {
      dst[3 * c] = src[3 * c + 2];
      dst[3 * c + 1] = src[3 * c + 1];
      dst[3 * c + 2] = src[3 * c];
    }
  }
  return RgbImage(w, h, std::move(rgb));
}

GrayImage decode_and_gray(const std::filesystem::path& path) { return to_gray(decode_rgb(path)); }

void write_png(const GrayImage& image, const std::filesystem::path& path) {
  const cv::Mat mat(static_cast<int>(image.height), static_cast<int>(image.width), CV_8UC1,
                    const_cast<std::uint8_t*>(image.data.data()));
  std::vector<std::uint8_t> encoded;
  if (!cv::imencode(".png", mat, encoded)) throw Error(ErrorKind::Io, "PNG encoding failed");
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(encoded.data()), static_cast<std::streamsize>(encoded.size()));
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
}

}  // namespace histofeat
