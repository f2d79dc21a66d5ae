#include "histofeat/texture.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "histofeat/error.hpp"

namespace histofeat {

QuantizedImage quantize(const GrayImage& image, std::size_t levels) {
  if (levels < 2 || levels > 256)
    throw Error(ErrorKind::Config, "quantization levels must be in [2, 256], got " + std::to_string(levels));
  QuantizedImage q{image.width, image.height, levels, std::vector<std::uint16_t>(image.data.size())};
  for (std::size_t i = 0; i < image.data.size(); ++i)
    q.bins[i] = static_cast<std::uint16_t>(image.data[i] * levels / 256);
  return q;
}

// -- GLCM / Haralick --------------------------------------------------------------

namespace {

struct Offset {
  long dc;
  long dr;
};

Offset angle_offset(int angle, std::size_t d) {
  const long s = static_cast<long>(d);
  switch (angle) {
    case 0: return {s, 0};
    case 45: return {s, -s};
    case 90: return {0, -s};
    case 135: return {-s, -s};
    default: throw Error(ErrorKind::Config, "GLCM angle must be 0, 45, 90 or 135, got " + std::to_string(angle));
  }
}

double plogp(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

}  // namespace

Glcm glcm(const QuantizedImage& image, std::size_t distance, int angle_degrees) {
  if (distance < 1) throw Error(ErrorKind::Config, "GLCM distance must be at least 1");
  const Offset off = angle_offset(angle_degrees, distance);
  const long w = static_cast<long>(image.width);
  const long h = static_cast<long>(image.height);
  if (std::abs(off.dc) >= w || std::abs(off.dr) >= h)
    throw Error(ErrorKind::DegenerateImage, std::to_string(w) + "x" + std::to_string(h) +
                                                " image is too small for GLCM offset " +
                                                std::to_string(distance) + " at " +
                                                std::to_string(angle_degrees) + " degrees");

  const std::size_t levels = image.levels;
  std::vector<std::uint64_t> counts(levels * levels, 0);
  const long c0 = std::max(0L, -off.dc), c1 = std::min(w, w - off.dc);
  const long r0 = std::max(0L, -off.dr), r1 = std::min(h, h - off.dr);
  for (long r = r0; r < r1; ++r) {
    for (long c = c0; c < c1; ++c) {
      const auto i = image.bins[static_cast<std::size_t>(r * w + c)];
      const auto j = image.bins[static_cast<std::size_t>((r + off.dr) * w + c + off.dc)];
      ++counts[i * levels + j];
      ++counts[j * levels + i];
    }
  }

  const double total = 2.0 * static_cast<double>((r1 - r0) * (c1 - c0));
  Glcm g{levels, std::vector<double>(levels * levels)};
  for (std::size_t k = 0; k < counts.size(); ++k) g.matrix[k] = static_cast<double>(counts[k]) / total;
  return g;
}

std::array<double, kHaralickCount> haralick13(const Glcm& glcm) {
  const std::size_t n = glcm.levels;
  // Grey levels are numbered 1..n, as in Haralick's definitions.
  std::vector<double> px(n, 0.0), py(n, 0.0), psum(2 * n + 1, 0.0), pdiff(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double p = glcm.at(i, j);
      px[i] += p;
      py[j] += p;
      psum[i + j + 2] += p;
      pdiff[i > j ? i - j : j - i] += p;
    }
  }

  double mux = 0, muy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mux += static_cast<double>(i + 1) * px[i];
    muy += static_cast<double>(i + 1) * py[i];
  }
  double varx = 0, vary = 0;
  for (std::size_t i = 0; i < n; ++i) {
    varx += (static_cast<double>(i + 1) - mux) * (static_cast<double>(i + 1) - mux) * px[i];
    vary += (static_cast<double>(i + 1) - muy) * (static_cast<double>(i + 1) - muy) * py[i];
  }

  double energy = 0, cov = 0, inertia = 0, entropy = 0, idm = 0, hxy1 = 0, hxy2 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double p = glcm.at(i, j);
      const double d = static_cast<double>(i) - static_cast<double>(j);
      energy += p * p;
      cov += (static_cast<double>(i + 1) - mux) * (static_cast<double>(j + 1) - muy) * p;
      inertia += d * d * p;
      entropy -= plogp(p);
      idm += p / (1.0 + d * d);
      const double pxy = px[i] * py[j];
      if (p > 0.0) hxy1 -= p * std::log2(pxy);
      hxy2 -= plogp(pxy);
    }
  }
  const double sd = std::sqrt(varx * vary);
  const double correlation = sd > 1e-12 ? cov / sd : 0.0;

  double sum_avg = 0, sum_entropy = 0;
  for (std::size_t k = 2; k <= 2 * n; ++k) {
    sum_avg += static_cast<double>(k) * psum[k];
    sum_entropy -= plogp(psum[k]);
  }
  double sum_var = 0;
  for (std::size_t k = 2; k <= 2 * n; ++k)
    sum_var += (static_cast<double>(k) - sum_avg) * (static_cast<double>(k) - sum_avg) * psum[k];

  double diff_avg = 0, diff_entropy = 0;
  for (std::size_t k = 0; k < n; ++k) {
    diff_avg += static_cast<double>(k) * pdiff[k];
    diff_entropy -= plogp(pdiff[k]);
  }
  double diff_var = 0;
  for (std::size_t k = 0; k < n; ++k)
    diff_var += (static_cast<double>(k) - diff_avg) * (static_cast<double>(k) - diff_avg) * pdiff[k];

  double hx = 0, hy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    hx -= plogp(px[i]);
    hy -= plogp(py[i]);
  }
  const double hmax = std::max(hx, hy);
  const double imc1 = hmax > 0.0 ? (entropy - hxy1) / hmax : 0.0;
  // exp2(-2 * bits) == exp(-2 * nats): Haralick's natural-log definition.
  const double imc2 = std::sqrt(std::max(0.0, 1.0 - std::exp2(-2.0 * (hxy2 - entropy))));

  return {energy,      correlation, inertia,  entropy,      idm,  sum_avg, sum_var,
          sum_entropy, diff_avg,    diff_var, diff_entropy, imc1, imc2};
}

FeatureVector haralick_ri(const GrayImage& image, const GlcmConfig& config) {
  if (config.angles.empty()) throw Error(ErrorKind::Config, "GLCM angle set is empty");
  const QuantizedImage q = quantize(image, config.levels);

  std::vector<std::array<double, kHaralickCount>> per_angle;
  for (int angle : config.angles) per_angle.push_back(haralick13(glcm(q, config.distance, angle)));

  // Summing in sorted order makes the mean independent of which angle produced
  // which value, so a 90-degree rotation (which permutes the angles) gives a
  // bit-identical result.
  FeatureVector out{"har", std::vector<double>(kHaralickCount)};
  std::vector<double> column(per_angle.size());
  for (std::size_t f = 0; f < kHaralickCount; ++f) {
    for (std::size_t a = 0; a < per_angle.size(); ++a) column[a] = per_angle[a][f];
    std::sort(column.begin(), column.end());
    double sum = 0.0;
    for (double v : column) sum += v;
    out.values[f] = sum / static_cast<double>(column.size());
  }
  return out;
}

// -- LBP ----------------------------------------------------------------------------

namespace {

struct LbpTables {
  std::array<std::uint8_t, 256> class_of{};
  std::size_t classes = 0;

  LbpTables() {
    std::array<int, 256> rank;
    rank.fill(-1);
    for (int code = 0; code < 256; ++code) {
      const auto m = lbp_rotation_min(static_cast<std::uint8_t>(code));
      if (m == code) rank[code] = static_cast<int>(classes++);
    }
    for (int code = 0; code < 256; ++code)
      class_of[code] = static_cast<std::uint8_t>(rank[lbp_rotation_min(static_cast<std::uint8_t>(code))]);
  }
};

const LbpTables& lbp_tables() {
  static const LbpTables tables;
  return tables;
}

// E, NE, N, NW, W, SW, S, SE in (dcol, drow); rows grow downwards.
constexpr int kNeighbourDc[8] = {1, 1, 0, -1, -1, -1, 0, 1};
constexpr int kNeighbourDr[8] = {0, -1, -1, -1, 0, 1, 1, 1};

}  // namespace

std::uint8_t lbp_rotation_min(std::uint8_t code) noexcept {
  std::uint8_t best = code;
  std::uint8_t cur = code;
  for (int r = 1; r < 8; ++r) {
    cur = static_cast<std::uint8_t>((cur >> 1) | (cur << 7));
    best = std::min(best, cur);
  }
  return best;
}

std::size_t lbp_class_index(std::uint8_t code) noexcept { return lbp_tables().class_of[code]; }

std::uint8_t lbp_code(const GrayImage& image, std::size_t col, std::size_t row) {
  const std::uint8_t centre = image.at(col, row);
  std::uint8_t code = 0;
  for (int b = 0; b < 8; ++b) {
    const auto c = static_cast<std::size_t>(static_cast<long>(col) + kNeighbourDc[b]);
    const auto r = static_cast<std::size_t>(static_cast<long>(row) + kNeighbourDr[b]);
    if (image.at(c, r) >= centre) code = static_cast<std::uint8_t>(code | (1u << b));
  }
  return code;
}

FeatureVector lbp_ri_hist(const GrayImage& image) {
  if (image.width < 3 || image.height < 3)
    throw Error(ErrorKind::DegenerateImage, "LBP needs at least a 3x3 image");
  const auto& tables = lbp_tables();
  std::array<std::uint64_t, kLbpClasses> counts{};
  for (std::size_t r = 1; r + 1 < image.height; ++r)
    for (std::size_t c = 1; c + 1 < image.width; ++c) ++counts[tables.class_of[lbp_code(image, c, r)]];

  const double total = static_cast<double>((image.width - 2) * (image.height - 2));
  FeatureVector out{"lbp", std::vector<double>(kLbpClasses)};
  for (std::size_t k = 0; k < kLbpClasses; ++k) out.values[k] = static_cast<double>(counts[k]) / total;
  return out;
}

// -- Haar ---------------------------------------------------------------------------

IntegralImage::IntegralImage(const GrayImage& image)
    : width_(image.width), height_(image.height), table_((image.width + 1) * (image.height + 1), 0) {
  const std::size_t stride = width_ + 1;
  for (std::size_t y = 0; y < height_; ++y) {
    std::uint64_t row_sum = 0;
    for (std::size_t x = 0; x < width_; ++x) {
      row_sum += image.at(x, y);
      table_[(y + 1) * stride + x + 1] = table_[y * stride + x + 1] + row_sum;
    }
  }
}

std::uint64_t IntegralImage::rect_sum(std::size_t x, std::size_t y, std::size_t w, std::size_t h) const {
  if (x + w > width_ || y + h > height_)
    throw Error(ErrorKind::Bank, "rectangle exceeds " + std::to_string(width_) + "x" + std::to_string(height_) + " image");
  const std::size_t stride = width_ + 1;
  return table_[(y + h) * stride + x + w] + table_[y * stride + x] - table_[y * stride + x + w] -
         table_[(y + h) * stride + x];
}

std::vector<HaarRect> haar_rects(HaarKind kind, std::size_t s) {
  if (s == 0 || s % 4 != 0) throw Error(ErrorKind::Bank, "Haar template side must be a positive multiple of 4");
  const std::size_t half = s / 2;
  const std::size_t quarter = s / 4;
  switch (kind) {
    case HaarKind::EdgeH: return {{0, 0, s, half, 1}, {0, half, s, half, -1}};
    case HaarKind::EdgeV: return {{0, 0, half, s, 1}, {half, 0, half, s, -1}};
    case HaarKind::LineH: return {{0, 0, s, s, 1}, {0, quarter, s, half, -2}};
    case HaarKind::LineV: return {{0, 0, s, s, 1}, {quarter, 0, half, s, -2}};
    case HaarKind::FourRect:
      return {{0, 0, half, half, 1}, {half, 0, half, half, -1}, {0, half, half, half, -1}, {half, half, half, half, 1}};
    case HaarKind::CenterSurround: return {{0, 0, s, s, 1}, {quarter, quarter, half, half, -4}};
  }
  return {};
}

HaarBank default_haar_bank(std::size_t width, std::size_t height) {
  constexpr HaarKind kinds[] = {HaarKind::EdgeH, HaarKind::EdgeV, HaarKind::LineH, HaarKind::FourRect,
                                HaarKind::CenterSurround};
  constexpr std::size_t divisors[] = {8, 4, 2};
  const std::size_t min_dim = std::min(width, height);

  HaarBank bank;
  for (HaarKind kind : kinds) {
    for (std::size_t div : divisors) {
      const std::size_t s = std::max<std::size_t>(4, min_dim / div / 4 * 4);
      if (s > min_dim)
        throw Error(ErrorKind::Bank, "image " + std::to_string(width) + "x" + std::to_string(height) +
                                         " is too small for a " + std::to_string(s) + "-pixel Haar template");
      for (std::size_t ay = 0; ay < 4; ++ay)
        for (std::size_t ax = 0; ax < 4; ++ax)
          bank.templates.push_back({kind, ax * (width - s) / 3, ay * (height - s) / 3, s});
    }
  }
  return bank;
}

FeatureVector haar_features(const GrayImage& image, const HaarBank* bank) {
  HaarBank fallback;
  if (bank == nullptr) {
    fallback = default_haar_bank(image.width, image.height);
    bank = &fallback;
  }
  const IntegralImage sat(image);
  FeatureVector out{"haar", {}};
  out.values.reserve(bank->templates.size());
  for (const auto& t : bank->templates) {
    if (t.x + t.size > image.width || t.y + t.size > image.height)
      throw Error(ErrorKind::Bank, "Haar template at (" + std::to_string(t.x) + ", " + std::to_string(t.y) +
                                       ") of side " + std::to_string(t.size) + " leaves the image");
    std::int64_t acc = 0;
    for (const auto& rect : haar_rects(t.kind, t.size))
      acc += rect.weight * static_cast<std::int64_t>(sat.rect_sum(t.x + rect.x, t.y + rect.y, rect.w, rect.h));
    out.values.push_back(static_cast<double>(acc) / static_cast<double>(t.size * t.size));
  }
  return out;
}

}  // namespace histofeat
