#include "histofeat/color.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "histofeat/error.hpp"
#include "histofeat/texture.hpp"

namespace histofeat {

Histogram gray_histogram(const GrayImage& image) {
  std::array<std::uint64_t, 256> counts{};
  for (auto v : image.data) ++counts[v];
  Histogram h{};
  if (image.data.empty()) return h;
  const double n = static_cast<double>(image.data.size());
  for (std::size_t k = 0; k < 256; ++k) h[k] = static_cast<double>(counts[k]) / n;
  return h;
}

FeatureVector hist_stats(const Histogram& hist) {
  double mean = 0.0;
  for (std::size_t k = 0; k < 256; ++k) mean += (static_cast<double>(k) / 255.0) * hist[k];

  double m2 = 0, m3 = 0, m4 = 0, uniformity = 0, entropy = 0;
  for (std::size_t k = 0; k < 256; ++k) {
    const double p = hist[k];
    if (p == 0.0) continue;
    const double d = static_cast<double>(k) / 255.0 - mean;
    const double d2 = d * d;
    m2 += d2 * p;
    m3 += d2 * d * p;
    m4 += d2 * d2 * p;
    uniformity += p * p;
    entropy -= p * std::log2(p);
  }
  const double sigma = std::sqrt(m2);
  const double smoothness = 1.0 - 1.0 / (1.0 + m2);
  return {"hist", {mean, sigma, smoothness, m3, m4, uniformity, entropy}};
}

FeatureVector autocorrelogram(const GrayImage& image, const AcConfig& config) {
  if (config.distances.empty()) throw Error(ErrorKind::Config, "autocorrelogram needs at least one distance");
  for (std::size_t i = 0; i < config.distances.size(); ++i) {
    if (config.distances[i] == 0 || (i > 0 && config.distances[i] <= config.distances[i - 1]))
      throw Error(ErrorKind::Config, "autocorrelogram distances must be positive and strictly increasing");
  }
  const std::size_t dmax = config.distances.back();
  if (image.width <= dmax || image.height <= dmax)
    throw Error(ErrorKind::DegenerateImage, std::to_string(image.width) + "x" + std::to_string(image.height) +
                                                " image is not larger than distance " + std::to_string(dmax));

  const QuantizedImage q = quantize(image, config.levels);
  const long w = static_cast<long>(q.width);
  const long h = static_cast<long>(q.height);
  const std::size_t levels = config.levels;

  FeatureVector out{"ac", std::vector<double>(levels * config.distances.size(), 0.0)};
  std::vector<std::uint64_t> same(levels), all(levels);
  for (std::size_t di = 0; di < config.distances.size(); ++di) {
    const long d = static_cast<long>(config.distances[di]);
    std::fill(same.begin(), same.end(), 0);
    std::fill(all.begin(), all.end(), 0);

    auto visit = [&](long rr, long cc, std::uint16_t bin) {
      if (rr < 0 || rr >= h || cc < 0 || cc >= w) return;
      ++all[bin];
      if (q.bins[static_cast<std::size_t>(rr * w + cc)] == bin) ++same[bin];
    };

    for (long r = 0; r < h; ++r) {
      for (long c = 0; c < w; ++c) {
        const std::uint16_t bin = q.bins[static_cast<std::size_t>(r * w + c)];
        // ring |dr| == d or |dc| == d: two full rows plus two trimmed columns
        for (long dc = -d; dc <= d; ++dc) {
          visit(r - d, c + dc, bin);
          visit(r + d, c + dc, bin);
        }
        for (long dr = -d + 1; dr <= d - 1; ++dr) {
          visit(r + dr, c - d, bin);
          visit(r + dr, c + d, bin);
        }
      }
    }
    for (std::size_t b = 0; b < levels; ++b)
      out.values[di * levels + b] = all[b] ? static_cast<double>(same[b]) / static_cast<double>(all[b]) : 0.0;
  }
  return out;
}

}  // namespace histofeat
