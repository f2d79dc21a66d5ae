#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "histofeat/feature.hpp"
#include "histofeat/image.hpp"

namespace histofeat {

using Histogram = std::array<double, 256>;

/// Relative-frequency histogram of the 256 intensities.
Histogram gray_histogram(const GrayImage& image);

/// mean, std, smoothness, skewness, kurtosis, uniformity, entropy.
///
/// Intensities are taken as z = k / 255. Skewness and kurtosis are the raw
/// third and fourth central moments (not divided by sigma^3, sigma^4);
/// smoothness is 1 - 1/(1 + sigma^2); entropy is in bits.
FeatureVector hist_stats(const Histogram& hist);

struct AcConfig {
  std::vector<std::size_t> distances{1, 2, 3, 4};
  std::size_t levels = 64;
};

/// Grey-level autocorrelogram on the L-infinity ring.
///
/// For bin c and distance d the value is
///   #{(p, q) : bin(p) = bin(q) = c, |p - q|_inf = d} / #{(p, q) : bin(p) = c, |p - q|_inf = d}
/// over ordered in-bounds pairs, 0 when the denominator is 0. Output is the
/// per-distance vectors of length `levels`, concatenated in distance order.
FeatureVector autocorrelogram(const GrayImage& image, const AcConfig& config = {});

}  // namespace histofeat
