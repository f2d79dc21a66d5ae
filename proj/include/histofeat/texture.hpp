#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "histofeat/feature.hpp"
#include "histofeat/image.hpp"

namespace histofeat {

/// Image whose values are bin indices in [0, levels).
struct QuantizedImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::size_t levels = 0;
  std::vector<std::uint16_t> bins;

  std::uint16_t at(std::size_t col, std::size_t row) const { return bins[row * width + col]; }
};

/// bin = floor(intensity * levels / 256), levels in [2, 256].
QuantizedImage quantize(const GrayImage& image, std::size_t levels);

struct Glcm {
  std::size_t levels = 0;
  std::vector<double> matrix;  // levels x levels, row-major

  double at(std::size_t i, std::size_t j) const { return matrix[i * levels + j]; }
};

/// Offsets in (dcol, drow): 0 -> (+d, 0), 45 -> (+d, -d), 90 -> (0, -d),
/// 135 -> (-d, -d). Pair counts plus their transpose, normalized to sum 1.
Glcm glcm(const QuantizedImage& image, std::size_t distance, int angle_degrees);

/// Energy, Correlation, Inertia, Entropy, Inverse Difference Moment,
/// Sum Average, Sum Variance, Sum Entropy, Difference Average,
/// Difference Variance, Difference Entropy, IMC1, IMC2.
inline constexpr std::size_t kHaralickCount = 13;
std::array<double, kHaralickCount> haralick13(const Glcm& glcm);

struct GlcmConfig {
  std::size_t levels = 8;
  std::size_t distance = 1;
  std::vector<int> angles{0, 45, 90, 135};
};

/// Mean of haralick13 over the configured angles.
FeatureVector haralick_ri(const GrayImage& image, const GlcmConfig& config = {});

/// Rotation-invariant LBP(8, 1) histogram over the 36 rotation classes.
inline constexpr std::size_t kLbpClasses = 36;
FeatureVector lbp_ri_hist(const GrayImage& image);

/// Minimum over the 8 circular rotations of an 8-bit code.
std::uint8_t lbp_rotation_min(std::uint8_t code) noexcept;
/// Histogram bin for a code: rank of its rotation minimum among the 36 minima.
std::size_t lbp_class_index(std::uint8_t code) noexcept;
/// Raw 8-bit code at an interior pixel. Bit b is set iff neighbour b >= centre;
/// neighbours run counter-clockwise from the right: E, NE, N, NW, W, SW, S, SE.
std::uint8_t lbp_code(const GrayImage& image, std::size_t col, std::size_t row);

/// Inclusive summed-area table: at(x, y) = sum of pixels in [0..x] x [0..y].
class IntegralImage {
 public:
  explicit IntegralImage(const GrayImage& image);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::uint64_t at(std::size_t x, std::size_t y) const { return table_[(y + 1) * (width_ + 1) + x + 1]; }
  /// Sum over [x, x+w) x [y, y+h). Throws Bank when out of bounds.
  std::uint64_t rect_sum(std::size_t x, std::size_t y, std::size_t w, std::size_t h) const;

 private:
  std::size_t width_;
  std::size_t height_;
  std::vector<std::uint64_t> table_;  // (W+1) x (H+1), zero first row/column
};

enum class HaarKind { EdgeH, EdgeV, LineH, LineV, FourRect, CenterSurround };

/// A weighted rectangle relative to a template's top-left corner.
struct HaarRect {
  std::size_t x, y, w, h;
  int weight;
};

struct HaarTemplate {
  HaarKind kind;
  std::size_t x, y;  // top-left corner in the image
  std::size_t size;  // square side, a multiple of 4
};

/// Rectangles for a template of side `size`. Weights are chosen so that the
/// weighted areas cancel: a constant image always gives 0.
///   EdgeH: top half +1, bottom half -1
///   EdgeV: left half +1, right half -1
///   LineH: whole box +1, middle horizontal band (half height) -2
///   LineV: whole box +1, middle vertical band (half width) -2
///   FourRect: TL +1, TR -1, BL -1, BR +1
///   CenterSurround: whole box +1, centre square (half side) -4
std::vector<HaarRect> haar_rects(HaarKind kind, std::size_t size);

struct HaarBank {
  std::vector<HaarTemplate> templates;
};

/// 5 kinds (EdgeH, EdgeV, LineH, FourRect, CenterSurround) x 3 scales
/// (1/8, 1/4, 1/2 of min(W, H), floored to a multiple of 4, at least 4) x
/// 4x4 anchor grid spread evenly over the valid top-left range: 240
/// templates. Throws Bank when a template does not fit.
HaarBank default_haar_bank(std::size_t width, std::size_t height);

/// Per template: sum(weight * rectangle sum) / template area. Uses the
/// default bank for the image size when `bank` is null.
FeatureVector haar_features(const GrayImage& image, const HaarBank* bank = nullptr);

}  // namespace histofeat
