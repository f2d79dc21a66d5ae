#include "histofeat/descriptors.hpp"

#include "histofeat/color.hpp"
#include "histofeat/moments.hpp"
#include "histofeat/texture.hpp"

namespace histofeat {

std::string_view to_string(DescriptorKind kind) noexcept {
  switch (kind) {
    case DescriptorKind::CH1: return "ch1";
    case DescriptorKind::CH2: return "ch2";
    case DescriptorKind::LM: return "lm";
    case DescriptorKind::ZM: return "zm";
    case DescriptorKind::HAR: return "har";
    case DescriptorKind::LBP: return "lbp";
    case DescriptorKind::HIST: return "hist";
    case DescriptorKind::AC: return "ac";
    case DescriptorKind::HAAR: return "haar";
  }
  return "?";
}

std::optional<DescriptorKind> parse_descriptor(std::string_view text) noexcept {
  for (DescriptorKind k : kAllDescriptors)
    if (to_string(k) == text) return k;
  return std::nullopt;
}

std::size_t descriptor_dim(DescriptorKind kind) noexcept {
  switch (kind) {
    case DescriptorKind::CH1:
    case DescriptorKind::CH2:
    case DescriptorKind::LM: return 36;
    case DescriptorKind::ZM: return 12;
    case DescriptorKind::HAR: return kHaralickCount;
    case DescriptorKind::LBP: return kLbpClasses;
    case DescriptorKind::HIST: return 7;
    case DescriptorKind::AC: return 256;
    case DescriptorKind::HAAR: return 240;
  }
  return 0;
}

FeatureVector extract(DescriptorKind kind, const GrayImage& image) {
  switch (kind) {
    case DescriptorKind::CH1: return separable_moments(image, {PolyFamily::Cheb1, 5});
    case DescriptorKind::CH2: return separable_moments(image, {PolyFamily::Cheb2, 5});
    case DescriptorKind::LM: return separable_moments(image, {PolyFamily::Legendre, 5});
    case DescriptorKind::ZM: return zernike_features(image);
    case DescriptorKind::HAR: return haralick_ri(image);
    case DescriptorKind::LBP: return lbp_ri_hist(image);
    case DescriptorKind::HIST: return hist_stats(gray_histogram(image));
    case DescriptorKind::AC: return autocorrelogram(image);
    case DescriptorKind::HAAR: return haar_features(image);
  }
  return {};
}

}  // namespace histofeat
