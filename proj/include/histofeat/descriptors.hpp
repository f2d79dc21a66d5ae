#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "histofeat/feature.hpp"
#include "histofeat/image.hpp"

namespace histofeat {

enum class DescriptorKind { CH1, CH2, LM, ZM, HAR, LBP, HIST, AC, HAAR };

inline constexpr DescriptorKind kAllDescriptors[] = {
    DescriptorKind::CH1, DescriptorKind::CH2, DescriptorKind::LM,
    DescriptorKind::ZM,  DescriptorKind::HAR, DescriptorKind::LBP,
    DescriptorKind::HIST, DescriptorKind::AC, DescriptorKind::HAAR,
};

/// ch1, ch2, lm, zm, har, lbp, hist, ac, haar
std::string_view to_string(DescriptorKind kind) noexcept;
std::optional<DescriptorKind> parse_descriptor(std::string_view text) noexcept;

/// Feature length at default settings (independent of image size).
std::size_t descriptor_dim(DescriptorKind kind) noexcept;

/// Runs one descriptor with its default configuration.
FeatureVector extract(DescriptorKind kind, const GrayImage& image);

}  // namespace histofeat
