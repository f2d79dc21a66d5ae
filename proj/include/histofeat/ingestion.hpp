#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace histofeat {

enum class Label : std::uint8_t { Normal = 0, Abnormal = 1 };

constexpr std::size_t kNumClasses = 2;

/// "normal" / "abnormal"; the same spelling is used for directory names and
/// the feature CSV label column.
std::string_view to_string(Label label) noexcept;
std::optional<Label> parse_label(std::string_view text) noexcept;

struct Sample {
  std::string id;  // path relative to the dataset root, '/'-separated
  Label label;

  bool operator==(const Sample&) const = default;
};

struct Dataset {
  std::filesystem::path root;
  std::vector<Sample> samples;  // sorted by id

  std::size_t size() const noexcept { return samples.size(); }
  std::size_t count(Label label) const noexcept;
  std::vector<Label> labels() const;
};

/// Enumerates `<root>/normal` and `<root>/abnormal` (non-recursive) for
/// .png, .bmp, .jpg and .jpeg files (extension match is case-insensitive).
Dataset load_dataset(const std::filesystem::path& root);

struct FoldPlan {
  std::size_t k = 0;
  std::uint64_t seed = 0;
  std::vector<std::size_t> assignment;  // fold index per dataset sample

  /// Sample indices whose fold equals `fold`, ascending.
  std::vector<std::size_t> test_indices(std::size_t fold) const;
  std::vector<std::size_t> train_indices(std::size_t fold) const;

  bool operator==(const FoldPlan&) const = default;
};

/// Stratified k-fold partition.
///
/// For each class c (Normal = 0, Abnormal = 1) the indices of that class,
/// in dataset order, are shuffled with Fisher-Yates driven by
/// SplitMix64(derive_seed(seed, c)): for i = n-1 down to 1, swap element i
/// with element bounded(i + 1). The shuffled position p then goes to fold
/// p mod k. Per-class fold sizes therefore differ by at most one.
FoldPlan stratified_folds(const std::vector<Label>& labels, std::size_t k, std::uint64_t seed);
FoldPlan stratified_folds(const Dataset& dataset, std::size_t k, std::uint64_t seed);

}  // namespace histofeat
