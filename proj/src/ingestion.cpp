#include "histofeat/ingestion.hpp"

#include <algorithm>
#include <cctype>

#include "histofeat/error.hpp"
#include "histofeat/rng.hpp"

namespace histofeat {

namespace fs = std::filesystem;

std::string_view to_string(Label label) noexcept {
  return label == Label::Normal ? "normal" : "abnormal";
}

std::optional<Label> parse_label(std::string_view text) noexcept {
  if (text == "normal") return Label::Normal;
  if (text == "abnormal") return Label::Abnormal;
  return std::nullopt;
}

std::size_t Dataset::count(Label label) const noexcept {
  return static_cast<std::size_t>(
      std::count_if(samples.begin(), samples.end(), [&](const Sample& s) { return s.label == label; }));
}

std::vector<Label> Dataset::labels() const {
  std::vector<Label> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.label);
  return out;
}

namespace {

bool is_image_file(const fs::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".png" || ext == ".bmp" || ext == ".jpg" || ext == ".jpeg";
}

}  // namespace

Dataset load_dataset(const fs::path& root) {
  Dataset dataset;
  dataset.root = root;
  for (Label label : {Label::Normal, Label::Abnormal}) {
    const std::string name(to_string(label));
    const fs::path dir = root / name;
    std::error_code ec;
    if (!fs::is_directory(dir, ec))
      throw Error(ErrorKind::Layout, "missing class directory " + dir.string());

    std::size_t found = 0;
    for (const auto& entry : fs::directory_iterator(dir, ec)) {
      if (!entry.is_regular_file() || !is_image_file(entry.path())) continue;
      dataset.samples.push_back({name + "/" + entry.path().filename().string(), label});
      ++found;
    }
    if (ec) throw Error(ErrorKind::Io, "cannot list " + dir.string() + ": " + ec.message());
    if (found == 0) throw Error(ErrorKind::EmptyClass, "no images in " + dir.string());
  }
  std::sort(dataset.samples.begin(), dataset.samples.end(),
            [](const Sample& a, const Sample& b) { return a.id < b.id; });
  return dataset;
}

std::vector<std::size_t> FoldPlan::test_indices(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignment.size(); ++i)
    if (assignment[i] == fold) out.push_back(i);
  return out;
}

std::vector<std::size_t> FoldPlan::train_indices(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignment.size(); ++i)
    if (assignment[i] != fold) out.push_back(i);
  return out;
}

FoldPlan stratified_folds(const std::vector<Label>& labels, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw Error(ErrorKind::Config, "fold count must be at least 2");

  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  plan.assignment.assign(labels.size(), 0);

  for (std::size_t c = 0; c < kNumClasses; ++c) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (static_cast<std::size_t>(labels[i]) == c) members.push_back(i);
    if (members.size() < k)
      throw Error(ErrorKind::Stratification,
                  "class " + std::string(to_string(static_cast<Label>(c))) + " has " +
                      std::to_string(members.size()) + " samples, fewer than " + std::to_string(k) +
                      " folds");

    SplitMix64 rng(derive_seed(seed, c));
    for (std::size_t i = members.size() - 1; i > 0; --i)
      std::swap(members[i], members[rng.bounded(i + 1)]);
    for (std::size_t p = 0; p < members.size(); ++p) plan.assignment[members[p]] = p % k;
  }
  return plan;
}

FoldPlan stratified_folds(const Dataset& dataset, std::size_t k, std::uint64_t seed) {
  return stratified_folds(dataset.labels(), k, seed);
}

}  // namespace histofeat
