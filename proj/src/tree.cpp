#include <algorithm>
#include <numeric>
#include <string>
#include <utility>

#include "histofeat/classifiers.hpp"
#include "histofeat/error.hpp"

namespace histofeat {

namespace {

Label majority(const std::array<std::uint32_t, kNumClasses>& counts) {
  return counts[1] > counts[0] ? Label::Abnormal : Label::Normal;
}

// n * Gini impurity, from class counts.
double scaled_gini(double a, double b) {
  const double n = a + b;
  return n > 0.0 ? n - (a * a + b * b) / n : 0.0;
}

struct Split {
  std::size_t feature = 0;
  double threshold = 0.0;
  double impurity = 0.0;
  bool found = false;
};

class TreeBuilder {
 public:
  TreeBuilder(const Matrix& x, std::span<const Label> y, const ClassifierSpec& spec,
              std::optional<std::size_t> subset, SplitMix64& rng)
      : x_(x), y_(y), spec_(spec), rng_(rng) {
    const std::size_t f = x.cols();
    subset_ = subset ? std::clamp<std::size_t>(*subset, 1, f) : f;
  }

  TreeModel build(std::vector<std::size_t> rows) {
    model_.n_features = x_.cols();
    struct Work {
      std::uint32_t node;
      std::size_t depth;
      std::vector<std::size_t> rows;
    };
    std::vector<Work> stack;
    model_.nodes.emplace_back();
    stack.push_back({0, 0, std::move(rows)});

    // Depth-first, left child first; node ids are assigned in that order so
    // the rng stream is consumed in a fixed sequence.
    while (!stack.empty()) {
      Work work = std::move(stack.back());
      stack.pop_back();

      std::array<std::uint32_t, kNumClasses> counts{};
      for (auto r : work.rows) ++counts[static_cast<std::size_t>(y_[r])];
      model_.nodes[work.node].counts = counts;
      model_.nodes[work.node].label = majority(counts);

      const bool pure = counts[0] == 0 || counts[1] == 0;
      const bool depth_cap = spec_.max_depth && work.depth >= *spec_.max_depth;
      if (pure || depth_cap || work.rows.size() < 2 * spec_.min_leaf) continue;

      const Split split = best_split(work.rows, counts);
      if (!split.found) continue;

      std::vector<std::size_t> left, right;
      for (auto r : work.rows) (x_(r, split.feature) <= split.threshold ? left : right).push_back(r);

      const auto left_id = static_cast<std::uint32_t>(model_.nodes.size());
      model_.nodes.emplace_back();
      model_.nodes.emplace_back();
      auto& node = model_.nodes[work.node];
      node.feature = static_cast<std::uint32_t>(split.feature);
      node.threshold = split.threshold;
      node.left = left_id;
      node.right = left_id + 1;

      stack.push_back({left_id + 1, work.depth + 1, std::move(right)});
      stack.push_back({left_id, work.depth + 1, std::move(left)});
    }
    return std::move(model_);
  }

 private:
  std::vector<std::size_t> candidate_features() {
    const std::size_t f = x_.cols();
    std::vector<std::size_t> features(f);
    std::iota(features.begin(), features.end(), 0);
    if (subset_ >= f) return features;
    for (std::size_t i = 0; i < subset_; ++i) std::swap(features[i], features[i + rng_.bounded(f - i)]);
    features.resize(subset_);
    std::sort(features.begin(), features.end());
    return features;
  }

  Split best_split(const std::vector<std::size_t>& rows, const std::array<std::uint32_t, kNumClasses>& total) {
    Split best;
    const std::size_t n = rows.size();
    std::vector<std::pair<double, Label>> column(n);
    for (std::size_t feature : candidate_features()) {
      for (std::size_t i = 0; i < n; ++i) column[i] = {x_(rows[i], feature), y_[rows[i]]};
      std::sort(column.begin(), column.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      if (column.front().first == column.back().first) continue;

      double left[kNumClasses] = {0, 0};
      for (std::size_t i = 0; i + 1 < n; ++i) {
        left[static_cast<std::size_t>(column[i].second)] += 1.0;
        if (column[i].first == column[i + 1].first) continue;
        const std::size_t nl = i + 1;
        if (nl < spec_.min_leaf || n - nl < spec_.min_leaf) continue;
        const double impurity = scaled_gini(left[0], left[1]) +
                                scaled_gini(total[0] - left[0], total[1] - left[1]);
        if (!best.found || impurity < best.impurity) {
          double mid = column[i].first + (column[i + 1].first - column[i].first) / 2.0;
          if (!(mid < column[i + 1].first)) mid = column[i].first;
          best = {feature, mid, impurity, true};
        }
      }
    }
    return best;
  }

  const Matrix& x_;
  std::span<const Label> y_;
  const ClassifierSpec& spec_;
  SplitMix64& rng_;
  std::size_t subset_;
  TreeModel model_;
};

}  // namespace

TreeModel train_tree(const Matrix& x, std::span<const Label> y, std::span<const std::size_t> rows,
                     const ClassifierSpec& spec, std::optional<std::size_t> feature_subset_size,
                     SplitMix64& rng) {
  if (x.rows() != y.size())
    throw Error(ErrorKind::Shape, std::to_string(x.rows()) + " rows but " + std::to_string(y.size()) + " labels");
  if (rows.empty() || x.cols() == 0) throw Error(ErrorKind::Training, "cannot train a tree on empty input");
  if (spec.min_leaf < 1) throw Error(ErrorKind::Config, "min_leaf must be at least 1");
  TreeBuilder builder(x, y, spec, feature_subset_size, rng);
  return builder.build(std::vector<std::size_t>(rows.begin(), rows.end()));
}

TreeModel train_tree(const Matrix& x, std::span<const Label> y, const ClassifierSpec& spec,
                     std::optional<std::size_t> feature_subset_size, SplitMix64& rng) {
  std::vector<std::size_t> rows(x.rows());
  std::iota(rows.begin(), rows.end(), 0);
  return train_tree(x, y, rows, spec, feature_subset_size, rng);
}

Label TreeModel::predict_row(std::span<const double> x) const {
  std::size_t i = 0;
  while (!nodes[i].is_leaf()) i = x[nodes[i].feature] <= nodes[i].threshold ? nodes[i].left : nodes[i].right;
  return nodes[i].label;
}

std::size_t TreeModel::depth() const {
  if (nodes.empty()) return 0;
  std::vector<std::size_t> d(nodes.size(), 0);
  std::size_t best = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    best = std::max(best, d[i]);
    if (!nodes[i].is_leaf()) d[nodes[i].left] = d[nodes[i].right] = d[i] + 1;
  }
  return best;
}

}  // namespace histofeat
