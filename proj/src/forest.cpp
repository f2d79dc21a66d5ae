#include <cmath>
#include <numeric>

#include "histofeat/classifiers.hpp"
#include "histofeat/error.hpp"
#include "histofeat/parallel.hpp"

namespace histofeat {

std::uint64_t forest_tree_seed(std::uint64_t master, std::size_t tree) noexcept {
  return derive_seed(master, tree);
}

ForestModel train_forest(const Matrix& x, std::span<const Label> y, const ClassifierSpec& spec,
                         const ForestOptions& options) {
  if (spec.trees < 1) throw Error(ErrorKind::Config, "a forest needs at least one tree");
  if (x.rows() == 0 || x.rows() != y.size()) throw Error(ErrorKind::Training, "forest training input is empty or ragged");

  const std::size_t n = x.rows();
  const std::size_t m = options.max_features.value_or(
      std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(x.cols()))))));

  ForestModel forest;
  forest.trees.resize(spec.trees);
  forest.tree_seeds.resize(spec.trees);
  for (std::size_t t = 0; t < spec.trees; ++t) forest.tree_seeds[t] = forest_tree_seed(spec.seed, t);

  parallel_for(
      spec.trees,
      [&](std::size_t t) {
        SplitMix64 rng(forest.tree_seeds[t]);
        std::vector<std::size_t> rows(n);
        if (options.bootstrap) {
          for (auto& r : rows) r = rng.bounded(n);
        } else {
          std::iota(rows.begin(), rows.end(), 0);
        }
        forest.trees[t] = train_tree(x, y, rows, spec, m, rng);
      },
      spec.threads);
  return forest;
}

Label ForestModel::predict_row(std::span<const double> x) const {
  std::size_t abnormal = 0;
  for (const auto& tree : trees) abnormal += tree.predict_row(x) == Label::Abnormal;
  return 2 * abnormal > trees.size() ? Label::Abnormal : Label::Normal;
}

}  // namespace histofeat
