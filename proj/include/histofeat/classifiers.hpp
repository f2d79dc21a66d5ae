#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "histofeat/ingestion.hpp"
#include "histofeat/matrix.hpp"
#include "histofeat/rng.hpp"

namespace histofeat {

enum class ClassifierKind : std::uint8_t { DT = 0, KNN = 1, SVM = 2, RF = 3 };

/// "dt", "knn", "svm", "rf".
std::string_view to_string(ClassifierKind kind) noexcept;
std::optional<ClassifierKind> parse_classifier(std::string_view text) noexcept;

struct ClassifierSpec {
  ClassifierKind kind = ClassifierKind::RF;
  std::size_t trees = 100;
  std::size_t k = 3;
  double c = 1.0;
  /// Unset: 1 / (F * var(X)) over the (standardized) training matrix.
  std::optional<double> gamma;
  double tol = 1e-3;
  /// Unset: 10 * n SMO iterations.
  std::optional<std::size_t> max_passes;
  std::optional<std::size_t> max_depth;
  std::size_t min_leaf = 1;
  std::uint64_t seed = 0;
  /// Training threads for RF (0 = default). Never changes the result.
  std::size_t threads = 0;

  /// Throws Config when an invariant is broken.
  void validate() const;
};

// -- standardization ---------------------------------------------------------

struct Scaler {
  std::vector<double> mean;
  std::vector<double> stddev;  // population; zero-variance columns hold 1

  Matrix transform(const Matrix& x) const;
};

Scaler fit_scaler(const Matrix& train);

struct Standardized {
  Matrix train;
  Matrix test;
  Scaler scaler;
};

Standardized standardize(const Matrix& train, const Matrix& test);

// -- decision tree -------------------------------------------------------------

struct TreeNode {
  // Internal when left != kLeaf: rows with x[feature] <= threshold go left.
  static constexpr std::uint32_t kLeaf = 0xFFFFFFFFu;
  std::uint32_t feature = 0;
  double threshold = 0.0;
  std::uint32_t left = kLeaf;
  std::uint32_t right = kLeaf;
  Label label = Label::Normal;
  std::array<std::uint32_t, kNumClasses> counts{};

  bool is_leaf() const noexcept { return left == kLeaf; }
  bool operator==(const TreeNode&) const = default;
};

struct TreeModel {
  std::size_t n_features = 0;
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  Label predict_row(std::span<const double> x) const;
  std::size_t depth() const;
  bool operator==(const TreeModel&) const = default;
};

/// Greedy CART with Gini impurity.
///
/// Every node evaluates its candidate features in ascending index order
/// (all features, or `feature_subset_size` drawn without replacement from
/// `rng`) and thresholds at midpoints between consecutive distinct values.
/// The lowest weighted child impurity wins; ties keep the earlier feature and
/// the lower threshold. Growth stops on a pure node, at max_depth, when
/// min_leaf cannot be honoured on both sides, or when no candidate feature
/// varies. Splits that leave impurity unchanged are still taken.
/// Leaves predict the majority class, ties going to Normal.
TreeModel train_tree(const Matrix& x, std::span<const Label> y, const ClassifierSpec& spec,
                     std::optional<std::size_t> feature_subset_size, SplitMix64& rng);

/// Same as above over a multiset of row indices (used for bootstrap samples).
TreeModel train_tree(const Matrix& x, std::span<const Label> y, std::span<const std::size_t> rows,
                     const ClassifierSpec& spec, std::optional<std::size_t> feature_subset_size,
                     SplitMix64& rng);

// -- random forest ---------------------------------------------------------------

struct ForestModel {
  std::vector<TreeModel> trees;
  std::vector<std::uint64_t> tree_seeds;

  Label predict_row(std::span<const double> x) const;
  bool operator==(const ForestModel&) const = default;
};

struct ForestOptions {
  bool bootstrap = true;
  /// Unset: floor(sqrt(F)), at least 1.
  std::optional<std::size_t> max_features;
};

/// Tree t uses SplitMix64(derive_seed(spec.seed, t)) for its bootstrap draws
/// followed by its per-node feature subsets.
std::uint64_t forest_tree_seed(std::uint64_t master, std::size_t tree) noexcept;

ForestModel train_forest(const Matrix& x, std::span<const Label> y, const ClassifierSpec& spec,
                         const ForestOptions& options = {});

// -- kNN -------------------------------------------------------------------------

struct KnnModel {
  Matrix x;
  std::vector<Label> y;
  std::size_t k = 3;

  Label predict_row(std::span<const double> q) const;
  bool operator==(const KnnModel&) const = default;
};

/// Euclidean kNN; equal distances prefer the lower training row and vote
/// ties go to Normal.
std::vector<Label> knn_predict(const Matrix& train_x, std::span<const Label> train_y,
                               const Matrix& queries, std::size_t k);

// -- SVM -------------------------------------------------------------------------

/// Abnormal maps to +1 and Normal to -1.
inline int svm_sign(Label label) noexcept { return label == Label::Abnormal ? 1 : -1; }

struct SvmModel {
  Matrix support_vectors;
  std::vector<double> coef;  // alpha_i * y_i for each support vector
  double bias = 0.0;
  double gamma = 1.0;
  bool converged = true;
  std::size_t iterations = 0;

  double decision(std::span<const double> q) const;
  /// f > 0 -> Abnormal, otherwise Normal.
  Label predict_row(std::span<const double> q) const;
  bool operator==(const SvmModel&) const = default;
};

/// Full dual solution, kept for audits and tests.
struct SvmDualSolution {
  std::vector<double> alpha;  // one per training row, in [0, C]
  std::vector<int> y;         // +1 / -1
  double bias = 0.0;
  bool converged = true;
  std::size_t iterations = 0;
};

struct SmoOptions {
  double c = 1.0;
  double gamma = 1.0;
  double tol = 1e-3;
  std::optional<std::size_t> max_passes;  // unset: 10 * n
  /// Kernel row cache budget.
  std::size_t cache_bytes = std::size_t{512} << 20;
};

/// Soft-margin RBF SVM dual, K(x, z) = exp(-gamma |x - z|^2), solved by SMO
/// with second-order working-set selection. Stops when the maximal KKT
/// violation gap falls below tol, or after max_passes pair updates (then
/// `converged` is false and the last iterate is returned).
SvmDualSolution solve_svm_dual(const Matrix& x, std::span<const int> y, const SmoOptions& options);

SvmModel train_svm_smo(const Matrix& x, std::span<const Label> y, const SmoOptions& options);

double rbf_kernel(std::span<const double> a, std::span<const double> b, double gamma) noexcept;

/// 0.5 a'Qa - sum(a) is minimised; this returns the maximised form
/// sum(a) - 0.5 a'Qa with Q_ij = y_i y_j K_ij.
double svm_dual_objective(const Matrix& x, std::span<const int> y, std::span<const double> alpha,
                          double gamma);

/// Largest KKT violation of a dual solution, using f(x_i) = sum a_j y_j K_ij + b.
double svm_kkt_violation(const Matrix& x, const SvmDualSolution& solution, double c, double gamma);

/// 1 / (F * var(all entries)); 1 / F when the matrix is constant.
double default_gamma(const Matrix& x);

// -- facade ------------------------------------------------------------------------

using Model = std::variant<TreeModel, ForestModel, KnnModel, SvmModel>;

std::size_t model_width(const Model& model);
ClassifierKind model_kind(const Model& model);

/// Throws Shape when the column count differs from the model's.
std::vector<Label> predict(const Model& model, const Matrix& x, std::size_t threads = 0);

/// Whether the classifier is fed standardized features.
constexpr bool needs_standardization(ClassifierKind kind) noexcept {
  return kind == ClassifierKind::KNN || kind == ClassifierKind::SVM;
}

/// A trained model plus the scaler fitted on its training rows, if any.
struct Pipeline {
  std::optional<Scaler> scaler;
  Model model;

  std::vector<Label> predict(const Matrix& x, std::size_t threads = 0) const;
};

Pipeline fit(const Matrix& x, std::span<const Label> y, const ClassifierSpec& spec);

}  // namespace histofeat
