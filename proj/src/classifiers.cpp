#include "histofeat/classifiers.hpp"

#include <string>

#include "histofeat/error.hpp"
#include "histofeat/parallel.hpp"

namespace histofeat {

std::string_view to_string(ClassifierKind kind) noexcept {
  switch (kind) {
    case ClassifierKind::DT: return "dt";
    case ClassifierKind::KNN: return "knn";
    case ClassifierKind::SVM: return "svm";
    case ClassifierKind::RF: return "rf";
  }
  return "?";
}

std::optional<ClassifierKind> parse_classifier(std::string_view text) noexcept {
  for (auto k : {ClassifierKind::DT, ClassifierKind::KNN, ClassifierKind::SVM, ClassifierKind::RF})
    if (to_string(k) == text) return k;
  return std::nullopt;
}

void ClassifierSpec::validate() const {
  if (trees < 1) throw Error(ErrorKind::Config, "trees must be at least 1");
  if (k < 1 || k % 2 == 0) throw Error(ErrorKind::Config, "k must be odd and at least 1, got " + std::to_string(k));
  if (!(c > 0.0)) throw Error(ErrorKind::Config, "C must be positive");
  if (gamma && !(*gamma > 0.0)) throw Error(ErrorKind::Config, "gamma must be positive");
  if (!(tol > 0.0)) throw Error(ErrorKind::Config, "tol must be positive");
  if (min_leaf < 1) throw Error(ErrorKind::Config, "min_leaf must be at least 1");
}

std::size_t model_width(const Model& model) {
  struct {
    std::size_t operator()(const TreeModel& m) const { return m.n_features; }
    std::size_t operator()(const ForestModel& m) const { return m.trees.empty() ? 0 : m.trees.front().n_features; }
    std::size_t operator()(const KnnModel& m) const { return m.x.cols(); }
    std::size_t operator()(const SvmModel& m) const { return m.support_vectors.cols(); }
  } visitor;
  return std::visit(visitor, model);
}

ClassifierKind model_kind(const Model& model) {
  constexpr ClassifierKind kinds[] = {ClassifierKind::DT, ClassifierKind::RF, ClassifierKind::KNN, ClassifierKind::SVM};
  return kinds[model.index()];
}

std::vector<Label> predict(const Model& model, const Matrix& x, std::size_t threads) {
  const std::size_t width = model_width(model);
  if (x.cols() != width)
    throw Error(ErrorKind::Shape, "model expects " + std::to_string(width) + " features, got " + std::to_string(x.cols()));
  std::vector<Label> out(x.rows());
  std::visit(
      [&](const auto& m) { parallel_for(x.rows(), [&](std::size_t r) { out[r] = m.predict_row(x.row(r)); }, threads); },
      model);
  return out;
}

std::vector<Label> Pipeline::predict(const Matrix& x, std::size_t threads) const {
  if (scaler) return histofeat::predict(model, scaler->transform(x), threads);
  return histofeat::predict(model, x, threads);
}

Pipeline fit(const Matrix& x, std::span<const Label> y, const ClassifierSpec& spec) {
  spec.validate();
  if (x.rows() != y.size())
    throw Error(ErrorKind::Shape, std::to_string(x.rows()) + " rows but " + std::to_string(y.size()) + " labels");
  if (x.empty()) throw Error(ErrorKind::Training, "empty training set");

  Pipeline p;
  const Matrix* train = &x;
  Matrix scaled;
  if (needs_standardization(spec.kind)) {
    p.scaler = fit_scaler(x);
    scaled = p.scaler->transform(x);
    train = &scaled;
  }

  switch (spec.kind) {
    case ClassifierKind::DT: {
      SplitMix64 rng(spec.seed);
      p.model = train_tree(*train, y, spec, std::nullopt, rng);
      break;
    }
    case ClassifierKind::RF: p.model = train_forest(*train, y, spec); break;
    case ClassifierKind::KNN: {
      if (spec.k > train->rows())
        throw Error(ErrorKind::Config, "k = " + std::to_string(spec.k) + " exceeds " + std::to_string(train->rows()) +
                                          " training rows");
      p.model = KnnModel{*train, std::vector<Label>(y.begin(), y.end()), spec.k};
      break;
    }
    case ClassifierKind::SVM: {
      SmoOptions opt;
      opt.c = spec.c;
      opt.gamma = spec.gamma.value_or(default_gamma(*train));
      opt.tol = spec.tol;
      opt.max_passes = spec.max_passes;
      p.model = train_svm_smo(*train, y, opt);
      break;
    }
  }
  return p;
}

}  // namespace histofeat
