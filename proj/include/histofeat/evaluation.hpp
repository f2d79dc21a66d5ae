#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "histofeat/classifiers.hpp"
#include "histofeat/ingestion.hpp"
#include "histofeat/matrix.hpp"

namespace histofeat {

struct ConfusionMatrix {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;

  std::uint64_t total() const noexcept { return tp + fp + fn + tn; }
  ConfusionMatrix& operator+=(const ConfusionMatrix& other) noexcept;
  bool operator==(const ConfusionMatrix&) const = default;
};

ConfusionMatrix confusion(std::span<const Label> y_true, std::span<const Label> y_pred,
                          Label positive = Label::Normal);

struct MetricsReport {
  double a = 0, p = 0, r = 0, s = 0, f1 = 0, mcc = 0, bacc = 0;
};

/// Accuracy, precision, recall, specificity, F1, MCC and balanced accuracy.
/// Any ratio with a zero denominator is 0 (MCC when any of its four factors
/// is 0). Throws Shape on an empty matrix.
MetricsReport compute_metrics(const ConfusionMatrix& cm);

struct CvResult {
  std::string descriptor;
  ClassifierKind classifier = ClassifierKind::RF;
  std::uint64_t seed = 0;
  Label positive = Label::Normal;
  std::vector<ConfusionMatrix> folds;
  ConfusionMatrix pooled;
  MetricsReport metrics;  // from the pooled counts
  /// Out-of-fold prediction per sample, in input order.
  std::vector<Label> predictions;
  /// Folds whose SVM stopped at max_passes before meeting tol.
  std::size_t nonconverged_folds = 0;
};

struct CvOptions {
  Label positive = Label::Normal;
  /// Folds evaluated concurrently (0 = default).
  std::size_t threads = 0;
};

/// Trains on every fold but one, predicts the held-out fold, pools the
/// counts. kNN and SVM get a scaler fitted on the training split only.
/// Throws Training when a training split holds a single class.
CvResult cross_validate(const Matrix& features, std::span<const Label> labels,
                        const ClassifierSpec& spec, const FoldPlan& plan,
                        const CvOptions& options = {});

/// Percent with two decimals ("79.57", "-3.61"); never "-0.00".
std::string format_percent(double fraction);

/// Markdown: one table per classifier (DT, kNN, SVM, RF order) with columns
/// Desc | A | P | R | S | F1 | MCC | BACC, rows sorted by descriptor.
std::string render_markdown(const std::vector<CvResult>& results);

/// CSV with header classifier,descriptor,a,p,r,s,f1,mcc,bacc,seed and raw
/// fractions (%.9g), ordered like the markdown.
std::string render_csv(const std::vector<CvResult>& results);

/// Parses render_csv output back into results (metrics only, no folds).
std::vector<CvResult> parse_report_csv(const std::string& text);

}  // namespace histofeat
