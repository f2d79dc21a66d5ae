#include "histofeat/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "histofeat/error.hpp"
#include "histofeat/parallel.hpp"

namespace histofeat {

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& o) noexcept {
  tp += o.tp;
  fp += o.fp;
  fn += o.fn;
  tn += o.tn;
  return *this;
}

ConfusionMatrix confusion(std::span<const Label> y_true, std::span<const Label> y_pred, Label positive) {
  if (y_true.size() != y_pred.size())
    throw Error(ErrorKind::Shape, std::to_string(y_true.size()) + " true labels vs " + std::to_string(y_pred.size()) +
                                      " predictions");
  if (y_true.empty()) throw Error(ErrorKind::Shape, "no samples to tally");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const bool actual = y_true[i] == positive;
    const bool predicted = y_pred[i] == positive;
    if (actual && predicted) ++cm.tp;
    else if (!actual && predicted) ++cm.fp;
    else if (actual) ++cm.fn;
    else ++cm.tn;
  }
  return cm;
}

MetricsReport compute_metrics(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw Error(ErrorKind::Shape, "empty confusion matrix");
  const double tp = static_cast<double>(cm.tp);
  const double fp = static_cast<double>(cm.fp);
  const double fn = static_cast<double>(cm.fn);
  const double tn = static_cast<double>(cm.tn);
  auto ratio = [](double num, double den) { return den > 0.0 ? num / den : 0.0; };

  MetricsReport m;
  m.a = (tp + tn) / (tp + fn + fp + tn);
  m.p = ratio(tp, tp + fp);
  m.r = ratio(tp, tp + fn);
  m.s = ratio(tn, tn + fp);
  m.f1 = ratio(2.0 * m.p * m.r, m.p + m.r);
  const double den = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
  m.mcc = den > 0.0 ? (tp * tn - fp * fn) / std::sqrt(den) : 0.0;
  m.bacc = (m.r + m.s) / 2.0;
  return m;
}

CvResult cross_validate(const Matrix& features, std::span<const Label> labels, const ClassifierSpec& spec,
                        const FoldPlan& plan, const CvOptions& options) {
  if (features.rows() != labels.size() || plan.assignment.size() != labels.size())
    throw Error(ErrorKind::Shape, "features (" + std::to_string(features.rows()) + "), labels (" +
                                      std::to_string(labels.size()) + ") and fold plan (" +
                                      std::to_string(plan.assignment.size()) + ") are not aligned");
  spec.validate();

  CvResult result;
  result.classifier = spec.kind;
  result.seed = spec.seed;
  result.positive = options.positive;
  result.folds.resize(plan.k);
  result.predictions.assign(labels.size(), Label::Normal);
  std::vector<char> nonconverged(plan.k, 0);

  parallel_for(
      plan.k,
      [&](std::size_t fold) {
        const auto train_idx = plan.train_indices(fold);
        const auto test_idx = plan.test_indices(fold);
        std::vector<Label> y_train, y_test;
        for (auto i : train_idx) y_train.push_back(labels[i]);
        for (auto i : test_idx) y_test.push_back(labels[i]);
        const bool has_normal = std::find(y_train.begin(), y_train.end(), Label::Normal) != y_train.end();
        const bool has_abnormal = std::find(y_train.begin(), y_train.end(), Label::Abnormal) != y_train.end();
        if (!has_normal || !has_abnormal)
          throw Error(ErrorKind::Training, "training split of fold " + std::to_string(fold) + " holds a single class");
        if (test_idx.empty()) throw Error(ErrorKind::Training, "fold " + std::to_string(fold) + " is empty");

        const Pipeline model = fit(features.select_rows(train_idx), y_train, spec);
        if (const auto* svm = std::get_if<SvmModel>(&model.model); svm && !svm->converged) nonconverged[fold] = 1;
        const auto pred = model.predict(features.select_rows(test_idx), 1);
        for (std::size_t t = 0; t < test_idx.size(); ++t) result.predictions[test_idx[t]] = pred[t];
        result.folds[fold] = confusion(y_test, pred, options.positive);
      },
      options.threads);

  for (const auto& cm : result.folds) result.pooled += cm;
  result.metrics = compute_metrics(result.pooled);
  result.nonconverged_folds = static_cast<std::size_t>(std::count(nonconverged.begin(), nonconverged.end(), 1));
  return result;
}

// -- rendering ------------------------------------------------------------------------

namespace {

std::string fmt_g9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

const char* display_name(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::DT: return "DT";
    case ClassifierKind::KNN: return "kNN";
    case ClassifierKind::SVM: return "SVM";
    case ClassifierKind::RF: return "RF";
  }
  return "?";
}

std::vector<const CvResult*> ordered(const std::vector<CvResult>& results) {
  std::vector<const CvResult*> out;
  for (const auto& r : results) out.push_back(&r);
  std::stable_sort(out.begin(), out.end(), [](const CvResult* a, const CvResult* b) {
    if (a->classifier != b->classifier) return a->classifier < b->classifier;
    return a->descriptor < b->descriptor;
  });
  return out;
}

}  // namespace

std::string format_percent(double fraction) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", fraction * 100.0);
  std::string s = buf;
  if (s == "-0.00") s = "0.00";
  return s;
}

std::string render_markdown(const std::vector<CvResult>& results) {
  if (results.empty()) return "No results.\n";
  std::ostringstream os;
  const auto rows = ordered(results);
  const CvResult& first = *rows.front();
  os << "# Cross-validation report\n\n"
     << "Metrics are computed from confusion counts pooled over all"
     << (first.folds.empty() ? std::string() : " " + std::to_string(first.folds.size())) << " folds (seed " << first.seed << ", positive class: " << to_string(first.positive) << "). "
     << "Values are percentages.\n";

  bool any_nonconverged = false;
  for (std::size_t i = 0; i < rows.size();) {
    const ClassifierKind kind = rows[i]->classifier;
    os << "\n## " << display_name(kind) << "\n\n"
       << "| Desc | A | P | R | S | F1 | MCC | BACC |\n"
       << "|---|---|---|---|---|---|---|---|\n";
    for (; i < rows.size() && rows[i]->classifier == kind; ++i) {
      const auto& r = *rows[i];
      const auto& m = r.metrics;
      os << "| " << r.descriptor << (r.nonconverged_folds ? "*" : "") << " | " << format_percent(m.a) << " | "
         << format_percent(m.p) << " | " << format_percent(m.r) << " | " << format_percent(m.s) << " | "
         << format_percent(m.f1) << " | " << format_percent(m.mcc) << " | " << format_percent(m.bacc) << " |\n";
      any_nonconverged = any_nonconverged || r.nonconverged_folds > 0;
    }
  }
  if (any_nonconverged) os << "\n\\* SMO stopped at its iteration cap before reaching tolerance in at least one fold.\n";
  return os.str();
}

std::string render_csv(const std::vector<CvResult>& results) {
  std::ostringstream os;
  os << "classifier,descriptor,a,p,r,s,f1,mcc,bacc,seed\n";
  for (const CvResult* r : ordered(results)) {
    const auto& m = r->metrics;
    os << to_string(r->classifier) << ',' << r->descriptor << ',' << fmt_g9(m.a) << ',' << fmt_g9(m.p) << ','
       << fmt_g9(m.r) << ',' << fmt_g9(m.s) << ',' << fmt_g9(m.f1) << ',' << fmt_g9(m.mcc) << ','
       << fmt_g9(m.bacc) << ',' << r->seed << '\n';
  }
  return os.str();
}

std::vector<CvResult> parse_report_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(in, line) || line != "classifier,descriptor,a,p,r,s,f1,mcc,bacc,seed")
    throw Error(ErrorKind::Format, "line 1: unexpected report header");

  std::vector<CvResult> out;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (cells.size() != 10) throw Error(ErrorKind::Format, "line " + std::to_string(lineno) + ": expected 10 columns");
    const auto kind = parse_classifier(cells[0]);
    if (!kind) throw Error(ErrorKind::Format, "line " + std::to_string(lineno) + ": unknown classifier " + cells[0]);
    CvResult r;
    r.classifier = *kind;
    r.descriptor = cells[1];
    try {
      double* fields[] = {&r.metrics.a, &r.metrics.p, &r.metrics.r, &r.metrics.s,
                          &r.metrics.f1, &r.metrics.mcc, &r.metrics.bacc};
      for (std::size_t k = 0; k < 7; ++k) *fields[k] = std::stod(cells[2 + k]);
      r.seed = std::stoull(cells[9]);
    } catch (const std::exception&) {
      throw Error(ErrorKind::Format, "line " + std::to_string(lineno) + ": malformed number");
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace histofeat
