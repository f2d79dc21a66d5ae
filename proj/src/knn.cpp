#include <algorithm>
#include <string>
#include <utility>

#include "histofeat/classifiers.hpp"
#include "histofeat/error.hpp"

namespace histofeat {

namespace {

Label vote(const Matrix& train_x, std::span<const Label> train_y, std::span<const double> q, std::size_t k,
           std::vector<std::pair<double, std::size_t>>& scratch) {
  const std::size_t n = train_x.rows();
  scratch.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = train_x.row(i);
    double d2 = 0.0;
    for (std::size_t c = 0; c < row.size(); ++c) {
      const double d = row[c] - q[c];
      d2 += d * d;
    }
    scratch[i] = {d2, i};
  }
  // (distance, index) ordering breaks distance ties by lower training row
  std::nth_element(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(k - 1), scratch.end());
  std::size_t abnormal = 0;
  for (std::size_t i = 0; i < k; ++i) abnormal += train_y[scratch[i].second] == Label::Abnormal;
  return 2 * abnormal > k ? Label::Abnormal : Label::Normal;
}

void check_k(std::size_t k, std::size_t n) {
  if (k < 1) throw Error(ErrorKind::Config, "k must be at least 1");
  if (k > n) throw Error(ErrorKind::Config, "k = " + std::to_string(k) + " exceeds " + std::to_string(n) + " training rows");
}

}  // namespace

std::vector<Label> knn_predict(const Matrix& train_x, std::span<const Label> train_y, const Matrix& queries,
                               std::size_t k) {
  check_k(k, train_x.rows());
  if (train_x.rows() != train_y.size()) throw Error(ErrorKind::Shape, "kNN rows and labels differ in length");
  if (queries.cols() != train_x.cols())
    throw Error(ErrorKind::Shape, "query width " + std::to_string(queries.cols()) + " differs from training width " +
                                      std::to_string(train_x.cols()));
  std::vector<Label> out(queries.rows());
  std::vector<std::pair<double, std::size_t>> scratch;
  for (std::size_t q = 0; q < queries.rows(); ++q) out[q] = vote(train_x, train_y, queries.row(q), k, scratch);
  return out;
}

Label KnnModel::predict_row(std::span<const double> q) const {
  check_k(k, x.rows());
  std::vector<std::pair<double, std::size_t>> scratch;
  return vote(x, y, q, k, scratch);
}

}  // namespace histofeat
