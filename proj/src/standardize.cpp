#include <cmath>
#include <string>

#include "histofeat/classifiers.hpp"
#include "histofeat/error.hpp"

namespace histofeat {

Scaler fit_scaler(const Matrix& train) {
  if (train.empty()) throw Error(ErrorKind::Shape, "cannot fit a scaler on an empty matrix");
  const std::size_t n = train.rows();
  const std::size_t f = train.cols();
  Scaler s{std::vector<double>(f, 0.0), std::vector<double>(f, 0.0)};
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < f; ++c) s.mean[c] += train(r, c);
  for (auto& m : s.mean) m /= static_cast<double>(n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < f; ++c) {
      const double d = train(r, c) - s.mean[c];
      s.stddev[c] += d * d;
    }
  }
  for (auto& v : s.stddev) {
    v = std::sqrt(v / static_cast<double>(n));
    if (!(v > 0.0)) v = 1.0;
  }
  return s;
}

Matrix Scaler::transform(const Matrix& x) const {
  if (x.cols() != mean.size())
    throw Error(ErrorKind::Shape, "scaler fitted on " + std::to_string(mean.size()) +
                                      " columns applied to " + std::to_string(x.cols()));
  Matrix out(x.rows(), x.cols());
  for (std::size_t r = 0; r < x.rows(); ++r)
    for (std::size_t c = 0; c < x.cols(); ++c) out(r, c) = (x(r, c) - mean[c]) / stddev[c];
  return out;
}

Standardized standardize(const Matrix& train, const Matrix& test) {
  if (!test.empty() && train.cols() != test.cols())
    throw Error(ErrorKind::Shape, "train has " + std::to_string(train.cols()) + " columns, test has " +
                                      std::to_string(test.cols()));
  Scaler scaler = fit_scaler(train);
  Matrix tr = scaler.transform(train);
  Matrix te = test.empty() ? Matrix(0, train.cols()) : scaler.transform(test);
  return {std::move(tr), std::move(te), std::move(scaler)};
}

}  // namespace histofeat
