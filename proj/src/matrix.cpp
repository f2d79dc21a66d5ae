#include "histofeat/matrix.hpp"

#include <algorithm>
#include <string>

#include "histofeat/error.hpp"

namespace histofeat {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_)
    throw Error(ErrorKind::Shape, "matrix data holds " + std::to_string(data_.size()) +
                                      " values, expected " + std::to_string(rows_ * cols_));
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return {};
  const std::size_t cols = rows.front().size();
  std::vector<double> data;
  data.reserve(rows.size() * cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols)
      throw Error(ErrorKind::Shape, "row " + std::to_string(r) + " has " +
                                        std::to_string(rows[r].size()) + " columns, expected " +
                                        std::to_string(cols));
    data.insert(data.end(), rows[r].begin(), rows[r].end());
  }
  return Matrix(rows.size(), cols, std::move(data));
}

Matrix Matrix::select_rows(std::span<const std::size_t> indices) const {
  Matrix out(indices.size(), cols_);
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const auto src = row(indices[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

}  // namespace histofeat
