#pragma once

#include <cmath>
#include <string>
#include <vector>

namespace histofeat {

/// Named descriptor output for one image.
struct FeatureVector {
  std::string descriptor;
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }
  bool all_finite() const noexcept {
    for (double v : values)
      if (!std::isfinite(v)) return false;
    return true;
  }
};

}  // namespace histofeat
