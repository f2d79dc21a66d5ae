#include "histofeat/moments.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "histofeat/error.hpp"

namespace histofeat {

namespace {

const char* family_name(PolyFamily family) {
  switch (family) {
    case PolyFamily::Cheb1: return "ch1";
    case PolyFamily::Cheb2: return "ch2";
    case PolyFamily::Legendre: return "lm";
  }
  return "?";
}

void require_image(const GrayImage& image) {
  if (image.width == 0 || image.height == 0)
    throw Error(ErrorKind::DegenerateImage, "empty image");
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

std::vector<double> eval_poly_basis(PolyFamily family, std::size_t order, double x) {
  if (!(std::abs(x) <= 1.0))
    throw Error(ErrorKind::Domain, "polynomial argument " + std::to_string(x) + " outside [-1, 1]");

  std::vector<double> b(order + 1);
  b[0] = 1.0;
  if (order == 0) return b;
  b[1] = family == PolyFamily::Cheb2 ? 2.0 * x : x;
  for (std::size_t n = 1; n < order; ++n) {
    if (family == PolyFamily::Legendre) {
      const double nd = static_cast<double>(n);
      b[n + 1] = ((2.0 * nd + 1.0) * x * b[n] - nd * b[n - 1]) / (nd + 1.0);
    } else {
      b[n + 1] = 2.0 * x * b[n] - b[n - 1];
    }
  }
  return b;
}

FeatureVector separable_moments(const GrayImage& image, const MomentConfig& config) {
  require_image(image);
  const std::size_t w = image.width;
  const std::size_t h = image.height;
  const std::size_t n = config.order + 1;

  // basis tables, [degree][coordinate]
  std::vector<double> bx(n * w), by(n * h);
  for (std::size_t i = 0; i < w; ++i) {
    const double x = -1.0 + (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(w);
    const auto b = eval_poly_basis(config.family, config.order, x);
    for (std::size_t p = 0; p < n; ++p) bx[p * w + i] = b[p];
  }
  for (std::size_t j = 0; j < h; ++j) {
    const double y = -1.0 + (2.0 * static_cast<double>(j) + 1.0) / static_cast<double>(h);
    const auto b = eval_poly_basis(config.family, config.order, y);
    for (std::size_t q = 0; q < n; ++q) by[q * h + j] = b[q];
  }

  std::vector<double> m(n * n, 0.0);
  std::vector<double> f(w), row_proj(n);
  for (std::size_t j = 0; j < h; ++j) {
    const auto px = image.row(j);
    for (std::size_t i = 0; i < w; ++i) f[i] = px[i] / 255.0;
    for (std::size_t p = 0; p < n; ++p) {
      double acc = 0.0;
      const double* bp = &bx[p * w];
      for (std::size_t i = 0; i < w; ++i) acc += bp[i] * f[i];
      row_proj[p] = acc;
    }
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = 0; q < n; ++q) m[p * n + q] += by[q * h + j] * row_proj[p];
  }

  const double area = static_cast<double>(w) * static_cast<double>(h);
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) {
      double scale = 1.0 / area;
      if (config.family == PolyFamily::Legendre)
        scale *= (2.0 * static_cast<double>(p) + 1.0) * (2.0 * static_cast<double>(q) + 1.0) / 4.0;
      m[p * n + q] *= scale;
    }
  }
  return {family_name(config.family), std::move(m)};
}

std::vector<double> zernike_radial_coefficients(int n, int m) {
  if (n < 0 || m < 0 || m > n || (n - m) % 2 != 0)
    throw Error(ErrorKind::Config, "invalid Zernike index (" + std::to_string(n) + ", " +
                                       std::to_string(m) + ")");
  std::vector<double> c;
  for (int s = 0; s <= (n - m) / 2; ++s) {
    const double sign = (s % 2 == 0) ? 1.0 : -1.0;
    c.push_back(sign * factorial(n - s) /
                (factorial(s) * factorial((n + m) / 2 - s) * factorial((n - m) / 2 - s)));
  }
  return c;
}

std::vector<std::pair<int, int>> zernike_pairs(const ZernikeConfig& config) {
  if (config.n_max < 0) throw Error(ErrorKind::Config, "Zernike n_max must be non-negative");
  if (!config.include_all_repetitions) return {{config.n_max, config.n_max}};
  std::vector<std::pair<int, int>> pairs;
  for (int n = 0; n <= config.n_max; ++n)
    for (int m = n % 2; m <= n; m += 2) pairs.emplace_back(n, m);
  return pairs;
}

FeatureVector zernike_features(const GrayImage& image, const ZernikeConfig& config) {
  require_image(image);
  const auto pairs = zernike_pairs(config);

  // R_nm(rho) e^{-i m phi} = (x - i y)^m * sum_s c_s (rho^2)^((n-m)/2 - s),
  // a polynomial in x and y, so no trigonometry is needed per pixel.
  std::vector<std::vector<double>> coeffs;
  int max_m = 0;
  int max_k = 0;
  for (auto [n, m] : pairs) {
    coeffs.push_back(zernike_radial_coefficients(n, m));
    max_m = std::max(max_m, m);
    max_k = std::max(max_k, (n - m) / 2);
  }

  const double w = static_cast<double>(image.width);
  const double h = static_cast<double>(image.height);
  const double radius = std::min(w, h) / 2.0;

  std::vector<std::complex<double>> sums(pairs.size());
  std::vector<std::complex<double>> conj_pow(static_cast<std::size_t>(max_m) + 1);
  std::vector<double> r2_pow(static_cast<std::size_t>(max_k) + 1);

  for (std::size_t row = 0; row < image.height; ++row) {
    const double y = (h / 2.0 - (static_cast<double>(row) + 0.5)) / radius;
    for (std::size_t col = 0; col < image.width; ++col) {
      const double x = (static_cast<double>(col) + 0.5 - w / 2.0) / radius;
      const double r2 = x * x + y * y;
      if (r2 > 1.0) continue;
      const double f = image.at(col, row) / 255.0;
      if (f == 0.0) continue;

      const std::complex<double> z(x, -y);
      conj_pow[0] = 1.0;
      for (int m = 1; m <= max_m; ++m) conj_pow[m] = conj_pow[m - 1] * z;
      r2_pow[0] = 1.0;
      for (int k = 1; k <= max_k; ++k) r2_pow[k] = r2_pow[k - 1] * r2;

      for (std::size_t t = 0; t < pairs.size(); ++t) {
        const auto [n, m] = pairs[t];
        const int top = (n - m) / 2;
        double radial = 0.0;
        for (int s = 0; s <= top; ++s) radial += coeffs[t][s] * r2_pow[top - s];
        sums[t] += f * radial * conj_pow[m];
      }
    }
  }

  FeatureVector out{"zm", {}};
  out.values.reserve(pairs.size());
  const double area = 1.0 / (radius * radius);
  for (std::size_t t = 0; t < pairs.size(); ++t) {
    const double n = pairs[t].first;
    out.values.push_back(std::abs(sums[t]) * (n + 1.0) / std::numbers::pi * area);
  }
  return out;
}

}  // namespace histofeat
