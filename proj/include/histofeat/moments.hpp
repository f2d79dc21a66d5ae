#pragma once

#include <cstddef>
#include <vector>

#include "histofeat/feature.hpp"
#include "histofeat/image.hpp"

namespace histofeat {

enum class PolyFamily { Cheb1, Cheb2, Legendre };

/// B_0(x) .. B_order(x) by three-term recurrence.
///   Chebyshev T: T0 = 1, T1 = x,  T(n+1) = 2x T(n) - T(n-1)
///   Chebyshev U: U0 = 1, U1 = 2x, U(n+1) = 2x U(n) - U(n-1)
///   Legendre:    P0 = 1, P1 = x,  (n+1) P(n+1) = (2n+1) x P(n) - n P(n-1)
/// Throws a Domain error when |x| > 1.
std::vector<double> eval_poly_basis(PolyFamily family, std::size_t order, double x);

struct MomentConfig {
  PolyFamily family = PolyFamily::Cheb1;
  std::size_t order = 5;
};

/// Separable orthogonal-polynomial moments.
///
/// Pixel centres map to x_i = -1 + (2i+1)/W (columns) and y_j = -1 + (2j+1)/H
/// (rows, top to bottom); intensities are scaled to [0, 1]. Then
///   M_pq = 1/(W H) * sum_i sum_j B_p(x_i) B_q(y_j) f(i, j)
/// with an extra (2p+1)(2q+1)/4 factor for Legendre. No Chebyshev weight
/// function is applied. Output has (order+1)^2 entries, index p*(order+1)+q.
FeatureVector separable_moments(const GrayImage& image, const MomentConfig& config);

struct ZernikeConfig {
  int n_max = 5;
  /// false: emit only |Z(n_max, n_max)|.
  bool include_all_repetitions = true;
};

/// (n, m) pairs emitted for a config, in output order.
std::vector<std::pair<int, int>> zernike_pairs(const ZernikeConfig& config);

/// Zernike moment magnitudes on the disk inscribed in the image.
///
/// The disk is centred at (W/2, H/2) in pixel-edge coordinates with radius
/// min(W, H)/2; a pixel takes part when its centre has rho <= 1. Intensities
/// are scaled to [0, 1] and each pixel contributes area 1/radius^2:
///   Z_nm = (n+1)/pi * sum f * R_nm(rho) * exp(-i m phi) * dA
FeatureVector zernike_features(const GrayImage& image, const ZernikeConfig& config = {});

/// Radial polynomial coefficients: R_nm(rho) = sum_s c[s] * rho^(n-2s).
std::vector<double> zernike_radial_coefficients(int n, int m);

}  // namespace histofeat
