#include <gtest/gtest.h>

#include <cmath>

#include "../support/oracles.hpp"
#include "../support/synth.hpp"
#include "histofeat/error.hpp"
#include "histofeat/moments.hpp"

using namespace histofeat;

TEST(PolyBasis, Examples) {
  const auto t = eval_poly_basis(PolyFamily::Cheb1, 3, 0.5);
  const std::vector<double> te{1, 0.5, -0.5, -1};
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(t[i], te[i], 1e-15);
  const auto p = eval_poly_basis(PolyFamily::Legendre, 2, 0.0);
  EXPECT_DOUBLE_EQ(p[0], 1);
  EXPECT_DOUBLE_EQ(p[1], 0);
  EXPECT_DOUBLE_EQ(p[2], -0.5);
  const auto u = eval_poly_basis(PolyFamily::Cheb2, 1, 0.25);
  EXPECT_DOUBLE_EQ(u[0], 1);
  EXPECT_DOUBLE_EQ(u[1], 0.5);
}

TEST(PolyBasis, DomainError) {
  try {
    eval_poly_basis(PolyFamily::Cheb1, 2, 1.0000001);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Domain);
  }
  EXPECT_NO_THROW(eval_poly_basis(PolyFamily::Cheb1, 2, -1.0));
}

TEST(PolyBasis, MatchesClosedFormsOnGrid) {
  for (auto fam : {PolyFamily::Cheb1, PolyFamily::Cheb2, PolyFamily::Legendre}) {
    for (int i = 0; i <= 1000; ++i) {
      const double x = -1.0 + 2.0 * i / 1000.0;
      const auto v = eval_poly_basis(fam, 6, x);
      ASSERT_EQ(v.size(), 7u);
      for (int n = 0; n <= 6; ++n) ASSERT_NEAR(v[n], oracle::poly(fam, n, x), 1e-10) << n << " " << x;
    }
  }
}

TEST(SeparableMoments, ConstantImages) {
  const GrayImage ones(160, 160, std::uint8_t{255});
  const auto lm = separable_moments(ones, {PolyFamily::Legendre, 5});
  ASSERT_EQ(lm.values.size(), 36u);
  EXPECT_EQ(lm.descriptor, "lm");
  EXPECT_NEAR(lm.values[0], 0.25, 1e-6);
  for (std::size_t i = 1; i < 36; ++i) EXPECT_NEAR(lm.values[i], 0.0, 1e-3) << i;

  const GrayImage zeros(32, 20, std::uint8_t{0});
  for (auto fam : {PolyFamily::Cheb1, PolyFamily::Cheb2, PolyFamily::Legendre})
    for (double v : separable_moments(zeros, {fam, 5}).values) EXPECT_EQ(v, 0.0);
}

TEST(SeparableMoments, MatchDoubleSumOracle) {
  SplitMix64 rng(11);
  for (auto fam : {PolyFamily::Cheb1, PolyFamily::Cheb2, PolyFamily::Legendre}) {
    for (int trial = 0; trial < 5; ++trial) {
      const std::size_t w = 5 + rng.bounded(10), h = 5 + rng.bounded(10);
      const GrayImage img = synth::random_image(w, h, rng);
      const auto got = separable_moments(img, {fam, 5}).values;
      const auto want = oracle::separable_moments(img, fam, 5);
      ASSERT_EQ(got.size(), want.size());
      for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], want[i], 1e-12);
    }
  }
}

TEST(SeparableMoments, Linearity) {
  SplitMix64 rng(5);
  GrayImage f(24, 18, std::uint8_t{0}), g(24, 18, std::uint8_t{0}), combo(24, 18, std::uint8_t{0});
  for (std::size_t i = 0; i < f.data.size(); ++i) {
    f.data[i] = static_cast<std::uint8_t>(rng.bounded(51));
    g.data[i] = static_cast<std::uint8_t>(rng.bounded(51));
    combo.data[i] = static_cast<std::uint8_t>(2 * f.data[i] + 3 * g.data[i]);
  }
  for (auto fam : {PolyFamily::Cheb1, PolyFamily::Cheb2, PolyFamily::Legendre}) {
    const auto mf = separable_moments(f, {fam, 5}).values;
    const auto mg = separable_moments(g, {fam, 5}).values;
    const auto mc = separable_moments(combo, {fam, 5}).values;
    for (std::size_t i = 0; i < mc.size(); ++i) EXPECT_NEAR(mc[i], 2 * mf[i] + 3 * mg[i], 1e-9);
  }
}

TEST(SeparableMoments, OrderControlsLength) {
  const GrayImage img(8, 8, std::uint8_t{3});
  EXPECT_EQ(separable_moments(img, {PolyFamily::Cheb2, 0}).values.size(), 1u);
  EXPECT_EQ(separable_moments(img, {PolyFamily::Cheb2, 3}).values.size(), 16u);
}

TEST(Zernike, PairsAndLength) {
  const auto pairs = zernike_pairs({});
  ASSERT_EQ(pairs.size(), 12u);
  for (auto [n, m] : pairs) {
    EXPECT_LE(m, n);
    EXPECT_EQ((n - m) % 2, 0);
  }
  EXPECT_EQ(pairs.front(), std::make_pair(0, 0));
  EXPECT_EQ(pairs.back(), std::make_pair(5, 5));
  const auto single = zernike_pairs({5, false});
  ASSERT_EQ(single.size(), 1u);
  EXPECT_EQ(single[0], std::make_pair(5, 5));
  const GrayImage img(16, 16, std::uint8_t{100});
  EXPECT_EQ(zernike_features(img).values.size(), 12u);
  EXPECT_EQ(zernike_features(img, {5, false}).values.size(), 1u);
}

TEST(Zernike, RadialCoefficientsMatchFactorialFormula) {
  // R_42 = 4 rho^4 - 3 rho^2; R_51 = 10 rho^5 - 12 rho^3 + 3 rho
  EXPECT_EQ(zernike_radial_coefficients(4, 2), (std::vector<double>{4, -3}));
  EXPECT_EQ(zernike_radial_coefficients(5, 1), (std::vector<double>{10, -12, 3}));
  EXPECT_EQ(zernike_radial_coefficients(0, 0), (std::vector<double>{1}));
}

TEST(Zernike, MatchesPerPixelOracle) {
  SplitMix64 rng(21);
  for (auto [w, h] : {std::pair{32, 32}, std::pair{33, 27}, std::pair{20, 31}}) {
    const GrayImage img = synth::random_image(w, h, rng);
    const auto got = zernike_features(img).values;
    const auto want = oracle::zernike_magnitudes(img, 5);
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], want[i], 1e-9) << i;
  }
}

TEST(Zernike, RotationInvariance) {
  SplitMix64 rng(4);
  for (int trial = 0; trial < 5; ++trial) {
    const GrayImage img = synth::random_image(32, 32, rng);
    const auto base = zernike_features(img).values;
    for (int q = 1; q < 4; ++q) {
      const auto rot = zernike_features(rotate90(img, q)).values;
      for (std::size_t i = 0; i < base.size(); ++i) EXPECT_NEAR(rot[i], base[i], 1e-9);
    }
  }
}

// A constant image over the pixel lattice keeps the square's 4-fold symmetry,
// which cancels every repetition m that is not a multiple of 4. For m = 4 the
// lattice term is a discretization residue that shrinks with the disk size.
TEST(Zernike, ConstantImageRepetitions) {
  const GrayImage img(160, 160, std::uint8_t{255});
  const auto pairs = zernike_pairs({});
  const auto v = zernike_features(img).values;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const int m = pairs[i].second;
    if (m == 0) continue;
    if (m % 4 != 0)
      EXPECT_NEAR(v[i], 0.0, 1e-6) << pairs[i].first << "," << m;
    else
      EXPECT_LT(v[i], 1e-2) << pairs[i].first << "," << m;
  }
  // |Z00| of the unit disk is 1 up to the pixel-count approximation of its area.
  EXPECT_NEAR(v[0], 1.0, 1e-2);
}
