#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fracns/randomization.hpp"
#include "fracns/spectral.hpp"
#include "oracles.hpp"

using namespace fracns;

namespace {

constexpr double kPi = std::numbers::pi;

SpectralField random_scalar(const Grid& grid, std::uint64_t seed, int kmax) {
  SpectralField v = random_band_field(grid, seed, 0, kmax, false);
  SpectralField out = SpectralField::scalar(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) out.at(0, i) = v.at(0, i);
  return out;
}

}  // namespace

TEST(Grid, WavenumberMapping) {
  const Grid g = make_grid(2, 8);
  EXPECT_EQ(g.size(), 64u);
  EXPECT_EQ(g.wavevector(0), (Wavevector{0, 0, 0}));
  EXPECT_EQ(g.wavevector(1), (Wavevector{0, 1, 0}));
  EXPECT_EQ(g.wavevector(7), (Wavevector{0, -1, 0}));
  EXPECT_EQ(g.wavevector(8), (Wavevector{1, 0, 0}));
  EXPECT_TRUE(g.is_nyquist(4));
  EXPECT_FALSE(g.is_nyquist(3));
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(g.index_of(g.wavevector(i)), i);
  EXPECT_FALSE(g.contains({5, 0, 0}));
  EXPECT_THROW(g.index_of({5, 0, 0}), std::out_of_range);
  EXPECT_NEAR(g.volume(), 4 * kPi * kPi, 1e-12);
  EXPECT_NEAR(g.cell_volume() * 64, g.volume(), 1e-12);
}

TEST(Grid, RejectsBadSizes) {
  EXPECT_THROW(make_grid(4, 8), std::invalid_argument);
  EXPECT_THROW(make_grid(2, 7), std::invalid_argument);
}

TEST(Spectral, PhysicalRoundTrip) {
  for (int d : {2, 3}) {
    const Grid g = make_grid(d, 8);
    const SpectralField f = random_band_field(g, 3, 0, 3, false);
    const SpectralField back = from_physical(g, to_physical(f));
    EXPECT_LT(oracle::max_abs_diff(f, back), 1e-14) << "d=" << d;
  }
}

TEST(Spectral, SingleModeSamples) {
  const Grid g = make_grid(2, 16);
  SpectralField f = SpectralField::scalar(g);
  f.at(0, Wavevector{1, 2, 0}) = Complex(0.5, 0.0);
  f.at(0, Wavevector{-1, -2, 0}) = Complex(0.5, 0.0);
  const auto phys = to_physical(f, 0);
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) {
      const double x = 2 * kPi * i / 16, y = 2 * kPi * j / 16;
      EXPECT_NEAR(phys[i * 16 + j], std::cos(x + 2 * y), 1e-14);
    }
}

TEST(Spectral, DerivativeOfSine) {
  const Grid g = make_grid(2, 16);
  PhysicalScalar s(g.size()), ds(g.size());
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) {
      const double x = 2 * kPi * i / 16, y = 2 * kPi * j / 16;
      s[i * 16 + j] = std::sin(3 * x) * std::cos(y);
      ds[i * 16 + j] = 3 * std::cos(3 * x) * std::cos(y);
    }
  const std::vector<PhysicalScalar> in{s};
  const SpectralField f = from_physical(g, in);
  const auto out = to_physical(partial_derivative(f, 0), 0);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(out[i], ds[i], 1e-12);
}

TEST(Spectral, FractionalDerivativeMultiplier) {
  const Grid g = make_grid(2, 8);
  SpectralField f = SpectralField::scalar(g);
  for (std::size_t i = 0; i < g.size(); ++i) f.at(0, i) = 1.0;
  const SpectralField out = fractional_derivative(f, 0.6);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double expect = (g.k2(i) == 0.0 || g.is_nyquist(i)) ? 0.0 : std::pow(g.k2(i), 0.3);
    EXPECT_NEAR(out.at(0, i).real(), expect, 1e-13);
  }
}

TEST(Spectral, LerayIsDivergenceFreeProjection) {
  const Grid g = make_grid(3, 8);
  const SpectralField f = random_band_field(g, 5, 0, 3, false);
  EXPECT_GT(f.divergence_residual(), 1e-3);
  const SpectralField p = leray_project(f);
  EXPECT_LT(p.divergence_residual(), 1e-14);
  EXPECT_LT(oracle::max_abs_diff(leray_project(p), p), 1e-15);
  EXPECT_LT(p.hermitian_residual(), 1e-14);
}

TEST(Spectral, ParsevalMatchesQuadrature) {
  const Grid g = make_grid(2, 16);
  const SpectralField f = random_band_field(g, 9, 0, 6, true);
  const auto phys = to_physical(f);
  double quad = 0.0;
  for (const auto& c : phys)
    for (double v : c) quad += v * v;
  quad *= g.cell_volume();
  EXPECT_NEAR(inner_product(f, f), quad, 1e-11 * quad);
}

TEST(Spectral, DealiasedProductIsTruncatedConvolution) {
  const Grid g = make_grid(2, 8);
  const SpectralField f = random_scalar(g, 1, 3);
  const SpectralField h = random_scalar(g, 2, 3);
  const SpectralField prod = dealiased_product(f, h);
  SpectralField direct = SpectralField::scalar(g);
  for (std::size_t ip = 0; ip < g.size(); ++ip)
    for (std::size_t iq = 0; iq < g.size(); ++iq) {
      const Wavevector p = g.wavevector(ip), q = g.wavevector(iq);
      if (!oracle::retained(p, 8) || !oracle::retained(q, 8)) continue;
      const Wavevector k{p[0] + q[0], p[1] + q[1], 0};
      if (!g.contains(k) || !oracle::retained(k, 8)) continue;
      direct.at(0, k) += f.at(0, ip) * h.at(0, iq);
    }
  EXPECT_LT(oracle::max_abs_diff(prod, direct), 1e-15 * oracle::max_abs(direct));
}

TEST(Spectral, ArithmeticRequiresSameGrid) {
  SpectralField a = SpectralField::vector(make_grid(2, 8));
  const SpectralField b = SpectralField::vector(make_grid(2, 16));
  EXPECT_THROW(a += b, std::invalid_argument);
}

TEST(Spectral, FractionalDerivativesCompose) {
  const Grid g = make_grid(3, 16);
  const SpectralField f = random_band_field(g, 11, 0, 7, false);
  EXPECT_LT(oracle::max_abs_diff(fractional_derivative(fractional_derivative(f, 1.0), -1.0), f),
            1e-13 * oracle::max_abs(f));
  const SpectralField a = fractional_derivative(fractional_derivative(f, 0.4), -1.3);
  const SpectralField b = fractional_derivative(f, -0.9);
  EXPECT_LT(oracle::max_abs_diff(a, b), 1e-13 * oracle::max_abs(b));

  SpectralField m = f;
  m.at(0, std::size_t{0}) = 1.0;
  EXPECT_THROW(fractional_derivative(m, -0.5), std::invalid_argument);
  EXPECT_EQ(fractional_derivative(m, 0.5).at(0, std::size_t{0}), Complex(0.0));
}
