#include <gtest/gtest.h>

#include <cmath>

#include "fracns/randomization.hpp"
#include "fracns/semigroup.hpp"
#include "oracles.hpp"

using namespace fracns;

namespace {

SpectralField band(const Grid& g, std::uint64_t seed) { return random_band_field(g, seed, 0, 5, true); }

/// Per mode with lambda = |k|^{2 alpha}: int_0^t e^{-lambda (t-s)} G(s) ds for
/// G(s) = sin(s) G0, in closed form.
SpectralField sine_forcing_exact(const SpectralField& g0, double t, double alpha) {
  SpectralField out = g0;
  const Grid& grid = g0.grid();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double lam = std::pow(grid.k2(i), alpha);
    const double w = (lam * std::sin(t) - std::cos(t) + std::exp(-lam * t)) / (lam * lam + 1.0);
    for (int c = 0; c < g0.comps(); ++c) out.at(c, i) *= w;
  }
  return out;
}

}  // namespace

TEST(Semigroup, TaylorGreenDecay) {
  const Grid g = make_grid(2, 16);
  const SpectralField u0 = deterministic_data(taylor_green_plan(g));
  for (double alpha : {0.75, 0.9, 1.0})
    for (double t : {0.0, 0.1, 2.5})
      EXPECT_LT(oracle::max_abs_diff(heat_flow(u0, t, alpha), oracle::taylor_green_exact(u0, alpha, t)), 1e-16);
}

TEST(Semigroup, SemigroupProperty) {
  const Grid g = make_grid(3, 8);
  const SpectralField f = band(make_grid(3, 16), 1);
  const SpectralField u = random_band_field(g, 4, 0, 3, true);
  const SpectralField a = heat_flow(heat_flow(u, 0.3, 0.8), 0.45, 0.8);
  EXPECT_LT(oracle::max_abs_diff(a, heat_flow(u, 0.75, 0.8)), 1e-15);
  EXPECT_THROW(heat_flow(f, -1.0, 0.8), Error);
  const HeatFlow h(u, 0.8);
  EXPECT_LT(oracle::max_abs_diff(h(0.2), heat_flow(u, 0.2, 0.8)), 0.0 + 1e-300);
}

TEST(Semigroup, DuhamelWeightsContinuousAtSeriesSwitch) {
  for (double z : {9.99e-4, 1e-3, 1.001e-3, 1e-6}) {
    const auto [p1, p2] = duhamel_weights(z);
    const double e1 = -std::expm1(-z) / z;
    const double e2 = (z + std::expm1(-z)) / (z * z);
    EXPECT_NEAR(p1, e1, 1e-12);
    EXPECT_NEAR(p2, e2, 1e-9);
  }
  const auto [a, b] = duhamel_weights(0.0);
  EXPECT_DOUBLE_EQ(a, 1.0);
  EXPECT_DOUBLE_EQ(b, 0.5);
}

TEST(Semigroup, DuhamelExactForLinearForcing) {
  const Grid g = make_grid(2, 16);
  SpectralField g0 = band(g, 2);
  g0.at(0, std::size_t{0}) = 0.7;  // exercise lambda = 0
  const double alpha = 0.85;
  const std::vector<double> times{0.0, 0.013, 0.05, 0.2, 0.21, 0.6, 1.0};
  Trajectory forcing;
  for (double t : times) forcing.push_back(t, (1.0 + 3.0 * t) * g0);
  const Trajectory out = duhamel_integrate(forcing, alpha);
  for (std::size_t n = 0; n < times.size(); ++n) {
    const double t = times[n];
    SpectralField exact = g0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double lam = std::pow(g.k2(i), alpha);
      const double w = lam == 0.0 ? t + 1.5 * t * t
                                  : -std::expm1(-lam * t) / lam + 3.0 * (t / lam + std::expm1(-lam * t) / (lam * lam));
      for (int c = 0; c < 2; ++c) exact.at(c, i) *= w;
    }
    EXPECT_LT(oracle::max_abs_diff(out.field(n), exact), 1e-13 * std::max(1.0, oracle::max_abs(exact))) << t;
  }
}

TEST(Semigroup, DuhamelSecondOrder) {
  const Grid g = make_grid(2, 16);
  SpectralField g0 = band(g, 3);
  const double alpha = 0.8;
  std::vector<double> errs;
  for (int n : {20, 40, 80}) {
    Trajectory forcing;
    for (int i = 0; i <= n; ++i) {
      const double t = 2.0 * i / n;
      forcing.push_back(t, std::sin(t) * g0);
    }
    const Trajectory out = duhamel_integrate(forcing, alpha);
    errs.push_back(oracle::max_abs_diff(out.back(), sine_forcing_exact(g0, 2.0, alpha)));
  }
  for (std::size_t i = 1; i < errs.size(); ++i) EXPECT_NEAR(errs[i - 1] / errs[i], 4.0, 0.3);
}

TEST(Semigroup, ForcingIndependentOfGrid) {
  const SpectralField a = random_forcing(make_grid(2, 16), 0.4, 5, 2);
  const SpectralField b = random_forcing(make_grid(2, 32), 0.4, 5, 2);
  for (int kx = -3; kx <= 3; ++kx)
    for (int ky = -3; ky <= 3; ++ky)
      for (int c = 0; c < 2; ++c) EXPECT_EQ(a.at(c, Wavevector{kx, ky, 0}), b.at(c, Wavevector{kx, ky, 0}));
  EXPECT_LT(a.hermitian_residual(), 1e-16);
  EXPECT_THROW(random_forcing(make_grid(2, 8), 0.0, 1, 0, 4), Error);
}
