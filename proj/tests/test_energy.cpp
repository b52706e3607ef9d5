#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fracns/energy.hpp"
#include "fracns/randomization.hpp"
#include "fracns/semigroup.hpp"
#include "oracles.hpp"

using namespace fracns;

namespace {

SpectralField small_field(const Grid& g, std::uint64_t seed, double l2) {
  SpectralField f = random_band_field(g, seed, 0, 5, true);
  f *= l2 / std::sqrt(inner_product(f, f));
  return f;
}

}  // namespace

TEST(Energy, GalerkinTimes) {
  const auto t = galerkin_times(0.1, 0.35, 0.1);
  ASSERT_EQ(t.size(), 4u);
  EXPECT_EQ(t.back(), 0.35);
  EXPECT_NEAR(t[2], 0.3, 1e-15);
  EXPECT_THROW(galerkin_times(0.5, 0.4, 0.1), Error);
}

TEST(Energy, TaylorGreenDecaysExactly) {
  const Grid g = make_grid(2, 16);
  const SpectralField u0 = deterministic_data(taylor_green_plan(g));
  const HeatFlow none(SpectralField::vector(g), 0.9);
  const Trajectory w = galerkin_run(u0, none, galerkin_times(0.0, 1.0, 0.05), 0.9);
  for (std::size_t i = 0; i < w.size(); ++i)
    EXPECT_LT(oracle::max_abs_diff(w.field(i), oracle::taylor_green_exact(u0, 0.9, w.time(i))), 1e-15);
  // With h = TG and w = 0 the nonlinearity vanishes, so w stays zero.
  const Trajectory w0 = galerkin_run(SpectralField::vector(g), HeatFlow(u0, 0.9), galerkin_times(0.0, 1.0, 0.05), 0.9);
  EXPECT_LT(oracle::max_abs(w0.back()), 1e-16);
}

TEST(Energy, HeunIsSecondOrder) {
  const Grid g = make_grid(2, 16);
  const SpectralField w0 = small_field(g, 3, 2.0);
  const HeatFlow h(small_field(g, 4, 1.0), 0.8);
  const auto run = [&](double dt) { return galerkin_run(w0, h, galerkin_times(0.0, 0.5, dt), 0.8).back(); };
  const SpectralField ref = run(0.5 / 640);
  const double e1 = oracle::max_abs_diff(run(0.5 / 20), ref);
  const double e2 = oracle::max_abs_diff(run(0.5 / 40), ref);
  const double e3 = oracle::max_abs_diff(run(0.5 / 80), ref);
  EXPECT_NEAR(e1 / e2, 4.0, 0.6);
  EXPECT_NEAR(e2 / e3, 4.0, 0.6);
}

TEST(Energy, PreservesZeroMeanAndDivergence) {
  const Grid g = make_grid(3, 16);
  const HeatFlow h(small_field(g, 5, 1.0), 0.9);
  const SpectralField w = galerkin_step(small_field(g, 6, 1.0), h, 0.0, 0.01, 0.9);
  EXPECT_EQ(w.at(0, std::size_t{0}), Complex(0.0));
  EXPECT_LT(w.divergence_residual(), 1e-13);
  EXPECT_LT(w.hermitian_residual(), 1e-15);
}

TEST(Energy, CflGuard) {
  const Grid g = make_grid(2, 32);
  const SpectralField w = small_field(g, 7, 500.0);
  EXPECT_GT(cfl_number(w, 0.1), 1.0);
  EXPECT_THROW(galerkin_step(w, HeatFlow(), 0.0, 0.1, 1.0), Error);
  EXPECT_THROW(galerkin_step(w, HeatFlow(), 0.0, 0.0, 1.0), Error);
}

TEST(Energy, AuditWithoutBackgroundIsExact) {
  const Grid g = make_grid(2, 16);
  const SpectralField w0 = small_field(g, 8, 0.1);
  const HeatFlow none(SpectralField::vector(g), 0.8);
  const Trajectory w = galerkin_run(w0, none, galerkin_times(0.0, 0.5, 0.005), 0.8);
  const EnergyLedger led = energy_audit(w, none, 0.8);
  EXPECT_TRUE(led.strictly_decreasing);
  EXPECT_LT(led.max_residual_rate, 1e-6);
  for (const auto& row : led.rows) {
    EXPECT_EQ(row.work_ww, 0.0);
    EXPECT_NEAR(row.l2sq, inner_product(w.field(&row - led.rows.data()), w.field(&row - led.rows.data())), 1e-15);
  }
  EXPECT_NEAR(led.rows.front().e_w, 0.01, 1e-15);
}

TEST(Energy, GronwallConstantIsTight) {
  const Grid g = make_grid(2, 16);
  const ProblemParams p = derive_params(2, 0.8, -0.4);
  const HeatFlow h(small_field(g, 9, 0.5), 0.8);
  const Trajectory w = galerkin_run(small_field(g, 10, 0.2), h, galerkin_times(0.05, 1.0, 0.01), 0.8);
  const EnergyLedger led = energy_audit(w, h, 0.8);
  const GronwallTerms terms = gronwall_terms(led, h, p);
  EXPECT_EQ(terms.f.front(), 0.0);
  EXPECT_NEAR(terms.a, led.rows.front().l2sq, 0.0);
  const double c = gronwall_needed_constant(led, terms);
  ASSERT_TRUE(std::isfinite(c));
  EXPECT_TRUE(gronwall_check(led, terms, 2.0 * c).pass);
  EXPECT_FALSE(gronwall_check(led, terms, 0.5 * c).pass);
  EXPECT_NEAR(gronwall_check(led, terms, c).ratio, 0.0, 1e-10);
}

TEST(Energy, DualBudget) {
  const Grid g = make_grid(2, 16);
  const ProblemParams p = derive_params(2, 1.0, -0.5);
  const Trajectory zero = zero_trajectory(g, 2, galerkin_times(0.0, 1.0, 0.1));
  const DualBudget z = dual_norm_budget(zero, HeatFlow(SpectralField::vector(g), 1.0), p);
  EXPECT_EQ(z.budget, 0.0);
  EXPECT_TRUE(z.exact_dual);

  const double alpha = 0.9;
  const ProblemParams q = derive_params(2, alpha, -0.5);
  const SpectralField u0 = deterministic_data(taylor_green_plan(g));
  std::vector<double> times;
  for (int i = 0; i <= 1000; ++i) times.push_back(i / 1000.0);
  const Trajectory w = heat_trajectory(u0, times, alpha);
  const DualBudget b = dual_norm_budget(w, HeatFlow(SpectralField::vector(g), alpha), q);
  const double lam = std::pow(2.0, alpha);
  const double expect = std::pow(2.0, alpha - 0.5) * std::numbers::pi * std::sqrt(2.0) * -std::expm1(-lam) / lam;
  EXPECT_LT(b.nonlinear, 1e-14);
  EXPECT_NEAR(b.linear, expect, 1e-6 * expect);
}
