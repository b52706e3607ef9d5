#include <gtest/gtest.h>

#include <cmath>

#include "fracns/mild.hpp"
#include "fracns/randomization.hpp"
#include "fracns/semigroup.hpp"
#include "oracles.hpp"

using namespace fracns;

namespace {

Trajectory small_heat(double tau, double amplitude, std::uint64_t seed = 1) {
  const Grid g = make_grid(2, 16);
  const auto plan = hs_profile_data(g, -0.4, 5, 0.1, amplitude).plan;
  return heat_trajectory(synthesize(plan, std::nullopt, seed), picard_times(tau, 0.01), 0.8);
}

}  // namespace

TEST(Mild, PicardTimesStructure) {
  const double tau = 0.3, dt = 0.01;
  const auto t = picard_times(tau, dt, 2.0);
  EXPECT_EQ(t.front(), 0.0);
  EXPECT_EQ(t.back(), tau);
  for (std::size_t i = 1; i < t.size(); ++i) EXPECT_GT(t[i], t[i - 1]);
  const auto half = std::find(t.begin(), t.end(), 0.5 * tau);
  ASSERT_NE(half, t.end());
  const double step = picard_uniform_step(tau, dt);
  EXPECT_LE(step, dt);
  for (auto it = half + 1; it != t.end(); ++it) EXPECT_NEAR(*it - *(it - 1), step, 1e-14);
  // Graded part: the first step is the smallest.
  EXPECT_LT(t[1] - t[0], t[2] - t[1]);
  EXPECT_GE(std::distance(t.begin(), half), 8);
  EXPECT_THROW(picard_times(0.0, dt), Error);
}

TEST(Mild, ZeroDataHasZeroSolution) {
  const Grid g = make_grid(2, 16);
  const ProblemParams p = derive_params(2, 0.8, -0.4);
  const Trajectory h = zero_trajectory(g, 2, picard_times(0.2, 0.02));
  const PicardResult r = picard_solve(h, p);
  EXPECT_TRUE(r.state.converged);
  EXPECT_EQ(r.state.iterations, 1);
  for (const auto& f : r.w.fields()) EXPECT_TRUE(f.is_zero());
}

TEST(Mild, TaylorGreenIsAFixedPointOfHeatFlow) {
  const Grid g = make_grid(2, 16);
  const ProblemParams p = derive_params(2, 1.0, -0.5);
  const SpectralField u0 = deterministic_data(taylor_green_plan(g));
  const Trajectory h = heat_trajectory(u0, picard_times(0.1, 0.01), 1.0);
  const PicardResult r = picard_solve(h, p);
  EXPECT_TRUE(r.state.converged);
  for (const auto& f : r.w.fields()) EXPECT_LT(oracle::max_abs(f), 1e-16);
}

TEST(Mild, PicardContractsToFixedPoint) {
  const ProblemParams p = derive_params(2, 0.8, -0.4);
  const Trajectory h = small_heat(0.1, 0.01);
  const PicardResult r = picard_solve(h, p, {1e-12, 30});
  EXPECT_TRUE(r.state.converged);
  EXPECT_TRUE(r.state.in_ball);
  for (std::size_t i = 1; i < r.state.ratios.size(); ++i) EXPECT_LT(r.state.ratios[i], 0.5);
  const Trajectory kw = apply_K(r.w, h, p.alpha);
  const double defect = y_norm(add(kw, scale(-1.0, r.w)), p, h.horizon());
  EXPECT_LT(defect, 1e-11 * std::max(1.0, r.state.w_norm));
  EXPECT_TRUE(std::isnan(r.state.ratios.front()));
}

TEST(Mild, IterationCapRaisesWithState) {
  const ProblemParams p = derive_params(2, 0.8, -0.4);
  const Trajectory h = small_heat(0.1, 0.01);
  try {
    picard_solve(h, p, {1e-14, 1});
    FAIL() << "expected PicardError";
  } catch (const PicardError& e) {
    EXPECT_EQ(e.state().iterations, 1);
    EXPECT_FALSE(e.state().converged);
  }
}

TEST(Mild, SelectTauBracketsThreshold) {
  const Grid g = make_grid(2, 16);
  const ProblemParams p = derive_params(2, 0.8, -0.4);
  const auto plan = hs_profile_data(g, -0.4, 5, 0.1, 0.2).plan;
  const Trajectory h = heat_trajectory(synthesize(plan, std::nullopt, 1), graded_times(0.0, 1.0, 128, 4.0), 0.8);
  const double thr = 0.05;
  const TauSelection sel = select_tau(h, p, thr);
  ASSERT_LT(sel.index + 1, h.size());
  EXPECT_EQ(sel.tau, h.time(sel.index));
  EXPECT_LE(sel.y_norm, thr);
  EXPECT_GT(y_norm(h, p, h.time(sel.index + 1)), thr);
  EXPECT_THROW(select_tau(h, p, 1e-9), Error);
  EXPECT_EQ(select_tau(h, p, 1e9).index, h.size() - 1);
}

TEST(Mild, ApplyKIsMinusMOfSum) {
  const ProblemParams p = derive_params(2, 0.8, -0.4);
  const Trajectory h = small_heat(0.1, 0.05);
  const Trajectory w = scale(0.5, h);
  const Trajectory k = apply_K(w, h, p.alpha);
  const Trajectory u = scale(1.5, h);
  const Trajectory m = duhamel_M(u, u, p.alpha);
  for (std::size_t i = 0; i < k.size(); ++i)
    EXPECT_LT(oracle::max_abs_diff(k.field(i), -1.0 * m.field(i)), 1e-17 + 1e-13 * oracle::max_abs(m.field(i)));
}

TEST(Mild, RegularityReportIsFinite) {
  const ProblemParams p = derive_params(2, 0.8, -0.4);
  const Trajectory h = small_heat(0.1, 0.01);
  const NormReport rep = regularity_report(picard_solve(h, p).w, p);
  EXPECT_TRUE(rep.all_finite());
  for (const char* n : {"Y", "X1", "X2", "X3", "XT", "cont_mu_s", "cont_energy", "hs_first"}) EXPECT_NO_THROW(rep.get(n));
}
