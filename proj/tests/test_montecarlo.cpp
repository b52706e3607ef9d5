#include <gtest/gtest.h>

#include <atomic>
#include <cmath>

#include "fracns/montecarlo.hpp"
#include "fracns/norms.hpp"
#include "fracns/randomization.hpp"

using namespace fracns;

TEST(MonteCarlo, GaussianMomentRoots) {
  EXPECT_NEAR(gaussian_abs_moment_root(2.0), 1.0, 1e-14);
  EXPECT_NEAR(gaussian_abs_moment_root(4.0), std::pow(3.0, 0.25), 1e-14);
  EXPECT_NEAR(gaussian_abs_moment_root(6.0), std::pow(15.0, 1.0 / 6.0), 1e-14);
}

TEST(MonteCarlo, PairwiseSum) {
  std::vector<double> x(1001);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = static_cast<double>(i);
  EXPECT_EQ(pairwise_sum(x), 500500.0);
  EXPECT_EQ(pairwise_sum(std::span<const double>()), 0.0);
}

TEST(MonteCarlo, ParallelForCoversAndRethrows) {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), 7, [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) EXPECT_EQ(h, 1);
  EXPECT_THROW(parallel_for(100, 4,
                            [](std::size_t i) {
                              if (i == 63) throw Error("boom");
                            }),
               Error);
  std::atomic<int> count{0};
  parallel_for(0, 4, [&](std::size_t) { ++count; });
  EXPECT_EQ(count.load(), 0);
}

TEST(MonteCarlo, SingleRademacherIsExact) {
  const std::vector<double> c{0.0, 2.5, 0.0};
  const VerifierReport rep = khinchin_check(c, parse_distribution("rademacher"), {2000, 4.0, 3, 1});
  EXPECT_NEAR(rep.fitted, 1.0, 1e-14);
  EXPECT_TRUE(rep.pass);
}

TEST(MonteCarlo, KhinchinReproducibleAcrossThreads) {
  const std::vector<double> c(16, 1.0);
  const auto dist = parse_distribution("gaussian");
  const VerifierReport a = khinchin_check(c, dist, {4000, 4.0, 5, 1});
  const VerifierReport b = khinchin_check(c, dist, {4000, 4.0, 5, 4});
  EXPECT_EQ(a.fitted, b.fitted);
  EXPECT_EQ(a.tolerance, b.tolerance);
  EXPECT_TRUE(a.pass) << a.fitted << " +- " << a.tolerance;
  EXPECT_NE(a.fitted, khinchin_check(c, dist, {4000, 4.0, 6, 1}).fitted);
}

TEST(MonteCarlo, KhinchinRejectsInfiniteMoments) {
  const std::vector<double> c(8, 1.0);
  EXPECT_FALSE(khinchin_check(c, parse_distribution("student_t:3"), {2000, 4.0, 1, 0}).pass);
  EXPECT_THROW(khinchin_check(c, parse_distribution("gaussian"), {10, 4.0, 1, 0}), Error);
  EXPECT_THROW(khinchin_check(std::vector<double>(4, 0.0), parse_distribution("gaussian"), {2000, 4.0, 1, 0}), Error);
}

TEST(MonteCarlo, SuiteFamilies) {
  const auto fams = coefficient_families(10, 1);
  ASSERT_EQ(fams.size(), 5u);
  for (const auto& f : fams) EXPECT_EQ(f.coeffs.size(), 10u);
  const KhinchinSuite s = khinchin_suite(parse_distribution("uniform"), {4000, 4.0, 1, 0}, 32);
  EXPECT_TRUE(s.pass) << s.spread;
  EXPECT_EQ(s.reports.size(), 5u);
}

TEST(MonteCarlo, HeatNormValidation) {
  const ProblemParams p = derive_params(2, 0.8, -0.4);
  EXPECT_NO_THROW(validate_heat_norm({0.0, -0.4, kInf, 2.0}, p));
  EXPECT_NO_THROW(validate_heat_norm({0.0, 0.0, 2.0, 2.0}, p));
  EXPECT_NO_THROW(validate_heat_norm({0.25, 0.0, 4.0, 4.0}, p));
  EXPECT_THROW(validate_heat_norm({0.0, 0.5, 4.0, 2.0}, p), ParamError);
  EXPECT_THROW(validate_heat_norm({0.0, 0.0, kInf, 2.0}, p), ParamError);
}

TEST(MonteCarlo, EnsembleIsHomogeneousAndDeterministic) {
  const Grid g = make_grid(2, 16);
  const ProblemParams p = derive_params(2, 0.8, -0.4);
  const HeatNormSpec spec{0.0, -0.4, kInf, 2.0, 1.0, 8};
  const auto a = heatflow_norm_ensemble(hs_profile_data(g, -0.4, 5, 0.1, 1.0).plan, spec, p, 40, 2);
  const auto b = heatflow_norm_ensemble(hs_profile_data(g, -0.4, 5, 0.1, 3.0).plan, spec, p, 40, 1);
  ASSERT_EQ(a.samples.size(), 40u);
  for (std::size_t i = 0; i < a.samples.size(); ++i) EXPECT_NEAR(b.samples[i], 3.0 * a.samples[i], 1e-12 * b.samples[i]);
  EXPECT_NEAR(a.ratio, b.ratio, 1e-12);
  EXPECT_LE(a.moment_rs, a.moment_ceil * (1.0 + 1e-12));
  // At t = 0 the sup-in-time H^s norm is attained, so each sample is at least ||u0||_{H^s}.
  for (std::size_t i = 0; i < 3; ++i) {
    const double h0 = space_norm(synthesize(hs_profile_data(g, -0.4, 5, 0.1).plan, std::nullopt, i),
                                 SpaceNormSpec::hs(-0.4));
    EXPECT_NEAR(a.samples[i], h0, 1e-12 * h0);
  }
}

namespace {

/// Deterministic quantile samples of a law with survival function S.
std::vector<double> quantiles(std::size_t n, const std::function<double(double)>& inverse_survival) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = inverse_survival((i + 0.5) / static_cast<double>(n));
  return x;
}

}  // namespace

TEST(MonteCarlo, TailCheck) {
  // |Z| with P(|Z| > x) = erfc(x / sqrt 2); invert by bisection.
  const auto abs_gauss = quantiles(20000, [](double p) {
    double lo = 0.0, hi = 20.0;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      (std::erfc(mid / std::sqrt(2.0)) > p ? lo : hi) = mid;
    }
    return lo;
  });
  EXPECT_TRUE(tail_check(abs_gauss, 2.0).report.pass);

  const auto pareto = quantiles(20000, [](double p) { return 1.0 / p; });
  const TailReport heavy = tail_check(pareto, 4.0);
  EXPECT_FALSE(heavy.report.pass);
  EXPECT_NEAR(heavy.report.fitted, -1.0, 0.1);

  EXPECT_TRUE(tail_check(std::vector<double>(100, 1.0), 4.0).report.pass);
  EXPECT_THROW(tail_check(std::vector<double>(100, 0.0), 4.0), Error);
  EXPECT_THROW(tail_check(std::vector<double>{1.0, std::nan("")}, 4.0), Error);
  EXPECT_THROW(tail_check(std::vector<double>{}, 4.0), Error);
}

TEST(MonteCarlo, SingleRademacherModeIsDeterministic) {
  const Grid g = make_grid(2, 16);
  const ProblemParams p = derive_params(2, 0.8, -0.4);
  DistributionSpec dist = parse_distribution("rademacher");
  const auto plan = single_mode_plan(g, {2, 1, 0}, 0, 0.7, dist, 3);
  const auto st = heatflow_norm_ensemble(plan, {0.0, -0.4, kInf, 2.0, 1.0, 8}, p, 64, 0);
  for (double x : st.samples) EXPECT_EQ(x, st.samples.front());
  EXPECT_NEAR(st.moment_rs, st.samples.front(), 1e-14 * st.moment_rs);
  EXPECT_NEAR(st.ratio, 1.0, 1e-12);
}

TEST(MonteCarlo, StandardErrorShrinksAsInverseRoot) {
  const std::vector<double> c(16, 1.0);
  const auto dist = parse_distribution("gaussian");
  const double a = khinchin_check(c, dist, {1000, 4.0, 2, 0}).tolerance;
  const double b = khinchin_check(c, dist, {4000, 4.0, 2, 0}).tolerance;
  const double d = khinchin_check(c, dist, {16000, 4.0, 2, 0}).tolerance;
  EXPECT_NEAR(a / b, 2.0, 0.5);
  EXPECT_NEAR(b / d, 2.0, 0.5);
}

TEST(MonteCarlo, ProfileStudy) {
  const Grid g = make_grid(2, 16);
  const ProblemParams p = derive_params(2, 0.8, -0.4);
  const SeStudy s = se_profile_study(g, p, parse_distribution("gaussian"), 1, 6, {0.0, -0.4, kInf, 2.0, 1.0, 8}, 1000, 0);
  ASSERT_EQ(s.rows.size(), 7u);
  EXPECT_EQ(s.rows[1].cutoff, 3);
  EXPECT_EQ(s.rows.back().T, 4.0);
  EXPECT_TRUE(s.report.pass) << s.report.fitted;
  // sup_t of a contraction is attained at t = 0, so the horizon does not matter here.
  EXPECT_NEAR(s.report.ratio, 1.0, 1e-12);
  for (const auto& r : s.rows) {
    EXPECT_GE(r.stats.ratio, 1.0);
    EXPECT_LE(r.stats.ratio, gaussian_abs_moment_root(p.r_s));
  }
}
