#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "fracns/norms.hpp"
#include "fracns/randomization.hpp"
#include "fracns/rng.hpp"
#include "oracles.hpp"

using namespace fracns;

namespace {

constexpr double kPi = std::numbers::pi;

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

}  // namespace

TEST(Randomization, Classification) {
  EXPECT_EQ(classify_wavevector({0, 0, 0}, 3), WaveClass::Zero);
  EXPECT_EQ(classify_wavevector({0, 2, -1}, 3), WaveClass::Plus);
  EXPECT_EQ(classify_wavevector({0, 0, -1}, 3), WaveClass::Minus);
  EXPECT_EQ(classify_wavevector({-1, 5, 0}, 2), WaveClass::Minus);
}

TEST(Randomization, PerpBasisIsOrthonormalAndShared) {
  for (const Wavevector k : {Wavevector{1, 2, 0}, Wavevector{3, -1, 2}, Wavevector{0, 0, 1}, Wavevector{-2, 1, 1}}) {
    for (int d : {2, 3}) {
      if (d == 2 && k[2] != 0) continue;
      const auto b = perp_basis(k, d);
      ASSERT_EQ(static_cast<int>(b.size()), d - 1);
      const Vec3 kv{double(k[0]), double(k[1]), double(k[2])};
      for (std::size_t i = 0; i < b.size(); ++i) {
        EXPECT_NEAR(dot(b[i], kv), 0.0, 1e-14);
        for (std::size_t j = 0; j < b.size(); ++j) EXPECT_NEAR(dot(b[i], b[j]), i == j ? 1.0 : 0.0, 1e-14);
      }
      const auto bm = perp_basis({-k[0], -k[1], -k[2]}, d);
      for (std::size_t i = 0; i < b.size(); ++i)
        for (int c = 0; c < 3; ++c) EXPECT_EQ(b[i][c], bm[i][c]);
    }
  }
  EXPECT_THROW(perp_basis({0, 0, 0}, 3), std::invalid_argument);
}

TEST(Randomization, SynthesisIsRealAndDivergenceFree) {
  for (int d : {2, 3}) {
    const Grid g = make_grid(d, 16);
    const auto prof = hs_profile_data(g, -0.4, 5, 0.1);
    const SpectralField u = synthesize(prof.plan, std::nullopt, 3);
    EXPECT_LT(u.divergence_residual(), 1e-14);
    EXPECT_LT(u.hermitian_residual(), 1e-15);
    EXPECT_EQ(u.at(0, std::size_t{0}), Complex(0.0));
  }
}

TEST(Randomization, DrawsAreDeterministicAndOrderIndependent) {
  const Grid g = make_grid(2, 16);
  const auto a = hs_profile_data(g, -0.4, 5, 0.1).plan;
  const auto ga = draw_multipliers(a, 7);
  EXPECT_EQ(ga, draw_multipliers(a, 7));
  EXPECT_NE(ga, draw_multipliers(a, 8));

  // A plan with modes in a different order draws the same value per mode.
  auto b = a;
  std::reverse(b.modes.begin(), b.modes.end());
  const auto gb = draw_multipliers(b, 7);
  const std::size_t n = a.modes.size();
  for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(ga[i], gb[n - 1 - i]);
}

TEST(Randomization, AmplitudesInvertSynthesis) {
  const Grid g = make_grid(3, 8);
  const auto plan = hs_profile_data(g, -0.3, 3, 0.2).plan;
  const auto gdraw = draw_multipliers(plan, 2);
  const SpectralField u = synthesize(plan, std::span<const double>(gdraw));
  const auto amp = real_basis_amplitudes(u, plan);
  ASSERT_EQ(amp.size(), plan.coefficient_count());
  std::size_t i = 0;
  for (const auto& m : plan.modes)
    for (double u0 : m.u0) {
      EXPECT_NEAR(amp[i], u0 * gdraw[i], 1e-13);
      ++i;
    }
}

TEST(Randomization, PlanNormMatchesFieldNorm) {
  const Grid g = make_grid(2, 16);
  const auto plan = hs_profile_data(g, -0.4, 6, 0.1).plan;
  const SpectralField u = deterministic_data(plan);
  const double expect = space_norm(u, SpaceNormSpec::hs(-0.4));
  EXPECT_NEAR(plan_hs_norm(plan, -0.4), expect, 1e-12 * expect);
  double sq = 0.0;
  for (double c : weighted_coefficients(plan, -0.4)) sq += c * c;
  EXPECT_NEAR(std::sqrt(sq), expect, 1e-12 * expect);
}

TEST(Randomization, TaylorGreenPhysicalForm) {
  const Grid g = make_grid(2, 16);
  const SpectralField u = deterministic_data(taylor_green_plan(g, 1.5));
  const auto phys = to_physical(u);
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) {
      const double x = 2 * kPi * i / 16, y = 2 * kPi * j / 16;
      EXPECT_NEAR(phys[0][i * 16 + j], 1.5 * std::sin(x) * std::cos(y), 1e-14);
      EXPECT_NEAR(phys[1][i * 16 + j], -1.5 * std::cos(x) * std::sin(y), 1e-14);
    }
}

TEST(Randomization, SingleModePlan) {
  const Grid g = make_grid(2, 16);
  const auto plan = single_mode_plan(g, {2, -1, 0}, 0, 0.5);
  ASSERT_EQ(plan.modes.size(), 1u);
  const SpectralField u = deterministic_data(plan);
  EXPECT_NEAR(space_norm(u, SpaceNormSpec::hs(0.0)), 0.5 * std::sqrt(4 * kPi * kPi / 2), 1e-13);
}

TEST(Randomization, NonpositiveDeltaWarns) {
  const Grid g = make_grid(2, 16);
  EXPECT_TRUE(hs_profile_data(g, -0.4, 5, 0.1).warnings.empty());
  EXPECT_FALSE(hs_profile_data(g, -0.4, 5, 0.0).warnings.empty());
}

TEST(Randomization, RejectsBadCutoff) {
  const Grid g = make_grid(2, 16);
  EXPECT_THROW(hs_profile_data(g, -0.4, 8, 0.1), std::invalid_argument);
  EXPECT_THROW(random_band_field(g, 1, 0, 8, true), Error);
}

TEST(Randomization, PlanRecordsOnePerCoefficient) {
  const Grid g = make_grid(3, 8);
  const auto plan = hs_profile_data(g, -0.3, 2, 0.2).plan;
  std::ostringstream os;
  write_plan(os, plan);
  std::size_t lines = 0;
  std::istringstream is(os.str());
  for (std::string line; std::getline(is, line);)
    if (!line.empty() && line[0] != '#') ++lines;
  EXPECT_EQ(lines, plan.coefficient_count());
}

TEST(Distributions, ParseAndMoments) {
  EXPECT_EQ(parse_distribution("gaussian").family, Family::Gaussian);
  EXPECT_EQ(parse_distribution("rademacher").family, Family::Rademacher);
  const auto t = parse_distribution("student_t:3");
  EXPECT_EQ(t.family, Family::StudentT);
  EXPECT_EQ(t.dof, 3);
  EXPECT_DOUBLE_EQ(t.finite_moment_bound(), 3.0);
  EXPECT_THROW(parse_distribution("cauchy"), std::exception);

  for (const char* name : {"gaussian", "rademacher", "uniform"}) {
    const auto dist = parse_distribution(name);
    CounterStream rng(1, 2);
    double m1 = 0, m2 = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
      const double x = dist.draw(rng);
      m1 += x;
      m2 += x * x;
    }
    EXPECT_NEAR(m1 / n, 0.0, 0.01) << name;
    EXPECT_NEAR(m2 / n, 1.0, 0.02) << name;
  }
}

TEST(Randomization, EnsembleMeanOfSquaredNorm) {
  // E ||u0^omega||^2_{H^s} = ||u0||^2_{H^s} for unit-variance multipliers.
  const Grid g = make_grid(2, 16);
  const auto plan = hs_profile_data(g, -0.4, 5, 0.1).plan;
  const double expect = std::pow(plan_hs_norm(plan, -0.4), 2);
  const std::size_t n = 10000;
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = std::pow(space_norm(synthesize(plan, std::nullopt, i), SpaceNormSpec::hs(-0.4)), 2);
  double mean = 0.0, var = 0.0;
  for (double v : x) mean += v;
  mean /= n;
  for (double v : x) var += (v - mean) * (v - mean);
  const double se = std::sqrt(var / (n - 1) / n);
  EXPECT_NEAR(mean, expect, 3.0 * se);
}
