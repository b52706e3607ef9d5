#include <gtest/gtest.h>

#include <cmath>

#include "fracns/params.hpp"
#include "oracles.hpp"

using namespace fracns;
using oracle::Rational;

namespace {

void expect_close(double v, Rational exact, const char* what) {
  EXPECT_NEAR(v, exact.value(), 1e-13 * std::max(1.0, std::abs(exact.value()))) << what;
}

}  // namespace

TEST(Params, RationalGridAgreesWithExactArithmetic) {
  for (int d : {2, 3})
    for (int an = 7; an <= 10; ++an) {
      const Rational alpha(an, 10);
      for (int sn = -9; sn <= -1; ++sn) {
        const Rational s(sn, 20);
        if (!(Rational(1) - Rational(2) * alpha < s)) continue;
        const auto e = oracle::exact_params(d, alpha, s);
        const Rational denom = (Rational(3) - Rational(2) * e.gamma) * alpha - Rational(2);
        if (!(Rational(0) < denom)) {
          EXPECT_THROW(derive_params(d, alpha.value(), s.value()), ParamError);
          continue;
        }
        const ProblemParams p = derive_params(d, alpha.value(), s.value());
        SCOPED_TRACE(testing::Message() << "d=" << d << " alpha=" << alpha.value() << " s=" << s.value());
        expect_close(p.gamma, e.gamma, "gamma");
        expect_close(p.mu_s, e.mu_s, "mu_s");
        expect_close(p.r_s, e.r_s, "r_s");
        expect_close(p.p, e.r_s, "p");
        expect_close(energy_theta(p), e.theta_e, "theta_E");
        expect_close(p.a, Rational(4) / (Rational(1) + Rational(2) * e.gamma), "a");
        if (Rational(d) / alpha < e.r && e.beta < Rational(d) / e.r + Rational(1) - alpha) {
          const UniquenessSpec u = derive_uniqueness_spec(p);
          expect_close(u.beta, e.beta, "beta");
          expect_close(u.r, e.r, "r");
          expect_close(u.q, e.q, "q");
          expect_close(q_uniqueness(p), e.q, "q_uniqueness");
          expect_close(u.theta, e.theta_u, "theta_u");
          EXPECT_NEAR(scaling_defect(u, p), 0.0, 1e-12);
        }
      }
    }
}

TEST(Params, KnownValues) {
  const ProblemParams p = derive_params(2, 1.0, -0.5);
  EXPECT_DOUBLE_EQ(p.gamma, 0.0);
  EXPECT_DOUBLE_EQ(p.r_s, 4.0);
  EXPECT_DOUBLE_EQ(energy_theta(p), 0.5);
  const ProblemParams q = derive_params(2, 1.0, -0.75);
  EXPECT_DOUBLE_EQ(q.gamma, 0.25);
  EXPECT_DOUBLE_EQ(q.r_s, 8.0);
  EXPECT_NEAR(derive_uniqueness_spec(derive_params(3, 0.8, -0.5)).q, 16.0 / 7.0, 1e-14);
}

TEST(Params, RejectsOutOfRange) {
  EXPECT_THROW(derive_params(4, 1.0, -0.5), ParamError);
  EXPECT_THROW(derive_params(2, 0.6, -0.1), ParamError);
  EXPECT_THROW(derive_params(2, 1.1, -0.5), ParamError);
  EXPECT_THROW(derive_params(2, 1.0, 0.0), ParamError);
  EXPECT_THROW(derive_params(2, 1.0, -1.0), ParamError);
  EXPECT_THROW(derive_params(2, 0.75, -0.5), ParamError);
}

TEST(Params, JsonCarriesEveryKey) {
  const std::string js = params_json(derive_params(2, 0.8, -0.4), 32);
  for (const char* key : {"\"d\"", "\"N\"", "\"alpha\"", "\"s\"", "\"gamma\"", "\"mu_s\"", "\"r_s\"", "\"p\"",
                          "\"theta_E\"", "\"beta_u\"", "\"r_u\"", "\"q_u\""})
    EXPECT_NE(js.find(key), std::string::npos) << key;
}
