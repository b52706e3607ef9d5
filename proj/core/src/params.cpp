#include "fracns/params.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

namespace fracns {

ProblemParams derive_params(int d, double alpha, double s) {
  if (d != 2 && d != 3) throw ParamError("dimension must be 2 or 3");
  if (!(alpha > 2.0 / 3.0 && alpha <= 1.0)) throw ParamError("alpha must lie in (2/3, 1]");
  if (!(s > 1.0 - 2.0 * alpha && s < 0.0)) throw ParamError("s must lie in (1 - 2 alpha, 0)");

  ProblemParams p;
  p.d = d;
  p.alpha = alpha;
  p.s = s;
  p.gamma = std::max(-0.5 - s / alpha, 0.0);
  p.mu_s = std::max((s + 1.0 - alpha) / (2.0 * alpha), 0.0);
  const double denom = (3.0 - 2.0 * p.gamma) * alpha - 2.0;
  if (!(denom > 0.0)) throw ParamError("(3 - 2 gamma) alpha - 2 must be positive");
  p.r_s = 2.0 * d / denom;
  p.p = p.r_s;
  p.a = 4.0 / (1.0 + 2.0 * p.gamma);
  return p;
}

double energy_theta(const ProblemParams& params) { return -params.gamma - 1.0 / params.alpha + 1.5; }

double weight_energy(const ProblemParams& params) { return params.gamma + 1.0 / (2.0 * params.alpha) - 0.5; }

double q_uniqueness(const ProblemParams& params) {
  return 4.0 * params.alpha / ((2.0 * params.gamma - 1.0) * params.alpha + 2.0);
}

UniquenessSpec derive_uniqueness_spec(const ProblemParams& params) {
  UniquenessSpec u;
  u.beta = 1.0 - params.alpha;
  u.r = params.p;
  u.q = q_uniqueness(params);
  if (!(u.r > params.d / params.alpha)) throw ParamError("uniqueness exponent r must exceed d / alpha");
  if (!(u.beta < params.d / u.r + 1.0 - params.alpha)) throw ParamError("uniqueness exponent beta out of range");
  u.theta = (params.d / params.alpha) * (1.0 / u.r - (params.alpha + u.beta - 1.0) / params.d);
  return u;
}

double scaling_defect(const UniquenessSpec& u, const ProblemParams& params) {
  return 2.0 * params.alpha / u.q + params.d / u.r - (2.0 * params.alpha - 1.0 + u.beta);
}

std::string params_json(const ProblemParams& params, int n) {
  const auto u = derive_uniqueness_spec(params);
  nlohmann::ordered_json j;
  j["d"] = params.d;
  j["N"] = n;
  j["alpha"] = params.alpha;
  j["s"] = params.s;
  j["gamma"] = params.gamma;
  j["mu_s"] = params.mu_s;
  j["r_s"] = params.r_s;
  j["p"] = params.p;
  j["theta_E"] = energy_theta(params);
  j["beta_u"] = u.beta;
  j["r_u"] = u.r;
  j["q_u"] = u.q;
  return j.dump(2);
}

}  // namespace fracns
