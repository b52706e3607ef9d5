#pragma once

#include <string>

#include "fracns/spectral.hpp"

namespace fracns {

/// Raised when (d, alpha, s) fall outside the admissible range. The message
/// names the hypothesis that failed.
class ParamError : public Error {
public:
  using Error::Error;
};

/// Problem exponents derived from (d, alpha, s).
///
///   gamma = max(-1/2 - s/alpha, 0)
///   mu_s  = max((s + 1 - alpha) / (2 alpha), 0)
///   p     = r_s = 2d / ((3 - 2 gamma) alpha - 2)
///   a     = 4 / (1 + 2 gamma)
struct ProblemParams {
  int d = 2;
  double alpha = 1.0;
  double s = -0.5;
  double gamma = 0.0;
  double mu_s = 0.0;
  double r_s = 4.0;
  double p = 4.0;
  double a = 4.0;
};

ProblemParams derive_params(int d, double alpha, double s);

/// Interpolation exponent -gamma - 1/alpha + 3/2 of the energy estimate.
double energy_theta(const ProblemParams& params);

/// (beta, r, q, theta) with 2 alpha / q + d / r = 2 alpha - 1 + beta and
/// theta = (d/alpha)(1/r - (alpha + beta - 1)/d).
struct UniquenessSpec {
  double beta = 0.0;
  double r = 0.0;
  double q = 0.0;
  double theta = 0.0;
};

/// The triple used on the gluing window: beta = 1 - alpha, r = p,
/// q = 4 alpha / ((2 gamma - 1) alpha + 2).
UniquenessSpec derive_uniqueness_spec(const ProblemParams& params);

/// 2 alpha / q + d / r - (2 alpha - 1 + beta); zero for a consistent spec.
double scaling_defect(const UniquenessSpec& u, const ProblemParams& params);

/// Time exponents that recur in the weighted norms.
double weight_energy(const ProblemParams& params);  // gamma + 1/(2 alpha) - 1/2
double q_uniqueness(const ProblemParams& params);   // 4 alpha / ((2 gamma - 1) alpha + 2)

/// Flat key/value JSON record (d, N, alpha, s, gamma, mu_s, r_s, p,
/// theta_E, beta_u, r_u, q_u).
std::string params_json(const ProblemParams& params, int n);

}  // namespace fracns
