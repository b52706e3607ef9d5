#pragma once

#include <string>
#include <vector>

#include "fracns/norms.hpp"
#include "fracns/params.hpp"
#include "fracns/trajectory.hpp"

namespace fracns {

struct TauSelection {
  double tau = 1.0;
  std::size_t index = 0;
  double y_norm = 0.0;
};

/// Largest node tau of h's grid with ||h||_{Y_tau} <= threshold, by bisection
/// (the prefix norms are nondecreasing in tau).
TauSelection select_tau(const Trajectory& h, const ProblemParams& params, double threshold);

/// K(w) = -M(w,w) - M(w,h) - M(h,w) - M(h,h), evaluated as -M(w+h, w+h).
Trajectory apply_K(const Trajectory& w, const Trajectory& h, double alpha);

/// Time grid for the small-time problem on [0, tau]: graded (exponent rho)
/// on [0, tau/2] with max(8, ceil(rho (tau/2) / dt)) steps, then uniform
/// steps of length (tau/2) / ceil((tau/2) / dt) up to tau.
std::vector<double> picard_times(double tau, double dt, double rho = 2.0);

/// Length of the uniform steps that picard_times uses on [tau/2, tau].
double picard_uniform_step(double tau, double dt);

struct PicardOptions {
  double tol = 1e-8;
  int max_iter = 30;
};

struct PicardState {
  int iterations = 0;
  /// ||w_{n+1} - w_n||_{Y_tau} per iteration.
  std::vector<double> residuals;
  /// residuals[n] / residuals[n-1]; ratios[0] is undefined and stored as NaN.
  std::vector<double> ratios;
  double lambda = 0.0;     // ||h||_{Y_tau}
  double w_norm = 0.0;     // ||w_1||_{Y_tau}
  double c_emp = 0.0;      // ||M(h,h)||_{Y_tau} / lambda^2
  double ball_radius = 0.0;  // 2 c_emp lambda^2
  bool in_ball = true;
  bool converged = false;
};

class PicardError : public Error {
public:
  PicardError(const std::string& what, PicardState state) : Error(what), state_(std::move(state)) {}
  const PicardState& state() const { return state_; }

private:
  PicardState state_;
};

struct PicardResult {
  Trajectory w;
  PicardState state;
};

/// Iterates w_{n+1} = K(w_n) from w_0 = 0 on h's time grid until
/// ||w_{n+1} - w_n||_Y <= tol max(1, ||w_{n+1}||_Y). Throws PicardError when
/// max_iter is exceeded, a residual is not finite, or the residual grows
/// after two iterations have contracted (ratio < 0.9).
PicardResult picard_solve(const Trajectory& h, const ProblemParams& params, const PicardOptions& opts = {});

/// Composite norms of w_1 plus the discrete weighted-continuity checks:
///
///   cont_mu_s   max_i || t_{i+1}^{mu_s} w_{i+1} - t_i^{mu_s} w_i ||_{H^{2 alpha (mu_s - gamma) + alpha - 1}}
///   cont_energy same with weight t^{gamma + 1/(2 alpha) - 1/2} in L^2
///   hs_first    || t_1^{mu_s} w(t_1) ||_{H^s} at the first positive node
NormReport regularity_report(const Trajectory& w, const ProblemParams& params);

}  // namespace fracns
