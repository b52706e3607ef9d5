#pragma once

#include <vector>

#include "fracns/params.hpp"
#include "fracns/semigroup.hpp"
#include "fracns/trajectory.hpp"
#include "fracns/verifiers.hpp"

namespace fracns {

/// Advective CFL number dt sum_i max|u_i| / (2 pi / N).
double cfl_number(const SpectralField& u, double dt);

/// One step of the integrating-factor Heun scheme for
///
///   w' + (-Delta)^alpha w = N(w, t),  N(w, t) = -B(w + h(t), w + h(t)),
///
///   w*      = E (w_n + dt N(w_n, t_n))
///   w_{n+1} = E w_n + dt/2 (E N(w_n, t_n) + N(w*, t_{n+1})),  E = e^{-dt A}.
///
/// h is evaluated exactly. Throws when the CFL number of w + h(t) exceeds 1.
SpectralField galerkin_step(const SpectralField& w, const HeatFlow& h, double t, double dt, double alpha);

/// Nodes t0, t0 + step, ... ending exactly at T (last step shortened).
std::vector<double> galerkin_times(double t0, double T, double step);

/// Steps w0 (at times[0]) through every node of `times`.
Trajectory galerkin_run(const SpectralField& w0, const HeatFlow& h, const std::vector<double>& times, double alpha);

struct LedgerRow {
  double t = 0.0;
  double l2sq = 0.0;     // ||w||^2
  double diss = 0.0;     // ||Lambda^alpha w||^2
  double work_ww = 0.0;  // <B(w,w), h>
  double work_hw = 0.0;  // <B(h,w), h>
  double e_w = 0.0;      // sup ||w||^2 + int ||Lambda^alpha w||^2
  double diss_int = 0.0;  // int of diss over the preceding step
  double work_int = 0.0;  // int of the work over the preceding step
  double residual = 0.0;  // 1/2 (l2sq - l2sq_prev) + diss_int - work_int
};

/// Discrete audit of 1/2 d/dt ||w||^2 + ||Lambda^alpha w||^2 = <B(w,w),h> + <B(h,w),h>.
///
/// The dissipation over a step is integrated mode by mode with the
/// logarithmic mean of the endpoint values, exact for exponential decay;
/// the work terms with the trapezoid rule.
struct EnergyLedger {
  std::vector<LedgerRow> rows;
  /// max_n |residual_n| / dt_n.
  double max_residual_rate = 0.0;
  bool strictly_decreasing = true;
};

EnergyLedger energy_audit(const Trajectory& w, const HeatFlow& h, double alpha);

/// Data of the Gronwall bound E_w(t) <= C (A + F(t)) exp(C G(t)):
///   A = ||w(t_0)||^2,
///   F(t) = int_{t_0}^t ||Lambda^{1-alpha} h||_p^2 ||h||_p^2,
///   G(t) = int_{t_0}^t ||Lambda^{1-alpha} h||_p^q,  q = 4 alpha / ((2 gamma - 1) alpha + 2).
struct GronwallTerms {
  double a = 0.0;
  std::vector<double> t, f, g;
};

GronwallTerms gronwall_terms(const EnergyLedger& ledger, const HeatFlow& h, const ProblemParams& params);

/// Smallest C with E_w(t) <= C (A + F(t)) exp(C G(t)) for every ledger time.
double gronwall_needed_constant(const EnergyLedger& ledger, const GronwallTerms& terms);

/// Checks E_w(t) <= RHS(t) with C = c_fit; ratio is the smallest relative
/// margin (RHS - E_w) / RHS.
VerifierReport gronwall_check(const EnergyLedger& ledger, const GronwallTerms& terms, double c_fit);

/// Upper bound on ||d_t w||_{L^1 V'} from d_t w = -(-Delta)^alpha w - B(u,u),
/// u = w + h. When rho = 2 the dual of V is H^{-1}, so the terms are
/// ||Lambda^{2 alpha - 1} w||_{L^2} and ||Lambda^{-1} B(u,u)||_{L^2}.
struct DualBudget {
  double linear = 0.0;
  double nonlinear = 0.0;
  double budget = 0.0;
  /// Same integral with ||B(u,u)||_{V'} replaced by ||u||^2_{L^m}.
  double lebesgue_bound = 0.0;
  /// int ||Lambda^alpha w||^2.
  double dissipation = 0.0;
  /// budget / (1 + dissipation): the constant the shape bound needs.
  double c_needed = 0.0;
  bool exact_dual = true;
};

DualBudget dual_norm_budget(const Trajectory& w, const HeatFlow& h, const ProblemParams& params, double margin = 0.05);

}  // namespace fracns
