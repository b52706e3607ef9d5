#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "fracns/spectral.hpp"
#include "fracns/trajectory.hpp"

namespace fracns {

/// Outcome of one numeric check of an inequality or identity.
///
/// Slope checks compare `fitted` with `theoretical` within `tolerance`;
/// boundedness checks report the largest ratio observed in `ratio` and pass
/// when it stays bounded under refinement.
struct VerifierReport {
  std::string lemma;
  std::string params;
  double fitted = std::numeric_limits<double>::quiet_NaN();
  double theoretical = std::numeric_limits<double>::quiet_NaN();
  double ratio = std::numeric_limits<double>::quiet_NaN();
  double tolerance = 0.0;
  bool pass = false;
  std::vector<std::string> notes;

  static std::vector<std::string> csv_header();
  std::vector<std::string> csv_row() const;
};

/// Least-squares slope of log y against log x.
double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Relative growth rule for boundedness verdicts: every successive ratio
/// may grow by at most `growth` (5%).
bool bounded_under_refinement(const std::vector<double>& ratios, double growth = 0.05);

enum class SmoothingData { Auto, Flat, Generic };

struct SmoothingOptions {
  double t_min = 1e-3;
  double t_max = 1e-1;
  int n_times = 16;
  /// Zero selects 0.1 (0.05 for a predicted slope of 0).
  double tolerance = 0.0;
  SmoothingData data = SmoothingData::Auto;
};

/// Fits the decay exponent of
///
///   R(t) = max_m ||Lambda^nu e^{-t(-Delta)^alpha} phi_m||_{L^p} / ||phi_m||_{L^q},
///
/// phi_m the low-pass truncation of phi to |k| <= m, against
/// -nu/(2 alpha) - (d/(2 alpha))(1/q - 1/p). Flat-spectrum phi must match
/// the prediction; generic phi only needs a slope no steeper than it;
/// single-shell phi has no algebraic decay and the slope check is skipped.
VerifierReport verify_smoothing(const SpectralField& phi, double nu, double q, double p_out, double alpha,
                                const SmoothingOptions& opts = {});

/// Flat-spectrum scalar test data: c(k) = 1 for 0 < |k| <= cutoff.
SpectralField flat_spectrum(const Grid& grid, double cutoff);

/// A real signal on [a, b] sampled at uniform nodes, zero outside, linear
/// between nodes.
struct TimeSignal {
  double a = 0.0;
  double b = 1.0;
  std::vector<double> values;
};

TimeSignal sample_signal(const std::function<double(double)>& f, double a, double b, int intervals);

/// (I_tau f)(t) = int f(s) |t - s|^{-tau} ds at the points t, with each
/// cell integrated exactly against the kernel.
std::vector<double> riesz_potential(const TimeSignal& f, double tau, const std::vector<double>& t);

/// ||I_tau f||_{L^q(R)} / ||f||_{L^p(R)} with the far field of I_tau f
/// added analytically.
double time_hls_ratio(const TimeSignal& f, double tau, double p, double q);

/// Sup of the ratio over a family of signals on [0, 1], at `base` and
/// doubled resolutions; bounded when growth per doubling stays within 5%.
VerifierReport verify_time_hls(const std::vector<std::function<double(double)>>& family, double tau, double p,
                               double q, int base = 256, int refinements = 3);

/// The default signal family: indicator, tent, smooth bump, and random
/// piecewise-smooth signals.
std::vector<std::function<double(double)>> default_signal_family(std::uint64_t seed = 7);

/// Forcing generator (grid, times, member) used by the operator checks.
using ForcingFamily = std::function<Trajectory(const Grid&, const std::vector<double>&, std::uint64_t member)>;

ForcingFamily random_forcing_family(std::uint64_t seed, int kmax = 3);

struct OperatorSweep {
  int d = 2;
  std::vector<int> grid_sizes{16, 32};
  /// Time intervals on the coarsest grid; doubled with each grid refinement.
  int time_intervals = 64;
  double T = 1.0;
  int members = 20;
};

/// F -> int_0^t e^{-(t-s)A} Lambda^{2 alpha} F ds on L^q_T L^r.
Trajectory maximal_regularity_operator(const Trajectory& F, double alpha);
/// NF(t) = t^{zeta/(2 alpha) - 1} e^{-(t/2)A} Lambda^{zeta - 2 alpha} J(t/2),
/// J the maximal regularity operator; output on every other node.
Trajectory corollary_n_operator(const Trajectory& F, double zeta, double alpha);
/// t^{(zeta-alpha)/(2 alpha)} int_0^{t/2} e^{-(t-s)A} Lambda^zeta F ds on every other node.
Trajectory early_history_operator(const Trajectory& F, double zeta, double alpha);
/// t^mu int_{t/2}^t e^{-(t-s)A} Lambda^zeta F ds on every other node.
Trajectory late_history_operator(const Trajectory& F, double zeta, double mu, double alpha);

/// Operator norm surrogates over a forcing family and grid
/// refinements. variant_n selects the N operator with exponent zeta.
VerifierReport verify_maximal_regularity(const ForcingFamily& family, double q, double r, double alpha,
                                         const OperatorSweep& sweep = {}, bool variant_n = false, double zeta = 0.0);

/// Both split history operators: early (L^2_T L^2 -> L^inf_T L^2) and late
/// (L^2_{mu;T} H^{zeta-alpha} -> L^inf_T L^2); the reported ratio is the
/// larger of the two.
VerifierReport verify_history_operators(const ForcingFamily& family, double zeta, double mu, double alpha,
                                        const OperatorSweep& sweep = {});

}  // namespace fracns
