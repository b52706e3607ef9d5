#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "fracns/params.hpp"
#include "fracns/spectral.hpp"
#include "fracns/trajectory.hpp"

namespace fracns {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class SpaceKind { Lebesgue, HomSobolev, HomHs };

/// L^r, W^{beta,r} = {f : Lambda^beta f in L^r}, or H^beta (spectral).
struct SpaceNormSpec {
  SpaceKind kind = SpaceKind::Lebesgue;
  double beta = 0.0;
  double r = 2.0;

  static SpaceNormSpec lebesgue(double r) { return {SpaceKind::Lebesgue, 0.0, r}; }
  static SpaceNormSpec sobolev(double beta, double r) { return {SpaceKind::HomSobolev, beta, r}; }
  static SpaceNormSpec hs(double beta) { return {SpaceKind::HomHs, beta, 2.0}; }

  std::string str() const;
};

/// (int |f|^r dx)^{1/r} of the pointwise Euclidean magnitude, by grid
/// quadrature with weights (2 pi / N)^d; r = inf gives the grid maximum.
double lebesgue_norm(const SpectralField& f, double r);

/// ||Lambda^beta f|| in the given space. H^beta uses Parseval on the
/// coefficients; W^{beta,r} applies Lambda^beta spectrally then quadrature.
double space_norm(const SpectralField& f, const SpaceNormSpec& spec);

/// || t^mu ||f(t)||_X ||_{L^m(start, T)}.
struct SpaceTimeNormSpec {
  double mu = 0.0;
  double m = 2.0;
  double T = 1.0;
  SpaceNormSpec inner;

  std::string str() const;
};

/// Weighted time norm of sampled values v_i >= 0 at times t_i, over
/// [t_0, T]. For finite m the integrand t^{mu m} v(t)^m is integrated with
/// v^m linear on each interval and the power weight integrated exactly, so
/// constant-in-time data is exact. m = inf takes the node maximum of
/// t^mu v (t = 0 skipped when mu < 0).
double weighted_time_norm(const std::vector<double>& times, const std::vector<double>& values, double mu, double m,
                          double T);

double spacetime_norm(const Trajectory& traj, const SpaceTimeNormSpec& spec);

/// Per-node spatial norms (cached on the trajectory).
std::vector<double> node_norms(const Trajectory& traj, const SpaceNormSpec& spec);

enum class Composite { Y, X1, X2, X3, X4, XT };

std::string composite_name(Composite c);

/// The constituent spaces of each composite norm for the given exponents:
///
///   Y  = L^{4/(1+2g)}_0 L^p + L^3_{(1+2g)/4} W^{2a/3,p}
///   X1 = L^{4/(1-2g)}_g L^p + L^{4/(1-2g)}_{g+1/(2a)-1/2} W^{1-a,p}
///   X2 = L^{4/(1+2g)}_{mu_s} W^{s+1-a,p}      (L^{4/(1+2g)} L^p when s <= a - 1)
///   X3 = L^{4a/((2g-1)a+2)}_0 W^{1-a,p}
///   X4 = L^inf_{-s/(2a)} L^2 + L^2_{-s/(2a)} H^a
///   XT = L^2_g W^{2a-1,p/2} + L^2_{g+1/(2a)-1/2} W^{a,p/2}
///
/// with a = alpha, g = gamma.
std::vector<SpaceTimeNormSpec> composite_specs(Composite c, const ProblemParams& params, double T);

struct CompositeNorm {
  Composite name = Composite::Y;
  double value = 0.0;
  std::vector<std::pair<SpaceTimeNormSpec, double>> parts;
};

CompositeNorm composite_norm(const Trajectory& traj, Composite c, const ProblemParams& params, double T);

/// Named values collected for a report; `lower_bound` marks grid maxima
/// standing in for essential suprema.
struct NormEntry {
  std::string name;
  double value = 0.0;
  bool lower_bound = false;
};

struct NormReport {
  std::vector<NormEntry> entries;

  void add(std::string name, double value, bool lower_bound = false) {
    entries.push_back({std::move(name), value, lower_bound});
  }
  bool all_finite() const;
  /// Value of the entry with this name; throws when absent.
  double get(const std::string& name) const;
};

/// Shorthand for composite_norm(...).value of Y over [start, T].
double y_norm(const Trajectory& traj, const ProblemParams& params, double T);

}  // namespace fracns
