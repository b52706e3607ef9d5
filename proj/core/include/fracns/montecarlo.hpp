#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "fracns/params.hpp"
#include "fracns/randomization.hpp"
#include "fracns/rng.hpp"
#include "fracns/verifiers.hpp"

namespace fracns {

/// Runs fn(i) for i in [0, n) on `threads` workers (0 = hardware
/// concurrency) with static chunking. fn must only write to slot i.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

/// Pairwise summation in a fixed order.
double pairwise_sum(std::span<const double> x);

/// (E|Z|^r)^{1/r} for a standard Gaussian Z.
double gaussian_abs_moment_root(double r);

struct KhinchinOptions {
  std::size_t samples = 10000;
  double r = 4.0;
  std::uint64_t seed = 1;
  unsigned threads = 0;
};

/// ratio = (mean |sum_j c_j g_j|^r)^{1/r} / |c|_2 with a delta-method
/// standard error. Where the population ratio has a closed form (any
/// Gaussian sum, a single Rademacher term) the verdict is |ratio - theory|
/// <= 3 SE; otherwise the ratio must be finite and not exceed the Gaussian
/// value by more than 3 SE.
VerifierReport khinchin_check(std::span<const double> coeffs, const DistributionSpec& dist, const KhinchinOptions& opts);

struct CoefficientFamily {
  std::string name;
  std::vector<double> coeffs;
};

/// flat, geometric, spike, two_scale, random; n coefficients each.
std::vector<CoefficientFamily> coefficient_families(std::size_t n, std::uint64_t seed);

struct KhinchinSuite {
  std::vector<VerifierReport> reports;
  /// max ratio / min ratio across families.
  double spread = 0.0;
  bool pass = false;
};

/// khinchin_check over every family; passes when each does and the spread
/// stays within the Gaussian value.
KhinchinSuite khinchin_suite(const DistributionSpec& dist, const KhinchinOptions& opts, std::size_t n_coeffs = 64);

/// Weighted space-time norm ||t^rho h||_{L^a(0,T) W^{eta,p}} of the free
/// evolution of the randomized data.
struct HeatNormSpec {
  double rho = 0.0;
  double eta = 0.0;
  double a = 4.0;  // kInf allowed
  double p = 2.0;
  double T = 1.0;
  int n_times = 32;

  std::string str() const;
};

/// Throws ParamError naming the failed inequality unless
/// eta - 2 alpha rho - 2 alpha / a <= s or eta - 2 alpha rho = s.
void validate_heat_norm(const HeatNormSpec& spec, const ProblemParams& params);

struct EnsembleStats {
  std::vector<double> samples;
  /// (mean X^{r_s})^{1/r_s} and the same at the integer order ceil(r_s).
  double moment_rs = 0.0;
  double moment_ceil = 0.0;
  double data_norm = 0.0;  // ||u0||_{H^s} of the deterministic profile
  double ratio = 0.0;      // moment_rs / data_norm
};

EnsembleStats heatflow_norm_ensemble(const RandomizationPlan& plan, const HeatNormSpec& spec,
                                     const ProblemParams& params, std::size_t n_samples, unsigned threads = 0);

struct SeProfileRow {
  double delta = 0.0;
  int cutoff = 0;
  double T = 1.0;
  EnsembleStats stats;
};

/// The ensemble ratio moment_rs / ||u0||_{H^s} over the spectral profiles
/// delta in {0.1, 0.5, 1} and cutoffs {cutoff, ceil(cutoff/2)} on spec.T,
/// plus the first profile again on the horizon 4 T. Passes when every ratio
/// is finite and max / min <= 2 on the base horizon; `fitted` is that
/// spread, `ratio` the horizon sensitivity (ratio at 4 T / ratio at T).
struct SeStudy {
  std::vector<SeProfileRow> rows;
  VerifierReport report;
};

SeStudy se_profile_study(const Grid& grid, const ProblemParams& params, const DistributionSpec& dist,
                         std::uint64_t seed, int cutoff, const HeatNormSpec& spec, std::size_t n_samples,
                         unsigned threads = 0);

struct TailPoint {
  double lambda = 0.0;
  std::size_t count = 0;
  double exceedance = 0.0;
  double bound = 0.0;  // anchored c / lambda^{r_s}; NaN below the anchor
};

struct TailReport {
  VerifierReport report;
  std::vector<TailPoint> points;
};

/// Empirical exceedance on lambda_k = 2^k. Passes when the tail above the
/// median anchor stays below c / lambda^{r_s} within 3 binomial standard
/// errors, or when the fitted slope is at most -r_s + 0.5. Throws on
/// all-zero or non-finite samples.
TailReport tail_check(std::span<const double> samples, double r_s);

}  // namespace fracns
