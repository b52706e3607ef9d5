#pragma once

#include <cstdint>
#include <vector>

#include "fracns/norms.hpp"
#include "fracns/params.hpp"
#include "fracns/trajectory.hpp"
#include "fracns/verifiers.hpp"

namespace fracns {

struct OverlapReport {
  std::vector<double> times;
  /// ||w1(t) - w2(t)||_{L^2} on the shared nodes of [tau/2, tau].
  std::vector<double> mismatch;
  double max_mismatch = 0.0;
  double tolerance = 1e-5;
  /// max_mismatch / tolerance.
  double ratio = 0.0;
};

struct GlueResult {
  Trajectory w;
  OverlapReport overlap;
};

/// w = w1 on [0, tau], w2 on (tau, T]. w2 must start at tau/2 on nodes that
/// coincide with w1's. Throws when the overlap mismatch exceeds 10 x tolerance.
GlueResult glue_solutions(const Trajectory& w1, const Trajectory& w2, double tolerance = 1e-5);

/// Discrete weak-strong check on a common window [t_0, t_end]: with
/// v = v1 - v2 and g = ||v1||^q_{W^{beta,r}} + ||psi||^q_{W^{beta,r}},
/// ||v(t)||^2 <= ||v(t_0)||^2 exp(C int g). `fitted` is the smallest C that
/// works; when v(t_0) = 0 the check instead requires ||v|| to stay below
/// noise_floor. Verdict against c_fit.
VerifierReport weak_strong_residual(const Trajectory& v1, const Trajectory& v2, const Trajectory& psi,
                                    const UniquenessSpec& uspec, double c_fit, double noise_floor = 1e-10);

struct AssembledSolution {
  Trajectory u;
  NormReport certificates;
};

/// u = h + w with certificate norms of w:
///
///   weighted_linf_l2  sup (1 ^ t)^{e} ||w||_{L^2},  e = gamma + 1/(2 alpha) - 1/2
///   l2_h_alpha        ||w||_{L^2 H^alpha}
///   weighted_l2_h_alpha  same with the weight (1 ^ t)^{e}
///   cont_mu_s         discrete continuity modulus of t^{mu_s} w in H^{2 alpha (mu_s - gamma) + alpha - 1}
AssembledSolution assemble_u(const Trajectory& h, const Trajectory& w, const ProblemParams& params);

/// Band-limited divergence-free test function with unit L^2 norm.
SpectralField random_test_function(const Grid& grid, std::uint64_t seed, std::uint64_t member, int kmax = 4);

struct WeakFormResidual {
  double residual = 0.0;  // max over test functions of |residual| / scale
  double scale = 0.0;
  int tests = 0;
};

/// For each test function phi,
///
///   <u(t2) - u(t1), phi> + int <Lambda^alpha u, Lambda^alpha phi> + int <B(u,u), phi>
///
/// over [t1, t2] (trapezoid in time), relative to the sum of the absolute
/// sizes of the three terms.
WeakFormResidual weak_form_residual(const Trajectory& u, double alpha, double t1, double t2, int tests = 50,
                                    std::uint64_t seed = 11);

struct DecayFit {
  /// Least-squares rate r in ||u(t)|| ~ C e^{-r t}.
  double rate = 0.0;
  std::vector<double> t, l2;
};

DecayFit fit_decay(const Trajectory& u);

}  // namespace fracns
