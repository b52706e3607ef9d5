#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fracns/rng.hpp"
#include "fracns/spectral.hpp"

namespace fracns {

enum class WaveClass { Plus, Minus, Zero };

/// Lexicographic sign split: k is Plus when its first nonzero entry is
/// positive, Minus when negative, Zero for k = 0.
WaveClass classify_wavevector(const Wavevector& k, int d);

using Vec3 = std::array<double, 3>;

/// d-1 orthonormal vectors spanning the orthogonal complement of k.
///
/// Built from the Householder reflection sending the canonical axis most
/// aligned with k onto k/|k|: the images of the other axes, each flipped so
/// that its first nonzero entry is positive. k and -k share a basis.
std::vector<Vec3> perp_basis(const Wavevector& k, int d);

struct PlanMode {
  Wavevector k{};
  WaveClass cls = WaveClass::Plus;
  std::vector<Vec3> basis;
  /// Deterministic amplitudes u_{0k}^j, j = 1..d-1.
  std::vector<double> u0;
};

/// Randomized divergence-free data sum_j sum_k u_{0k}^j e_k(x) e_{k,j} g_k^j,
/// with e_k = cos(k.x) for Plus modes and sin(k.x) for Minus modes.
struct RandomizationPlan {
  Grid grid;
  std::vector<PlanMode> modes;
  DistributionSpec dist;
  std::uint64_t seed = 0;

  std::size_t coefficient_count() const;
};

/// All k in Z^d_* with max_i |k_i| <= cutoff; amplitude(k, j) gives u_{0k}^j.
RandomizationPlan make_plan(const Grid& grid, int cutoff, const std::function<double(const Wavevector&, int)>& amplitude,
                            DistributionSpec dist = {}, std::uint64_t seed = 0);

/// Plan with a single nonzero coefficient.
RandomizationPlan single_mode_plan(const Grid& grid, const Wavevector& k, int j, double amplitude,
                                   DistributionSpec dist = {}, std::uint64_t seed = 0);

/// The Taylor-Green field (sin x1 cos x2, -cos x1 sin x2) scaled by
/// `amplitude`, expressed in the randomization basis (d = 2 only).
RandomizationPlan taylor_green_plan(const Grid& grid, double amplitude = 1.0);

struct HsProfile {
  RandomizationPlan plan;
  std::vector<std::string> warnings;
};

/// u_{0k}^j = amplitude |k|^{-s - d/2 - delta} / sqrt(d-1): data in H^s with a
/// tail governed by delta. delta <= 0 gives a divergent H^s sum as the cutoff
/// grows and produces a warning.
HsProfile hs_profile_data(const Grid& grid, double s, int cutoff, double delta, double amplitude = 1.0);

/// One multiplier per (mode, j) in plan order, for ensemble member `sample`.
std::vector<double> draw_multipliers(const RandomizationPlan& plan, std::uint64_t sample);

/// Synthesize u_0^omega. With override_g the multipliers are taken from it
/// (one per (mode, j) in plan order); otherwise they are drawn for `sample`.
SpectralField synthesize(const RandomizationPlan& plan, std::optional<std::span<const double>> override_g = std::nullopt,
                         std::uint64_t sample = 0);

/// Deterministic data (all g = 1).
SpectralField deterministic_data(const RandomizationPlan& plan);

/// Real-basis amplitudes of f against each (mode, j) of the plan: the
/// inverse of synthesize for fields in the plan's span.
std::vector<double> real_basis_amplitudes(const SpectralField& f, const RandomizationPlan& plan);

/// ||u_0||_{H^s} of the deterministic data, (sum (|k|^s u)^2 (2 pi)^d / 2)^{1/2}.
double plan_hs_norm(const RandomizationPlan& plan, double s);

/// Coefficient vector c_k^j = |k|^s u_{0k}^j sqrt((2 pi)^d / 2) in plan order.
std::vector<double> weighted_coefficients(const RandomizationPlan& plan, double s);

/// Text records "k j u0 e-basis-components", one per (mode, j).
void write_plan(std::ostream& os, const RandomizationPlan& plan);

/// Real vector field with independent standard complex Gaussian
/// coefficients on max_i |k_i| <= kmax (kmax < N/2, so no Nyquist modes),
/// zero mean, optionally Leray-projected.
SpectralField random_band_field(const Grid& grid, std::uint64_t seed, std::uint64_t member, int kmax,
                                bool divergence_free);

}  // namespace fracns
