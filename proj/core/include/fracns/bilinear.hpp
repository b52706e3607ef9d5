#pragma once

#include "fracns/spectral.hpp"

namespace fracns {

/// Modal divergence residual above which b and B refuse their first slot.
inline constexpr double kDivergenceThreshold = 1e-10;

/// b(f, g, h) = int sum_{j,k} f_j (d_j g_k) h_k dx, with (f . grad) g
/// formed on the 3/2-padded grid. f must be divergence-free.
double trilinear_b(const SpectralField& f, const SpectralField& g, const SpectralField& h);

/// B(f, g) = P (f . grad) g. f must be divergence-free.
SpectralField bilinear_B(const SpectralField& f, const SpectralField& g);

/// Test space V = {w in W^{1,rho} : div w = 0}, rho = max(2, d/(2 alpha) + margin).
struct VSpaceSpec {
  int d = 2;
  double alpha = 1.0;
  double margin = 0.05;

  double rho() const;
};

/// ||grad h||_{L^rho} with |grad h| the Frobenius norm of the Jacobian.
double v_norm(const SpectralField& h, const VSpaceSpec& spec);

struct VDualBound {
  /// ||f||_{H^alpha} ||g||_{H^alpha}, the certified bound on ||B(f,g)||_{V'}.
  double bound = 0.0;
  /// ||f||_{L^m} ||g||_{L^m}, m = min(4, 2d/(d - 2 alpha)), an intermediate.
  double lebesgue = 0.0;
  double lebesgue_exponent = 4.0;
};

VDualBound vdual_bound(const SpectralField& f, const SpectralField& g, const VSpaceSpec& spec);

}  // namespace fracns
