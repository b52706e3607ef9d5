#include "fracns/bilinear.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fracns/field_io.hpp"
#include "fracns/norms.hpp"

namespace fracns {

namespace {

void require_div_free(const SpectralField& f) {
  if (!f.is_vector()) throw Error("bilinear form needs vector fields");
  const double res = f.divergence_residual();
  if (res > kDivergenceThreshold)
    throw Error("first argument is not divergence-free (modal residual " + fmt_num(res) + ")");
}

}  // namespace

double trilinear_b(const SpectralField& f, const SpectralField& g, const SpectralField& h) {
  require_div_free(f);
  require_same_grid(f, g, "trilinear_b");
  require_same_grid(f, h, "trilinear_b");
  return inner_product(advect(f, g), h);
}

SpectralField bilinear_B(const SpectralField& f, const SpectralField& g) {
  require_div_free(f);
  require_same_grid(f, g, "bilinear_B");
  return leray_project(advect(f, g));
}

double VSpaceSpec::rho() const { return std::max(2.0, d / (2.0 * alpha) + margin); }

double v_norm(const SpectralField& h, const VSpaceSpec& spec) {
  const int d = h.grid().dim();
  const std::size_t n = h.grid().size();
  std::vector<double> frob2(n, 0.0);
  for (int axis = 0; axis < d; ++axis) {
    const auto dh = to_physical(partial_derivative(h, axis));
    for (const auto& c : dh)
      for (std::size_t i = 0; i < n; ++i) frob2[i] += c[i] * c[i];
  }
  const double r = spec.rho();
  double sum = 0.0;
  for (double v : frob2) sum += std::pow(v, 0.5 * r);
  return std::pow(sum * h.grid().cell_volume(), 1.0 / r);
}

VDualBound vdual_bound(const SpectralField& f, const SpectralField& g, const VSpaceSpec& spec) {
  VDualBound out;
  const double a = spec.alpha;
  out.bound = space_norm(f, SpaceNormSpec::hs(a)) * space_norm(g, SpaceNormSpec::hs(a));
  const int d = spec.d;
  out.lebesgue_exponent = d > 2.0 * a ? std::min(4.0, 2.0 * d / (d - 2.0 * a)) : 4.0;
  out.lebesgue = lebesgue_norm(f, out.lebesgue_exponent) * lebesgue_norm(g, out.lebesgue_exponent);
  return out;
}

}  // namespace fracns
