#pragma once

#include <cstdint>
#include <vector>

#include "fracns/spectral.hpp"
#include "fracns/trajectory.hpp"

namespace fracns {

/// e^{-t (-Delta)^alpha} f: c(k) -> e^{-t |k|^{2 alpha}} c(k).
SpectralField heat_flow(const SpectralField& f, double t, double alpha);

/// h(t) = e^{-t(-Delta)^alpha} u0, evaluated exactly at any t >= 0.
class HeatFlow {
public:
  HeatFlow() = default;
  HeatFlow(SpectralField u0, double alpha) : u0_(std::move(u0)), alpha_(alpha), zero_(u0_.is_zero()) {}

  SpectralField operator()(double t) const;
  const SpectralField& data() const { return u0_; }
  double alpha() const { return alpha_; }
  bool is_zero() const { return zero_; }

private:
  SpectralField u0_;
  double alpha_ = 1.0;
  bool zero_ = true;
};

/// h(t_i) = heat_flow(u0, t_i) at each time.
Trajectory heat_trajectory(const SpectralField& u0, const std::vector<double>& times, double alpha);

/// I(t) = int_{t_0}^t e^{-(t-s)(-Delta)^alpha} G(s) ds for G linear in time
/// between the nodes of `forcing`. Per mode, with z = lambda dt:
///
///   I_{n+1} = e^{-z} I_n + dt ((phi1 - phi2) G_n + phi2 G_{n+1}),
///   phi1 = (1 - e^{-z}) / z,  phi2 = (z - 1 + e^{-z}) / z^2,
///
/// so the linear factor is exact and the quadrature second order in dt.
Trajectory duhamel_integrate(const Trajectory& forcing, double alpha);

/// M(f, g)(t) = int_0^t e^{-(t-s)(-Delta)^alpha} B(f(s), g(s)) ds.
Trajectory duhamel_M(const Trajectory& f, const Trajectory& g, double alpha);

/// The two weights (phi1, phi2) above; series expansion for small z.
std::pair<double, double> duhamel_weights(double z);

/// Band-limited random vector forcing F(t, x) with modes |k_i| <= kmax and
/// smooth time dependence, reproducible from (seed, member); identical
/// across grids that contain the modes.
SpectralField random_forcing(const Grid& grid, double t, std::uint64_t seed, std::uint64_t member, int kmax = 3);
Trajectory random_forcing_trajectory(const Grid& grid, const std::vector<double>& times, std::uint64_t seed,
                                     std::uint64_t member, int kmax = 3);

}  // namespace fracns
