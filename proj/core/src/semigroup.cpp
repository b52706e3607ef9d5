#include "fracns/semigroup.hpp"

#include <cmath>
#include <numbers>

#include "fracns/bilinear.hpp"
#include "fracns/randomization.hpp"
#include "fracns/rng.hpp"

namespace fracns {

SpectralField heat_flow(const SpectralField& f, double t, double alpha) {
  if (t < 0.0) throw Error("heat flow time must be nonnegative");
  if (t == 0.0) return f;
  SpectralField out = f;
  const Grid& grid = f.grid();
  for (int c = 0; c < f.comps(); ++c) {
    auto comp = out.component(c);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double lam = std::pow(grid.k2(i), alpha);
      comp[i] *= std::exp(-t * lam);
    }
  }
  return out;
}

SpectralField HeatFlow::operator()(double t) const { return heat_flow(u0_, t, alpha_); }

Trajectory heat_trajectory(const SpectralField& u0, const std::vector<double>& times, double alpha) {
  Trajectory out;
  for (double t : times) out.push_back(t, heat_flow(u0, t, alpha));
  return out;
}

std::pair<double, double> duhamel_weights(double z) {
  if (z < 1e-3) {
    const double phi1 = 1.0 - z / 2.0 + z * z / 6.0 - z * z * z / 24.0 + z * z * z * z / 120.0;
    const double phi2 = 0.5 - z / 6.0 + z * z / 24.0 - z * z * z / 120.0 + z * z * z * z / 720.0;
    return {phi1, phi2};
  }
  const double em1 = std::expm1(-z);  // e^{-z} - 1
  return {-em1 / z, (z + em1) / (z * z)};
}

Trajectory duhamel_integrate(const Trajectory& forcing, double alpha) {
  if (forcing.empty()) throw Error("duhamel_integrate: empty forcing");
  const Grid& grid = forcing.grid();
  const int comps = forcing.field(0).comps();
  const std::size_t n = grid.size();

  std::vector<double> lambda(n);
  for (std::size_t i = 0; i < n; ++i) lambda[i] = std::pow(grid.k2(i), alpha);

  Trajectory out;
  SpectralField cur(grid, comps);
  out.push_back(forcing.time(0), cur);
  for (std::size_t step = 0; step + 1 < forcing.size(); ++step) {
    const double dt = forcing.time(step + 1) - forcing.time(step);
    const SpectralField& g0 = forcing.field(step);
    const SpectralField& g1 = forcing.field(step + 1);
    if (g0.comps() != comps || g1.comps() != comps) throw Error("duhamel_integrate: component mismatch");
    for (std::size_t i = 0; i < n; ++i) {
      const double z = lambda[i] * dt;
      const auto [phi1, phi2] = duhamel_weights(z);
      const double decay = std::exp(-z);
      const double wa = dt * (phi1 - phi2);
      const double wb = dt * phi2;
      for (int c = 0; c < comps; ++c) cur.at(c, i) = decay * cur.at(c, i) + wa * g0.at(c, i) + wb * g1.at(c, i);
    }
    out.push_back(forcing.time(step + 1), cur);
  }
  return out;
}

Trajectory duhamel_M(const Trajectory& f, const Trajectory& g, double alpha) {
  if (f.times() != g.times()) throw Error("duhamel_M: trajectories have different time grids");
  Trajectory forcing;
  for (std::size_t i = 0; i < f.size(); ++i) forcing.push_back(f.time(i), bilinear_B(f.field(i), g.field(i)));
  return duhamel_integrate(forcing, alpha);
}

SpectralField random_forcing(const Grid& grid, double t, std::uint64_t seed, std::uint64_t member, int kmax) {
  const int d = grid.dim();
  if (kmax >= grid.n() / 2) throw Error("forcing band exceeds grid");
  SpectralField f = SpectralField::vector(grid);
  const int kz = d == 3 ? kmax : 0;
  for (int k0 = -kmax; k0 <= kmax; ++k0)
    for (int k1 = -kmax; k1 <= kmax; ++k1)
      for (int k2 = -kz; k2 <= kz; ++k2) {
        const Wavevector k{k0, k1, k2};
        if (classify_wavevector(k, d) != WaveClass::Plus) continue;
        const double kmag = std::sqrt(static_cast<double>(k0 * k0 + k1 * k1 + k2 * k2));
        const std::uint64_t mode = static_cast<std::uint64_t>((k0 + 64) * 16384 + (k1 + 64) * 128 + (k2 + 64));
        for (int c = 0; c < d; ++c) {
          CounterStream rng(seed, stream_key(member, mode, static_cast<std::uint64_t>(c)));
          const double re = rng.normal() / kmag;
          const double im = rng.normal() / kmag;
          const double omega = 4.0 * std::numbers::pi * rng.uniform();
          const double phase = 2.0 * std::numbers::pi * rng.uniform();
          const Complex v = Complex(re, im) * (0.5 * std::cos(omega * t + phase));
          f.at(c, grid.index_of(k)) = v;
          f.at(c, grid.index_of({-k0, -k1, -k2})) = std::conj(v);
        }
      }
  return f;
}

Trajectory random_forcing_trajectory(const Grid& grid, const std::vector<double>& times, std::uint64_t seed,
                                     std::uint64_t member, int kmax) {
  Trajectory out;
  for (double t : times) out.push_back(t, random_forcing(grid, t, seed, member, kmax));
  return out;
}

}  // namespace fracns
