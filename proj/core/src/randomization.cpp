#include "fracns/randomization.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "fracns/field_io.hpp"

namespace fracns {

namespace {

std::uint64_t mode_key(const Wavevector& k) {
  auto enc = [](int v) { return static_cast<std::uint64_t>(v + 4096); };
  return (enc(k[0]) << 26) | (enc(k[1]) << 13) | enc(k[2]);
}

Wavevector negate(const Wavevector& k) { return {-k[0], -k[1], -k[2]}; }

}  // namespace

WaveClass classify_wavevector(const Wavevector& k, int d) {
  for (int i = 0; i < d; ++i) {
    if (k[i] > 0) return WaveClass::Plus;
    if (k[i] < 0) return WaveClass::Minus;
  }
  return WaveClass::Zero;
}

std::vector<Vec3> perp_basis(const Wavevector& kin, int d) {
  if (classify_wavevector(kin, d) == WaveClass::Zero) throw std::invalid_argument("perp_basis: k must be nonzero");
  const Wavevector k = classify_wavevector(kin, d) == WaveClass::Minus ? negate(kin) : kin;

  double norm = 0.0;
  for (int i = 0; i < d; ++i) norm += static_cast<double>(k[i]) * k[i];
  norm = std::sqrt(norm);
  Vec3 n{0, 0, 0};
  int axis = 0;
  for (int i = 0; i < d; ++i) {
    n[i] = k[i] / norm;
    if (std::abs(n[i]) > std::abs(n[axis])) axis = i;
  }

  // v = e_axis - n; H = I - 2 v v^T / (v.v) maps e_axis to n.
  Vec3 v = n;
  for (int i = 0; i < d; ++i) v[i] = -v[i];
  v[axis] += 1.0;
  double vv = 0.0;
  for (int i = 0; i < d; ++i) vv += v[i] * v[i];

  std::vector<Vec3> basis;
  for (int e = 0; e < d; ++e) {
    if (e == axis) continue;
    Vec3 img{0, 0, 0};
    img[e] = 1.0;
    if (vv > 0.0) {
      const double scale = 2.0 * v[e] / vv;
      for (int i = 0; i < d; ++i) img[i] -= scale * v[i];
    }
    for (int i = 0; i < d; ++i) {
      if (std::abs(img[i]) > 1e-15) {
        if (img[i] < 0.0)
          for (auto& x : img) x = -x;
        break;
      }
    }
    for (int i = 0; i < d; ++i)
      if (img[i] == 0.0) img[i] = 0.0;  // drop negative zeros
    basis.push_back(img);
  }
  return basis;
}

std::size_t RandomizationPlan::coefficient_count() const {
  std::size_t n = 0;
  for (const auto& m : modes) n += m.u0.size();
  return n;
}

RandomizationPlan make_plan(const Grid& grid, int cutoff, const std::function<double(const Wavevector&, int)>& amplitude,
                            DistributionSpec dist, std::uint64_t seed) {
  const int d = grid.dim();
  if (cutoff < 1 || cutoff >= grid.n() / 2) throw std::invalid_argument("plan cutoff must lie in [1, N/2)");
  RandomizationPlan plan;
  plan.grid = grid;
  plan.dist = dist;
  plan.seed = seed;
  const int kz_range = d == 3 ? cutoff : 0;
  for (int k0 = -cutoff; k0 <= cutoff; ++k0)
    for (int k1 = -cutoff; k1 <= cutoff; ++k1)
      for (int k2 = -kz_range; k2 <= kz_range; ++k2) {
        Wavevector k{k0, k1, k2};
        const auto cls = classify_wavevector(k, d);
        if (cls == WaveClass::Zero) continue;
        PlanMode m;
        m.k = k;
        m.cls = cls;
        m.basis = perp_basis(k, d);
        for (int j = 0; j < d - 1; ++j) m.u0.push_back(amplitude(k, j));
        plan.modes.push_back(std::move(m));
      }
  return plan;
}

RandomizationPlan single_mode_plan(const Grid& grid, const Wavevector& k, int j, double amplitude, DistributionSpec dist,
                                   std::uint64_t seed) {
  int cutoff = 1;
  for (int i = 0; i < grid.dim(); ++i) cutoff = std::max(cutoff, std::abs(k[i]));
  auto plan = make_plan(
      grid, cutoff, [&](const Wavevector& q, int jj) { return (q == k && jj == j) ? amplitude : 0.0; }, dist, seed);
  std::erase_if(plan.modes, [&](const PlanMode& m) { return m.k != k; });
  return plan;
}

RandomizationPlan taylor_green_plan(const Grid& grid, double amplitude) {
  if (grid.dim() != 2) throw std::invalid_argument("Taylor-Green data is two-dimensional");
  // u = sin(x1 + x2)(1,-1)/2 + sin(x1 - x2)(1,1)/2; both carried by Minus modes.
  const double c = -amplitude / std::sqrt(2.0);
  auto plan = make_plan(grid, 1, [&](const Wavevector& k, int) {
    if ((k[0] == -1 && k[1] == -1) || (k[0] == -1 && k[1] == 1)) return c;
    return 0.0;
  });
  std::erase_if(plan.modes, [](const PlanMode& m) {
    return !((m.k[0] == -1 && m.k[1] == -1) || (m.k[0] == -1 && m.k[1] == 1));
  });
  plan.dist.family = Family::Rademacher;
  return plan;
}

HsProfile hs_profile_data(const Grid& grid, double s, int cutoff, double delta, double amplitude) {
  const int d = grid.dim();
  const double expo = -s - d / 2.0 - delta;
  HsProfile out;
  out.plan = make_plan(grid, cutoff, [&](const Wavevector& k, int) {
    double k2 = 0.0;
    for (int i = 0; i < d; ++i) k2 += static_cast<double>(k[i]) * k[i];
    return amplitude * std::pow(std::sqrt(k2), expo) / std::sqrt(d - 1.0);
  });
  if (delta <= 0.0)
    out.warnings.push_back("spectral slope delta = " + fmt_num(delta) +
                           " <= 0: the H^s sum diverges as the cutoff grows");
  return out;
}

std::vector<double> draw_multipliers(const RandomizationPlan& plan, std::uint64_t sample) {
  std::vector<double> g;
  g.reserve(plan.coefficient_count());
  for (const auto& m : plan.modes) {
    for (std::size_t j = 0; j < m.u0.size(); ++j) {
      CounterStream rng(plan.seed, stream_key(sample, mode_key(m.k), j));
      g.push_back(plan.dist.draw(rng));
    }
  }
  return g;
}

SpectralField synthesize(const RandomizationPlan& plan, std::optional<std::span<const double>> override_g,
                         std::uint64_t sample) {
  const auto& grid = plan.grid;
  const int d = grid.dim();
  std::vector<double> drawn;
  std::span<const double> g;
  if (override_g) {
    if (override_g->size() != plan.coefficient_count())
      throw std::invalid_argument("override multiplier count does not match plan");
    g = *override_g;
  } else {
    drawn = draw_multipliers(plan, sample);
    g = drawn;
  }

  SpectralField f = SpectralField::vector(grid);
  std::size_t pos = 0;
  for (const auto& m : plan.modes) {
    Vec3 a{0, 0, 0};
    for (std::size_t j = 0; j < m.u0.size(); ++j) {
      const double amp = m.u0[j] * g[pos++];
      for (int i = 0; i < d; ++i) a[i] += amp * m.basis[j][i];
    }
    const std::size_t ip = grid.index_of(m.k);
    const std::size_t im = grid.index_of(negate(m.k));
    for (int i = 0; i < d; ++i) {
      if (m.cls == WaveClass::Plus) {
        f.at(i, ip) += 0.5 * a[i];
        f.at(i, im) += 0.5 * a[i];
      } else {
        f.at(i, ip) += Complex{0.0, -0.5 * a[i]};
        f.at(i, im) += Complex{0.0, 0.5 * a[i]};
      }
    }
  }
  return f;
}

SpectralField deterministic_data(const RandomizationPlan& plan) {
  std::vector<double> ones(plan.coefficient_count(), 1.0);
  return synthesize(plan, std::span<const double>(ones));
}

std::vector<double> real_basis_amplitudes(const SpectralField& f, const RandomizationPlan& plan) {
  const int d = plan.grid.dim();
  std::vector<double> out;
  out.reserve(plan.coefficient_count());
  for (const auto& m : plan.modes) {
    // f restricted to +-k is 2 Re c cos(k.x) - 2 Im c sin(k.x), c = c(k).
    const std::size_t ip = f.grid().index_of(m.k);
    for (std::size_t j = 0; j < m.u0.size(); ++j) {
      double amp = 0.0;
      for (int i = 0; i < d; ++i) {
        const Complex c = f.at(i, ip);
        const double comp = m.cls == WaveClass::Plus ? 2.0 * c.real() : -2.0 * c.imag();
        amp += comp * m.basis[j][i];
      }
      out.push_back(amp);
    }
  }
  return out;
}

std::vector<double> weighted_coefficients(const RandomizationPlan& plan, double s) {
  const int d = plan.grid.dim();
  const double basis_norm = std::sqrt(std::pow(2.0 * std::numbers::pi, d) / 2.0);
  std::vector<double> c;
  c.reserve(plan.coefficient_count());
  for (const auto& m : plan.modes) {
    double k2 = 0.0;
    for (int i = 0; i < d; ++i) k2 += static_cast<double>(m.k[i]) * m.k[i];
    const double w = std::pow(std::sqrt(k2), s) * basis_norm;
    for (double u : m.u0) c.push_back(w * u);
  }
  return c;
}

double plan_hs_norm(const RandomizationPlan& plan, double s) {
  double sum = 0.0;
  for (double c : weighted_coefficients(plan, s)) sum += c * c;
  return std::sqrt(sum);
}

void write_plan(std::ostream& os, const RandomizationPlan& plan) {
  const int d = plan.grid.dim();
  for (const auto& m : plan.modes) {
    for (std::size_t j = 0; j < m.u0.size(); ++j) {
      for (int i = 0; i < d; ++i) os << m.k[i] << ' ';
      os << j + 1 << ' ' << fmt_num(m.u0[j]);
      for (int i = 0; i < d; ++i) os << ' ' << fmt_num(m.basis[j][i]);
      os << '\n';
    }
  }
}

SpectralField random_band_field(const Grid& grid, std::uint64_t seed, std::uint64_t member, int kmax,
                                bool divergence_free) {
  const int d = grid.dim();
  if (kmax < 1 || kmax >= grid.n() / 2) throw Error("random_band_field: kmax must lie in [1, N/2)");
  SpectralField f = SpectralField::vector(grid);
  const int kz = d == 3 ? kmax : 0;
  for (int k0 = -kmax; k0 <= kmax; ++k0)
    for (int k1 = -kmax; k1 <= kmax; ++k1)
      for (int k2 = -kz; k2 <= kz; ++k2) {
        const Wavevector k{k0, k1, k2};
        if (classify_wavevector(k, d) != WaveClass::Plus) continue;
        for (int c = 0; c < d; ++c) {
          CounterStream rng(seed, stream_key(member, mode_key(k), static_cast<std::uint64_t>(c)));
          const Complex v(rng.normal(), rng.normal());
          f.at(c, grid.index_of(k)) = v;
          f.at(c, grid.index_of(negate(k))) = std::conj(v);
        }
      }
  return divergence_free ? leray_project(f) : f;
}

}  // namespace fracns
