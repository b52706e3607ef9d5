#include "fracns/norms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fracns/field_io.hpp"

namespace fracns {

namespace {

std::string r_str(double r) { return std::isinf(r) ? std::string("inf") : fmt_num(r); }

// int_a^b t^q (va (b - t) + vb (t - a)) / (b - a) dt for q > -1.
double weighted_segment(double a, double b, double va, double vb, double q) {
  const double h = b - a;
  if (q == 0.0) return 0.5 * h * (va + vb);
  const double i0 = (std::pow(b, q + 1) - std::pow(a, q + 1)) / (q + 1);
  const double i1 = (std::pow(b, q + 2) - std::pow(a, q + 2)) / (q + 2);
  // int t^q (t - a) = i1 - a i0 ; int t^q (b - t) = b i0 - i1
  return (va * (b * i0 - i1) + vb * (i1 - a * i0)) / h;
}

}  // namespace

std::string SpaceNormSpec::str() const {
  switch (kind) {
    case SpaceKind::Lebesgue:
      return "L^" + r_str(r);
    case SpaceKind::HomSobolev:
      return "W^{" + fmt_num(beta) + "," + r_str(r) + "}";
    case SpaceKind::HomHs:
      return "H^" + fmt_num(beta);
  }
  return "?";
}

std::string SpaceTimeNormSpec::str() const {
  return "L^" + r_str(m) + "_{" + fmt_num(mu) + ";" + fmt_num(T) + "}" + inner.str();
}

double lebesgue_norm(const SpectralField& f, double r) {
  if (!(r >= 1.0)) throw Error("Lebesgue exponent must be >= 1");
  const auto comps = to_physical(f);
  const std::size_t n = f.grid().size();
  std::vector<double> mag2(n, 0.0);
  for (const auto& c : comps)
    for (std::size_t i = 0; i < n; ++i) mag2[i] += c[i] * c[i];
  if (std::isinf(r)) return std::sqrt(*std::max_element(mag2.begin(), mag2.end()));
  double sum = 0.0;
  if (r == 2.0) {
    for (double v : mag2) sum += v;
  } else {
    for (double v : mag2) sum += std::pow(v, 0.5 * r);
  }
  return std::pow(sum * f.grid().cell_volume(), 1.0 / r);
}

double space_norm(const SpectralField& f, const SpaceNormSpec& spec) {
  switch (spec.kind) {
    case SpaceKind::Lebesgue:
      return lebesgue_norm(f, spec.r);
    case SpaceKind::HomSobolev:
      return lebesgue_norm(spec.beta == 0.0 ? f : fractional_derivative(f, spec.beta), spec.r);
    case SpaceKind::HomHs: {
      const SpectralField g = fractional_derivative(f, spec.beta);
      return std::sqrt(std::max(inner_product(g, g), 0.0));
    }
  }
  return 0.0;
}

double weighted_time_norm(const std::vector<double>& times, const std::vector<double>& values, double mu, double m,
                          double T) {
  if (times.size() != values.size() || times.empty()) throw Error("weighted_time_norm: bad samples");
  if (T > times.back() * (1.0 + 1e-12) + 1e-14) throw Error("trajectory horizon is shorter than T");
  if (std::isinf(m)) {
    double best = 0.0;
    for (std::size_t i = 0; i < times.size() && times[i] <= T * (1.0 + 1e-12); ++i) {
      if (times[i] == 0.0 && mu < 0.0) continue;
      const double w = mu == 0.0 ? 1.0 : std::pow(times[i], mu);
      best = std::max(best, w * values[i]);
    }
    return best;
  }
  if (!(m >= 1.0)) throw Error("time exponent must be >= 1");
  const double q = mu * m;
  if (!(q > -1.0)) throw Error("weight makes t^{mu m} non-integrable at 0 (mu m <= -1)");
  if (times.front() < 0.0) throw Error("negative time in trajectory");

  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    const double a = times[i];
    if (a >= T) break;
    double b = times[i + 1];
    double vb = std::pow(values[i + 1], m);
    const double va = std::pow(values[i], m);
    if (b > T) {
      vb = va + (vb - va) * (T - a) / (b - a);
      b = T;
    }
    sum += weighted_segment(a, b, va, vb, q);
  }
  return std::pow(std::max(sum, 0.0), 1.0 / m);
}

std::vector<double> node_norms(const Trajectory& traj, const SpaceNormSpec& spec) {
  std::vector<double> v(traj.size());
  const std::string key = spec.str();
  for (std::size_t i = 0; i < traj.size(); ++i)
    v[i] = traj.cached(i, key, [&](const SpectralField& f) { return space_norm(f, spec); });
  return v;
}

double spacetime_norm(const Trajectory& traj, const SpaceTimeNormSpec& spec) {
  if (traj.empty()) throw Error("spacetime_norm: empty trajectory");
  // Only nodes up to T are needed.
  std::size_t last = 0;
  while (last + 1 < traj.size() && traj.time(last) < spec.T) ++last;
  std::vector<double> times(traj.times().begin(), traj.times().begin() + last + 1);
  std::vector<double> values(last + 1);
  const std::string key = spec.inner.str();
  for (std::size_t i = 0; i <= last; ++i)
    values[i] = traj.cached(i, key, [&](const SpectralField& f) { return space_norm(f, spec.inner); });
  return weighted_time_norm(times, values, spec.mu, spec.m, spec.T);
}

std::string composite_name(Composite c) {
  switch (c) {
    case Composite::Y:
      return "Y";
    case Composite::X1:
      return "X1";
    case Composite::X2:
      return "X2";
    case Composite::X3:
      return "X3";
    case Composite::X4:
      return "X4";
    case Composite::XT:
      return "XT";
  }
  return "?";
}

std::vector<SpaceTimeNormSpec> composite_specs(Composite c, const ProblemParams& pp, double T) {
  const double g = pp.gamma;
  const double a = pp.alpha;
  const double p = pp.p;
  const double w = g + 1.0 / (2.0 * a) - 0.5;
  switch (c) {
    case Composite::Y:
      return {{0.0, 4.0 / (1.0 + 2.0 * g), T, SpaceNormSpec::lebesgue(p)},
              {(1.0 + 2.0 * g) / 4.0, 3.0, T, SpaceNormSpec::sobolev(2.0 * a / 3.0, p)}};
    case Composite::X1:
      return {{g, 4.0 / (1.0 - 2.0 * g), T, SpaceNormSpec::lebesgue(p)},
              {w, 4.0 / (1.0 - 2.0 * g), T, SpaceNormSpec::sobolev(1.0 - a, p)}};
    case Composite::X2:
      if (pp.s <= a - 1.0) return {{0.0, 4.0 / (1.0 + 2.0 * g), T, SpaceNormSpec::lebesgue(p)}};
      return {{pp.mu_s, 4.0 / (1.0 + 2.0 * g), T, SpaceNormSpec::sobolev(pp.s + 1.0 - a, p)}};
    case Composite::X3:
      return {{0.0, 4.0 * a / ((2.0 * g - 1.0) * a + 2.0), T, SpaceNormSpec::sobolev(1.0 - a, p)}};
    case Composite::X4:
      return {{-pp.s / (2.0 * a), kInf, T, SpaceNormSpec::lebesgue(2.0)},
              {-pp.s / (2.0 * a), 2.0, T, SpaceNormSpec::hs(a)}};
    case Composite::XT:
      return {{g, 2.0, T, SpaceNormSpec::sobolev(2.0 * a - 1.0, p / 2.0)},
              {w, 2.0, T, SpaceNormSpec::sobolev(a, p / 2.0)}};
  }
  return {};
}

CompositeNorm composite_norm(const Trajectory& traj, Composite c, const ProblemParams& params, double T) {
  CompositeNorm out;
  out.name = c;
  for (const auto& spec : composite_specs(c, params, T)) {
    const double v = spacetime_norm(traj, spec);
    out.parts.emplace_back(spec, v);
    out.value += v;
  }
  return out;
}

bool NormReport::all_finite() const {
  return std::all_of(entries.begin(), entries.end(), [](const NormEntry& e) { return std::isfinite(e.value); });
}

double NormReport::get(const std::string& name) const {
  for (const auto& e : entries)
    if (e.name == name) return e.value;
  throw Error("no report entry named " + name);
}

double y_norm(const Trajectory& traj, const ProblemParams& params, double T) {
  return composite_norm(traj, Composite::Y, params, T).value;
}

}  // namespace fracns
