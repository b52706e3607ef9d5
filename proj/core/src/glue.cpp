#include "fracns/glue.hpp"

#include <algorithm>
#include <cmath>

#include "fracns/bilinear.hpp"
#include "fracns/field_io.hpp"
#include "fracns/randomization.hpp"

namespace fracns {

namespace {

double l2(const SpectralField& f) { return std::sqrt(std::max(inner_product(f, f), 0.0)); }

}  // namespace

GlueResult glue_solutions(const Trajectory& w1, const Trajectory& w2, double tolerance) {
  if (w1.empty() || w2.empty()) throw Error("glue_solutions: empty trajectory");
  const double tau = w1.horizon();
  if (std::abs(w2.start() - 0.5 * tau) > 1e-12 * std::max(1.0, tau))
    throw Error("second trajectory must start at tau/2");
  GlueResult out;
  out.overlap.tolerance = tolerance;
  for (std::size_t i = 0; i < w2.size() && w2.time(i) <= tau * (1.0 + 1e-12); ++i) {
    const double t = w2.time(i);
    const std::size_t j = w1.index_of_time(t, 1e-9);
    const double mm = l2(w1.field(j) - w2.field(i));
    out.overlap.times.push_back(t);
    out.overlap.mismatch.push_back(mm);
    out.overlap.max_mismatch = std::max(out.overlap.max_mismatch, mm);
  }
  out.overlap.ratio = out.overlap.max_mismatch / tolerance;

  for (std::size_t i = 0; i < w1.size(); ++i) out.w.push_back(w1.time(i), w1.field(i));
  for (std::size_t i = 0; i < w2.size(); ++i)
    if (w2.time(i) > tau * (1.0 + 1e-12)) out.w.push_back(w2.time(i), w2.field(i));

  if (out.overlap.ratio > 10.0)
    throw Error("overlap mismatch " + fmt_num(out.overlap.max_mismatch) + " exceeds 10x the tolerance " +
                fmt_num(tolerance));
  return out;
}

VerifierReport weak_strong_residual(const Trajectory& v1, const Trajectory& v2, const Trajectory& psi,
                                    const UniquenessSpec& uspec, double c_fit, double noise_floor) {
  if (v1.times() != v2.times() || v1.times() != psi.times())
    throw Error("weak_strong_residual: trajectories must share the time grid");
  VerifierReport rep;
  rep.lemma = "UR";
  rep.params = "beta=" + fmt_num(uspec.beta) + ";r=" + fmt_num(uspec.r) + ";q=" + fmt_num(uspec.q);
  rep.theoretical = c_fit;
  const SpaceNormSpec spec = SpaceNormSpec::sobolev(uspec.beta, uspec.r);

  std::vector<double> g(v1.size());
  for (std::size_t i = 0; i < v1.size(); ++i)
    g[i] = std::pow(space_norm(v1.field(i), spec), uspec.q) + std::pow(space_norm(psi.field(i), spec), uspec.q);
  double integral = 0.0;
  double needed = 0.0;
  double worst_noise = 0.0;
  const double v0 = inner_product(v1.field(0) - v2.field(0), v1.field(0) - v2.field(0));
  bool finite = std::all_of(g.begin(), g.end(), [](double x) { return std::isfinite(x); });
  for (std::size_t i = 1; i < v1.size() && finite; ++i) {
    integral += 0.5 * (v1.time(i) - v1.time(i - 1)) * (g[i - 1] + g[i]);
    const SpectralField v = v1.field(i) - v2.field(i);
    const double vv = inner_product(v, v);
    if (v0 > 0.0) {
      if (vv > v0) needed = std::max(needed, integral > 0.0 ? std::log(vv / v0) / integral : kInf);
    } else {
      worst_noise = std::max(worst_noise, std::sqrt(std::max(vv, 0.0)));
    }
  }
  if (!finite) {
    rep.pass = false;
    rep.notes.push_back("Gronwall integrand is not finite");
    return rep;
  }
  if (v0 > 0.0) {
    rep.fitted = needed;
    rep.ratio = integral;
    rep.pass = needed <= c_fit;
  } else {
    rep.fitted = 0.0;
    rep.ratio = worst_noise;
    rep.tolerance = noise_floor;
    rep.pass = worst_noise <= noise_floor;
    rep.notes.push_back("zero initial difference: residual held at noise level");
  }
  return rep;
}

AssembledSolution assemble_u(const Trajectory& h, const Trajectory& w, const ProblemParams& params) {
  AssembledSolution out;
  out.u = add(h, w);
  const double e = weight_energy(params);
  const double a = params.alpha;

  double sup = 0.0, l2ha = 0.0, wl2ha = 0.0;
  double prev_ha = 0.0, prev_wha = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double t = w.time(i);
    const double weight = std::pow(std::min(1.0, t), e);
    const double wl2 = w.cached(i, "H^0", [](const SpectralField& f) { return space_norm(f, SpaceNormSpec::hs(0.0)); });
    const double ha = w.cached(i, SpaceNormSpec::hs(a).str(),
                               [a](const SpectralField& f) { return space_norm(f, SpaceNormSpec::hs(a)); });
    sup = std::max(sup, weight * wl2);
    const double cur_ha = ha * ha;
    const double cur_wha = weight * weight * ha * ha;
    if (i > 0) {
      const double dt = t - w.time(i - 1);
      l2ha += 0.5 * dt * (prev_ha + cur_ha);
      wl2ha += 0.5 * dt * (prev_wha + cur_wha);
    }
    prev_ha = cur_ha;
    prev_wha = cur_wha;
  }
  out.certificates.add("weighted_linf_l2", sup, true);
  out.certificates.add("l2_h_alpha", std::sqrt(l2ha));
  out.certificates.add("weighted_l2_h_alpha", std::sqrt(wl2ha));

  const SpaceNormSpec cspec = SpaceNormSpec::hs(2.0 * a * (params.mu_s - params.gamma) + a - 1.0);
  double modulus = 0.0;
  auto weighted = [&](std::size_t i) {
    const double t = w.time(i);
    return (t == 0.0 ? (params.mu_s == 0.0 ? 1.0 : 0.0) : std::pow(t, params.mu_s)) * w.field(i);
  };
  for (std::size_t i = 0; i + 1 < w.size(); ++i) modulus = std::max(modulus, space_norm(weighted(i + 1) - weighted(i), cspec));
  out.certificates.add("cont_mu_s", modulus);
  return out;
}

SpectralField random_test_function(const Grid& grid, std::uint64_t seed, std::uint64_t member, int kmax) {
  SpectralField f = random_band_field(grid, seed, member, std::min(kmax, grid.n() / 2 - 1), true);
  const double n = l2(f);
  if (n > 0.0) f *= 1.0 / n;
  return f;
}

WeakFormResidual weak_form_residual(const Trajectory& u, double alpha, double t1, double t2, int tests,
                                    std::uint64_t seed) {
  const Trajectory win = u.window(t1, t2);
  if (win.size() < 2) throw Error("weak-form window holds fewer than two nodes");
  const Grid& grid = win.grid();
  std::vector<SpectralField> phis;
  for (int m = 0; m < tests; ++m) phis.push_back(random_test_function(grid, seed, static_cast<std::uint64_t>(m)));

  // <Lambda^alpha u, Lambda^alpha phi> = <u, Lambda^{2 alpha} phi>.
  std::vector<SpectralField> aphis;
  for (const auto& p : phis) aphis.push_back(fractional_derivative(p, 2.0 * alpha));

  std::vector<std::vector<double>> lin(tests, std::vector<double>(win.size()));
  std::vector<std::vector<double>> non(tests, std::vector<double>(win.size()));
  for (std::size_t n = 0; n < win.size(); ++n) {
    const SpectralField& f = win.field(n);
    const SpectralField b = bilinear_B(f, f);
    for (int m = 0; m < tests; ++m) {
      lin[m][n] = inner_product(f, aphis[m]);
      non[m][n] = inner_product(b, phis[m]);
    }
  }
  WeakFormResidual out;
  out.tests = tests;
  for (int m = 0; m < tests; ++m) {
    const double jump = inner_product(win.back(), phis[m]) - inner_product(win.field(0), phis[m]);
    double il = 0.0, in = 0.0, al = 0.0, an = 0.0;
    for (std::size_t n = 1; n < win.size(); ++n) {
      const double dt = win.time(n) - win.time(n - 1);
      il += 0.5 * dt * (lin[m][n - 1] + lin[m][n]);
      in += 0.5 * dt * (non[m][n - 1] + non[m][n]);
      al += 0.5 * dt * (std::abs(lin[m][n - 1]) + std::abs(lin[m][n]));
      an += 0.5 * dt * (std::abs(non[m][n - 1]) + std::abs(non[m][n]));
    }
    const double scale = std::abs(inner_product(win.back(), phis[m])) + std::abs(inner_product(win.field(0), phis[m])) +
                         al + an;
    const double res = std::abs(jump + il + in);
    out.scale = std::max(out.scale, scale);
    if (scale > 0.0) out.residual = std::max(out.residual, res / scale);
  }
  return out;
}

DecayFit fit_decay(const Trajectory& u) {
  DecayFit fit;
  double st = 0, sl = 0, stt = 0, stl = 0;
  int n = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double v = l2(u.field(i));
    fit.t.push_back(u.time(i));
    fit.l2.push_back(v);
    if (v <= 0.0) continue;
    const double lv = std::log(v);
    st += u.time(i);
    sl += lv;
    stt += u.time(i) * u.time(i);
    stl += u.time(i) * lv;
    ++n;
  }
  if (n >= 2) fit.rate = -(n * stl - st * sl) / (n * stt - st * st);
  return fit;
}

}  // namespace fracns
