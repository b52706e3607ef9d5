#include "fracns/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include "fracns/field_io.hpp"
#include "fracns/norms.hpp"
#include "fracns/randomization.hpp"
#include "fracns/semigroup.hpp"
#include "fracns/trajectory.hpp"

namespace fracns {

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  const std::size_t chunk = (n + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        const std::size_t lo = t * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        for (std::size_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

double pairwise_sum(std::span<const double> x) {
  if (x.size() <= 8) {
    double s = 0.0;
    for (double v : x) s += v;
    return s;
  }
  const std::size_t half = x.size() / 2;
  return pairwise_sum(x.subspan(0, half)) + pairwise_sum(x.subspan(half));
}

double gaussian_abs_moment_root(double r) {
  const double m = std::pow(2.0, r / 2.0) * std::tgamma((r + 1.0) / 2.0) / std::sqrt(std::numbers::pi);
  return std::pow(m, 1.0 / r);
}

VerifierReport khinchin_check(std::span<const double> coeffs, const DistributionSpec& dist, const KhinchinOptions& opts) {
  if (opts.r < 2.0) throw Error("khinchin_check needs r >= 2");
  if (opts.samples < 1000) throw Error("khinchin_check needs at least 1000 samples");
  double c2 = 0.0;
  for (double c : coeffs) c2 += c * c;
  if (!(c2 > 0.0)) throw Error("khinchin_check: zero coefficient vector");
  const double cnorm = std::sqrt(c2);

  std::vector<double> powers(opts.samples);
  parallel_for(opts.samples, opts.threads, [&](std::size_t i) {
    double s = 0.0;
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
      if (coeffs[j] == 0.0) continue;
      CounterStream rng(opts.seed, stream_key(i, j, 0));
      s += coeffs[j] * dist.draw(rng);
    }
    powers[i] = std::pow(std::abs(s), opts.r);
  });
  const double n = static_cast<double>(opts.samples);
  const double mean = pairwise_sum(powers) / n;
  std::vector<double> dev(powers.size());
  for (std::size_t i = 0; i < powers.size(); ++i) dev[i] = (powers[i] - mean) * (powers[i] - mean);
  const double var = pairwise_sum(dev) / (n - 1.0);
  const double se_mean = std::sqrt(var / n);

  VerifierReport rep;
  rep.lemma = "KH";
  rep.params = "dist=" + dist.name() + ";r=" + fmt_num(opts.r) + ";n=" + std::to_string(opts.samples);
  rep.fitted = std::pow(mean, 1.0 / opts.r) / cnorm;
  const double se = mean > 0.0 ? std::pow(mean, 1.0 / opts.r - 1.0) * se_mean / (opts.r * cnorm) : 0.0;
  rep.tolerance = 3.0 * se;

  std::size_t nonzero = 0;
  for (double c : coeffs) nonzero += c != 0.0;
  const double gauss = gaussian_abs_moment_root(opts.r);
  bool exact = false;
  if (dist.family == Family::Gaussian) {
    rep.theoretical = gauss;
    exact = true;
  } else if (dist.family == Family::Rademacher && nonzero == 1) {
    rep.theoretical = 1.0;
    exact = true;
  } else {
    rep.theoretical = gauss;
  }
  rep.ratio = rep.fitted / rep.theoretical;
  if (dist.finite_moment_bound() <= opts.r) {
    rep.pass = false;
    rep.notes.push_back("moment of order r is infinite for " + dist.name());
  } else if (!std::isfinite(rep.fitted)) {
    rep.pass = false;
  } else if (exact) {
    rep.pass = std::abs(rep.fitted - rep.theoretical) <= std::max(rep.tolerance, 1e-12 * rep.theoretical);
  } else {
    rep.pass = rep.fitted <= rep.theoretical + rep.tolerance;
    rep.notes.push_back("no closed form; checked against the Gaussian value");
  }
  return rep;
}

std::vector<CoefficientFamily> coefficient_families(std::size_t n, std::uint64_t seed) {
  std::vector<CoefficientFamily> out(5);
  out[0] = {"flat", std::vector<double>(n, 1.0)};
  out[1] = {"geometric", std::vector<double>(n)};
  for (std::size_t j = 0; j < n; ++j) out[1].coeffs[j] = std::pow(0.8, static_cast<double>(j));
  out[2] = {"spike", std::vector<double>(n, 0.0)};
  out[2].coeffs[0] = 1.0;
  out[3] = {"two_scale", std::vector<double>(n)};
  for (std::size_t j = 0; j < n; ++j) out[3].coeffs[j] = j < n / 2 ? 1.0 : 0.1;
  out[4] = {"random", std::vector<double>(n)};
  for (std::size_t j = 0; j < n; ++j) {
    CounterStream rng(seed, stream_key(0, j, 99));
    out[4].coeffs[j] = std::abs(rng.normal());
  }
  return out;
}

KhinchinSuite khinchin_suite(const DistributionSpec& dist, const KhinchinOptions& opts, std::size_t n_coeffs) {
  KhinchinSuite suite;
  suite.pass = true;
  double lo = kInf, hi = 0.0;
  for (const auto& fam : coefficient_families(n_coeffs, opts.seed)) {
    VerifierReport rep = khinchin_check(fam.coeffs, dist, opts);
    rep.params += ";family=" + fam.name;
    suite.pass = suite.pass && rep.pass;
    lo = std::min(lo, rep.fitted);
    hi = std::max(hi, rep.fitted);
    suite.reports.push_back(std::move(rep));
  }
  suite.spread = hi / lo;
  if (!(suite.spread <= gaussian_abs_moment_root(opts.r))) suite.pass = false;
  return suite;
}

std::string HeatNormSpec::str() const {
  return "rho=" + fmt_num(rho) + ";eta=" + fmt_num(eta) + ";a=" + (std::isinf(a) ? std::string("inf") : fmt_num(a)) +
         ";p=" + (std::isinf(p) ? std::string("inf") : fmt_num(p)) + ";T=" + fmt_num(T);
}

void validate_heat_norm(const HeatNormSpec& spec, const ProblemParams& params) {
  const double lhs = spec.eta - 2.0 * params.alpha * spec.rho;
  const double gain = std::isinf(spec.a) ? 0.0 : 2.0 * params.alpha / spec.a;
  const double eps = 1e-12;
  if (std::abs(lhs - params.s) <= eps) return;
  if (lhs - gain <= params.s + eps) return;
  throw ParamError("heat-flow norm fails eta - 2 alpha rho - 2 alpha / a <= s (" + fmt_num(lhs - gain) + " > " +
                   fmt_num(params.s) + ") and eta - 2 alpha rho = s");
}

EnsembleStats heatflow_norm_ensemble(const RandomizationPlan& plan, const HeatNormSpec& spec,
                                     const ProblemParams& params, std::size_t n_samples, unsigned threads) {
  validate_heat_norm(spec, params);
  if (n_samples == 0) throw Error("heatflow_norm_ensemble needs samples");
  const SpaceNormSpec space = SpaceNormSpec::sobolev(spec.eta, spec.p);
  const std::vector<double> times = graded_times(0.0, spec.T, spec.n_times, 2.0);

  EnsembleStats st;
  st.samples.resize(n_samples);
  parallel_for(n_samples, threads, [&](std::size_t i) {
    const SpectralField u0 = synthesize(plan, std::nullopt, i);
    std::vector<double> vals(times.size());
    for (std::size_t n = 0; n < times.size(); ++n) vals[n] = space_norm(heat_flow(u0, times[n], params.alpha), space);
    st.samples[i] = weighted_time_norm(times, vals, spec.rho, spec.a, spec.T);
  });

  const double rs = params.r_s;
  const double rc = std::ceil(rs);
  std::vector<double> a(n_samples), b(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    a[i] = std::pow(st.samples[i], rs);
    b[i] = std::pow(st.samples[i], rc);
  }
  const double n = static_cast<double>(n_samples);
  st.moment_rs = std::pow(pairwise_sum(a) / n, 1.0 / rs);
  st.moment_ceil = std::pow(pairwise_sum(b) / n, 1.0 / rc);
  st.data_norm = plan_hs_norm(plan, params.s);
  st.ratio = st.data_norm > 0.0 ? st.moment_rs / st.data_norm : 0.0;
  return st;
}

SeStudy se_profile_study(const Grid& grid, const ProblemParams& params, const DistributionSpec& dist,
                         std::uint64_t seed, int cutoff, const HeatNormSpec& spec, std::size_t n_samples,
                         unsigned threads) {
  SeStudy study;
  auto run = [&](double delta, int kc, double T) {
    HsProfile prof = hs_profile_data(grid, params.s, kc, delta);
    prof.plan.dist = dist;
    prof.plan.seed = seed;
    HeatNormSpec sp = spec;
    sp.T = T;
    study.rows.push_back({delta, kc, T, heatflow_norm_ensemble(prof.plan, sp, params, n_samples, threads)});
  };
  const int half = std::max(1, (cutoff + 1) / 2);
  for (double delta : {0.1, 0.5, 1.0})
    for (int kc : {cutoff, half}) run(delta, kc, spec.T);
  run(0.1, cutoff, 4.0 * spec.T);

  double lo = kInf, hi = 0.0;
  bool finite = true;
  for (std::size_t i = 0; i + 1 < study.rows.size(); ++i) {
    const double r = study.rows[i].stats.ratio;
    finite = finite && std::isfinite(r) && r > 0.0;
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  VerifierReport& rep = study.report;
  rep.lemma = "SE";
  rep.params = spec.str() + ";profiles=3;cutoffs=" + std::to_string(cutoff) + "," + std::to_string(half) +
               ";n=" + std::to_string(n_samples);
  rep.fitted = hi / lo;
  rep.theoretical = gaussian_abs_moment_root(params.r_s);
  rep.tolerance = 2.0;
  rep.ratio = study.rows.back().stats.ratio / study.rows.front().stats.ratio;
  rep.pass = finite && rep.fitted <= rep.tolerance;
  rep.notes.push_back("horizon 4T / T ratio " + fmt_num(rep.ratio));
  return study;
}

TailReport tail_check(std::span<const double> samples, double r_s) {
  if (samples.empty()) throw Error("tail_check: no samples");
  double mx = 0.0, mn = kInf;
  for (double x : samples) {
    if (!std::isfinite(x) || x < 0.0) throw Error("tail_check: samples must be finite and nonnegative");
    mx = std::max(mx, x);
    if (x > 0.0) mn = std::min(mn, x);
  }
  if (mx == 0.0) throw Error("tail_check: degenerate sample (all zero)");

  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  const double median = sorted[sorted.size() / 2];

  TailReport out;
  VerifierReport& rep = out.report;
  rep.lemma = "TAIL";
  rep.params = "r_s=" + fmt_num(r_s) + ";n=" + std::to_string(samples.size());
  rep.theoretical = -r_s;

  const int k0 = static_cast<int>(std::floor(std::log2(mn)));
  const int k1 = static_cast<int>(std::ceil(std::log2(mx))) + 1;
  int anchor = -1;
  for (int k = k0; k <= k1; ++k) {
    TailPoint pt;
    pt.lambda = std::ldexp(1.0, k);
    const auto it = std::lower_bound(sorted.begin(), sorted.end(), pt.lambda);
    pt.count = static_cast<std::size_t>(sorted.end() - it);
    pt.exceedance = static_cast<double>(pt.count) / n;
    pt.bound = std::numeric_limits<double>::quiet_NaN();
    if (anchor < 0 && pt.lambda >= median) anchor = static_cast<int>(out.points.size());
    out.points.push_back(pt);
  }

  const TailPoint& a = out.points[anchor];
  const double c = a.exceedance * std::pow(a.lambda, r_s);
  bool dominated = true;
  double worst = 0.0;
  std::vector<double> xs, ys;
  for (std::size_t k = anchor; k < out.points.size(); ++k) {
    TailPoint& pt = out.points[k];
    pt.bound = std::min(1.0, c * std::pow(pt.lambda, -r_s));
    const double se = std::sqrt(pt.bound * (1.0 - pt.bound) / n);
    if (pt.exceedance > pt.bound + 3.0 * se) dominated = false;
    if (pt.bound > 0.0) worst = std::max(worst, pt.exceedance / pt.bound);
    if (pt.count >= 5) {
      xs.push_back(pt.lambda);
      ys.push_back(pt.exceedance);
    }
  }
  rep.ratio = worst;
  rep.fitted = xs.size() >= 2 ? fit_loglog_slope(xs, ys) : -kInf;
  const bool steep = rep.fitted <= -r_s + 0.5;
  rep.tolerance = 0.5;
  rep.pass = dominated || steep;
  if (dominated) rep.notes.push_back("tail dominated by the anchored envelope");
  if (steep) rep.notes.push_back("tail slope steeper than -r_s + 0.5");
  if (xs.size() < 2) rep.notes.push_back("fewer than two observable tail points");
  return out;
}

}  // namespace fracns
