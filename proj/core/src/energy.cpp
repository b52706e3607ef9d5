#include "fracns/energy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fracns/bilinear.hpp"
#include "fracns/field_io.hpp"
#include "fracns/norms.hpp"

namespace fracns {

namespace {

SpectralField nonlinear(const SpectralField& w, const HeatFlow& h, double t) {
  if (h.is_zero()) return -1.0 * bilinear_B(w, w);
  const SpectralField u = w + h(t);
  return -1.0 * bilinear_B(u, u);
}

double log_mean(double a, double b) {
  if (a <= 0.0 || b <= 0.0) return 0.5 * (a + b);
  const double r = a / b;
  if (std::abs(r - 1.0) < 1e-6) {
    // (a - b) / ln(a/b) expanded around a = b.
    const double x = r - 1.0;
    return b * (1.0 + x / 2.0 - x * x / 12.0);
  }
  return (a - b) / std::log(r);
}

}  // namespace

double cfl_number(const SpectralField& u, double dt) {
  const auto comps = to_physical(u);
  double sum = 0.0;
  for (const auto& c : comps) {
    double m = 0.0;
    for (double v : c) m = std::max(m, std::abs(v));
    sum += m;
  }
  return dt * sum / (2.0 * std::numbers::pi / u.grid().n());
}

SpectralField galerkin_step(const SpectralField& w, const HeatFlow& h, double t, double dt, double alpha) {
  if (!(dt > 0.0)) throw Error("time step must be positive");
  const SpectralField u = h.is_zero() ? w : w + h(t);
  const double cfl = cfl_number(u, dt);
  if (cfl > 1.0) throw Error("CFL number " + fmt_num(cfl) + " exceeds 1; use dt <= " + fmt_num(dt / cfl));

  const SpectralField n0 = nonlinear(w, h, t);
  SpectralField stage = heat_flow(w + dt * n0, dt, alpha);
  const SpectralField n1 = nonlinear(stage, h, t + dt);
  SpectralField out = heat_flow(w + (0.5 * dt) * n0, dt, alpha);
  out.axpy(0.5 * dt, n1);
  out.zero_mean();
  return out;
}

std::vector<double> galerkin_times(double t0, double T, double step) {
  if (!(step > 0.0) || !(T > t0)) throw Error("galerkin grid needs T > t0 and step > 0");
  std::vector<double> t{t0};
  for (long i = 1;; ++i) {
    const double next = t0 + step * static_cast<double>(i);
    if (next >= T - 1e-9 * step) break;
    t.push_back(next);
  }
  t.push_back(T);
  return t;
}

Trajectory galerkin_run(const SpectralField& w0, const HeatFlow& h, const std::vector<double>& times, double alpha) {
  Trajectory out;
  SpectralField w = w0;
  out.push_back(times.front(), w);
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    w = galerkin_step(w, h, times[i], times[i + 1] - times[i], alpha);
    out.push_back(times[i + 1], w);
  }
  return out;
}

EnergyLedger energy_audit(const Trajectory& w, const HeatFlow& h, double alpha) {
  EnergyLedger ledger;
  const Grid& grid = w.grid();
  const double vol = grid.volume();
  std::vector<double> lambda(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) lambda[i] = grid.is_nyquist(i) ? 0.0 : std::pow(grid.k2(i), alpha);

  auto modal_diss = [&](const SpectralField& f, std::size_t i) {
    double m = 0.0;
    for (int c = 0; c < f.comps(); ++c) m += std::norm(f.at(c, i));
    return vol * lambda[i] * m;
  };

  double sup_l2 = 0.0;
  double diss_total = 0.0;
  for (std::size_t n = 0; n < w.size(); ++n) {
    const SpectralField& f = w.field(n);
    LedgerRow row;
    row.t = w.time(n);
    row.l2sq = inner_product(f, f);
    for (std::size_t i = 0; i < grid.size(); ++i) row.diss += modal_diss(f, i);
    if (!h.is_zero()) {
      const SpectralField hn = h(row.t);
      row.work_ww = inner_product(bilinear_B(f, f), hn);
      row.work_hw = inner_product(bilinear_B(hn, f), hn);
    }
    if (n > 0) {
      const LedgerRow& prev = ledger.rows.back();
      const double dt = row.t - prev.t;
      const SpectralField& g = w.field(n - 1);
      double dint = 0.0;
      for (std::size_t i = 0; i < grid.size(); ++i) dint += log_mean(modal_diss(g, i), modal_diss(f, i));
      row.diss_int = dt * dint;
      row.work_int = 0.5 * dt * (prev.work_ww + prev.work_hw + row.work_ww + row.work_hw);
      row.residual = 0.5 * (row.l2sq - prev.l2sq) + row.diss_int - row.work_int;
      ledger.max_residual_rate = std::max(ledger.max_residual_rate, std::abs(row.residual) / dt);
      if (!(row.l2sq < prev.l2sq)) ledger.strictly_decreasing = false;
      diss_total += row.diss_int;
    }
    sup_l2 = std::max(sup_l2, row.l2sq);
    row.e_w = sup_l2 + diss_total;
    ledger.rows.push_back(row);
  }
  return ledger;
}

GronwallTerms gronwall_terms(const EnergyLedger& ledger, const HeatFlow& h, const ProblemParams& params) {
  if (ledger.rows.empty()) throw Error("gronwall_terms: empty ledger");
  GronwallTerms terms;
  terms.a = ledger.rows.front().l2sq;
  const double q = q_uniqueness(params);
  std::vector<double> fi, gi;
  for (const auto& row : ledger.rows) {
    const SpectralField hn = h(row.t);
    const double lp = lebesgue_norm(hn, params.p);
    const double dp = space_norm(hn, SpaceNormSpec::sobolev(1.0 - params.alpha, params.p));
    fi.push_back(dp * dp * lp * lp);
    gi.push_back(std::pow(dp, q));
  }
  double f = 0.0, g = 0.0;
  for (std::size_t n = 0; n < ledger.rows.size(); ++n) {
    if (n > 0) {
      const double dt = ledger.rows[n].t - ledger.rows[n - 1].t;
      f += 0.5 * dt * (fi[n - 1] + fi[n]);
      g += 0.5 * dt * (gi[n - 1] + gi[n]);
    }
    terms.t.push_back(ledger.rows[n].t);
    terms.f.push_back(f);
    terms.g.push_back(g);
  }
  return terms;
}

double gronwall_needed_constant(const EnergyLedger& ledger, const GronwallTerms& terms) {
  double worst = 0.0;
  for (std::size_t n = 0; n < ledger.rows.size(); ++n) {
    const double e = ledger.rows[n].e_w;
    if (e <= 0.0) continue;
    const double base = terms.a + terms.f[n];
    if (base <= 0.0) return kInf;
    auto rhs = [&](double c) { return c * base * std::exp(c * terms.g[n]); };
    double lo = 0.0, hi = 1.0;
    while (rhs(hi) < e) {
      hi *= 2.0;
      if (hi > 1e12) return kInf;
    }
    for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (rhs(mid) < e ? lo : hi) = mid;
    }
    worst = std::max(worst, hi);
  }
  return worst;
}

VerifierReport gronwall_check(const EnergyLedger& ledger, const GronwallTerms& terms, double c_fit) {
  VerifierReport rep;
  rep.lemma = "GRONWALL";
  rep.params = "C_fit=" + fmt_num(c_fit);
  rep.theoretical = c_fit;
  rep.fitted = gronwall_needed_constant(ledger, terms);
  double margin = kInf;
  for (std::size_t n = 0; n < ledger.rows.size(); ++n) {
    const double rhs = c_fit * (terms.a + terms.f[n]) * std::exp(c_fit * terms.g[n]);
    const double e = ledger.rows[n].e_w;
    if (rhs > 0.0)
      margin = std::min(margin, (rhs - e) / rhs);
    else if (e > 0.0)
      margin = -kInf;
  }
  rep.ratio = margin;
  rep.pass = margin > 0.0;
  return rep;
}

DualBudget dual_norm_budget(const Trajectory& w, const HeatFlow& h, const ProblemParams& params, double margin) {
  DualBudget out;
  const double a = params.alpha;
  const int d = params.d;
  const VSpaceSpec vspec{d, a, margin};
  out.exact_dual = vspec.rho() == 2.0;
  const double m = d > 2.0 * a ? std::min(4.0, 2.0 * d / (d - 2.0 * a)) : 4.0;

  std::vector<double> lin(w.size()), non(w.size()), leb(w.size()), diss(w.size());
  for (std::size_t n = 0; n < w.size(); ++n) {
    const SpectralField& f = w.field(n);
    const SpectralField u = h.is_zero() ? f : f + h(w.time(n));
    lin[n] = space_norm(f, SpaceNormSpec::hs(2.0 * a - 1.0));
    non[n] = space_norm(bilinear_B(u, u), SpaceNormSpec::hs(-1.0));
    const double um = lebesgue_norm(u, m);
    leb[n] = lin[n] + um * um;
    const double da = space_norm(f, SpaceNormSpec::hs(a));
    diss[n] = da * da;
  }
  for (std::size_t n = 1; n < w.size(); ++n) {
    const double dt = w.time(n) - w.time(n - 1);
    out.linear += 0.5 * dt * (lin[n - 1] + lin[n]);
    out.nonlinear += 0.5 * dt * (non[n - 1] + non[n]);
    out.lebesgue_bound += 0.5 * dt * (leb[n - 1] + leb[n]);
    out.dissipation += 0.5 * dt * (diss[n - 1] + diss[n]);
  }
  out.budget = out.linear + out.nonlinear;
  out.c_needed = out.budget / (1.0 + out.dissipation);
  return out;
}

}  // namespace fracns
