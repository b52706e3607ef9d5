#include "fracns/mild.hpp"

#include <cmath>
#include <limits>

#include "fracns/field_io.hpp"
#include "fracns/semigroup.hpp"

namespace fracns {

TauSelection select_tau(const Trajectory& h, const ProblemParams& params, double threshold) {
  if (!(threshold > 0.0)) throw Error("threshold must be positive");
  if (h.size() < 2 || h.start() != 0.0) throw Error("select_tau needs h on a grid starting at 0");
  auto y_at = [&](std::size_t i) { return y_norm(h, params, h.time(i)); };

  TauSelection sel;
  const std::size_t last = h.size() - 1;
  const double y_last = y_at(last);
  if (y_last <= threshold) return {h.time(last), last, y_last};
  const double y_first = y_at(1);
  if (y_first > threshold)
    throw Error("||h||_Y at the first grid time (" + fmt_num(y_first) + ") exceeds the threshold " +
                fmt_num(threshold) + "; refine the grading near t = 0");
  std::size_t lo = 1, hi = last;  // y(lo) <= threshold < y(hi)
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (y_at(mid) <= threshold)
      lo = mid;
    else
      hi = mid;
  }
  return {h.time(lo), lo, y_at(lo)};
}

Trajectory apply_K(const Trajectory& w, const Trajectory& h, double alpha) {
  const Trajectory u = add(w, h);
  return scale(-1.0, duhamel_M(u, u, alpha));
}

double picard_uniform_step(double tau, double dt) {
  const int n = std::max(1, static_cast<int>(std::ceil(0.5 * tau / dt - 1e-9)));
  return 0.5 * tau / n;
}

std::vector<double> picard_times(double tau, double dt, double rho) {
  if (!(tau > 0.0) || !(dt > 0.0)) throw Error("picard grid needs tau, dt > 0");
  const double half = 0.5 * tau;
  const int m = std::max(8, static_cast<int>(std::ceil(rho * half / dt - 1e-9)));
  auto t = graded_times(0.0, half, m, rho);
  const int n = std::max(1, static_cast<int>(std::ceil(half / dt - 1e-9)));
  const double step = half / n;
  for (int i = 1; i <= n; ++i) t.push_back(i == n ? tau : half + step * i);
  return t;
}

PicardResult picard_solve(const Trajectory& h, const ProblemParams& params, const PicardOptions& opts) {
  if (!(opts.tol > 0.0)) throw Error("Picard tolerance must be positive");
  const double tau = h.horizon();
  const double alpha = params.alpha;
  PicardState st;
  st.lambda = y_norm(h, params, tau);

  Trajectory w = zero_trajectory(h.grid(), h.field(0).comps(), h.times());
  int contracted = 0;
  for (int it = 0; it < opts.max_iter; ++it) {
    Trajectory next = apply_K(w, h, alpha);
    if (it == 0) {
      st.c_emp = st.lambda > 0.0 ? y_norm(next, params, tau) / (st.lambda * st.lambda) : 0.0;
      st.ball_radius = 2.0 * st.c_emp * st.lambda * st.lambda;
    }
    const double res = y_norm(add(next, scale(-1.0, w)), params, tau);
    const double nrm = y_norm(next, params, tau);
    st.residuals.push_back(res);
    st.ratios.push_back(it == 0 ? std::numeric_limits<double>::quiet_NaN()
                                : (st.residuals[it - 1] > 0.0 ? res / st.residuals[it - 1] : 0.0));
    st.iterations = it + 1;
    w = std::move(next);
    if (!std::isfinite(res)) throw PicardError("Picard residual is not finite", st);
    if (it > 0 && st.ratios.back() < 0.9) ++contracted;
    if (contracted >= 2 && it > 0 && res > st.residuals[it - 1])
      throw PicardError("Picard iteration diverging: residual grew after contracting", st);
    if (res <= opts.tol * std::max(1.0, nrm)) {
      st.converged = true;
      st.w_norm = nrm;
      st.in_ball = nrm <= st.ball_radius * (1.0 + 1e-12) + 1e-300;
      return {std::move(w), st};
    }
  }
  throw PicardError("Picard iteration did not converge in " + std::to_string(opts.max_iter) + " iterations", st);
}

NormReport regularity_report(const Trajectory& w, const ProblemParams& params) {
  NormReport rep;
  const double T = w.horizon();
  for (Composite c : {Composite::Y, Composite::X1, Composite::X2, Composite::X3, Composite::XT})
    rep.add(composite_name(c), composite_norm(w, c, params, T).value);

  auto modulus = [&](double mu, const SpaceNormSpec& spec) {
    double worst = 0.0;
    auto weighted = [&](std::size_t i) {
      const double t = w.time(i);
      return (t == 0.0 ? (mu == 0.0 ? 1.0 : 0.0) : std::pow(t, mu)) * w.field(i);
    };
    for (std::size_t i = 0; i + 1 < w.size(); ++i)
      worst = std::max(worst, space_norm(weighted(i + 1) - weighted(i), spec));
    return worst;
  };
  const double a = params.alpha;
  rep.add("cont_mu_s", modulus(params.mu_s, SpaceNormSpec::hs(2.0 * a * (params.mu_s - params.gamma) + a - 1.0)));
  rep.add("cont_energy", modulus(weight_energy(params), SpaceNormSpec::hs(0.0)));
  if (w.size() > 1) {
    const double t1 = w.time(1);
    rep.add("hs_first", std::pow(t1, params.mu_s) * space_norm(w.field(1), SpaceNormSpec::hs(params.s)));
  }
  return rep;
}

}  // namespace fracns
