#include "fracns/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fracns/bilinear.hpp"
#include "fracns/field_io.hpp"
#include "fracns/montecarlo.hpp"
#include "fracns/semigroup.hpp"

namespace fracns {

namespace {

class StageError : public Error {
public:
  StageError(std::string stage, const std::string& what) : Error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

private:
  std::string stage_;
};

template <class F>
auto stage(const std::string& name, F&& fn) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const ParamError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

std::string hex(std::uint64_t h) {
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

std::optional<int> completed_exit_code(const std::filesystem::path& dir, std::uint64_t hash) {
  std::ifstream in(dir / "verdicts.txt");
  if (!in) return std::nullopt;
  std::string line;
  std::optional<std::string> stored;
  std::optional<int> code;
  while (std::getline(in, line)) {
    if (line.rfind("config_hash = ", 0) == 0) stored = line.substr(14);
    if (line.rfind("exit_code = ", 0) == 0) code = std::stoi(line.substr(12));
  }
  if (stored && *stored == hex(hash) && code) return code;
  return std::nullopt;
}

void write_picard_csv(const std::filesystem::path& path, const PicardState& st) {
  CsvWriter csv(path, {"iteration", "residual", "ratio"});
  for (std::size_t i = 0; i < st.residuals.size(); ++i)
    csv.row({std::to_string(i + 1), fmt_num(st.residuals[i]), fmt_num(st.ratios[i])});
}

void write_fields(const std::filesystem::path& dir, const Trajectory& u, int count, double alpha) {
  std::filesystem::create_directories(dir);
  if (u.empty()) return;
  const std::size_t n = u.size();
  const std::size_t k = static_cast<std::size_t>(std::max(2, count));
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < k; ++i) idx.push_back(std::min(n - 1, i * (n - 1) / (k - 1)));
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  int c = 0;
  for (std::size_t i : idx) {
    char name[32];
    std::snprintf(name, sizeof name, "u_%03d.txt", c++);
    save_snapshot(dir / name, {u.field(i), u.time(i), alpha});
  }
}

double theoretical_decay_rate(const SpectralField& u0, double alpha) {
  const Grid& g = u0.grid();
  double best = kInf;
  for (std::size_t i = 0; i < g.size(); ++i) {
    double m = 0.0;
    for (int c = 0; c < u0.comps(); ++c) m += std::norm(u0.at(c, i));
    if (m > 1e-28 && g.k2(i) > 0.0) best = std::min(best, std::pow(g.k2(i), alpha));
  }
  return std::isfinite(best) ? best : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

InitialData make_initial_data(const RunConfig& cfg) {
  const Grid grid = make_grid(cfg.d, cfg.n);
  InitialData out;
  if (cfg.data == "zero") {
    out.u0 = SpectralField::vector(grid);
  } else if (cfg.data == "taylor_green") {
    if (cfg.d != 2) throw ParamError("Taylor-Green data needs d = 2");
    out.plan = taylor_green_plan(grid, cfg.amplitude);
    out.u0 = deterministic_data(*out.plan);
  } else {
    HsProfile prof = hs_profile_data(grid, cfg.s, cfg.cutoff, cfg.delta, cfg.amplitude);
    prof.plan.dist = parse_distribution(cfg.distribution);
    prof.plan.seed = cfg.seed;
    out.plan = std::move(prof.plan);
    out.u0 = synthesize(*out.plan);
  }
  return out;
}

std::vector<double> handoff_times(double tau, double T, double dt) {
  const auto picard = picard_times(tau, dt);
  std::vector<double> t;
  for (double x : picard)
    if (x >= 0.5 * tau) t.push_back(x);
  if (T > tau) {
    const auto rest = galerkin_times(tau, T, dt);
    t.insert(t.end(), rest.begin() + 1, rest.end());
  }
  return t;
}

PipelineResult run_mild(const RunConfig& cfg, std::optional<double> tau, const std::optional<std::filesystem::path>& dir) {
  PipelineResult res;
  try {
    res.params = cfg.validate();
  } catch (const ParamError& e) {
    res.exit_code = 2;
    res.stage = "params";
    res.message = e.what();
    return res;
  }
  try {
    res.u0 = stage("randomize", [&] { return make_initial_data(cfg).u0; });
    const double horizon = std::min(1.0, cfg.T);
    if (tau) {
      if (!(*tau > 0.0) || *tau > cfg.T) throw StageError("select_tau", "tau must lie in (0, T]");
      res.tau.tau = *tau;
    } else {
      res.tau = stage("select_tau", [&] {
        const Trajectory h = heat_trajectory(res.u0, graded_times(0.0, horizon, cfg.tau_grid, cfg.tau_grading), cfg.alpha);
        return select_tau(h, res.params, cfg.tau_threshold);
      });
    }
    const Trajectory h = heat_trajectory(res.u0, picard_times(res.tau.tau, cfg.dt, cfg.grading), cfg.alpha);
    try {
      PicardResult pr = picard_solve(h, res.params, {cfg.tol, cfg.max_iter});
      res.picard = pr.state;
      res.w1 = std::move(pr.w);
    } catch (const PicardError& e) {
      res.picard = e.state();
      if (dir) {
        std::filesystem::create_directories(*dir);
        write_picard_csv(*dir / "picard.csv", res.picard);
      }
      throw StageError("picard", e.what());
    }
    if (dir) {
      std::filesystem::create_directories(*dir);
      write_picard_csv(*dir / "picard.csv", res.picard);
      write_fields(*dir / "fields", res.w1, cfg.snapshots, cfg.alpha);
    }
  } catch (const StageError& e) {
    res.exit_code = 1;
    res.stage = e.stage();
    res.message = e.what();
  }
  return res;
}

PipelineResult run_pipeline(const RunConfig& cfg, const std::optional<std::filesystem::path>& dir) {
  PipelineResult res;
  try {
    res.params = cfg.validate();
  } catch (const ParamError& e) {
    res.exit_code = 2;
    res.stage = "params";
    res.message = e.what();
    return res;
  }
  const std::uint64_t hash = cfg.hash();
  if (dir) {
    if (auto code = completed_exit_code(*dir, hash)) {
      res.exit_code = *code;
      res.skipped = true;
      res.message = "run directory already holds this configuration";
      return res;
    }
    std::filesystem::create_directories(*dir);
    write_text(*dir / "params.json", params_json(res.params, cfg.n) + "\n");
    write_text(*dir / "config.ini", cfg.serialize());
    std::filesystem::remove(*dir / "verdicts.txt");
  }

  auto cert = [&](std::string name, double value, double threshold, bool pass) {
    res.certificates.push_back({std::move(name), value, threshold, pass});
  };

  try {
    PipelineResult mild = run_mild(cfg, std::nullopt, std::nullopt);
    res.u0 = std::move(mild.u0);
    res.tau = mild.tau;
    res.picard = mild.picard;
    if (dir && !res.picard.residuals.empty()) write_picard_csv(*dir / "picard.csv", res.picard);
    if (mild.exit_code != 0) {
      res.exit_code = mild.exit_code;
      res.stage = mild.stage;
      res.message = mild.message;
      throw StageError(mild.stage, mild.message);
    }
    res.w1 = std::move(mild.w1);
    const double tau = res.tau.tau;
    const HeatFlow h(res.u0, cfg.alpha);

    res.w2 = stage("galerkin", [&] {
      const auto times = handoff_times(tau, cfg.T, cfg.dt);
      const SpectralField& start = res.w1.field(res.w1.index_of_time(0.5 * tau, 1e-9));
      return galerkin_run(start, h, times, cfg.alpha);
    });

    GlueResult glued;
    try {
      glued = glue_solutions(res.w1, res.w2, cfg.overlap_tol);
    } catch (const Error& e) {
      throw StageError("glue", e.what());
    }
    res.w = std::move(glued.w);
    res.overlap = glued.overlap;
    if (dir) {
      CsvWriter csv(*dir / "overlap.csv", {"time", "mismatch"});
      for (std::size_t i = 0; i < res.overlap.times.size(); ++i)
        csv.row({fmt_num(res.overlap.times[i]), fmt_num(res.overlap.mismatch[i])});
    }

    stage("energy", [&] {
      res.ledger = energy_audit(res.w2, h, cfg.alpha);
      res.gronwall = gronwall_terms(res.ledger, h, res.params);
      res.gronwall_needed = gronwall_needed_constant(res.ledger, res.gronwall);
      res.gronwall_c = cfg.gronwall_c > 0.0 ? cfg.gronwall_c : res.gronwall_needed;
      return 0;
    });
    double margin = kInf;
    if (dir) {
      CsvWriter csv(*dir / "energy.csv", {"time", "l2", "dissipation", "work_ww", "work_hw", "e_w", "residual",
                                          "gronwall_rhs", "margin"});
      for (std::size_t n = 0; n < res.ledger.rows.size(); ++n) {
        const LedgerRow& r = res.ledger.rows[n];
        const double rhs = res.gronwall_c * (res.gronwall.a + res.gronwall.f[n]) *
                           std::exp(res.gronwall_c * res.gronwall.g[n]);
        csv.row({fmt_num(r.t), fmt_num(std::sqrt(r.l2sq)), fmt_num(r.diss), fmt_num(r.work_ww), fmt_num(r.work_hw),
                 fmt_num(r.e_w), fmt_num(r.residual), fmt_num(rhs), fmt_num(rhs > 0.0 ? (rhs - r.e_w) / rhs : 0.0)});
      }
    }
    for (std::size_t n = 0; n < res.ledger.rows.size(); ++n) {
      const double rhs =
          res.gronwall_c * (res.gronwall.a + res.gronwall.f[n]) * std::exp(res.gronwall_c * res.gronwall.g[n]);
      if (rhs > 0.0) margin = std::min(margin, (rhs - res.ledger.rows[n].e_w) / rhs);
    }

    const AssembledSolution assembled = stage("assemble", [&] {
      return assemble_u(heat_trajectory(res.u0, res.w.times(), cfg.alpha), res.w, res.params);
    });
    res.u = assembled.u;
    res.norms = assembled.certificates;

    res.weak = stage("weak_form", [&] {
      const bool late = res.w.horizon() > tau && res.w.window(tau, res.w.horizon()).size() >= 2;
      return late ? weak_form_residual(res.u, cfg.alpha, tau, res.w.horizon())
                  : weak_form_residual(res.u, cfg.alpha, 0.5 * tau, tau);
    });
    res.decay = fit_decay(res.u);

    cert("picard_converged", static_cast<double>(res.picard.iterations), static_cast<double>(cfg.max_iter),
         res.picard.converged);
    cert("overlap_mismatch", res.overlap.max_mismatch, cfg.overlap_tol, res.overlap.max_mismatch <= cfg.overlap_tol);
    for (const auto& e : res.norms.entries) cert(e.name, e.value, kInf, std::isfinite(e.value));
    cert("weak_form_residual", res.weak.residual, 1e-4, res.weak.residual <= 1e-4);
    if (cfg.gronwall_c > 0.0)
      cert("gronwall_margin", margin, 0.0, h.is_zero() || margin > 0.0);

    if (dir) {
      const double theory = theoretical_decay_rate(res.u0, cfg.alpha);
      CsvWriter csv(*dir / "decay.csv", {"time", "l2", "fitted_rate", "theoretical_rate"});
      for (std::size_t i = 0; i < res.decay.t.size(); ++i)
        csv.row({fmt_num(res.decay.t[i]), fmt_num(res.decay.l2[i]), fmt_num(res.decay.rate), fmt_num(theory)});
      write_fields(*dir / "fields", res.u, cfg.snapshots, cfg.alpha);
    }
  } catch (const StageError& e) {
    res.exit_code = 1;
    if (res.stage.empty()) {
      res.stage = e.stage();
      res.message = e.what();
    }
  }

  if (res.exit_code == 0)
    for (const auto& c : res.certificates)
      if (!c.pass) res.exit_code = 1;

  if (dir) {
    CsvWriter csv(*dir / "certificates.csv", {"name", "value", "threshold", "verdict"});
    for (const auto& c : res.certificates)
      csv.row({c.name, fmt_num(c.value), fmt_num(c.threshold), c.pass ? "PASS" : "FAIL"});
    std::ostringstream v;
    v << "config_hash = " << hex(hash) << "\n";
    v << "exit_code = " << res.exit_code << "\n";
    if (!res.stage.empty()) v << "failed_stage = " << res.stage << "\n" << "message = " << res.message << "\n";
    for (const auto& c : res.certificates) v << c.name << " " << (c.pass ? "PASS" : "FAIL") << "\n";
    write_text(*dir / "verdicts.txt", v.str());
  }
  return res;
}

double calibrate_gronwall(RunConfig cfg, const std::vector<std::uint64_t>& seeds) {
  cfg.gronwall_c = 0.0;
  double worst = 0.0;
  for (std::uint64_t s : seeds) {
    cfg.seed = s;
    const PipelineResult r = run_pipeline(cfg, std::nullopt);
    if (r.exit_code != 0 && r.stage.size()) throw Error("calibration run failed: " + r.message);
    worst = std::max(worst, r.gronwall_needed);
  }
  return 2.0 * worst;
}

const std::vector<std::string>& lemma_ids() {
  static const std::vector<std::string> ids = {"PQ", "EY", "MR", "MR1", "ML", "HL", "NW", "SE", "TAIL", "A16", "A17", "EE"};
  return ids;
}

namespace {

VerifierReport bilinear_identity_check(const RunConfig& cfg, bool symmetric) {
  VerifierReport rep;
  rep.lemma = symmetric ? "A17" : "A16";
  rep.params = "d=" + std::to_string(cfg.d) + ";N=8,16,32;draws=100";
  rep.theoretical = 0.0;
  rep.tolerance = 1e-12;
  double worst = 0.0;
  for (int n : {8, 16, 32}) {
    const Grid grid = make_grid(cfg.d, n);
    const int kmax = n / 2 - 1;
    for (std::uint64_t m = 0; m < 100; ++m) {
      const SpectralField f = random_band_field(grid, cfg.seed, 3 * m, kmax, true);
      const SpectralField g = random_band_field(grid, cfg.seed, 3 * m + 1, kmax, false);
      const SpectralField h = random_band_field(grid, cfg.seed, 3 * m + 2, kmax, false);
      const SpectralField fh = advect(f, h);
      double value, scale;
      if (symmetric) {
        const SpectralField fg = advect(f, g);
        value = inner_product(fg, h) + inner_product(fh, g);
        scale = std::sqrt(inner_product(fg, fg) * inner_product(h, h)) +
                std::sqrt(inner_product(fh, fh) * inner_product(g, g));
      } else {
        value = inner_product(fh, h);
        scale = std::sqrt(inner_product(fh, fh) * inner_product(h, h));
      }
      worst = std::max(worst, std::abs(value) / scale);
    }
  }
  rep.fitted = worst;
  rep.ratio = worst;
  rep.pass = worst <= rep.tolerance;
  return rep;
}

VerifierReport vdual_sampling_check(const RunConfig& cfg) {
  VerifierReport rep;
  rep.lemma = "EE";
  const VSpaceSpec vs{cfg.d, cfg.alpha};
  rep.params = "d=" + std::to_string(cfg.d) + ";alpha=" + fmt_num(cfg.alpha) + ";rho=" + fmt_num(vs.rho());
  rep.theoretical = 1.0;
  const Grid grid = make_grid(cfg.d, cfg.d == 2 ? 32 : 16);
  const int kmax = grid.n() / 2 - 1;
  double worst = 0.0;
  for (std::uint64_t pair = 0; pair < 5; ++pair) {
    const SpectralField f = random_band_field(grid, cfg.seed + 17, 2 * pair, 4, true);
    const SpectralField g = random_band_field(grid, cfg.seed + 17, 2 * pair + 1, 4, true);
    const SpectralField b = bilinear_B(f, g);
    const double bound = vdual_bound(f, g, vs).bound;
    for (std::uint64_t m = 0; m < 20; ++m) {
      const SpectralField h = random_band_field(grid, cfg.seed + 29, 20 * pair + m, std::min(kmax, 6), true);
      worst = std::max(worst, std::abs(inner_product(b, h)) / (bound * v_norm(h, vs)));
    }
  }
  rep.fitted = worst;
  rep.ratio = worst;
  rep.pass = worst <= 1.0;
  return rep;
}

}  // namespace

SuiteResult verify_suite(const RunConfig& cfg, const std::vector<std::string>& lemmas) {
  for (const auto& id : lemmas)
    if (std::find(lemma_ids().begin(), lemma_ids().end(), id) == lemma_ids().end())
      throw Error("unknown lemma id '" + id + "'");
  SuiteResult out;
  if (lemmas.empty()) return out;
  const ProblemParams params = cfg.validate();
  const DistributionSpec dist = parse_distribution(cfg.distribution);
  const std::size_t samples = static_cast<std::size_t>(std::max(1000, cfg.mc_samples));

  // TAIL samples sup_t ||h||_{H^s} (the a = inf, rho = 0, eta = s case).
  std::optional<EnsembleStats> se_stats;
  auto se_ensemble = [&]() -> const EnsembleStats& {
    if (!se_stats) {
      HsProfile prof = hs_profile_data(make_grid(cfg.d, cfg.n), cfg.s, std::min(cfg.cutoff, cfg.n / 2 - 1), cfg.delta);
      prof.plan.dist = dist;
      prof.plan.seed = cfg.seed;
      HeatNormSpec spec;
      spec.rho = 0.0;
      spec.eta = cfg.s;
      spec.a = kInf;
      spec.p = 2.0;
      spec.n_times = 8;
      se_stats = heatflow_norm_ensemble(prof.plan, spec, params, samples, cfg.threads);
    }
    return *se_stats;
  };

  for (const auto& id : lemmas) {
    VerifierReport rep;
    if (id == "PQ") {
      const Grid grid = make_grid(2, 256);
      rep = verify_smoothing(flat_spectrum(grid, 127), 1.0, 2.0, 2.0, cfg.alpha);
    } else if (id == "EY") {
      rep = verify_time_hls(default_signal_family(cfg.seed), 0.5, 4.0 / 3.0, 4.0);
    } else if (id == "MR") {
      rep = verify_maximal_regularity(random_forcing_family(cfg.seed), 2.0, 2.0, cfg.alpha);
    } else if (id == "MR1") {
      rep = verify_maximal_regularity(random_forcing_family(cfg.seed), 2.0, 2.0, cfg.alpha, {}, true,
                                      2.0 * cfg.alpha);
    } else if (id == "ML" || id == "HL") {
      rep = verify_history_operators(random_forcing_family(cfg.seed), cfg.alpha, 0.0, cfg.alpha);
      rep.lemma = id;
    } else if (id == "NW") {
      KhinchinOptions ko;
      ko.samples = samples;
      ko.r = params.r_s;
      ko.seed = cfg.seed;
      ko.threads = cfg.threads;
      const KhinchinSuite suite = khinchin_suite(dist, ko);
      rep = suite.reports.front();
      rep.lemma = "NW";
      rep.params = "dist=" + dist.name() + ";r=" + fmt_num(params.r_s) + ";families=5";
      rep.fitted = suite.spread;
      rep.theoretical = gaussian_abs_moment_root(params.r_s);
      rep.ratio = suite.spread / rep.theoretical;
      rep.pass = suite.pass;
      for (const auto& r : suite.reports)
        rep.notes.push_back(r.params + ":" + fmt_num(r.fitted) + (r.pass ? "" : " FAIL"));
    } else if (id == "SE") {
      HeatNormSpec spec;
      spec.eta = cfg.s;
      spec.a = kInf;
      spec.n_times = 8;
      rep = se_profile_study(make_grid(cfg.d, cfg.n), params, dist, cfg.seed, std::min(cfg.cutoff, cfg.n / 2 - 1),
                             spec, samples, cfg.threads)
                .report;
    } else if (id == "TAIL") {
      rep = tail_check(se_ensemble().samples, params.r_s).report;
    } else if (id == "A16") {
      rep = bilinear_identity_check(cfg, false);
    } else if (id == "A17") {
      rep = bilinear_identity_check(cfg, true);
    } else if (id == "EE") {
      rep = vdual_sampling_check(cfg);
    }
    out.pass = out.pass && rep.pass;
    out.reports.push_back(std::move(rep));
  }
  return out;
}

void write_reports_csv(const std::filesystem::path& path, const std::vector<VerifierReport>& reports) {
  CsvWriter csv(path, VerifierReport::csv_header());
  for (const auto& r : reports) csv.row(r.csv_row());
}

}  // namespace fracns
