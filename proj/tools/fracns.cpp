#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fracns/bilinear.hpp"
#include "fracns/field_io.hpp"
#include "fracns/montecarlo.hpp"
#include "fracns/norms.hpp"
#include "fracns/pipeline.hpp"
#include "fracns/semigroup.hpp"

namespace fs = std::filesystem;
using namespace fracns;

namespace {

struct Globals {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
};

RunConfig load(const Globals& g) {
  RunConfig cfg = g.config.empty() ? RunConfig{} : load_config(g.config);
  if (g.seed) cfg.seed = *g.seed;
  if (g.threads) cfg.threads = *g.threads;
  if (!g.out.empty()) cfg.output = g.out;
  return cfg;
}

int report_failure(const PipelineResult& r) {
  std::cerr << "fracns: " << r.message << "\n";
  return r.exit_code;
}

int cmd_run(const Globals& g) {
  const RunConfig cfg = load(g);
  const PipelineResult r = run_pipeline(cfg, fs::path(cfg.output));
  if (r.exit_code == 2) return report_failure(r);
  if (r.skipped) {
    std::cout << cfg.output << ": up to date (exit " << r.exit_code << ")\n";
    return r.exit_code;
  }
  if (!r.stage.empty()) return report_failure(r);
  std::cout << "tau = " << fmt_num(r.tau.tau) << "  picard iterations = " << r.picard.iterations
            << "  overlap = " << fmt_num(r.overlap.max_mismatch) << "\n";
  for (const auto& c : r.certificates) std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << " " << fmt_num(c.value) << "\n";
  return r.exit_code;
}

int cmd_mild(const Globals& g, const std::string& tau, std::optional<double> threshold, std::optional<double> tol) {
  RunConfig cfg = load(g);
  if (threshold) cfg.tau_threshold = *threshold;
  if (tol) cfg.tol = *tol;
  std::optional<double> t;
  if (tau != "auto") t = std::stod(tau);
  const PipelineResult r = run_mild(cfg, t, fs::path(cfg.output));
  if (r.exit_code != 0) return report_failure(r);
  std::cout << "tau = " << fmt_num(r.tau.tau) << "  lambda = " << fmt_num(r.picard.lambda)
            << "  iterations = " << r.picard.iterations << "\n";
  for (std::size_t i = 0; i < r.picard.residuals.size(); ++i)
    std::cout << i + 1 << " " << fmt_num(r.picard.residuals[i]) << " " << fmt_num(r.picard.ratios[i]) << "\n";
  return 0;
}

int cmd_energy(const Globals& g, std::optional<double> t0, std::optional<double> T, std::optional<double> dt,
               double gronwall_c) {
  RunConfig cfg = load(g);
  if (T) cfg.T = *T;
  if (dt) cfg.dt = *dt;
  std::optional<double> tau;
  if (t0) tau = 2.0 * *t0;
  const PipelineResult mild = run_mild(cfg, tau, std::nullopt);
  if (mild.exit_code != 0) return report_failure(mild);
  const double start = 0.5 * mild.tau.tau;
  const HeatFlow h(mild.u0, cfg.alpha);
  const Trajectory w = galerkin_run(mild.w1.field(mild.w1.index_of_time(start, 1e-9)), h,
                                    handoff_times(mild.tau.tau, cfg.T, cfg.dt), cfg.alpha);
  const EnergyLedger ledger = energy_audit(w, h, cfg.alpha);
  const GronwallTerms terms = gronwall_terms(ledger, h, mild.params);
  const double needed = gronwall_needed_constant(ledger, terms);
  const double c = gronwall_c > 0.0 ? gronwall_c : needed;

  fs::create_directories(cfg.output);
  CsvWriter csv(fs::path(cfg.output) / "energy.csv",
                {"time", "l2", "dissipation", "work_ww", "work_hw", "e_w", "residual", "gronwall_rhs", "margin"});
  double margin = kInf;
  for (std::size_t n = 0; n < ledger.rows.size(); ++n) {
    const LedgerRow& r = ledger.rows[n];
    const double rhs = c * (terms.a + terms.f[n]) * std::exp(c * terms.g[n]);
    const double m = rhs > 0.0 ? (rhs - r.e_w) / rhs : 0.0;
    if (rhs > 0.0) margin = std::min(margin, m);
    csv.row({fmt_num(r.t), fmt_num(std::sqrt(r.l2sq)), fmt_num(r.diss), fmt_num(r.work_ww), fmt_num(r.work_hw),
             fmt_num(r.e_w), fmt_num(r.residual), fmt_num(rhs), fmt_num(m)});
  }
  const fs::path fields = fs::path(cfg.output) / "fields";
  fs::create_directories(fields);
  save_snapshot(fields / "w_end.txt", {w.back(), w.horizon(), cfg.alpha});
  std::cout << "residual rate = " << fmt_num(ledger.max_residual_rate) << "  needed C = " << fmt_num(needed)
            << "  margin(C = " << fmt_num(c) << ") = " << fmt_num(margin) << "\n";
  return gronwall_c > 0.0 && !(margin > 0.0) ? 1 : 0;
}

int cmd_mc(const Globals& g, std::size_t samples, const std::string& check) {
  RunConfig cfg = load(g);
  cfg.mc_samples = static_cast<int>(samples);
  const ProblemParams params = cfg.validate();
  const DistributionSpec dist = parse_distribution(cfg.distribution);
  const fs::path out(cfg.output);
  fs::create_directories(out);
  std::vector<VerifierReport> reports;

  if (check == "khinchin") {
    KhinchinOptions ko;
    ko.samples = samples;
    ko.r = params.r_s;
    ko.seed = cfg.seed;
    ko.threads = cfg.threads;
    const KhinchinSuite suite = khinchin_suite(dist, ko);
    reports = suite.reports;
    write_reports_csv(out / "mc_khinchin.csv", reports);
  } else if (check == "senorm") {
    HeatNormSpec spec;
    spec.eta = cfg.s;
    spec.a = kInf;
    const SeStudy study = se_profile_study(make_grid(cfg.d, cfg.n), params, dist, cfg.seed,
                                           std::min(cfg.cutoff, cfg.n / 2 - 1), spec, samples, cfg.threads);
    CsvWriter csv(out / "mc_senorm.csv", {"delta", "cutoff", "T", "moment_rs", "moment_ceil", "data_norm", "ratio"});
    for (const auto& r : study.rows)
      csv.row({fmt_num(r.delta), std::to_string(r.cutoff), fmt_num(r.T), fmt_num(r.stats.moment_rs),
               fmt_num(r.stats.moment_ceil), fmt_num(r.stats.data_norm), fmt_num(r.stats.ratio)});
    reports.push_back(study.report);
  } else if (check == "tail") {
    HsProfile prof = hs_profile_data(make_grid(cfg.d, cfg.n), cfg.s, std::min(cfg.cutoff, cfg.n / 2 - 1), cfg.delta);
    prof.plan.dist = dist;
    prof.plan.seed = cfg.seed;
    HeatNormSpec spec;
    spec.eta = cfg.s;
    spec.a = kInf;
    const EnsembleStats st = heatflow_norm_ensemble(prof.plan, spec, params, samples, cfg.threads);
    const TailReport tr = tail_check(st.samples, params.r_s);
    CsvWriter csv(out / "mc_tail.csv", {"lambda", "count", "exceedance", "bound"});
    for (const auto& p : tr.points)
      csv.row({fmt_num(p.lambda), std::to_string(p.count), fmt_num(p.exceedance), fmt_num(p.bound)});
    reports.push_back(tr.report);
  } else {
    throw CLI::ValidationError("--check", "expected khinchin, senorm or tail");
  }
  write_reports_csv(out / "mc_summary.csv", reports);
  bool pass = true;
  for (const auto& r : reports) {
    std::cout << (r.pass ? "PASS " : "FAIL ") << r.lemma << " " << r.params << " fitted=" << fmt_num(r.fitted) << "\n";
    pass = pass && r.pass;
  }
  return pass ? 0 : 1;
}

int cmd_verify(const Globals& g, const std::vector<std::string>& lemmas) {
  const RunConfig cfg = load(g);
  const SuiteResult suite = verify_suite(cfg, lemmas);
  if (!g.out.empty() || !g.config.empty()) {
    fs::create_directories(cfg.output);
    write_reports_csv(fs::path(cfg.output) / "verify.csv", suite.reports);
  }
  for (const auto& r : suite.reports)
    std::cout << (r.pass ? "PASS " : "FAIL ") << r.lemma << " fitted=" << fmt_num(r.fitted)
              << " theoretical=" << fmt_num(r.theoretical) << " ratio=" << fmt_num(r.ratio) << "\n";
  return suite.pass ? 0 : 1;
}

int cmd_norms(const Globals& g, const std::string& field, double s) {
  const RunConfig cfg = load(g);
  const Snapshot snap = load_snapshot(field);
  const double alpha = snap.alpha > 0.0 ? snap.alpha : cfg.alpha;
  std::cout << "L2 " << fmt_num(lebesgue_norm(snap.field, 2.0)) << "\n";
  std::cout << "L4 " << fmt_num(lebesgue_norm(snap.field, 4.0)) << "\n";
  std::cout << "Linf " << fmt_num(lebesgue_norm(snap.field, kInf)) << "\n";
  std::cout << "H^" << fmt_num(s) << " " << fmt_num(space_norm(snap.field, SpaceNormSpec::hs(s))) << "\n";
  std::cout << "H^" << fmt_num(alpha) << " " << fmt_num(space_norm(snap.field, SpaceNormSpec::hs(alpha))) << "\n";
  std::cout << "max|div| " << fmt_num(snap.field.divergence_residual()) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fractional Navier-Stokes pseudo-spectral simulator"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config, "INI run configuration")->check(CLI::ExistingFile);
  app.add_option("--out", g.out, "output directory");
  app.add_option("--seed", g.seed, "random seed");
  app.add_option("--threads", g.threads, "worker threads (0 = all)");

  auto* run = app.add_subcommand("run", "full pipeline into a run directory");

  auto* mild = app.add_subcommand("mild", "small-time mild solution by Picard iteration");
  std::string tau = "auto";
  std::optional<double> threshold, tol;
  mild->add_option("--tau", tau, "auto or a positive time");
  mild->add_option("--threshold", threshold, "||h||_Y threshold for tau selection");
  mild->add_option("--tol", tol, "Picard tolerance");

  auto* energy = app.add_subcommand("energy", "Galerkin run from tau/2 with the energy audit");
  std::optional<double> t0, T, dt;
  double gronwall_c = 0.0;
  energy->add_option("--t0", t0, "start time (tau/2)");
  energy->add_option("--T", T, "final time");
  energy->add_option("--dt", dt, "time step");
  energy->add_option("--gronwall-c", gronwall_c, "fitted Gronwall constant");

  auto* mc = app.add_subcommand("mc", "Monte Carlo checks");
  std::size_t samples = 10000;
  std::string check = "khinchin";
  mc->add_option("--samples", samples, "ensemble size");
  mc->add_option("--check", check, "khinchin | senorm | tail")
      ->check(CLI::IsMember({"khinchin", "senorm", "tail"}));

  auto* verify = app.add_subcommand("verify", "run verifiers by id");
  std::vector<std::string> lemmas;
  verify->add_option("lemmas", lemmas, "ids: PQ EY MR MR1 ML HL NW SE TAIL A16 A17 EE");

  auto* norms = app.add_subcommand("norms", "norms of a field snapshot");
  std::string field;
  double s = -0.5;
  norms->add_option("field", field, "snapshot file")->required()->check(CLI::ExistingFile);
  norms->add_option("--s", s, "Sobolev exponent");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(g);
    if (*mild) return cmd_mild(g, tau, threshold, tol);
    if (*energy) return cmd_energy(g, t0, T, dt, gronwall_c);
    if (*mc) return cmd_mc(g, samples, check);
    if (*verify) return cmd_verify(g, lemmas);
    if (*norms) return cmd_norms(g, field, s);
  } catch (const ParamError& e) {
    std::cerr << "fracns: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "fracns: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
