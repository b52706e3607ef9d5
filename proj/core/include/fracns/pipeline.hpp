#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fracns/config.hpp"
#include "fracns/energy.hpp"
#include "fracns/glue.hpp"
#include "fracns/mild.hpp"
#include "fracns/randomization.hpp"
#include "fracns/verifiers.hpp"

namespace fracns {

/// Initial datum described by the config: the randomized H^s profile, the
/// Taylor-Green pair (multipliers fixed to 1) or zero.
struct InitialData {
  SpectralField u0;
  std::optional<RandomizationPlan> plan;
};

InitialData make_initial_data(const RunConfig& cfg);

/// Galerkin nodes after the handoff: the Picard nodes of [tau/2, tau], so the
/// overlap is compared node by node, then steps of dt up to T.
std::vector<double> handoff_times(double tau, double T, double dt);

struct Certificate {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

struct PipelineResult {
  /// 0 when every certificate passes, 1 on a failed certificate or stage,
  /// 2 on invalid parameters.
  int exit_code = 0;
  bool skipped = false;
  std::string stage;
  std::string message;

  ProblemParams params;
  SpectralField u0;
  TauSelection tau;
  PicardState picard;
  Trajectory w1, w2, w, u;
  OverlapReport overlap;
  EnergyLedger ledger;
  GronwallTerms gronwall;
  double gronwall_c = 0.0;
  double gronwall_needed = 0.0;
  WeakFormResidual weak;
  DecayFit decay;
  NormReport norms;
  std::vector<Certificate> certificates;
};

/// randomize -> heat flow -> select tau -> Picard on [0, tau] -> Galerkin on
/// [tau/2, T] -> glue -> assemble u = h + w -> certificates. With a run
/// directory, writes
///
///   params.json config.ini fields/ picard.csv energy.csv overlap.csv
///   certificates.csv decay.csv verdicts.txt
///
/// and returns immediately when verdicts.txt already records the same
/// config hash.
PipelineResult run_pipeline(const RunConfig& cfg, const std::optional<std::filesystem::path>& dir);

/// Twice the largest Gronwall constant needed over runs with the given seeds.
double calibrate_gronwall(RunConfig cfg, const std::vector<std::uint64_t>& seeds);

/// Mild solution on [0, tau] only; writes picard.csv and fields when dir is set.
PipelineResult run_mild(const RunConfig& cfg, std::optional<double> tau, const std::optional<std::filesystem::path>& dir);

const std::vector<std::string>& lemma_ids();

struct SuiteResult {
  std::vector<VerifierReport> reports;
  bool pass = true;
};

/// Runs each registered verifier with config-derived parameters. Throws on
/// an unknown id.
SuiteResult verify_suite(const RunConfig& cfg, const std::vector<std::string>& lemmas);

void write_reports_csv(const std::filesystem::path& path, const std::vector<VerifierReport>& reports);

}  // namespace fracns
