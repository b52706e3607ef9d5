#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "fracns/params.hpp"

namespace fracns {

/// Flat `key = value` run configuration. Lines starting with '#' or ';'
/// are comments.
struct RunConfig {
  int d = 2;
  int n = 32;
  double alpha = 0.8;
  double s = -0.4;
  std::uint64_t seed = 1;
  std::string distribution = "gaussian";
  /// randomized | taylor_green | zero
  std::string data = "randomized";
  int cutoff = 10;
  double amplitude = 1.0;
  double delta = 0.1;
  double T = 1.0;
  double dt = 1e-3;
  double tau_threshold = 0.05;
  double tol = 1e-8;
  int max_iter = 30;
  double grading = 2.0;
  /// Graded heat-flow grid on [0, min(1, T)] used to select tau.
  int tau_grid = 256;
  double tau_grading = 4.0;
  double overlap_tol = 1e-5;
  /// Gronwall constant; 0 reports the constant the run needs instead.
  double gronwall_c = 0.0;
  int snapshots = 11;
  /// Ensemble size of the Monte Carlo verifiers.
  int mc_samples = 10000;
  unsigned threads = 0;
  std::string output = "run";

  /// Canonical `key = value` text, one key per line in a fixed order.
  std::string serialize() const;
  /// FNV-1a of serialize().
  std::uint64_t hash() const;
  /// Throws ParamError when (d, alpha, s) or the numerics are invalid.
  ProblemParams validate() const;
};

/// Parses the INI text; unknown keys and malformed values throw.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

std::uint64_t fnv1a(const std::string& text);

}  // namespace fracns
