#pragma once

#include <cstdint>
#include <string>

namespace fracns {

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Counter-based stream: draw n of stream (seed, key) is a pure function of
/// (seed, key, n), so ensembles can be generated in any order or in parallel.
class CounterStream {
public:
  CounterStream(std::uint64_t seed, std::uint64_t key) : base_(mix64(seed ^ mix64(key + 0x632be59bd9b4e019ULL))) {}

  std::uint64_t next_u64() { return mix64(base_ + 0x9e3779b97f4a7c15ULL * ++counter_); }
  /// Uniform on the open interval (0, 1).
  double uniform();
  double normal();

private:
  std::uint64_t base_;
  std::uint64_t counter_ = 0;
};

/// Stream key for coefficient (k, j) of ensemble member `sample`.
std::uint64_t stream_key(std::uint64_t sample, std::uint64_t mode, std::uint64_t j);

enum class Family { Gaussian, Rademacher, Uniform, StudentT };

/// Law of the multipliers g_k^j: mean zero, unit variance except StudentT
/// (a heavy-tailed negative control with `dof` degrees of freedom).
struct DistributionSpec {
  Family family = Family::Gaussian;
  int dof = 2;
  /// Moment order 2n the law is certified for; StudentT only has moments
  /// below dof.
  int moment_order = 8;

  double draw(CounterStream& rng) const;
  std::string name() const;
  /// Largest moment order that is finite (infinity encoded as a large value).
  double finite_moment_bound() const;
};

DistributionSpec parse_distribution(const std::string& name);

}  // namespace fracns
