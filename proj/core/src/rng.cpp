#include "fracns/rng.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace fracns {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double CounterStream::uniform() {
  // 53 random bits, shifted off zero.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterStream::normal() {
  // Box-Muller, one variate per pair of uniforms.
  const double u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t stream_key(std::uint64_t sample, std::uint64_t mode, std::uint64_t j) {
  return mix64(mix64(sample * 0x100000001b3ULL + 17) ^ (mode * 131 + j));
}

double DistributionSpec::draw(CounterStream& rng) const {
  switch (family) {
    case Family::Gaussian:
      return rng.normal();
    case Family::Rademacher:
      return (rng.next_u64() >> 63) ? 1.0 : -1.0;
    case Family::Uniform:
      return std::sqrt(3.0) * (2.0 * rng.uniform() - 1.0);
    case Family::StudentT: {
      const double z = rng.normal();
      double chi2 = 0.0;
      for (int i = 0; i < dof; ++i) {
        const double y = rng.normal();
        chi2 += y * y;
      }
      return z / std::sqrt(chi2 / dof);
    }
  }
  return 0.0;
}

std::string DistributionSpec::name() const {
  switch (family) {
    case Family::Gaussian:
      return "gaussian";
    case Family::Rademacher:
      return "rademacher";
    case Family::Uniform:
      return "uniform";
    case Family::StudentT:
      return "student_t";
  }
  return "?";
}

double DistributionSpec::finite_moment_bound() const {
  return family == Family::StudentT ? static_cast<double>(dof) : std::numeric_limits<double>::infinity();
}

DistributionSpec parse_distribution(const std::string& name) {
  DistributionSpec spec;
  if (name == "gaussian") {
    spec.family = Family::Gaussian;
  } else if (name == "rademacher") {
    spec.family = Family::Rademacher;
  } else if (name == "uniform") {
    spec.family = Family::Uniform;
  } else if (name == "student_t" || name.rfind("student_t:", 0) == 0) {
    spec.family = Family::StudentT;
    if (name.size() > 10) spec.dof = std::stoi(name.substr(10));
    spec.moment_order = 0;
  } else {
    throw std::invalid_argument("unknown distribution '" + name + "'");
  }
  return spec;
}

}  // namespace fracns
