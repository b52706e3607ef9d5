#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "fracns/spectral.hpp"

namespace fracns {

/// Time-stamped sequence of fields sharing one grid.
class Trajectory {
public:
  Trajectory() : cache_(std::make_shared<Cache>()) {}
  Trajectory(std::vector<double> times, std::vector<SpectralField> fields);
  // Copies start with an empty cache, since they may grow independently.
  Trajectory(const Trajectory& o) : times_(o.times_), fields_(o.fields_), cache_(std::make_shared<Cache>()) {}
  Trajectory& operator=(const Trajectory& o) {
    if (this != &o) {
      times_ = o.times_;
      fields_ = o.fields_;
      cache_ = std::make_shared<Cache>();
    }
    return *this;
  }
  Trajectory(Trajectory&&) = default;
  Trajectory& operator=(Trajectory&&) = default;

  std::size_t size() const { return times_.size(); }
  bool empty() const { return times_.empty(); }
  const std::vector<double>& times() const { return times_; }
  const std::vector<SpectralField>& fields() const { return fields_; }
  double time(std::size_t i) const { return times_[i]; }
  const SpectralField& field(std::size_t i) const { return fields_[i]; }
  const SpectralField& back() const { return fields_.back(); }
  const Grid& grid() const;
  double start() const { return times_.front(); }
  double horizon() const { return times_.back(); }

  /// Appends (t, f); t must exceed the last time.
  void push_back(double t, SpectralField f);

  /// Index of the node nearest t, which must agree with t to relative
  /// tolerance tol; throws otherwise.
  std::size_t index_of_time(double t, double tol = 1e-12) const;
  /// Nodes with start <= t <= end (inclusive, tolerance 1e-12).
  Trajectory window(double start, double end) const;

  /// Cached per-node scalar keyed by a norm string; computed on first use.
  template <class F>
  double cached(std::size_t i, const std::string& key, F&& compute) const {
    {
      std::lock_guard lock(cache_->mu);
      auto it = cache_->values.find({i, key});
      if (it != cache_->values.end()) return it->second;
    }
    const double v = compute(fields_[i]);
    std::lock_guard lock(cache_->mu);
    cache_->values[{i, key}] = v;
    return v;
  }

private:
  struct Cache {
    std::mutex mu;
    std::map<std::pair<std::size_t, std::string>, double> values;
  };

  std::vector<double> times_;
  std::vector<SpectralField> fields_;
  std::shared_ptr<Cache> cache_;
};

/// t_i = start + (end - start) (i/M)^rho, i = 0..M.
std::vector<double> graded_times(double start, double end, int m, double rho);
/// n equal steps from start to end, n + 1 nodes.
std::vector<double> uniform_times(double start, double end, int n);

/// Trajectory whose fields are all zero.
Trajectory zero_trajectory(const Grid& grid, int comps, const std::vector<double>& times);

/// a + b node-wise; time grids must agree.
Trajectory add(const Trajectory& a, const Trajectory& b);
Trajectory scale(double s, const Trajectory& a);

}  // namespace fracns
