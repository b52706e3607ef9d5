#include "fracns/trajectory.hpp"

#include <cmath>
#include <limits>

namespace fracns {

Trajectory::Trajectory(std::vector<double> times, std::vector<SpectralField> fields) : Trajectory() {
  if (times.size() != fields.size()) throw Error("trajectory: times and fields differ in length");
  for (std::size_t i = 0; i < times.size(); ++i) push_back(times[i], std::move(fields[i]));
}

const Grid& Trajectory::grid() const {
  if (fields_.empty()) throw Error("trajectory is empty");
  return fields_.front().grid();
}

void Trajectory::push_back(double t, SpectralField f) {
  if (t < 0.0) throw Error("trajectory times must be nonnegative");
  if (!times_.empty()) {
    if (!(t > times_.back())) throw Error("trajectory times must be strictly increasing");
    require_same_grid(fields_.front(), f, "trajectory");
  }
  times_.push_back(t);
  fields_.push_back(std::move(f));
}

std::size_t Trajectory::index_of_time(double t, double tol) const {
  std::size_t best = times_.size();
  double diff = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < times_.size(); ++i)
    if (std::abs(times_[i] - t) < diff) {
      diff = std::abs(times_[i] - t);
      best = i;
    }
  if (best < times_.size() && diff <= tol * std::abs(t)) return best;
  throw Error("time " + std::to_string(t) + " is not a trajectory node");
}

Trajectory Trajectory::window(double start, double end) const {
  Trajectory out;
  const double tol = 1e-12 * std::max(std::abs(start), std::abs(end));
  for (std::size_t i = 0; i < times_.size(); ++i)
    if (times_[i] >= start - tol && times_[i] <= end + tol) out.push_back(times_[i], fields_[i]);
  return out;
}

std::vector<double> graded_times(double start, double end, int m, double rho) {
  if (m < 1) throw Error("time grid needs at least one step");
  std::vector<double> t(m + 1);
  for (int i = 0; i <= m; ++i) t[i] = start + (end - start) * std::pow(static_cast<double>(i) / m, rho);
  t[m] = end;
  return t;
}

std::vector<double> uniform_times(double start, double end, int n) { return graded_times(start, end, n, 1.0); }

Trajectory zero_trajectory(const Grid& grid, int comps, const std::vector<double>& times) {
  Trajectory out;
  for (double t : times) out.push_back(t, SpectralField(grid, comps));
  return out;
}

Trajectory add(const Trajectory& a, const Trajectory& b) {
  if (a.times() != b.times()) throw Error("trajectories have different time grids");
  Trajectory out;
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(a.time(i), a.field(i) + b.field(i));
  return out;
}

Trajectory scale(double s, const Trajectory& a) {
  Trajectory out;
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(a.time(i), s * a.field(i));
  return out;
}

}  // namespace fracns
