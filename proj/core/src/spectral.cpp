#include "fracns/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

namespace fracns {

namespace {

// FFTW planning is not thread-safe; execution with the new-array interface is.
class PlanCache {
public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(int d, int n, int sign) {
    std::lock_guard lock(mutex_);
    auto key = std::make_tuple(d, n, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::size_t total = 1;
    std::array<int, 3> dims{};
    for (int i = 0; i < d; ++i) {
      dims[i] = n;
      total *= static_cast<std::size_t>(n);
    }
    auto* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * total));
    fftw_plan plan = fftw_plan_dft(d, dims.data(), buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(buf);
    if (plan == nullptr) throw Error("FFTW planning failed");
    plans_.emplace(key, plan);
    return plan;
  }

  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

void fft_inplace(std::vector<Complex>& data, int d, int n, int sign) {
  fftw_plan plan = PlanCache::instance().get(d, n, sign);
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, p, p);
}

int wrap_index(int k, int n) { return k >= 0 ? k : k + n; }

std::size_t linear_index(const Wavevector& k, int d, int n) {
  std::size_t idx = 0;
  for (int i = 0; i < d; ++i) idx = idx * static_cast<std::size_t>(n) + static_cast<std::size_t>(wrap_index(k[i], n));
  return idx;
}

}  // namespace

Grid make_grid(int d, int n) {
  if (d != 2 && d != 3) throw std::invalid_argument("dimension must be 2 or 3");
  if (n % 2 != 0) throw std::invalid_argument("N must be even");
  if (n < 8) throw std::invalid_argument("N must be at least 8");

  Grid g;
  g.d_ = d;
  g.n_ = n;
  g.size_ = 1;
  for (int i = 0; i < d; ++i) g.size_ *= static_cast<std::size_t>(n);

  auto tables = std::make_shared<Grid::Tables>();
  tables->k.resize(g.size_);
  tables->k2.resize(g.size_);
  tables->kmag.resize(g.size_);
  tables->nyquist.resize(g.size_);
  for (std::size_t idx = 0; idx < g.size_; ++idx) {
    Wavevector k{0, 0, 0};
    std::size_t rem = idx;
    bool nyq = false;
    for (int i = d - 1; i >= 0; --i) {
      int j = static_cast<int>(rem % static_cast<std::size_t>(n));
      rem /= static_cast<std::size_t>(n);
      k[i] = j <= n / 2 ? j : j - n;
      nyq = nyq || k[i] == n / 2;
    }
    double k2 = 0.0;
    for (int i = 0; i < d; ++i) k2 += static_cast<double>(k[i]) * k[i];
    tables->k[idx] = k;
    tables->k2[idx] = k2;
    tables->kmag[idx] = std::sqrt(k2);
    tables->nyquist[idx] = nyq ? 1 : 0;
  }
  g.tables_ = std::move(tables);
  return g;
}

bool Grid::contains(const Wavevector& k) const {
  for (int i = 0; i < d_; ++i)
    if (k[i] <= -n_ / 2 || k[i] > n_ / 2) return false;
  for (int i = d_; i < 3; ++i)
    if (k[i] != 0) return false;
  return true;
}

std::size_t Grid::index_of(const Wavevector& k) const {
  if (!contains(k)) throw std::out_of_range("wavevector outside grid");
  return linear_index(k, d_, n_);
}

double Grid::cell_volume() const { return std::pow(2.0 * std::numbers::pi / n_, d_); }
double Grid::volume() const { return std::pow(2.0 * std::numbers::pi, d_); }

SpectralField::SpectralField(Grid grid, int comps) : grid_(std::move(grid)), comps_(comps) {
  if (comps != 1 && comps != grid_.dim()) throw std::invalid_argument("field must be scalar or d-vector");
  coeffs_.assign(static_cast<std::size_t>(comps) * grid_.size(), Complex{});
}

void require_same_grid(const SpectralField& a, const SpectralField& b, const char* what) {
  if (!(a.grid() == b.grid())) throw std::invalid_argument(std::string(what) + ": fields live on different grids");
  if (a.comps() != b.comps()) throw std::invalid_argument(std::string(what) + ": component count mismatch");
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
  require_same_grid(*this, o, "operator+=");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
  require_same_grid(*this, o, "operator-=");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(double a) {
  for (auto& c : coeffs_) c *= a;
  return *this;
}

SpectralField& SpectralField::axpy(double a, const SpectralField& o) {
  require_same_grid(*this, o, "axpy");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += a * o.coeffs_[i];
  return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double s, SpectralField a) { return a *= s; }

void SpectralField::zero_mean() {
  for (int c = 0; c < comps_; ++c) at(c, std::size_t{0}) = Complex{};
}

bool SpectralField::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Complex& c) { return c == Complex{}; });
}

double SpectralField::max_abs() const {
  double m = 0.0;
  for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

double SpectralField::divergence_residual() const {
  if (!is_vector()) throw std::invalid_argument("divergence of a scalar field");
  double worst = 0.0;
  for (std::size_t idx = 0; idx < grid_.size(); ++idx) {
    if (grid_.is_nyquist(idx)) continue;
    auto k = grid_.wavevector(idx);
    Complex div{};
    for (int c = 0; c < comps_; ++c) div += static_cast<double>(k[c]) * at(c, idx);
    worst = std::max(worst, std::abs(div));
  }
  return worst / std::max(1.0, max_abs());
}

double SpectralField::hermitian_residual() const {
  double worst = 0.0;
  const int d = grid_.dim();
  for (std::size_t idx = 0; idx < grid_.size(); ++idx) {
    if (grid_.is_nyquist(idx)) continue;
    auto k = grid_.wavevector(idx);
    Wavevector mk{-k[0], -k[1], -k[2]};
    for (int i = d; i < 3; ++i) mk[i] = 0;
    std::size_t midx = grid_.index_of(mk);
    for (int c = 0; c < comps_; ++c) worst = std::max(worst, std::abs(at(c, midx) - std::conj(at(c, idx))));
  }
  return worst;
}

PhysicalScalar to_physical(const SpectralField& f, int comp) {
  const auto& g = f.grid();
  std::vector<Complex> buf(f.component(comp).begin(), f.component(comp).end());
  fft_inplace(buf, g.dim(), g.n(), FFTW_BACKWARD);
  PhysicalScalar out(buf.size());
  std::transform(buf.begin(), buf.end(), out.begin(), [](const Complex& c) { return c.real(); });
  return out;
}

std::vector<PhysicalScalar> to_physical(const SpectralField& f) {
  std::vector<PhysicalScalar> out;
  out.reserve(static_cast<std::size_t>(f.comps()));
  for (int c = 0; c < f.comps(); ++c) out.push_back(to_physical(f, c));
  return out;
}

SpectralField from_physical(const Grid& grid, std::span<const PhysicalScalar> comps) {
  SpectralField f(grid, static_cast<int>(comps.size()));
  const double norm = 1.0 / static_cast<double>(grid.size());
  for (int c = 0; c < f.comps(); ++c) {
    const auto& src = comps[static_cast<std::size_t>(c)];
    if (src.size() != grid.size()) throw std::invalid_argument("physical sample count does not match grid");
    std::vector<Complex> buf(src.begin(), src.end());
    fft_inplace(buf, grid.dim(), grid.n(), FFTW_FORWARD);
    auto dst = f.component(c);
    for (std::size_t i = 0; i < buf.size(); ++i) dst[i] = buf[i] * norm;
  }
  return f;
}

SpectralField fractional_derivative(const SpectralField& f, double beta) {
  if (beta < 0.0) {
    for (int c = 0; c < f.comps(); ++c)
      if (std::abs(f.at(c, std::size_t{0})) != 0.0)
        throw std::invalid_argument("negative-order derivative of a field with nonzero mean");
  }
  const auto& g = f.grid();
  SpectralField out(g, f.comps());
  for (std::size_t idx = 1; idx < g.size(); ++idx) {
    if (g.is_nyquist(idx)) continue;
    const double m = beta == 0.0 ? 1.0 : std::pow(g.kmag(idx), beta);
    for (int c = 0; c < f.comps(); ++c) out.at(c, idx) = m * f.at(c, idx);
  }
  return out;
}

SpectralField leray_project(const SpectralField& f) {
  if (!f.is_vector()) throw std::invalid_argument("Leray projection needs a vector field");
  const auto& g = f.grid();
  const int d = g.dim();
  SpectralField out(g, d);
  for (std::size_t idx = 1; idx < g.size(); ++idx) {
    if (g.is_nyquist(idx)) continue;
    auto k = g.wavevector(idx);
    Complex kdotc{};
    for (int c = 0; c < d; ++c) kdotc += static_cast<double>(k[c]) * f.at(c, idx);
    const Complex s = kdotc / g.k2(idx);
    for (int c = 0; c < d; ++c) out.at(c, idx) = f.at(c, idx) - static_cast<double>(k[c]) * s;
  }
  return out;
}

SpectralField partial_derivative(const SpectralField& f, int axis) {
  const auto& g = f.grid();
  SpectralField out(g, f.comps());
  for (std::size_t idx = 1; idx < g.size(); ++idx) {
    if (g.is_nyquist(idx)) continue;
    const Complex ik{0.0, static_cast<double>(g.wavevector(idx)[axis])};
    for (int c = 0; c < f.comps(); ++c) out.at(c, idx) = ik * f.at(c, idx);
  }
  return out;
}

namespace detail {

int padded_size(int n) { return 3 * n / 2 + (3 * n / 2) % 2; }

std::vector<double> to_padded(const SpectralField& f, int comp, int m) {
  const auto& g = f.grid();
  const int d = g.dim();
  std::size_t total = 1;
  for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(m);
  std::vector<Complex> buf(total, Complex{});
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    if (g.is_nyquist(idx)) continue;
    buf[linear_index(g.wavevector(idx), d, m)] = f.at(comp, idx);
  }
  fft_inplace(buf, d, m, FFTW_BACKWARD);
  std::vector<double> out(total);
  std::transform(buf.begin(), buf.end(), out.begin(), [](const Complex& c) { return c.real(); });
  return out;
}

void from_padded(std::span<const double> samples, int m, SpectralField& out, int comp) {
  const auto& g = out.grid();
  const int d = g.dim();
  std::vector<Complex> buf(samples.begin(), samples.end());
  fft_inplace(buf, d, m, FFTW_FORWARD);
  const double norm = 1.0 / static_cast<double>(buf.size());
  auto dst = out.component(comp);
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    dst[idx] = g.is_nyquist(idx) ? Complex{} : buf[linear_index(g.wavevector(idx), d, m)] * norm;
  }
}

}  // namespace detail

SpectralField dealiased_product(const SpectralField& f, const SpectralField& g) {
  if (!(f.grid() == g.grid())) throw std::invalid_argument("dealiased_product: mismatched grids");
  if (f.comps() != 1 || g.comps() != 1) throw std::invalid_argument("dealiased_product: scalar fields expected");
  const int m = detail::padded_size(f.grid().n());
  auto a = detail::to_padded(f, 0, m);
  auto b = detail::to_padded(g, 0, m);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] *= b[i];
  SpectralField out(f.grid(), 1);
  detail::from_padded(a, m, out, 0);
  return out;
}

SpectralField advect(const SpectralField& f, const SpectralField& g) {
  if (!(f.grid() == g.grid())) throw std::invalid_argument("advect: mismatched grids");
  if (!f.is_vector()) throw std::invalid_argument("advect: advecting field must be a vector");
  const auto& grid = f.grid();
  const int d = grid.dim();
  const int m = detail::padded_size(grid.n());

  std::vector<std::vector<double>> fu;
  fu.reserve(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) fu.push_back(detail::to_padded(f, j, m));

  SpectralField out(grid, g.comps());
  std::vector<double> acc;
  for (int c = 0; c < g.comps(); ++c) {
    acc.assign(fu[0].size(), 0.0);
    for (int j = 0; j < d; ++j) {
      SpectralField dg(grid, 1);
      const auto src = g.component(c);
      auto dst = dg.component(0);
      for (std::size_t idx = 1; idx < grid.size(); ++idx) {
        if (grid.is_nyquist(idx)) continue;
        dst[idx] = Complex{0.0, static_cast<double>(grid.wavevector(idx)[j])} * src[idx];
      }
      auto dgp = detail::to_padded(dg, 0, m);
      for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += fu[j][i] * dgp[i];
    }
    detail::from_padded(acc, m, out, c);
  }
  out.zero_mean();
  return out;
}

double inner_product(const SpectralField& f, const SpectralField& g) {
  require_same_grid(f, g, "inner_product");
  double sum = 0.0;
  for (std::size_t i = 0; i < f.coeffs().size(); ++i) sum += (f.coeffs()[i] * std::conj(g.coeffs()[i])).real();
  return f.grid().volume() * sum;
}

}  // namespace fracns
