#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracns {

using Complex = std::complex<double>;
using Wavevector = std::array<int, 3>;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Periodic collocation grid on the torus (R / 2 pi Z)^d.
///
/// Modes are stored row-major over (i_0, ..., i_{d-1}) with i in [0, N) and
/// the last axis fastest; index i maps to wavenumber i for i <= N/2 and i - N
/// otherwise, so each axis covers -N/2 < k <= N/2. Physical node m sits at
/// x = 2 pi m / N with the same ordering.
class Grid {
public:
  Grid() = default;

  int dim() const { return d_; }
  int n() const { return n_; }
  std::size_t size() const { return size_; }

  Wavevector wavevector(std::size_t idx) const { return tables_->k[idx]; }
  double k2(std::size_t idx) const { return tables_->k2[idx]; }
  double kmag(std::size_t idx) const { return tables_->kmag[idx]; }
  /// True when any component sits on the Nyquist plane k_i = N/2.
  bool is_nyquist(std::size_t idx) const { return tables_->nyquist[idx] != 0; }
  /// Linear index of wavevector k; throws when k is not representable.
  std::size_t index_of(const Wavevector& k) const;
  bool contains(const Wavevector& k) const;

  /// Grid quadrature weight (2 pi / N)^d.
  double cell_volume() const;
  /// Total measure (2 pi)^d.
  double volume() const;

  friend bool operator==(const Grid& a, const Grid& b) { return a.d_ == b.d_ && a.n_ == b.n_; }

private:
  friend Grid make_grid(int d, int n);

  struct Tables {
    std::vector<Wavevector> k;
    std::vector<double> k2;
    std::vector<double> kmag;
    std::vector<unsigned char> nyquist;
  };

  int d_ = 0;
  int n_ = 0;
  std::size_t size_ = 0;
  std::shared_ptr<const Tables> tables_;
};

Grid make_grid(int d, int n);

/// Truncated Fourier representation u(x) = sum_k c(k) e^{i k.x} of a scalar
/// (comps == 1) or vector (comps == d) field.
class SpectralField {
public:
  SpectralField() = default;
  SpectralField(Grid grid, int comps);

  static SpectralField scalar(const Grid& grid) { return SpectralField(grid, 1); }
  static SpectralField vector(const Grid& grid) { return SpectralField(grid, grid.dim()); }

  const Grid& grid() const { return grid_; }
  int comps() const { return comps_; }
  bool is_vector() const { return comps_ == grid_.dim() && comps_ > 1; }

  Complex& at(int c, std::size_t idx) { return coeffs_[static_cast<std::size_t>(c) * grid_.size() + idx]; }
  const Complex& at(int c, std::size_t idx) const {
    return coeffs_[static_cast<std::size_t>(c) * grid_.size() + idx];
  }
  Complex& at(int c, const Wavevector& k) { return at(c, grid_.index_of(k)); }
  const Complex& at(int c, const Wavevector& k) const { return at(c, grid_.index_of(k)); }

  std::span<Complex> component(int c) {
    return {coeffs_.data() + static_cast<std::size_t>(c) * grid_.size(), grid_.size()};
  }
  std::span<const Complex> component(int c) const {
    return {coeffs_.data() + static_cast<std::size_t>(c) * grid_.size(), grid_.size()};
  }
  std::span<Complex> coeffs() { return coeffs_; }
  std::span<const Complex> coeffs() const { return coeffs_; }

  SpectralField& operator+=(const SpectralField& o);
  SpectralField& operator-=(const SpectralField& o);
  SpectralField& operator*=(double a);
  /// this += a * o
  SpectralField& axpy(double a, const SpectralField& o);

  void zero_mean();
  bool is_zero() const;

  /// max_k |k . c(k)| / max(1, max_k |c(k)|), over non-Nyquist modes.
  double divergence_residual() const;
  /// max_k |c(-k) - conj(c(k))|, a Hermitian symmetry residual.
  double hermitian_residual() const;
  /// max |c(k)| over all components.
  double max_abs() const;

private:
  Grid grid_;
  int comps_ = 0;
  std::vector<Complex> coeffs_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField a);

void require_same_grid(const SpectralField& a, const SpectralField& b, const char* what);

/// Physical samples of one scalar component, N^d values in grid order.
using PhysicalScalar = std::vector<double>;

PhysicalScalar to_physical(const SpectralField& f, int comp);
/// All components; result[c] is component c.
std::vector<PhysicalScalar> to_physical(const SpectralField& f);
SpectralField from_physical(const Grid& grid, std::span<const PhysicalScalar> comps);

/// Multiply c(k) by |k|^beta; the zero mode and Nyquist modes are set to 0.
SpectralField fractional_derivative(const SpectralField& f, double beta);

/// Per-mode projection onto divergence-free fields, (I - k k^T / |k|^2) c(k).
SpectralField leray_project(const SpectralField& f);

/// Partial derivative d/dx_axis of every component.
SpectralField partial_derivative(const SpectralField& f, int axis);

/// Pointwise product of two scalar fields on a 3/2 zero-padded grid,
/// truncated back to the original modes. Nyquist modes of the inputs are
/// ignored and those of the output zeroed. The mean is retained.
SpectralField dealiased_product(const SpectralField& f, const SpectralField& g);

/// (f . grad) g evaluated with 3/2 padding, component-wise in g. The zero
/// mode and Nyquist modes of the result are zero.
SpectralField advect(const SpectralField& f, const SpectralField& g);

/// Real-field inner product int f . g dx = (2 pi)^d sum_k c_f(k) conj(c_g(k)).
double inner_product(const SpectralField& f, const SpectralField& g);

namespace detail {
/// Inverse FFT of one component onto an M^d grid (M >= N), real part.
std::vector<double> to_padded(const SpectralField& f, int comp, int m);
/// Forward FFT of M^d real samples, truncated to grid; Nyquist modes dropped.
void from_padded(std::span<const double> samples, int m, SpectralField& out, int comp);
int padded_size(int n);
}  // namespace detail

}  // namespace fracns
