#pragma once

// Independent reference computations for the tests. Nothing here calls the
// transform-based code paths of the library.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "fracns/spectral.hpp"

namespace oracle {

using fracns::Complex;
using fracns::Grid;
using fracns::SpectralField;
using fracns::Wavevector;

/// Exact rational with int64 parts, always reduced, positive denominator.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d = 1) : num(n), den(d) {
    if (den == 0) throw std::domain_error("zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }

  friend Rational operator+(Rational a, Rational b) { return {a.num * b.den + b.num * a.den, a.den * b.den}; }
  friend Rational operator-(Rational a, Rational b) { return {a.num * b.den - b.num * a.den, a.den * b.den}; }
  friend Rational operator*(Rational a, Rational b) { return {a.num * b.num, a.den * b.den}; }
  friend Rational operator/(Rational a, Rational b) { return {a.num * b.den, a.den * b.num}; }
  friend bool operator==(Rational a, Rational b) { return a.num == b.num && a.den == b.den; }
  friend bool operator<(Rational a, Rational b) { return a.num * b.den < b.num * a.den; }
};

inline Rational rmax(Rational a, Rational b) { return a < b ? b : a; }

/// Exponents of the problem in exact arithmetic.
struct ExactParams {
  Rational gamma, mu_s, r_s, theta_e, beta, r, q, theta_u;
};

inline ExactParams exact_params(int d, Rational alpha, Rational s) {
  ExactParams e;
  const Rational half(1, 2), one(1), two(2), three(3);
  e.gamma = rmax(Rational(0) - half - s / alpha, Rational(0));
  e.mu_s = rmax((s + one - alpha) / (two * alpha), Rational(0));
  e.r_s = Rational(2 * d) / ((three - two * e.gamma) * alpha - two);
  e.theta_e = Rational(0) - e.gamma - one / alpha + Rational(3, 2);
  e.beta = one - alpha;
  e.r = e.r_s;
  e.q = Rational(4) * alpha / ((two * e.gamma - one) * alpha + two);
  e.theta_u = (Rational(d) / alpha) * (one / e.r - (alpha + e.beta - one) / Rational(d));
  return e;
}

inline bool retained(const Wavevector& k, int n) {
  for (int c : k)
    if (c == n / 2 || c == -n / 2) return false;
  return true;
}

/// P[(f . grad) g] by direct summation over all pairs of modes: the
/// coefficient at k is sum_{p+q=k} sum_j f_j(p) (i q_j) g(q), kept for
/// non-Nyquist k, then projected with I - k k^T / |k|^2.
inline SpectralField convolution_B(const SpectralField& f, const SpectralField& g) {
  const Grid& grid = f.grid();
  const int d = grid.dim();
  const int n = grid.n();
  SpectralField out = SpectralField::vector(grid);
  std::vector<std::vector<Complex>> conv(d, std::vector<Complex>(grid.size()));
  for (std::size_t ip = 0; ip < grid.size(); ++ip) {
    const Wavevector p = grid.wavevector(ip);
    if (!retained(p, n)) continue;
    for (std::size_t iq = 0; iq < grid.size(); ++iq) {
      const Wavevector q = grid.wavevector(iq);
      if (!retained(q, n)) continue;
      const Wavevector k{p[0] + q[0], p[1] + q[1], p[2] + q[2]};
      bool inside = true;
      for (int c = 0; c < d; ++c)
        if (k[c] <= -n / 2 || k[c] >= n / 2) inside = false;
      if (!inside) continue;
      const std::size_t ik = grid.index_of(k);
      Complex fdq = 0.0;
      for (int j = 0; j < d; ++j) fdq += f.at(j, ip) * Complex(0.0, q[j]);
      for (int c = 0; c < d; ++c) conv[c][ik] += fdq * g.at(c, iq);
    }
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Wavevector k = grid.wavevector(i);
    double k2 = 0.0;
    for (int c = 0; c < d; ++c) k2 += static_cast<double>(k[c]) * k[c];
    if (k2 == 0.0) continue;
    Complex kc = 0.0;
    for (int c = 0; c < d; ++c) kc += static_cast<double>(k[c]) * conv[c][i];
    for (int c = 0; c < d; ++c) out.at(c, i) = conv[c][i] - static_cast<double>(k[c]) * kc / k2;
  }
  return out;
}

inline double max_abs_diff(const SpectralField& a, const SpectralField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) m = std::max(m, std::abs(a.coeffs()[i] - b.coeffs()[i]));
  return m;
}

inline double max_abs(const SpectralField& a) {
  double m = 0.0;
  for (const auto& c : a.coeffs()) m = std::max(m, std::abs(c));
  return m;
}

/// Exact Taylor-Green decay: every coefficient scales by exp(-2^alpha t).
inline SpectralField taylor_green_exact(const SpectralField& u0, double alpha, double t) {
  SpectralField out = u0;
  out *= std::exp(-std::pow(2.0, alpha) * t);
  return out;
}

}  // namespace oracle
