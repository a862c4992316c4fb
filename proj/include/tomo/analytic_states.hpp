#pragma once
// Closed-form tomograms, wavefunctions and Wigner functions of the oscillator
// states used as oracles throughout: Fock |n>, coherent |alpha>, and the
// mollified classical point state.

#include "tomo/core.hpp"

#include <string>

namespace tomo {

struct FockLabel {
  int n = 0;
  explicit FockLabel(int n_) : n(n_) {
    if (n_ < 0 || n_ > 64) fail(ErrorKind::InvalidArgument, "Fock label must satisfy 0 <= n <= 64");
  }
};

struct CoherentLabel {
  cplx alpha;
  explicit CoherentLabel(cplx a) : alpha(a) {
    if (std::abs(a) > 8.0) fail(ErrorKind::InvalidArgument, "coherent label needs |alpha| <= 8");
  }
};

/// Normalized oscillator eigenfunction psi_n(x) = (2^n n! sqrt(pi))^{-1/2} H_n(x) e^{-x^2/2},
/// by the three-term recurrence on the normalized functions themselves, which
/// never forms n! or H_n explicitly.
inline double hermite_function(int n, double x) {
  double prev = 0.0;
  double cur = std::pow(pi, -0.25) * std::exp(-0.5 * x * x);
  for (int k = 0; k < n; ++k) {
    const double next = std::sqrt(2.0 / (k + 1.0)) * x * cur - std::sqrt(k / (k + 1.0)) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

/// Laguerre polynomial L_n(x).
inline double laguerre(int n, double x) {
  if (n == 0) return 1.0;
  double prev = 1.0, cur = 1.0 - x;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 - x) * cur - k * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

/// w_n(X, mu, nu) = [pi r^2]^{-1/2} 2^{-n} (n!)^{-1} e^{-X^2/r^2} H_n^2(X/r), r^2 = mu^2 + nu^2.
inline Tomogram fock_tomogram(FockLabel label) {
  const int n = label.n;
  AnalyticTomogram a;
  a.label = "fock:" + std::to_string(n);
  a.feature_width = 0.5 / std::sqrt(2.0 * n + 1.0);
  a.eval = [n](double X, double mu, double nu) {
    const double r = std::hypot(mu, nu);
    if (r == 0.0) fail(ErrorKind::DegenerateFrame, "(mu, nu) = (0, 0)");
    const double h = hermite_function(n, X / r);
    return h * h / r;
  };
  return Tomogram(std::move(a));
}

/// X-Fourier component (1/2pi) exp(-k^2 r^2 / 4) L_n(k^2 r^2 / 2).
inline double fock_tomogram_fourier(FockLabel label, double k, const SymplecticFrame& frame) {
  const double s = k * k * (frame.mu * frame.mu + frame.nu * frame.nu);
  return std::exp(-0.25 * s) * laguerre(label.n, 0.5 * s) / two_pi;
}

/// Coherent-state tomogram, evaluated from the complex exponent as written;
/// the imaginary part of the exponent must cancel.
inline Tomogram coherent_tomogram(CoherentLabel label) {
  const cplx alpha = label.alpha;
  AnalyticTomogram a;
  a.label = "coherent:" + std::to_string(alpha.real()) + "," + std::to_string(alpha.imag());
  a.feature_width = 0.5;
  a.eval = [alpha](double X, double mu, double nu) {
    const double r2 = mu * mu + nu * nu;
    if (r2 == 0.0) fail(ErrorKind::DegenerateFrame, "(mu, nu) = (0, 0)");
    const cplx I(0.0, 1.0);
    const cplx ac = std::conj(alpha);
    const cplx zp(nu, mu);  // nu + i mu
    const cplx zm(nu, -mu);
    const double s2 = std::sqrt(2.0);
    const cplx e = -std::norm(alpha) - X * X / r2 + alpha * alpha * zp * zp / (2.0 * r2) +
                   ac * ac * zm * zm / (2.0 * r2) - I * s2 * alpha * X * zp / r2 +
                   I * s2 * ac * X * zm / r2;
    const double scale = 1.0 + std::abs(e.real()) + X * X / r2 + std::norm(alpha);
    if (std::abs(e.imag()) > 1e-12 * scale)
      fail(ErrorKind::ComplexResidue, "coherent tomogram exponent has an imaginary part");
    return std::exp(e.real()) / std::sqrt(pi * r2);
  };
  return Tomogram(std::move(a));
}

/// Mollified point state: Gaussian of standard deviation eps * r centred on
/// mu x0 + nu p0. eps -> 0 recovers delta(X - mu x0 - nu p0).
inline Tomogram classical_point_tomogram(double x0, double p0, double eps) {
  if (!(eps > 0.0)) fail(ErrorKind::InvalidArgument, "mollifier width must be positive");
  AnalyticTomogram a;
  a.label = "classical-point";
  a.feature_width = eps;
  a.eval = [x0, p0, eps](double X, double mu, double nu) {
    const double r = std::hypot(mu, nu);
    if (r == 0.0) fail(ErrorKind::DegenerateFrame, "(mu, nu) = (0, 0)");
    const double s = eps * r;
    const double d = (X - mu * x0 - nu * p0) / s;
    return std::exp(-0.5 * d * d) / (s * std::sqrt(two_pi));
  };
  return Tomogram(std::move(a));
}

inline WaveFunction fock_wavefunction(FockLabel label, const Grid1D& grid) {
  const double need = 2.0 * std::sqrt(2.0 * label.n + 1.0);
  if (grid.min() > -need || grid.max() < need)
    fail(ErrorKind::GridTooNarrow, "grid must span +-2 sqrt(2n+1)");
  WaveFunction psi{grid, Eigen::VectorXcd(grid.size())};
  for (std::size_t i = 0; i < grid.size(); ++i)
    psi.values(static_cast<Eigen::Index>(i)) = hermite_function(label.n, grid[i]);
  return psi;
}

/// <x|alpha> with <q> = sqrt2 Re alpha, <p> = sqrt2 Im alpha.
inline WaveFunction coherent_wavefunction(CoherentLabel label, const Grid1D& grid) {
  const double q0 = std::sqrt(2.0) * label.alpha.real();
  const double p0 = std::sqrt(2.0) * label.alpha.imag();
  WaveFunction psi{grid, Eigen::VectorXcd(grid.size())};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid[i];
    psi.values(static_cast<Eigen::Index>(i)) =
        std::pow(pi, -0.25) * std::exp(cplx(-0.5 * (x - q0) * (x - q0), p0 * x - 0.5 * q0 * p0));
  }
  return psi;
}

/// Wigner function of a coherent state, normalized to integral W dq dp / 2pi = 1.
inline WignerGrid coherent_wigner(CoherentLabel label, const Grid1D& q, const Grid1D& p) {
  const double q0 = std::sqrt(2.0) * label.alpha.real();
  const double p0 = std::sqrt(2.0) * label.alpha.imag();
  WignerGrid w{q, p, Eigen::MatrixXd(q.size(), p.size())};
  for (std::size_t i = 0; i < q.size(); ++i)
    for (std::size_t k = 0; k < p.size(); ++k)
      w.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          2.0 * std::exp(-(q[i] - q0) * (q[i] - q0) - (p[k] - p0) * (p[k] - p0));
  return w;
}

/// Fock-state Wigner function 2 (-1)^n e^{-(q^2+p^2)} L_n(2(q^2+p^2)) in the same normalization.
inline WignerGrid fock_wigner(FockLabel label, const Grid1D& q, const Grid1D& p) {
  WignerGrid w{q, p, Eigen::MatrixXd(q.size(), p.size())};
  const double sign = label.n % 2 ? -1.0 : 1.0;
  for (std::size_t i = 0; i < q.size(); ++i)
    for (std::size_t k = 0; k < p.size(); ++k) {
      const double r2 = q[i] * q[i] + p[k] * p[k];
      w.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          2.0 * sign * std::exp(-r2) * laguerre(label.n, 2.0 * r2);
    }
  return w;
}

/// Product Gaussian phase-space density centred on (q0, p0) with standard
/// deviations (sq, sp).
inline PhaseDensity gaussian_phase_density(double q0, double p0, double sq, double sp, const Grid1D& q,
                                           const Grid1D& p) {
  PhaseDensity f{q, p, Eigen::MatrixXd(q.size(), p.size())};
  for (std::size_t i = 0; i < q.size(); ++i)
    for (std::size_t k = 0; k < p.size(); ++k) {
      const double a = (q[i] - q0) / sq, b = (p[k] - p0) / sp;
      f.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          std::exp(-0.5 * (a * a + b * b)) / (two_pi * sq * sp);
    }
  return f;
}

}  // namespace tomo
