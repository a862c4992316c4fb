#pragma once
// Maps among wavefunctions, density kernels, Wigner functions, classical
// phase-space densities and optical tomograms.
//
// Wigner normalization: integral W dq dp / (2 pi) = 1, so that
//   w(X, phi) = (1/2pi) integral W(X cos phi - P sin phi, X sin phi + P cos phi) dP
// while a classical density f (integral f = 1) projects without the 1/2pi.
// Both directions share one projection routine and one filtered
// back-projection routine; only the prefactor and the admissibility check differ.

#include "tomo/core.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <vector>

namespace tomo {

struct TransformOptions {
  /// Fraction of Nyquist above which the ramp filter is cosine-tapered to zero.
  double taper_fraction = 0.8;
  /// Ringing floor relative to max|W|; the boundary may not exceed 10x this.
  double ringing_floor = 1e-3;
  /// Bound on the bilinear interpolation error estimate for projections.
  double interpolation_error = 1e-4;
  /// |sin phi| below this is treated as the position-density limit.
  double degenerate_band = 1e-6;
  std::size_t min_angles = 16;
  /// Radial cutoff and steps for density_from_tomogram.
  double density_k_max = 12.0;
  double density_dk = 0.01;
  double density_dmu = 0.025;
  double hermitian_tolerance = 1e-3;
  double negativity_fraction = 1e-3;
  double complex_residue = 1e-8;
};

namespace detail {

/// True when phi is (to rounding) exactly 0 or pi mod 2 pi.
inline bool on_position_axis(double phi) {
  const double r = std::remainder(phi, pi);
  return std::abs(r) < 1e-12;
}

inline double trap_weight(std::size_t i, std::size_t n) { return (i == 0 || i + 1 == n) ? 0.5 : 1.0; }

inline void check_aliasing(const Grid1D& y, const Grid1D& x_out, double mu, double nu) {
  // Phase mu y^2/(2 nu) - y X / nu advances by |mu y - X| dy / |nu| per step.
  const double ymax = std::max(std::abs(y.min()), std::abs(y.max()));
  const double xmax = std::max(std::abs(x_out.min()), std::abs(x_out.max()));
  const double advance = (std::abs(mu) * ymax + xmax) * y.spacing() / std::abs(nu);
  if (advance > pi)
    fail(ErrorKind::GridTooCoarse, "oscillatory phase advances " + std::to_string(advance) +
                                       " rad per grid step");
}

/// Classifies an angle: returns false for the quadrature branch, true for the
/// position-axis limit, throws for angles inside the excluded band.
inline bool use_position_limit(double phi, double band) {
  if (std::abs(std::sin(phi)) >= band) return false;
  if (on_position_axis(phi)) return true;
  fail(ErrorKind::DegenerateFrame, "phi = " + std::to_string(phi) + " is inside the |nu| < band exclusion");
}

/// Weight per angle for an integral over [0, pi) given a uniform grid covering
/// either [0, pi) or [0, 2 pi).
inline double angular_weight(const Grid1D& phi, std::size_t min_angles) {
  if (phi.size() < min_angles)
    fail(ErrorKind::InsufficientAngles, std::to_string(phi.size()) + " angles; need at least " +
                                            std::to_string(min_angles));
  const double coverage = phi.spacing() * static_cast<double>(phi.size());
  if (std::abs(coverage - pi) < 1e-9) return phi.spacing();
  if (std::abs(coverage - two_pi) < 1e-9) return 0.5 * phi.spacing();
  fail(ErrorKind::InsufficientAngles, "angle grid must cover [0, pi) or [0, 2pi) uniformly");
}

/// Line-integral projection shared by the Wigner and classical forward maps.
inline OpticalSamples project(const Grid1D& q, const Grid1D& p, const Eigen::MatrixXd& v, double prefactor,
                              const Grid1D& x_out, const Grid1D& phi, const TransformOptions& opt) {
  const double hq = q.spacing(), hp = p.spacing();
  double dqq = 0.0, dpp = 0.0;
  for (Eigen::Index i = 1; i + 1 < v.rows(); ++i)
    for (Eigen::Index k = 0; k < v.cols(); ++k)
      dqq = std::max(dqq, std::abs(v(i + 1, k) - 2.0 * v(i, k) + v(i - 1, k)));
  for (Eigen::Index i = 0; i < v.rows(); ++i)
    for (Eigen::Index k = 1; k + 1 < v.cols(); ++k)
      dpp = std::max(dpp, std::abs(v(i, k + 1) - 2.0 * v(i, k) + v(i, k - 1)));
  const double estimate = std::abs(prefactor) * std::max(dqq, dpp) / 8.0;
  if (estimate > opt.interpolation_error)
    fail(ErrorKind::GridTooCoarse, "bilinear interpolation error estimate " + std::to_string(estimate));

  const double reach = std::hypot(std::max(std::abs(q.min()), std::abs(q.max())),
                                  std::max(std::abs(p.min()), std::abs(p.max())));
  const double h = std::min(hq, hp);
  const auto np = static_cast<std::size_t>(std::ceil(2.0 * reach / h)) + 1;
  const double dP = 2.0 * reach / static_cast<double>(np - 1);

  OpticalSamples out{x_out, phi, Eigen::MatrixXd(x_out.size(), phi.size())};
  parallel_for(phi.size(), [&](std::size_t k) {
    const double c = std::cos(phi[k]), s = std::sin(phi[k]);
    for (std::size_t i = 0; i < x_out.size(); ++i) {
      const double X = x_out[i];
      double acc = 0.0;
      for (std::size_t m = 0; m < np; ++m) {
        const double P = -reach + static_cast<double>(m) * dP;
        acc += trap_weight(m, np) * bilinear_at(q, p, v, X * c - P * s, X * s + P * c);
      }
      out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = prefactor * acc * dP;
    }
  });
  return out;
}

/// Ramp-filtered columns g(X, phi) = (1/2pi) integral |k| w^(k, phi) e^{ikX} dk,
/// using the band-limited spatial ramp kernel (exact DC handling) and a
/// cosine taper above taper_fraction of Nyquist. The output lives on `ext`, an
/// extension of the tomogram's X grid with the same spacing, because the
/// filtered columns have slowly decaying tails outside the measured support.
inline Eigen::MatrixXd ramp_filter(const OpticalSamples& t, const Grid1D& ext, std::size_t offset,
                                   double taper_fraction) {
  const std::size_t n = t.x.size();
  const std::size_t ne = ext.size();
  std::size_t m = 1;
  while (m < 2 * ne) m <<= 1;
  const double tau = t.x.spacing();

  std::vector<double> kernel(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const long d = i < m / 2 ? static_cast<long>(i) : static_cast<long>(i) - static_cast<long>(m);
    if (d == 0)
      kernel[i] = pi / (2.0 * tau * tau);
    else if (d % 2 != 0)
      kernel[i] = -2.0 / (pi * static_cast<double>(d * d) * tau * tau);
  }
  Eigen::FFT<double> fft;
  std::vector<cplx> response;
  fft.fwd(response, kernel);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t idx = i <= m / 2 ? i : m - i;
    const double frac = static_cast<double>(idx) / static_cast<double>(m / 2);
    double win = 1.0;
    if (frac > taper_fraction)
      win = 0.5 * (1.0 + std::cos(pi * (frac - taper_fraction) / (1.0 - taper_fraction)));
    response[i] *= win * tau;
  }

  Eigen::MatrixXd g(ne, t.phi.size());
  for (std::size_t k = 0; k < t.phi.size(); ++k) {
    std::vector<double> col(m, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      col[offset + i] = t.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
    std::vector<cplx> spec;
    fft.fwd(spec, col);
    for (std::size_t i = 0; i < m; ++i) spec[i] *= response[i];
    std::vector<double> back;
    fft.inv(back, spec);
    for (std::size_t i = 0; i < ne; ++i) g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = back[i];
  }
  return g;
}

/// Filtered back-projection; returns integral_0^pi g(q cos phi + p sin phi, phi) dphi,
/// which is W(q, p) in the Wigner normalization.
inline Eigen::MatrixXd back_project(const OpticalSamples& t, const Grid1D& q, const Grid1D& p,
                                    const TransformOptions& opt) {
  if (t.x.size() < 8) fail(ErrorKind::InvalidArgument, "tomogram x grid too small");
  const double weight = angular_weight(t.phi, opt.min_angles);
  const double tau = t.x.spacing();
  const double reach = std::hypot(std::max(std::abs(q.min()), std::abs(q.max())),
                                  std::max(std::abs(p.min()), std::abs(p.max())));
  const auto below = static_cast<std::size_t>(std::max(0.0, std::ceil((t.x.min() + reach) / tau)) + 2);
  const auto above = static_cast<std::size_t>(std::max(0.0, std::ceil((reach - t.x.max()) / tau)) + 2);
  const std::size_t ne = t.x.size() + below + above;
  const double emin = t.x.min() - static_cast<double>(below) * tau;
  const Grid1D ext(emin, emin + static_cast<double>(ne - 1) * tau, ne);
  const Eigen::MatrixXd g = ramp_filter(t, ext, below, opt.taper_fraction);

  std::vector<double> cs(t.phi.size()), sn(t.phi.size());
  for (std::size_t k = 0; k < t.phi.size(); ++k) {
    cs[k] = std::cos(t.phi[k]);
    sn[k] = std::sin(t.phi[k]);
  }
  Eigen::MatrixXd out(q.size(), p.size());
  parallel_for(q.size(), [&](std::size_t i) {
    for (std::size_t j = 0; j < p.size(); ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < t.phi.size(); ++k) {
        const auto col = static_cast<Eigen::Index>(k);
        acc += cubic_at<double>(ext, [&](long r) { return g(r, col); }, q[i] * cs[k] + p[j] * sn[k]);
      }
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = acc * weight;
    }
  });
  const double peak = out.cwiseAbs().maxCoeff();
  double edge = 0.0;
  const auto nq = out.rows(), np = out.cols();
  for (Eigen::Index i = 0; i < nq; ++i) edge = std::max({edge, std::abs(out(i, 0)), std::abs(out(i, np - 1))});
  for (Eigen::Index j = 0; j < np; ++j) edge = std::max({edge, std::abs(out(0, j)), std::abs(out(nq - 1, j))});
  if (edge > 10.0 * opt.ringing_floor * peak)
    fail(ErrorKind::RingingDetected, "boundary magnitude " + std::to_string(edge / peak) + " of peak");
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------

/// w(X, phi) = (1/(2 pi |nu|)) |integral Psi(y) exp(i mu y^2/(2 nu) - i y X / nu) dy|^2.
inline Tomogram tomogram_from_wavefunction(const WaveFunction& psi, const Grid1D& x_out, const Grid1D& phi,
                                           const TransformOptions& opt = {}) {
  const Grid1D& y = psi.x;
  const std::size_t ny = y.size();
  std::vector<bool> limit(phi.size());
  for (std::size_t k = 0; k < phi.size(); ++k) {
    limit[k] = detail::use_position_limit(phi[k], opt.degenerate_band);
    if (!limit[k]) detail::check_aliasing(y, x_out, std::cos(phi[k]), std::sin(phi[k]));
  }
  OpticalSamples out{x_out, phi, Eigen::MatrixXd(x_out.size(), phi.size())};
  parallel_for(phi.size(), [&](std::size_t k) {
    const auto col = static_cast<Eigen::Index>(k);
    const double mu = std::cos(phi[k]), nu = std::sin(phi[k]);
    if (limit[k]) {
      const double sign = mu > 0 ? 1.0 : -1.0;
      for (std::size_t i = 0; i < x_out.size(); ++i)
        out.values(static_cast<Eigen::Index>(i), col) =
            std::norm(cubic_at<cplx>(y, [&](long r) { return psi.values(r); }, sign * x_out[i]));
      return;
    }
    std::vector<cplx> a(ny);
    for (std::size_t r = 0; r < ny; ++r)
      a[r] = psi.values(static_cast<Eigen::Index>(r)) * detail::trap_weight(r, ny) *
             std::polar(1.0, mu * y[r] * y[r] / (2.0 * nu));
    for (std::size_t i = 0; i < x_out.size(); ++i) {
      const double X = x_out[i];
      const cplx step = std::polar(1.0, -y.spacing() * X / nu);
      cplx ph = std::polar(1.0, -y.min() * X / nu);
      cplx acc = 0.0;
      for (std::size_t r = 0; r < ny; ++r) {
        acc += a[r] * ph;
        ph *= step;
      }
      acc *= y.spacing();
      out.values(static_cast<Eigen::Index>(i), col) = std::norm(acc) / (two_pi * std::abs(nu));
    }
  });
  return Tomogram(std::move(out));
}

/// Double quadrature of
/// w = (1/(2pi|nu|)) integral rho(Z,Z') exp[-i (Z-Z')/nu (X - mu (Z+Z')/2)] dZ dZ'.
inline Tomogram tomogram_from_density(const DensityKernel& rho, const Grid1D& x_out, const Grid1D& phi,
                                      const TransformOptions& opt = {}) {
  const Grid1D& z = rho.x;
  const std::size_t nz = z.size();
  std::vector<bool> limit(phi.size());
  for (std::size_t k = 0; k < phi.size(); ++k) {
    limit[k] = detail::use_position_limit(phi[k], opt.degenerate_band);
    if (!limit[k]) detail::check_aliasing(z, x_out, std::cos(phi[k]), std::sin(phi[k]));
  }
  OpticalSamples out{x_out, phi, Eigen::MatrixXd(x_out.size(), phi.size())};
  parallel_for(phi.size(), [&](std::size_t k) {
    const auto col = static_cast<Eigen::Index>(k);
    const double mu = std::cos(phi[k]), nu = std::sin(phi[k]);
    if (limit[k]) {
      const double sign = mu > 0 ? 1.0 : -1.0;
      for (std::size_t i = 0; i < x_out.size(); ++i)
        out.values(static_cast<Eigen::Index>(i), col) = cubic_at<double>(
            z, [&](long r) { return rho.values(r, r).real(); }, sign * x_out[i]);
      return;
    }
    // u_X(Z) = weight(Z) exp(i mu Z^2/(2 nu) - i Z X / nu);  w(X) = u^T rho conj(u).
    Eigen::MatrixXcd u(x_out.size(), nz);
    for (std::size_t i = 0; i < x_out.size(); ++i) {
      const double X = x_out[i];
      for (std::size_t r = 0; r < nz; ++r)
        u(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(r)) =
            detail::trap_weight(r, nz) * z.spacing() *
            std::polar(1.0, mu * z[r] * z[r] / (2.0 * nu) - z[r] * X / nu);
    }
    const Eigen::MatrixXcd a = u * rho.values;
    for (std::size_t i = 0; i < x_out.size(); ++i) {
      const auto row = static_cast<Eigen::Index>(i);
      const cplx s = a.row(row).dot(u.row(row));  // sum a * conj(u)
      out.values(row, col) = s.real() / (two_pi * std::abs(nu));
    }
  });
  return Tomogram(std::move(out));
}

/// Wigner line-integral projection.
inline Tomogram tomogram_from_wigner(const WignerGrid& w, const Grid1D& x_out, const Grid1D& phi,
                                     const TransformOptions& opt = {}) {
  return Tomogram(detail::project(w.q, w.p, w.values, 1.0 / two_pi, x_out, phi, opt));
}

/// Classical tomography map: w(X, phi) = integral f(X cos phi - P sin phi, X sin phi + P cos phi) dP.
inline Tomogram classical_tomogram(const PhaseDensity& f, const Grid1D& x_out, const Grid1D& phi,
                                   const TransformOptions& opt = {}) {
  return Tomogram(detail::project(f.q, f.p, f.values, 1.0, x_out, phi, opt));
}

/// Filtered back-projection of optical samples into a Wigner grid.
inline WignerGrid wigner_from_tomogram(const Tomogram& tomo, const Grid1D& q, const Grid1D& p,
                                       const TransformOptions& opt = {}) {
  if (tomo.is_analytic()) fail(ErrorKind::InvalidArgument, "wigner_from_tomogram needs optical samples");
  return {q, p, detail::back_project(tomo.samples(), q, p, opt)};
}

/// Same inversion as wigner_from_tomogram, scaled to a classical density and
/// required to be nonnegative down to -negativity_fraction * max.
inline PhaseDensity phase_density_from_tomogram(const Tomogram& tomo, const Grid1D& q, const Grid1D& p,
                                                const TransformOptions& opt = {}) {
  if (tomo.is_analytic()) fail(ErrorKind::InvalidArgument, "phase_density_from_tomogram needs optical samples");
  Eigen::MatrixXd f = detail::back_project(tomo.samples(), q, p, opt) / two_pi;
  const double mx = f.maxCoeff(), mn = f.minCoeff();
  if (mn < -opt.negativity_fraction * mx)
    fail(ErrorKind::NegativityDetected,
         "phase-space density reaches " + std::to_string(mn / mx) + " of its maximum");
  f = f.cwiseMax(0.0);
  return {q, p, std::move(f)};
}

/// W(q, p) = integral rho(q + u/2, q - u/2) e^{-i p u} du.
///
/// Evaluated exactly on the half-node lattice q = x_0 + m dx/2 (where the pair
/// (q +- u/2) lands on grid nodes with u in steps of 2 dx) and interpolated
/// cubically in q for other output points.
inline WignerGrid wigner_from_density(const DensityKernel& rho, const Grid1D& q, const Grid1D& p,
                                      const TransformOptions& opt = {}) {
  const std::size_t n = rho.x.size();
  const double dx = rho.x.spacing();
  const std::size_t nh = 2 * n - 1;
  const Grid1D half(rho.x.min(), rho.x.max(), nh);
  Eigen::MatrixXcd lattice(nh, p.size());
  parallel_for(nh, [&](std::size_t m) {
    const long c = static_cast<long>(m / 2);
    const bool odd = m % 2 == 1;
    const long nn = static_cast<long>(n);
    // pairs (c + odd + k, c - k), u = (2k + odd) dx
    const long kmin = -std::min(c + (odd ? 1L : 0L), nn - 1 - c);
    const long kmax = std::min(c, nn - 1 - c - (odd ? 1L : 0L));
    for (std::size_t j = 0; j < p.size(); ++j) {
      cplx acc = 0.0;
      for (long k = kmin; k <= kmax; ++k) {
        const double u = (2.0 * static_cast<double>(k) + (odd ? 1.0 : 0.0)) * dx;
        const double w = (k == kmin || k == kmax) ? 0.5 : 1.0;
        acc += w * rho.values(c + (odd ? 1 : 0) + k, c - k) * std::polar(1.0, -p[j] * u);
      }
      lattice(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(j)) = acc * (2.0 * dx);
    }
  });
  const double residue = lattice.imag().cwiseAbs().maxCoeff();
  if (residue > opt.complex_residue)
    fail(ErrorKind::ComplexResidue, "imaginary residue " + std::to_string(residue));
  WignerGrid out{q, p, Eigen::MatrixXd(q.size(), p.size())};
  for (std::size_t j = 0; j < p.size(); ++j) {
    const auto col = static_cast<Eigen::Index>(j);
    for (std::size_t i = 0; i < q.size(); ++i)
      out.values(static_cast<Eigen::Index>(i), col) =
          cubic_at<double>(half, [&](long r) { return lattice(r, col).real(); }, q[i]);
  }
  return out;
}

/// rho(X, X') = (1/2pi) integral C(mu, X - X') exp(-i mu (X + X')/2) dmu, where
/// C(mu, nu) = integral w(Y, mu, nu) e^{iY} dY is the characteristic function
/// of the tomogram, obtained from the optical columns by homogeneity. C is
/// tabulated in polar form (radius up to density_k_max) and interpolated
/// cubically in radius and angle.
inline DensityKernel density_from_tomogram(const Tomogram& tomo, const TransformOptions& opt = {}) {
  if (tomo.is_analytic()) fail(ErrorKind::InvalidArgument, "density_from_tomogram needs optical samples");
  const OpticalSamples& t = tomo.samples();
  const std::size_t nphi = t.phi.size();
  if (nphi < opt.min_angles)
    fail(ErrorKind::InsufficientAngles, std::to_string(nphi) + " angles; need at least " +
                                            std::to_string(opt.min_angles));
  const double coverage = t.phi.spacing() * static_cast<double>(nphi);
  const bool half_circle = std::abs(coverage - pi) < 1e-9;
  if (!half_circle && std::abs(coverage - two_pi) > 1e-9)
    fail(ErrorKind::InsufficientAngles, "angle grid must cover [0, pi) or [0, 2pi) uniformly");

  const double kmax = opt.density_k_max;
  const auto nk = static_cast<std::size_t>(std::ceil(kmax / opt.density_dk)) + 1;
  const Grid1D kgrid(-kmax, kmax, 2 * nk - 1);
  const std::size_t nx = t.x.size();

  // chi(k, phi_c) = integral w(x, phi_c) e^{ikx} dx on the signed radial grid.
  Eigen::MatrixXcd chi(kgrid.size(), nphi);
  parallel_for(nphi, [&](std::size_t c) {
    const auto col = static_cast<Eigen::Index>(c);
    for (std::size_t r = 0; r < kgrid.size(); ++r) {
      const double k = kgrid[r];
      const cplx step = std::polar(1.0, k * t.x.spacing());
      cplx ph = std::polar(1.0, k * t.x.min());
      cplx acc = 0.0;
      for (std::size_t i = 0; i < nx; ++i) {
        acc += detail::trap_weight(i, nx) * t.values(static_cast<Eigen::Index>(i), col) * ph;
        ph *= step;
      }
      chi(static_cast<Eigen::Index>(r), col) = acc * t.x.spacing();
    }
  });

  // Column lookup with periodic extension: index c + nphi is column c at phi + pi
  // (k -> -k) on a half circle, or column c itself on a full circle.
  auto column_at = [&](long c, double k) -> cplx {
    const long n = static_cast<long>(nphi);
    long wraps = 0;
    while (c < 0) { c += n; --wraps; }
    while (c >= n) { c -= n; ++wraps; }
    const double kk = (half_circle && (wraps % 2 != 0)) ? -k : k;
    return cubic_at<cplx>(kgrid, [&](long r) { return chi(r, c); }, kk);
  };
  auto characteristic = [&](double mu, double nu) -> cplx {
    const double r = std::hypot(mu, nu);
    if (r > kmax) return 0.0;
    if (r == 0.0) return 1.0;
    double a = (std::atan2(nu, mu) - t.phi.min()) / t.phi.spacing();
    const long base = static_cast<long>(std::floor(a));
    const double s = a - static_cast<double>(base);
    const double w0 = -s * (s - 1.0) * (s - 2.0) / 6.0;
    const double w1 = (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0;
    const double w2 = -(s + 1.0) * s * (s - 2.0) / 2.0;
    const double w3 = (s + 1.0) * s * (s - 1.0) / 6.0;
    return column_at(base - 1, r) * w0 + column_at(base, r) * w1 + column_at(base + 1, r) * w2 +
           column_at(base + 2, r) * w3;
  };

  const auto nmu = static_cast<std::size_t>(std::ceil(2.0 * kmax / opt.density_dmu)) + 1;
  const Grid1D mug(-kmax, kmax, nmu);
  const long nn = static_cast<long>(nx);
  // C(mu_j, s_l), s_l = l dx for l in [-(nx-1), nx-1].
  Eigen::MatrixXcd ctab(nmu, 2 * nx - 1);
  parallel_for(2 * nx - 1, [&](std::size_t l) {
    const double s = (static_cast<double>(l) - static_cast<double>(nx - 1)) * t.x.spacing();
    for (std::size_t j = 0; j < nmu; ++j)
      ctab(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l)) = characteristic(mug[j], s);
  });

  Eigen::MatrixXcd rho(nx, nx);
  parallel_for(nx, [&](std::size_t a) {
    for (std::size_t b = 0; b < nx; ++b) {
      const long l = static_cast<long>(a) - static_cast<long>(b) + nn - 1;
      const double c = 0.5 * (t.x[a] + t.x[b]);
      const cplx step = std::polar(1.0, -mug.spacing() * c);
      cplx ph = std::polar(1.0, -mug.min() * c);
      cplx acc = 0.0;
      for (std::size_t j = 0; j < nmu; ++j) {
        acc += detail::trap_weight(j, nmu) * ctab(static_cast<Eigen::Index>(j), l) * ph;
        ph *= step;
      }
      rho(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = acc * mug.spacing() / two_pi;
    }
  });
  const double asym = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  if (asym > opt.hermitian_tolerance)
    fail(ErrorKind::NonHermitianResult, "asymmetry " + std::to_string(asym));
  Eigen::MatrixXcd herm = 0.5 * (rho + rho.adjoint());
  return {t.x, std::move(herm)};
}

}  // namespace tomo
