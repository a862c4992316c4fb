#pragma once
// Evolution of tomograms under quadratic Hamiltonians.
//
// Phase-space vectors are ordered Q = (p, q) and frames N = (nu, mu), so that
// N Q = mu q + nu p. The linear integrals of motion I(t) = Lambda(t) Q + Delta(t)
// map the current phase point back to the initial one; propagators act on
// tomograms as the frame pullback
//   w_t(X, mu, nu) = w_0(X + N Lambda^{-1} Delta, mu', nu'),  (nu', mu') = N Lambda^{-1}.

#include "tomo/analytic_states.hpp"
#include "tomo/core.hpp"
#include "tomo/cv_transforms.hpp"

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace tomo {

using Mat2 = Eigen::Matrix2d;
using Vec2 = Eigen::Vector2d;

/// H = 1/2 Q B(t) Q + C(t) Q with Q = (p, q).
struct QuadraticHamiltonian {
  std::function<Mat2(double)> B;
  std::function<Vec2(double)> C;

  static QuadraticHamiltonian constant(const Mat2& b, const Vec2& c = Vec2::Zero()) {
    return {[b](double) { return b; }, [c](double) { return c; }};
  }
  /// H = p^2 / 2.
  static QuadraticHamiltonian free_particle() {
    Mat2 b;
    b << 1.0, 0.0, 0.0, 0.0;
    return constant(b);
  }
  /// H = (p^2 + q^2) / 2.
  static QuadraticHamiltonian oscillator() { return constant(Mat2::Identity()); }
  /// Oscillator driven by a force f(t): H = (p^2 + q^2) / 2 - f(t) q.
  static QuadraticHamiltonian forced_oscillator(std::function<double(double)> f) {
    return {[](double) { return Mat2(Mat2::Identity()); }, [f](double t) { return Vec2(0.0, -f(t)); }};
  }
};

struct LinearInvariants {
  Mat2 Lambda = Mat2::Identity();
  Vec2 Delta = Vec2::Zero();
  double t = 0.0;
};

namespace detail {

/// J with Qdot = -J grad H for Q = (p, q).
inline Mat2 symplectic_j() {
  Mat2 j;
  j << 0.0, 1.0, -1.0, 0.0;
  return j;
}

inline void require_symmetric(const Mat2& b, double t) {
  if (std::abs(b(0, 1) - b(1, 0)) > 1e-12)
    fail(ErrorKind::InvalidArgument, "B(t) is not symmetric at t = " + std::to_string(t));
}

}  // namespace detail

/// Integrates the invariant equations from Lambda(0) = 1, Delta(0) = 0 to t
/// with classical RK4.
///
/// Requiring dI/dt = 0 along Hamilton's equations Qdot = -J (B Q + C) gives the
/// real system Lambdadot = Lambda J B, Deltadot = Lambda J C. For H = p^2/2 this
/// yields Lambda = [[1, 0], [-t, 1]], and for the oscillator the rotation
/// [[cos t, sin t], [-sin t, cos t]].
inline LinearInvariants linear_invariants(const QuadraticHamiltonian& h, double t, double dt = 1e-3) {
  if (!(dt > 0.0) || dt > 1e-2) fail(ErrorKind::InvalidArgument, "dt must lie in (0, 1e-2]");
  if (!std::isfinite(t)) fail(ErrorKind::InvalidArgument, "t must be finite");
  const Mat2 J = detail::symplectic_j();
  const auto steps = std::max<long>(1, static_cast<long>(std::ceil(std::abs(t) / dt)));
  const double s = t / static_cast<double>(steps);
  auto rhs = [&](double tau, const Mat2& L, Mat2& dL, Vec2& dD) {
    const Mat2 b = h.B(tau);
    detail::require_symmetric(b, tau);
    dL = L * J * b;
    dD = L * J * h.C(tau);
  };
  LinearInvariants inv;
  Mat2 k1L, k2L, k3L, k4L;
  Vec2 k1D, k2D, k3D, k4D;
  for (long i = 0; i < steps; ++i) {
    const double t0 = s * static_cast<double>(i);
    const Mat2& L = inv.Lambda;
    rhs(t0, L, k1L, k1D);
    rhs(t0 + 0.5 * s, L + 0.5 * s * k1L, k2L, k2D);
    rhs(t0 + 0.5 * s, L + 0.5 * s * k2L, k3L, k3D);
    rhs(t0 + s, L + s * k3L, k4L, k4D);
    inv.Lambda += s / 6.0 * (k1L + 2.0 * k2L + 2.0 * k3L + k4L);
    inv.Delta += s / 6.0 * (k1D + 2.0 * k2D + 2.0 * k3D + k4D);
  }
  inv.t = t;
  const double det = inv.Lambda.determinant();
  if (!(std::abs(det - 1.0) <= 1e-6)) fail(ErrorKind::SymplecticityLost, "det Lambda = " + std::to_string(det));
  return inv;
}

/// Pullback kernel between two times. Lambda and Delta express the phase point
/// at t_from through the one at t_to: Q(t_from) = Lambda Q(t_to) + Delta.
struct TomographicPropagator {
  enum class Kind { FreeMotion, Oscillator, Quadratic };
  Kind kind = Kind::Quadratic;
  double t_from = 0.0;
  double t_to = 0.0;
  Mat2 Lambda = Mat2::Identity();
  Vec2 Delta = Vec2::Zero();

  static TomographicPropagator free_motion(double t, double t0 = 0.0) {
    TomographicPropagator p{Kind::FreeMotion, t0, t0 + t, Mat2::Identity(), Vec2::Zero()};
    p.Lambda(1, 0) = -t;
    return p;
  }
  static TomographicPropagator oscillator(double t, double t0 = 0.0) {
    TomographicPropagator p{Kind::Oscillator, t0, t0 + t, Mat2::Identity(), Vec2::Zero()};
    p.Lambda << std::cos(t), std::sin(t), -std::sin(t), std::cos(t);
    return p;
  }
  /// Propagator from 0 to inv.t.
  static TomographicPropagator quadratic(const LinearInvariants& inv) {
    return {Kind::Quadratic, 0.0, inv.t, inv.Lambda, inv.Delta};
  }

  /// (X', mu', nu') at which the initial tomogram is read.
  void pull_back(double X, double mu, double nu, double& Xp, double& mup, double& nup) const {
    const Eigen::RowVector2d N(nu, mu);
    const Eigen::RowVector2d Np = N * Lambda.inverse();
    Xp = X + Np.dot(Delta);
    nup = Np(0);
    mup = Np(1);
  }
};

/// p1 carries t1 -> t', p2 carries t' -> t2; the result carries t1 -> t2.
inline TomographicPropagator compose_propagators(const TomographicPropagator& p1, const TomographicPropagator& p2) {
  if (std::abs(p1.t_to - p2.t_from) > 1e-12)
    fail(ErrorKind::TimeMismatch, "propagators do not share the intermediate time");
  TomographicPropagator out;
  out.kind = p1.kind == p2.kind ? p1.kind : TomographicPropagator::Kind::Quadratic;
  out.t_from = p1.t_from;
  out.t_to = p2.t_to;
  out.Lambda = p1.Lambda * p2.Lambda;
  out.Delta = p1.Lambda * p2.Delta + p1.Delta;
  return out;
}

inline Tomogram propagate_tomogram(const Tomogram& tomo, const TomographicPropagator& prop) {
  AnalyticTomogram a;
  a.label = tomo.label() + "@t=" + std::to_string(prop.t_to);
  const Eigen::JacobiSVD<Mat2> svd(prop.Lambda);
  a.feature_width = tomo.feature_width() / svd.singularValues()(0);
  a.eval = [tomo, prop](double X, double mu, double nu) {
    double Xp, mup, nup;
    prop.pull_back(X, mu, nu, Xp, mup, nup);
    return tomo(Xp, mup, nup);
  };
  return Tomogram(std::move(a));
}

struct LiouvilleOptions {
  double dt = 1e-3;
  double outflow_bound = 1e-3;
};

/// f(Q, t) = f_0(Lambda(t) Q + Delta(t)), bilinearly interpolated on the input grid.
inline PhaseDensity liouville_evolve(const PhaseDensity& f, const QuadraticHamiltonian& h, double t,
                                     const LiouvilleOptions& opt = {}) {
  const LinearInvariants inv = linear_invariants(h, t, opt.dt);
  PhaseDensity out{f.q, f.p, Eigen::MatrixXd(f.q.size(), f.p.size())};
  parallel_for(f.q.size(), [&](std::size_t i) {
    for (std::size_t k = 0; k < f.p.size(); ++k) {
      const Vec2 q0 = inv.Lambda * Vec2(f.p[k], f.q[i]) + inv.Delta;
      out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          bilinear_at(f.q, f.p, f.values, q0(1), q0(0));
    }
  });
  const double hq = f.q.spacing(), hp = f.p.spacing();
  const double m0 = trapezoid2d(f.values, hq, hp);
  const double m1 = trapezoid2d(out.values, hq, hp);
  if (m0 - m1 > opt.outflow_bound * std::abs(m0))
    fail(ErrorKind::BoundaryOutflow, "lost " + std::to_string((m0 - m1) / m0) + " of the mass");
  return out;
}

/// Grids used to compare classical and quantum evolution of coherent states.
struct AgreementGrid {
  Grid1D phase = Grid1D(-6.0, 6.0, 401);
  Grid1D x = Grid1D(-5.0, 5.0, 101);
  std::size_t angles = 32;
};

/// Max-abs difference between the classical route (Liouville evolution of the
/// coherent state's phase-space Gaussian, then the classical tomography map)
/// and the quantum route (oscillator pullback of the coherent tomogram).
inline double classical_quantum_agreement(CoherentLabel state, double t, const AgreementGrid& g = {}) {
  if (t < 0.0 || t > two_pi) fail(ErrorKind::InvalidArgument, "t must lie in [0, 2 pi]");
  const double q0 = std::sqrt(2.0) * state.alpha.real();
  const double p0 = std::sqrt(2.0) * state.alpha.imag();
  const double s = 1.0 / std::sqrt(2.0);
  const PhaseDensity f0 = gaussian_phase_density(q0, p0, s, s, g.phase, g.phase);
  const PhaseDensity ft = liouville_evolve(f0, QuadraticHamiltonian::oscillator(), t);
  const Grid1D phi = optical_angles(g.angles);
  const OpticalSamples classical = classical_tomogram(ft, g.x, phi).samples();
  const Tomogram quantum = propagate_tomogram(coherent_tomogram(state), TomographicPropagator::oscillator(t));
  double err = 0.0;
  for (std::size_t k = 0; k < phi.size(); ++k)
    for (std::size_t i = 0; i < g.x.size(); ++i)
      err = std::max(err, std::abs(classical.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) -
                                   quantum(g.x[i], std::cos(phi[k]), std::sin(phi[k]))));
  return err;
}

struct FramePoint {
  double X, mu, nu;
};

/// X in [-2.5, 2.5] against frames on radii 0.7, 1, 1.5 at eight angles.
inline std::vector<FramePoint> standard_frame_points() {
  std::vector<FramePoint> pts;
  for (double r : {0.7, 1.0, 1.5})
    for (int a = 0; a < 8; ++a) {
      const double ang = pi * (a + 0.25) / 4.0;
      for (int i = -5; i <= 5; ++i) pts.push_back({0.5 * i, r * std::cos(ang), r * std::sin(ang)});
    }
  return pts;
}

inline constexpr double fd_step = 1e-4;

/// max |mu dw/dnu - nu dw/dmu| over the standard points, by central differences.
inline double stationarity_residual(const Tomogram& tomo, const std::vector<FramePoint>& pts = standard_frame_points()) {
  double res = 0.0;
  const double h = fd_step;
  for (const auto& s : pts) {
    const double dnu = (tomo(s.X, s.mu, s.nu + h) - tomo(s.X, s.mu, s.nu - h)) / (2.0 * h);
    const double dmu = (tomo(s.X, s.mu + h, s.nu) - tomo(s.X, s.mu - h, s.nu)) / (2.0 * h);
    res = std::max(res, std::abs(s.mu * dnu - s.nu * dmu));
  }
  return res;
}

using TomogramFamily = std::function<Tomogram(double)>;

/// t -> propagate_tomogram(initial, oscillator(t)).
inline TomogramFamily oscillator_family(const Tomogram& initial) {
  return [initial](double t) { return propagate_tomogram(initial, TomographicPropagator::oscillator(t)); };
}

/// max |dw/dt - mu dw/dnu + nu dw/dmu| at time t over the standard points.
inline double oscillator_evolution_residual(const TomogramFamily& family, double t,
                                            const std::vector<FramePoint>& pts = standard_frame_points()) {
  const double h = fd_step;
  const Tomogram now = family(t), before = family(t - h), after = family(t + h);
  double res = 0.0;
  for (const auto& s : pts) {
    const double dt = (after(s.X, s.mu, s.nu) - before(s.X, s.mu, s.nu)) / (2.0 * h);
    const double dnu = (now(s.X, s.mu, s.nu + h) - now(s.X, s.mu, s.nu - h)) / (2.0 * h);
    const double dmu = (now(s.X, s.mu + h, s.nu) - now(s.X, s.mu - h, s.nu)) / (2.0 * h);
    res = std::max(res, std::abs(dt - s.mu * dnu + s.nu * dmu));
  }
  return res;
}

struct FourierPoint {
  double k, mu, nu;
};

inline constexpr double near_node_threshold = 1e-8;

/// Standard (k, mu, nu) points for the energy estimate of Fock state n: a
/// lattice in |k| in [0.5, 3], mu^2 + nu^2 in [0.5, 4], keeping the points
/// where |w~_n| stays well away from Laguerre zeros.
inline std::vector<FourierPoint> energy_sample_points(FockLabel n) {
  std::vector<FourierPoint> pts;
  for (double k : {0.5, 0.8, 1.2, 1.7}) {
    for (double r : {0.75, 1.0, 1.4, 1.9}) {
      for (double ang : {0.3, 1.1, 2.0}) {
        const FourierPoint p{k, r * std::cos(ang), r * std::sin(ang)};
        const double s = k * k * r * r;
        if (std::abs(std::exp(-0.25 * s) * laguerre(n.n, 0.5 * s)) > 0.02) pts.push_back(p);
      }
    }
  }
  return pts;
}

/// Pointwise eigenvalue estimates
///   E = [-(1/2k^2)(d^2/dnu^2 + d^2/dmu^2) + (k^2/8)(mu^2 + nu^2)] w~ / w~
/// with second central differences of step 1e-4.
inline std::vector<double> oscillator_energy_samples(FockLabel n, const std::vector<FourierPoint>& pts) {
  if (pts.empty()) fail(ErrorKind::InvalidArgument, "no sample points");
  std::vector<double> out;
  out.reserve(pts.size());
  const double h = fd_step;
  for (const auto& s : pts) {
    const double r2 = s.mu * s.mu + s.nu * s.nu;
    if (std::abs(s.k) < 0.5 || std::abs(s.k) > 3.0 || r2 < 0.5 || r2 > 4.0)
      fail(ErrorKind::InvalidArgument, "sample outside |k| in [0.5, 3], mu^2 + nu^2 in [0.5, 4]");
    auto w = [&](double mu, double nu) { return fock_tomogram_fourier(n, s.k, {mu, nu}); };
    const double w0 = w(s.mu, s.nu);
    if (std::abs(w0) < near_node_threshold) fail(ErrorKind::NearNode, "sample lies on a node of the Fourier component");
    const double lap = (w(s.mu + h, s.nu) + w(s.mu - h, s.nu) + w(s.mu, s.nu + h) + w(s.mu, s.nu - h) - 4.0 * w0) / (h * h);
    out.push_back((-lap / (2.0 * s.k * s.k) + 0.125 * s.k * s.k * r2 * w0) / w0);
  }
  return out;
}

inline double oscillator_energy_estimate(FockLabel n, const std::vector<FourierPoint>& pts) {
  const auto e = oscillator_energy_samples(n, pts);
  double sum = 0.0;
  for (double v : e) sum += v;
  return sum / static_cast<double>(e.size());
}

inline double oscillator_energy_estimate(FockLabel n) { return oscillator_energy_estimate(n, energy_sample_points(n)); }

}  // namespace tomo
