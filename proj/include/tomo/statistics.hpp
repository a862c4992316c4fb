#pragma once
// Scalar functionals of tomograms: moments, entropy, the position/momentum
// uncertainty product and transition probabilities.

#include "tomo/analytic_states.hpp"
#include "tomo/core.hpp"

#include <vector>

namespace tomo {

/// One frame slice w(X, mu, nu) on a uniform X grid.
struct FrameSlice {
  Grid1D x;
  Eigen::VectorXd w;
};

/// Samples the frame slice over the tomogram's support. Analytic tomograms are
/// scanned coarsely to find where w exceeds 1e-17 of its peak; sampled ones
/// use their X grid scaled by r = |(mu, nu)|.
inline FrameSlice frame_slice(const Tomogram& t, const SymplecticFrame& f) {
  const double r = f.radius();
  if (!t.is_analytic()) {
    const Grid1D& xs = t.samples().x;
    const Grid1D g(xs.min() * r, xs.max() * r, xs.size());
    Eigen::VectorXd w(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) w(static_cast<Eigen::Index>(i)) = t(g[i], f.mu, f.nu);
    return {g, w};
  }
  const double fw = t.feature_width();
  const double coarse = r * std::min(0.05, fw / 2.0);
  const double span = 60.0 * r;
  const auto nc = static_cast<std::size_t>(std::ceil(2.0 * span / coarse)) + 1;
  std::vector<double> vals(nc);
  double peak = 0.0;
  for (std::size_t i = 0; i < nc; ++i) {
    vals[i] = t(-span + static_cast<double>(i) * coarse, f.mu, f.nu);
    peak = std::max(peak, vals[i]);
  }
  std::size_t lo = nc, hi = 0;
  for (std::size_t i = 0; i < nc; ++i)
    if (vals[i] > 1e-17 * peak) {
      lo = std::min(lo, i);
      hi = i;
    }
  if (lo >= nc) fail(ErrorKind::NotNormalized, "tomogram vanishes on the scanned range");
  const double a = -span + static_cast<double>(lo) * coarse - 10.0 * coarse;
  const double b = -span + static_cast<double>(hi) * coarse + 10.0 * coarse;
  const double dx = r * std::min(0.01, fw / 10.0);
  const auto n = static_cast<std::size_t>(std::ceil((b - a) / dx)) + 1;
  const Grid1D g(a, b, n);
  Eigen::VectorXd w(n);
  for (std::size_t i = 0; i < n; ++i) w(static_cast<Eigen::Index>(i)) = t(g[i], f.mu, f.nu);
  return {g, w};
}

/// integral X^order w(X, mu, nu) dX for order 0, 1, 2.
inline double moment(const Tomogram& t, const SymplecticFrame& f, int order) {
  if (order < 0 || order > 2) fail(ErrorKind::InvalidArgument, "moment order must be 0, 1 or 2");
  const FrameSlice s = frame_slice(t, f);
  const double h = s.x.spacing();
  const double m0 = trapezoid(s.w, h);
  if (std::abs(m0 - 1.0) > 1e-2) fail(ErrorKind::NotNormalized, "order-0 moment " + std::to_string(m0));
  if (order == 0) return m0;
  return trapezoid<double>(s.x.size(), h, [&](std::size_t i) {
    return std::pow(s.x[i], order) * s.w(static_cast<Eigen::Index>(i));
  });
}

inline double variance(const Tomogram& t, const SymplecticFrame& f) {
  const double m1 = moment(t, f, 1);
  return moment(t, f, 2) - m1 * m1;
}

/// S(mu, nu) = -integral w ln w dX in nats; samples below 1e-30 contribute 0.
inline double entropy(const Tomogram& t, const SymplecticFrame& f) {
  const FrameSlice s = frame_slice(t, f);
  return trapezoid<double>(s.x.size(), s.x.spacing(), [&](std::size_t i) {
    const double w = s.w(static_cast<Eigen::Index>(i));
    return w < 1e-30 ? 0.0 : -w * std::log(w);
  });
}

/// var_(1,0) * var_(0,1); at least 1/4 for a quantum state.
inline double uncertainty_product(const Tomogram& t) {
  return variance(t, {1.0, 0.0}) * variance(t, {0.0, 1.0});
}

// ---------------------------------------------------------------------------
// Transition probability from two tomograms,
//   P12 = integral w1(X, mu, nu) w2(Y, -mu, -nu) e^{i(X+Y)} dmu dnu dX dY / 2pi.
// Homogeneity turns the X integral at (mu, nu) = r (cos phi, sin phi) into
// chi(r, phi) = integral w(x, phi) e^{irx} dx, so
//   P12 = (1/2pi) integral_0^{2pi} dphi integral_0^R r dr chi1(r, phi) chi2(r, phi + pi).

struct TransitionOptions {
  double radius = 12.0;
  double dr = 0.02;
  std::size_t angles = 128;  // over [0, 2pi); must be even
  double tail_bound = 1e-4;
  double residue_bound = 1e-3;
};

/// chi(r_i, phi_j) for r_i on [0, radius] and phi_j on the full circle.
struct CharacteristicTable {
  Grid1D r;
  Grid1D phi;
  Eigen::MatrixXcd chi;  // (r index, phi index)
};

inline CharacteristicTable characteristic_table(const Tomogram& t, const TransitionOptions& opt = {}) {
  if (opt.angles < 4 || opt.angles % 2 != 0)
    fail(ErrorKind::InvalidArgument, "transition quadrature needs an even number of angles");
  const auto nr = static_cast<std::size_t>(std::ceil(opt.radius / opt.dr)) + 1;
  CharacteristicTable tab{Grid1D(0.0, opt.radius, nr), full_circle(opt.angles),
                          Eigen::MatrixXcd(nr, opt.angles)};
  parallel_for(opt.angles, [&](std::size_t j) {
    const FrameSlice s = frame_slice(t, SymplecticFrame::optical(tab.phi[j]));
    const std::size_t nx = s.x.size();
    const double h = s.x.spacing();
    for (std::size_t i = 0; i < nr; ++i) {
      const double k = tab.r[i];
      const cplx step = std::polar(1.0, k * h);
      cplx ph = std::polar(1.0, k * s.x.min());
      cplx acc = 0.0;
      for (std::size_t m = 0; m < nx; ++m) {
        const double wt = (m == 0 || m + 1 == nx) ? 0.5 : 1.0;
        acc += wt * s.w(static_cast<Eigen::Index>(m)) * ph;
        ph *= step;
      }
      tab.chi(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = acc * h;
    }
  });
  return tab;
}

inline double transition_probability(const CharacteristicTable& a, const CharacteristicTable& b,
                                     const TransitionOptions& opt = {}) {
  if (!(a.r == b.r) || !(a.phi == b.phi))
    fail(ErrorKind::InvalidArgument, "characteristic tables use different quadratures");
  const auto nr = static_cast<Eigen::Index>(a.r.size());
  const auto na = static_cast<Eigen::Index>(a.phi.size());
  const double dphi = two_pi / static_cast<double>(na);
  cplx total = 0.0;
  double tail = 0.0;
  for (Eigen::Index j = 0; j < na; ++j) {
    const Eigen::Index opposite = (j + na / 2) % na;
    cplx radial = 0.0;
    for (Eigen::Index i = 0; i < nr; ++i) {
      const double wt = (i == 0 || i + 1 == nr) ? 0.5 : 1.0;
      radial += wt * a.r[static_cast<std::size_t>(i)] * a.chi(i, j) * b.chi(i, opposite);
    }
    // Euler-Maclaurin endpoint term; d/dr (r chi1 chi2) at r = 0 is chi1 chi2.
    const double h = a.r.spacing();
    radial = radial * h + h * h / 12.0 * a.chi(0, j) * b.chi(0, opposite);
    total += radial * dphi;
    tail = std::max(tail, a.r.max() * std::abs(a.chi(nr - 1, j) * b.chi(nr - 1, opposite)));
  }
  total /= two_pi;
  if (tail > opt.tail_bound)
    fail(ErrorKind::IntegrationDiverged, "radial tail estimate " + std::to_string(tail));
  if (std::abs(total.imag()) > opt.residue_bound)
    fail(ErrorKind::ComplexResidue, "imaginary part " + std::to_string(total.imag()));
  return total.real();
}

inline double transition_probability(const Tomogram& t1, const Tomogram& t2, const TransitionOptions& opt = {}) {
  return transition_probability(characteristic_table(t1, opt), characteristic_table(t2, opt), opt);
}

/// Pairwise transition probabilities; each state's table is built once.
inline Eigen::MatrixXd orthogonality_matrix(const std::vector<Tomogram>& states, const TransitionOptions& opt = {}) {
  if (states.size() > 8) fail(ErrorKind::InvalidArgument, "orthogonality_matrix takes at most 8 states");
  std::vector<CharacteristicTable> tabs;
  tabs.reserve(states.size());
  for (const auto& s : states) tabs.push_back(characteristic_table(s, opt));
  const auto n = static_cast<Eigen::Index>(states.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      m(i, j) = transition_probability(tabs[static_cast<std::size_t>(i)], tabs[static_cast<std::size_t>(j)], opt);
  return m;
}

/// Wigner-overlap route, P12 = (1/2pi) integral W1 W2 dq dp, on a shared grid.
inline double wigner_overlap(const WignerGrid& a, const WignerGrid& b) {
  if (!(a.q == b.q) || !(a.p == b.p)) fail(ErrorKind::InvalidArgument, "Wigner grids differ");
  return trapezoid2d(a.values.cwiseProduct(b.values), a.q.spacing(), a.p.spacing()) / two_pi;
}

/// Sum over n <= n_max of P(alpha -> n); tends to 1 by completeness of the Fock basis.
inline double white_noise_tomogram_pairing(CoherentLabel alpha, int n_max, const TransitionOptions& opt = {}) {
  if (n_max < 0) fail(ErrorKind::InvalidArgument, "n_max must be nonnegative");
  const CharacteristicTable coh = characteristic_table(coherent_tomogram(alpha), opt);
  double sum = 0.0;
  for (int n = 0; n <= n_max; ++n)
    sum += transition_probability(coh, characteristic_table(fock_tomogram(FockLabel(n)), opt), opt);
  return sum;
}

}  // namespace tomo
