#pragma once
// Spin tomography: Wigner d and D functions, 3j symbols, the spin tomogram of
// a density matrix and its inversion.
//
// Index convention: matrices over m run m = j, j-1, ..., -j along rows and
// columns (see spin_m). D_{m'm}(alpha, beta, gamma) = e^{i m' gamma} d_{m'm}(beta) e^{i m alpha},
// and the tomogram is w(m, alpha, beta) = (D rho D^dagger)_{mm} at gamma = 0.

#include "tomo/core.hpp"

#include <Eigen/Dense>

#include <array>
#include <random>
#include <vector>

namespace tomo {

struct EulerAngles {
  double alpha = 0.0, beta = 0.0, gamma = 0.0;
};

struct ThreeJ {
  double j1, j2, j3;
  double m1, m2, m3;
};

namespace detail {

inline long twice(double x) { return std::lround(2.0 * x); }
inline bool is_half(double x) { return std::abs(2.0 * x - std::round(2.0 * x)) < 1e-12; }
inline double log_fact(long n) { return std::lgamma(static_cast<double>(n) + 1.0); }
inline double parity(long n) { return (n % 2 == 0) ? 1.0 : -1.0; }

inline void check_indices(double j, double m1, double m) {
  if (!is_half(j) || j < 0.0) fail(ErrorKind::IndexOutOfRange, "j must be a nonnegative half-integer");
  for (double x : {m1, m}) {
    if (!is_half(x) || (twice(j) - twice(x)) % 2 != 0 || std::abs(x) > j + 1e-12)
      fail(ErrorKind::IndexOutOfRange, "m must be one of j, j-1, ..., -j");
  }
}

/// Jacobi polynomial P_n^{(a,b)}(x) by the standard three-term recurrence.
inline double jacobi(long n, double a, double b, double x) {
  if (n == 0) return 1.0;
  double p0 = 1.0;
  double p1 = 0.5 * (a - b + (a + b + 2.0) * x);
  for (long k = 2; k <= n; ++k) {
    const double kk = static_cast<double>(k);
    const double c = 2.0 * kk + a + b;
    const double a1 = 2.0 * kk * (kk + a + b) * (c - 2.0);
    const double a2 = (c - 1.0) * (a * a - b * b);
    const double a3 = (c - 2.0) * (c - 1.0) * c;
    const double a4 = 2.0 * (kk + a - 1.0) * (kk + b - 1.0) * c;
    const double p2 = ((a2 + a3 * x) * p1 - a4 * p0) / a1;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

/// Jacobi form, valid for m1 >= |m| (nonnegative Jacobi parameters). Arguments
/// are twice the physical values.
inline double small_d_direct(long tj, long tm1, long tm, double beta) {
  const long a = (tm1 - tm) / 2, b = (tm1 + tm) / 2, n = (tj - tm1) / 2;
  const double lp = 0.5 * (log_fact((tj + tm1) / 2) + log_fact((tj - tm1) / 2) - log_fact((tj + tm) / 2) -
                           log_fact((tj - tm) / 2));
  const double c = std::cos(0.5 * beta), s = std::sin(0.5 * beta);
  return std::exp(lp) * std::pow(c, static_cast<double>(b)) * std::pow(s, static_cast<double>(a)) *
         jacobi(n, static_cast<double>(a), static_cast<double>(b), std::cos(beta));
}

}  // namespace detail

/// d_{m1 m}(beta) in Jacobi form, extended to all index pairs through
/// d_{m1 m} = (-1)^{m1-m} d_{m m1} and d_{m1 m} = d_{-m,-m1}.
inline double wigner_small_d(double j, double m1, double m, double beta) {
  detail::check_indices(j, m1, m);
  if (!(beta >= -1e-12 && beta <= pi + 1e-12)) fail(ErrorKind::InvalidArgument, "beta must lie in [0, pi]");
  const long tj = detail::twice(j);
  long a = detail::twice(m1), b = detail::twice(m);
  double sign = 1.0;
  if (a + b < 0) {
    const long t = a;
    a = -b;
    b = -t;
  }
  if (a < b) {
    sign = detail::parity((a - b) / 2);
    std::swap(a, b);
  }
  return sign * detail::small_d_direct(tj, a, b, beta);
}

inline cplx wigner_D(double j, double m1, double m, const EulerAngles& w) {
  return std::polar(wigner_small_d(j, m1, m, w.beta), m1 * w.gamma + m * w.alpha);
}

/// Full (2j+1) x (2j+1) D matrix, rows and columns indexed by m = j, ..., -j.
inline Eigen::MatrixXcd wigner_D_matrix(double j, const EulerAngles& w) {
  const std::size_t n = spin_dim(j);
  Eigen::MatrixXcd D(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      D(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = wigner_D(j, spin_m(j, r), spin_m(j, c), w);
  return D;
}

/// Wigner 3j symbol from Racah's single sum with log-factorials. Symbols that
/// violate a selection rule are exactly 0.
inline double three_j(const ThreeJ& s) {
  const std::array<double, 6> all{s.j1, s.j2, s.j3, s.m1, s.m2, s.m3};
  for (double x : all)
    if (!detail::is_half(x)) fail(ErrorKind::InvalidArgument, "3j arguments must be half-integers");
  if (s.j1 > 16.0 || s.j2 > 16.0 || s.j3 > 16.0) fail(ErrorKind::InvalidArgument, "3j symbols support j <= 16");
  const long j1 = detail::twice(s.j1), j2 = detail::twice(s.j2), j3 = detail::twice(s.j3);
  const long m1 = detail::twice(s.m1), m2 = detail::twice(s.m2), m3 = detail::twice(s.m3);
  if (j1 < 0 || j2 < 0 || j3 < 0) return 0.0;
  if (m1 + m2 + m3 != 0) return 0.0;
  if (std::abs(m1) > j1 || std::abs(m2) > j2 || std::abs(m3) > j3) return 0.0;
  if ((j1 - m1) % 2 || (j2 - m2) % 2 || (j3 - m3) % 2) return 0.0;
  if (j3 < std::abs(j1 - j2) || j3 > j1 + j2 || (j1 + j2 + j3) % 2) return 0.0;
  // From here on all quantities are integers after halving.
  auto h = [](long x) { return x / 2; };
  const double tri = detail::log_fact(h(j1 + j2 - j3)) + detail::log_fact(h(j1 - j2 + j3)) +
                     detail::log_fact(h(-j1 + j2 + j3)) - detail::log_fact(h(j1 + j2 + j3) + 1);
  const double pre = detail::log_fact(h(j1 + m1)) + detail::log_fact(h(j1 - m1)) + detail::log_fact(h(j2 + m2)) +
                     detail::log_fact(h(j2 - m2)) + detail::log_fact(h(j3 + m3)) + detail::log_fact(h(j3 - m3));
  const long kmin = std::max({0L, h(j2 - j3 - m1), h(j1 - j3 + m2)});
  const long kmax = std::min({h(j1 + j2 - j3), h(j1 - m1), h(j2 + m2)});
  double sum = 0.0;
  for (long k = kmin; k <= kmax; ++k) {
    const double den = detail::log_fact(k) + detail::log_fact(h(j3 - j2 + m1) + k) +
                       detail::log_fact(h(j3 - j1 - m2) + k) + detail::log_fact(h(j1 + j2 - j3) - k) +
                       detail::log_fact(h(j1 - m1) - k) + detail::log_fact(h(j2 + m2) - k);
    sum += detail::parity(k) * std::exp(0.5 * (tri + pre) - den);
  }
  return detail::parity(h(j1 - j2 - m3)) * sum;
}

/// Gauss-Legendre nodes (descending in x) and weights on [-1, 1].
inline void gauss_legendre(std::size_t n, std::vector<double>& x, std::vector<double>& w) {
  if (n == 0) fail(ErrorKind::InvalidArgument, "Gauss-Legendre rule needs at least one node");
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  const double nn = static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    double z = std::cos(pi * (static_cast<double>(i) + 0.75) / (nn + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (std::size_t k = 2; k <= n; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * z * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      dp = nn * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

/// beta nodes arccos(x_k) of an n-point Gauss-Legendre rule in cos(beta), ascending.
inline std::vector<double> gauss_legendre_beta(std::size_t n) {
  std::vector<double> x, w;
  gauss_legendre(n, x, w);
  std::vector<double> b(n);
  for (std::size_t i = 0; i < n; ++i) b[i] = std::acos(x[i]);
  return b;
}

/// Forward map on an explicit set of beta nodes.
inline SpinTomogram spin_tomogram(const SpinState& state, const Grid1D& alpha, std::vector<double> beta,
                                  BetaRule rule) {
  const Violations v = validate(state);
  if (!v.empty()) fail(ErrorKind::InvalidArgument, "spin state violates " + v.front());
  const std::size_t n = spin_dim(state.j);
  SpinTomogram t{state.j, alpha, std::move(beta), rule, {}};
  t.values.assign(n, Eigen::MatrixXd(alpha.size(), t.beta.size()));
  parallel_for(alpha.size(), [&](std::size_t a) {
    for (std::size_t b = 0; b < t.beta.size(); ++b) {
      const Eigen::MatrixXcd D = wigner_D_matrix(state.j, {alpha[a], t.beta[b], 0.0});
      const Eigen::MatrixXcd r = D * state.rho * D.adjoint();
      for (std::size_t m = 0; m < n; ++m) {
        const auto i = static_cast<Eigen::Index>(m);
        t.values[m](static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = r(i, i).real();
      }
    }
  });
  return t;
}

/// Uniform beta grid on [0, pi].
inline SpinTomogram spin_tomogram(const SpinState& state, const Grid1D& alpha, const Grid1D& beta) {
  return spin_tomogram(state, alpha, beta.points(), BetaRule::Uniform);
}

/// n-point Gauss-Legendre rule in cos(beta).
inline SpinTomogram spin_tomogram(const SpinState& state, const Grid1D& alpha, std::size_t beta_nodes) {
  return spin_tomogram(state, alpha, gauss_legendre_beta(beta_nodes), BetaRule::GaussLegendre);
}

namespace detail {

inline void require_full_circle(const Grid1D& a) {
  const double n = static_cast<double>(a.size());
  if (std::abs(a.min()) > 1e-12 || std::abs(a.max() - (two_pi - two_pi / n)) > 1e-9)
    fail(ErrorKind::InvalidArgument, "alpha grid must cover [0, 2 pi) uniformly");
}

/// Resamples each (m, alpha) row of a uniform-beta tomogram at Gauss-Legendre
/// nodes. At fixed alpha, w is a trigonometric polynomial of degree 2j in beta,
/// so a least-squares fit on at least 4j+1 distinct nodes recovers it exactly.
inline std::vector<Eigen::MatrixXd> resample_beta(const SpinTomogram& t, const std::vector<double>& target) {
  const long deg = twice(t.j);
  const auto nb = static_cast<Eigen::Index>(t.beta.size());
  auto basis = [](double b, Eigen::Index col) {
    if (col == 0) return 1.0;
    const double k = static_cast<double>((col + 1) / 2);
    return col % 2 ? std::cos(k * b) : std::sin(k * b);
  };
  const Eigen::Index nc = 2 * deg + 1;
  Eigen::MatrixXd A(nb, nc), E(static_cast<Eigen::Index>(target.size()), nc);
  for (Eigen::Index r = 0; r < nb; ++r)
    for (Eigen::Index c = 0; c < nc; ++c) A(r, c) = basis(t.beta[static_cast<std::size_t>(r)], c);
  for (Eigen::Index r = 0; r < E.rows(); ++r)
    for (Eigen::Index c = 0; c < nc; ++c) E(r, c) = basis(target[static_cast<std::size_t>(r)], c);
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  std::vector<Eigen::MatrixXd> out;
  out.reserve(t.values.size());
  for (const auto& v : t.values) out.push_back((E * qr.solve(v.transpose())).transpose());
  return out;
}

}  // namespace detail

/// Inverse spin transform:
///   rho_{m1' m2'} = sum_{j3 <= 2j} sum_{m3} (2 j3 + 1)^2 sum_{m1} (-1)^{m1 - m2'}
///                   (j j j3; m1 -m1 0) (j j j3; m1' -m2' m3)
///                   integral w(m1, alpha, beta) D^{j3}_{0 m3} domega / (8 pi^2).
/// D^{j3}_{0 m3} does not depend on gamma, which integrates to 2 pi. alpha uses
/// the uniform trapezoid, beta Gauss-Legendre in cos(beta).
inline SpinState reconstruct_spin_state(const SpinTomogram& t) {
  const double j = t.j;
  const long tj = detail::twice(j);
  const std::size_t n = spin_dim(j);
  if (t.values.size() != n) fail(ErrorKind::InvalidArgument, "tomogram has the wrong number of m rows");
  detail::require_full_circle(t.alpha);
  if (t.alpha.size() < static_cast<std::size_t>(2 * tj + 2))
    fail(ErrorKind::QuadratureTooCoarse, "alpha grid needs at least 4j+2 points");

  std::vector<double> gx, gw;
  std::vector<Eigen::MatrixXd> vals;
  if (t.beta_rule == BetaRule::GaussLegendre) {
    if (t.beta.size() < static_cast<std::size_t>(tj + 2))
      fail(ErrorKind::QuadratureTooCoarse, "beta rule needs at least 2j+2 Gauss-Legendre nodes");
    gauss_legendre(t.beta.size(), gx, gw);
    for (std::size_t k = 0; k < gx.size(); ++k)
      if (std::abs(std::acos(gx[k]) - t.beta[k]) > 1e-10)
        fail(ErrorKind::InvalidArgument, "beta nodes are not the Gauss-Legendre nodes of their count");
    vals = t.values;
  } else {
    if (t.beta.size() < static_cast<std::size_t>(2 * tj + 2))
      fail(ErrorKind::QuadratureTooCoarse, "uniform beta grid needs at least 4j+2 points");
    gauss_legendre(static_cast<std::size_t>(tj + 2), gx, gw);
    std::vector<double> nodes(gx.size());
    for (std::size_t k = 0; k < gx.size(); ++k) nodes[k] = std::acos(gx[k]);
    vals = detail::resample_beta(t, nodes);
  }

  const std::size_t na = t.alpha.size(), nb = gx.size();
  const double wa = two_pi / static_cast<double>(na) / (4.0 * pi);
  // A[m1][j3][m3 + j3] = (1/4pi) integral w(m1) d^{j3}_{0 m3} e^{i m3 alpha} dalpha dcos(beta)
  std::vector<std::vector<std::vector<cplx>>> A(n);
  const long j3max = tj;  // j3 = 0, 1, ..., 2j
  for (std::size_t m = 0; m < n; ++m) {
    A[m].resize(static_cast<std::size_t>(j3max + 1));
    for (long j3 = 0; j3 <= j3max; ++j3) {
      A[m][static_cast<std::size_t>(j3)].assign(static_cast<std::size_t>(2 * j3 + 1), 0.0);
      for (long m3 = -j3; m3 <= j3; ++m3) {
        cplx acc = 0.0;
        for (std::size_t b = 0; b < nb; ++b) {
          const double d = wigner_small_d(static_cast<double>(j3), 0.0, static_cast<double>(m3), std::acos(gx[b]));
          cplx row = 0.0;
          for (std::size_t a = 0; a < na; ++a)
            row += vals[m](static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) *
                   std::polar(1.0, static_cast<double>(m3) * t.alpha[a]);
          acc += gw[b] * d * row;
        }
        A[m][static_cast<std::size_t>(j3)][static_cast<std::size_t>(m3 + j3)] = acc * wa;
      }
    }
  }

  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    const double m1p = spin_m(j, r);
    for (std::size_t c = 0; c < n; ++c) {
      const double m2p = spin_m(j, c);
      const long m3 = std::lround(m2p - m1p);
      cplx acc = 0.0;
      for (long j3 = std::abs(m3); j3 <= j3max; ++j3) {
        const double f = static_cast<double>((2 * j3 + 1) * (2 * j3 + 1));
        const double right = three_j({j, j, static_cast<double>(j3), m1p, -m2p, static_cast<double>(m3)});
        if (right == 0.0) continue;
        for (std::size_t m = 0; m < n; ++m) {
          const double m1 = spin_m(j, m);
          const double left = three_j({j, j, static_cast<double>(j3), m1, -m1, 0.0});
          const double sign = detail::parity(std::lround(m1 - m2p));
          acc += f * sign * left * right * A[m][static_cast<std::size_t>(j3)][static_cast<std::size_t>(m3 + j3)];
        }
      }
      rho(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = acc;
    }
  }
  const double asym = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  if (asym > 1e-10) fail(ErrorKind::NonHermitianResult, "reconstruction asymmetry " + std::to_string(asym));
  return {j, 0.5 * (rho + rho.adjoint())};
}

struct GroupQuadrature {
  std::size_t alpha = 0, beta = 0, gamma = 0;  // 0 selects the minimum
};

/// integral D^{j1}_{a1 b1} D^{j2}_{a2 b2} D^{j3}_{a3 b3} domega / (8 pi^2) minus
/// (j1 j2 j3; a1 a2 a3)(j1 j2 j3; b1 b2 b3), with index = {a1, a2, a3, b1, b2, b3}.
/// alpha and gamma use uniform grids of at least 4 max(j) + 2 points, beta a
/// Gauss-Legendre rule with at least 2 max(j) + 2 nodes.
inline double d_orthogonality_check(double j1, double j2, double j3, const std::array<double, 6>& index,
                                    GroupQuadrature q = {}) {
  for (double jj : {j1, j2, j3})
    if (jj > 2.0) fail(ErrorKind::InvalidArgument, "d_orthogonality_check supports j <= 2");
  const long jmax2 = detail::twice(std::max({j1, j2, j3}));
  const auto min_ag = static_cast<std::size_t>(2 * jmax2 + 2);
  const auto min_b = static_cast<std::size_t>(jmax2 + 2);
  if (q.alpha == 0) q.alpha = min_ag;
  if (q.gamma == 0) q.gamma = min_ag;
  if (q.beta == 0) q.beta = min_b;
  if (q.alpha < min_ag || q.gamma < min_ag || q.beta < min_b)
    fail(ErrorKind::QuadratureTooCoarse, "group quadrature below 4 max(j) + 2 uniform / 2 max(j) + 2 Gauss nodes");
  const auto& [a1, a2, a3, b1, b2, b3] = index;
  std::vector<double> gx, gw;
  gauss_legendre(q.beta, gx, gw);
  const Grid1D ga = full_circle(q.alpha), gg = full_circle(q.gamma);
  cplx acc = 0.0;
  for (std::size_t b = 0; b < gx.size(); ++b) {
    const double beta = std::acos(gx[b]);
    const double d = wigner_small_d(j1, a1, b1, beta) * wigner_small_d(j2, a2, b2, beta) *
                     wigner_small_d(j3, a3, b3, beta);
    cplx sa = 0.0, sg = 0.0;
    for (std::size_t i = 0; i < ga.size(); ++i) sa += std::polar(1.0, (b1 + b2 + b3) * ga[i]);
    for (std::size_t i = 0; i < gg.size(); ++i) sg += std::polar(1.0, (a1 + a2 + a3) * gg[i]);
    acc += gw[b] * d * sa * sg;
  }
  acc *= (two_pi / static_cast<double>(ga.size())) * (two_pi / static_cast<double>(gg.size())) / (8.0 * pi * pi);
  const double expected = three_j({j1, j2, j3, a1, a2, a3}) * three_j({j1, j2, j3, b1, b2, b3});
  return std::abs(acc - expected);
}

/// Random mixed state rho = G G^dagger / tr(G G^dagger) with G a complex
/// Gaussian matrix drawn from rng.
template <class Rng>
SpinState random_spin_state(double j, Rng& rng) {
  if (!detail::is_half(j) || j <= 0.0) fail(ErrorKind::InvalidArgument, "j must be a positive half-integer");
  const auto n = static_cast<Eigen::Index>(spin_dim(j));
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXcd G(n, n);
  for (Eigen::Index c = 0; c < n; ++c)
    for (Eigen::Index r = 0; r < n; ++r) G(r, c) = cplx(g(rng), g(rng));
  Eigen::MatrixXcd rho = G * G.adjoint();
  rho /= rho.trace().real();
  return {j, 0.5 * (rho + rho.adjoint())};
}

/// Pure state |j, m> as a density matrix.
inline SpinState spin_basis_state(double j, double m) {
  detail::check_indices(j, m, m);
  const std::size_t n = spin_dim(j);
  SpinState s{j, Eigen::MatrixXcd::Zero(n, n)};
  const auto i = static_cast<Eigen::Index>(std::lround(j - m));
  s.rho(i, i) = 1.0;
  return s;
}

inline SpinState maximally_mixed(double j) {
  const std::size_t n = spin_dim(j);
  return {j, Eigen::MatrixXcd::Identity(n, n) / static_cast<double>(n)};
}

}  // namespace tomo
