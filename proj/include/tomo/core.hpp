#pragma once
// Grids, state containers and their validation.
//
// Units: hbar = m = omega = 1 everywhere. Tomograms are stored on the optical
// circle (mu = cos phi, nu = sin phi); the full (mu, nu) plane is recovered by
// homogeneity, w(lX, l mu, l nu) = |l|^-1 w(X, mu, nu).

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <variant>
#include <vector>

namespace tomo {

using cplx = std::complex<double>;
inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

enum class ErrorKind {
  InvalidArgument,
  GridTooCoarse,
  GridTooNarrow,
  DegenerateFrame,
  InsufficientAngles,
  RingingDetected,
  NonHermitianResult,
  ComplexResidue,
  NegativityDetected,
  NotNormalized,
  IntegrationDiverged,
  SymplecticityLost,
  TimeMismatch,
  BoundaryOutflow,
  NearNode,
  IndexOutOfRange,
  QuadratureTooCoarse,
  UnknownState,
};

inline const char* error_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::GridTooCoarse: return "GridTooCoarse";
    case ErrorKind::GridTooNarrow: return "GridTooNarrow";
    case ErrorKind::DegenerateFrame: return "DegenerateFrame";
    case ErrorKind::InsufficientAngles: return "InsufficientAngles";
    case ErrorKind::RingingDetected: return "RingingDetected";
    case ErrorKind::NonHermitianResult: return "NonHermitianResult";
    case ErrorKind::ComplexResidue: return "ComplexResidue";
    case ErrorKind::NegativityDetected: return "NegativityDetected";
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::IntegrationDiverged: return "IntegrationDiverged";
    case ErrorKind::SymplecticityLost: return "SymplecticityLost";
    case ErrorKind::TimeMismatch: return "TimeMismatch";
    case ErrorKind::BoundaryOutflow: return "BoundaryOutflow";
    case ErrorKind::NearNode: return "NearNode";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::QuadratureTooCoarse: return "QuadratureTooCoarse";
    case ErrorKind::UnknownState: return "UnknownState";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_name(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }
  const char* name() const noexcept { return error_name(kind_); }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind k, const std::string& what) { throw Error(k, what); }

// ---------------------------------------------------------------------------
// Worker count for the parallel-over-index loops. Every loop body writes only
// its own output slot, so results do not depend on the thread count.

inline unsigned& thread_count() {
  static unsigned n = 1;
  return n;
}
inline void set_threads(unsigned n) { thread_count() = std::max(1u, n); }

template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(thread_count(), n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

// ---------------------------------------------------------------------------

/// Uniform grid on [min, max] with both end points included.
class Grid1D {
 public:
  Grid1D() = default;
  Grid1D(double min, double max, std::size_t n) : min_(min), max_(max), n_(n) {
    if (!(max > min) || n < 2 || !std::isfinite(min) || !std::isfinite(max))
      fail(ErrorKind::InvalidArgument, "Grid1D needs max > min and n >= 2");
  }

  double min() const { return min_; }
  double max() const { return max_; }
  std::size_t size() const { return n_; }
  double spacing() const { return (max_ - min_) / static_cast<double>(n_ - 1); }
  double operator[](std::size_t i) const {
    return i + 1 == n_ ? max_ : min_ + static_cast<double>(i) * spacing();
  }
  std::vector<double> points() const {
    std::vector<double> v(n_);
    for (std::size_t i = 0; i < n_; ++i) v[i] = (*this)[i];
    return v;
  }
  bool operator==(const Grid1D&) const = default;

 private:
  double min_ = 0.0;
  double max_ = 1.0;
  std::size_t n_ = 2;
};

/// n uniform angles covering [0, pi): 0, pi/n, ..., pi - pi/n.
inline Grid1D optical_angles(std::size_t n) { return Grid1D(0.0, pi - pi / static_cast<double>(n), n); }
/// n uniform angles covering [0, 2 pi).
inline Grid1D full_circle(std::size_t n) { return Grid1D(0.0, two_pi - two_pi / static_cast<double>(n), n); }

/// Reference-frame label (mu, nu) of the observable X = mu q + nu p.
struct SymplecticFrame {
  double mu = 1.0;
  double nu = 0.0;

  SymplecticFrame() = default;
  SymplecticFrame(double m, double n) : mu(m), nu(n) {
    if (m == 0.0 && n == 0.0) fail(ErrorKind::DegenerateFrame, "(mu, nu) = (0, 0)");
  }
  static SymplecticFrame optical(double phi) { return {std::cos(phi), std::sin(phi)}; }
  double radius() const { return std::hypot(mu, nu); }
  double angle() const { return std::atan2(nu, mu); }
};

// ---------------------------------------------------------------------------
// Interpolation helpers on uniform grids.

/// Four-point Lagrange interpolation of uniformly sampled data; zero outside
/// the sampled interval.
template <class T, class Get>
T cubic_at(const Grid1D& g, Get&& get, double x) {
  const double h = g.spacing();
  const double s = (x - g.min()) / h;
  const auto n = static_cast<long>(g.size());
  if (s < -1e-12 || s > static_cast<double>(n - 1) + 1e-12) return T{};
  long i = static_cast<long>(std::floor(s));
  i = std::clamp(i, 1L, n - 3);
  if (n < 4) {
    const long k = std::clamp(static_cast<long>(std::floor(s)), 0L, n - 2);
    const double t = s - static_cast<double>(k);
    return get(k) * (1.0 - t) + get(k + 1) * t;
  }
  const double t = s - static_cast<double>(i);
  const double w0 = -t * (t - 1.0) * (t - 2.0) / 6.0;
  const double w1 = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
  const double w2 = -(t + 1.0) * t * (t - 2.0) / 2.0;
  const double w3 = (t + 1.0) * t * (t - 1.0) / 6.0;
  return get(i - 1) * w0 + get(i) * w1 + get(i + 1) * w2 + get(i + 2) * w3;
}

/// Bilinear interpolation of a matrix sampled on (gx, gy); zero outside.
inline double bilinear_at(const Grid1D& gx, const Grid1D& gy, const Eigen::MatrixXd& v, double x,
                          double y) {
  const double sx = (x - gx.min()) / gx.spacing();
  const double sy = (y - gy.min()) / gy.spacing();
  const auto nx = static_cast<double>(gx.size() - 1);
  const auto ny = static_cast<double>(gy.size() - 1);
  if (sx < 0.0 || sy < 0.0 || sx > nx || sy > ny) return 0.0;
  const auto i = static_cast<Eigen::Index>(std::min(std::floor(sx), nx - 1));
  const auto j = static_cast<Eigen::Index>(std::min(std::floor(sy), ny - 1));
  const double tx = sx - static_cast<double>(i);
  const double ty = sy - static_cast<double>(j);
  return (1 - tx) * (1 - ty) * v(i, j) + tx * (1 - ty) * v(i + 1, j) + (1 - tx) * ty * v(i, j + 1) +
         tx * ty * v(i + 1, j + 1);
}

/// Trapezoid rule over uniformly spaced samples, left-to-right accumulation.
template <class T, class Get>
T trapezoid(std::size_t n, double h, Get&& get) {
  T acc{};
  for (std::size_t i = 0; i < n; ++i) {
    const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
    acc += get(i) * w;
  }
  return acc * h;
}

inline double trapezoid(const Eigen::VectorXd& f, double h) {
  return trapezoid<double>(static_cast<std::size_t>(f.size()), h,
                           [&](std::size_t i) { return f(static_cast<Eigen::Index>(i)); });
}

inline double trapezoid2d(const Eigen::MatrixXd& f, double hx, double hy) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < f.rows(); ++i) {
    const double wi = (i == 0 || i + 1 == f.rows()) ? 0.5 : 1.0;
    for (Eigen::Index j = 0; j < f.cols(); ++j) {
      const double wj = (j == 0 || j + 1 == f.cols()) ? 0.5 : 1.0;
      acc += wi * wj * f(i, j);
    }
  }
  return acc * hx * hy;
}

// ---------------------------------------------------------------------------
// State containers. Fields are public and plain; validate() reports which
// invariants fail instead of throwing.

/// Tomogram sampled on the optical circle: values(i, k) = w(x[i], phi[k]).
struct OpticalSamples {
  Grid1D x;
  Grid1D phi;
  Eigen::MatrixXd values;
};

/// Tomogram as a closed-form evaluator (X, mu, nu) -> w.
struct AnalyticTomogram {
  std::function<double(double, double, double)> eval;
  /// Smallest feature width at mu^2 + nu^2 = 1; sets the default X step.
  double feature_width = 0.1;
  std::string label;
};

class Tomogram {
 public:
  Tomogram(AnalyticTomogram a) : data_(std::move(a)) {}
  Tomogram(OpticalSamples s) : data_(std::move(s)) {}

  bool is_analytic() const { return std::holds_alternative<AnalyticTomogram>(data_); }
  const AnalyticTomogram& analytic() const { return std::get<AnalyticTomogram>(data_); }
  const OpticalSamples& samples() const { return std::get<OpticalSamples>(data_); }
  double feature_width() const {
    if (is_analytic()) return analytic().feature_width;
    return samples().x.spacing() * 4.0;
  }
  std::string label() const { return is_analytic() ? analytic().label : std::string("samples"); }

  /// w(X, mu, nu). Optical samples are extended by homogeneity, interpolated
  /// cubically in X and linearly in phi, and use w(X, phi + pi) = w(-X, phi)
  /// when phi falls outside the sampled range.
  double operator()(double X, double mu, double nu) const {
    if (is_analytic()) return analytic().eval(X, mu, nu);
    const double r = std::hypot(mu, nu);
    if (r == 0.0) fail(ErrorKind::DegenerateFrame, "(mu, nu) = (0, 0)");
    return sampled_optical(X / r, std::atan2(nu, mu)) / r;
  }
  double operator()(double X, const SymplecticFrame& f) const { return (*this)(X, f.mu, f.nu); }

 private:
  double column_value(std::size_t k, double x) const {
    const auto& s = samples();
    const auto col = static_cast<Eigen::Index>(k);
    return cubic_at<double>(s.x, [&](long i) { return s.values(i, col); }, x);
  }

  double sampled_optical(double x, double phi) const {
    const auto& s = samples();
    const double h = s.phi.spacing();
    const std::size_t n = s.phi.size();
    const double coverage = h * static_cast<double>(n);
    // Bring phi into [phi0, phi0 + 2 pi).
    double t = std::fmod(phi - s.phi.min(), two_pi);
    if (t < 0) t += two_pi;
    double sign = 1.0;
    if (coverage < two_pi - 1e-9 && t >= coverage - 1e-12) {
      t -= pi;
      sign = -1.0;
      if (t < 0) t += two_pi;
    }
    const double u = t / h;
    auto k = static_cast<std::size_t>(std::floor(u));
    const double a = u - static_cast<double>(k);
    if (k >= n) k = n - 1;
    const double v0 = column_value(k, sign * x);
    if (a < 1e-12) return v0;
    double v1;
    if (k + 1 < n) {
      v1 = column_value(k + 1, sign * x);
    } else if (coverage >= two_pi - 1e-9) {
      v1 = column_value(0, sign * x);
    } else {
      v1 = column_value(0, -sign * x);  // phi0 + pi
    }
    return (1.0 - a) * v0 + a * v1;
  }

  std::variant<AnalyticTomogram, OpticalSamples> data_;
};

/// Samples any tomogram on an (X, phi) optical lattice.
inline OpticalSamples sample(const Tomogram& t, const Grid1D& x, const Grid1D& phi) {
  OpticalSamples out{x, phi, Eigen::MatrixXd(x.size(), phi.size())};
  parallel_for(phi.size(), [&](std::size_t k) {
    const double mu = std::cos(phi[k]);
    const double nu = std::sin(phi[k]);
    for (std::size_t i = 0; i < x.size(); ++i)
      out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = t(x[i], mu, nu);
  });
  return out;
}

struct WignerGrid {
  Grid1D q;
  Grid1D p;
  Eigen::MatrixXd values;  // (q index, p index); may be negative
};

struct DensityKernel {
  Grid1D x;
  Eigen::MatrixXcd values;  // rho(x_i, x_j)
};

struct WaveFunction {
  Grid1D x;
  Eigen::VectorXcd values;
};

struct PhaseDensity {
  Grid1D q;
  Grid1D p;
  Eigen::MatrixXd values;  // f(q, p) >= 0
};

inline DensityKernel density_of(const WaveFunction& psi) {
  return {psi.x, psi.values * psi.values.adjoint()};
}

/// Spin density matrix indexed by m, m' = j, j-1, ..., -j (row 0 is m = +j).
struct SpinState {
  double j = 0.5;
  Eigen::MatrixXcd rho;
};

inline std::size_t spin_dim(double j) { return static_cast<std::size_t>(std::lround(2.0 * j)) + 1; }
inline bool is_half_integer(double j) {
  return j >= 0.0 && std::abs(2.0 * j - std::round(2.0 * j)) < 1e-12;
}
/// m value for row/column index i.
inline double spin_m(double j, std::size_t i) { return j - static_cast<double>(i); }

enum class BetaRule { Uniform, GaussLegendre };

/// Spin tomogram w(m, alpha, beta); values[i] is the (alpha, beta) matrix for
/// m = spin_m(j, i). alpha covers [0, 2 pi) uniformly; beta nodes are either a
/// uniform grid on [0, pi] or Gauss-Legendre nodes in cos(beta).
struct SpinTomogram {
  double j = 0.5;
  Grid1D alpha;
  std::vector<double> beta;
  BetaRule beta_rule = BetaRule::Uniform;
  std::vector<Eigen::MatrixXd> values;
};

// ---------------------------------------------------------------------------
// validate()

struct Tolerances {
  double column_norm = 1e-3;
  double wigner_norm = 1e-2;
  double hermitian = 1e-10;
  double trace = 1e-3;
  double diag_floor = -1e-10;
  double psi_norm = 1e-3;
  double phase_norm = 1e-2;
  double spin_hermitian = 1e-12;
  double spin_trace = 1e-12;
  double spin_eig_floor = -1e-10;
  double spin_sum = 1e-12;
};

using Violations = std::vector<std::string>;

inline Violations validate(const Tomogram& t, const Tolerances& tol = {}) {
  Violations out;
  if (t.is_analytic()) {
    // Spot checks of positivity and homogeneity.
    const double xs[] = {-1.3, -0.2, 0.0, 0.7, 1.9};
    const double phis[] = {0.0, 0.4, 1.1, 2.3};
    const double lams[] = {0.5, 2.0, -1.0};
    bool neg = false, hom = false;
    for (double X : xs)
      for (double phi : phis) {
        const double mu = std::cos(phi), nu = std::sin(phi);
        const double w = t(X, mu, nu);
        if (!(w >= 0.0)) neg = true;
        for (double l : lams) {
          const double ws = t(l * X, l * mu, l * nu);
          if (std::abs(ws - w / std::abs(l)) > 1e-10 * (1.0 + std::abs(w))) hom = true;
        }
      }
    if (neg) out.emplace_back("values >= 0");
    if (hom) out.emplace_back("homogeneity w(lX, l mu, l nu) = |l|^-1 w");
    return out;
  }
  const auto& s = t.samples();
  if (s.values.rows() != static_cast<Eigen::Index>(s.x.size()) ||
      s.values.cols() != static_cast<Eigen::Index>(s.phi.size())) {
    out.emplace_back("values shape matches grids");
    return out;
  }
  if (s.values.minCoeff() < 0.0 || !s.values.allFinite()) out.emplace_back("values >= 0");
  for (Eigen::Index k = 0; k < s.values.cols(); ++k) {
    if (std::abs(trapezoid(s.values.col(k), s.x.spacing()) - 1.0) > tol.column_norm) {
      out.emplace_back("column normalization");
      break;
    }
  }
  return out;
}

inline Violations validate(const WignerGrid& w, const Tolerances& tol = {}) {
  Violations out;
  if (!w.values.allFinite()) out.emplace_back("finite values");
  const double norm = trapezoid2d(w.values, w.q.spacing(), w.p.spacing()) / two_pi;
  if (std::abs(norm - 1.0) > tol.wigner_norm) out.emplace_back("integral W dq dp / 2pi = 1");
  return out;
}

inline Violations validate(const DensityKernel& r, const Tolerances& tol = {}) {
  Violations out;
  const auto& v = r.values;
  if ((v - v.adjoint()).cwiseAbs().maxCoeff() > tol.hermitian) out.emplace_back("Hermitian");
  const Eigen::VectorXd diag = v.diagonal().real();
  if (std::abs(trapezoid(diag, r.x.spacing()) - 1.0) > tol.trace) out.emplace_back("trace = 1");
  if (diag.minCoeff() < tol.diag_floor || v.diagonal().imag().cwiseAbs().maxCoeff() > tol.hermitian)
    out.emplace_back("diagonal real and >= 0");
  return out;
}

inline Violations validate(const WaveFunction& psi, const Tolerances& tol = {}) {
  Violations out;
  const Eigen::VectorXd d = psi.values.cwiseAbs2();
  if (std::abs(trapezoid(d, psi.x.spacing()) - 1.0) > tol.psi_norm) out.emplace_back("norm = 1");
  return out;
}

inline Violations validate(const PhaseDensity& f, const Tolerances& tol = {}) {
  Violations out;
  if (f.values.minCoeff() < 0.0) out.emplace_back("values >= 0");
  if (std::abs(trapezoid2d(f.values, f.q.spacing(), f.p.spacing()) - 1.0) > tol.phase_norm)
    out.emplace_back("integral f dq dp = 1");
  return out;
}

inline Violations validate(const SpinState& s, const Tolerances& tol = {}) {
  Violations out;
  if (!is_half_integer(s.j) || s.rho.rows() != static_cast<Eigen::Index>(spin_dim(s.j)) ||
      s.rho.cols() != s.rho.rows()) {
    out.emplace_back("shape (2j+1)x(2j+1)");
    return out;
  }
  if ((s.rho - s.rho.adjoint()).cwiseAbs().maxCoeff() > tol.spin_hermitian)
    out.emplace_back("Hermitian");
  if (std::abs(s.rho.trace() - cplx(1.0)) > tol.spin_trace) out.emplace_back("trace = 1");
  const Eigen::MatrixXcd herm = 0.5 * (s.rho + s.rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < tol.spin_eig_floor) out.emplace_back("eigenvalues >= 0");
  return out;
}

inline Violations validate(const SpinTomogram& t, const Tolerances& tol = {}) {
  Violations out;
  const std::size_t d = spin_dim(t.j);
  if (t.values.size() != d) {
    out.emplace_back("one (alpha, beta) table per m");
    return out;
  }
  bool neg = false, sum = false;
  for (std::size_t a = 0; a < t.alpha.size(); ++a)
    for (std::size_t b = 0; b < t.beta.size(); ++b) {
      double acc = 0.0;
      for (std::size_t m = 0; m < d; ++m) {
        const double v = t.values[m](static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
        if (v < -1e-12) neg = true;
        acc += v;
      }
      if (std::abs(acc - 1.0) > tol.spin_sum) sum = true;
    }
  if (neg) out.emplace_back("values >= 0");
  if (sum) out.emplace_back("sum over m = 1");
  return out;
}

}  // namespace tomo
