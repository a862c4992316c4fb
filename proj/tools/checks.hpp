#pragma once
// Invariant suites run by `tomo check`.

#include "tomo/tomo.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace tomo::cli {

struct CheckResult {
  std::string name;
  double value = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  bool bound = false;  // value <= tolerance rather than |value - expected| <= tolerance
};

/// |value - expected| <= tolerance.
inline CheckResult near(std::string name, double value, double expected, double tol) {
  return {std::move(name), value, expected, tol, std::abs(value - expected) <= tol, false};
}

/// value <= bound, reported with expected = 0.
inline CheckResult below(std::string name, double value, double bound) {
  return {std::move(name), value, 0.0, bound, value <= bound, true};
}

inline double max_abs_vs(const OpticalSamples& s, const Tomogram& exact) {
  double e = 0.0;
  for (std::size_t k = 0; k < s.phi.size(); ++k)
    for (std::size_t i = 0; i < s.x.size(); ++i)
      e = std::max(e, std::abs(s.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) -
                               exact(s.x[i], std::cos(s.phi[k]), std::sin(s.phi[k]))));
  return e;
}

inline std::vector<CheckResult> cv_checks() {
  std::vector<CheckResult> out;
  const Grid1D y(-8.0, 8.0, 2048);
  {
    const Tomogram t = tomogram_from_wavefunction(fock_wavefunction(FockLabel(0), y), Grid1D(-1.0, 1.0, 3),
                                                  Grid1D(pi / 2, pi / 2 + 0.1, 2));
    out.push_back(near("ground_anchor", t.samples().values(1, 0), 1.0 / std::sqrt(pi), 1e-6));
  }
  {
    double e = 0.0;
    const Grid1D x(-6.0, 6.0, 241);
    const Grid1D phi = optical_angles(64);
    for (int n = 0; n <= 5; ++n) {
      const Tomogram t = tomogram_from_wavefunction(fock_wavefunction(FockLabel(n), y), x, phi);
      e = std::max(e, max_abs_vs(t.samples(), fock_tomogram(FockLabel(n))));
    }
    out.push_back(below("fock_closed_form_n0_5", e, 1e-6));
  }
  {
    std::vector<Tomogram> fock;
    for (int n = 0; n < 4; ++n) fock.push_back(fock_tomogram(FockLabel(n)));
    const Eigen::MatrixXd m = orthogonality_matrix(fock);
    out.push_back(below("orthogonality_fock_0_3", (m - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-3));
  }
  out.push_back(near("completeness_coherent_1", white_noise_tomogram_pairing(CoherentLabel({1.0, 0.0}), 10), 1.0, 1e-3));
  out.push_back(near("uncertainty_ground", uncertainty_product(fock_tomogram(FockLabel(0))), 0.25, 1e-6));
  out.push_back(near("uncertainty_fock_3", uncertainty_product(fock_tomogram(FockLabel(3))), 12.25, 1e-4));
  {
    const Tomogram g = fock_tomogram(FockLabel(0));
    out.push_back(near("entropy_ground", entropy(g, {1.0, 0.0}), 0.5 * std::log(pi * std::exp(1.0)), 1e-6));
    out.push_back(near("entropy_scaling_2", entropy(g, {2.0, 0.0}) - entropy(g, {1.0, 0.0}), std::log(2.0), 1e-6));
  }
  {
    const CoherentLabel a({1.0, 0.5});
    const Grid1D x(-8.0, 8.0, 256), q(-8.0, 8.0, 256);
    const Tomogram t(sample(coherent_tomogram(a), x, optical_angles(128)));
    const WignerGrid w = wigner_from_tomogram(t, q, q);
    const WignerGrid exact = coherent_wigner(a, q, q);
    out.push_back(below("radon_roundtrip_coherent", (w.values - exact.values).norm() / exact.values.norm(), 2e-2));
  }
  {
    const Grid1D x(-8.0, 8.0, 256), q(-4.0, 4.0, 161);
    const Tomogram t(sample(fock_tomogram(FockLabel(1)), x, optical_angles(128)));
    const double wmin = wigner_from_tomogram(t, q, q).values.minCoeff();
    out.push_back(below("fock1_wigner_negative", wmin, -1e-2));
    double caught = 0.0;
    try {
      phase_density_from_tomogram(t, q, q);
    } catch (const Error& e) {
      caught = e.kind() == ErrorKind::NegativityDetected ? 1.0 : 0.0;
    }
    out.push_back(near("fock1_classical_negativity_detected", caught, 1.0, 0.0));
  }
  return out;
}

inline std::vector<CheckResult> spin_checks(std::uint64_t seed) {
  std::vector<CheckResult> out;
  {
    const SpinTomogram t = spin_tomogram(spin_basis_state(0.5, 0.5), full_circle(8), Grid1D(0.0, pi, 17));
    double e3 = 0.0, e4 = 0.0;
    for (std::size_t a = 0; a < t.alpha.size(); ++a)
      for (std::size_t b = 0; b < t.beta.size(); ++b) {
        const double c = std::cos(0.5 * t.beta[b]), s = std::sin(0.5 * t.beta[b]);
        e3 = std::max(e3, std::abs(t.values[0](static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) - c * c));
        e4 = std::max(e4, std::abs(t.values[1](static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) - s * s));
      }
    out.push_back(below("d3_spin_half_cos2", e3, 1e-12));
    out.push_back(below("d4_spin_half_sin2", e4, 1e-12));
  }
  {
    std::mt19937_64 rng(seed);
    double e = 0.0;
    for (double j : {0.5, 1.0, 1.5, 2.0})
      for (int r = 0; r < 20; ++r) {
        const SpinState s = random_spin_state(j, rng);
        const auto na = static_cast<std::size_t>(std::lround(4.0 * j)) + 2;
        const auto nb = static_cast<std::size_t>(std::lround(2.0 * j)) + 2;
        const SpinState back = reconstruct_spin_state(spin_tomogram(s, full_circle(na), nb));
        e = std::max(e, (back.rho - s.rho).cwiseAbs().maxCoeff());
      }
    out.push_back(below("spin_roundtrip_j_le_2", e, 1e-10));
  }
  {
    double e1 = 0.0, e2 = 0.0;
    for (double j1 : {0.5, 1.0, 1.5, 2.0})
      for (double j2 : {0.5, 1.0, 1.5, 2.0}) {
        const double lo = std::abs(j1 - j2), hi = j1 + j2;
        for (double j = lo; j <= hi + 1e-9; j += 1.0)
          for (double jp = lo; jp <= hi + 1e-9; jp += 1.0)
            for (double m = -j; m <= j + 1e-9; m += 1.0)
              for (double mp = -jp; mp <= jp + 1e-9; mp += 1.0) {
                double s = 0.0;
                for (double m1 = -j1; m1 <= j1 + 1e-9; m1 += 1.0)
                  for (double m2 = -j2; m2 <= j2 + 1e-9; m2 += 1.0)
                    s += three_j({j1, j2, j, m1, m2, -m}) * three_j({j1, j2, jp, m1, m2, -mp});
                const double delta = (std::abs(j - jp) < 1e-9 && std::abs(m - mp) < 1e-9) ? 1.0 : 0.0;
                e1 = std::max(e1, std::abs((2.0 * j + 1.0) * s - delta));
              }
        for (double m1 = -j1; m1 <= j1 + 1e-9; m1 += 1.0)
          for (double m2 = -j2; m2 <= j2 + 1e-9; m2 += 1.0)
            for (double m1p = -j1; m1p <= j1 + 1e-9; m1p += 1.0)
              for (double m2p = -j2; m2p <= j2 + 1e-9; m2p += 1.0) {
                double s = 0.0;
                for (double j = lo; j <= hi + 1e-9; j += 1.0)
                  for (double m = -j; m <= j + 1e-9; m += 1.0)
                    s += (2.0 * j + 1.0) * three_j({j1, j2, j, m1, m2, -m}) * three_j({j1, j2, j, m1p, m2p, -m});
                const double delta = (m1 == m1p && m2 == m2p) ? 1.0 : 0.0;
                e2 = std::max(e2, std::abs(s - delta));
              }
      }
    out.push_back(below("three_j_orthogonality_first", e1, 1e-12));
    out.push_back(below("three_j_orthogonality_second", e2, 1e-12));
  }
  {
    std::mt19937_64 rng(seed + 1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double eu = 0.0, e8 = 0.0;
    for (double j : {0.5, 1.0, 1.5, 2.0, 2.5})
      for (int r = 0; r < 20; ++r) {
        const EulerAngles w{two_pi * u(rng), pi * u(rng), two_pi * u(rng)};
        const Eigen::MatrixXcd D = wigner_D_matrix(j, w);
        eu = std::max(eu, (D * D.adjoint() - Eigen::MatrixXcd::Identity(D.rows(), D.cols())).cwiseAbs().maxCoeff());
        for (std::size_t a = 0; a < spin_dim(j); ++a)
          for (std::size_t b = 0; b < spin_dim(j); ++b) {
            const double m1 = spin_m(j, a), m = spin_m(j, b);
            const double sign = std::lround(m1 - m) % 2 == 0 ? 1.0 : -1.0;
            e8 = std::max(e8, std::abs(std::conj(D(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b))) -
                                       sign * wigner_D(j, -m1, -m, w)));
          }
      }
    out.push_back(below("d_unitarity", eu, 1e-12));
    out.push_back(below("d_conjugation_symmetry", e8, 1e-12));
  }
  return out;
}

inline std::vector<CheckResult> evolution_checks() {
  std::vector<CheckResult> out;
  for (int n = 0; n <= 3; ++n)
    out.push_back(near("energy_n" + std::to_string(n), oscillator_energy_estimate(FockLabel(n)), n + 0.5, 1e-4));
  {
    const LinearInvariants li = linear_invariants(QuadraticHamiltonian::free_particle(), 1.3, 1e-2);
    out.push_back(below("lambda_free_motion",
                        (li.Lambda - TomographicPropagator::free_motion(1.3).Lambda).cwiseAbs().maxCoeff(), 1e-8));
    const LinearInvariants lo = linear_invariants(QuadraticHamiltonian::oscillator(), 1.3, 1e-2);
    out.push_back(below("lambda_oscillator",
                        (lo.Lambda - TomographicPropagator::oscillator(1.3).Lambda).cwiseAbs().maxCoeff(), 1e-8));
  }
  {
    double e = 0.0;
    for (auto make : {&TomographicPropagator::free_motion, &TomographicPropagator::oscillator}) {
      const TomographicPropagator c = compose_propagators(make(0.7, 0.0), make(1.2, 0.7));
      const TomographicPropagator d = make(1.9, 0.0);
      e = std::max({e, (c.Lambda - d.Lambda).cwiseAbs().maxCoeff(), (c.Delta - d.Delta).cwiseAbs().maxCoeff()});
    }
    out.push_back(below("chapman_kolmogorov", e, 1e-8));
  }
  {
    const Tomogram c = coherent_tomogram(CoherentLabel({1.0, 0.5}));
    const Tomogram back = propagate_tomogram(c, TomographicPropagator::oscillator(two_pi));
    double e = 0.0;
    for (const auto& p : standard_frame_points()) e = std::max(e, std::abs(back(p.X, p.mu, p.nu) - c(p.X, p.mu, p.nu)));
    out.push_back(below("oscillator_period", e, 1e-10));
  }
  {
    double e = 0.0;
    for (int n = 0; n <= 5; ++n) e = std::max(e, stationarity_residual(fock_tomogram(FockLabel(n))));
    out.push_back(below("stationarity_fock_0_5", e, 1e-6));
  }
  out.push_back(below("tie_residual_coherent",
                      oscillator_evolution_residual(oscillator_family(coherent_tomogram(CoherentLabel({1.0, 0.0}))), 0.6),
                      1e-5));
  for (const auto& [label, t] : {std::pair{"pi_4", pi / 4}, std::pair{"pi_2", pi / 2}, std::pair{"pi", pi}})
    out.push_back(below(std::string("classical_quantum_t_") + label,
                        classical_quantum_agreement(CoherentLabel({1.0, 0.0}), t), 1e-3));
  return out;
}

}  // namespace tomo::cli
