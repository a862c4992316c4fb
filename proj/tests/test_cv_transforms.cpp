#include "tomo/analytic_states.hpp"
#include "tomo/cv_transforms.hpp"

#include <gtest/gtest.h>

using namespace tomo;

namespace {

const Grid1D kY(-8.0, 8.0, 641);
const Grid1D kX(-8.0, 8.0, 256);

double max_diff(const OpticalSamples& s, const Tomogram& oracle) {
  double err = 0.0;
  for (std::size_t k = 0; k < s.phi.size(); ++k)
    for (std::size_t i = 0; i < s.x.size(); ++i)
      err = std::max(err, std::abs(s.values(i, k) - oracle(s.x[i], std::cos(s.phi[k]), std::sin(s.phi[k]))));
  return err;
}

double rel_l2(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) { return (a - b).norm() / b.norm(); }

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no exception";
  return ErrorKind::InvalidArgument;
}

// Fock-1 Wigner by brute-force quadrature of W = integral psi(q+u/2) psi(q-u/2) e^{-ipu} du.
double fock1_wigner_quadrature(double q, double p) {
  const Grid1D u(-16.0, 16.0, 3201);
  return trapezoid<double>(u.size(), u.spacing(), [&](std::size_t i) {
    return hermite_function(1, q + 0.5 * u[i]) * hermite_function(1, q - 0.5 * u[i]) * std::cos(p * u[i]);
  });
}

}  // namespace

TEST(FromWavefunction, GroundStateValues) {
  const Tomogram t = tomogram_from_wavefunction(fock_wavefunction(FockLabel(0), kY), Grid1D(-4.0, 4.0, 81),
                                                Grid1D(0.0, pi / 2, 3));
  const auto& v = t.samples().values;
  EXPECT_NEAR(v(40, 2), 1.0 / std::sqrt(pi), 1e-6);
  for (int i = 0; i < 81; ++i) {
    const double X = -4.0 + 0.1 * i;
    EXPECT_NEAR(v(i, 0), std::exp(-X * X) / std::sqrt(pi), 1e-12);
  }
}

TEST(FromWavefunction, Fock1VanishesAtOrigin) {
  const Tomogram t =
      tomogram_from_wavefunction(fock_wavefunction(FockLabel(1), kY), Grid1D(-4.0, 4.0, 81), optical_angles(16));
  for (Eigen::Index k = 0; k < 16; ++k) EXPECT_NEAR(t.samples().values(40, k), 0.0, 1e-10);
}

TEST(FromWavefunction, CoherentMatchesClosedForm) {
  const CoherentLabel a({1.0, 0.0});
  const Tomogram t =
      tomogram_from_wavefunction(coherent_wavefunction(a, kY), Grid1D(-6.0, 6.0, 121), Grid1D(0.0, pi - 0.3, 24));
  EXPECT_LT(max_diff(t.samples(), coherent_tomogram(a)), 1e-6);
  for (Eigen::Index k = 0; k < 24; ++k)
    EXPECT_NEAR(trapezoid(t.samples().values.col(k), 0.1), 1.0, 1e-3);
  EXPECT_TRUE(validate(t).empty());
}

TEST(FromWavefunction, Guards) {
  const WaveFunction psi = fock_wavefunction(FockLabel(0), kY);
  EXPECT_EQ(kind_of([&] { tomogram_from_wavefunction(psi, kX, Grid1D(1e-8, 0.5, 2)); }), ErrorKind::DegenerateFrame);
  const WaveFunction coarse = fock_wavefunction(FockLabel(0), Grid1D(-8.0, 8.0, 40));
  EXPECT_EQ(kind_of([&] { tomogram_from_wavefunction(coarse, kX, Grid1D(0.05, 0.5, 2)); }), ErrorKind::GridTooCoarse);
}

TEST(FromDensity, RankOneMatchesWavefunctionRoute) {
  const Grid1D y(-8.0, 8.0, 641);
  const Grid1D x(-6.0, 6.0, 121);
  const Grid1D phi(0.2, pi - 0.2, 12);
  for (const WaveFunction& psi : {fock_wavefunction(FockLabel(0), y), fock_wavefunction(FockLabel(2), y),
                                  coherent_wavefunction(CoherentLabel({0.6, -0.4}), y)}) {
    const Tomogram a = tomogram_from_wavefunction(psi, x, phi);
    const Tomogram b = tomogram_from_density(density_of(psi), x, phi);
    EXPECT_LT((a.samples().values - b.samples().values).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(FromDensity, LinearityAndThermalMixture) {
  const Grid1D y(-8.0, 8.0, 641);
  const Grid1D x(-6.0, 6.0, 121);
  const Grid1D phi(0.2, pi - 0.2, 12);
  const DensityKernel r0 = density_of(fock_wavefunction(FockLabel(0), y));
  const DensityKernel r1 = density_of(fock_wavefunction(FockLabel(1), y));
  const Eigen::MatrixXd t0 = tomogram_from_density(r0, x, phi).samples().values;
  const Eigen::MatrixXd t1 = tomogram_from_density(r1, x, phi).samples().values;
  for (double a : {0.0, 0.25, 0.5, 1.0}) {
    const DensityKernel mix{y, a * r0.values + (1.0 - a) * r1.values};
    const Eigen::MatrixXd tm = tomogram_from_density(mix, x, phi).samples().values;
    EXPECT_LT((tm - (a * t0 + (1.0 - a) * t1)).cwiseAbs().maxCoeff(), 1e-10) << a;
  }
  const DensityKernel half{y, 0.5 * r0.values + 0.5 * r1.values};
  const Tomogram th = tomogram_from_density(half, x, phi);
  const Tomogram w0 = fock_tomogram(FockLabel(0)), w1 = fock_tomogram(FockLabel(1));
  double err = 0.0;
  for (std::size_t k = 0; k < phi.size(); ++k)
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double mu = std::cos(phi[k]), nu = std::sin(phi[k]);
      err = std::max(err, std::abs(th.samples().values(i, k) - 0.5 * (w0(x[i], mu, nu) + w1(x[i], mu, nu))));
    }
  EXPECT_LT(err, 1e-6);
}

TEST(FromWigner, GroundIsPhaseIndependentGaussian) {
  const Grid1D q(-8.0, 8.0, 512);
  const Grid1D x(-5.0, 5.0, 101);
  const Tomogram t = tomogram_from_wigner(fock_wigner(FockLabel(0), q, q), x, optical_angles(16));
  EXPECT_LT(max_diff(t.samples(), fock_tomogram(FockLabel(0))), 2e-4);
}

TEST(FromWigner, RotationalSymmetryAcrossColumns) {
  // Bilinear line integrals are exact at phi = 0 and carry O(h^2) error off-axis,
  // so the column spread is bounded by the interpolation guard, not rounding.
  const Grid1D q(-8.0, 8.0, 512);
  const Grid1D x(-5.0, 5.0, 101);
  const Eigen::MatrixXd v = tomogram_from_wigner(fock_wigner(FockLabel(0), q, q), x, optical_angles(16)).samples().values;
  double spread = 0.0;
  for (Eigen::Index k = 1; k < v.cols(); ++k) spread = std::max(spread, (v.col(k) - v.col(0)).cwiseAbs().maxCoeff());
  EXPECT_LT(spread, 2e-4);
}

TEST(FromWigner, CoherentOn512Grid) {
  const CoherentLabel a({1.0, 0.5});
  const Grid1D q(-8.0, 8.0, 512);
  const Grid1D x(-6.0, 6.0, 121);
  const Tomogram t = tomogram_from_wigner(coherent_wigner(a, q, q), x, optical_angles(32));
  EXPECT_LT(max_diff(t.samples(), coherent_tomogram(a)), 2e-4);
}

TEST(FromWigner, CoarseGridRejected) {
  const Grid1D q(-8.0, 8.0, 64);
  EXPECT_EQ(kind_of([&] { tomogram_from_wigner(fock_wigner(FockLabel(0), q, q), kX, optical_angles(16)); }),
            ErrorKind::GridTooCoarse);
}

TEST(WignerFromTomogram, GroundRoundTrip) {
  const Grid1D q(-6.0, 6.0, 121);
  const Tomogram t(sample(fock_tomogram(FockLabel(0)), kX, optical_angles(128)));
  const WignerGrid w = wigner_from_tomogram(t, q, q);
  EXPECT_LT(rel_l2(w.values, fock_wigner(FockLabel(0), q, q).values), 2e-2);
  EXPECT_TRUE(validate(w).empty());
}

TEST(WignerFromTomogram, FockRoundTripsViaProjection) {
  const Grid1D g(-6.0, 6.0, 961);
  const Grid1D q(-6.0, 6.0, 121);
  for (int n = 0; n <= 3; ++n) {
    const WignerGrid w0 = fock_wigner(FockLabel(n), g, g);  // fine enough for the interpolation guard
    const Tomogram t = tomogram_from_wigner(w0, kX, optical_angles(128));
    const WignerGrid w1 = wigner_from_tomogram(t, q, q);
    EXPECT_LT(rel_l2(w1.values, fock_wigner(FockLabel(n), q, q).values), 2e-2) << n;
  }
}

TEST(WignerFromTomogram, Fock1HasNegativeDip) {
  const Grid1D q(-4.0, 4.0, 81);
  const Tomogram t(sample(fock_tomogram(FockLabel(1)), kX, optical_angles(64)));
  const WignerGrid w = wigner_from_tomogram(t, q, q);
  EXPECT_LT(w.values(40, 40), 0.0);
  EXPECT_NEAR(w.values(40, 40), fock1_wigner_quadrature(0.0, 0.0), 2e-2);
}

TEST(WignerFromTomogram, Guards) {
  const Grid1D q(-4.0, 4.0, 41);
  const Tomogram few(sample(fock_tomogram(FockLabel(0)), kX, optical_angles(8)));
  EXPECT_EQ(kind_of([&] { wigner_from_tomogram(few, q, q); }), ErrorKind::InsufficientAngles);
  // A narrow peak at fixed X for every angle is not the projection of any phase-space function.
  AnalyticTomogram bad;
  bad.eval = [](double X, double mu, double nu) {
    const double r = std::hypot(mu, nu), d = (X / r - 2.0) / 0.05;
    return std::exp(-0.5 * d * d) / (0.05 * r * std::sqrt(two_pi));
  };
  const Tomogram spike(sample(Tomogram(bad), kX, optical_angles(64)));
  EXPECT_EQ(kind_of([&] { wigner_from_tomogram(spike, q, q); }), ErrorKind::RingingDetected);
  EXPECT_EQ(kind_of([&] { wigner_from_tomogram(fock_tomogram(FockLabel(0)), q, q); }), ErrorKind::InvalidArgument);
}

TEST(WignerFromDensity, GroundAndFock1) {
  const Grid1D y(-8.0, 8.0, 321);
  const Grid1D q(-4.0, 4.0, 41);
  const WignerGrid g = wigner_from_density(density_of(fock_wavefunction(FockLabel(0), y)), q, q);
  EXPECT_LT((g.values - fock_wigner(FockLabel(0), q, q).values).cwiseAbs().maxCoeff(), 1e-6);
  const WignerGrid f = wigner_from_density(density_of(fock_wavefunction(FockLabel(1), y)), q, q);
  EXPECT_NEAR(f.values(20, 20), fock1_wigner_quadrature(0.0, 0.0), 1e-6);
  EXPECT_NEAR(f.values(27, 13), fock1_wigner_quadrature(q[27], q[13]), 1e-6);
  EXPECT_LT(f.values(20, 20), 0.0);
}

TEST(WignerFromDensity, ComplexResidueOnNonHermitianInput) {
  const Grid1D y(-8.0, 8.0, 161);
  DensityKernel r = density_of(fock_wavefunction(FockLabel(0), y));
  for (Eigen::Index i = 0; i < r.values.rows(); ++i)
    for (Eigen::Index k = 0; k < r.values.cols(); ++k)
      if (i > k) r.values(i, k) *= cplx(0.0, 1.0);
  EXPECT_EQ(kind_of([&] { wigner_from_density(r, Grid1D(-2, 2, 5), Grid1D(-2, 2, 5)); }), ErrorKind::ComplexResidue);
}

TEST(KernelDistinction, SameFock1State) {
  const Grid1D y(-8.0, 8.0, 641);
  const DensityKernel r = density_of(fock_wavefunction(FockLabel(1), y));
  const Grid1D q(-3.0, 3.0, 31);
  EXPECT_LT(wigner_from_density(r, q, q).values.minCoeff(), 0.0);
  EXPECT_GE(tomogram_from_density(r, Grid1D(-6.0, 6.0, 61), Grid1D(0.0, pi - 0.3, 12)).samples().values.minCoeff(),
            -1e-12);
}

TEST(DensityFromTomogram, GroundKernel) {
  const Tomogram t(sample(fock_tomogram(FockLabel(0)), Grid1D(-8.0, 8.0, 161), optical_angles(64)));
  const DensityKernel r = density_from_tomogram(t);
  double err = 0.0;
  for (std::size_t a = 0; a < r.x.size(); ++a)
    for (std::size_t b = 0; b < r.x.size(); ++b)
      err = std::max(err, std::abs(r.values(a, b) - std::exp(-0.5 * (r.x[a] * r.x[a] + r.x[b] * r.x[b])) / std::sqrt(pi)));
  EXPECT_LT(err, 1e-3);
  EXPECT_TRUE(validate(r).empty());
}

TEST(DensityFromTomogram, Fock1DiagonalAndRoundTrip) {
  const Grid1D x(-8.0, 8.0, 161);
  const Tomogram t(sample(fock_tomogram(FockLabel(1)), x, optical_angles(64)));
  const DensityKernel r = density_from_tomogram(t);
  const Tomogram w1 = fock_tomogram(FockLabel(1));
  for (std::size_t a = 0; a < x.size(); a += 10) EXPECT_NEAR(r.values(a, a).real(), w1(x[a], 1.0, 0.0), 1e-3);

  const Grid1D xo(-4.0, 4.0, 41);
  const Grid1D phi(0.5, pi - 0.5, 8);
  const Eigen::MatrixXd back = tomogram_from_density(r, xo, phi).samples().values;
  const Eigen::MatrixXd ref = sample(w1, xo, phi).values;
  EXPECT_LT(rel_l2(back, ref), 2e-2);
}

TEST(DensityFromTomogram, ClassicalPointIsInadmissible) {
  const Tomogram t(sample(classical_point_tomogram(1.0, 0.5, 0.05), Grid1D(-8.0, 8.0, 641), optical_angles(64)));
  TransformOptions opt;
  try {
    const DensityKernel r = density_from_tomogram(t, opt);
    const Eigen::VectorXd d = r.values.diagonal().real();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(r.values, Eigen::EigenvaluesOnly);
    EXPECT_LT(es.eigenvalues().minCoeff() * r.x.spacing(), -1e-3);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonHermitianResult);
  }
  EXPECT_EQ(kind_of([&] {
              density_from_tomogram(Tomogram(sample(fock_tomogram(FockLabel(0)), kX, optical_angles(8))));
            }),
            ErrorKind::InsufficientAngles);
}

TEST(Classical, GaussianDensityProjects) {
  const Grid1D g(-4.0, 4.0, 601);
  const PhaseDensity f = gaussian_phase_density(1.0, 0.0, 0.5, 0.5, g, g);
  const Grid1D x(-4.0, 4.0, 81);
  const Grid1D phi = optical_angles(16);
  const OpticalSamples s = classical_tomogram(f, x, phi).samples();
  double err = 0.0;
  for (std::size_t k = 0; k < phi.size(); ++k)
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double m = std::cos(phi[k]);
      err = std::max(err, std::abs(s.values(i, k) - std::exp(-2.0 * (x[i] - m) * (x[i] - m)) / std::sqrt(pi / 2.0)));
    }
  EXPECT_LT(err, 1e-3);
}

TEST(Classical, NarrowDensityPeaksOnTheLine) {
  const Grid1D g(-4.0, 4.0, 801);
  const PhaseDensity f = gaussian_phase_density(1.0, 2.0, 0.15, 0.15, g, g);
  const Grid1D x(-3.0, 3.0, 601);
  const Grid1D phi = optical_angles(8);
  TransformOptions opt;
  opt.interpolation_error = 1e-2;
  const OpticalSamples s = classical_tomogram(f, x, phi, opt).samples();
  for (std::size_t k = 0; k < phi.size(); ++k) {
    Eigen::Index at = 0;
    s.values.col(static_cast<Eigen::Index>(k)).maxCoeff(&at);
    EXPECT_NEAR(x[static_cast<std::size_t>(at)], std::cos(phi[k]) + 2.0 * std::sin(phi[k]), 0.011) << k;
  }
}

TEST(Classical, SymmetricDensityGivesEqualColumns) {
  const Grid1D g(-6.0, 6.0, 401);
  const Eigen::MatrixXd v =
      classical_tomogram(gaussian_phase_density(0.0, 0.0, 0.8, 0.8, g, g), Grid1D(-4, 4, 81), optical_angles(16))
          .samples()
          .values;
  for (Eigen::Index k = 1; k < v.cols(); ++k) EXPECT_LT((v.col(k) - v.col(0)).cwiseAbs().maxCoeff(), 1e-4);
}

TEST(PhaseDensity, RoundTripAndAdmissibility) {
  const Grid1D g(-6.0, 6.0, 401);
  const PhaseDensity f = gaussian_phase_density(0.5, -0.5, 0.7, 0.7, g, g);
  const Tomogram t = classical_tomogram(f, kX, optical_angles(128));
  const Grid1D q(-4.0, 4.0, 81);
  const PhaseDensity back = phase_density_from_tomogram(t, q, q);
  EXPECT_LT(rel_l2(back.values, gaussian_phase_density(0.5, -0.5, 0.7, 0.7, q, q).values), 2e-2);

  const Tomogram ground(sample(fock_tomogram(FockLabel(0)), kX, optical_angles(64)));
  EXPECT_NO_THROW(phase_density_from_tomogram(ground, q, q));
  const Tomogram fock1(sample(fock_tomogram(FockLabel(1)), kX, optical_angles(64)));
  EXPECT_EQ(kind_of([&] { phase_density_from_tomogram(fock1, q, q); }), ErrorKind::NegativityDetected);
}
