#include "tomo/analytic_states.hpp"
#include "tomo/core.hpp"

#include <gtest/gtest.h>

#include <atomic>

using namespace tomo;

TEST(Grid1D, EndpointsAndSpacing) {
  const Grid1D g(-2.0, 2.0, 5);
  EXPECT_EQ(g.size(), 5u);
  EXPECT_DOUBLE_EQ(g.spacing(), 1.0);
  EXPECT_DOUBLE_EQ(g[0], -2.0);
  EXPECT_DOUBLE_EQ(g[4], 2.0);
  EXPECT_DOUBLE_EQ(g[2], 0.0);
}

TEST(Grid1D, RejectsBadBounds) {
  EXPECT_THROW(Grid1D(1.0, 1.0, 4), Error);
  EXPECT_THROW(Grid1D(0.0, 1.0, 1), Error);
}

TEST(Angles, OpticalAndFullCircleCoverage) {
  const Grid1D a = optical_angles(64);
  EXPECT_NEAR(a.spacing() * 64, pi, 1e-14);
  EXPECT_DOUBLE_EQ(a[0], 0.0);
  const Grid1D f = full_circle(10);
  EXPECT_NEAR(f.max(), two_pi * 0.9, 1e-14);
}

TEST(SymplecticFrame, ZeroFrameIsDegenerate) {
  try {
    SymplecticFrame f(0.0, 0.0);
    FAIL() << "no exception";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateFrame);
    EXPECT_STREQ(e.name(), "DegenerateFrame");
  }
  const SymplecticFrame f = SymplecticFrame::optical(pi / 3);
  EXPECT_NEAR(f.radius(), 1.0, 1e-15);
  EXPECT_NEAR(f.angle(), pi / 3, 1e-15);
}

TEST(Interpolation, CubicIsExactForCubics) {
  const Grid1D g(-1.0, 3.0, 21);
  auto poly = [](double x) { return 0.5 * x * x * x - x * x + 2.0 * x - 1.0; };
  for (double x : {-0.93, 0.0, 0.517, 1.99, 2.7}) {
    const double v = cubic_at<double>(g, [&](long i) { return poly(g[static_cast<std::size_t>(i)]); }, x);
    EXPECT_NEAR(v, poly(x), 1e-12) << x;
  }
  EXPECT_EQ(cubic_at<double>(g, [&](long) { return 1.0; }, 5.0), 0.0);
}

TEST(Interpolation, BilinearIsExactForBilinear) {
  const Grid1D gx(0.0, 1.0, 6), gy(-1.0, 1.0, 9);
  Eigen::MatrixXd v(6, 9);
  for (int i = 0; i < 6; ++i)
    for (int k = 0; k < 9; ++k) v(i, k) = 1.0 + 2.0 * gx[i] - gy[k] + 3.0 * gx[i] * gy[k];
  EXPECT_NEAR(bilinear_at(gx, gy, v, 0.33, 0.41), 1.0 + 0.66 - 0.41 + 3.0 * 0.33 * 0.41, 1e-13);
  EXPECT_EQ(bilinear_at(gx, gy, v, 1.5, 0.0), 0.0);
}

TEST(Quadrature, TrapezoidIntegratesGaussian) {
  const Grid1D g(-10.0, 10.0, 2001);
  const double v = trapezoid<double>(g.size(), g.spacing(), [&](std::size_t i) { return std::exp(-g[i] * g[i]); });
  EXPECT_NEAR(v, std::sqrt(pi), 1e-12);
}

TEST(Threads, ParallelForWritesEverySlotOnce) {
  set_threads(4);
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
  set_threads(1);
  for (int h : hits) EXPECT_EQ(h, 1);
}

TEST(Tomogram, SampledUsesHomogeneityAndHalfTurnSymmetry) {
  const Grid1D x(-6.0, 6.0, 481);
  const Grid1D phi = optical_angles(64);
  const Tomogram exact = coherent_tomogram(CoherentLabel({0.8, -0.3}));
  const Tomogram smp(sample(exact, x, phi));
  // Column node, scaled frame.
  const double p = phi[5];
  EXPECT_NEAR(smp(0.7 * 2.0, 2.0 * std::cos(p), 2.0 * std::sin(p)), exact(1.4, 2.0 * std::cos(p), 2.0 * std::sin(p)),
              1e-6);
  // Angle beyond pi maps to w(-X, phi - pi).
  const double q = p + pi;
  EXPECT_NEAR(smp(0.3, std::cos(q), std::sin(q)), exact(0.3, std::cos(q), std::sin(q)), 1e-6);
}

TEST(Validate, AcceptsLibraryStates) {
  EXPECT_TRUE(validate(fock_tomogram(FockLabel(3))).empty());
  const Grid1D x(-8.0, 8.0, 257);
  EXPECT_TRUE(validate(Tomogram(sample(fock_tomogram(FockLabel(1)), x, optical_angles(32)))).empty());
  EXPECT_TRUE(validate(fock_wavefunction(FockLabel(2), x)).empty());
  EXPECT_TRUE(validate(density_of(fock_wavefunction(FockLabel(2), x))).empty());
  const Grid1D q(-6.0, 6.0, 241);
  EXPECT_TRUE(validate(fock_wigner(FockLabel(2), q, q)).empty());
}

TEST(Validate, FlagsBrokenStates) {
  const Grid1D x(-8.0, 8.0, 257);
  OpticalSamples s = sample(fock_tomogram(FockLabel(0)), x, optical_angles(16));
  s.values(128, 3) = -0.5;
  EXPECT_FALSE(validate(Tomogram(s)).empty());

  AnalyticTomogram bad;
  bad.eval = [](double X, double, double) { return std::exp(-X * X); };  // ignores the frame scale
  EXPECT_FALSE(validate(Tomogram(bad)).empty());

  DensityKernel r = density_of(fock_wavefunction(FockLabel(0), x));
  r.values(10, 20) += cplx(0.0, 0.1);
  EXPECT_FALSE(validate(r).empty());

  SpinState sp{0.5, Eigen::MatrixXcd::Zero(2, 2)};
  sp.rho(0, 0) = 1.5;
  sp.rho(1, 1) = -0.5;
  EXPECT_FALSE(validate(sp).empty());
}
