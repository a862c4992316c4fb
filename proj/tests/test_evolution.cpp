#include "tomo/analytic_states.hpp"
#include "tomo/evolution.hpp"
#include "tomo/statistics.hpp"

#include <gtest/gtest.h>

using namespace tomo;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no exception";
  return ErrorKind::InvalidArgument;
}

Mat2 mat(double a, double b, double c, double d) {
  Mat2 m;
  m << a, b, c, d;
  return m;
}

Mat2 rotation(double t) { return mat(std::cos(t), std::sin(t), -std::sin(t), std::cos(t)); }

double max_frame_diff(const Tomogram& a, const Tomogram& b) {
  double err = 0.0;
  for (const auto& s : standard_frame_points()) err = std::max(err, std::abs(a(s.X, s.mu, s.nu) - b(s.X, s.mu, s.nu)));
  return err;
}

}  // namespace

TEST(LinearInvariants, FreeMotionClosedForm) {
  for (double t : {0.0, 0.5, 3.0, 10.0}) {
    const LinearInvariants inv = linear_invariants(QuadraticHamiltonian::free_particle(), t);
    EXPECT_LT((inv.Lambda - mat(1.0, 0.0, -t, 1.0)).cwiseAbs().maxCoeff(), 1e-12) << t;
    EXPECT_LT(inv.Delta.norm(), 1e-15);
    EXPECT_NEAR(inv.Lambda.determinant(), 1.0, 1e-8);
  }
}

TEST(LinearInvariants, OscillatorIsRotation) {
  for (double t : {0.3, pi / 2, 2.0 * pi, 10.0}) {
    const LinearInvariants inv = linear_invariants(QuadraticHamiltonian::oscillator(), t);
    EXPECT_LT((inv.Lambda - rotation(t)).cwiseAbs().maxCoeff(), 1e-10) << t;
    EXPECT_NEAR(inv.Lambda.determinant(), 1.0, 1e-8);
  }
  const LinearInvariants coarse = linear_invariants(QuadraticHamiltonian::oscillator(), 10.0, 1e-2);
  EXPECT_NEAR(coarse.Lambda.determinant(), 1.0, 1e-8);
}

TEST(LinearInvariants, IdentityAtTimeZero) {
  const auto h = QuadraticHamiltonian::constant(mat(2.0, 0.3, 0.3, 0.5), Vec2(1.0, -2.0));
  const LinearInvariants inv = linear_invariants(h, 0.0);
  EXPECT_EQ(inv.Lambda, Mat2::Identity());
  EXPECT_EQ(inv.Delta, Vec2::Zero());
}

TEST(LinearInvariants, ConstantForceShift) {
  // q(t) = f + (q0 - f) cos t + p0 sin t inverted for (p0, q0).
  const double f = 0.8;
  for (double t : {0.4, 1.9, 5.0}) {
    const LinearInvariants inv = linear_invariants(QuadraticHamiltonian::forced_oscillator([f](double) { return f; }), t);
    EXPECT_LT((inv.Lambda - rotation(t)).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_NEAR(inv.Delta(0), -f * std::sin(t), 1e-10);
    EXPECT_NEAR(inv.Delta(1), f * (1.0 - std::cos(t)), 1e-10);
  }
}

TEST(LinearInvariants, SymplecticUpToTen) {
  const auto h = QuadraticHamiltonian{[](double t) { return mat(1.0 + 0.5 * std::sin(t), 0.2, 0.2, 1.0); },
                                      [](double t) { return Vec2(0.1 * t, 0.0); }};
  for (double t : {1.0, 5.0, 10.0}) EXPECT_NEAR(linear_invariants(h, t).Lambda.determinant(), 1.0, 1e-8);
}

TEST(LinearInvariants, Errors) {
  EXPECT_EQ(kind_of([] { linear_invariants(QuadraticHamiltonian::oscillator(), 1.0, 0.02); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([] { linear_invariants(QuadraticHamiltonian::constant(mat(1.0, 0.5, 0.0, 1.0)), 1.0); }),
            ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([] { linear_invariants(QuadraticHamiltonian::constant(1e4 * Mat2::Identity()), 1.0, 1e-2); }),
            ErrorKind::SymplecticityLost);
}

TEST(Propagate, GroundStateIsStationary) {
  const Tomogram g = fock_tomogram(FockLabel(0));
  for (double t : {0.3, 1.7, 4.0}) EXPECT_LT(max_frame_diff(propagate_tomogram(g, TomographicPropagator::oscillator(t)), g), 1e-14);
}

TEST(Propagate, FullPeriodRestoresFockStates) {
  for (int n : {1, 3}) {
    const Tomogram w = fock_tomogram(FockLabel(n));
    EXPECT_LT(max_frame_diff(propagate_tomogram(w, TomographicPropagator::oscillator(two_pi)), w), 1e-12);
  }
  const Tomogram c = coherent_tomogram(CoherentLabel({1.0, 0.4}));
  EXPECT_LT(max_frame_diff(propagate_tomogram(c, TomographicPropagator::oscillator(two_pi)), c), 1e-12);
}

TEST(Propagate, FreeMotionPointState) {
  const double x0 = 0.5, p0 = 1.2, t = 1.5;
  const Tomogram w = propagate_tomogram(classical_point_tomogram(x0, p0, 0.05), TomographicPropagator::free_motion(t));
  for (const auto& [mu, nu] : {std::pair{1.0, 0.0}, {0.6, 0.8}, {-0.3, 1.1}}) {
    EXPECT_NEAR(moment(w, {mu, nu}, 1), mu * (x0 + t * p0) + nu * p0, 1e-8);
  }
  // Component order of N Lambda^{-1} = (nu + mu t, mu).
  double Xp, mup, nup;
  TomographicPropagator::free_motion(t).pull_back(0.7, 0.6, 0.8, Xp, mup, nup);
  EXPECT_NEAR(mup, 0.6, 1e-15);
  EXPECT_NEAR(nup, 0.8 + 0.6 * t, 1e-15);
  EXPECT_NEAR(Xp, 0.7, 1e-15);
}

TEST(Propagate, CoherentCentreRotatesClassically) {
  // The mean follows q(t) = q0 cos t + p0 sin t.
  const cplx a(1.0, 0.5);
  const double q0 = std::sqrt(2.0) * a.real(), p0 = std::sqrt(2.0) * a.imag();
  for (double t : {0.4, 2.0}) {
    const Tomogram w = propagate_tomogram(coherent_tomogram(CoherentLabel(a)), TomographicPropagator::oscillator(t));
    EXPECT_NEAR(moment(w, {1.0, 0.0}, 1), q0 * std::cos(t) + p0 * std::sin(t), 1e-8);
    EXPECT_NEAR(moment(w, {0.0, 1.0}, 1), -q0 * std::sin(t) + p0 * std::cos(t), 1e-8);
  }
}

TEST(Propagate, NormalizationAndFreeVarianceGrowth) {
  const Tomogram c = coherent_tomogram(CoherentLabel({0.3, -0.2}));
  for (double t : {0.0, 0.8, 2.5}) {
    const Tomogram w = propagate_tomogram(c, TomographicPropagator::free_motion(t));
    EXPECT_NEAR(moment(w, SymplecticFrame::optical(0.9), 0), 1.0, 1e-3);
    EXPECT_NEAR(variance(w, {1.0, 0.0}), 0.5 + t * t * 0.5, 1e-4) << t;
  }
}

TEST(Propagate, QuadraticRouteMatchesClosedForms) {
  const LinearInvariants inv = linear_invariants(QuadraticHamiltonian::oscillator(), 1.1);
  const Tomogram c = coherent_tomogram(CoherentLabel({0.9, 0.1}));
  EXPECT_LT(max_frame_diff(propagate_tomogram(c, TomographicPropagator::quadratic(inv)),
                           propagate_tomogram(c, TomographicPropagator::oscillator(1.1))),
            1e-9);
}

TEST(Compose, FreeMotionAddsTimes) {
  const auto p = compose_propagators(TomographicPropagator::free_motion(1.0), TomographicPropagator::free_motion(2.0, 1.0));
  EXPECT_LT((p.Lambda - mat(1.0, 0.0, -3.0, 1.0)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_DOUBLE_EQ(p.t_from, 0.0);
  EXPECT_DOUBLE_EQ(p.t_to, 3.0);
}

TEST(Compose, OscillatorQuarterTurns) {
  const auto p = compose_propagators(TomographicPropagator::oscillator(pi / 2), TomographicPropagator::oscillator(pi / 2, pi / 2));
  EXPECT_LT((p.Lambda - rotation(pi)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Compose, IdentityIsNeutral) {
  const auto p = TomographicPropagator::quadratic(
      linear_invariants(QuadraticHamiltonian::forced_oscillator([](double t) { return std::cos(t); }), 0.9));
  TomographicPropagator id = TomographicPropagator::oscillator(0.0, 0.9);
  const auto q = compose_propagators(p, id);
  EXPECT_LT((q.Lambda - p.Lambda).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((q.Delta - p.Delta).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Compose, ChapmanKolmogorov) {
  const double t1 = 0.0, tm = 0.7, t2 = 1.9;
  for (const auto& [a, b, direct] :
       {std::tuple{TomographicPropagator::free_motion(tm - t1, t1), TomographicPropagator::free_motion(t2 - tm, tm),
                   TomographicPropagator::free_motion(t2 - t1, t1)},
        std::tuple{TomographicPropagator::oscillator(tm - t1, t1), TomographicPropagator::oscillator(t2 - tm, tm),
                   TomographicPropagator::oscillator(t2 - t1, t1)}}) {
    const auto c = compose_propagators(a, b);
    EXPECT_LT((c.Lambda - direct.Lambda).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_LT((c.Delta - direct.Delta).cwiseAbs().maxCoeff(), 1e-8);
  }
  // Time-dependent drive: the second leg integrates the shifted Hamiltonian.
  auto drive = [](double t) { return std::sin(2.0 * t) + 0.3; };
  const auto h = QuadraticHamiltonian::forced_oscillator(drive);
  const auto h_late = QuadraticHamiltonian::forced_oscillator([&](double t) { return drive(t + tm); });
  const LinearInvariants i1 = linear_invariants(h, tm), i2 = linear_invariants(h_late, t2 - tm);
  const TomographicPropagator p1{TomographicPropagator::Kind::Quadratic, t1, tm, i1.Lambda, i1.Delta};
  const TomographicPropagator p2{TomographicPropagator::Kind::Quadratic, tm, t2, i2.Lambda, i2.Delta};
  const auto c = compose_propagators(p1, p2);
  const LinearInvariants d = linear_invariants(h, t2);
  EXPECT_LT((c.Lambda - d.Lambda).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_LT((c.Delta - d.Delta).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Compose, TimeMismatch) {
  EXPECT_EQ(kind_of([] {
              compose_propagators(TomographicPropagator::free_motion(1.0), TomographicPropagator::free_motion(1.0, 0.5));
            }),
            ErrorKind::TimeMismatch);
}

TEST(Liouville, IdentityAtZeroAndPeriod) {
  const Grid1D g(-6.0, 6.0, 241);
  const PhaseDensity f = gaussian_phase_density(1.0, -0.5, 0.6, 0.8, g, g);
  const auto h = QuadraticHamiltonian::oscillator();
  EXPECT_LT((liouville_evolve(f, h, 0.0).values - f.values).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((liouville_evolve(f, h, two_pi).values - f.values).cwiseAbs().maxCoeff(), 1e-3);
}

TEST(Liouville, FreeShearMatchesPointStateForm) {
  // Mollified point state (x0, p0): the q-marginal at time t is centred at x0 + p0 t
  // with variance eps_q^2 + t^2 eps_p^2.
  const Grid1D g(-6.0, 6.0, 481);
  const double x0 = -1.0, p0 = 1.0, eq = 0.3, ep = 0.3, t = 1.5;
  const PhaseDensity ft = liouville_evolve(gaussian_phase_density(x0, p0, eq, ep, g, g), QuadraticHamiltonian::free_particle(), t);
  const double var = eq * eq + t * t * ep * ep;
  for (std::size_t i = 0; i < g.size(); i += 20) {
    const double marg = trapezoid<double>(g.size(), g.spacing(), [&](std::size_t k) { return ft.values(i, k); });
    const double d = g[i] - x0 - p0 * t;
    EXPECT_NEAR(marg, std::exp(-0.5 * d * d / var) / std::sqrt(two_pi * var), 2e-3) << g[i];
  }
}

TEST(Liouville, BoundaryOutflow) {
  const Grid1D g(-4.0, 4.0, 161);
  const PhaseDensity f = gaussian_phase_density(0.0, 2.0, 0.4, 0.4, g, g);
  EXPECT_EQ(kind_of([&] { liouville_evolve(f, QuadraticHamiltonian::free_particle(), 3.0); }), ErrorKind::BoundaryOutflow);
}

TEST(Agreement, CoherentStateRoutes) {
  EXPECT_LE(classical_quantum_agreement(CoherentLabel({1.0, 0.0}), pi / 2), 1e-3);
  EXPECT_LE(classical_quantum_agreement(CoherentLabel({1.0, 0.0}), pi), 1e-3);
  EXPECT_EQ(kind_of([] { classical_quantum_agreement(CoherentLabel({1.0, 0.0}), 7.0); }), ErrorKind::InvalidArgument);
}

TEST(Agreement, TrivialCasesAtBilinearFloor) {
  // Both routes are exact rotations here; what remains is the O(h^2) error of
  // the bilinear line integrals on the 401^2 phase grid.
  const double a0 = classical_quantum_agreement(CoherentLabel({0.0, 0.0}), 1.3);
  const double a1 = classical_quantum_agreement(CoherentLabel({1.0, 0.0}), 0.0);
  EXPECT_LE(a0, 2.5e-4);
  EXPECT_LE(a1, 2.5e-4);
  AgreementGrid fine;
  fine.phase = Grid1D(-6.0, 6.0, 801);
  EXPECT_LE(classical_quantum_agreement(CoherentLabel({1.0, 0.0}), 0.0, fine), a1 / 3.0);
}

TEST(Stationarity, FockStatesAndCoherent) {
  EXPECT_LE(stationarity_residual(fock_tomogram(FockLabel(0))), 1e-8);
  for (int n = 1; n <= 5; ++n) EXPECT_LE(stationarity_residual(fock_tomogram(FockLabel(n))), 1e-6) << n;
  EXPECT_GT(stationarity_residual(coherent_tomogram(CoherentLabel({1.0, 0.0}))), 0.1);
}

TEST(OscillatorEquation, Residuals) {
  EXPECT_LE(oscillator_evolution_residual(oscillator_family(coherent_tomogram(CoherentLabel({1.0, 0.0}))), 0.6), 1e-5);
  EXPECT_LE(oscillator_evolution_residual(oscillator_family(fock_tomogram(FockLabel(2))), 1.0), 1e-6);
  EXPECT_LE(oscillator_evolution_residual(oscillator_family(fock_tomogram(FockLabel(0))), 2.0), 1e-8);
  // A family evolving the wrong way round fails the equation.
  const Tomogram c = coherent_tomogram(CoherentLabel({1.0, 0.0}));
  const TomogramFamily reversed = [c](double t) { return propagate_tomogram(c, TomographicPropagator::oscillator(-t)); };
  EXPECT_GT(oscillator_evolution_residual(reversed, 0.6), 0.1);
}

TEST(Energy, SpectrumIsNPlusHalf) {
  EXPECT_NEAR(oscillator_energy_estimate(FockLabel(0)), 0.5, 1e-6);
  for (int n = 1; n <= 4; ++n) {
    EXPECT_NEAR(oscillator_energy_estimate(FockLabel(n)), n + 0.5, 1e-4) << n;
    const auto e = oscillator_energy_samples(FockLabel(n), energy_sample_points(FockLabel(n)));
    double mean = 0.0, var = 0.0;
    for (double v : e) mean += v / static_cast<double>(e.size());
    for (double v : e) var += (v - mean) * (v - mean) / static_cast<double>(e.size());
    EXPECT_LE(var, 1e-6);
  }
}

TEST(Energy, Guards) {
  // L_1(x) = 1 - x vanishes at k^2 r^2 / 2 = 1.
  EXPECT_EQ(kind_of([] { oscillator_energy_estimate(FockLabel(1), {{1.0, 1.0, 1.0}}); }), ErrorKind::NearNode);
  EXPECT_EQ(kind_of([] { oscillator_energy_estimate(FockLabel(1), {{0.1, 1.0, 0.0}}); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([] { oscillator_energy_estimate(FockLabel(1), {}); }), ErrorKind::InvalidArgument);
}
