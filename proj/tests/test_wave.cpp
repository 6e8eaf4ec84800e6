#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "drp/modeq.hpp"
#include "drp/stencil.hpp"
#include "drp/wave.hpp"
#include "support/oracles.hpp"

namespace {

using drp::Unknown;
constexpr double kPi = std::numbers::pi;

drp::TravelingWaveODE make_ode(double A, double sigma, double v, double C) {
  drp::TravelingWaveODE o;
  o.A = A;
  o.sigma = sigma;
  o.v = v;
  o.rhs = C;
  o.a0 = A - v;
  o.a1 = -v * v * sigma / 2.0;
  return o;
}

drp::HyperbolicAnsatz ansatz(double C1) {
  drp::HyperbolicAnsatz a;
  a.C1 = C1;
  return a;
}

TEST(Ansatz, ConstantProfileCoefficients) {
  // With U1 = V1 = 0 the product (A - v) V0 (1 + E^2)^2 - C (1 + E^2)^2 gives 1, 0, 2, 0, 1.
  const auto ep = drp::substitute_ansatz(make_ode(1.3, 0.5, 0.0, 0.0), ansatz(1.0));
  const drp::Assignment a{0.0, 0.0, 0.7, 0.4, 0.2};
  const double k = (1.3 - 0.4) * 0.7 - 0.2;
  ASSERT_EQ(ep.coeffs.size(), 5u);
  EXPECT_NEAR(ep.coeffs[0].evaluate(a), k, 1e-15);
  EXPECT_NEAR(ep.coeffs[1].evaluate(a), 0.0, 1e-15);
  EXPECT_NEAR(ep.coeffs[2].evaluate(a), 2 * k, 1e-15);
  EXPECT_NEAR(ep.coeffs[3].evaluate(a), 0.0, 1e-15);
  EXPECT_NEAR(ep.coeffs[4].evaluate(a), k, 1e-15);
}

TEST(Ansatz, MatchesTranscendentalAtFixedPoint) {
  const double A = 1.1, sigma = 0.8, C1 = 0.7;
  const double U1 = 0.3, V1 = -0.2, V0 = 0.1, v = 1.5, C = 2.0;
  const auto ep = drp::substitute_ansatz(make_ode(A, sigma, v, C), ansatz(C1));
  const drp::Assignment a{U1, V1, V0, v, C};
  for (double xi : {-1.0, 0.37, 2.0}) {
    const double E = std::exp(C1 * xi);
    const double ref = oracle::ode_lhs(A, sigma, U1, V1, V0, v, C, C1, xi) * (1 + E * E) * (1 + E * E);
    EXPECT_NEAR(ep.evaluate(a, xi), ref, 1e-12 * ep.magnitude(a, xi)) << "xi = " << xi;
  }
}

TEST(Ansatz, MatchesTranscendentalOverRandomDraws) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> d(-2.0, 2.0), pos(0.1, 2.0), xi_d(-4.0, 4.0);
  for (int draw = 0; draw < 200; ++draw) {
    const double A = d(rng), sigma = pos(rng), C1 = d(rng) > 0 ? pos(rng) : -pos(rng);
    const drp::Assignment a{d(rng), d(rng), d(rng), d(rng), d(rng)};
    const auto ep = drp::substitute_ansatz(make_ode(A, sigma, 0.0, 0.0), ansatz(C1));
    ASSERT_EQ(ep.degree(), 4);
    for (int s = 0; s < 16; ++s) {
      const double xi = xi_d(rng) / std::abs(C1);
      const double E = std::exp(C1 * xi);
      const double ref = oracle::ode_lhs(A, sigma, a[0], a[1], a[2], a[3], a[4], C1, xi) *
                         (1 + E * E) * (1 + E * E);
      ASSERT_NEAR(ep.evaluate(a, xi), ref, 1e-10 * ep.magnitude(a, xi))
          << "draw " << draw << " sample " << s;
    }
  }
}

TEST(Ansatz, DegreeIsFourAndSystemHasFiveEquations) {
  const auto ep = drp::substitute_ansatz(make_ode(1.0, 1.0, 0.0, 0.0), ansatz(1.0));
  EXPECT_EQ(ep.degree(), 4);
  EXPECT_EQ(drp::collect_system(ep).size(), 5u);
}

TEST(Ansatz, UnsupportedShapesRejected) {
  const auto ode = make_ode(1.0, 1.0, 0.0, 0.0);
  auto a = ansatz(1.0);
  a.n = 2;
  EXPECT_THROW(drp::substitute_ansatz(ode, a), drp::ConfigError);
  a = ansatz(1.0);
  a.x0 = 0.5;
  EXPECT_THROW(drp::substitute_ansatz(ode, a), drp::ConfigError);
  EXPECT_THROW(drp::substitute_ansatz(ode, ansatz(0.0)), drp::ConfigError);
}

TEST(Reduction, CoefficientsFromModifiedEquation) {
  const auto sp = drp::SchemeParams::from_nondimensional(0.5, 2.0, 3.0);
  const auto c = drp::optimize_coefficients(2);
  const auto nd = drp::nondimensionalize(drp::taylor_expand_scheme(c, sp, 2, 1), sp);
  const auto ode = drp::reduce_to_ode(nd, sp, 0.25, 1.5);
  const double A = 2.0 * 0.5 / 6.0 * c.first_moment_half();
  EXPECT_NEAR(ode.A, A, 1e-15);
  EXPECT_NEAR(ode.a0, A - 0.25, 1e-15);
  EXPECT_DOUBLE_EQ(ode.a1, -0.25 * 0.25 * 0.5 / 2.0);
  EXPECT_EQ(ode.rhs, 1.5);
}

TEST(Reduction, RejectsOtherTruncations) {
  const drp::SchemeParams sp;
  const auto c = drp::optimize_coefficients(1);
  EXPECT_THROW(drp::reduce_to_ode(drp::taylor_expand_scheme(c, sp, 3, 1), sp, 1.0, 1.0),
               drp::TruncationMismatch);
}

TEST(PaperSolution, UnitParameters) {
  const auto sp = drp::SchemeParams::from_nondimensional(1.0, 1.0, 1.0);
  const auto k = drp::paper_solution(sp, drp::optimize_coefficients(1), 1.0, 1.0, 0.0);
  EXPECT_NEAR(k.v, 4.0 / kPi, 1e-12);
  EXPECT_NEAR(k.U1, -kPi * kPi / 32.0, 1e-12);
  EXPECT_EQ(k.V0, 0.0);
}

TEST(PaperSolution, ScalesWithInputs) {
  const auto sp = drp::SchemeParams::from_nondimensional(0.2, 1.5, 4.0);
  const auto c = drp::optimize_coefficients(3);
  const auto k = drp::paper_solution(sp, c, -0.5, 2.0, 0.3);
  const double v = 2.0 * 0.2 / 6.0 * c.first_moment_half();
  EXPECT_NEAR(k.v, v, 1e-15);
  EXPECT_NEAR(k.U1, 0.5 / (2.0 * 2.0 * v * v * 0.2), 1e-12);
  EXPECT_EQ(k.V0, 0.3);
  EXPECT_THROW(drp::paper_solution(sp, c, 1.0, 0.0, 0.0), drp::ConfigError);
  EXPECT_THROW(drp::paper_solution(sp, drp::StencilCoefficients(1, {0.0}), 1.0, 1.0, 0.0),
               drp::NumericalError);
}

TEST(PaperSolution, CanonicalFormFlipsNegativeWidth) {
  drp::KinkSolution k{0.4, 0.1, -2.0, 1.0, 1.0};
  const auto c = k.canonical();
  EXPECT_EQ(c.C1, 2.0);
  EXPECT_EQ(c.U1, -0.4);
  for (double xi : {-1.0, 0.0, 0.3, 5.0}) EXPECT_DOUBLE_EQ(c.profile(xi), k.profile(xi));
}

TEST(PrintedSystem, PaperSolutionSatisfiesIt) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> pos(0.1, 2.0), d(-3.0, 3.0);
  for (int i = 0; i < 50; ++i) {
    const auto sp = drp::SchemeParams::from_nondimensional(pos(rng), pos(rng), pos(rng));
    const auto c = drp::optimize_coefficients(1 + i % 6);
    const double C1 = pos(rng);
    const auto chk = drp::verify_printed_system(sp, c, d(rng), C1, 0.0);
    EXPECT_TRUE(chk.consistent);
    for (double r : chk.residuals) EXPECT_LE(std::abs(r), 1e-10);
  }
}

TEST(PrintedSystem, PerturbedAmplitudeBreaksFirstEquation) {
  const auto sp = drp::SchemeParams::from_nondimensional(0.6, 1.0, 1.0);
  const auto c = drp::optimize_coefficients(2);
  const double C1 = 1.3;
  const auto k = drp::paper_solution(sp, c, 1.0, C1, 0.0);
  auto a = drp::assignment_of(k);
  drp::at(a, Unknown::U1) += 1.0;
  const auto r = drp::printed_residuals(sp, c, C1, a);
  EXPECT_NEAR(r[0], -2.0 * k.v * k.v * C1 * sp.sigma, 1e-12);
  for (int i = 1; i < 5; ++i) EXPECT_EQ(r[static_cast<std::size_t>(i)], 0.0);
}

TEST(DerivedSystem, PaperSolutionDoesNotSatisfyIt) {
  const auto sp = drp::SchemeParams::from_nondimensional(1.0, 1.0, 1.0);
  const auto c = drp::optimize_coefficients(1);
  const auto k = drp::paper_solution(sp, c, 1.0, 1.0, 0.0);
  const auto r = drp::derived_residuals(sp, c, k);
  // At v = A only the u' term and -C (1 + E^2)^2 survive; u' reaches E^2 alone.
  EXPECT_NEAR(r[0], -1.0, 1e-12);
  EXPECT_NEAR(r[1], 0.0, 1e-12);
  EXPECT_NEAR(r[2], -1.0, 1e-12);
  EXPECT_NEAR(r[3], 0.0, 1e-12);
  EXPECT_NEAR(r[4], -1.0, 1e-12);
}

TEST(Residual, CentreAndTailsOfTheAudit) {
  for (double C : {1.0, -0.7, 2.5}) {
    const auto sp = drp::SchemeParams::from_nondimensional(1.0, 1.0, 1.0);
    const auto c = drp::optimize_coefficients(1);
    const double C1 = 0.8;
    const auto k = drp::paper_solution(sp, c, C, C1, 0.0);
    const auto ode = make_ode(drp::advection_coefficient(c, sp), sp.sigma, k.v, C);
    const auto r = drp::residual(ode, k, {0.0, 5.0 / C1, 10.0 / C1, -10.0 / C1});
    EXPECT_NEAR(r[0], -0.75 * C, 1e-10);
    // r + C = (C/4) sech^2(C1 xi), so the tail ratio is a pure sech^2 ratio.
    const double ratio = (r[2] + C) / (r[1] + C);
    const double sech_ratio = std::pow(std::cosh(5.0) / std::cosh(10.0), 2);
    EXPECT_NEAR(ratio / sech_ratio, 1.0, 1e-6);
    EXPECT_NEAR(r[2], -C, 1e-8 * std::abs(C));
    EXPECT_NEAR(r[3], -C, 1e-8 * std::abs(C));
  }
}

TEST(Residual, ZeroConstantGivesFlatKink) {
  const auto sp = drp::SchemeParams::from_nondimensional(1.0, 1.0, 1.0);
  const auto c = drp::optimize_coefficients(1);
  const auto k = drp::paper_solution(sp, c, 0.0, 1.0, 0.25);
  EXPECT_EQ(k.U1, 0.0);
  const auto ode = make_ode(k.v, sp.sigma, k.v, 0.0);
  for (double r : drp::residual(ode, k, {-3.0, 0.0, 3.0})) EXPECT_EQ(r, 0.0);
}

}  // namespace
