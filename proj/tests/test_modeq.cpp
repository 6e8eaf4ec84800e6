#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "drp/modeq.hpp"
#include "drp/stencil.hpp"
#include "support/oracles.hpp"

namespace {

using drp::Signature;

bool close14(double a, double b) { return std::abs(a - b) <= 1e-14 * std::max(1.0, std::abs(b)); }

TEST(ModifiedEquation, SecondOrderInTimeFirstInSpace) {
  const auto c = drp::optimize_coefficients(3);
  const auto sp = drp::SchemeParams::from_nondimensional(0.4, 1.0, 1.0);
  const auto da = drp::taylor_expand_scheme(c, sp, 2, 1);
  ASSERT_EQ(da.terms.size(), 3u);
  EXPECT_EQ(da.at({1, 0}), -1.0);
  EXPECT_DOUBLE_EQ(da.at({2, 0}), -sp.tau / 2.0);
  EXPECT_EQ(da.at({0, 1}), sp.tau * c.moment(1));
  EXPECT_NEAR(da.at({0, 1}), sp.tau * 2.0 * 0.50597510103729046, 1e-13);
}

TEST(ModifiedEquation, HigherTermsFollowTaylorFactors) {
  const auto c = drp::optimize_coefficients(2);
  const auto sp = drp::SchemeParams::from_dimensional(2.0, 0.5, 0.05, 0.25, 1.0, 0.5);
  const auto da = drp::taylor_expand_scheme(c, sp, 4, 5);
  EXPECT_NEAR(da.at({3, 0}), -sp.tau * sp.tau / 6.0, 1e-17);
  EXPECT_NEAR(da.at({4, 0}), -std::pow(sp.tau, 3) / 24.0, 1e-18);
  const double m3 = 2.0 * (c[1] + 8.0 * c[2]);
  EXPECT_NEAR(da.at({0, 3}), sp.tau * sp.h * sp.h / 6.0 * m3, 1e-16);
  const double m5 = 2.0 * (c[1] + 32.0 * c[2]);
  EXPECT_NEAR(da.at({0, 5}), sp.tau * std::pow(sp.h, 4) / 120.0 * m5, 1e-17);
}

TEST(ModifiedEquation, EvenSpaceOrdersAbsent) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> d;
  for (int m = 1; m <= 8; ++m) {
    std::vector<double> g(static_cast<std::size_t>(m));
    for (double& x : g) x = d(rng);
    for (const auto& c : {drp::optimize_coefficients(m), drp::StencilCoefficients(m, g)}) {
      const auto da = drp::taylor_expand_scheme(c, drp::SchemeParams{}, 6, 12);
      for (int r = 2; r <= 12; r += 2) EXPECT_FALSE(da.contains({0, r})) << "m = " << m << " r = " << r;
      for (const auto& [sig, coef] : da.terms) EXPECT_TRUE(sig.time == 0 || sig.space == 0);
    }
  }
}

TEST(ModifiedEquation, NondimensionalFormOverRandomDraws) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> sig(0.05, 1.5), mu(0.1, 5.0), re(0.1, 50.0),
      h(0.01, 2.0), cc(0.1, 4.0);
  std::uniform_int_distribution<int> mm(1, 8);
  for (int draw = 0; draw < 100; ++draw) {
    const int m = mm(rng);
    const auto c = drp::optimize_coefficients(m);
    const auto sp = drp::SchemeParams::from_nondimensional(sig(rng), mu(rng), re(rng), h(rng), cc(rng));
    const auto nd = drp::nondimensionalize(drp::taylor_expand_scheme(c, sp, 2, 1), sp);
    const double A = 2.0 * sp.sigma / (sp.mu * sp.Re_h) * c.first_moment_half();
    EXPECT_TRUE(close14(nd.at({1, 0}), -1.0)) << draw;
    EXPECT_TRUE(close14(nd.at({2, 0}), -sp.sigma / 2.0)) << draw;
    EXPECT_TRUE(close14(nd.at({0, 1}), A)) << draw << ": " << nd.at({0, 1}) << " vs " << A;
    EXPECT_TRUE(close14(drp::advection_coefficient(c, sp), A));
  }
}

TEST(ModifiedEquation, UnitParametersGiveFourOverPi) {
  const auto sp = drp::SchemeParams::from_nondimensional(1.0, 1.0, 1.0);
  EXPECT_NEAR(drp::advection_coefficient(drp::optimize_coefficients(1), sp), 4.0 / std::numbers::pi,
              1e-15);
}

TEST(ModifiedEquation, HigherOrderTermsRejectedByNondimensionalize) {
  const auto c = drp::optimize_coefficients(2);
  const drp::SchemeParams sp;
  EXPECT_THROW(drp::nondimensionalize(drp::taylor_expand_scheme(c, sp, 3, 1), sp),
               drp::TruncationMismatch);
  EXPECT_THROW(drp::nondimensionalize(drp::taylor_expand_scheme(c, sp, 2, 3), sp),
               drp::TruncationMismatch);
  EXPECT_NO_THROW(drp::nondimensionalize(drp::taylor_expand_scheme(c, sp, 1, 1), sp));
}

TEST(ModifiedEquation, TruncationOrdersValidated) {
  const auto c = drp::optimize_coefficients(1);
  EXPECT_THROW(drp::taylor_expand_scheme(c, {}, 0, 1), drp::ConfigError);
  EXPECT_THROW(drp::taylor_expand_scheme(c, {}, 7, 1), drp::ConfigError);
  EXPECT_THROW(drp::taylor_expand_scheme(c, {}, 2, 0), drp::ConfigError);
  EXPECT_THROW(drp::taylor_expand_scheme(c, {}, 2, 13), drp::ConfigError);
}

// The space part of the table is the Taylor series of g - 1 for one Fourier mode.
TEST(ModifiedEquation, SpaceTermsReproduceSymbolSeries) {
  const auto c = drp::optimize_coefficients(3);
  const auto sp = drp::SchemeParams::from_nondimensional(0.3, 1.0, 1.0, 0.5);
  const auto da = drp::taylor_expand_scheme(c, sp, 1, 11);
  for (double zeta : {0.05, 0.2, 0.4}) {
    const double lambda = zeta / sp.h;
    std::complex<double> series = 0.0;
    for (const auto& [sig, coef] : da.terms)
      if (sig.time == 0) series += coef * std::pow(std::complex<double>(0.0, lambda), sig.space);
    const std::complex<double> exact = drp::discrete_symbol(c, sp, zeta) - 1.0;
    EXPECT_NEAR(series.real(), exact.real(), 1e-14);
    EXPECT_NEAR(series.imag(), exact.imag(), 1e-9);  // first omitted term is O(zeta^13)
  }
}

TEST(Symbol, MagnitudeNeverBelowOne) {
  for (int m = 1; m <= 8; ++m) {
    const auto c = drp::optimize_coefficients(m);
    const auto sp = drp::SchemeParams::from_nondimensional(0.7, 1.0, 1.0);
    std::vector<double> g(c.gamma().begin(), c.gamma().end());
    for (int p = 0; p < 1024; ++p) {
      const double zeta = 2.0 * std::numbers::pi * p / 1024.0;
      const auto s = drp::discrete_symbol(c, sp, zeta);
      ASSERT_GE(std::abs(s), 1.0);
      const auto ref = oracle::symbol(g, sp.tau / sp.h, zeta);
      EXPECT_NEAR(s.real(), ref.real(), 1e-14);
      EXPECT_NEAR(s.imag(), ref.imag(), 1e-14);
    }
  }
}

TEST(SchemeParams, FactoriesSatisfyInvariants) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.01, 10.0);
  for (int i = 0; i < 100; ++i) {
    const auto a = drp::SchemeParams::from_nondimensional(u(rng), u(rng), u(rng), u(rng), u(rng));
    EXPECT_NO_THROW(a.validate());
    const auto b = drp::SchemeParams::from_dimensional(u(rng), u(rng), u(rng), u(rng), u(rng), u(rng));
    EXPECT_NO_THROW(b.validate());
  }
}

TEST(SchemeParams, InvalidInputsRejected) {
  EXPECT_THROW(drp::SchemeParams::from_nondimensional(0.0, 1.0, 1.0), drp::ConfigError);
  EXPECT_THROW(drp::SchemeParams::from_nondimensional(1.0, -1.0, 1.0), drp::ConfigError);
  EXPECT_THROW(drp::SchemeParams::from_nondimensional(1.0, 1.0, NAN), drp::ConfigError);
  EXPECT_THROW(drp::SchemeParams::from_dimensional(1.0, 1.0, 1.0, 0.0, 1.0, 1.0), drp::ConfigError);
  auto p = drp::SchemeParams::from_nondimensional(0.5, 1.0, 1.0);
  p.sigma = 0.6;
  EXPECT_THROW(p.validate(), drp::ConfigError);
}

}  // namespace
