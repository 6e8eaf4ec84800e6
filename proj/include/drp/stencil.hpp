#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "drp/error.hpp"
#include "drp/quadrature.hpp"

namespace drp {

inline constexpr int kMaxHalfWidth = 16;

/// Antisymmetric first-derivative stencil of half-width m.
///
/// Only gamma_1..gamma_m are stored. gamma_0 = 0 and gamma_{-k} = -gamma_k
/// follow from the representation, so the full weight sum is exactly zero.
class StencilCoefficients {
 public:
  StencilCoefficients(int m, std::vector<double> gamma) : m_(m), gamma_(std::move(gamma)) {
    if (m_ < 1) throw ConfigError("stencil half-width m must be >= 1, got " + std::to_string(m_));
    if (gamma_.size() != static_cast<std::size_t>(m_))
      throw ConfigError("stencil needs exactly m = " + std::to_string(m_) + " coefficients");
  }

  int m() const { return m_; }
  std::span<const double> gamma() const { return gamma_; }

  /// gamma_k for any k in [-m, m].
  double operator[](int k) const {
    if (k == 0) return 0.0;
    if (k > 0) return gamma_.at(static_cast<std::size_t>(k - 1));
    return -gamma_.at(static_cast<std::size_t>(-k - 1));
  }

  /// All 2m+1 weights, gamma_{-m} first.
  std::vector<double> full() const {
    std::vector<double> w;
    w.reserve(2 * static_cast<std::size_t>(m_) + 1);
    for (int k = -m_; k <= m_; ++k) w.push_back((*this)[k]);
    return w;
  }

  /// Sum of all 2m+1 weights, taken as pairs gamma_k + gamma_{-k}: exactly zero.
  double weight_sum() const {
    double s = 0.0;
    for (int k = 1; k <= m_; ++k) s += (*this)[k] + (*this)[-k];
    return s;
  }

  /// Sum over k = 1..m of k * gamma_k.
  double first_moment_half() const {
    double s = 0.0;
    for (int k = 1; k <= m_; ++k) s += k * gamma_[k - 1];
    return s;
  }

  /// Sum over k = -m..m of k^r * gamma_k. Zero for even r by antisymmetry.
  double moment(int r) const {
    if (r % 2 == 0) return 0.0;
    double s = 0.0;
    for (int k = 1; k <= m_; ++k) s += std::pow(static_cast<double>(k), r) * gamma_[k - 1];
    return 2.0 * s;
  }

  bool operator==(const StencilCoefficients&) const = default;

 private:
  int m_;
  std::vector<double> gamma_;
};

struct DispersionSample {
  double zeta;
  double lambda_bar_h;
  double error;
};

namespace detail {

// Integral of cos(p*zeta) over [0, pi/2].
inline double cos_integral(int p) {
  if (p == 0) return std::numbers::pi / 2.0;
  return std::sin(p * std::numbers::pi / 2.0) / p;
}

}  // namespace detail

/// Normal equations M g = b of the least-squares wavenumber fit on [0, pi/2].
struct NormalSystem {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd rhs;
};

inline NormalSystem assemble_normal_system(int m) {
  if (m < 1 || m > kMaxHalfWidth)
    throw ConfigError("stencil half-width m must be in [1, " + std::to_string(kMaxHalfWidth) +
                      "], got " + std::to_string(m));
  NormalSystem sys{Eigen::MatrixXd(m, m), Eigen::VectorXd(m)};
  constexpr double half_pi = std::numbers::pi / 2.0;
  for (int i = 1; i <= m; ++i) {
    sys.rhs(i - 1) = std::sin(i * half_pi) / (i * i) - half_pi * std::cos(i * half_pi) / i;
    for (int k = 1; k <= m; ++k)
      sys.matrix(i - 1, k - 1) = detail::cos_integral(k - i) - detail::cos_integral(k + i);
  }
  return sys;
}

/// Weights minimising the integrated wavenumber error over |zeta| <= pi/2.
inline StencilCoefficients optimize_coefficients(int m) {
  const NormalSystem sys = assemble_normal_system(m);
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(sys.matrix);
  const double rcond = lu.rcond();
  if (!(rcond >= 64.0 * std::numeric_limits<double>::epsilon())) {
    throw SingularSystemError("normal system for m = " + std::to_string(m) +
                                  " is numerically singular (condition estimate " +
                                  std::to_string(1.0 / rcond) + ")",
                              1.0 / rcond);
  }
  const Eigen::VectorXd g = lu.solve(sys.rhs);
  return StencilCoefficients(m, std::vector<double>(g.data(), g.data() + g.size()));
}

/// lambda_bar * h = 2 sum_k gamma_k sin(k zeta). Odd in zeta bit-for-bit.
inline double effective_wavenumber(const StencilCoefficients& c, double zeta) {
  const double z = std::abs(zeta);
  double s = 0.0;
  for (int k = 1; k <= c.m(); ++k) s += c[k] * std::sin(k * z);
  s *= 2.0;
  return zeta < 0.0 ? -s : s;
}

/// E = 2 * int_0^{pi/2} (zeta - lambda_bar h)^2 dzeta by 64-point Gauss–Legendre.
inline double integrated_error(const StencilCoefficients& c) {
  const auto& rule = gauss_legendre<64>();
  return 2.0 * rule.integrate(
                   [&](double z) {
                     const double e = z - effective_wavenumber(c, z);
                     return e * e;
                   },
                   0.0, std::numbers::pi / 2.0);
}

/// Same functional expanded with the closed-form integrals:
/// E = 2 (pi^3/24 - 4 g.b + 2 g.M.g).
inline double integrated_error_closed_form(const StencilCoefficients& c) {
  const NormalSystem sys = assemble_normal_system(c.m());
  const Eigen::Map<const Eigen::VectorXd> g(c.gamma().data(), c.m());
  constexpr double pi = std::numbers::pi;
  return 2.0 * (pi * pi * pi / 24.0 - 4.0 * g.dot(sys.rhs) + 2.0 * g.dot(sys.matrix * g));
}

/// max_i |(M g - b)_i|.
inline double normal_residual(const StencilCoefficients& c) {
  const NormalSystem sys = assemble_normal_system(c.m());
  const Eigen::Map<const Eigen::VectorXd> g(c.gamma().data(), c.m());
  return (sys.matrix * g - sys.rhs).cwiseAbs().maxCoeff();
}

/// Evenly spaced samples over [-pi/2, pi/2]; an odd count puts zeta = 0 exactly in the middle.
inline std::vector<DispersionSample> dispersion_samples(const StencilCoefficients& c,
                                                        int count) {
  if (count < 2) throw ConfigError("dispersion needs at least 2 samples");
  std::vector<DispersionSample> out;
  out.reserve(static_cast<std::size_t>(count));
  const int span = count - 1;
  for (int i = 0; i < count; ++i) {
    const double zeta =
        static_cast<double>(2 * i - span) / static_cast<double>(span) * (std::numbers::pi / 2.0);
    const double lb = effective_wavenumber(c, zeta);
    out.push_back({zeta, lb, zeta - lb});
  }
  return out;
}

}  // namespace drp
