#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "drp/error.hpp"
#include "drp/modeq.hpp"
#include "drp/poly.hpp"
#include "drp/stencil.hpp"

namespace drp {

/// (A - v) u(xi) + a1 u'(xi) = C, with a1 = -v^2 sigma / 2.
struct TravelingWaveODE {
  double a0 = 0.0;
  double a1 = 0.0;
  double rhs = 0.0;
  double v = 0.0;
  double A = 0.0;
  double sigma = 0.0;
};

/// U1 tanh(C1 xi) + V1 sech(C1 (xi + x0)) + V0 with n = 1.
struct HyperbolicAnsatz {
  int n = 1;
  double U1 = 0.0;
  double V1 = 0.0;
  double V0 = 0.0;
  double C1 = 1.0;
  double x0 = 0.0;
  double v = 0.0;
};

/// Polynomial in E = exp(C1 xi); coefficient k multiplies E^k and is a
/// polynomial in the unknowns {U1, V1, V0, v, C}.
struct ExpPolynomial {
  std::vector<Polynomial> coeffs;
  double C1 = 1.0;

  int degree() const {
    for (int k = static_cast<int>(coeffs.size()) - 1; k >= 0; --k)
      if (!coeffs[static_cast<std::size_t>(k)].is_zero()) return k;
    return -1;
  }

  double evaluate(const Assignment& a, double xi) const {
    const double e = std::exp(C1 * xi);
    double s = 0.0;
    double ek = 1.0;
    for (const auto& p : coeffs) {
      s += p.evaluate(a) * ek;
      ek *= e;
    }
    return s;
  }

  /// sum_k |P_k(a)| E^k, the natural magnitude for relative comparisons.
  double magnitude(const Assignment& a, double xi) const {
    const double e = std::exp(C1 * xi);
    double s = 0.0;
    double ek = 1.0;
    for (const auto& p : coeffs) {
      s += std::abs(p.evaluate(a)) * ek;
      ek *= e;
    }
    return s;
  }
};

/// Closed-form kink U1 tanh(C1 (x - v t)) + V0 and the constant C it came from.
struct KinkSolution {
  double U1 = 0.0;
  double V0 = 0.0;
  double C1 = 1.0;
  double v = 0.0;
  double C = 0.0;

  double profile(double xi) const { return U1 * std::tanh(C1 * xi) + V0; }
  double derivative(double xi) const {
    const double s = 1.0 / std::cosh(C1 * xi);
    return U1 * C1 * s * s;
  }
  double operator()(double x, double t) const { return profile(x - v * t); }

  /// (U1, C1) -> (-U1, -C1) leaves the waveform unchanged; reports use C1 > 0.
  KinkSolution canonical() const {
    KinkSolution k = *this;
    if (k.C1 < 0.0) {
      k.C1 = -k.C1;
      k.U1 = -k.U1;
    }
    return k;
  }

  bool operator==(const KinkSolution&) const = default;
};

namespace detail {

inline void require_first_approximation(const DifferentialApproximation& da) {
  for (const auto& [sig, coef] : da.terms) {
    const bool allowed = sig == Signature{1, 0} || sig == Signature{2, 0} || sig == Signature{0, 1};
    if (!allowed)
      throw TruncationMismatch("traveling-wave reduction needs the {u_t, u_tt, u_x} truncation");
  }
}

using EPoly = std::vector<Polynomial>;

inline EPoly epoly(std::initializer_list<double> c) {
  EPoly out;
  for (double v : c) out.emplace_back(v);
  return out;
}

inline EPoly operator*(const EPoly& a, const EPoly& b) {
  if (a.empty() || b.empty()) return {};
  EPoly out(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

inline EPoly operator*(const Polynomial& s, const EPoly& a) {
  EPoly out;
  out.reserve(a.size());
  for (const auto& p : a) out.push_back(s * p);
  return out;
}

inline EPoly operator+(const EPoly& a, const EPoly& b) {
  EPoly out(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  return out;
}

}  // namespace detail

/// Traveling-wave reduction xi = x - v t of the nondimensional modified
/// equation, integrated once: (A - v) u - (v^2 sigma / 2) u' = C.
inline TravelingWaveODE reduce_to_ode(const DifferentialApproximation& modified,
                                      const SchemeParams& params, double v, double C) {
  detail::require_first_approximation(modified);
  TravelingWaveODE ode;
  ode.A = modified.at({0, 1});
  ode.sigma = params.sigma;
  ode.v = v;
  ode.rhs = C;
  ode.a0 = ode.A - v;
  ode.a1 = -v * v * params.sigma / 2.0;
  return ode;
}

/// Substitute the n = 1 ansatz, write tanh and sech through E = exp(C1 xi),
/// and multiply (LHS - C) by (1 + E^2)^2. The unknowns stay symbolic; A,
/// sigma and C1 are folded in as numbers.
inline ExpPolynomial substitute_ansatz(const TravelingWaveODE& ode,
                                       const HyperbolicAnsatz& ansatz) {
  using detail::epoly;
  using detail::operator*;
  using detail::operator+;
  if (ansatz.n != 1) throw ConfigError("only the n = 1 hyperbolic ansatz is supported");
  if (ansatz.x0 != 0.0) throw ConfigError("nonzero sech phase offset x0 is not supported");
  if (ansatz.C1 == 0.0 || !std::isfinite(ansatz.C1)) throw ConfigError("C1 must be nonzero");

  const Polynomial U1 = Polynomial::var(Unknown::U1);
  const Polynomial V1 = Polynomial::var(Unknown::V1);
  const Polynomial V0 = Polynomial::var(Unknown::V0);
  const Polynomial v = Polynomial::var(Unknown::v);
  const Polynomial C = Polynomial::var(Unknown::C);
  const double C1 = ansatz.C1;

  const Polynomial a0 = Polynomial(ode.A) - v;
  const Polynomial a1 = (v * v) * (-ode.sigma / 2.0);

  const detail::EPoly D = epoly({1.0, 0.0, 1.0});          // 1 + E^2
  const detail::EPoly tanh_num = epoly({-1.0, 0.0, 1.0});  // tanh = (E^2 - 1) / D
  const detail::EPoly sech_num = epoly({0.0, 2.0});        // sech = 2E / D

  // u * D^2
  const detail::EPoly u = U1 * (tanh_num * D) + V1 * (sech_num * D) + V0 * (D * D);
  // u' * D^2: tanh' = C1 * 4E^2 / D^2, sech' = -C1 * 2E (E^2 - 1) / D^2
  const detail::EPoly du = (U1 * C1) * epoly({0.0, 0.0, 4.0}) +
                           (V1 * C1) * epoly({0.0, 2.0, 0.0, -2.0});
  const detail::EPoly rhs = (-C) * (D * D);

  ExpPolynomial ep;
  ep.C1 = C1;
  ep.coeffs = a0 * u + a1 * du + rhs;
  ep.coeffs.resize(5);
  return ep;
}

/// Coefficients of E^0..E^4; each must vanish.
inline std::vector<Polynomial> collect_system(const ExpPolynomial& ep) {
  if (ep.degree() > 4) throw ConfigError("exponential polynomial degree exceeds 4");
  std::vector<Polynomial> sys(5);
  for (std::size_t k = 0; k < ep.coeffs.size() && k < 5; ++k) sys[k] = ep.coeffs[k];
  return sys;
}

/// The five coefficient equations in their commonly printed form, each
/// rewritten as LHS - RHS:
///
///   2 (A - v)(-U1 + V0) - (v^2 C1 sigma / 2)(4 U1 + 2 V1) = C
///   (A - v) 2 V1 = 0
///   2 (A - v) V0 = 0
///   2 (A - v) V1 + v^2 C1 sigma V1 = 0
///   (A - v)(U1 + V0) = 0
///
/// This system places C at E^0 only and the 4 U1 term at E^0, unlike the
/// one substitute_ansatz derives.
inline std::vector<Polynomial> printed_system(double A, double sigma, double C1) {
  const Polynomial U1 = Polynomial::var(Unknown::U1);
  const Polynomial V1 = Polynomial::var(Unknown::V1);
  const Polynomial V0 = Polynomial::var(Unknown::V0);
  const Polynomial v = Polynomial::var(Unknown::v);
  const Polynomial C = Polynomial::var(Unknown::C);
  const Polynomial a = Polynomial(A) - v;
  const Polynomial v2 = v * v;

  std::vector<Polynomial> sys;
  sys.push_back(2.0 * a * (V0 - U1) - v2 * (C1 * sigma / 2.0) * (4.0 * U1 + 2.0 * V1) - C);
  sys.push_back(a * (2.0 * V1));
  sys.push_back(2.0 * a * V0);
  sys.push_back(2.0 * a * V1 + v2 * (C1 * sigma) * V1);
  sys.push_back(a * (U1 + V0));
  return sys;
}

inline std::vector<double> evaluate_system(const std::vector<Polynomial>& sys,
                                           const Assignment& a) {
  std::vector<double> r;
  r.reserve(sys.size());
  for (const auto& p : sys) r.push_back(p.evaluate(a));
  return r;
}

/// v = (2 sigma / (mu Re_h)) sum k gamma_k, U1 = -C / (2 C1 v^2 sigma), V1 = 0.
inline KinkSolution paper_solution(const SchemeParams& params, const StencilCoefficients& coeffs,
                                   double C, double C1, double V0) {
  if (C1 == 0.0 || !std::isfinite(C1)) throw ConfigError("C1 must be nonzero");
  const double v = advection_coefficient(coeffs, params);
  if (v == 0.0)
    throw NumericalError(
        "kink speed v = (2 sigma/(mu Re_h)) sum k gamma_k is zero; U1 = -C/(2 C1 v^2 sigma) "
        "is undefined");
  KinkSolution k;
  k.v = v;
  k.C = C;
  k.C1 = C1;
  k.V0 = V0;
  k.U1 = -C / (2.0 * C1 * v * v * params.sigma);
  return k;
}

inline Assignment assignment_of(const KinkSolution& k) {
  Assignment a{};
  at(a, Unknown::U1) = k.U1;
  at(a, Unknown::V1) = 0.0;
  at(a, Unknown::V0) = k.V0;
  at(a, Unknown::v) = k.v;
  at(a, Unknown::C) = k.C;
  return a;
}

/// r(xi) = (A - v) u(xi) - (v^2 sigma / 2) u'(xi) - C for the kink profile.
inline std::vector<double> residual(const TravelingWaveODE& ode, const KinkSolution& sol,
                                    const std::vector<double>& xi_samples) {
  std::vector<double> r;
  r.reserve(xi_samples.size());
  for (double xi : xi_samples)
    r.push_back(ode.a0 * sol.profile(xi) + ode.a1 * sol.derivative(xi) - ode.rhs);
  return r;
}

struct PrintedSystemCheck {
  bool consistent = false;
  std::array<double, 5> residuals{};
  KinkSolution solution;
};

/// Residuals of the printed five-equation system at an arbitrary assignment.
inline std::array<double, 5> printed_residuals(const SchemeParams& params,
                                               const StencilCoefficients& coeffs, double C1,
                                               const Assignment& a) {
  const auto sys = printed_system(advection_coefficient(coeffs, params), params.sigma, C1);
  const auto r = evaluate_system(sys, a);
  return {r[0], r[1], r[2], r[3], r[4]};
}

/// Substitute the closed-form kink into the printed system; consistent iff
/// every |residual| <= 1e-10.
inline PrintedSystemCheck verify_printed_system(const SchemeParams& params,
                                                const StencilCoefficients& coeffs, double C,
                                                double C1, double V0 = 0.0) {
  PrintedSystemCheck check;
  check.solution = paper_solution(params, coeffs, C, C1, V0);
  check.residuals = printed_residuals(params, coeffs, C1, assignment_of(check.solution));
  check.consistent = true;
  for (double r : check.residuals)
    if (!(std::abs(r) <= 1e-10)) check.consistent = false;
  return check;
}

/// Residuals of the derived (substitute_ansatz) system at the closed-form kink.
inline std::array<double, 5> derived_residuals(const SchemeParams& params,
                                               const StencilCoefficients& coeffs,
                                               const KinkSolution& sol) {
  TravelingWaveODE ode;
  ode.A = advection_coefficient(coeffs, params);
  ode.sigma = params.sigma;
  ode.v = sol.v;
  ode.rhs = sol.C;
  ode.a0 = ode.A - sol.v;
  ode.a1 = -sol.v * sol.v * params.sigma / 2.0;
  HyperbolicAnsatz ans;
  ans.U1 = sol.U1;
  ans.V0 = sol.V0;
  ans.C1 = sol.C1;
  ans.v = sol.v;
  const auto sys = collect_system(substitute_ansatz(ode, ans));
  const auto r = evaluate_system(sys, assignment_of(sol));
  return {r[0], r[1], r[2], r[3], r[4]};
}

}  // namespace drp
