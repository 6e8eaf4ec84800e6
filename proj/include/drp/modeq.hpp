#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <complex>
#include <map>
#include <string>

#include "drp/error.hpp"
#include "drp/stencil.hpp"

namespace drp {

/// Physical and numerical parameters of a DRP run.
///
/// Construct through one of the factories; they derive the dependent
/// quantities (sigma, U0, Re_h or tau, tau0) so the invariants hold.
struct SchemeParams {
  double c = 1.0;
  double mu = 1.0;
  double tau = 1.0;
  double h = 1.0;
  double sigma = 1.0;
  double U0 = 1.0;
  double tau0 = 1.0;
  double h0 = 1.0;
  double Re_h = 1.0;

  /// From the dimensionless triple (sigma, mu, Re_h) with h = h0.
  static SchemeParams from_nondimensional(double sigma, double mu, double re_h, double h = 1.0,
                                          double c = 1.0) {
    require_positive(sigma, "sigma");
    require_positive(mu, "mu");
    require_positive(re_h, "Re_h");
    require_positive(h, "h");
    require_positive(c, "c");
    SchemeParams p;
    p.c = c;
    p.mu = mu;
    p.h = h;
    p.h0 = h;
    p.sigma = sigma;
    p.tau = sigma * h / c;
    p.Re_h = re_h;
    p.U0 = re_h * mu / h;
    p.tau0 = p.h0 / p.U0;
    return p;
  }

  /// From dimensional inputs; sigma, U0 and Re_h are derived.
  static SchemeParams from_dimensional(double c, double mu, double tau, double h, double h0,
                                       double tau0) {
    require_positive(c, "c");
    require_positive(mu, "mu");
    require_positive(tau, "tau");
    require_positive(h, "h");
    require_positive(h0, "h0");
    require_positive(tau0, "tau0");
    SchemeParams p;
    p.c = c;
    p.mu = mu;
    p.tau = tau;
    p.h = h;
    p.h0 = h0;
    p.tau0 = tau0;
    p.sigma = c * tau / h;
    p.U0 = h0 / tau0;
    p.Re_h = p.U0 * h / mu;
    return p;
  }

  /// Throws ConfigError unless every invariant holds to 1e-14 (relative).
  void validate() const {
    for (auto [v, name] : {std::pair{c, "c"}, {mu, "mu"}, {tau, "tau"}, {h, "h"}, {sigma, "sigma"},
                           {U0, "U0"}, {tau0, "tau0"}, {h0, "h0"}, {Re_h, "Re_h"}})
      require_positive(v, name);
    auto close = [](double a, double b) { return std::abs(a - b) <= 1e-14 * std::max(1.0, std::abs(b)); };
    if (!close(sigma, c * tau / h)) throw ConfigError("sigma != c*tau/h");
    if (!close(U0, h0 / tau0)) throw ConfigError("U0 != h0/tau0");
    if (!close(Re_h, U0 * h / mu)) throw ConfigError("Re_h != U0*h/mu");
  }

 private:
  static void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw ConfigError(std::string(name) + " must be finite and strictly positive");
  }
};

/// Derivative signature: order in t and order in x.
struct Signature {
  int time = 0;
  int space = 0;
  auto operator<=>(const Signature&) const = default;
};

/// Coefficient table of a modified equation: sum over terms of coeff * d^s_t d^r_x u = 0.
struct DifferentialApproximation {
  std::map<Signature, double> terms;
  int p = 0;  // time order kept
  int q = 0;  // space order kept

  double at(Signature s) const {
    const auto it = terms.find(s);
    return it == terms.end() ? 0.0 : it->second;
  }
  bool contains(Signature s) const { return terms.contains(s); }
  bool operator==(const DifferentialApproximation&) const = default;
};

namespace detail {

inline double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace detail

/// Taylor expansion of the forward-Euler DRP scheme to time order p and space order q.
///
/// Time terms are -tau^{s-1}/s!, space terms tau h^{r-1}/r! * sum_k k^r gamma_k.
/// Even space orders vanish by antisymmetry and are left out of the table.
inline DifferentialApproximation taylor_expand_scheme(const StencilCoefficients& coeffs,
                                                      const SchemeParams& params, int p, int q) {
  if (p < 1 || p > 6) throw ConfigError("time truncation p must be in [1, 6]");
  if (q < 1 || q > 12) throw ConfigError("space truncation q must be in [1, 12]");
  DifferentialApproximation da;
  da.p = p;
  da.q = q;
  for (int s = 1; s <= p; ++s)
    da.terms[{s, 0}] = -std::pow(params.tau, s - 1) / detail::factorial(s);
  for (int r = 1; r <= q; r += 2) {
    const double coef =
        params.tau * std::pow(params.h, r - 1) / detail::factorial(r) * coeffs.moment(r);
    if (coef != 0.0) da.terms[{0, r}] = coef;
  }
  return da;
}

/// Rescale the first differential approximation to nondimensional form:
/// -u_t - (sigma/2) u_tt + (2 sigma / (mu Re_h)) sum_{k>=1} k gamma_k u_x = 0.
///
/// Only the terms u_t, u_tt and u_x are accepted.
inline DifferentialApproximation nondimensionalize(const DifferentialApproximation& da,
                                                   const SchemeParams& params) {
  for (const auto& [sig, coef] : da.terms) {
    const bool allowed = sig == Signature{1, 0} || sig == Signature{2, 0} || sig == Signature{0, 1};
    if (!allowed)
      throw TruncationMismatch("term d^" + std::to_string(sig.time) + "_t d^" +
                               std::to_string(sig.space) +
                               "_x is outside the first differential approximation");
  }
  DifferentialApproximation out;
  out.p = da.p;
  out.q = da.q;
  const double time_scale = params.sigma / params.tau;
  for (const auto& [sig, coef] : da.terms) {
    double v = coef;
    if (sig == Signature{2, 0}) v = coef * time_scale;
    if (sig == Signature{0, 1}) v = coef * time_scale / (params.mu * params.Re_h);
    out.terms[sig] = v;
  }
  return out;
}

/// Advection coefficient A = (2 sigma / (mu Re_h)) sum_{k=1}^m k gamma_k.
inline double advection_coefficient(const StencilCoefficients& coeffs,
                                    const SchemeParams& params) {
  return 2.0 * params.sigma / (params.mu * params.Re_h) * coeffs.first_moment_half();
}

/// Per-step amplification factor g(zeta) = 1 + 2j (tau/h) sum_k gamma_k sin(k zeta).
inline std::complex<double> discrete_symbol(const StencilCoefficients& coeffs,
                                            const SchemeParams& params, double zeta) {
  return {1.0, params.tau / params.h * effective_wavenumber(coeffs, zeta)};
}

}  // namespace drp
