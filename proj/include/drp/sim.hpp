#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "drp/error.hpp"
#include "drp/modeq.hpp"
#include "drp/stencil.hpp"
#include "drp/wave.hpp"

namespace drp {

/// Periodic uniform grid x_i = i h, i = 0..N-1.
struct Grid1D {
  std::size_t N = 0;
  double h = 1.0;

  double length() const { return static_cast<double>(N) * h; }
  double x(std::size_t i) const { return static_cast<double>(i) * h; }

  void require_compatible(const StencilCoefficients& c) const {
    if (N <= static_cast<std::size_t>(2 * c.m()))
      throw ConfigError("grid needs N > 2m nodes (N = " + std::to_string(N) +
                        ", m = " + std::to_string(c.m()) + ")");
    if (!(h > 0.0)) throw ConfigError("grid spacing h must be positive");
  }
};

struct FieldState {
  std::vector<double> values;
  double t = 0.0;
  long long step_count = 0;

  bool operator==(const FieldState&) const = default;
};

/// Sum with a fixed pairwise tree, so the result does not depend on how the
/// caller partitions work.
template <typename F>
double pairwise_sum(std::size_t first, std::size_t last, F&& term) {
  const std::size_t n = last - first;
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = first; i < last; ++i) s += term(i);
    return s;
  }
  const std::size_t mid = first + n / 2;
  return pairwise_sum(first, mid, term) + pairwise_sum(mid, last, term);
}

inline double mass(std::span<const double> u) {
  return pairwise_sum(0, u.size(), [&](std::size_t i) { return u[i]; });
}

inline double l2_norm(std::span<const double> u) {
  return std::sqrt(pairwise_sum(0, u.size(), [&](std::size_t i) { return u[i] * u[i]; }));
}

/// One step of u_i^{n+1} = u_i^n + (tau/h) sum_{k=-m}^{m} gamma_k u_{i+k}^n.
///
/// Nodes are split across `threads` workers; each node is computed the same
/// way regardless of the split, so results are bit-identical for any count.
inline FieldState step(const FieldState& state, const StencilCoefficients& coeffs,
                       const SchemeParams& params, unsigned threads = 1) {
  const std::size_t n = state.values.size();
  Grid1D{n, params.h}.require_compatible(coeffs);
  const double ratio = params.tau / params.h;
  const int m = coeffs.m();
  const auto& u = state.values;
  FieldState next;
  next.values.resize(n);
  next.t = state.t + params.tau;
  next.step_count = state.step_count + 1;

  auto kernel = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      double s = 0.0;
      for (int k = 1; k <= m; ++k) {
        const std::size_t ip = (i + static_cast<std::size_t>(k)) % n;
        const std::size_t im = (i + n - static_cast<std::size_t>(k)) % n;
        s += coeffs[k] * (u[ip] - u[im]);
      }
      next.values[i] = u[i] + ratio * s;
    }
  };

  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (threads == 1) {
    kernel(0, n);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (n + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t lo = t * chunk;
      const std::size_t hi = std::min(n, lo + chunk);
      if (lo < hi) pool.emplace_back(kernel, lo, hi);
    }
  }

  for (double v : next.values)
    if (!std::isfinite(v))
      throw BlowUpError("non-finite value after step " + std::to_string(next.step_count),
                        next.step_count);
  return next;
}

/// Exact evolution of the linear scheme: DFT, multiply mode p by
/// g(2 pi p / N)^n_steps, inverse DFT. O(N^2).
inline FieldState spectral_oracle(const FieldState& initial, const StencilCoefficients& coeffs,
                                  const SchemeParams& params, long long n_steps) {
  if (n_steps == 0) return initial;
  if (n_steps < 0) throw ConfigError("n_steps must be non-negative");
  const std::size_t n = initial.values.size();
  Grid1D{n, params.h}.require_compatible(coeffs);

  std::vector<std::complex<double>> twiddle(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double ang = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    twiddle[k] = {std::cos(ang), std::sin(ang)};
  }

  std::vector<std::complex<double>> spec(n);
  for (std::size_t p = 0; p < n; ++p) {
    std::complex<double> s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += initial.values[j] * std::conj(twiddle[(j * p) % n]);
    const double zeta = 2.0 * std::numbers::pi * static_cast<double>(p) / static_cast<double>(n);
    const std::complex<double> g = discrete_symbol(coeffs, params, zeta);
    const double steps = static_cast<double>(n_steps);
    spec[p] = s * std::polar(std::pow(std::abs(g), steps), steps * std::arg(g));
  }

  FieldState out;
  out.values.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::complex<double> s = 0.0;
    for (std::size_t p = 0; p < n; ++p) s += spec[p] * twiddle[(j * p) % n];
    out.values[j] = s.real() / static_cast<double>(n);
  }
  out.t = initial.t + static_cast<double>(n_steps) * params.tau;
  out.step_count = initial.step_count + n_steps;
  return out;
}

/// Periodic kink pair: a tanh front at `center` and its mirror image half a
/// period away. With s the wrapped offset from `center` in [-L/2, L/2),
///   u = V0 + U1 tanh(C1 s)            for |s| <= L/4,
///   u = V0 + U1 tanh(C1 (+-L/2 - s))  beyond,
/// so the plateaus sit at V0 +- U1 tanh(C1 L / 4).
inline double mirrored_kink(const KinkSolution& sol, double length, double center, double x) {
  double s = std::fmod(x - center, length);
  if (s < -length / 2.0) s += length;
  if (s >= length / 2.0) s -= length;
  const double q = length / 4.0;
  double arg = s;
  if (s > q) arg = length / 2.0 - s;
  if (s < -q) arg = -length / 2.0 - s;
  return sol.V0 + sol.U1 * std::tanh(sol.C1 * arg);
}

struct InjectResult {
  FieldState state;
  std::optional<std::string> warning;
};

/// Samples the mirrored kink at the nodes (grid x in the kink's nondimensional units).
inline InjectResult inject_kink(const Grid1D& grid, const KinkSolution& sol, double center = 0.0) {
  InjectResult r;
  if (sol.U1 != 0.0 && 1.0 / std::abs(sol.C1) < 4.0 * grid.h)
    r.warning = "unresolved kink: width 1/C1 = " + std::to_string(1.0 / std::abs(sol.C1)) +
                " < 4h = " + std::to_string(4.0 * grid.h);
  r.state.values.resize(grid.N);
  for (std::size_t i = 0; i < grid.N; ++i)
    r.state.values[i] = mirrored_kink(sol, grid.length(), center, grid.x(i));
  return r;
}

/// amplitude * exp(-d^2 / (2 width^2)) with d the wrapped distance to center.
inline FieldState inject_gaussian(const Grid1D& grid, double amplitude, double width,
                                  double center) {
  if (!(width > 0.0)) throw ConfigError("gaussian width must be positive");
  FieldState s;
  s.values.resize(grid.N);
  const double L = grid.length();
  for (std::size_t i = 0; i < grid.N; ++i) {
    double d = std::fmod(grid.x(i) - center, L);
    if (d < -L / 2.0) d += L;
    if (d >= L / 2.0) d -= L;
    s.values[i] = amplitude * std::exp(-0.5 * d * d / (width * width));
  }
  return s;
}

struct SpeedOptions {
  /// Start tracking at the crossing closest to this x; defaults to the first crossing.
  std::optional<double> start_x;
};

struct SpeedMeasurement {
  double speed = 0.0;
  std::vector<double> times;
  std::vector<double> positions;  // unwrapped
};

namespace detail {

struct Crossing {
  double x;
  int orientation;  // +1 rising, -1 falling
};

inline std::vector<Crossing> level_crossings(std::span<const double> u, double h, double level) {
  std::vector<Crossing> out;
  const std::size_t n = u.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double a = u[i] - level;
    const double b = u[(i + 1) % n] - level;
    if (a == b) continue;
    if ((a <= 0.0 && b > 0.0) || (a >= 0.0 && b < 0.0)) {
      const double frac = a / (a - b);
      out.push_back({(static_cast<double>(i) + frac) * h, b > a ? 1 : -1});
    }
  }
  return out;
}

}  // namespace detail

/// Level-crossing front tracking with periodic unwrapping and a least-squares
/// line fit of position against time. The search window (a quarter period)
/// keeps the tracker off the mirror front.
inline SpeedMeasurement measure_speed(const std::vector<FieldState>& history, double h,
                                      double level, const SpeedOptions& opts = {}) {
  SpeedMeasurement out;
  if (history.empty()) throw LostFrontError("empty history");
  const double L = static_cast<double>(history.front().values.size()) * h;
  const double window = L / 4.0;

  auto first = detail::level_crossings(history.front().values, h, level);
  if (first.empty()) {
    // A field that never crosses the level (e.g. constant) has no front to move.
    bool flat = true;
    for (const auto& s : history)
      for (double v : s.values)
        if (v != history.front().values.front()) flat = false;
    if (flat) {
      for (const auto& s : history) {
        out.times.push_back(s.t);
        out.positions.push_back(0.0);
      }
      return out;
    }
    throw LostFrontError("no level crossing in the initial snapshot");
  }
  detail::Crossing cur = first.front();
  if (opts.start_x) {
    double best = 1e300;
    for (const auto& c : first) {
      double d = std::abs(std::remainder(c.x - *opts.start_x, L));
      if (d < best) {
        best = d;
        cur = c;
      }
    }
  }
  const int orientation = cur.orientation;
  double unwrapped = cur.x;
  out.times.push_back(history.front().t);
  out.positions.push_back(unwrapped);

  for (std::size_t s = 1; s < history.size(); ++s) {
    const auto cands = detail::level_crossings(history[s].values, h, level);
    double best = window;
    std::optional<double> step_to;
    for (const auto& c : cands) {
      if (c.orientation != orientation) continue;
      const double d = std::remainder(c.x - cur.x, L);
      if (std::abs(d) <= best) {
        best = std::abs(d);
        step_to = d;
      }
    }
    if (!step_to)
      throw LostFrontError("front lost at t = " + std::to_string(history[s].t));
    unwrapped += *step_to;
    cur.x = std::fmod(cur.x + *step_to + L, L);
    out.times.push_back(history[s].t);
    out.positions.push_back(unwrapped);
  }

  const std::size_t n = out.times.size();
  if (n < 2) return out;
  double tm = 0.0, xm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    tm += out.times[i];
    xm += out.positions[i];
  }
  tm /= static_cast<double>(n);
  xm /= static_cast<double>(n);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    num += (out.times[i] - tm) * (out.positions[i] - xm);
    den += (out.times[i] - tm) * (out.times[i] - tm);
  }
  out.speed = den > 0.0 ? num / den : 0.0;
  return out;
}

struct PersistenceSample {
  double t = 0.0;
  double shape_error = 0.0;
  double shift = 0.0;
};

/// Best-fit distance of each snapshot to the (mirrored) kink template,
/// min_s ||u - T(. - s)||_2 / ||T - V0||_2. The shift starts at the circular
/// cross-correlation peak and is refined by golden-section search.
inline std::vector<PersistenceSample> measure_persistence(const std::vector<FieldState>& history,
                                                          const Grid1D& grid,
                                                          const KinkSolution& sol,
                                                          double center = 0.0) {
  const std::size_t n = grid.N;
  const double L = grid.length();
  std::vector<double> tmpl(n);
  for (std::size_t i = 0; i < n; ++i) tmpl[i] = mirrored_kink(sol, L, center, grid.x(i));
  const double denom =
      std::sqrt(pairwise_sum(0, n, [&](std::size_t i) { return (tmpl[i] - sol.V0) * (tmpl[i] - sol.V0); }));
  const double tmean = mass(tmpl) / static_cast<double>(n);

  auto misfit = [&](const std::vector<double>& u, double shift) {
    return std::sqrt(pairwise_sum(0, n, [&](std::size_t i) {
      const double d = u[i] - mirrored_kink(sol, L, center + shift, grid.x(i));
      return d * d;
    }));
  };

  std::vector<PersistenceSample> out;
  for (const auto& snap : history) {
    if (snap.values.size() != n) throw ConfigError("snapshot size does not match grid");
    const double umean = mass(snap.values) / static_cast<double>(n);
    std::size_t best_shift = 0;
    double best_corr = -1e300;
    for (std::size_t s = 0; s < n; ++s) {
      const double c = pairwise_sum(0, n, [&](std::size_t i) {
        return (snap.values[(i + s) % n] - umean) * (tmpl[i] - tmean);
      });
      if (c > best_corr) {
        best_corr = c;
        best_shift = s;
      }
    }
    double lo = (static_cast<double>(best_shift) - 1.0) * grid.h;
    double hi = (static_cast<double>(best_shift) + 1.0) * grid.h;
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = hi - ratio * (hi - lo);
    double b = lo + ratio * (hi - lo);
    double fa = misfit(snap.values, a);
    double fb = misfit(snap.values, b);
    for (int it = 0; it < 80 && hi - lo > 1e-12 * (1.0 + L); ++it) {
      if (fa < fb) {
        hi = b;
        b = a;
        fb = fa;
        a = hi - ratio * (hi - lo);
        fa = misfit(snap.values, a);
      } else {
        lo = a;
        a = b;
        fa = fb;
        b = lo + ratio * (hi - lo);
        fb = misfit(snap.values, b);
      }
    }
    double shift = 0.5 * (lo + hi);
    double err = misfit(snap.values, shift);
    // Golden-section can miss an exact integer optimum by rounding; keep the peak if better.
    const double at_peak = misfit(snap.values, static_cast<double>(best_shift) * grid.h);
    if (at_peak <= err) {
      err = at_peak;
      shift = static_cast<double>(best_shift) * grid.h;
    }
    shift = std::remainder(shift, L);
    out.push_back({snap.t, denom > 0.0 ? err / denom : err, shift});
  }
  return out;
}

}  // namespace drp
