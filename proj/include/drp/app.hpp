#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "drp/error.hpp"
#include "drp/io.hpp"
#include "drp/modeq.hpp"
#include "drp/sim.hpp"
#include "drp/solve.hpp"
#include "drp/stencil.hpp"
#include "drp/wave.hpp"

namespace drp::app {

/// Every knob any subcommand reads. Commands ignore what they do not use.
struct RunConfig {
  int m = 1;
  // Any two of (sigma, tau) with c and h fix the third.
  std::optional<double> sigma;
  std::optional<double> tau;
  double c = 1.0;
  double h = 1.0;
  double mu = 1.0;
  double re_h = 1.0;
  int p = 2;
  int q = 1;
  int samples = 181;
  double C = 1.0;
  double C1 = 1.0;
  double V0 = 0.0;
  bool verify = false;
  int xi_samples = 41;
  double xi_max = 10.0;
  std::size_t N = 256;
  long long steps = 200;
  long long snapshot_every = 10;
  std::string init = "kink";
  double amplitude = 1.0;
  double width = 16.0;
  std::optional<double> center;
  bool oracle = false;
  unsigned threads = 1;

  double center_or_default() const {
    return center ? *center : static_cast<double>(N) * h / 4.0;
  }

  /// Resolves sigma = c tau / h and builds the scheme parameters.
  SchemeParams scheme() const {
    if (!(c > 0.0) || !(h > 0.0)) throw ConfigError("c and h must be strictly positive");
    double s = 1.0;
    if (sigma && tau) {
      s = *sigma;
      const double implied = c * *tau / h;
      if (std::abs(implied - s) > 1e-12 * std::max(1.0, std::abs(s)))
        throw ConfigError("inconsistent sigma and tau: sigma = " + format_double(s) +
                          " but c*tau/h = " + format_double(implied));
    } else if (sigma) {
      s = *sigma;
    } else if (tau) {
      s = c * *tau / h;
    }
    return SchemeParams::from_nondimensional(s, mu, re_h, h, c);
  }

  void validate() const {
    if (m < 1 || m > kMaxHalfWidth)
      throw ConfigError("m must be in [1, " + std::to_string(kMaxHalfWidth) + "]");
    (void)scheme();
    if (samples < 2) throw ConfigError("samples must be >= 2");
    if (xi_samples < 1) throw ConfigError("xi-samples must be >= 1");
    if (steps < 0 || snapshot_every < 1) throw ConfigError("steps >= 0 and snapshot-every >= 1");
    if (init != "kink" && init != "gaussian" && init != "constant")
      throw ConfigError("init must be one of kink, gaussian, constant");
    if (threads < 1) throw ConfigError("threads must be >= 1");
  }

  json to_json() const {
    const SchemeParams sp = scheme();
    json j{{"m", m},
           {"sigma", sp.sigma},
           {"tau", sp.tau},
           {"c", c},
           {"h", h},
           {"mu", mu},
           {"Re_h", re_h},
           {"p", p},
           {"q", q},
           {"samples", samples},
           {"C", C},
           {"C1", C1},
           {"V0", V0},
           {"verify", verify},
           {"xi_samples", xi_samples},
           {"xi_max", xi_max},
           {"N", N},
           {"steps", steps},
           {"snapshot_every", snapshot_every},
           {"init", init},
           {"amplitude", amplitude},
           {"width", width},
           {"center", center_or_default()},
           {"oracle", oracle}};
    return j;
  }
};

// --- coeffs --------------------------------------------------------------------

inline json coeffs_artifact(const RunConfig& cfg) {
  const StencilCoefficients c = optimize_coefficients(cfg.m);
  json j = to_json(c);
  j["E"] = integrated_error(c);
  j["E_closed_form"] = integrated_error_closed_form(c);
  j["normal_residual"] = normal_residual(c);
  j["config"] = cfg.to_json();
  return j;
}

// --- dispersion ----------------------------------------------------------------

inline void write_dispersion_csv(std::ostream& os, const std::vector<DispersionSample>& rows) {
  os << "zeta,lambda_bar_h,error\n";
  for (const auto& r : rows)
    os << format_double(r.zeta) << "," << format_double(r.lambda_bar_h) << ","
       << format_double(r.error) << "\n";
}

inline json dispersion_summary(const StencilCoefficients& c, int samples) {
  const auto rows = dispersion_samples(c, samples);
  double max_err = 0.0;
  for (const auto& r : rows) max_err = std::max(max_err, std::abs(r.error));
  // Is |error| nondecreasing over the outer tenth on each side?
  const std::size_t tail = std::max<std::size_t>(2, rows.size() / 10);
  bool monotone = true;
  for (std::size_t i = rows.size() - tail; i + 1 < rows.size(); ++i)
    if (std::abs(rows[i + 1].error) < std::abs(rows[i].error)) monotone = false;
  for (std::size_t i = 0; i + 1 < tail; ++i)
    if (std::abs(rows[i].error) < std::abs(rows[i + 1].error)) monotone = false;
  return json{{"samples", samples},
              {"max_abs_error", max_err},
              {"error_at_minus_half_pi", rows.front().error},
              {"error_at_plus_half_pi", rows.back().error},
              {"edge_error_monotone", monotone}};
}

// --- modified ------------------------------------------------------------------

inline json modified_artifact(const RunConfig& cfg) {
  const SchemeParams sp = cfg.scheme();
  const StencilCoefficients c = optimize_coefficients(cfg.m);
  const DifferentialApproximation da = taylor_expand_scheme(c, sp, cfg.p, cfg.q);
  json j{{"dimensional", to_json(da)}};
  try {
    j["nondimensional"] = to_json(nondimensionalize(da, sp));
  } catch (const TruncationMismatch& e) {
    j["nondimensional"] = nullptr;
    j["nondimensional_error"] = e.what();
  }
  j["scheme"] = to_json(sp);
  j["config"] = cfg.to_json();
  return j;
}

// --- soliton -------------------------------------------------------------------

inline std::vector<double> xi_grid(int count, double xi_max) {
  std::vector<double> xs;
  if (count == 1) return {0.0};
  for (int i = 0; i < count; ++i)
    xs.push_back(-xi_max + 2.0 * xi_max * static_cast<double>(i) / static_cast<double>(count - 1));
  return xs;
}

inline json equations_json(const std::vector<Polynomial>& sys) {
  json eq = json::array();
  for (const auto& p : sys) eq.push_back(p.to_string() + " = 0");
  return eq;
}

inline json soliton_artifact(const RunConfig& cfg) {
  const SchemeParams sp = cfg.scheme();
  const StencilCoefficients c = optimize_coefficients(cfg.m);
  const DifferentialApproximation nd = nondimensionalize(taylor_expand_scheme(c, sp, 2, 1), sp);
  const KinkSolution kink = paper_solution(sp, c, cfg.C, cfg.C1, cfg.V0);
  const TravelingWaveODE ode = reduce_to_ode(nd, sp, kink.v, cfg.C);

  json profile = json::array();
  const auto xs = xi_grid(cfg.xi_samples, cfg.xi_max);
  const auto rs = residual(ode, kink, xs);
  for (std::size_t i = 0; i < xs.size(); ++i) profile.push_back({{"xi", xs[i]}, {"r", rs[i]}});

  json j{{"A", ode.A},
         {"kink", to_json(kink)},
         {"kink_canonical", to_json(kink.canonical())},
         {"ode", to_json(ode)},
         {"residual_profile", profile}};

  if (cfg.verify) {
    const PrintedSystemCheck chk = verify_printed_system(sp, c, cfg.C, cfg.C1, cfg.V0);
    const auto printed = printed_system(ode.A, sp.sigma, cfg.C1);
    SolveOptions pinC;
    pinC.pins[Unknown::C] = cfg.C;
    j["printed_system"] = {{"equations", equations_json(printed)},
                           {"residuals", chk.residuals},
                           {"consistent", chk.consistent},
                           {"solutions", to_json(solve_system(printed, pinC))}};

    HyperbolicAnsatz ans;
    ans.U1 = kink.U1;
    ans.V0 = kink.V0;
    ans.C1 = kink.C1;
    ans.v = kink.v;
    const auto derived = collect_system(substitute_ansatz(ode, ans));
    const auto dres = derived_residuals(sp, c, kink);
    bool dok = true;
    for (double r : dres)
      if (!(std::abs(r) <= 1e-10)) dok = false;
    j["derived_system"] = {{"equations", equations_json(derived)},
                           {"residuals", dres},
                           {"consistent", dok},
                           {"solutions", to_json(solve_system(derived, pinC))}};
  }
  j["config"] = cfg.to_json();
  return j;
}

// --- simulate ------------------------------------------------------------------

struct SimulationResult {
  Grid1D grid;
  std::vector<FieldState> history;
  json measurement;
};

/// Phase speed of mode zeta in x per unit time; negative means leftward,
/// which is what the scheme's sign convention gives for positive sum k gamma_k.
inline double symbol_phase_speed(const StencilCoefficients& c, const SchemeParams& sp,
                                 double zeta) {
  return -std::arg(discrete_symbol(c, sp, zeta)) * sp.h / (zeta * sp.tau);
}

inline SimulationResult run_simulation(const RunConfig& cfg) {
  cfg.validate();
  const SchemeParams sp = cfg.scheme();
  const StencilCoefficients c = optimize_coefficients(cfg.m);
  SimulationResult res;
  res.grid = Grid1D{cfg.N, sp.h};
  res.grid.require_compatible(c);
  const double center = cfg.center_or_default();

  std::optional<KinkSolution> kink;
  json warnings = json::array();
  try {
    kink = paper_solution(sp, c, cfg.C, cfg.C1, cfg.V0);
  } catch (const Error& e) {
    warnings.push_back(e.what());
  }

  FieldState init;
  if (cfg.init == "kink") {
    if (!kink) throw NumericalError("kink initial data needs a defined closed-form kink");
    auto inj = inject_kink(res.grid, *kink, center);
    if (inj.warning) warnings.push_back(*inj.warning);
    init = std::move(inj.state);
  } else if (cfg.init == "gaussian") {
    init = inject_gaussian(res.grid, cfg.amplitude, cfg.width, center);
  } else {
    init.values.assign(cfg.N, cfg.V0);
  }

  const double zeta1 = 2.0 * std::numbers::pi / static_cast<double>(cfg.N);
  const double sym_speed = symbol_phase_speed(c, sp, zeta1);

  long long max_steps = cfg.steps;
  std::string stopped = "completed";
  if (cfg.init == "kink" && sym_speed != 0.0) {
    const auto horizon = static_cast<long long>(std::floor(
        static_cast<double>(cfg.N) * sp.h / (4.0 * std::abs(sym_speed) * sp.tau)));
    if (horizon < max_steps) {
      max_steps = horizon;
      stopped = "horizon_guard";
    }
  }

  const double norm0 = l2_norm(init.values);
  res.history.push_back(init);
  FieldState cur = init;
  for (long long n = 1; n <= max_steps; ++n) {
    cur = cfg.oracle ? spectral_oracle(init, c, sp, n) : step(cur, c, sp, cfg.threads);
    const bool guard = norm0 > 0.0 && l2_norm(cur.values) > 1e3 * norm0;
    if (n % cfg.snapshot_every == 0 || n == max_steps || guard) res.history.push_back(cur);
    if (guard) {
      stopped = "norm_growth_guard";
      break;
    }
  }

  json norms = json::array(), masses = json::array(), times = json::array();
  for (const auto& s : res.history) {
    norms.push_back(l2_norm(s.values));
    masses.push_back(mass(s.values));
    times.push_back(s.t);
  }

  json shape = json::array(), shifts = json::array();
  if (kink && kink->U1 != 0.0) {
    for (const auto& ps : measure_persistence(res.history, res.grid, *kink, center)) {
      shape.push_back(ps.shape_error);
      shifts.push_back(ps.shift);
    }
  }

  double measured_phys = 0.0;
  json measured = nullptr, measured_nd = nullptr;
  if (cfg.init != "constant") {
    double level = 0.0;
    SpeedOptions opts;
    if (cfg.init == "kink") {
      level = kink->V0;
      opts.start_x = center;
    } else {
      level = 0.5 * cfg.amplitude;
      opts.start_x = center - cfg.width * std::sqrt(2.0 * std::log(2.0));
    }
    try {
      measured_phys = measure_speed(res.history, sp.h, level, opts).speed;
      measured = measured_phys;
      measured_nd = measured_phys * sp.tau0 / sp.h0;
    } catch (const LostFrontError& e) {
      warnings.push_back(std::string("speed: ") + e.what());
    }
  } else {
    measured = 0.0;
    measured_nd = 0.0;
  }

  res.measurement = json{
      {"init", cfg.init},
      {"predicted_v", kink ? json(kink->v) : json(nullptr)},
      {"measured_v", measured_nd},
      {"measured_v_physical", measured},
      {"symbol_phase_speed", sym_speed},
      {"times", times},
      {"shape_error_series", shape},
      {"shift_series", shifts},
      {"norm_series", norms},
      {"mass_series", masses},
      {"steps_run", res.history.back().step_count},
      {"stopped_reason", stopped},
      {"warnings", warnings},
      {"config", cfg.to_json()},
  };
  return res;
}

/// <dir>/<prefix>_<step>.csv for each snapshot; returns the paths written.
inline std::vector<std::filesystem::path> write_snapshots(const SimulationResult& res,
                                                          const std::filesystem::path& dir,
                                                          const std::string& prefix) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> out;
  for (const auto& s : res.history) {
    char name[64];
    std::snprintf(name, sizeof name, "%s_%06lld.csv", prefix.c_str(), s.step_count);
    const auto path = dir / name;
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot write " + path.string());
    write_snapshot_csv(os, s, res.grid);
    out.push_back(path);
  }
  return out;
}

// --- report --------------------------------------------------------------------

inline json report_artifact(const RunConfig& cfg) {
  RunConfig with_verify = cfg;
  with_verify.verify = true;
  const StencilCoefficients c = optimize_coefficients(cfg.m);

  json coeffs = to_json(c);
  coeffs["E"] = integrated_error(c);
  coeffs["E_closed_form"] = integrated_error_closed_form(c);
  coeffs["normal_residual"] = normal_residual(c);

  json modified = modified_artifact(cfg);
  modified.erase("config");
  json soliton = soliton_artifact(with_verify);
  soliton.erase("config");
  json sim;
  try {
    sim = run_simulation(cfg).measurement;
    sim.erase("config");
  } catch (const NumericalError& e) {
    sim = json{{"error", e.what()}};
  }
  return json{{"coefficients", coeffs},
              {"dispersion", dispersion_summary(c, cfg.samples)},
              {"modified_equation", modified},
              {"soliton", soliton},
              {"simulation", sim},
              {"config", cfg.to_json()}};
}

/// Writes JSON with a trailing newline.
inline void write_json(const std::filesystem::path& path, const json& j) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write " + path.string());
  os << j.dump(2) << "\n";
}

}  // namespace drp::app
