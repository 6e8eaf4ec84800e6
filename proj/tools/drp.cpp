// drp: command-line front end for the DRP stencil / modified-equation /
// traveling-wave toolkit. Exit codes: 0 ok, 2 configuration error,
// 3 numerical failure.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "drp/app.hpp"

namespace {

namespace fs = std::filesystem;
using drp::app::RunConfig;

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

void add_scheme_options(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--m", cfg.m, "stencil half-width")->check(CLI::Range(1, drp::kMaxHalfWidth));
  sub->add_option("--sigma", cfg.sigma, "CFL number c*tau/h");
  sub->add_option("--tau", cfg.tau, "time step");
  sub->add_option("--c", cfg.c, "advection constant")->check(CLI::PositiveNumber);
  sub->add_option("--spacing", cfg.h, "mesh size h")->check(CLI::PositiveNumber);
  sub->add_option("--mu", cfg.mu, "viscosity")->check(CLI::PositiveNumber);
  sub->add_option("--re-h", cfg.re_h, "mesh Reynolds number")->check(CLI::PositiveNumber);
}

void add_wave_options(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--C", cfg.C, "integration constant");
  sub->add_option("--C1", cfg.C1, "inverse kink width (nonzero)");
  sub->add_option("--V0", cfg.V0, "kink offset");
}

fs::path resolve(const fs::path& out_dir, const std::string& file) {
  const fs::path p(file);
  return p.is_absolute() ? p : out_dir / p;
}

void print_json(const drp::json& j) { std::cout << j.dump(2) << "\n"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DRP stencil optimisation, modified-equation and spurious-wave toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "INI config file; command-line flags override it");

  RunConfig cfg;
  std::string out_dir = ".";
  app.add_option("--out-dir", out_dir, "directory for relative output paths")
      ->envname("DRP_OUTPUT_DIR");

  std::string json_out;
  std::string csv_out;
  std::string prefix = "snapshot";

  auto* coeffs = app.add_subcommand("coeffs", "optimal DRP stencil weights and integrated error");
  coeffs->add_option("--m", cfg.m, "stencil half-width")->check(CLI::Range(1, drp::kMaxHalfWidth));
  coeffs->add_option("--json", json_out, "write {m, gamma, E} JSON here");

  auto* disp = app.add_subcommand("dispersion", "effective wavenumber table over [-pi/2, pi/2]");
  disp->add_option("--m", cfg.m, "stencil half-width")->check(CLI::Range(1, drp::kMaxHalfWidth));
  disp->add_option("--samples", cfg.samples, "number of zeta samples")->check(CLI::Range(2, 1 << 20));
  disp->add_option("--csv", csv_out, "write CSV here instead of stdout");

  auto* modified = app.add_subcommand("modified", "modified equation before/after scaling");
  add_scheme_options(modified, cfg);
  modified->add_option("--p", cfg.p, "time truncation order")->check(CLI::Range(1, 6));
  modified->add_option("--q", cfg.q, "space truncation order")->check(CLI::Range(1, 12));
  modified->add_option("--json", json_out, "write JSON here");

  auto* soliton = app.add_subcommand("soliton", "closed-form kink and its residual audit");
  add_scheme_options(soliton, cfg);
  add_wave_options(soliton, cfg);
  soliton->add_flag("--verify", cfg.verify, "include printed/derived system residual blocks");
  soliton->add_option("--xi-samples", cfg.xi_samples, "residual profile samples");
  soliton->add_option("--xi-max", cfg.xi_max, "residual profile half-range");
  soliton->add_option("--json", json_out, "write JSON here");

  auto* simulate = app.add_subcommand("simulate", "run the discrete scheme and measure fronts");
  add_scheme_options(simulate, cfg);
  add_wave_options(simulate, cfg);
  simulate->add_option("--N", cfg.N, "grid nodes")->check(CLI::Range(4, 1 << 16));
  simulate->add_option("--steps", cfg.steps, "time steps");
  simulate->add_option("--snapshot-every", cfg.snapshot_every, "snapshot cadence");
  simulate->add_option("--init", cfg.init, "kink | gaussian | constant")
      ->check(CLI::IsMember({"kink", "gaussian", "constant"}));
  simulate->add_option("--amplitude", cfg.amplitude, "gaussian amplitude");
  simulate->add_option("--width", cfg.width, "gaussian width")->check(CLI::PositiveNumber);
  simulate->add_option("--center", cfg.center, "initial front/pulse position");
  simulate->add_flag("--oracle", cfg.oracle, "evolve with the spectral oracle instead of stepping");
  simulate->add_option("--threads", cfg.threads, "worker threads for stepping")
      ->check(CLI::Range(1u, 256u));
  simulate->add_option("--prefix", prefix, "snapshot file prefix");
  simulate->add_option("--json", json_out, "measurement JSON path");

  auto* report = app.add_subcommand("report", "bundle every analysis into one JSON");
  add_scheme_options(report, cfg);
  add_wave_options(report, cfg);
  report->add_option("--samples", cfg.samples, "dispersion samples")->check(CLI::Range(2, 1 << 20));
  report->add_option("--N", cfg.N, "grid nodes")->check(CLI::Range(4, 1 << 16));
  report->add_option("--steps", cfg.steps, "time steps");
  report->add_option("--snapshot-every", cfg.snapshot_every, "snapshot cadence");
  report->add_option("--init", cfg.init, "kink | gaussian | constant")
      ->check(CLI::IsMember({"kink", "gaussian", "constant"}));
  report->add_option("--amplitude", cfg.amplitude, "gaussian amplitude");
  report->add_option("--width", cfg.width, "gaussian width")->check(CLI::PositiveNumber);
  report->add_option("--threads", cfg.threads, "worker threads for stepping")
      ->check(CLI::Range(1u, 256u));
  report->add_option("--json", json_out, "write report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  const fs::path out(out_dir);
  try {
    cfg.validate();
    if (*coeffs) {
      const drp::json j = drp::app::coeffs_artifact(cfg);
      std::printf("%3s  %24s\n", "k", "gamma_k");
      for (int k = 1; k <= cfg.m; ++k)
        std::printf("%3d  %24.17g\n", k, j["gamma"][static_cast<std::size_t>(k - 1)].get<double>());
      std::printf("E = %.17g\n", j["E"].get<double>());
      if (!json_out.empty()) drp::app::write_json(resolve(out, json_out), j);
    } else if (*disp) {
      const auto rows = drp::dispersion_samples(drp::optimize_coefficients(cfg.m), cfg.samples);
      if (csv_out.empty()) {
        drp::app::write_dispersion_csv(std::cout, rows);
      } else {
        const fs::path path = resolve(out, csv_out);
        if (path.has_parent_path()) fs::create_directories(path.parent_path());
        std::ofstream os(path);
        if (!os) throw drp::ConfigError("cannot write " + path.string());
        drp::app::write_dispersion_csv(os, rows);
      }
    } else if (*modified) {
      const drp::json j = drp::app::modified_artifact(cfg);
      if (json_out.empty()) print_json(j);
      else drp::app::write_json(resolve(out, json_out), j);
    } else if (*soliton) {
      const drp::json j = drp::app::soliton_artifact(cfg);
      if (json_out.empty()) print_json(j);
      else drp::app::write_json(resolve(out, json_out), j);
    } else if (*simulate) {
      const auto res = drp::app::run_simulation(cfg);
      drp::app::write_snapshots(res, out, prefix);
      const fs::path path = resolve(out, json_out.empty() ? prefix + "_measurement.json" : json_out);
      drp::app::write_json(path, res.measurement);
      std::printf("steps_run = %lld (%s)\n", res.measurement["steps_run"].get<long long>(),
                  res.measurement["stopped_reason"].get<std::string>().c_str());
    } else if (*report) {
      const drp::json j = drp::app::report_artifact(cfg);
      if (json_out.empty()) print_json(j);
      else drp::app::write_json(resolve(out, json_out), j);
    }
  } catch (const drp::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const drp::TruncationMismatch& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const drp::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return 0;
}
