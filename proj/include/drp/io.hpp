#pragma once

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "drp/error.hpp"
#include "drp/modeq.hpp"
#include "drp/sim.hpp"
#include "drp/solve.hpp"
#include "drp/stencil.hpp"
#include "drp/wave.hpp"

namespace drp {

using json = nlohmann::ordered_json;

/// Shortest text that parses back to the same double (17 significant digits).
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// --- snapshots ---------------------------------------------------------------

/// `# t=<time> N=<N> h=<h>` followed by one `index,x,u` row per node.
inline void write_snapshot_csv(std::ostream& os, const FieldState& s, const Grid1D& grid) {
  os << "# t=" << format_double(s.t) << " N=" << grid.N << " h=" << format_double(grid.h)
     << "\n";
  for (std::size_t i = 0; i < s.values.size(); ++i)
    os << i << "," << format_double(grid.x(i)) << "," << format_double(s.values[i]) << "\n";
}

struct Snapshot {
  FieldState state;
  Grid1D grid;
};

inline Snapshot read_snapshot_csv(std::istream& is) {
  Snapshot snap;
  std::string line;
  if (!std::getline(is, line) || line.rfind("# t=", 0) != 0)
    throw ConfigError("snapshot CSV: missing '# t=' header");
  {
    double t = 0.0, h = 0.0;
    unsigned long long n = 0;
    if (std::sscanf(line.c_str(), "# t=%lf N=%llu h=%lf", &t, &n, &h) != 3)
      throw ConfigError("snapshot CSV: malformed header '" + line + "'");
    snap.state.t = t;
    snap.grid = Grid1D{static_cast<std::size_t>(n), h};
  }
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string idx, x, u;
    if (!std::getline(row, idx, ',') || !std::getline(row, x, ',') || !std::getline(row, u))
      throw ConfigError("snapshot CSV: malformed row '" + line + "'");
    snap.state.values.push_back(std::stod(u));
  }
  if (snap.state.values.size() != snap.grid.N)
    throw ConfigError("snapshot CSV: row count does not match N");
  return snap;
}

// --- JSON --------------------------------------------------------------------

inline json to_json(const StencilCoefficients& c) {
  return json{{"m", c.m()}, {"gamma", std::vector<double>(c.gamma().begin(), c.gamma().end())}};
}

inline StencilCoefficients stencil_from_json(const json& j) {
  return StencilCoefficients(j.at("m").get<int>(), j.at("gamma").get<std::vector<double>>());
}

inline json to_json(const DifferentialApproximation& da) {
  json terms = json::array();
  for (const auto& [sig, coef] : da.terms)
    terms.push_back({{"time", sig.time}, {"space", sig.space}, {"coef", coef}});
  return json{{"p", da.p}, {"q", da.q}, {"terms", terms}};
}

inline DifferentialApproximation differential_from_json(const json& j) {
  DifferentialApproximation da;
  da.p = j.at("p").get<int>();
  da.q = j.at("q").get<int>();
  for (const auto& t : j.at("terms"))
    da.terms[{t.at("time").get<int>(), t.at("space").get<int>()}] = t.at("coef").get<double>();
  return da;
}

inline json to_json(const KinkSolution& k) {
  return json{{"U1", k.U1}, {"V0", k.V0}, {"C1", k.C1}, {"v", k.v}, {"C", k.C}};
}

inline KinkSolution kink_from_json(const json& j) {
  KinkSolution k;
  k.U1 = j.at("U1").get<double>();
  k.V0 = j.at("V0").get<double>();
  k.C1 = j.at("C1").get<double>();
  k.v = j.at("v").get<double>();
  k.C = j.at("C").get<double>();
  return k;
}

inline json to_json(const SchemeParams& p) {
  return json{{"c", p.c},       {"mu", p.mu}, {"tau", p.tau}, {"h", p.h},      {"sigma", p.sigma},
              {"U0", p.U0},     {"tau0", p.tau0}, {"h0", p.h0}, {"Re_h", p.Re_h}};
}

inline SchemeParams scheme_from_json(const json& j) {
  SchemeParams p;
  p.c = j.at("c").get<double>();
  p.mu = j.at("mu").get<double>();
  p.tau = j.at("tau").get<double>();
  p.h = j.at("h").get<double>();
  p.sigma = j.at("sigma").get<double>();
  p.U0 = j.at("U0").get<double>();
  p.tau0 = j.at("tau0").get<double>();
  p.h0 = j.at("h0").get<double>();
  p.Re_h = j.at("Re_h").get<double>();
  return p;
}

inline json to_json(const TravelingWaveODE& o) {
  return json{{"a0", o.a0}, {"a1", o.a1}, {"rhs", o.rhs}, {"v", o.v}, {"A", o.A}, {"sigma", o.sigma}};
}

inline json to_json(const SolutionSet& set) {
  json branches = json::array();
  for (const auto& b : set.branches) {
    json fixed = json::object();
    for (const auto& [u, val] : b.fixed) fixed[std::string(name(u))] = val;
    json free = json::array();
    for (Unknown u : b.free) free.push_back(std::string(name(u)));
    branches.push_back({{"description", b.describe()},
                        {"fixed", fixed},
                        {"free", free},
                        {"excluded", b.excluded},
                        {"removable", b.removable},
                        {"constant_only", b.constant_only()}});
  }
  return json{{"summary", set.summary()},
              {"has_nontrivial_branch", set.has_nontrivial_branch()},
              {"branches", branches}};
}

}  // namespace drp
