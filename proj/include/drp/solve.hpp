#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "drp/error.hpp"
#include "drp/poly.hpp"

namespace drp {

/// One dependent unknown of a branch:
/// pivot(y) * x + sum coupling_j(y) * x_j = rhs(y), solved for x.
struct PivotRow {
  Unknown unknown;
  UniPoly pivot;
  std::vector<std::pair<Unknown, UniPoly>> coupling;
  UniPoly rhs;
};

/// A parameterised family of solutions.
///
/// `fixed` unknowns take a single value, `free` ones are arbitrary, and the
/// `dependent` ones follow by back-substitution. When `parameter` is set, the
/// row polynomials are in that (free) unknown and it must avoid `excluded`.
struct SolutionBranch {
  std::map<Unknown, double> fixed;
  std::vector<Unknown> free;
  std::optional<Unknown> parameter;
  std::vector<double> excluded;
  // Parameter values where the row formulas are 0/0 but the family extends continuously.
  std::vector<double> removable;
  std::vector<PivotRow> dependent;

  Assignment evaluate(const std::map<Unknown, double>& free_values) const {
    Assignment a{};
    for (const auto& [u, val] : fixed) at(a, u) = val;
    for (Unknown u : free) {
      const auto it = free_values.find(u);
      if (it == free_values.end())
        throw ConfigError("missing value for free unknown " + std::string(name(u)));
      at(a, u) = it->second;
    }
    const double y = parameter ? at(a, *parameter) : 0.0;
    for (auto row = dependent.rbegin(); row != dependent.rend(); ++row) {
      double s = row->rhs(y);
      for (const auto& [u, poly] : row->coupling) s -= poly(y) * at(a, u);
      at(a, row->unknown) = s / row->pivot(y);
    }
    return a;
  }

  /// Random draw of the free unknowns (parameter kept away from excluded points).
  std::map<Unknown, double> sample_free(std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    std::map<Unknown, double> vals;
    for (Unknown u : free) {
      double x = dist(rng);
      if (parameter && u == *parameter) {
        auto too_close = [&](double cand) {
          auto near = [&](double e) { return std::abs(cand - e) < 1e-3 * (1.0 + std::abs(e)); };
          return std::any_of(excluded.begin(), excluded.end(), near) ||
                 std::any_of(removable.begin(), removable.end(), near);
        };
        while (too_close(x)) x = dist(rng);
      }
      vals[u] = x;
    }
    return vals;
  }

  bool is_free(Unknown u) const { return std::find(free.begin(), free.end(), u) != free.end(); }

  /// True when U1 and V1 vanish on the whole branch (constant waveforms only).
  bool constant_only() const {
    if (is_free(Unknown::U1) || is_free(Unknown::V1)) return false;
    std::mt19937_64 rng(0x5eed);
    for (int i = 0; i < 8; ++i) {
      const auto vals = sample_free(rng);
      const Assignment a = evaluate(vals);
      // A dependent value counts as zero when it is rounding noise relative to
      // the terms it was computed from.
      const double y = parameter ? at(a, *parameter) : 0.0;
      for (const auto& row : dependent) {
        if (row.unknown != Unknown::U1 && row.unknown != Unknown::V1) continue;
        double scale = std::abs(row.rhs(y));
        for (const auto& [u, poly] : row.coupling) scale += std::abs(poly(y) * at(a, u));
        scale /= std::abs(row.pivot(y));
        if (std::abs(at(a, row.unknown)) > 1e-9 * scale + 1e-300) return false;
      }
      for (const auto& [u, val] : fixed)
        if ((u == Unknown::U1 || u == Unknown::V1) && std::abs(val) > 1e-12) return false;
    }
    return true;
  }

  std::string describe() const {
    std::ostringstream os;
    os.precision(17);
    const std::string var = parameter ? std::string(name(*parameter)) : "y";
    bool first = true;
    auto sep = [&] {
      if (!first) os << "; ";
      first = false;
    };
    for (const auto& [u, val] : fixed) {
      sep();
      os << name(u) << " = " << val;
    }
    for (const auto& row : dependent) {
      sep();
      os << name(row.unknown) << " = ";
      if (row.coupling.empty() && row.rhs.is_zero()) {
        os << 0;
        continue;
      }
      const bool simple = row.coupling.empty() && row.pivot.is_constant() && row.rhs.is_constant();
      if (simple) {
        os << row.rhs.constant() / row.pivot.constant();
        continue;
      }
      os << "(" << row.rhs.to_string(var);
      for (const auto& [u, poly] : row.coupling)
        os << " - (" << poly.to_string(var) << ")*" << name(u);
      os << ") / (" << row.pivot.to_string(var) << ")";
    }
    for (Unknown u : free) {
      sep();
      os << name(u) << " free";
    }
    if (parameter && !excluded.empty()) {
      os << " [" << var << " not in {";
      for (std::size_t i = 0; i < excluded.size(); ++i) os << (i ? ", " : "") << excluded[i];
      os << "}]";
    }
    if (parameter && !removable.empty()) {
      os << " [continuous extension at " << var << " in {";
      for (std::size_t i = 0; i < removable.size(); ++i) os << (i ? ", " : "") << removable[i];
      os << "}]";
    }
    return os.str();
  }
};

struct SolutionSet {
  std::vector<SolutionBranch> branches;

  bool has_nontrivial_branch() const {
    return std::any_of(branches.begin(), branches.end(),
                       [](const SolutionBranch& b) { return !b.constant_only(); });
  }

  std::string summary() const {
    if (branches.empty()) return "inconsistent: no solution";
    if (!has_nontrivial_branch()) return "no nontrivial branch (constant solutions only)";
    return "nontrivial branch present";
  }
};

struct SolveOptions {
  /// Unknowns replaced by numbers before solving.
  std::map<Unknown, double> pins;
  /// Relative threshold below which eliminated coefficients count as zero.
  double tolerance = 1e-10;
};

namespace detail {

struct LinearRow {
  std::vector<UniPoly> coef;
  UniPoly rhs;
};

inline double row_scale(const LinearRow& r) {
  double s = r.rhs.max_abs_coefficient();
  for (const auto& c : r.coef) s = std::max(s, c.max_abs_coefficient());
  return s;
}

inline bool near_any(double x, const std::vector<double>& xs) {
  return std::any_of(xs.begin(), xs.end(), [&](double e) {
    return std::abs(x - e) <= 1e-9 * (1.0 + std::abs(e));
  });
}

// Solve the purely numeric system obtained at parameter value y.
inline std::optional<SolutionBranch> numeric_branch(const std::vector<LinearRow>& rows,
                                                    const std::vector<Unknown>& cols,
                                                    std::optional<Unknown> param, double y,
                                                    const std::map<Unknown, double>& pins,
                                                    double tol) {
  const std::size_t n = cols.size();
  std::vector<std::vector<double>> a;
  std::vector<double> b;
  double scale = 0.0;
  for (const auto& r : rows) {
    std::vector<double> row(n);
    for (std::size_t j = 0; j < n; ++j) {
      row[j] = r.coef[j](y);
      scale = std::max(scale, std::abs(row[j]));
    }
    a.push_back(std::move(row));
    b.push_back(r.rhs(y));
    scale = std::max(scale, std::abs(b.back()));
  }
  const double zero = tol * std::max(1.0, scale);
  std::vector<bool> used(a.size(), false);
  std::vector<std::pair<std::size_t, std::size_t>> pivots;  // (row, col)
  std::vector<Unknown> free;
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t best = a.size();
    double best_abs = zero;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (!used[i] && std::abs(a[i][j]) > best_abs) {
        best = i;
        best_abs = std::abs(a[i][j]);
      }
    if (best == a.size()) {
      free.push_back(cols[j]);
      continue;
    }
    used[best] = true;
    pivots.emplace_back(best, j);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (used[i] || a[i][j] == 0.0) continue;
      const double f = a[i][j] / a[best][j];
      for (std::size_t k = j; k < n; ++k) a[i][k] -= f * a[best][k];
      b[i] -= f * b[best];
      a[i][j] = 0.0;
    }
  }
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!used[i] && std::abs(b[i]) > zero) return std::nullopt;

  SolutionBranch br;
  br.fixed = pins;
  if (param) br.fixed[*param] = y;
  br.free = free;
  for (auto [i, j] : pivots) {
    PivotRow pr{cols[j], UniPoly(a[i][j]), {}, UniPoly(b[i])};
    for (std::size_t k = j + 1; k < n; ++k)
      if (std::abs(a[i][k]) > zero) pr.coupling.emplace_back(cols[k], UniPoly(a[i][k]));
    br.dependent.push_back(std::move(pr));
  }
  return br;
}

// True when the generic branch, approached from both sides of y = r, tends to
// the numeric branch at r (the exclusion at r is removable).
inline bool continuous_at(const SolutionBranch& generic, const SolutionBranch& special,
                          Unknown param, double r) {
  std::vector<Unknown> gen_free;
  for (Unknown u : generic.free)
    if (u != param) gen_free.push_back(u);
  if (gen_free != special.free) return false;
  std::mt19937_64 rng(0xc0ffee);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  const double delta = 1e-6 * (1.0 + std::abs(r));
  for (int trial = 0; trial < 3; ++trial) {
    std::map<Unknown, double> vals;
    for (Unknown u : gen_free) vals[u] = dist(rng);
    const Assignment s = special.evaluate(vals);
    for (double side : {-1.0, 1.0}) {
      auto gv = vals;
      gv[param] = r + side * delta;
      const Assignment g = generic.evaluate(gv);
      for (Unknown u : kAllUnknowns) {
        if (u == param) continue;
        const double ref = at(s, u);
        if (!(std::abs(at(g, u) - ref) <= 1e-4 * (1.0 + std::abs(ref)))) return false;
      }
    }
  }
  return true;
}

}  // namespace detail

/// Exact solution set of a polynomial system that is linear in every unknown
/// except (at most) the wave speed v.
///
/// Case analysis: fraction-free elimination with pivots that are polynomials
/// in v; each real root of a pivot, and of any right-hand side left over once
/// the unknowns are eliminated, is split off and solved as a numeric system.
inline SolutionSet solve_system(const std::vector<Polynomial>& system,
                                const SolveOptions& opts = {}) {
  std::vector<Polynomial> eqs;
  for (Polynomial p : system) {
    for (const auto& [u, val] : opts.pins) p = p.substitute(u, val);
    eqs.push_back(p.trimmed(opts.tolerance * std::max(1.0, p.max_abs_coefficient()) * 1e-3));
  }

  std::vector<Unknown> remaining;
  for (Unknown u : kAllUnknowns)
    if (!opts.pins.contains(u)) remaining.push_back(u);

  auto linear_given = [&](std::optional<Unknown> y) {
    for (const auto& p : eqs)
      for (const auto& [m, c] : p.terms()) {
        int deg = 0;
        for (Unknown u : remaining)
          if (!y || u != *y) deg += m[static_cast<std::size_t>(u)];
        if (deg > 1) return false;
      }
    return true;
  };

  std::optional<Unknown> param;
  if (!opts.pins.contains(Unknown::v) && linear_given(Unknown::v)) {
    param = Unknown::v;
  } else if (!linear_given(std::nullopt)) {
    throw ConfigError("system is not linear in the amplitudes for fixed v; unsupported shape");
  }

  std::vector<Unknown> cols;
  for (Unknown u : remaining)
    if (!param || u != *param) cols.push_back(u);

  std::vector<detail::LinearRow> rows;
  for (const auto& p : eqs) {
    detail::LinearRow r;
    r.coef.assign(cols.size(), UniPoly{});
    std::vector<std::vector<double>> acc(cols.size());
    std::vector<double> rhs;
    auto add = [](std::vector<double>& v, int power, double c) {
      if (v.size() <= static_cast<std::size_t>(power)) v.resize(static_cast<std::size_t>(power) + 1, 0.0);
      v[static_cast<std::size_t>(power)] += c;
    };
    for (const auto& [m, c] : p.terms()) {
      const int power = param ? m[static_cast<std::size_t>(*param)] : 0;
      bool placed = false;
      for (std::size_t j = 0; j < cols.size(); ++j)
        if (m[static_cast<std::size_t>(cols[j])] == 1) {
          add(acc[j], power, c);
          placed = true;
        }
      if (!placed) add(rhs, power, -c);
    }
    for (std::size_t j = 0; j < cols.size(); ++j) r.coef[j] = UniPoly(acc[j]);
    r.rhs = UniPoly(rhs);
    rows.push_back(std::move(r));
  }

  SolutionSet out;
  std::vector<double> split_points;
  std::vector<SolutionBranch> special;
  auto split_at = [&](double y) {
    if (detail::near_any(y, split_points)) return;
    split_points.push_back(y);
    if (auto br = detail::numeric_branch(rows, cols, param, y, opts.pins, opts.tolerance))
      special.push_back(std::move(*br));
  };

  // Generic elimination over polynomials in the parameter.
  std::vector<detail::LinearRow> work = rows;
  std::vector<bool> used(work.size(), false);
  std::vector<std::pair<std::size_t, std::size_t>> pivots;
  std::vector<Unknown> free_cols;
  for (std::size_t j = 0; j < cols.size(); ++j) {
    std::size_t best = work.size();
    for (std::size_t i = 0; i < work.size(); ++i) {
      if (used[i] || work[i].coef[j].is_zero()) continue;
      if (best == work.size() || work[i].coef[j].degree() < work[best].coef[j].degree()) best = i;
    }
    if (best == work.size()) {
      free_cols.push_back(cols[j]);
      continue;
    }
    used[best] = true;
    pivots.emplace_back(best, j);
    const UniPoly p = work[best].coef[j];
    if (param && !p.is_constant())
      for (double r : p.real_roots()) split_at(r);
    for (std::size_t i = 0; i < work.size(); ++i) {
      if (used[i] || work[i].coef[j].is_zero()) continue;
      const UniPoly q = work[i].coef[j];
      const double scale = std::max(p.max_abs_coefficient() * detail::row_scale(work[i]),
                                    q.max_abs_coefficient() * detail::row_scale(work[best]));
      const double zero = opts.tolerance * 1e-2 * scale;
      for (std::size_t k = 0; k < cols.size(); ++k)
        work[i].coef[k] = (p * work[i].coef[k] - q * work[best].coef[k]).trimmed(zero);
      work[i].coef[j] = UniPoly{};
      work[i].rhs = (p * work[i].rhs - q * work[best].rhs).trimmed(zero);
    }
  }

  bool generic_ok = true;
  for (std::size_t i = 0; i < work.size(); ++i) {
    if (used[i] || work[i].rhs.is_zero()) continue;
    generic_ok = false;
    if (param && !work[i].rhs.is_constant())
      for (double r : work[i].rhs.real_roots()) split_at(r);
  }

  if (generic_ok) {
    SolutionBranch gen;
    gen.fixed = opts.pins;
    if (param) {
      gen.parameter = param;
      gen.free.push_back(*param);
    }
    gen.free.insert(gen.free.end(), free_cols.begin(), free_cols.end());
    for (auto [i, j] : pivots) {
      PivotRow pr{cols[j], work[i].coef[j], {}, work[i].rhs};
      for (std::size_t k = j + 1; k < cols.size(); ++k)
        if (!work[i].coef[k].is_zero()) pr.coupling.emplace_back(cols[k], work[i].coef[k]);
      gen.dependent.push_back(std::move(pr));
    }
    // Points where the generic family extends continuously need no branch of their own.
    std::vector<SolutionBranch> kept;
    for (auto& s : special) {
      const double r = s.fixed.at(*param);
      if (detail::continuous_at(gen, s, *param, r)) {
        gen.removable.push_back(r);
        continue;
      }
      kept.push_back(std::move(s));
    }
    special = std::move(kept);
    for (double r : split_points)
      if (!detail::near_any(r, gen.removable)) gen.excluded.push_back(r);
    std::sort(gen.excluded.begin(), gen.excluded.end());
    std::sort(gen.removable.begin(), gen.removable.end());
    out.branches.push_back(std::move(gen));
  }
  for (auto& s : special) out.branches.push_back(std::move(s));
  return out;
}

}  // namespace drp
