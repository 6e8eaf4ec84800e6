#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "drp/error.hpp"

namespace drp {

/// Unknowns of the traveling-wave coefficient system.
enum class Unknown : std::uint8_t { U1 = 0, V1, V0, v, C };

inline constexpr std::size_t kUnknownCount = 5;
inline constexpr std::array<Unknown, kUnknownCount> kAllUnknowns{Unknown::U1, Unknown::V1,
                                                                 Unknown::V0, Unknown::v,
                                                                 Unknown::C};

inline std::string_view name(Unknown u) {
  static constexpr std::array<std::string_view, kUnknownCount> names{"U1", "V1", "V0", "v", "C"};
  return names[static_cast<std::size_t>(u)];
}

inline std::optional<Unknown> unknown_from_name(std::string_view s) {
  for (Unknown u : kAllUnknowns)
    if (name(u) == s) return u;
  return std::nullopt;
}

/// Values for (a subset of) the unknowns, indexed by Unknown.
using Assignment = std::array<double, kUnknownCount>;

inline double& at(Assignment& a, Unknown u) { return a[static_cast<std::size_t>(u)]; }
inline double at(const Assignment& a, Unknown u) { return a[static_cast<std::size_t>(u)]; }

/// Exponent vector of a monomial.
using Monomial = std::array<std::uint8_t, kUnknownCount>;

/// Sparse multivariate polynomial with real coefficients over the five unknowns.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(double constant) {
    if (constant != 0.0) terms_[Monomial{}] = constant;
  }

  static Polynomial var(Unknown u, double coef = 1.0) {
    Polynomial p;
    Monomial mono{};
    mono[static_cast<std::size_t>(u)] = 1;
    if (coef != 0.0) p.terms_[mono] = coef;
    return p;
  }

  const std::map<Monomial, double>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  double coefficient(const Monomial& m) const {
    const auto it = terms_.find(m);
    return it == terms_.end() ? 0.0 : it->second;
  }

  int total_degree() const {
    int d = 0;
    for (const auto& [m, c] : terms_) {
      int s = 0;
      for (auto e : m) s += e;
      d = std::max(d, s);
    }
    return d;
  }

  int degree_in(Unknown u) const {
    int d = 0;
    for (const auto& [m, c] : terms_) d = std::max<int>(d, m[static_cast<std::size_t>(u)]);
    return d;
  }

  bool depends_on(Unknown u) const { return degree_in(u) > 0; }

  double evaluate(const Assignment& a) const {
    double s = 0.0;
    for (const auto& [m, c] : terms_) {
      double t = c;
      for (std::size_t i = 0; i < kUnknownCount; ++i)
        for (int e = 0; e < m[i]; ++e) t *= a[i];
      s += t;
    }
    return s;
  }

  /// Replace unknown u by a number.
  Polynomial substitute(Unknown u, double value) const {
    Polynomial out;
    const auto idx = static_cast<std::size_t>(u);
    for (const auto& [m, c] : terms_) {
      Monomial reduced = m;
      reduced[idx] = 0;
      out.add_term(reduced, c * std::pow(value, m[idx]));
    }
    return out;
  }

  /// Drop coefficients with |c| <= tol.
  Polynomial trimmed(double tol) const {
    Polynomial out;
    for (const auto& [m, c] : terms_)
      if (std::abs(c) > tol) out.terms_[m] = c;
    return out;
  }

  double max_abs_coefficient() const {
    double s = 0.0;
    for (const auto& [m, c] : terms_) s = std::max(s, std::abs(c));
    return s;
  }

  Polynomial& operator+=(const Polynomial& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  Polynomial& operator*=(double s) {
    if (s == 0.0) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, c] : terms_) c *= s;
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator-(Polynomial a) { return a *= -1.0; }
  friend Polynomial operator*(Polynomial a, double s) { return a *= s; }
  friend Polynomial operator*(double s, Polynomial a) { return a *= s; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial out;
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) {
        Monomial m{};
        for (std::size_t i = 0; i < kUnknownCount; ++i)
          m[i] = static_cast<std::uint8_t>(ma[i] + mb[i]);
        out.add_term(m, ca * cb);
      }
    return out;
  }

  bool operator==(const Polynomial&) const = default;

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    os.precision(17);
    bool first = true;
    // Highest total degree first reads more naturally.
    std::vector<std::pair<Monomial, double>> ordered(terms_.begin(), terms_.end());
    std::stable_sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
      int da = 0, db = 0;
      for (auto e : a.first) da += e;
      for (auto e : b.first) db += e;
      return da > db;
    });
    for (const auto& [m, c] : ordered) {
      const bool constant = m == Monomial{};
      double mag = c;
      if (!first) {
        os << (c < 0 ? " - " : " + ");
        mag = std::abs(c);
      }
      if (constant || std::abs(mag) != 1.0) {
        os << mag;
        if (!constant) os << "*";
      } else if (mag < 0.0) {
        os << "-";
      }
      bool first_factor = true;
      for (std::size_t i = 0; i < kUnknownCount; ++i) {
        if (m[i] == 0) continue;
        if (!first_factor) os << "*";
        os << name(static_cast<Unknown>(i));
        if (m[i] > 1) os << "^" << static_cast<int>(m[i]);
        first_factor = false;
      }
      first = false;
    }
    return os.str();
  }

 private:
  void add_term(const Monomial& m, double c) {
    if (c == 0.0) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0.0) terms_.erase(it);
    }
  }

  std::map<Monomial, double> terms_;
};

/// Dense univariate polynomial, coefficient i multiplies y^i.
class UniPoly {
 public:
  UniPoly() = default;
  explicit UniPoly(double constant) {
    if (constant != 0.0) c_.push_back(constant);
  }
  explicit UniPoly(std::vector<double> coeffs) : c_(std::move(coeffs)) { normalize(); }

  const std::vector<double>& coefficients() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_constant() const { return c_.size() <= 1; }
  double constant() const { return c_.empty() ? 0.0 : c_[0]; }

  double operator()(double y) const {
    double s = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) s = s * y + *it;
    return s;
  }

  double max_abs_coefficient() const {
    double s = 0.0;
    for (double v : c_) s = std::max(s, std::abs(v));
    return s;
  }

  UniPoly trimmed(double tol) const {
    std::vector<double> c = c_;
    for (double& v : c)
      if (std::abs(v) <= tol) v = 0.0;
    return UniPoly(std::move(c));
  }

  friend UniPoly operator+(const UniPoly& a, const UniPoly& b) {
    std::vector<double> c(std::max(a.c_.size(), b.c_.size()), 0.0);
    for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
    return UniPoly(std::move(c));
  }
  friend UniPoly operator-(const UniPoly& a, const UniPoly& b) {
    std::vector<double> c(std::max(a.c_.size(), b.c_.size()), 0.0);
    for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] -= b.c_[i];
    return UniPoly(std::move(c));
  }
  friend UniPoly operator*(const UniPoly& a, const UniPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<double> c(a.c_.size() + b.c_.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return UniPoly(std::move(c));
  }

  /// Real roots, ascending, with duplicates merged.
  std::vector<double> real_roots() const;

  std::string to_string(std::string_view var) const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    os.precision(17);
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
      const double v = c_[static_cast<std::size_t>(i)];
      if (v == 0.0) continue;
      if (!first) os << (v < 0 ? " - " : " + ");
      const double mag = first ? v : std::abs(v);
      if (i == 0 || std::abs(mag) != 1.0) {
        os << mag;
        if (i > 0) os << "*";
      } else if (mag < 0) {
        os << "-";
      }
      if (i > 0) os << var;
      if (i > 1) os << "^" << i;
      first = false;
    }
    return os.str();
  }

 private:
  void normalize() {
    while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
  }
  std::vector<double> c_;
};

inline std::vector<double> UniPoly::real_roots() const {
  std::vector<double> roots;
  const int n = degree();
  if (n < 1) return roots;
  if (n == 1) {
    roots.push_back(-c_[0] / c_[1]);
    return roots;
  }
  if (n == 2) {
    const double a = c_[2], b = c_[1], c = c_[0];
    const double disc = b * b - 4.0 * a * c;
    const double scale = std::max({b * b, std::abs(4.0 * a * c), 1e-300});
    if (disc < -1e-14 * scale) return roots;
    const double sq = disc > 0.0 ? std::sqrt(disc) : 0.0;
    const double qv = -0.5 * (b + std::copysign(sq, b));
    if (qv == 0.0) {
      roots.push_back(0.0);
      return roots;
    }
    roots.push_back(qv / a);
    roots.push_back(c / qv);
  } else {
    // Companion matrix eigenvalues, then Newton polish on the real ones.
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) comp(i, n - 1) = -c_[static_cast<std::size_t>(i)] / c_[static_cast<std::size_t>(n)];
    const Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
    for (int i = 0; i < n; ++i) {
      const std::complex<double> z = es.eigenvalues()(i);
      if (std::abs(z.imag()) > 1e-8 * (1.0 + std::abs(z.real()))) continue;
      double x = z.real();
      for (int it = 0; it < 8; ++it) {
        double p = 0.0, dp = 0.0;
        for (int k = n; k >= 0; --k) {
          dp = dp * x + p;
          p = p * x + c_[static_cast<std::size_t>(k)];
        }
        if (dp == 0.0) break;
        const double step = p / dp;
        x -= step;
        if (std::abs(step) <= 1e-16 * (1.0 + std::abs(x))) break;
      }
      roots.push_back(x);
    }
  }
  std::sort(roots.begin(), roots.end());
  std::vector<double> merged;
  for (double r : roots)
    if (merged.empty() || std::abs(r - merged.back()) > 1e-12 * (1.0 + std::abs(r)))
      merged.push_back(r);
  return merged;
}

}  // namespace drp
