#pragma once

// Closed-form positive sequences n -> c (1+n)^p e^{qn} and the products of
// finite sums of them. Boundedness of any such sequence is decided exactly
// from its asymptotic class (q, p) compared lexicographically against (0, 0).

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "metriclat/errors.hpp"

namespace metriclat {

/// Exponent comparisons treat |x| <= symbol_eps as zero, absorbing rounding
/// in derived exponents such as 3 * (1/3) - 1.
inline constexpr double symbol_eps = 1e-12;

struct GrowthSymbol {
  double c = 1.0;
  double p = 0.0;
  double q = 0.0;

  double log_at(double n) const { return std::log(c) + p * std::log1p(n) + q * n; }
  double operator()(double n) const { return std::exp(log_at(n)); }

  /// -1, 0, +1 comparing growth classes (q, p) lexicographically.
  friend int compare_growth(const GrowthSymbol& a, const GrowthSymbol& b) {
    if (std::abs(a.q - b.q) > symbol_eps) return a.q < b.q ? -1 : 1;
    if (std::abs(a.p - b.p) > symbol_eps) return a.p < b.p ? -1 : 1;
    return 0;
  }

  bool is_bounded() const {
    return q < -symbol_eps || (std::abs(q) <= symbol_eps && p <= symbol_eps);
  }

  GrowthSymbol pow(double e) const { return {std::pow(c, e), p * e, q * e}; }
  GrowthSymbol inverse() const { return pow(-1.0); }
  friend GrowthSymbol operator*(const GrowthSymbol& a, const GrowthSymbol& b) {
    return {a.c * b.c, a.p + b.p, a.q + b.q};
  }
  friend bool operator==(const GrowthSymbol&, const GrowthSymbol&) = default;
};

inline GrowthSymbol make_symbol(double c, double p, double q) {
  if (!(c > 0.0) || !std::isfinite(c) || !std::isfinite(p) || !std::isfinite(q))
    throw error(error_kind::parameter_domain, "symbol requires c > 0 and finite exponents");
  return {c, p, q};
}

struct SymbolSum {
  std::vector<GrowthSymbol> terms;

  double log_at(double n) const {
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& t : terms) hi = std::max(hi, t.log_at(n));
    double acc = 0.0;
    for (const auto& t : terms) acc += std::exp(t.log_at(n) - hi);
    return hi + std::log(acc);
  }

  /// Dominant term, with coefficients of equally-growing terms added.
  GrowthSymbol dominant() const {
    GrowthSymbol best = terms.front();
    for (std::size_t i = 1; i < terms.size(); ++i) {
      const int cmp = compare_growth(terms[i], best);
      if (cmp > 0)
        best = terms[i];
      else if (cmp == 0)
        best.c += terms[i].c;
    }
    return best;
  }
};

/// monomial * prod_k sums_k^{e_k}; every factor is positive, so the product
/// is asymptotically equivalent (up to bounded factors) to a single
/// GrowthSymbol.
class DiagonalSymbol {
 public:
  DiagonalSymbol() = default;
  DiagonalSymbol(GrowthSymbol g) : monomial_(g) {}  // NOLINT: implicit by design of the grammar

  static DiagonalSymbol sum(std::vector<GrowthSymbol> terms) {
    if (terms.empty()) throw error(error_kind::parameter_domain, "empty symbol sum");
    DiagonalSymbol s;
    if (terms.size() == 1) {
      s.monomial_ = terms.front();
    } else {
      s.monomial_ = {1.0, 0.0, 0.0};
      s.sums_.push_back({SymbolSum{std::move(terms)}, 1.0});
    }
    return s;
  }

  const GrowthSymbol& monomial() const { return monomial_; }
  const std::vector<std::pair<SymbolSum, double>>& sums() const { return sums_; }
  bool is_monomial() const { return sums_.empty(); }

  double log_at(double n) const {
    double acc = monomial_.log_at(n);
    for (const auto& [s, e] : sums_) acc += e * s.log_at(n);
    return acc;
  }
  double operator()(double n) const { return std::exp(log_at(n)); }

  GrowthSymbol asymptotic() const {
    GrowthSymbol a = monomial_;
    for (const auto& [s, e] : sums_) a = a * s.dominant().pow(e);
    return a;
  }

  bool is_bounded() const { return asymptotic().is_bounded(); }

  DiagonalSymbol pow(double e) const {
    DiagonalSymbol out;
    out.monomial_ = monomial_.pow(e);
    for (const auto& [s, k] : sums_)
      if (std::abs(k * e) > 0.0) out.sums_.push_back({s, k * e});
    return out;
  }
  DiagonalSymbol inverse() const { return pow(-1.0); }

  friend DiagonalSymbol operator*(const DiagonalSymbol& a, const DiagonalSymbol& b) {
    DiagonalSymbol out = a;
    out.monomial_ = a.monomial_ * b.monomial_;
    out.sums_.insert(out.sums_.end(), b.sums_.begin(), b.sums_.end());
    return out;
  }

  /// Pointwise sum. Only defined when both sides are themselves plain sums
  /// (a monomial times at most one sum raised to the first power).
  friend DiagonalSymbol operator+(const DiagonalSymbol& a, const DiagonalSymbol& b) {
    std::vector<GrowthSymbol> terms = a.additive_terms();
    const std::vector<GrowthSymbol> more = b.additive_terms();
    terms.insert(terms.end(), more.begin(), more.end());
    return sum(std::move(terms));
  }

  /// Sup over n >= 0. Exact for monomials; for sums, the maximum over
  /// n <= scan_limit combined with the limit at infinity when the class is
  /// (0, 0). Returns +inf for unbounded symbols.
  double sup(int scan_limit = 4096) const {
    const GrowthSymbol a = asymptotic();
    if (!a.is_bounded()) return std::numeric_limits<double>::infinity();
    if (is_monomial()) return monomial_sup(monomial_);
    double best = 0.0;
    for (int n = 0; n <= scan_limit; ++n) best = std::max(best, (*this)(n));
    if (std::abs(a.q) <= symbol_eps && std::abs(a.p) <= symbol_eps) best = std::max(best, a.c);
    return best;
  }

  /// Values at n = 0..count-1.
  std::vector<double> values(int count) const {
    std::vector<double> v(static_cast<std::size_t>(count));
    for (int n = 0; n < count; ++n) v[static_cast<std::size_t>(n)] = (*this)(n);
    return v;
  }

  std::string to_string() const;

 private:
  static double monomial_sup(const GrowthSymbol& m) {
    // f(t) = c t^p e^{q (t - 1)}, t = 1 + n >= 1; critical point t* = -p / q.
    if (m.q < -symbol_eps && m.p > symbol_eps) {
      const double nstar = std::max(0.0, -m.p / m.q - 1.0);
      return std::max({m(std::floor(nstar)), m(std::ceil(nstar)), m(0.0)});
    }
    return m(0.0);
  }

  std::vector<GrowthSymbol> additive_terms() const {
    if (sums_.empty()) return {monomial_};
    if (sums_.size() == 1 && std::abs(sums_.front().second - 1.0) <= symbol_eps) {
      std::vector<GrowthSymbol> out;
      for (const auto& t : sums_.front().first.terms) out.push_back(monomial_ * t);
      return out;
    }
    throw error(error_kind::unsupported,
                "symbol sum of non-additive expressions is outside the grammar");
  }

  GrowthSymbol monomial_{1.0, 0.0, 0.0};
  std::vector<std::pair<SymbolSum, double>> sums_;
};

inline std::string format_symbol(const GrowthSymbol& g) {
  std::ostringstream os;
  os.precision(17);
  os << g.c << ',' << g.p << ',' << g.q;
  return os.str();
}

inline std::string DiagonalSymbol::to_string() const {
  std::string out = format_symbol(monomial_);
  for (const auto& [s, e] : sums_) {
    out += " * (";
    for (std::size_t i = 0; i < s.terms.size(); ++i) {
      if (i) out += " + ";
      out += format_symbol(s.terms[i]);
    }
    std::ostringstream os;
    os.precision(17);
    os << e;
    out += ")^" + os.str();
  }
  return out;
}

/// Parses "c,p,q" or a '+'-separated sum of such triples.
inline DiagonalSymbol parse_symbol(const std::string& text) {
  std::vector<GrowthSymbol> terms;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, '+')) {
    std::stringstream ts(item);
    std::string field;
    std::vector<double> vals;
    while (std::getline(ts, field, ',')) {
      try {
        std::size_t used = 0;
        vals.push_back(std::stod(field, &used));
        if (field.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(field);
      } catch (const std::exception&) {
        throw error(error_kind::parse_error, "bad symbol field '" + field + "'");
      }
    }
    if (vals.size() != 3) throw error(error_kind::parse_error, "symbol term needs c,p,q: '" + item + "'");
    terms.push_back(make_symbol(vals[0], vals[1], vals[2]));
  }
  if (terms.empty()) throw error(error_kind::parse_error, "empty symbol");
  return DiagonalSymbol::sum(std::move(terms));
}

}  // namespace metriclat
