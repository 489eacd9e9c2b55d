#pragma once

// Metric operators (strictly positive Hermitian), in dense form or as a
// diagonal growth symbol carried with an explicit truncation dimension.

#include <cmath>
#include <string>
#include <utility>
#include <variant>

#include "metriclat/opcore.hpp"
#include "metriclat/symbol.hpp"

namespace metriclat {

class MetricOperator {
 public:
  struct Dense {
    Matrix matrix;
  };
  struct Diagonal {
    DiagonalSymbol symbol;
    Index truncation;
  };

  static MetricOperator unchecked_dense(Matrix m) { return MetricOperator(Dense{std::move(m)}); }
  static MetricOperator diagonal(DiagonalSymbol s, Index truncation) {
    if (truncation < 1)
      throw error(error_kind::parameter_domain, "diagonal metric needs truncation >= 1");
    return MetricOperator(Diagonal{std::move(s), truncation});
  }

  bool is_diagonal() const { return std::holds_alternative<Diagonal>(rep_); }

  Index dim() const {
    if (const auto* d = std::get_if<Diagonal>(&rep_)) return d->truncation;
    return std::get<Dense>(rep_).matrix.rows();
  }

  const DiagonalSymbol& symbol() const {
    if (const auto* d = std::get_if<Diagonal>(&rep_)) return d->symbol;
    throw error(error_kind::unsupported, "dense metric has no symbol");
  }

  /// Symbol values g_0..g_{N-1}; only for the diagonal form.
  RealVector diagonal_values() const {
    const auto& d = std::get<Diagonal>(rep_);
    RealVector v(d.truncation);
    for (Index n = 0; n < d.truncation; ++n) v(n) = d.symbol(static_cast<double>(n));
    return v;
  }

  /// Dense matrix; diagonal symbols are materialized at their truncation.
  Matrix matrix() const {
    if (is_diagonal()) return diagonal_values().cast<complex>().asDiagonal();
    return std::get<Dense>(rep_).matrix;
  }

  Vector apply(const Vector& x) const {
    if (is_diagonal()) return diagonal_values().cast<complex>().cwiseProduct(x);
    return std::get<Dense>(rep_).matrix * x;
  }

 private:
  explicit MetricOperator(std::variant<Dense, Diagonal> r) : rep_(std::move(r)) {}
  std::variant<Dense, Diagonal> rep_;
};

/// Validates a matrix as a metric operator.
inline MetricOperator make_metric(const Matrix& m, double herm_tol = default_herm_tol,
                                  double pd_tol = default_pd_tol) {
  const HermitianEig e = eigh(m, herm_tol);
  require_positive(e, pd_tol, "make_metric");
  return MetricOperator::unchecked_dense((m + m.adjoint()) * 0.5);
}

inline MetricOperator make_diagonal_metric(const DiagonalSymbol& s, Index truncation) {
  return MetricOperator::diagonal(s, truncation);
}

inline MetricOperator identity_metric(Index n) {
  return MetricOperator::unchecked_dense(Matrix::Identity(n, n));
}

inline RealVector metric_spectrum(const MetricOperator& g) {
  if (g.is_diagonal()) {
    RealVector v = g.diagonal_values();
    std::sort(v.data(), v.data() + v.size());
    return v;
  }
  return eigh(g.matrix()).values;
}

inline double metric_condition(const MetricOperator& g) {
  const RealVector s = metric_spectrum(g);
  return s(s.size() - 1) / s(0);
}

/// <G xi, eta>.
inline complex g_inner(const MetricOperator& g, const Vector& xi, const Vector& eta) {
  require_same_dim(g.dim(), xi.size(), "g_inner");
  require_same_dim(g.dim(), eta.size(), "g_inner");
  return inner(g.apply(xi), eta);
}

inline double g_norm(const MetricOperator& g, const Vector& xi) {
  return std::sqrt(std::max(0.0, g_inner(g, xi, xi).real()));
}

/// G^alpha. Symbols transform exponent-wise: (c, p, q) -> (c^a, a p, a q).
inline MetricOperator metric_power(const MetricOperator& g, double alpha) {
  if (g.is_diagonal()) return MetricOperator::diagonal(g.symbol().pow(alpha), g.dim());
  return MetricOperator::unchecked_dense(psd_power(g.matrix(), alpha));
}

inline MetricOperator metric_inverse(const MetricOperator& g) { return metric_power(g, -1.0); }

/// <G^{1/2} xi, G^{1/2} eta>; the second evaluation route for g_inner.
inline complex g_inner_half(const MetricOperator& g, const Vector& xi, const Vector& eta) {
  require_same_dim(g.dim(), xi.size(), "g_inner_half");
  require_same_dim(g.dim(), eta.size(), "g_inner_half");
  const MetricOperator h = metric_power(g, 0.5);
  return inner(h.apply(xi), h.apply(eta));
}

/// R_G = I + G; a symbol gains the constant term (1, 0, 0).
inline MetricOperator r_g(const MetricOperator& g) {
  if (g.is_diagonal())
    return MetricOperator::diagonal(g.symbol() + DiagonalSymbol(GrowthSymbol{1.0, 0.0, 0.0}),
                                    g.dim());
  const Index n = g.dim();
  return MetricOperator::unchecked_dense(Matrix::Identity(n, n) + g.matrix());
}

/// A Hilbert space H(G) with its half-power cached.
class WeightedSpace {
 public:
  explicit WeightedSpace(MetricOperator g) : metric_(std::move(g)), half_(metric_power(metric_, 0.5).matrix()) {}

  const MetricOperator& metric() const { return metric_; }
  const Matrix& half() const { return half_; }
  Index dim() const { return metric_.dim(); }

  complex inner_product(const Vector& xi, const Vector& eta) const {
    return inner(half_ * xi, half_ * eta);
  }
  double norm(const Vector& xi) const { return (half_ * xi).norm(); }

 private:
  MetricOperator metric_;
  Matrix half_;
};

}  // namespace metriclat
