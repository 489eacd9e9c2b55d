#pragma once

// Quasi-Hermitian operators: <A xi, G eta> = <G xi, A eta> for a metric G.
// Everything here is dense and bounded; G and G^-1 are both bounded, so the
// strict and plain notions coincide and the G-adjoint has the closed form
// G^-1 S^* G.

#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "metriclat/metric.hpp"
#include "metriclat/similarity.hpp"

namespace metriclat {

struct QuasiHermReport {
  double qh_residual = 0.0;           // basis-pairing defect, op-norm of the assembled defect / ||GA||
  double ga_symmetry_residual = 0.0;  // ||GA - (GA)^*|| / ||GA||
  bool strict = false;                // A -| A^* via G
  double strict_residual = 0.0;
  double k_hermiticity = 0.0;         // for K = G^1/2 A G^-1/2
  double kappa = 1.0;                 // cond(G)
  bool verdict = false;               // qh_residual <= tol
  bool ga_verdict = false;
  bool k_verdict = false;
  std::string note;
};

namespace detail {

struct MetricHalves {
  Matrix g, half, inv_half, inv;
  double kappa;
};

inline MetricHalves halves(const MetricOperator& g, bool with_inverse = true) {
  MetricHalves h;
  h.g = g.matrix();
  if (g.is_diagonal()) {
    const RealVector d = g.diagonal_values();
    h.half = d.cwiseSqrt().cast<complex>().asDiagonal();
    h.inv_half = d.cwiseSqrt().cwiseInverse().cast<complex>().asDiagonal();
    h.inv = d.cwiseInverse().cast<complex>().asDiagonal();
    h.kappa = d.maxCoeff() / d.minCoeff();
    return h;
  }
  const HermitianEig e = eigh(h.g);
  require_positive(e, default_pd_tol, "metric");
  h.half = spectral_apply(e, [](double x) { return std::sqrt(x); });
  h.inv_half = spectral_apply(e, [](double x) { return 1.0 / std::sqrt(x); });
  if (with_inverse) h.inv = spectral_apply(e, [](double x) { return 1.0 / x; });
  h.kappa = e.values(e.values.size() - 1) / e.values(0);
  return h;
}

}  // namespace detail

inline QuasiHermReport is_quasi_hermitian(const Matrix& a, const MetricOperator& g, double tol) {
  require_square(a, "is_quasi_hermitian");
  require_same_dim(a.rows(), g.dim(), "is_quasi_hermitian");
  const Index n = a.rows();
  const detail::MetricHalves h = detail::halves(g);
  const Matrix ga = h.g * a;
  const double nga = op_norm(ga);
  const double scale = nga > 0 ? nga : 1.0;

  // Pairing route: D(j, i) = <A e_i, G e_j> - <G e_i, A e_j>.
  Matrix d(n, n);
  for (Index i = 0; i < n; ++i) {
    const Vector ae = a.col(i), ge = h.g.col(i);
    for (Index j = 0; j < n; ++j) d(j, i) = inner(ae, h.g.col(j)) - inner(ge, a.col(j));
  }

  QuasiHermReport r;
  r.qh_residual = op_norm(d) / scale;
  r.ga_symmetry_residual = op_norm(ga - ga.adjoint()) / scale;
  const auto strict = check_intertwining(a, a.adjoint(), h.g, tol);
  r.strict_residual = strict.residual;
  r.strict = strict.residual <= tol;
  r.k_hermiticity = hermitian_deviation(h.half * a * h.inv_half);
  r.kappa = h.kappa;
  r.verdict = r.qh_residual <= tol;
  r.ga_verdict = r.ga_symmetry_residual <= tol;
  r.k_verdict = r.k_hermiticity <= tol;
  r.note = "G and G^-1 bounded: strict quasi-Hermiticity is the same condition as the plain one";
  return r;
}

/// S^# = G^-1 S^* G, the adjoint of S in H(G).
inline Matrix g_adjoint(const Matrix& s, const MetricOperator& g, double kappa_max = default_kappa_max) {
  require_square(s, "g_adjoint");
  require_same_dim(s.rows(), g.dim(), "g_adjoint");
  const double kappa = metric_condition(g);
  if (kappa > kappa_max)
    throw error(error_kind::ill_conditioned_metric, "g_adjoint: cond(G) = " + std::to_string(kappa));
  const Matrix gm = g.matrix();
  return Eigen::LLT<Matrix>(gm).solve(s.adjoint() * gm);
}

struct Symmetrized {
  Matrix k;                // G^1/2 A G^-1/2
  double kappa;            // cond(G)
  double k_hermiticity;    // ||K - K^*|| / ||K||
  double qh_residual;      // ||GA - A^*G|| / ||GA||
  double amplification;    // bound constant: k_hermiticity <= amplification * qh_residual
};

inline Symmetrized symmetrize(const Matrix& a, const MetricOperator& g) {
  require_square(a, "symmetrize");
  require_same_dim(a.rows(), g.dim(), "symmetrize");
  const detail::MetricHalves h = detail::halves(g, false);
  Symmetrized s;
  s.k = h.half * a * h.inv_half;
  s.kappa = h.kappa;
  s.k_hermiticity = hermitian_deviation(s.k);
  const Matrix ga = h.g * a;
  const double nga = op_norm(ga);
  s.qh_residual = nga > 0 ? op_norm(ga - ga.adjoint()) / nga : 0.0;
  // K - K^* = G^-1/2 (GA - A^*G) G^-1/2 and ||GA|| <= ||G^1/2|| ||K|| ||G^1/2||.
  s.amplification = h.kappa;
  return s;
}

struct ChainReport {
  double intertwining_residual;  // ||(A^*G - GA) V|| / ||GA V||
  double k_hermiticity;          // ||(K - K^*) W|| / ||K W||, W = G^1/2 V
  double g_selfadjoint_residual; // ||(A - A^#) V|| / ||A V||
  double kappa;
  bool verdict_intertwining, verdict_k, verdict_g;
  bool agree() const { return verdict_intertwining == verdict_k && verdict_k == verdict_g; }
};

/// The three faces of self-adjointness in H(G). With a probe V the residuals
/// are measured on span(V) only, which is how truncated discretizations of
/// unbounded operators are judged.
inline ChainReport quasi_selfadjoint_chain(const Matrix& a, const MetricOperator& g, double tol,
                                           const std::optional<Matrix>& probe = std::nullopt) {
  require_square(a, "quasi_selfadjoint_chain");
  require_same_dim(a.rows(), g.dim(), "quasi_selfadjoint_chain");
  const detail::MetricHalves h = detail::halves(g);
  const Index n = a.rows();
  const Matrix v = probe ? *probe : Matrix::Identity(n, n);
  require_same_dim(v.rows(), n, "quasi_selfadjoint_chain: probe");
  auto rel = [](const Matrix& num, const Matrix& den) {
    const double d = op_norm(den);
    return d > 0 ? op_norm(num) / d : op_norm(num);
  };
  const Matrix gav = h.g * (a * v);
  const Matrix k = h.half * a * h.inv_half;
  const Matrix w = h.half * v;
  const Matrix a_sharp = h.inv * a.adjoint() * h.g;

  ChainReport c;
  c.intertwining_residual = rel(a.adjoint() * (h.g * v) - gav, gav);
  c.k_hermiticity = rel((k - k.adjoint()) * w, k * w);
  c.g_selfadjoint_residual = rel((a - a_sharp) * v, a * v);
  c.kappa = h.kappa;
  c.verdict_intertwining = c.intertwining_residual <= tol;
  c.verdict_k = c.k_hermiticity <= tol;
  c.verdict_g = c.g_selfadjoint_residual <= tol;
  return c;
}

struct SpectralFamily {
  std::vector<double> grid;
  std::vector<Matrix> x;           // X(lambda_k) = G^-1/2 E(lambda_k) G^1/2
  Matrix reconstruction;           // sum_k lambda_k (X(lambda_k) - X(lambda_{k-1}))
  double reconstruction_residual;  // ||reconstruction - A|| / ||A||
  bool eigenvalues_on_grid;        // every eigenvalue of K sits on a grid point

  void write_csv(std::ostream& out) const {
    out.precision(17);
    out << "lambda,norm,trace\n";
    for (std::size_t k = 0; k < grid.size(); ++k)
      out << grid[k] << ',' << op_norm(x[k]) << ',' << x[k].trace().real() << '\n';
  }
};

/// Generalized spectral family. Eigenvalues mu of K enter E(lambda) when
/// mu <= lambda + 1e-12, so a point within 1e-12 of a grid value belongs to
/// the cell ending there.
inline SpectralFamily spectral_family(const Matrix& a, const MetricOperator& g, std::vector<double> grid,
                                      double tol = 1e-9) {
  if (grid.empty()) throw error(error_kind::parameter_domain, "spectral_family: empty grid");
  for (std::size_t k = 1; k < grid.size(); ++k)
    if (!(grid[k] > grid[k - 1]))
      throw error(error_kind::parameter_domain, "spectral_family: grid must be strictly increasing");
  const Symmetrized s = symmetrize(a, g);
  if (s.k_hermiticity > tol)
    throw error(error_kind::not_quasi_self_adjoint,
                "spectral_family: K deviates from Hermitian by " + std::to_string(s.k_hermiticity));
  const detail::MetricHalves h = detail::halves(g, false);
  const HermitianEig e = eigh(s.k, std::numeric_limits<double>::infinity());
  const Index n = a.rows();
  constexpr double snap = 1e-12;

  SpectralFamily f;
  f.grid = grid;
  f.reconstruction = Matrix::Zero(n, n);
  f.eigenvalues_on_grid = true;
  for (Index j = 0; j < n; ++j) {
    const double mu = e.values(j);
    bool hit = false;
    for (double l : grid) hit = hit || std::abs(mu - l) <= snap * std::max(1.0, std::abs(l));
    f.eigenvalues_on_grid = f.eigenvalues_on_grid && hit;
  }
  Matrix prev = Matrix::Zero(n, n);
  for (double l : grid) {
    Index count = 0;
    while (count < n && e.values(count) <= l + snap * std::max(1.0, std::abs(l))) ++count;
    Matrix xl;
    if (count == 0) {
      xl = Matrix::Zero(n, n);
    } else if (count == n) {
      xl = Matrix::Identity(n, n);
    } else {
      const Matrix u = e.vectors.leftCols(count);
      xl = h.inv_half * (u * u.adjoint()) * h.half;
    }
    f.reconstruction += l * (xl - prev);
    prev = xl;
    f.x.push_back(std::move(xl));
  }
  const double na = op_norm(a);
  f.reconstruction_residual = op_norm(f.reconstruction - a) / (na > 0 ? na : 1.0);
  return f;
}

struct PhysicalHamiltonian {
  Matrix h;  // W H W^-1
  Matrix w;  // G^1/2, unitary from H(G) onto H
  double hermiticity;
};

inline PhysicalHamiltonian physical_hamiltonian(const Matrix& hm, const MetricOperator& g, double tol) {
  const QuasiHermReport r = is_quasi_hermitian(hm, g, tol);
  if (!r.verdict)
    throw error(error_kind::not_quasi_hermitian,
                "physical_hamiltonian: residual " + std::to_string(r.qh_residual));
  const detail::MetricHalves h = detail::halves(g, false);
  PhysicalHamiltonian p{h.half * hm * h.inv_half, h.half, 0.0};
  p.hermiticity = hermitian_deviation(p.h);
  return p;
}

}  // namespace metriclat
