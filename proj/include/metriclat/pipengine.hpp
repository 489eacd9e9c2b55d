#pragma once

// Operators on a lattice of weighted spaces: which representatives
// A: H(X) -> H(Y) are bounded, the sets derived from that relation, form
// restrictions to a self-adjoint operator in the central space, and
// semi-similarity couples.

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "metriclat/lattice.hpp"
#include "metriclat/quasiherm.hpp"

namespace metriclat {

struct RepNorm {
  bool bounded = true;
  double norm = 0.0;  // +inf when unbounded
  bool symbolic = false;
};

/// ||Y^1/2 A X^-1/2||, the norm of A as a map H(X) -> H(Y).
inline RepNorm representative_norm(const Matrix& a, const MetricOperator& x, const MetricOperator& y) {
  require_square(a, "representative_norm");
  require_same_dim(a.rows(), x.dim(), "representative_norm: X");
  require_same_dim(a.rows(), y.dim(), "representative_norm: Y");
  const Matrix yh = metric_power(y, 0.5).matrix(), xh = metric_power(x, -0.5).matrix();
  return {true, op_norm(yh * a * xh), false};
}

/// Diagonal operator a_n on diagonal metrics: sup_n y_n^1/2 |a_n| x_n^-1/2,
/// decided exactly from the symbol's growth class.
inline RepNorm representative_norm(const DiagonalSymbol& a, const MetricOperator& x, const MetricOperator& y) {
  if (!x.is_diagonal() || !y.is_diagonal())
    throw error(error_kind::unsupported, "representative_norm: symbolic operator needs diagonal metrics");
  const DiagonalSymbol s = y.symbol().pow(0.5) * a * x.symbol().pow(-0.5);
  if (!s.is_bounded()) return {false, std::numeric_limits<double>::infinity(), true};
  return {true, s.sup(), true};
}

using OperatorArg = std::variant<Matrix, DiagonalSymbol>;

inline RepNorm representative_norm(const OperatorArg& a, const MetricOperator& x, const MetricOperator& y) {
  return std::visit([&](const auto& op) { return representative_norm(op, x, y); }, a);
}

struct OperatorProfile {
  std::vector<std::string> labels;
  std::vector<std::vector<RepNorm>> pairs;  // pairs[r][u]: domain node r, codomain node u
  std::vector<std::size_t> s_set;           // (r, r) admissible
  std::vector<std::size_t> d_set;           // some (r, u) admissible
  std::vector<std::size_t> i_set;           // some (r, u) admissible
  bool d_initial = true;                    // d_set is closed downwards
  bool i_final = true;                      // i_set is closed upwards

  bool admissible(std::size_t r, std::size_t u) const { return pairs[r][u].bounded; }
};

/// Every pairwise verdict over the graph, then the derived sets.
inline OperatorProfile profile(const OperatorArg& a, const LatticeGraph& graph) {
  const auto& nodes = graph.nodes();
  const std::size_t n = nodes.size();
  OperatorProfile p;
  p.pairs.assign(n, std::vector<RepNorm>(n));
  for (std::size_t r = 0; r < n; ++r) {
    p.labels.push_back(nodes[r].label.to_string());
    for (std::size_t u = 0; u < n; ++u) p.pairs[r][u] = representative_norm(a, nodes[r].op, nodes[u].op);
  }
  std::vector<bool> in_d(n, false), in_i(n, false);
  for (std::size_t r = 0; r < n; ++r) {
    if (p.pairs[r][r].bounded) p.s_set.push_back(r);
    for (std::size_t u = 0; u < n; ++u)
      if (p.pairs[r][u].bounded) in_d[r] = in_i[u] = true;
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (in_d[k]) p.d_set.push_back(k);
    if (in_i[k]) p.i_set.push_back(k);
  }
  const auto below = graph.order_closure();
  for (std::size_t q = 0; q < n; ++q)
    for (std::size_t r = 0; r < n; ++r) {
      if (!below[q][r] || q == r) continue;
      if (in_d[r] && !in_d[q]) p.d_initial = false;
      if (in_i[q] && !in_i[r]) p.i_final = false;
    }
  return p;
}

/// Profile of the adjoint, read off by reflection: A^* maps H(Y^-1) to
/// H(X^-1) with the same norm. Nodes without a dual in the graph are left
/// unbounded.
inline OperatorProfile reflect(const OperatorProfile& p, const LatticeGraph& graph) {
  const std::size_t n = p.pairs.size();
  OperatorProfile q;
  q.labels = p.labels;
  q.pairs.assign(n, std::vector<RepNorm>(n, RepNorm{false, std::numeric_limits<double>::infinity(), false}));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t u = 0; u < n; ++u) {
      const auto du = graph.dual_of(u), dr = graph.dual_of(r);
      if (du && dr) q.pairs[*du][*dr] = p.pairs[r][u];
    }
  for (std::size_t r = 0; r < n; ++r)
    if (q.pairs[r][r].bounded) q.s_set.push_back(r);
  return q;
}

/// For every X, Y in s(A) (diagonal symbols), whether X wedge Y and X vee Y
/// are in s(A) as well.
inline bool s_set_lattice_closed(const DiagonalSymbol& a, const LatticeGraph& graph, const OperatorProfile& p) {
  const auto& nodes = graph.nodes();
  // Boundedness only sees the growth class, so each node is replaced by its
  // dominant monomial; sums of monomials always stay symbolic.
  auto leading = [](const MetricOperator& m) {
    return MetricOperator::diagonal(DiagonalSymbol(m.symbol().asymptotic()), m.dim());
  };
  for (std::size_t i : p.s_set)
    for (std::size_t j : p.s_set) {
      const MetricOperator x = leading(nodes[i].op), y = leading(nodes[j].op);
      const MetricOperator w = wedge(x, y), v = vee(x, y);
      if (!representative_norm(a, w, w).bounded || !representative_norm(a, v, v).bounded) return false;
    }
  return true;
}

// ---------------------------------------------------------------------------
// Form restriction

struct FormPair {
  Matrix q;  // form on the small-space basis
  Matrix m;  // Gram matrix of the central space, positive definite
  std::string meta;
};

struct KlmnResult {
  RealVector eigenvalues;  // ascending
  Matrix vectors;          // M-orthonormal columns; empty when not requested
  double probe;
  double certificate;      // min singular value of Q - probe M
  double certificate_threshold;
  double max_imag;         // largest |Im| before the Hermitian solve, always 0 here
};

/// Solves Q v = lambda M v. The probe defaults to (lowest eigenvalue - 1).
inline KlmnResult klmn_restrict(const FormPair& fp, std::optional<double> probe = std::nullopt,
                                double herm_tol = default_herm_tol, bool vectors = true) {
  require_square(fp.q, "klmn_restrict");
  require_same_dim(fp.q.rows(), fp.m.rows(), "klmn_restrict");
  require_finite(fp.q, "klmn_restrict");
  if (hermitian_defect(fp.q) > herm_tol)
    throw error(error_kind::not_symmetric_form, "klmn_restrict: Q is not Hermitian");
  const Matrix m = (fp.m + fp.m.adjoint()) * 0.5;
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success)
    throw error(error_kind::not_positive_definite, "klmn_restrict: M is not positive definite");
  const Index n = m.rows();
  const Matrix l = llt.matrixL();
  const Matrix li = l.triangularView<Eigen::Lower>().solve(Matrix::Identity(n, n));
  Matrix c = li * fp.q * li.adjoint();
  c = (c + c.adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<Matrix> es(c, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  KlmnResult r;
  r.eigenvalues = es.eigenvalues();
  if (vectors) r.vectors = li.adjoint() * es.eigenvectors();
  r.max_imag = 0.0;
  r.probe = probe ? *probe : r.eigenvalues(0) - 1.0;
  r.certificate = min_singular_value(fp.q - r.probe * m);
  r.certificate_threshold = 1e-8 * op_norm(fp.q);
  if (!(r.certificate > r.certificate_threshold))
    throw error(error_kind::probe_in_spectrum,
                "klmn_restrict: Q - lambda M is not boundedly invertible at lambda = " + std::to_string(r.probe));
  return r;
}

/// Number of eigenvalues below each threshold.
inline std::vector<Index> weyl_counts(const RealVector& eigenvalues, const std::vector<double>& thresholds) {
  std::vector<Index> out;
  for (double t : thresholds) out.push_back((eigenvalues.array() < t).count());
  return out;
}

/// -u'' on [0, pi] with u(0) = u(pi) = 0, piecewise-linear elements on a
/// uniform mesh with `elements` cells (elements - 1 interior nodes).
inline FormPair dirichlet_pi(Index elements) {
  if (elements < 2) throw error(error_kind::grid_too_coarse, "dirichlet_pi: need at least 2 elements");
  const double h = M_PI / static_cast<double>(elements);
  const Index n = elements - 1;
  FormPair fp{Matrix::Zero(n, n), Matrix::Zero(n, n), "P1 Dirichlet Laplacian on [0,pi], " + std::to_string(elements) + " elements"};
  for (Index i = 0; i < n; ++i) {
    fp.q(i, i) = 2.0 / h;
    fp.m(i, i) = 4.0 * h / 6.0;
    if (i + 1 < n) {
      fp.q(i, i + 1) = fp.q(i + 1, i) = -1.0 / h;
      fp.m(i, i + 1) = fp.m(i + 1, i) = h / 6.0;
    }
  }
  return fp;
}

// ---------------------------------------------------------------------------
// Semi-similarity

struct SemiSimilarity {
  Matrix b;         // G2^1/2 A G1^-1/2
  Matrix t;         // G1^1/2
  Matrix s;         // G2^1/2
  double residual;  // ||B T - S A|| / (||B|| ||T|| + ||S|| ||A||)
  bool same_metric; // G1 == G2, the quasi-similarity case
};

inline SemiSimilarity semi_similarity_check(const Matrix& a, const MetricOperator& g1, const MetricOperator& g2) {
  require_square(a, "semi_similarity_check");
  require_same_dim(a.rows(), g1.dim(), "semi_similarity_check: G1");
  require_same_dim(a.rows(), g2.dim(), "semi_similarity_check: G2");
  SemiSimilarity r;
  r.t = metric_power(g1, 0.5).matrix();
  r.s = metric_power(g2, 0.5).matrix();
  r.b = r.s * a * metric_power(g1, -0.5).matrix();
  const double den = op_norm(r.b) * op_norm(r.t) + op_norm(r.s) * op_norm(a);
  r.residual = den > 0 ? op_norm(r.b * r.t - r.s * a) / den : 0.0;
  r.same_metric = g1.matrix() == g2.matrix();
  return r;
}

/// The chain H(G2^-1) in H(G1^-1) in H in H(G1) in H(G2) for bounded metrics
/// G2 <= G1 <= I, as four order decisions.
inline std::vector<OrderResult> quintuplet_chain(const MetricOperator& g1, const MetricOperator& g2) {
  require_conformable(g1, g2, "quintuplet_chain");
  const MetricOperator id =
      g1.is_diagonal() ? MetricOperator::diagonal(DiagonalSymbol(GrowthSymbol{1.0, 0.0, 0.0}), g1.dim())
                       : identity_metric(g1.dim());
  const MetricOperator g1i = metric_inverse(g1), g2i = metric_inverse(g2);
  return {order_leq(g2i, g1i), order_leq(g1i, id), order_leq(id, g1), order_leq(g1, g2)};
}

}  // namespace metriclat
