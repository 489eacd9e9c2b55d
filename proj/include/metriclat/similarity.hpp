#pragma once

// Intertwining relations B T = T A and the similarity hierarchy built on
// them: similar (T, T^-1 bounded intertwiners), quasi-similar (T bounded,
// T^-1 possibly unbounded), weakly quasi-similar (bilinear form of the
// relation only) and mutually quasi-similar (intertwiners both ways).

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "metriclat/opcore.hpp"
#include "metriclat/symbol.hpp"

namespace metriclat {

inline constexpr double default_kappa_max = 1e8;

enum class similarity_class { similar, quasi_similar, weakly_quasi_similar, mutually_quasi_similar, none };

constexpr std::string_view to_string(similarity_class c) {
  switch (c) {
    case similarity_class::similar: return "similar";
    case similarity_class::quasi_similar: return "quasi_similar";
    case similarity_class::weakly_quasi_similar: return "weakly_quasi_similar";
    case similarity_class::mutually_quasi_similar: return "mutually_quasi_similar";
    case similarity_class::none: return "none";
  }
  return "none";
}

/// ||T_N^-1|| along a truncation ladder. Growth beyond 2x per doubling of N
/// is read as an unbounded inverse.
struct InverseLadder {
  std::vector<std::pair<Index, double>> points;

  double worst_growth() const {
    double g = 0.0;
    for (std::size_t k = 1; k < points.size(); ++k)
      g = std::max(g, points[k].second / points[k - 1].second);
    return g;
  }
  bool unbounded(double threshold = 2.0) const { return points.size() >= 2 && worst_growth() > threshold; }
};

template <class Builder>
InverseLadder inverse_ladder(Builder&& make_t, const std::vector<Index>& sizes) {
  InverseLadder l;
  for (Index n : sizes) {
    const double smin = min_singular_value(make_t(n));
    l.points.emplace_back(n, smin > 0 ? 1.0 / smin : std::numeric_limits<double>::infinity());
  }
  return l;
}

struct IntertwiningReport {
  double residual = 0.0;       // ||BT - TA|| / (||B|| ||T|| + ||T|| ||A||)
  double weak_residual = 0.0;  // max over basis pairs of |<T e_i, B^* e_j> - <T A e_i, e_j>|, same scale
  bool t_invertible = false;   // cond(T) <= kappa_max
  double t_inverse_norm = std::numeric_limits<double>::infinity();
  double t_condition = std::numeric_limits<double>::infinity();
  bool inverse_intertwines = false;  // ||A T^-1 - T^-1 B|| small
  double inverse_residual = std::numeric_limits<double>::infinity();
  similarity_class classification = similarity_class::none;
  std::optional<InverseLadder> ladder;
  std::string note;
};

namespace detail {

inline double relative(double num, double den) { return den > 0 ? num / den : num; }

}  // namespace detail

/// Classifies (A, B, T). In finite dimension the weak condition (ws) and the
/// operator identity differ only by the norm used to measure them; the
/// report notes this. A ladder with an unbounded inverse demotes "similar"
/// to "quasi_similar".
inline IntertwiningReport check_intertwining(const Matrix& a, const Matrix& b, const Matrix& t, double tol,
                                             std::optional<InverseLadder> ladder = std::nullopt,
                                             double kappa_max = default_kappa_max) {
  require_square(a, "check_intertwining");
  require_square(b, "check_intertwining");
  require_same_dim(t.rows(), b.rows(), "check_intertwining: T rows vs B");
  require_same_dim(t.cols(), a.rows(), "check_intertwining: T cols vs A");
  IntertwiningReport r;
  const double na = op_norm(a), nb = op_norm(b), nt = op_norm(t);
  const double scale = nb * nt + nt * na;
  const Matrix diff = b * t - t * a;
  r.residual = detail::relative(op_norm(diff), scale);
  r.weak_residual = detail::relative(diff.cwiseAbs().maxCoeff(), scale);

  if (t.rows() == t.cols()) {
    const RealVector s = singular_values(t);
    const double smin = s(s.size() - 1);
    r.t_condition = smin > 0 ? s(0) / smin : std::numeric_limits<double>::infinity();
    r.t_inverse_norm = smin > 0 ? 1.0 / smin : std::numeric_limits<double>::infinity();
    r.t_invertible = r.t_condition <= kappa_max;
    if (std::isfinite(r.t_condition)) {
      const Matrix ti = Eigen::PartialPivLU<Matrix>(t).inverse();
      r.inverse_residual =
          detail::relative(op_norm(a * ti - ti * b), na * r.t_inverse_norm + r.t_inverse_norm * nb);
      r.inverse_intertwines = r.inverse_residual <= tol * std::max(1.0, r.t_condition);
    }
  }
  r.ladder = std::move(ladder);
  const bool injective = std::isfinite(r.t_condition) &&
                         r.t_condition < 1.0 / (std::numeric_limits<double>::epsilon() * static_cast<double>(t.rows()));
  if (r.residual <= tol && injective) {
    const bool inverse_unbounded = !r.t_invertible || (r.ladder && r.ladder->unbounded());
    r.classification = (!inverse_unbounded && r.inverse_intertwines) ? similarity_class::similar
                                                                      : similarity_class::quasi_similar;
  } else if (r.weak_residual <= tol && injective) {
    r.classification = similarity_class::weakly_quasi_similar;
  }
  r.note = "finite dimension: the weak (bilinear) condition coincides with BT = TA up to norm equivalence";
  return r;
}

/// Mutual quasi-similarity: A -| B via T_ab and B -| A via T_ba.
inline similarity_class check_mutual(const Matrix& a, const Matrix& b, const Matrix& t_ab, const Matrix& t_ba,
                                     double tol) {
  const auto ab = check_intertwining(a, b, t_ab, tol);
  const auto ba = check_intertwining(b, a, t_ba, tol);
  if (ab.classification == similarity_class::none || ba.classification == similarity_class::none)
    return similarity_class::none;
  return similarity_class::mutually_quasi_similar;
}

// ---------------------------------------------------------------------------
// Spectra

/// Minimum-cost perfect matching on a square cost matrix (Hungarian method
/// with potentials). Returns assignment[row] = column; ties resolve to the
/// lowest index.
inline std::vector<int> min_cost_assignment(const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0), v(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<int> p(static_cast<std::size_t>(n) + 1, 0), way(static_cast<std::size_t>(n) + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(n) + 1, inf);
    std::vector<bool> used(static_cast<std::size_t>(n) + 1, false);
    do {
      used[static_cast<std::size_t>(j0)] = true;
      const int i0 = p[static_cast<std::size_t>(j0)];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> assignment(static_cast<std::size_t>(n), -1);
  for (int j = 1; j <= n; ++j)
    if (p[static_cast<std::size_t>(j)] > 0) assignment[static_cast<std::size_t>(p[static_cast<std::size_t>(j)] - 1)] = j - 1;
  return assignment;
}

struct SpectrumReport {
  std::vector<std::pair<complex, int>> eigenvalues;  // (value, algebraic multiplicity)
  Vector values;                                     // raw, sorted
  RealVector residuals;                              // ||A v - lambda v|| per computed eigenpair
};

inline SpectrumReport spectrum_report(const Matrix& a, double cluster_tol) {
  const EigenSystem es = eig(a);
  return {cluster_values(es.values, cluster_tol), es.values, es.residuals};
}

struct SpectrumMatch {
  bool match = false;
  double max_distance = 0.0;
  bool multiplicities_equal = false;
  std::vector<std::pair<complex, complex>> pairing;  // (eigenvalue of A, partner in B)
  std::optional<std::pair<complex, complex>> worst;  // the offending pair when match fails
};

/// Optimal pairing of sigma(A) with sigma(B) on |lambda_i - mu_j|.
inline SpectrumMatch spectra_compare(const Matrix& a, const Matrix& b, double tol) {
  require_square(a, "spectra_compare");
  require_same_dim(a.rows(), b.rows(), "spectra_compare");
  const Vector la = eigenvalues(a), lb = eigenvalues(b);
  const Index n = la.size();
  Eigen::MatrixXd cost(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) cost(i, j) = std::abs(la(i) - lb(j));
  const auto assign = min_cost_assignment(cost);
  SpectrumMatch m;
  for (Index i = 0; i < n; ++i) {
    const complex partner = lb(assign[static_cast<std::size_t>(i)]);
    m.pairing.emplace_back(la(i), partner);
    const double d = std::abs(la(i) - partner);
    if (d >= m.max_distance) {
      m.max_distance = d;
      m.worst = std::make_pair(la(i), partner);
    }
  }
  const auto ca = cluster_values(la, tol), cb = cluster_values(lb, tol);
  // Clusters are matched by nearest centre; sorted order is not stable when
  // two centres share a real part up to rounding.
  m.multiplicities_equal = ca.size() == cb.size();
  std::vector<bool> used(cb.size(), false);
  for (std::size_t k = 0; m.multiplicities_equal && k < ca.size(); ++k) {
    std::size_t best = cb.size();
    for (std::size_t j = 0; j < cb.size(); ++j)
      if (!used[j] && (best == cb.size() || std::abs(cb[j].first - ca[k].first) < std::abs(cb[best].first - ca[k].first)))
        best = j;
    m.multiplicities_equal = best < cb.size() && cb[best].second == ca[k].second &&
                             std::abs(cb[best].first - ca[k].first) <= tol;
    if (best < cb.size()) used[best] = true;
  }
  m.match = m.max_distance <= tol && m.multiplicities_equal;
  if (m.match) m.worst.reset();
  return m;
}

struct PushedEigenpair {
  complex lambda;
  Vector xi;        // eigenvector of A
  Vector t_xi;      // T xi
  double residual;  // ||B T xi - lambda T xi|| / ((||B|| + |lambda|) ||T xi||)
};

/// Pushes every eigenpair of A through T.
inline std::vector<PushedEigenpair> map_eigenvectors(const Matrix& a, const Matrix& b, const Matrix& t,
                                                     double tol) {
  const auto rep = check_intertwining(a, b, t, tol);
  if (rep.residual > tol)
    throw error(error_kind::intertwining_failed,
                "map_eigenvectors: intertwining residual " + std::to_string(rep.residual));
  const EigenSystem es = eig(a);
  const double nb = op_norm(b);
  std::vector<PushedEigenpair> out;
  for (Index k = 0; k < es.values.size(); ++k) {
    const Vector xi = es.vectors.col(k);
    const Vector txi = t * xi;
    const complex l = es.values(k);
    const double den = (nb + std::abs(l)) * txi.norm();
    const double res = (b * txi - l * txi).norm();
    out.push_back({l, xi, txi, den > 0 ? res / den : res});
  }
  return out;
}

struct ResolventIntertwining {
  Matrix x;              // T (A - lambda)^-1 T^-1
  double left_residual;  // ||(B - lambda) X - I||
  double right_residual; // ||X (B - lambda) - I||
};

inline ResolventIntertwining resolvent_intertwine(const Matrix& a, const Matrix& b, const Matrix& t, complex lambda,
                                                  double margin_rel = 1e-8) {
  require_square(a, "resolvent_intertwine");
  require_same_dim(a.rows(), b.rows(), "resolvent_intertwine");
  const Vector sa = eigenvalues(a);
  const double scale = std::max(1.0, op_norm(a));
  for (Index k = 0; k < sa.size(); ++k)
    if (std::abs(sa(k) - lambda) <= margin_rel * scale)
      throw error(error_kind::lambda_in_spectrum, "resolvent_intertwine: lambda within margin of sigma(A)");
  const Index n = a.rows();
  const Matrix id = Matrix::Identity(n, n);
  const Eigen::PartialPivLU<Matrix> lu_t(t);
  const Matrix ra = (a - lambda * id).partialPivLu().solve(lu_t.solve(id));
  const Matrix x = t * ra;
  const Matrix bl = b - lambda * id;
  return {x, op_norm(bl * x - id), op_norm(x * bl - id)};
}

struct WilliamsResult {
  bool applicable = false;
  double separation = 0.0;  // max over angles of lambda_min(Re(e^{it} T))
  double theta = 0.0;
  std::optional<Matrix> l;   // B^{1/2} A B^{-1/2}, Hermitian
  double l_hermiticity = 0.0;
};

/// If T A = A^* T and 0 lies outside the closed numerical range of T, then
/// B = Re(e^{it} T) is positive definite for a separating angle and A is
/// similar to the Hermitian L = B^{1/2} A B^{-1/2}.
inline WilliamsResult williams_test(const Matrix& a, const Matrix& t, double tol, int n_angles = 720,
                                    double nr_margin_rel = 1e-10) {
  require_square(a, "williams_test");
  require_same_dim(a.rows(), t.rows(), "williams_test");
  const double nt = op_norm(t), na = op_norm(a);
  const double pre = detail::relative(op_norm(t * a - a.adjoint() * t), 2.0 * nt * na);
  if (pre > tol)
    throw error(error_kind::precondition_failed,
                "williams_test: ||TA - A^*T|| relative " + std::to_string(pre) + " exceeds tolerance");
  const NumericalRange nr = numerical_range(t, n_angles);
  auto [sep, theta] = nr.best_separation();
  WilliamsResult w;
  w.separation = sep;
  w.theta = theta;
  w.applicable = sep > nr_margin_rel * nt;
  if (!w.applicable) return w;
  const Matrix bm = rotated_real_part(t, theta);
  const HermitianEig e = eigh(bm);
  const Matrix bh = spectral_apply(e, [](double x) { return std::sqrt(x); });
  const Matrix bmh = spectral_apply(e, [](double x) { return 1.0 / std::sqrt(x); });
  Matrix l = bh * a * bmh;
  w.l_hermiticity = hermitian_deviation(l);
  w.l = std::move(l);
  return w;
}

/// Normal A, B that are mutually quasi-similar are unitarily equivalent; in
/// finite dimension that is equality of spectra with multiplicity.
inline bool mutual_quasi_normal_test(const Matrix& a, const Matrix& b, const Matrix& t_ab, const Matrix& t_ba,
                                     double tol) {
  for (const Matrix* m : {&a, &b}) {
    const double nm = op_norm(*m);
    const double defect = detail::relative(op_norm(*m * m->adjoint() - m->adjoint() * *m), nm * nm);
    if (defect > tol) throw error(error_kind::not_normal, "mutual_quasi_normal_test: operator is not normal");
  }
  const auto ab = check_intertwining(a, b, t_ab, tol);
  const auto ba = check_intertwining(b, a, t_ba, tol);
  if (ab.residual > tol || ba.residual > tol)
    throw error(error_kind::precondition_failed, "mutual_quasi_normal_test: intertwining relation fails");
  return spectra_compare(a, b, tol * std::max(1.0, op_norm(a))).match;
}

/// Diagonal symbolic model of A -| B with T = diag(t_n): B T = T A forces
/// b_n = a_n, and a non-empty resolvent set of A forces T to be bounded.
struct SymbolicIntertwiner {
  bool intertwines = false;
  bool resolvent_nonempty = true;  // real positive symbols never exhaust C
  bool t_bounded = false;
  bool admissible = false;
  std::string reason;
};

inline SymbolicIntertwiner symbolic_intertwiner_check(const DiagonalSymbol& a, const DiagonalSymbol& b,
                                                      const DiagonalSymbol& t, int scan = 2048) {
  SymbolicIntertwiner s;
  s.intertwines = compare_growth(a.asymptotic(), b.asymptotic()) == 0;
  for (int n = 0; s.intertwines && n < scan; ++n) {
    const double an = a(n), bn = b(n);
    s.intertwines = std::abs(an - bn) <= 1e-12 * std::max(std::abs(an), std::abs(bn));
  }
  s.t_bounded = t.is_bounded();
  s.admissible = s.intertwines && (s.t_bounded || !s.resolvent_nonempty);
  if (!s.intertwines)
    s.reason = "symbols of A and B differ, so B T = T A fails";
  else if (!s.admissible)
    s.reason = "resolvent set of A is non-empty, so an intertwiner must be bounded; T's symbol is unbounded";
  else
    s.reason = "bounded intertwiner";
  return s;
}

}  // namespace metriclat
