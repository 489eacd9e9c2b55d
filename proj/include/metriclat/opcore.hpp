#pragma once

// Dense complex linear-algebra substrate: Hermitian eigendecomposition,
// functional calculus for positive matrices, norms, general spectra and the
// numerical range.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "metriclat/errors.hpp"

namespace metriclat {

using complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double default_herm_tol = 1e-10;
inline constexpr double default_pd_tol = 1e-12;

/// Ambient inner product, linear in the first slot: <x, y> = y^* x.
inline complex inner(const Vector& x, const Vector& y) { return y.dot(x); }

inline void require_square(const Matrix& a, const char* where) {
  if (a.rows() != a.cols())
    throw error(error_kind::dimension_mismatch,
                std::string(where) + ": matrix is " + std::to_string(a.rows()) + "x" +
                    std::to_string(a.cols()));
}

inline void require_finite(const Matrix& a, const char* where) {
  if (!a.allFinite())
    throw error(error_kind::parameter_domain, std::string(where) + ": non-finite entry");
}

inline RealVector singular_values(const Matrix& a) {
  if (a.size() == 0) return RealVector();
  if (a.rows() <= 16) return Eigen::JacobiSVD<Matrix>(a).singularValues();
  return Eigen::BDCSVD<Matrix>(a).singularValues();
}

/// Largest singular value. Beyond small sizes it is read off the top
/// eigenvalue of the smaller Gram matrix, which is accurate to relative
/// rounding for the largest singular value and several times cheaper than an SVD.
inline double op_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  if (a.rows() <= 64 && a.cols() <= 64) return singular_values(a)(0);
  const Matrix gram = a.rows() <= a.cols() ? Matrix(a * a.adjoint()) : Matrix(a.adjoint() * a);
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues()(gram.rows() - 1)));
}

inline double min_singular_value(const Matrix& a) {
  const RealVector s = singular_values(a);
  return s.size() ? s(s.size() - 1) : 0.0;
}

/// 2-norm condition number; +inf for a numerically singular matrix.
inline double condition_number(const Matrix& a) {
  const RealVector s = singular_values(a);
  if (s.size() == 0) return 1.0;
  const double lo = s(s.size() - 1);
  return lo > 0 ? s(0) / lo : std::numeric_limits<double>::infinity();
}

/// max |A - A^*| entry relative to the largest entry of A; zero for the
/// zero matrix. The largest entry is within a factor n of ||A||.
inline double hermitian_defect(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  const double scale = a.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  return (a - a.adjoint()).cwiseAbs().maxCoeff() / scale;
}

/// Relative operator-norm distance to the adjoint, ||A - A^*|| / ||A||.
inline double hermitian_deviation(const Matrix& a) {
  const double scale = op_norm(a);
  if (scale == 0.0) return 0.0;
  if (a.rows() <= 64) return op_norm(a - a.adjoint()) / scale;
  // i (A - A^*) is Hermitian, so its norm is its largest |eigenvalue|.
  const Matrix skew = complex(0.0, 1.0) * (a - a.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(skew, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff() / scale;
}

struct HermitianEig {
  RealVector values;  // ascending
  Matrix vectors;     // unitary, columns are eigenvectors

  Matrix reconstruct() const {
    return vectors * values.cast<complex>().asDiagonal() * vectors.adjoint();
  }
};

/// Eigendecomposition of a Hermitian matrix.
inline HermitianEig eigh(const Matrix& h, double herm_tol = default_herm_tol) {
  require_square(h, "eigh");
  require_finite(h, "eigh");
  if (h.size() == 0) return {};
  const double defect = hermitian_defect(h);
  if (defect > herm_tol)
    throw error(error_kind::not_hermitian,
                "eigh: relative defect " + std::to_string(defect) + " exceeds " +
                    std::to_string(herm_tol));
  const Matrix sym = (h + h.adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  return {es.eigenvalues(), es.eigenvectors()};
}

/// Applies f to the spectrum of a decomposed Hermitian matrix.
template <class F>
Matrix spectral_apply(const HermitianEig& e, F&& f) {
  RealVector fv(e.values.size());
  for (Index k = 0; k < fv.size(); ++k) fv(k) = f(e.values(k));
  return e.vectors * fv.cast<complex>().asDiagonal() * e.vectors.adjoint();
}

inline void require_positive(const HermitianEig& e, double pd_tol_rel, const char* where) {
  if (e.values.size() == 0) return;
  const double lo = e.values(0);
  const double hi = std::max(std::abs(e.values(0)), std::abs(e.values(e.values.size() - 1)));
  if (!(lo > pd_tol_rel * hi))
    throw error(error_kind::not_positive_definite,
                std::string(where) + ": minimum eigenvalue " + std::to_string(lo));
}

/// G^alpha for Hermitian positive definite G.
inline Matrix psd_power(const Matrix& g, double alpha, double pd_tol = default_pd_tol) {
  const HermitianEig e = eigh(g);
  require_positive(e, pd_tol, "psd_power");
  if (alpha == 0.0) return Matrix::Identity(g.rows(), g.cols());
  return spectral_apply(e, [alpha](double l) { return std::pow(l, alpha); });
}

/// Ordering for complex spectra: ascending real part, ties by imaginary part.
inline bool spectral_less(const complex& a, const complex& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

struct EigenSystem {
  Vector values;
  Matrix vectors;        // unit-norm columns
  RealVector residuals;  // ||A v - lambda v||
};

/// Eigenpairs of a general complex matrix, sorted by spectral_less.
inline EigenSystem eig(const Matrix& a) {
  require_square(a, "eig");
  require_finite(a, "eig");
  const Index n = a.rows();
  EigenSystem out;
  if (n == 0) return out;
  Eigen::ComplexEigenSolver<Matrix> es(a, true);
  std::vector<Index> order(static_cast<std::size_t>(n));
  for (Index k = 0; k < n; ++k) order[static_cast<std::size_t>(k)] = k;
  const Vector& vals = es.eigenvalues();
  std::stable_sort(order.begin(), order.end(),
                   [&](Index i, Index j) { return spectral_less(vals(i), vals(j)); });
  out.values.resize(n);
  out.vectors.resize(n, n);
  out.residuals.resize(n);
  for (Index k = 0; k < n; ++k) {
    const Index src = order[static_cast<std::size_t>(k)];
    out.values(k) = vals(src);
    Vector v = es.eigenvectors().col(src);
    const double nv = v.norm();
    if (nv > 0) v /= nv;
    out.vectors.col(k) = v;
    out.residuals(k) = (a * v - vals(src) * v).norm();
  }
  return out;
}

inline Vector eigenvalues(const Matrix& a) {
  require_square(a, "eigenvalues");
  Eigen::ComplexEigenSolver<Matrix> es(a, false);
  std::vector<complex> v(es.eigenvalues().data(), es.eigenvalues().data() + a.rows());
  std::stable_sort(v.begin(), v.end(), spectral_less);
  return Eigen::Map<Vector>(v.data(), static_cast<Index>(v.size()));
}

/// Groups values whose chained distance is within tol; returns (mean, count)
/// sorted by spectral_less.
inline std::vector<std::pair<complex, int>> cluster_values(const Vector& values, double tol) {
  std::vector<complex> v(values.data(), values.data() + values.size());
  std::stable_sort(v.begin(), v.end(), spectral_less);
  std::vector<int> parent(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) parent[i] = static_cast<int>(i);
  auto find = [&](int i) {
    while (parent[static_cast<std::size_t>(i)] != i) i = parent[static_cast<std::size_t>(i)];
    return i;
  };
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j)
      if (std::abs(v[i] - v[j]) <= tol) parent[static_cast<std::size_t>(find(static_cast<int>(j)))] = find(static_cast<int>(i));
  std::vector<std::pair<complex, int>> out;
  std::vector<int> slot(v.size(), -1);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto r = static_cast<std::size_t>(find(static_cast<int>(i)));
    if (slot[r] < 0) {
      slot[r] = static_cast<int>(out.size());
      out.emplace_back(complex{}, 0);
    }
    auto& c = out[static_cast<std::size_t>(slot[r])];
    c.first += v[i];
    c.second += 1;
  }
  for (auto& c : out) c.first /= static_cast<double>(c.second);
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return spectral_less(a.first, b.first); });
  return out;
}

// Planar geometry on complex points, used for numerical-range polygons.
namespace geometry {

inline double cross(complex o, complex a, complex b) {
  return (a.real() - o.real()) * (b.imag() - o.imag()) -
         (a.imag() - o.imag()) * (b.real() - o.real());
}

/// Counter-clockwise convex hull (Andrew's monotone chain).
inline std::vector<complex> convex_hull(std::vector<complex> pts) {
  std::sort(pts.begin(), pts.end(), [](complex a, complex b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
  });
  if (pts.size() < 3) return pts;
  std::vector<complex> h(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p) <= 0) --k;
    h[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    const auto& p = pts[i];
    while (k >= t && cross(h[k - 2], h[k - 1], p) <= 0) --k;
    h[k++] = p;
  }
  h.resize(k - 1);
  return h;
}

inline double segment_distance(complex p, complex a, complex b) {
  const complex ab = b - a;
  const double len2 = std::norm(ab);
  if (len2 == 0.0) return std::abs(p - a);
  const double t = std::clamp(((p - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
  return std::abs(p - (a + t * ab));
}

/// Distance from p to a convex polygon (zero inside). Degenerate hulls
/// (point, segment) are handled.
inline double distance_to_hull(complex p, const std::vector<complex>& hull) {
  if (hull.empty()) return std::numeric_limits<double>::infinity();
  if (hull.size() == 1) return std::abs(p - hull[0]);
  if (hull.size() == 2) return segment_distance(p, hull[0], hull[1]);
  bool inside = true;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const complex a = hull[i], b = hull[(i + 1) % hull.size()];
    if (cross(a, b, p) < 0) inside = false;
    best = std::min(best, segment_distance(p, a, b));
  }
  return inside ? 0.0 : best;
}

/// Hausdorff distance between the convex hulls of two point sets.
inline double hull_hausdorff(const std::vector<complex>& a, const std::vector<complex>& b) {
  const auto ha = convex_hull(a), hb = convex_hull(b);
  double d = 0.0;
  for (const auto& p : ha) d = std::max(d, distance_to_hull(p, hb));
  for (const auto& p : hb) d = std::max(d, distance_to_hull(p, ha));
  return d;
}

}  // namespace geometry

/// Polygonal approximation of W(T) = { <Tx,x> : ||x|| = 1 } from support
/// lines: for each angle t, h(t) = lambda_max(Re(e^{it} T)) and the support
/// point <Tv,v> at the top eigenvector v lies on W(T)'s boundary.
struct NumericalRange {
  std::vector<double> angles;
  std::vector<double> support_values;    // h(t)
  std::vector<complex> support_points;   // inner polygon, on the boundary of W(T)
  std::vector<complex> outer_vertices;   // intersection of consecutive support lines

  /// Membership in the outer polygon, which contains all of W(T).
  bool contains(complex z, double tol = 0.0) const {
    for (std::size_t k = 0; k < angles.size(); ++k) {
      const complex rot = std::polar(1.0, angles[k]) * z;
      if (rot.real() > support_values[k] + tol) return false;
    }
    return true;
  }

  /// Largest c such that W(T) lies in some rotated half-plane Re(e^{it} z) >= c,
  /// with the maximizing angle. Positive c means 0 is outside closure(W(T)).
  std::pair<double, double> best_separation() const {
    const std::size_t n = angles.size();
    double best = -std::numeric_limits<double>::infinity(), arg = 0.0;
    // lambda_min(Re(e^{it}T)) = -h(t + pi); angles are uniform so t + pi is index k + n/2
    // when n is even.
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t opp = (k + n / 2) % n;
      const double v = -support_values[opp];
      if (v > best) {
        best = v;
        arg = angles[k];
      }
    }
    return {best, arg};
  }
};

inline Matrix rotated_real_part(const Matrix& t, double theta) {
  const complex e = std::polar(1.0, theta);
  return (e * t + std::conj(e) * t.adjoint()) * 0.5;
}

inline NumericalRange numerical_range(const Matrix& t, int n_angles) {
  require_square(t, "numerical_range");
  if (n_angles < 8)
    throw error(error_kind::parameter_domain, "numerical_range: n_angles must be >= 8");
  if (n_angles % 2) ++n_angles;  // keeps antipodal angles on the grid
  NumericalRange out;
  const auto n = static_cast<std::size_t>(n_angles);
  out.angles.resize(n);
  out.support_values.resize(n);
  out.support_points.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    const Matrix m = rotated_real_part(t, theta);
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    const Vector v = es.eigenvectors().col(m.rows() - 1);
    out.angles[k] = theta;
    out.support_values[k] = es.eigenvalues()(m.rows() - 1);
    out.support_points[k] = v.dot(t * v);
  }
  // Re(e^{it} z) = x cos t - y sin t = h(t); intersect lines k and k+1.
  out.outer_vertices.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = (k + 1) % n;
    const double c1 = std::cos(out.angles[k]), s1 = -std::sin(out.angles[k]);
    const double c2 = std::cos(out.angles[j]), s2 = -std::sin(out.angles[j]);
    const double det = c1 * s2 - s1 * c2;
    const double x = (out.support_values[k] * s2 - s1 * out.support_values[j]) / det;
    const double y = (c1 * out.support_values[j] - out.support_values[k] * c2) / det;
    out.outer_vertices[k] = {x, y};
  }
  return out;
}

}  // namespace metriclat
