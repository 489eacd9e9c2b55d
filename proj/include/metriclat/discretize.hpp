#pragma once

// Grids and discrete operators used by the scenarios: uniform and
// Gauss-Hermite grids, the Hermite DVR for x and p, centered differences,
// and piecewise-linear elements on a half-line with a Dirichlet cutoff.

#include <cmath>
#include <string>
#include <vector>

#include "metriclat/opcore.hpp"

namespace metriclat {

struct Grid1D {
  enum class kind { uniform, hermite };

  std::vector<double> points;
  std::vector<double> weights;
  kind type = kind::uniform;

  Index size() const { return static_cast<Index>(points.size()); }
  RealVector x() const { return Eigen::Map<const RealVector>(points.data(), size()); }

  /// n points on [a, b], endpoints included, trapezoid weights.
  static Grid1D uniform(double a, double b, Index n) {
    if (n < 2 || !(b > a)) throw error(error_kind::grid_too_coarse, "uniform grid needs n >= 2 and a < b");
    Grid1D g;
    const double h = (b - a) / static_cast<double>(n - 1);
    for (Index i = 0; i < n; ++i) {
      g.points.push_back(a + h * static_cast<double>(i));
      g.weights.push_back((i == 0 || i == n - 1) ? h / 2 : h);
    }
    return g;
  }

  /// n midpoints of equal cells on [a, b]; never contains a cell edge.
  static Grid1D midpoints(double a, double b, Index n) {
    if (n < 1 || !(b > a)) throw error(error_kind::grid_too_coarse, "midpoint grid needs n >= 1 and a < b");
    Grid1D g;
    const double h = (b - a) / static_cast<double>(n);
    for (Index i = 0; i < n; ++i) {
      g.points.push_back(a + h * (static_cast<double>(i) + 0.5));
      g.weights.push_back(h);
    }
    return g;
  }

  double step() const { return points.size() > 1 ? points[1] - points[0] : 0.0; }
};

/// Hermite-function representation: x and p in the basis of harmonic
/// oscillator eigenfunctions, and its diagonalization of x (the DVR).
struct HermiteDvr {
  Grid1D grid;          // Gauss-Hermite nodes and weights
  Eigen::MatrixXd u;    // columns: eigenvectors of the x matrix (FBR -> DVR)
  Matrix x;             // diag(nodes)
  Matrix p;             // U^T P U

  static HermiteDvr build(Index n) {
    if (n < 2) throw error(error_kind::grid_too_coarse, "Hermite DVR needs n >= 2");
    Eigen::MatrixXd xf = Eigen::MatrixXd::Zero(n, n);
    Matrix pf = Matrix::Zero(n, n);
    for (Index k = 1; k < n; ++k) {
      const double off = std::sqrt(static_cast<double>(k) / 2.0);
      xf(k - 1, k) = xf(k, k - 1) = off;
      pf(k, k - 1) = complex(0.0, off);
      pf(k - 1, k) = complex(0.0, -off);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(xf);
    HermiteDvr d;
    d.u = es.eigenvectors();
    for (Index i = 0; i < n; ++i) {
      if (d.u(0, i) < 0) d.u.col(i) *= -1.0;
      d.grid.points.push_back(es.eigenvalues()(i));
      d.grid.weights.push_back(std::sqrt(M_PI) * d.u(0, i) * d.u(0, i));
    }
    d.grid.type = Grid1D::kind::hermite;
    d.x = es.eigenvalues().cast<complex>().asDiagonal();
    const Matrix uc = d.u.cast<complex>();
    d.p = uc.transpose() * pf * uc;
    return d;
  }
};

/// Centered first derivative on a uniform grid, one-sided at both ends.
inline Matrix centered_difference(const Grid1D& g) {
  const Index n = g.size();
  const double h = g.step();
  Matrix d = Matrix::Zero(n, n);
  for (Index i = 1; i + 1 < n; ++i) {
    d(i, i - 1) = -0.5 / h;
    d(i, i + 1) = 0.5 / h;
  }
  d(0, 0) = -1.0 / h;
  d(0, 1) = 1.0 / h;
  d(n - 1, n - 2) = -1.0 / h;
  d(n - 1, n - 1) = 1.0 / h;
  return d;
}

/// Centered first derivative with periodic wrap-around; real antisymmetric.
inline Matrix periodic_difference(Index n, double h) {
  Matrix d = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    d(i, (i + 1) % n) = 0.5 / h;
    d(i, (i + n - 1) % n) = -0.5 / h;
  }
  return d;
}

/// P1 elements on [0, L] with `elements` cells, nodes 0..elements-1 kept
/// (the node at L carries the Dirichlet cutoff).
struct P1HalfLine {
  double h;
  RealVector nodes;
  Matrix stiffness;  // int phi_j' phi_i'
  Matrix mass;       // int phi_j phi_i
  Matrix drift;      // int phi_j' phi_i

  static P1HalfLine build(Index elements, double length) {
    if (elements < 2) throw error(error_kind::grid_too_coarse, "P1 mesh needs at least 2 elements");
    P1HalfLine m;
    m.h = length / static_cast<double>(elements);
    const Index n = elements;
    m.nodes = RealVector::LinSpaced(n, 0.0, m.h * static_cast<double>(n - 1));
    m.stiffness = Matrix::Zero(n, n);
    m.mass = Matrix::Zero(n, n);
    m.drift = Matrix::Zero(n, n);
    const double ke[2][2] = {{1.0 / m.h, -1.0 / m.h}, {-1.0 / m.h, 1.0 / m.h}};
    const double me[2][2] = {{m.h / 3.0, m.h / 6.0}, {m.h / 6.0, m.h / 3.0}};
    const double ce[2][2] = {{-0.5, 0.5}, {-0.5, 0.5}};
    for (Index e = 0; e < elements; ++e) {
      const Index idx[2] = {e, e + 1};
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          const Index i = idx[a], j = idx[b];
          if (i >= n || j >= n) continue;
          m.stiffness(i, j) += ke[a][b];
          m.mass(i, j) += me[a][b];
          m.drift(i, j) += ce[a][b];
        }
    }
    return m;
  }
};

}  // namespace metriclat
