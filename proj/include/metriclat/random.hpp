#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

#include <Eigen/Dense>

namespace metriclat {

/// Seeded generator with a fixed, platform-independent output stream.
///
/// The engine is std::mt19937_64 (its output sequence is pinned by the
/// standard). Uniforms take the top 53 bits; normals use Box-Muller. The
/// std:: distributions are avoided because their algorithms are
/// implementation-defined.
class rng {
 public:
  explicit rng(std::uint64_t seed = 0) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
  }

  std::complex<double> complex_normal() { return {normal(), normal()}; }

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Random test-matrix factories.

inline Eigen::MatrixXcd random_matrix(Eigen::Index n, rng& g) {
  Eigen::MatrixXcd a(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) a(i, j) = g.complex_normal();
  return a;
}

inline Eigen::VectorXcd random_vector(Eigen::Index n, rng& g) {
  Eigen::VectorXcd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = g.complex_normal();
  return v;
}

inline Eigen::MatrixXcd random_hermitian(Eigen::Index n, rng& g) {
  const Eigen::MatrixXcd a = random_matrix(n, g);
  return (a + a.adjoint()) * 0.5;
}

/// Haar-distributed unitary (QR of a Ginibre matrix with the phase of R's
/// diagonal folded back into Q).
inline Eigen::MatrixXcd random_unitary(Eigen::Index n, rng& g) {
  const Eigen::MatrixXcd a = random_matrix(n, g);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
  Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(n, n);
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < n; ++k) {
    const double m = std::abs(r(k, k));
    if (m > 0) q.col(k) *= r(k, k) / m;
  }
  return q;
}

/// Singular values log-spaced in [1, kappa], so cond_2 = kappa exactly.
inline Eigen::VectorXd log_spaced(Eigen::Index n, double kappa) {
  Eigen::VectorXd s(n);
  for (Eigen::Index k = 0; k < n; ++k)
    s(k) = n == 1 ? 1.0 : std::pow(kappa, static_cast<double>(k) / static_cast<double>(n - 1));
  return s;
}

inline Eigen::MatrixXcd random_with_condition(Eigen::Index n, double kappa, rng& g) {
  const Eigen::MatrixXcd u = random_unitary(n, g);
  const Eigen::MatrixXcd v = random_unitary(n, g);
  return u * log_spaced(n, kappa).cast<std::complex<double>>().asDiagonal() * v.adjoint();
}

/// Hermitian positive definite with spectrum log-spaced in [1, kappa].
inline Eigen::MatrixXcd random_pd(Eigen::Index n, double kappa, rng& g) {
  const Eigen::MatrixXcd u = random_unitary(n, g);
  return u * log_spaced(n, kappa).cast<std::complex<double>>().asDiagonal() * u.adjoint();
}

}  // namespace metriclat
