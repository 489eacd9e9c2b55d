#include <gtest/gtest.h>

#include "metriclat/quasiherm.hpp"
#include "metriclat/random.hpp"
#include "metriclat/riesz.hpp"

using namespace metriclat;

namespace {

Vector random_real(Index n, rng& g) {
  Vector v(n);
  for (Index k = 0; k < n; ++k) v(k) = g.normal();
  return v;
}

// Multiset distance between sorted eigenvalues and sorted alpha.
double spectrum_distance(const Matrix& a, const Vector& alpha) {
  const Vector ev = eigenvalues(a);
  std::vector<complex> al(alpha.data(), alpha.data() + alpha.size());
  std::stable_sort(al.begin(), al.end(), spectral_less);
  double d = 0.0;
  for (Index k = 0; k < ev.size(); ++k) d = std::max(d, std::abs(ev(k) - al[static_cast<std::size_t>(k)]));
  return d;
}

}  // namespace

TEST(RieszFrom, IdentityIsStandardBasis) {
  const RieszSystem s = riesz_from(Matrix::Identity(4, 4));
  const Matrix id = Matrix::Identity(4, 4);
  EXPECT_EQ(s.phi, id);
  EXPECT_LE(op_norm(s.psi - id), 1e-15);
  EXPECT_LE(op_norm(s.s_phi - id), 1e-15);
  EXPECT_LE(op_norm(s.s_psi - id), 1e-15);
}

TEST(RieszFrom, DiagonalArithmetic) {
  Matrix t = Matrix::Zero(2, 2);
  t(0, 0) = 2.0;
  t(1, 1) = 0.5;
  const RieszSystem s = riesz_from(t);
  EXPECT_NEAR(s.psi(0, 0).real(), 0.5, 1e-15);
  EXPECT_NEAR(s.psi(1, 1).real(), 2.0, 1e-15);
  EXPECT_NEAR(s.s_phi(0, 0).real(), 4.0, 1e-15);
  EXPECT_NEAR(s.s_phi(1, 1).real(), 0.25, 1e-15);
}

TEST(RieszFrom, RandomSystemInvariants) {
  rng g(1);
  const RieszSystem s = riesz_from(random_with_condition(64, 100.0, g));
  EXPECT_LE(biorthogonality_defect(s), 1e-10);
  EXPECT_LE(op_norm(s.s_phi * s.s_psi - Matrix::Identity(64, 64)), 1e-10);
  for (int k = 0; k < 10; ++k) EXPECT_LE(resolution_defect(s, random_vector(64, g)), 1e-10);
}

TEST(RieszFrom, SingularRejected) {
  Matrix t = Matrix::Identity(3, 3);
  t(2, 2) = 0.0;
  try {
    riesz_from(t);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.kind(), error_kind::singular_t);
  }
  rng g(2);
  EXPECT_THROW(riesz_from(random_with_condition(5, 1e9, g)), error);
}

TEST(FrameBounds, SingularValuesSquared) {
  rng g(3);
  const Matrix t = random_with_condition(12, 30.0, g);
  const RieszSystem s = riesz_from(t);
  const RealVector sv = singular_values(t);
  const FrameBounds b = frame_bounds(s);
  EXPECT_NEAR(b.upper, sv(0) * sv(0), 1e-10 * b.upper);
  EXPECT_NEAR(b.lower, sv(11) * sv(11), 1e-10 * b.upper);
}

TEST(DualSystem, SwapsRoles) {
  rng g(4);
  const RieszSystem s = riesz_from(random_with_condition(10, 20.0, g));
  const RieszSystem d = dual_system(s);
  const RieszSystem direct = riesz_from(s.t.inverse().adjoint());
  EXPECT_LE(op_norm(d.phi - s.psi), 1e-12 * op_norm(s.psi));
  EXPECT_LE(op_norm(d.psi - s.phi), 1e-10 * op_norm(s.phi));
  EXPECT_LE(op_norm(d.s_phi - s.s_psi), 1e-10 * op_norm(s.s_psi));
  EXPECT_LE(op_norm(d.s_psi - s.s_phi), 1e-10 * op_norm(s.s_phi));
  EXPECT_LE(op_norm(d.s_phi - direct.s_phi), 1e-10 * op_norm(d.s_phi));
  EXPECT_NEAR(d.kappa, s.kappa, 1e-8 * s.kappa);
  EXPECT_LE(biorthogonality_defect(d), 1e-10);
}

TEST(AlphaOperator, OnesGiveIdentity) {
  rng g(5);
  const RieszSystem s = riesz_from(random_with_condition(8, 10.0, g));
  const AlphaOperator op = alpha_operator(s, Vector::Ones(8));
  EXPECT_LE(op_norm(op.a_phi_psi - Matrix::Identity(8, 8)), 1e-12);
  EXPECT_LE(op_norm(op.a_psi_phi - Matrix::Identity(8, 8)), 1e-12);
}

TEST(AlphaOperator, IndicatorIsRankOne) {
  rng g(6);
  const RieszSystem s = riesz_from(random_with_condition(6, 10.0, g));
  Vector e = Vector::Zero(6);
  e(0) = 1.0;
  const AlphaOperator op = alpha_operator(s, e);
  const Matrix expected = s.phi.col(0) * s.psi.col(0).adjoint();
  EXPECT_LE(op_norm(op.a_phi_psi - expected), 1e-14 * op_norm(expected));
  const RealVector sv = singular_values(op.a_phi_psi);
  EXPECT_LE(sv(1), 1e-12 * sv(0));
}

TEST(AlphaOperator, EigenAndAdjointInvariants) {
  rng g(7);
  const RieszSystem s = riesz_from(random_with_condition(16, 50.0, g));
  Vector alpha(16);
  for (Index k = 0; k < 16; ++k) alpha(k) = g.complex_normal();
  const AlphaOperator op = alpha_operator(s, alpha);
  EXPECT_LE(eigen_defect(op), 1e-10);
  EXPECT_LE(adjoint_defect(op), 1e-10);
  EXPECT_LE(spectrum_distance(op.a_phi_psi, alpha), 1e-8);
}

TEST(AlphaOperator, LengthMismatch) {
  try {
    alpha_operator(riesz_from(Matrix::Identity(3, 3)), Vector::Ones(2));
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.kind(), error_kind::length_mismatch);
  }
}

TEST(AlphaOperator, LadderTracksSymbolBoundedness) {
  // One 2x2 block repeated down the diagonal: every even truncation is a
  // Riesz basis with the same condition number.
  rng g(8);
  const Matrix block = random_with_condition(2, 4.0, g);
  auto make_t = [&](Index n) {
    Matrix t = Matrix::Zero(n, n);
    for (Index k = 0; k + 1 < n; k += 2) t.block(k, k, 2, 2) = block;
    return t;
  };
  const auto bounded = alpha_ladder(DiagonalSymbol(GrowthSymbol{1, -1, 0}), make_t, {32, 64, 128});
  const auto unbounded = alpha_ladder(DiagonalSymbol(GrowthSymbol{1, 1, 0}), make_t, {32, 64, 128});
  EXPECT_LE(bounded.back().second / bounded.front().second, 1.5);
  EXPECT_GE(unbounded[1].second / unbounded[0].second, 1.5);
  EXPECT_GE(unbounded[2].second / unbounded[1].second, 1.5);
}

TEST(VerifyIntertwining, IdentityBasis) {
  Vector alpha(3);
  alpha << 1.0, complex(0, 2), -3.0;
  const AlphaOperator op = alpha_operator(riesz_from(Matrix::Identity(3, 3)), alpha);
  EXPECT_EQ(op.a_phi_psi, Matrix(alpha.asDiagonal()));
  EXPECT_EQ(op.a_psi_phi, Matrix(alpha.asDiagonal()));
  const RieszIntertwining r = verify_intertwining(op);
  EXPECT_EQ(r.psi_side, 0.0);
  EXPECT_EQ(r.phi_side, 0.0);
}

TEST(VerifyIntertwining, RandomSystems) {
  rng g(9);
  for (int k = 0; k < 10; ++k) {
    const RieszSystem s = riesz_from(random_with_condition(20, 100.0, g));
    Vector alpha(20);
    for (Index j = 0; j < 20; ++j) alpha(j) = g.complex_normal();
    const RieszIntertwining r = verify_intertwining(alpha_operator(s, alpha));
    EXPECT_LE(r.psi_side, 1e-10);
    EXPECT_LE(r.phi_side, 1e-10);
    EXPECT_LE(r.middle_psi, 1e-10);
    EXPECT_LE(r.middle_phi, 1e-10);
  }
}

TEST(VerifyIntertwining, IndependentBeta) {
  rng g(10);
  const RieszSystem s = riesz_from(random_with_condition(10, 10.0, g));
  const Vector alpha = random_real(10, g), beta = random_real(10, g);
  const RieszIntertwining r = verify_intertwining(alpha_operator(s, alpha), beta);
  EXPECT_LE(r.middle_psi, 1e-10);
  EXPECT_LE(r.middle_phi, 1e-10);
}

TEST(SymmetrizedAlpha, RealAlphaIsHermitian) {
  rng g(11);
  const RieszSystem s = riesz_from(random_with_condition(32, 100.0, g));
  const Vector alpha = random_real(32, g);
  const SymmetrizedAlpha a = symmetrized_alpha(alpha_operator(s, alpha));
  EXPECT_LE(a.hermiticity, 1e-10);
  EXPECT_LE(a.adjoint_defect, 1e-10);
  EXPECT_LE(spectrum_distance(a.a, alpha), 1e-8);
}

TEST(SymmetrizedAlpha, ImaginaryEntryBreaksHermiticity) {
  rng g(12);
  const RieszSystem s = riesz_from(random_with_condition(8, 10.0, g));
  Vector alpha = random_real(8, g);
  alpha(3) += complex(0, 0.5);
  const SymmetrizedAlpha a = symmetrized_alpha(alpha_operator(s, alpha));
  // a - a^* has the eigenvalue 2i Im(alpha_3) because a is normal in the
  // frame built from the polar factor of T.
  const double na = op_norm(a.a);
  EXPECT_GE(a.hermiticity * na, 0.5 * 2.0 * 0.5);
  EXPECT_LE(a.adjoint_defect, 1e-10);
}

TEST(RieszQuasiHermitian, RealAlphaPassesWithDualMetric) {
  rng g(13);
  for (int k = 0; k < 10; ++k) {
    const RieszSystem s = riesz_from(random_with_condition(12, 50.0, g));
    const AlphaOperator op = alpha_operator(s, random_real(12, g));
    EXPECT_TRUE(is_quasi_hermitian(op.a_phi_psi, s.metric_psi(), 1e-10).verdict);
  }
}

TEST(RieszPushThrough, SPsiMapsPhiEigenpairsToPsiEigenpairs) {
  rng g(14);
  const RieszSystem s = riesz_from(random_with_condition(10, 20.0, g));
  const Vector alpha = random_real(10, g);
  const AlphaOperator op = alpha_operator(s, alpha);
  for (Index k = 0; k < 10; ++k) {
    const Vector pushed = s.s_psi * s.phi.col(k);
    EXPECT_LE((pushed - s.psi.col(k)).norm(), 1e-10 * s.psi.col(k).norm());
    EXPECT_LE((op.a_psi_phi * pushed - alpha(k) * pushed).norm(), 1e-10 * pushed.norm() * op_norm(op.a_psi_phi));
  }
}
