#pragma once

// Riesz bases phi_n = T e_n with dual psi_n = T^{-*} e_n, the frame
// operators S_phi = T T^*, S_psi = S_phi^-1, and the diagonal-in-basis
// operators A^alpha_{phi,psi} = sum alpha_n phi_n (x) conj(psi_n).

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "metriclat/metric.hpp"
#include "metriclat/similarity.hpp"
#include "metriclat/symbol.hpp"

namespace metriclat {

struct RieszSystem {
  Matrix t;
  Matrix phi;    // columns phi_n
  Matrix psi;    // columns psi_n
  Matrix s_phi;  // T T^*
  Matrix s_psi;  // (T T^*)^-1, assembled as sum psi_n psi_n^*
  double kappa;  // cond(T)

  MetricOperator metric_phi() const { return MetricOperator::unchecked_dense(s_phi); }
  MetricOperator metric_psi() const { return MetricOperator::unchecked_dense(s_psi); }
  Index dim() const { return t.rows(); }
};

inline RieszSystem riesz_from(const Matrix& t, double kappa_max = default_kappa_max) {
  require_square(t, "riesz_from");
  require_finite(t, "riesz_from");
  const double kappa = condition_number(t);
  if (!(kappa <= kappa_max))
    throw error(error_kind::singular_t, "riesz_from: cond(T) = " + std::to_string(kappa));
  RieszSystem s;
  s.t = t;
  s.phi = t;
  s.psi = t.partialPivLu().inverse().adjoint();
  s.s_phi = t * t.adjoint();
  s.s_phi = (s.s_phi + s.s_phi.adjoint()) * 0.5;
  s.s_psi = s.psi * s.psi.adjoint();
  s.s_psi = (s.s_psi + s.s_psi.adjoint()) * 0.5;
  s.kappa = kappa;
  return s;
}

/// Roles of phi and psi exchanged: the system generated by T^{-*}.
inline RieszSystem dual_system(const RieszSystem& s) { return riesz_from(s.psi, std::numeric_limits<double>::infinity()); }

/// max |<phi_n, psi_m> - delta_nm|.
inline double biorthogonality_defect(const RieszSystem& s) {
  const Index n = s.dim();
  return (s.psi.adjoint() * s.phi - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
}

/// ||sum <xi, psi_n> phi_n - xi|| / ||xi||.
inline double resolution_defect(const RieszSystem& s, const Vector& xi) {
  Vector acc = Vector::Zero(xi.size());
  for (Index n = 0; n < s.dim(); ++n) acc += inner(xi, s.psi.col(n)) * s.phi.col(n);
  return (acc - xi).norm() / xi.norm();
}

struct FrameBounds {
  double upper;  // ||S_phi||
  double lower;  // ||S_phi^-1||^-1
};

inline FrameBounds frame_bounds(const RieszSystem& s) {
  const RealVector ev = eigh(s.s_phi).values;
  return {ev(ev.size() - 1), ev(0)};
}

struct AlphaOperator {
  RieszSystem system;
  Vector alpha;
  Matrix a_phi_psi;  // sum alpha_n phi_n psi_n^*
  Matrix a_psi_phi;  // sum alpha_n psi_n phi_n^*
};

inline AlphaOperator alpha_operator(const RieszSystem& s, const Vector& alpha) {
  if (alpha.size() != s.dim())
    throw error(error_kind::length_mismatch, "alpha_operator: alpha has " + std::to_string(alpha.size()) +
                                                 " entries, dimension is " + std::to_string(s.dim()));
  AlphaOperator a{s, alpha, {}, {}};
  a.a_phi_psi = s.phi * alpha.asDiagonal() * s.psi.adjoint();
  a.a_psi_phi = s.psi * alpha.asDiagonal() * s.phi.adjoint();
  return a;
}

/// max_k ||A phi_k - alpha_k phi_k|| / ||phi_k||.
inline double eigen_defect(const AlphaOperator& op) {
  double worst = 0.0;
  for (Index k = 0; k < op.alpha.size(); ++k) {
    const Vector p = op.system.phi.col(k);
    worst = std::max(worst, (op.a_phi_psi * p - op.alpha(k) * p).norm() / p.norm());
  }
  return worst;
}

/// ||(A^alpha_{phi,psi})^* - A^{conj alpha}_{psi,phi}|| / ||A||.
inline double adjoint_defect(const AlphaOperator& op) {
  const AlphaOperator bar = alpha_operator(op.system, op.alpha.conjugate());
  const double na = op_norm(op.a_phi_psi);
  return op_norm(op.a_phi_psi.adjoint() - bar.a_psi_phi) / (na > 0 ? na : 1.0);
}

struct RieszIntertwining {
  double psi_side;     // ||S_psi A_{phi,psi} - A_{psi,phi} S_psi|| / norms
  double phi_side;     // ||S_phi A_{psi,phi} - A_{phi,psi} S_phi|| / norms
  double middle_psi;   // ||S_psi A^beta_{phi,psi} - sum beta_n psi_n psi_n^*|| / norms
  double middle_phi;   // ||S_phi A^beta_{psi,phi} - sum beta_n phi_n phi_n^*|| / norms
};

inline RieszIntertwining verify_intertwining(const AlphaOperator& op, const std::optional<Vector>& beta = std::nullopt) {
  const RieszSystem& s = op.system;
  auto rel = [](const Matrix& x, const Matrix& y) {
    const double d = op_norm(x) + op_norm(y);
    return d > 0 ? op_norm(x - y) / d : 0.0;
  };
  RieszIntertwining r;
  r.psi_side = rel(s.s_psi * op.a_phi_psi, op.a_psi_phi * s.s_psi);
  r.phi_side = rel(s.s_phi * op.a_psi_phi, op.a_phi_psi * s.s_phi);

  const AlphaOperator ob = beta ? alpha_operator(s, *beta) : op;
  Matrix mid_psi = Matrix::Zero(s.dim(), s.dim()), mid_phi = mid_psi;
  for (Index n = 0; n < s.dim(); ++n) {
    mid_psi += ob.alpha(n) * s.psi.col(n) * s.psi.col(n).adjoint();
    mid_phi += ob.alpha(n) * s.phi.col(n) * s.phi.col(n).adjoint();
  }
  r.middle_psi = rel(s.s_psi * ob.a_phi_psi, mid_psi);
  r.middle_phi = rel(s.s_phi * ob.a_psi_phi, mid_phi);
  return r;
}

struct SymmetrizedAlpha {
  Matrix a;        // S_psi^1/2 A_{phi,psi} S_phi^1/2
  Matrix a_bar;    // S_phi^1/2 A^{conj alpha}_{psi,phi} S_psi^1/2
  double hermiticity;
  double adjoint_defect;  // ||a^* - a_bar|| / ||a||
};

inline SymmetrizedAlpha symmetrized_alpha(const AlphaOperator& op) {
  const RieszSystem& s = op.system;
  const Matrix hp = psd_power(s.s_phi, 0.5), hs = psd_power(s.s_psi, 0.5);
  const AlphaOperator bar = alpha_operator(s, op.alpha.conjugate());
  SymmetrizedAlpha out;
  out.a = hs * op.a_phi_psi * hp;
  out.a_bar = hp * bar.a_psi_phi * hs;
  out.hermiticity = hermitian_deviation(out.a);
  const double na = op_norm(out.a);
  out.adjoint_defect = op_norm(out.a.adjoint() - out.a_bar) / (na > 0 ? na : 1.0);
  return out;
}

/// ||A^alpha|| for the truncations of a symbolic alpha sequence, with the
/// Riesz system supplied per size. Unbounded symbols show unbounded growth.
template <class Builder>
std::vector<std::pair<Index, double>> alpha_ladder(const DiagonalSymbol& alpha, Builder&& make_t,
                                                   const std::vector<Index>& sizes) {
  std::vector<std::pair<Index, double>> out;
  for (Index n : sizes) {
    const RieszSystem s = riesz_from(make_t(n), std::numeric_limits<double>::infinity());
    Vector a(n);
    for (Index k = 0; k < n; ++k) a(k) = alpha(static_cast<double>(k));
    out.emplace_back(n, op_norm(alpha_operator(s, a).a_phi_psi));
  }
  return out;
}

}  // namespace metriclat
