#pragma once

// Concrete discretized examples, each returning named checks with the claim
// it tests. Scenarios call the library operations; they do not carry their
// own copies of the algebra.

#include <cmath>
#include <optional>

#include <Eigen/Sparse>
#include <string>
#include <utility>
#include <vector>

#include "metriclat/discretize.hpp"
#include "metriclat/lattice.hpp"
#include "metriclat/pipengine.hpp"
#include "metriclat/quasiherm.hpp"
#include "metriclat/random.hpp"
#include "metriclat/similarity.hpp"

namespace metriclat {

struct Check {
  std::string name;
  std::string anchor;  // the statement being checked
  bool passed = false;
  double residual = 0.0;
  double tolerance = 0.0;
  bool at_least = false;  // passed means residual >= tolerance rather than <=
};

struct ScenarioResult {
  std::string name;
  std::vector<std::pair<std::string, double>> params;
  std::vector<std::pair<std::string, std::string>> labels;
  std::vector<Check> checks;
  std::optional<SpectrumReport> spectra;
  std::optional<LatticeGraph> lattice;
  std::vector<std::string> artifacts;

  bool passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }

  const Check& check(const std::string& n) const {
    for (const auto& c : checks)
      if (c.name == n) return c;
    throw error(error_kind::parameter_domain, "no check named " + n);
  }

  void at_most(std::string n, std::string anchor, double value, double tol) {
    checks.push_back({std::move(n), std::move(anchor), value <= tol, value, tol, false});
  }
  void at_least(std::string n, std::string anchor, double value, double bound) {
    checks.push_back({std::move(n), std::move(anchor), value >= bound, value, bound, true});
  }
  void holds(std::string n, std::string anchor, bool ok) {
    checks.push_back({std::move(n), std::move(anchor), ok, ok ? 0.0 : 1.0, 0.0, false});
  }
};

namespace detail {

/// Largest |lambda_k - target_k| after sorting both.
inline double sorted_distance(const Vector& values, std::vector<complex> target) {
  std::vector<complex> v(values.data(), values.data() + values.size());
  std::sort(v.begin(), v.end(), spectral_less);
  std::sort(target.begin(), target.end(), spectral_less);
  double d = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) d = std::max(d, std::abs(v[k] - target[k]));
  return d;
}

inline std::vector<complex> zero_one_spectrum(Index n) {
  std::vector<complex> t(static_cast<std::size_t>(n), complex(0.0));
  t.back() = 1.0;
  return t;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Rank-one operators A_phi = <(I+Q^2) . , phi> (I+Q^2)^-1 phi and P_phi.

inline Vector gaussian_state(const Grid1D& g) {
  Vector phi(g.size());
  for (Index i = 0; i < g.size(); ++i) phi(i) = std::exp(-g.points[static_cast<std::size_t>(i)] * g.points[static_cast<std::size_t>(i)] / 2);
  return phi / phi.norm();
}

inline ScenarioResult example_313(Index n, double half_extent, std::optional<Vector> phi_in = std::nullopt) {
  if (n < 50) throw error(error_kind::grid_too_coarse, "example_313 needs N >= 50");
  const Grid1D g = Grid1D::uniform(-half_extent, half_extent, n);
  Vector phi = phi_in ? *phi_in : gaussian_state(g);
  require_same_dim(phi.size(), n, "example_313: phi");
  phi /= phi.norm();

  const RealVector x = g.x();
  const RealVector r = (1.0 + x.array().square()).matrix();  // I + Q^2
  const Matrix t = r.cwiseInverse().cast<complex>().asDiagonal();
  const Matrix p = phi * phi.adjoint();
  const Vector tphi = t * phi;
  const Matrix a = tphi * (r.cast<complex>().asDiagonal() * phi).adjoint();

  ScenarioResult res;
  res.name = "example-3.13";
  res.params = {{"n", static_cast<double>(n)}, {"l", half_extent}};
  const auto inter = check_intertwining(p, a, t, 1e-10);
  res.at_most("intertwining", "A_phi T = T P_phi with T = (I+Q^2)^-1", inter.residual, 1e-10);

  const EigenSystem ep = eig(p), ea = eig(a);
  res.at_most("spectrum_p", "sigma(P_phi) = {0, 1}", detail::sorted_distance(ep.values, detail::zero_one_spectrum(n)), 1e-8);
  res.at_most("spectrum_a", "sigma(A_phi) = {0, 1}", detail::sorted_distance(ea.values, detail::zero_one_spectrum(n)), 1e-8);
  const auto ca = cluster_values(ea.values, 1e-6), cp = cluster_values(ep.values, 1e-6);
  auto mult_ok = [n](const std::vector<std::pair<complex, int>>& c) {
    return c.size() == 2 && c[0].second == n - 1 && c[1].second == 1;
  };
  res.holds("multiplicities", "0 has multiplicity N-1 and 1 is simple for both operators", mult_ok(ca) && mult_ok(cp));

  Index top = 0;
  for (Index k = 1; k < ea.values.size(); ++k)
    if (std::abs(ea.values(k) - 1.0) < std::abs(ea.values(top) - 1.0)) top = k;
  const Vector v = ea.vectors.col(top).normalized(), w = tphi.normalized();
  const double sin_angle = (v - w.dot(v) * w).norm();
  res.at_most("eigenvector", "the eigenvalue-1 eigenvector of A_phi is a multiple of (I+Q^2)^-1 phi", sin_angle, 1e-8);

  // ||T^-1|| = 1 + L^2 grows without bound as the line is extended.
  InverseLadder ladder;
  for (double l : {5.0, 10.0, 20.0}) ladder.points.emplace_back(static_cast<Index>(l), 1.0 + l * l);
  const auto cls = check_intertwining(p, a, t, 1e-10, ladder);
  res.labels.emplace_back("classification", std::string(to_string(cls.classification)));
  res.holds("quasi_similar", "T bounded with unbounded inverse: P_phi is quasi-similar to A_phi",
            cls.classification == similarity_class::quasi_similar);
  res.spectra = spectrum_report(a, 1e-6);
  return res;
}

// ---------------------------------------------------------------------------
// (Af)(x) = f'(x) - 2x/(1+x^2) f(x), B = d/dx, T = (I+Q^2)^-1.

struct Example314Level {
  Index n;
  double h;
  double residual;  // sqrt(h) ||(TA - BT) f||
  double weak;      // |<A f, (1+x^2)^-1>|
};

inline Example314Level example_314_level(Index n, double half_extent) {
  const Grid1D g = Grid1D::uniform(-half_extent, half_extent, n);
  const RealVector x = g.x();
  const Matrix d = centered_difference(g);
  const RealVector r = (1.0 + x.array().square()).matrix();
  const Matrix a = d - RealVector(2.0 * x.array() / r.array()).cast<complex>().asDiagonal().toDenseMatrix();
  const Matrix t = r.cwiseInverse().cast<complex>().asDiagonal();
  Vector f(n);
  for (Index i = 0; i < n; ++i) f(i) = std::exp(-x(i) * x(i));
  const Vector hfun = r.cwiseInverse().cast<complex>();
  const double h = g.step();
  return {n, h, std::sqrt(h) * ((t * a - d * t) * f).norm(), std::abs(h * inner(a * f, hfun))};
}

inline ScenarioResult example_314(Index n, double half_extent) {
  if (n < 100) throw error(error_kind::grid_too_coarse, "example_314 needs N >= 100");
  const Example314Level c = example_314_level(n, half_extent), f = example_314_level(2 * n, half_extent);
  ScenarioResult res;
  res.name = "example-3.14";
  res.params = {{"n", static_cast<double>(n)}, {"l", half_extent}};
  res.at_least("refinement_ratio", "TA - BT vanishes on smooth functions; the defect shrinks under refinement",
               c.residual / f.residual, 1.8);
  res.at_most("residual_scale", "TA - BT defect is O(h)", c.residual, 10.0 * c.h);
  res.at_most("range_annihilator", "<Af, (1+x^2)^-1> = 0: the range of A is not dense", f.weak, f.h);
  res.holds("range_annihilator_decreasing", "<Af, (1+x^2)^-1> tends to 0 under refinement", f.weak <= c.weak || f.weak < 1e-14);

  const Matrix dp = periodic_difference(n, 2.0 * half_extent / static_cast<double>(n));
  const Vector ev = eigenvalues(dp);
  res.at_most("periodic_spectrum_imaginary", "sigma(d/dx) lies on the imaginary axis",
              ev.real().cwiseAbs().maxCoeff() / op_norm(dp), 1e-10);
  res.params.emplace_back("residual_n", c.residual);
  res.params.emplace_back("residual_2n", f.residual);
  res.spectra = spectrum_report(dp, 1e-9);
  return res;
}

// ---------------------------------------------------------------------------
// Weighted L^2 lattices.

/// Two-sided diagonal symbol: one symbol for n >= 0 and one for the
/// reflected half n < 0. An order holds on the line iff it holds on both.
struct TwoSidedOrder {
  OrderResult right, left;
  bool holds() const { return right.holds && left.holds; }
  double gamma() const { return std::max(right.gamma, left.gamma); }
};

inline ScenarioResult weighted_lattice_demo(const std::string& model, Index n, std::uint64_t seed = 0,
                                            double a = 1.0, double half_extent = 8.0) {
  ScenarioResult res;
  res.name = "weighted-lattice";
  res.labels.emplace_back("model", model);
  res.params = {{"n", static_cast<double>(n)}, {"a", a}, {"l", half_extent}};
  rng gen(seed);
  if (model == "x2") {
    if (n < 4) throw error(error_kind::grid_too_coarse, "weighted_lattice_demo needs N >= 4");
    const Grid1D g = Grid1D::midpoints(-half_extent, half_extent, n);
    const RealVector x = g.x();
    const MetricOperator gm = make_metric(RealVector(x.array().square()).cast<complex>().asDiagonal());
    const LatticeGraph graph = generate_single_g(gm);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
      const Vector f = random_vector(n, gen);
      const double r1 = (x.cast<complex>().asDiagonal() * f).norm();
      const double r2 = g_norm(gm, f);
      worst = std::max(worst, std::abs(r1 - r2) / r1);
    }
    res.at_most("two_route_norm", "||f||_G = ||x f||", worst, 1e-12);
    bool edges = true;
    for (const auto& e : graph.edges()) edges = edges && e.order.holds && std::isfinite(e.order.gamma);
    res.holds("hasse_edges", "the nine-node lattice generated by G = x^2 has all twelve inclusions", edges);

    // G and G^-1 are not comparable on the line: both directional constants
    // grow as the grid approaches 0 and extends to infinity.
    std::vector<double> up, down;
    for (int k = 0; k < 3; ++k) {
      const double scale = std::pow(std::sqrt(2.0), k);
      const Grid1D gk = Grid1D::midpoints(-half_extent * scale, half_extent * scale, n * (1 << k));
      const RealVector xk = gk.x();
      const MetricOperator g2 = make_metric(RealVector(xk.array().square()).cast<complex>().asDiagonal());
      const MetricOperator gi = metric_inverse(g2);
      up.push_back(order_leq(g2, gi).gamma);
      down.push_back(order_leq(gi, g2).gamma);
    }
    res.at_least("noncomparable_g_ginv", "G and G^-1 are not comparable", std::min(up[2] / up[1], down[2] / down[1]), 3.0);
    res.lattice = graph;
    return res;
  }
  if (model == "exp_a") {
    if (!(a > 0)) throw error(error_kind::parameter_domain, "exp_a model needs a > 0");
    // Norm equivalence on a grid: int e^{a|x|}|f|^2 against the projective norm.
    const Grid1D g = Grid1D::uniform(-half_extent, half_extent, n);
    const RealVector x = g.x();
    const MetricOperator gx = make_metric(RealVector((a * x.array()).exp()).cast<complex>().asDiagonal());
    const MetricOperator gxi = metric_inverse(gx);
    const RealVector wmax = (a * x.array().abs()).exp().matrix();
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (int k = 0; k < 100; ++k) {
      const Vector f = random_vector(n, gen);
      const double proj = projective_norm(gx, gxi, f);
      const double mx = std::sqrt((wmax.array() * f.array().abs2()).sum());
      const double ratio = proj * proj / (mx * mx);
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    res.params.emplace_back("factor_min", lo);
    res.params.emplace_back("factor_max", hi);
    res.holds("norm_equivalence", "int e^{a|x|}|f|^2 and int (e^{ax}+e^{-ax})|f|^2 are equivalent with factor in [1,2]",
              lo >= 1.0 - 1e-12 && hi <= 2.0 + 1e-12);

    // Order relations on the two half-lines, decided from symbols.
    const Index trunc = std::max<Index>(n / 2, 1);
    const MetricOperator right = MetricOperator::diagonal(GrowthSymbol{1.0, 0.0, a}, trunc);
    const MetricOperator left = MetricOperator::diagonal(GrowthSymbol{1.0, 0.0, -a}, trunc);
    const LatticeGraph gr = generate_single_g(right), gl = generate_single_g(left);
    bool edges = true;
    for (std::size_t k = 0; k < gr.edges().size(); ++k)
      edges = edges && gr.edges()[k].order.holds && gl.edges()[k].order.holds;
    res.holds("hasse_edges", "L^2(a meet -a) in L^2(+-a) in L^2(0) ... all twelve inclusions hold", edges);
    const TwoSidedOrder fwd{order_leq(right, metric_inverse(right)), order_leq(left, metric_inverse(left))};
    const TwoSidedOrder bwd{order_leq(metric_inverse(right), right), order_leq(metric_inverse(left), left)};
    res.holds("noncomparable_g_ginv", "L^2(a) and L^2(-a) are not comparable", !fwd.holds() && !bwd.holds());
    res.lattice = gr;
    return res;
  }
  throw error(error_kind::parameter_domain, "unknown lattice model '" + model + "' (x2 | exp_a)");
}

// ---------------------------------------------------------------------------
// -d^2/dx^2 on the half-line with xi'(0) + (d + ib) xi(0) = 0.

struct SamsonovForms {
  P1HalfLine mesh;
  Matrix q_h;  // form of H
  Matrix q_g;  // form of the metric G
};

inline SamsonovForms samsonov_forms(Index elements, double length, double d, double b) {
  SamsonovForms f{P1HalfLine::build(elements, length), {}, {}};
  const Index n = f.mesh.mass.rows();
  Matrix e00 = Matrix::Zero(n, n);
  e00(0, 0) = 1.0;
  const complex i(0.0, 1.0);
  // <-xi'', eta> = int xi' conj(eta') + xi'(0) conj(eta(0)) and xi'(0) = -(d+ib) xi(0).
  f.q_h = f.mesh.stiffness - complex(d, b) * e00;
  // -2ib xi' split symmetrically; its boundary term combines with the Robin term to -d.
  f.q_g = f.mesh.stiffness + (d * d + b * b) * f.mesh.mass - d * e00 - i * b * f.mesh.drift +
          i * b * f.mesh.drift.transpose();
  return f;
}

struct SamsonovLevel {
  Index n;
  double min_g;              // lowest generalized eigenvalue of (Q_G, M)
  double qh_residual;        // ||Q_G M^-1 Q_H - Q_H^* M^-1 Q_G|| / ||Q_G M^-1 Q_H||
  double k_deviation;        // ||K - K^*|| / ||K|| in M-orthonormal coordinates
  double k_minus_h;          // ||K - H~|| / ||H~||
  double h_hermiticity;      // of H~
  double kappa;
};

inline SamsonovLevel samsonov_level(Index elements, double length, double d, double b) {
  const SamsonovForms f = samsonov_forms(elements, length, d, b);
  const Matrix& m = f.mesh.mass;
  const Index n = m.rows();
  const KlmnResult g_eigs = klmn_restrict(FormPair{f.q_g, m, "metric form"}, std::nullopt, default_herm_tol, false);

  // The forms are tridiagonal; sparse products keep the ladder cheap.
  using Sparse = Eigen::SparseMatrix<complex>;
  const Sparse qg = f.q_g.sparseView(), qh = f.q_h.sparseView(), qh_adj = Matrix(f.q_h.adjoint()).sparseView();
  Eigen::LLT<Matrix> llt(m);
  const Matrix li = Matrix(llt.matrixL()).triangularView<Eigen::Lower>().solve(Matrix::Identity(n, n));
  const Matrix li_adj = li.adjoint();
  Matrix gt = li * Matrix(qg * li_adj);
  gt = (gt + gt.adjoint()) * 0.5;
  const Matrix ht = li * Matrix(qh * li_adj);
  // Positivity of gt is the klmn lower bound just computed.
  const Symmetrized s = symmetrize(ht, MetricOperator::unchecked_dense(gt));

  const Matrix mg = llt.solve(f.q_g), mh = llt.solve(f.q_h);
  const Matrix gh = qg * mh;
  const double qh_res = op_norm(gh - qh_adj * mg) / op_norm(gh);
  SamsonovLevel lv{elements, g_eigs.eigenvalues(0), qh_res, s.k_hermiticity, 0.0, 0.0, s.kappa};
  if (b == 0.0) {
    lv.k_minus_h = op_norm(s.k - ht) / op_norm(ht);
    lv.h_hermiticity = hermitian_deviation(ht);
  }
  return lv;
}

inline ScenarioResult samsonov(Index elements, double length, double d, double b) {
  if (!(d < 0)) throw error(error_kind::parameter_domain, "samsonov requires d < 0");
  if (elements < 100) throw error(error_kind::grid_too_coarse, "samsonov needs N >= 100");
  if (!(std::exp(d * length) < 1e-6))
    throw error(error_kind::parameter_domain, "samsonov: L too short, e^{dL} must be below 1e-6");
  std::vector<SamsonovLevel> lv;
  for (Index k = 0; k < 3; ++k) lv.push_back(samsonov_level(elements << k, length, d, b));

  ScenarioResult res;
  res.name = "samsonov";
  res.params = {{"n", static_cast<double>(elements)}, {"l", length}, {"d", d}, {"b", b}};
  res.at_least("metric_lower_bound", "sigma(G) = [d^2, inf)", lv[0].min_g, d * d - 0.05);
  // Residuals already at rounding level (b = 0) count as converged.
  auto settled = [](double r) { return r < 1e-12; };
  res.holds("quasi_hermitian_decreasing", "GH = H^*G on the dense domain",
            (lv[1].qh_residual < lv[0].qh_residual || settled(lv[1].qh_residual)) &&
                (lv[2].qh_residual < lv[1].qh_residual || settled(lv[2].qh_residual)));
  if (b == 0.0) {
    res.at_most("hermitian_reduction", "real Robin condition: H is already self-adjoint and K = H",
                std::max({lv[0].h_hermiticity, lv[0].k_minus_h, lv[0].k_deviation}), 1e-10);
  } else {
    res.at_least("k_refinement_ratio", "h = G^1/2 H G^-1/2 is self-adjoint",
                 std::min(lv[0].k_deviation / lv[1].k_deviation, lv[1].k_deviation / lv[2].k_deviation), 1.5);
  }
  for (const auto& l : lv) {
    const std::string sfx = "_" + std::to_string(l.n);
    res.params.emplace_back("min_g" + sfx, l.min_g);
    res.params.emplace_back("qh_residual" + sfx, l.qh_residual);
    res.params.emplace_back("k_deviation" + sfx, l.k_deviation);
    res.params.emplace_back("kappa" + sfx, l.kappa);
  }
  return res;
}

// ---------------------------------------------------------------------------
// H = 1/2 (p - i alpha)^2 + 1/2 omega^2 x^2 on a Hermite grid.

struct ShiftedOscillator {
  HermiteDvr dvr;
  Matrix h;         // non-Hermitian H
  Matrix h_osc;     // 1/2 p^2 + 1/2 omega^2 x^2
  MetricOperator g; // diag(e^{2 alpha x_i})
};

inline ShiftedOscillator shifted_oscillator_model(Index n, double alpha, double omega) {
  ShiftedOscillator s{HermiteDvr::build(n), {}, {}, identity_metric(1)};
  const Matrix id = Matrix::Identity(n, n);
  const Matrix shifted = s.dvr.p - complex(0.0, alpha) * id;
  s.h = 0.5 * shifted * shifted + 0.5 * omega * omega * s.dvr.x * s.dvr.x;
  s.h_osc = 0.5 * s.dvr.p * s.dvr.p + 0.5 * omega * omega * s.dvr.x * s.dvr.x;
  RealVector w(n);
  for (Index i = 0; i < n; ++i) w(i) = std::exp(2.0 * alpha * s.dvr.grid.points[static_cast<std::size_t>(i)]);
  s.g = MetricOperator::unchecked_dense(w.cast<complex>().asDiagonal());
  return s;
}

/// Low-mode probe: the first `modes` eigenvectors of the Hermitian
/// oscillator, pulled back by G^-1/2.
inline Matrix oscillator_probe(const ShiftedOscillator& s, Index modes) {
  const HermitianEig e = eigh(s.h_osc);
  const RealVector w = s.g.matrix().diagonal().real();
  return w.cwiseSqrt().cwiseInverse().cast<complex>().asDiagonal() * e.vectors.leftCols(modes);
}

inline ScenarioResult shifted_oscillator(Index n, double alpha, double omega) {
  if (n < 32) throw error(error_kind::grid_too_coarse, "shifted_oscillator needs N >= 32");
  const ShiftedOscillator s = shifted_oscillator_model(n, alpha, omega);
  ScenarioResult res;
  res.name = "shifted-oscillator";
  res.params = {{"n", static_cast<double>(n)}, {"alpha", alpha}, {"omega", omega}};
  res.labels.emplace_back("metric", "diag(exp(2 alpha x)), unbounded in the continuum limit");

  const SpectrumReport sp = spectrum_report(s.h, 1e-9);
  double imag = 0.0, dist = 0.0;
  for (Index k = 0; k < n / 3; ++k) imag = std::max(imag, std::abs(sp.values(k).imag()));
  for (Index k = 0; k < 5; ++k) dist = std::max(dist, std::abs(sp.values(k) - omega * (static_cast<double>(k) + 0.5)));
  res.at_most("real_spectrum", "H has real spectrum", imag, 1e-8);
  res.at_most("oscillator_levels", "sigma(H) = {omega (n + 1/2)}", dist, 1e-6);

  const Symmetrized k = symmetrize(s.h, s.g);
  const HermitianEig e = eigh(s.h_osc);
  double low = 0.0;
  for (Index j = 0; j < 5; ++j) {
    const Vector v = e.vectors.col(j);
    low = std::max(low, ((k.k - s.h_osc) * v).norm() / (s.h_osc * v).norm());
  }
  res.at_most("gauge_transform", "G^1/2 H G^-1/2 is the harmonic oscillator (low modes)", low, 1e-8);
  res.params.emplace_back("kappa", k.kappa);
  res.spectra = sp;
  return res;
}

}  // namespace metriclat
