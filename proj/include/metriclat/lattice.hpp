#pragma once

// The lattice of Hilbert spaces H(X) generated by metric operators.
//
// meet (wedge) is the form sum X + Y, giving the projective norm
// ||x||_X^2 + ||x||_Y^2; join (vee) is the parallel sum (X^-1 + Y^-1)^-1,
// giving the inductive norm inf over splits x = y + z of ||y||_X^2 + ||z||_Y^2.
// X <= Y (H(X) inside H(Y)) is witnessed by the smallest gamma with
// Y <= gamma X. In finite dimension every gamma is finite, so strict
// inclusions show up as gamma growing along a truncation ladder.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "metriclat/metric.hpp"

namespace metriclat {

inline MetricOperator materialize(const MetricOperator& x) {
  return MetricOperator::unchecked_dense(x.matrix());
}

inline void require_conformable(const MetricOperator& x, const MetricOperator& y, const char* where) {
  require_same_dim(x.dim(), y.dim(), where);
}

/// X wedge Y = X + Y.
inline MetricOperator wedge(const MetricOperator& x, const MetricOperator& y) {
  require_conformable(x, y, "wedge");
  if (x.is_diagonal() && y.is_diagonal()) {
    try {
      return MetricOperator::diagonal(x.symbol() + y.symbol(), x.dim());
    } catch (const error& e) {
      if (e.kind() != error_kind::unsupported) throw;
    }
  }
  return MetricOperator::unchecked_dense(x.matrix() + y.matrix());
}

/// X vee Y = (X^-1 + Y^-1)^-1, evaluated as X (X + Y)^-1 Y.
inline MetricOperator vee(const MetricOperator& x, const MetricOperator& y) {
  require_conformable(x, y, "vee");
  if (x.is_diagonal() && y.is_diagonal()) {
    try {
      return MetricOperator::diagonal((x.symbol().inverse() + y.symbol().inverse()).inverse(),
                                      x.dim());
    } catch (const error& e) {
      if (e.kind() != error_kind::unsupported) throw;
    }
  }
  const Matrix xm = x.matrix(), ym = y.matrix();
  const Matrix s = xm + ym;
  const Matrix p = xm * Eigen::LLT<Matrix>(s).solve(ym);
  return make_metric((p + p.adjoint()) * 0.5);
}

inline double projective_norm(const MetricOperator& x, const MetricOperator& y, const Vector& xi) {
  require_conformable(x, y, "projective_norm");
  const double a = g_norm(x, xi), b = g_norm(y, xi);
  return std::sqrt(a * a + b * b);
}

struct InductiveSplit {
  double value;  // sqrt(<(X vee Y) xi, xi>)
  Vector eta;    // minimizing component, measured in X
  Vector zeta;   // xi - eta, measured in Y
};

/// Closed form of the inductive norm; the infimum is attained at
/// eta = (X + Y)^-1 Y xi.
inline InductiveSplit inductive_norm(const MetricOperator& x, const MetricOperator& y, const Vector& xi) {
  require_conformable(x, y, "inductive_norm");
  require_same_dim(x.dim(), xi.size(), "inductive_norm");
  const Matrix xm = x.matrix(), ym = y.matrix();
  Vector eta = Eigen::LLT<Matrix>(xm + ym).solve(ym * xi);
  Vector zeta = xi - eta;
  const MetricOperator v = vee(x, y);
  return {g_norm(v, xi), std::move(eta), std::move(zeta)};
}

struct OrderResult {
  bool holds = true;
  double gamma = 0.0;  // +inf when the symbolic ratio is unbounded
  bool symbolic = false;
};

/// Decides X <= Y, i.e. Y <= gamma X. Diagonal symbols are decided exactly;
/// dense operators always embed and gamma = lambda_max(X^-1/2 Y X^-1/2).
inline OrderResult order_leq(const MetricOperator& x, const MetricOperator& y) {
  require_conformable(x, y, "order_leq");
  if (x.is_diagonal() && y.is_diagonal()) {
    const DiagonalSymbol ratio = y.symbol() * x.symbol().inverse();
    const bool bounded = ratio.is_bounded();
    return {bounded, bounded ? ratio.sup() : std::numeric_limits<double>::infinity(), true};
  }
  const Matrix xm = x.matrix(), ym = y.matrix();
  Eigen::LLT<Matrix> llt(xm);
  if (llt.info() != Eigen::Success)
    throw error(error_kind::not_positive_definite, "order_leq: X is not positive definite");
  const Matrix l = llt.matrixL();
  const Matrix li = l.triangularView<Eigen::Lower>().solve(Matrix::Identity(xm.rows(), xm.cols()));
  const Matrix c = li * ym * li.adjoint();
  Eigen::SelfAdjointEigenSolver<Matrix> es((c + c.adjoint()) * 0.5, Eigen::EigenvaluesOnly);
  return {true, es.eigenvalues()(c.rows() - 1), false};
}

// ---------------------------------------------------------------------------
// Node labels: expressions over the atoms I, G, G^-1, powers of G, and the
// connectives meet/join, in a normal form (flattened, operands sorted with
// I < G < G^-1 < powers < compound).

class Label {
 public:
  enum class kind { identity, g, g_inverse, power, meet, join };

  static Label identity() { return Label(kind::identity); }
  static Label g() { return Label(kind::g); }
  static Label g_inverse() { return Label(kind::g_inverse); }
  static Label power(double alpha) {
    if (alpha == 0.0) return identity();
    if (alpha == 1.0) return g();
    if (alpha == -1.0) return g_inverse();
    Label l(kind::power);
    l.exponent_ = alpha;
    return l;
  }
  static Label meet(const Label& a, const Label& b) { return combine(kind::meet, a, b); }
  static Label join(const Label& a, const Label& b) { return combine(kind::join, a, b); }

  kind type() const { return kind_; }
  double exponent() const { return exponent_; }
  const std::vector<Label>& operands() const { return operands_; }

  /// Inverts atoms and swaps meet with join.
  Label dual() const {
    switch (kind_) {
      case kind::identity: return identity();
      case kind::g: return g_inverse();
      case kind::g_inverse: return g();
      case kind::power: return power(-exponent_);
      case kind::meet:
      case kind::join: {
        Label l(kind_ == kind::meet ? kind::join : kind::meet);
        for (const auto& o : operands_) l.operands_.push_back(o.dual());
        l.sort_operands();
        return l;
      }
    }
    return *this;
  }

  std::string to_string() const {
    switch (kind_) {
      case kind::identity: return "I";
      case kind::g: return "G";
      case kind::g_inverse: return "G^-1";
      case kind::power: {
        std::ostringstream os;
        os << "G^" << exponent_;
        return os.str();
      }
      case kind::meet:
      case kind::join: {
        std::string s = kind_ == kind::meet ? "meet(" : "join(";
        for (std::size_t i = 0; i < operands_.size(); ++i) s += (i ? "," : "") + operands_[i].to_string();
        return s + ")";
      }
    }
    return {};
  }

  friend bool operator==(const Label& a, const Label& b) { return a.to_string() == b.to_string(); }

 private:
  explicit Label(kind k) : kind_(k) {}

  int rank() const {
    switch (kind_) {
      case kind::identity: return 0;
      case kind::g: return 1;
      case kind::g_inverse: return 2;
      case kind::power: return 3;
      default: return 4;
    }
  }

  void sort_operands() {
    std::sort(operands_.begin(), operands_.end(), [](const Label& a, const Label& b) {
      if (a.rank() != b.rank()) return a.rank() < b.rank();
      if (a.kind_ == kind::power && b.kind_ == kind::power) return a.exponent_ < b.exponent_;
      return a.to_string() < b.to_string();
    });
  }

  static Label combine(kind k, const Label& a, const Label& b) {
    Label l(k);
    for (const Label* x : {&a, &b}) {
      if (x->kind_ == k)
        l.operands_.insert(l.operands_.end(), x->operands_.begin(), x->operands_.end());
      else
        l.operands_.push_back(*x);
    }
    l.sort_operands();
    return l;
  }

  kind kind_;
  double exponent_ = 0.0;
  std::vector<Label> operands_;
};

struct LatticeNode {
  Label label;
  MetricOperator op;
  /// Canonical norm operator for scale nodes, (I + G)^alpha.
  std::optional<MetricOperator> canonical;
};

struct LatticeEdge {
  std::size_t lower;
  std::size_t upper;
  OrderResult order;
};

class LatticeGraph {
 public:
  LatticeGraph() = default;
  LatticeGraph(std::vector<LatticeNode> nodes, std::vector<LatticeEdge> edges)
      : nodes_(std::move(nodes)), edges_(std::move(edges)) {}

  const std::vector<LatticeNode>& nodes() const { return nodes_; }
  const std::vector<LatticeEdge>& edges() const { return edges_; }

  std::optional<std::size_t> find(const Label& l) const {
    const std::string key = l.to_string();
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      if (nodes_[i].label.to_string() == key) return i;
    return std::nullopt;
  }

  const LatticeNode& node(const Label& l) const {
    if (auto i = find(l)) return nodes_[*i];
    throw error(error_kind::parameter_domain, "no lattice node " + l.to_string());
  }

  std::optional<std::size_t> dual_of(std::size_t i) const { return find(nodes_[i].label.dual()); }

  /// Reflexive-transitive closure of the edge relation: below(i, j) means
  /// node i sits below node j (H(i) inside H(j)).
  std::vector<std::vector<bool>> order_closure() const {
    const std::size_t n = nodes_.size();
    std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) r[i][i] = true;
    for (const auto& e : edges_)
      if (e.order.holds) r[e.lower][e.upper] = true;
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        if (r[i][k])
          for (std::size_t j = 0; j < n; ++j)
            if (r[k][j]) r[i][j] = true;
    return r;
  }

  /// "node <id> <label>" / "edge <lo> <hi> gamma=<value>" lines.
  std::string to_text() const {
    std::ostringstream os;
    os.precision(17);
    for (std::size_t i = 0; i < nodes_.size(); ++i) os << "node " << i << ' ' << nodes_[i].label.to_string() << '\n';
    for (const auto& e : edges_) {
      os << "edge " << e.lower << ' ' << e.upper << " gamma=";
      if (std::isfinite(e.order.gamma))
        os << e.order.gamma;
      else
        os << "inf";
      os << '\n';
    }
    return os.str();
  }

 private:
  std::vector<LatticeNode> nodes_;
  std::vector<LatticeEdge> edges_;
};

/// The nine-node lattice generated by I, G, G^-1 with its twelve Hasse edges.
inline LatticeGraph generate_single_g(const MetricOperator& g) {
  const Index n = g.dim();
  const MetricOperator id = g.is_diagonal()
                                ? MetricOperator::diagonal(DiagonalSymbol(GrowthSymbol{1.0, 0.0, 0.0}), n)
                                : identity_metric(n);
  const MetricOperator gi = metric_inverse(g);
  const Label I = Label::identity(), G = Label::g(), Gi = Label::g_inverse();

  std::vector<LatticeNode> nodes{
      {Label::meet(G, Gi), wedge(g, gi), std::nullopt},    // 0
      {Label::meet(I, G), wedge(id, g), std::nullopt},     // 1  R_G
      {Label::meet(I, Gi), wedge(id, gi), std::nullopt},   // 2  R_{G^-1}
      {G, g, std::nullopt},                                // 3
      {I, id, std::nullopt},                               // 4
      {Gi, gi, std::nullopt},                              // 5
      {Label::join(I, G), vee(id, g), std::nullopt},       // 6  R_{G^-1}^-1
      {Label::join(I, Gi), vee(id, gi), std::nullopt},     // 7  R_G^-1
      {Label::join(G, Gi), vee(g, gi), std::nullopt},      // 8
  };
  static constexpr std::size_t hasse[12][2] = {{0, 1}, {0, 2}, {1, 3}, {1, 4}, {2, 4}, {2, 5},
                                               {3, 6}, {4, 6}, {4, 7}, {5, 7}, {6, 8}, {7, 8}};
  std::vector<LatticeEdge> edges;
  for (const auto& h : hasse)
    edges.push_back({h[0], h[1], order_leq(nodes[h[0]].op, nodes[h[1]].op)});
  return LatticeGraph(std::move(nodes), std::move(edges));
}

/// Node of the continuous scale: H(G^alpha), with canonical norm
/// ||(I + G)^{alpha/2} x||.
inline LatticeNode scale_node(const MetricOperator& g, double alpha) {
  const MetricOperator op = metric_power(g, alpha);
  if (g.is_diagonal()) {
    const DiagonalSymbol one(GrowthSymbol{1.0, 0.0, 0.0});
    return {Label::power(alpha), op, MetricOperator::diagonal((one + g.symbol()).pow(alpha), g.dim())};
  }
  return {Label::power(alpha), op, metric_power(r_g(g), alpha)};
}

/// Chain of scale nodes. Edges join consecutive exponents, from the larger
/// power (smaller space when G is bounded below) to the smaller one, each
/// carrying its order decision.
inline LatticeGraph scale_graph(const MetricOperator& g, std::vector<double> alphas) {
  std::sort(alphas.begin(), alphas.end());
  alphas.erase(std::unique(alphas.begin(), alphas.end()), alphas.end());
  std::vector<LatticeNode> nodes;
  for (double a : alphas) nodes.push_back(scale_node(g, a));
  std::vector<LatticeEdge> edges;
  for (std::size_t k = 0; k + 1 < nodes.size(); ++k)
    edges.push_back({k + 1, k, order_leq(nodes[k + 1].op, nodes[k].op)});
  return LatticeGraph(std::move(nodes), std::move(edges));
}

}  // namespace metriclat
