#pragma once

// Command-line front end. Exit status: 0 when every check passed, 1 when a
// check failed, 2 on usage or input errors.

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "metriclat/matrix_io.hpp"
#include "metriclat/report.hpp"
#include "metriclat/riesz.hpp"

namespace metriclat::cli {

struct RunConfig {
  std::string command;
  std::string scenario;
  Index n = 0;  // 0: command default
  Index dim = 16;
  double l = 0.0;
  double d = -1.0;
  double b = 1.0;
  double alpha = 0.5;
  double omega = 1.0;
  double tol = 1e-8;
  double kappa = 100.0;
  double probe = std::numeric_limits<double>::quiet_NaN();
  std::uint64_t seed = 0;
  std::string out = "out";
  std::string format = "json";
  std::string model = "x2";
  std::string example = "dirichlet-pi";
  std::string symbol = "1,2,0";
  std::string op_symbol = "1,1,0";
  std::string a_file, b_file, t_file, g_file, alpha_file;
  bool alpha_real = false;
};

struct Outcome {
  ScenarioResult result;
  std::optional<json> extra;
};

/// Flat "key = value" lines; '#' starts a comment.
inline std::map<std::string, std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error(error_kind::parse_error, "cannot open config " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw error(error_kind::parse_error, path + ":" + std::to_string(lineno) + ": expected key = value");
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

// ---------------------------------------------------------------------------
// Commands

inline Outcome run_lattice(const RunConfig& c) {
  const Index n = c.n > 0 ? c.n : 64;
  const MetricOperator g = MetricOperator::diagonal(parse_symbol(c.symbol), n);
  const LatticeGraph graph = generate_single_g(g);
  ScenarioResult r;
  r.name = "lattice";
  r.params = {{"n", static_cast<double>(n)}};
  r.labels = {{"symbol", c.symbol}};
  bool all = true;
  for (const auto& e : graph.edges()) all = all && e.order.holds;
  r.holds("hasse_edges", "the lattice generated by I, G, G^-1 has twelve covering inclusions", all);
  const auto closure = graph.order_closure();
  r.holds("meet_below_join", "G meet G^-1 lies below G join G^-1", closure[0][8]);
  r.lattice = graph;
  return {r, std::nullopt};
}

inline Outcome run_similarity(const RunConfig& c) {
  rng gen(c.seed);
  Matrix a, t, b;
  if (!c.a_file.empty()) {
    a = read_matrix_file(c.a_file);
    t = c.t_file.empty() ? Matrix::Identity(a.rows(), a.cols()) : read_matrix_file(c.t_file);
    b = c.b_file.empty() ? Matrix(t * a * t.partialPivLu().inverse()) : read_matrix_file(c.b_file);
  } else {
    a = random_matrix(c.dim, gen);
    t = random_with_condition(c.dim, c.kappa, gen);
    b = t * a * t.partialPivLu().inverse();
  }
  ScenarioResult r;
  r.name = "similarity";
  r.params = {{"dim", static_cast<double>(a.rows())}, {"seed", static_cast<double>(c.seed)}};
  const auto rep = check_intertwining(a, b, t, c.tol);
  r.labels = {{"classification", std::string(to_string(rep.classification))}};
  r.at_most("intertwining", "BT = TA", rep.residual, c.tol);
  const auto m = spectra_compare(a, b, c.tol * std::max(1.0, op_norm(a)) * std::max(1.0, rep.t_condition));
  r.holds("spectra_match", "similar operators have the same spectrum", m.match);
  r.params.emplace_back("spectral_distance", m.max_distance);
  if (rep.residual <= c.tol) {
    double worst = 0.0;
    for (const auto& p : map_eigenvectors(a, b, t, c.tol)) worst = std::max(worst, p.residual);
    r.at_most("eigenvector_push", "T maps eigenvectors of A to eigenvectors of B", worst,
              c.tol * std::max(1.0, rep.t_condition));
  }
  r.spectra = spectrum_report(b, c.tol);
  return {r, std::nullopt};
}

inline Outcome run_quasiherm(const RunConfig& c) {
  rng gen(c.seed);
  Matrix a;
  MetricOperator g = identity_metric(1);
  if (!c.a_file.empty()) {
    a = read_matrix_file(c.a_file);
    g = c.g_file.empty() ? identity_metric(a.rows()) : make_metric(read_matrix_file(c.g_file));
  } else {
    const Matrix gm = random_pd(c.dim, c.kappa, gen);
    g = make_metric(gm);
    a = psd_power(gm, -0.5) * random_hermitian(c.dim, gen) * psd_power(gm, 0.5);
  }
  const QuasiHermReport q = is_quasi_hermitian(a, g, c.tol);
  ScenarioResult r;
  r.name = "quasiherm";
  r.params = {{"dim", static_cast<double>(a.rows())}, {"seed", static_cast<double>(c.seed)}, {"kappa", q.kappa},
              {"k_hermiticity", q.k_hermiticity}, {"ga_symmetry", q.ga_symmetry_residual}};
  r.at_most("quasi_hermitian", "<A xi, G eta> = <G xi, A eta>", q.qh_residual, c.tol);
  r.holds("verdicts_agree", "A quasi-Hermitian iff GA symmetric iff G^1/2 A G^-1/2 self-adjoint",
          q.verdict == q.ga_verdict && q.verdict == q.k_verdict);
  r.spectra = spectrum_report(a, c.tol);
  return {r, std::nullopt};
}

inline Outcome run_riesz(const RunConfig& c) {
  rng gen(c.seed);
  const Matrix t = c.t_file.empty() ? random_with_condition(c.dim, c.kappa, gen) : read_matrix_file(c.t_file);
  const Index n = t.rows();
  Vector alpha(n);
  if (!c.alpha_file.empty()) {
    std::ifstream in(c.alpha_file);
    std::string line;
    if (!in || !std::getline(in, line)) throw error(error_kind::parse_error, "cannot read " + c.alpha_file);
    alpha = parse_complex_csv(line);
  } else {
    for (Index k = 0; k < n; ++k)
      alpha(k) = c.alpha_real ? complex(gen.uniform(-1.0, 1.0), 0.0) : gen.complex_normal();
  }
  const RieszSystem s = riesz_from(t);
  const AlphaOperator op = alpha_operator(s, alpha);
  const auto inter = verify_intertwining(op);
  const SymmetrizedAlpha sa = symmetrized_alpha(op);
  bool real = true;
  for (Index k = 0; k < n; ++k) real = real && alpha(k).imag() == 0.0;

  ScenarioResult r;
  r.name = "riesz";
  r.params = {{"dim", static_cast<double>(n)}, {"seed", static_cast<double>(c.seed)}, {"kappa", s.kappa}};
  r.at_most("biorthogonality", "<phi_n, psi_m> = delta_nm", biorthogonality_defect(s), 1e-10);
  r.at_most("frame_inverse", "S_phi = S_psi^-1",
            op_norm(s.s_phi * s.s_psi - Matrix::Identity(n, n)), 1e-10);
  r.at_most("eigen", "A phi_k = alpha_k phi_k", eigen_defect(op), 1e-10);
  r.at_most("intertwining", "S_psi A_{phi,psi} = A_{psi,phi} S_psi", std::max(inter.psi_side, inter.phi_side), 1e-10);
  if (real) r.at_most("hermiticity", "real alpha: a^alpha is self-adjoint", sa.hermiticity, 1e-10);
  std::vector<complex> target(alpha.data(), alpha.data() + n);
  r.at_most("spectrum", "sigma(A^alpha) = {alpha_n}",
            detail::sorted_distance(eigenvalues(op.a_phi_psi), target), 1e-8 * std::max(1.0, s.kappa));
  r.spectra = spectrum_report(op.a_phi_psi, 1e-8);
  return {r, std::nullopt};
}

inline Outcome run_pipmap(const RunConfig& c) {
  const Index n = c.n > 0 ? c.n : 64;
  const DiagonalSymbol a = parse_symbol(c.op_symbol);
  const MetricOperator g = MetricOperator::diagonal(parse_symbol(c.symbol), n);
  const LatticeGraph graph = generate_single_g(g);
  const OperatorProfile p = profile(a, graph);
  const OperatorProfile refl = reflect(p, graph);
  const OperatorProfile adj = profile(a, graph);  // diagonal real: A^* has the same symbol
  bool mirror = true;
  for (std::size_t r = 0; r < p.pairs.size(); ++r)
    for (std::size_t u = 0; u < p.pairs.size(); ++u) mirror = mirror && refl.pairs[r][u].bounded == adj.pairs[r][u].bounded;

  ScenarioResult r;
  r.name = "pipmap";
  r.params = {{"n", static_cast<double>(n)}};
  r.labels = {{"operator", c.op_symbol}, {"metric", c.symbol}};
  r.holds("d_initial", "the domain set d(A) is an initial subset", p.d_initial);
  r.holds("i_final", "the range set i(A) is a final subset", p.i_final);
  r.holds("adjoint_reflection", "j(A^*) is the reflection of j(A)", mirror);
  r.holds("s_lattice_closed", "s(A) is invariant under the lattice operations", s_set_lattice_closed(a, graph, p));
  r.lattice = graph;
  return {r, to_json(p)};
}

inline Outcome run_klmn(const RunConfig& c) {
  if (c.example != "dirichlet-pi")
    throw error(error_kind::parameter_domain, "unknown klmn example '" + c.example + "' (dirichlet-pi)");
  const Index n = c.n > 0 ? c.n : 200;
  const FormPair fp = dirichlet_pi(n);
  const KlmnResult k = klmn_restrict(fp, std::isnan(c.probe) ? std::optional<double>(0.0) : c.probe);
  ScenarioResult r;
  r.name = "klmn";
  r.params = {{"n", static_cast<double>(n)}, {"probe", k.probe}, {"certificate", k.certificate}};
  double worst = 0.0;
  for (int m = 1; m <= 3 && m <= k.eigenvalues.size(); ++m)
    worst = std::max(worst, std::abs(k.eigenvalues(m - 1) - m * m) / (m * m));
  r.at_most("sturm_liouville", "-u'' on [0,pi] with Dirichlet ends has eigenvalues n^2", worst, 1e-3);
  r.at_least("certificate", "Q - lambda M is boundedly invertible at the probe", k.certificate, k.certificate_threshold);
  SpectrumReport sp;
  sp.values = k.eigenvalues.cast<complex>();
  sp.residuals = RealVector::Zero(k.eigenvalues.size());
  for (Index j = 0; j < k.eigenvalues.size(); ++j) {
    const Vector v = k.vectors.col(j);
    sp.residuals(j) = (fp.q * v - k.eigenvalues(j) * (fp.m * v)).norm();
  }
  sp.eigenvalues = cluster_values(sp.values, 1e-9);
  r.spectra = sp;
  return {r, std::nullopt};
}

inline Outcome run_scenario(const RunConfig& c) {
  const std::string& s = c.scenario;
  if (s == "example-3.13") return {example_313(c.n > 0 ? c.n : 201, c.l > 0 ? c.l : 10.0), std::nullopt};
  if (s == "example-3.14") return {example_314(c.n > 0 ? c.n : 400, c.l > 0 ? c.l : 10.0), std::nullopt};
  if (s == "weighted-lattice")
    return {weighted_lattice_demo(c.model, c.n > 0 ? c.n : 64, c.seed, c.alpha, c.l > 0 ? c.l : 8.0), std::nullopt};
  if (s == "samsonov") return {samsonov(c.n > 0 ? c.n : 200, c.l > 0 ? c.l : 40.0, c.d, c.b), std::nullopt};
  if (s == "shifted-oscillator") return {shifted_oscillator(c.n > 0 ? c.n : 64, c.alpha, c.omega), std::nullopt};
  throw error(error_kind::parameter_domain,
              "unknown scenario '" + s +
                  "' (example-3.13, example-3.14, weighted-lattice, samsonov, shifted-oscillator)");
}

inline bool input_error(error_kind k) {
  switch (k) {
    case error_kind::parse_error:
    case error_kind::dimension_mismatch:
    case error_kind::parameter_domain:
    case error_kind::grid_too_coarse:
    case error_kind::length_mismatch:
    case error_kind::unsupported:
      return true;
    default:
      return false;
  }
}

/// Splices "--key value" pairs from the config file in front of the user's
/// own flags so that the latter win.
inline std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i + 1 < args.size(); ++i)
    if (args[i] == "--config") path = args[i + 1];
  for (const auto& a : args)
    if (a.rfind("--config=", 0) == 0) path = a.substr(9);
  if (path.empty() || args.size() < 2) return args;
  std::vector<std::string> injected;
  for (const auto& [k, v] : read_config(path)) {
    if (k == "alpha-real") {
      if (v == "true" || v == "1") injected.push_back("--alpha-real");
      continue;
    }
    injected.push_back("--" + k);
    injected.push_back(v);
  }
  args.insert(args.begin() + 2, injected.begin(), injected.end());
  return args;
}

inline int run(const std::vector<std::string>& raw, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  std::vector<std::string> args;
  try {
    args = expand_config(raw);
  } catch (const error& e) {
    err << e.what() << '\n';
    return 2;
  }
  CLI::App app{"metriclat: metric operators, lattices and similarity checks"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  RunConfig c;
  std::string config_path;

  auto common = [&](CLI::App* s) {
    s->add_option("--n", c.n, "grid size / elements / truncation");
    s->add_option("--dim", c.dim, "matrix dimension for random inputs")->check(CLI::PositiveNumber);
    s->add_option("--seed", c.seed, "64-bit seed for the mt19937_64 generator");
    s->add_option("--tol", c.tol, "tolerance")->check(CLI::PositiveNumber);
    s->add_option("--out", c.out, "output directory");
    s->add_option("--format", c.format, "json | csv | both")->check(CLI::IsMember({"json", "csv", "both"}));
    s->add_option("--alpha", c.alpha, "alpha (oscillator shift, exp weight)");
    s->add_option("--omega", c.omega, "oscillator frequency");
    s->add_option("--d", c.d, "Robin parameter d");
    s->add_option("--b", c.b, "Robin parameter b");
    s->add_option("--l", c.l, "domain length or half-extent");
    s->add_option("--kappa", c.kappa, "condition number for random T or G")->check(CLI::Range(1.0, 1e12));
    s->add_option("--config", config_path, "flat key = value file; flags override it");
  };
  auto matrices = [&](CLI::App* s) {
    s->add_option("--a", c.a_file, "matrix file for A");
    s->add_option("--b-matrix", c.b_file, "matrix file for B");
    s->add_option("--t", c.t_file, "matrix file for T");
    s->add_option("--g", c.g_file, "matrix file for G");
  };

  auto* lattice = app.add_subcommand("lattice", "nine-node lattice of a diagonal symbol");
  common(lattice);
  lattice->add_option("--symbol", c.symbol, "metric symbol c,p,q[+c,p,q...]");
  auto* similarity = app.add_subcommand("similarity", "intertwining and spectra of B = T A T^-1");
  common(similarity);
  matrices(similarity);
  auto* quasiherm = app.add_subcommand("quasiherm", "quasi-Hermiticity of A with respect to G");
  common(quasiherm);
  matrices(quasiherm);
  auto* riesz = app.add_subcommand("riesz", "Riesz system from T and the operators A^alpha");
  common(riesz);
  riesz->add_option("--t", c.t_file, "matrix file for T");
  riesz->add_option("--alpha-csv", c.alpha_file, "file with one CSV line of alpha values");
  riesz->add_flag("--alpha-real", c.alpha_real, "draw real alpha values");
  auto* pipmap = app.add_subcommand("pipmap", "operator profile over the lattice of a symbol");
  common(pipmap);
  pipmap->add_option("--symbol", c.symbol, "metric symbol");
  pipmap->add_option("--operator", c.op_symbol, "operator symbol");
  auto* klmn = app.add_subcommand("klmn", "self-adjoint restriction of a form pair");
  common(klmn);
  klmn->add_option("--example", c.example, "dirichlet-pi");
  klmn->add_option("--probe", c.probe, "probe point lambda");
  auto* scenario = app.add_subcommand("scenario", "run a packaged scenario");
  common(scenario);
  scenario->add_option("name", c.scenario, "scenario name")->required();
  scenario->add_option("--model", c.model, "x2 | exp_a (weighted-lattice)");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();  // program name
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n' << app.help();
    return 2;
  }
  c.command = app.get_subcommands().front()->get_name();

  try {
    const output_format fmt = parse_format(c.format);
    Outcome o;
    if (c.command == "lattice") o = run_lattice(c);
    else if (c.command == "similarity") o = run_similarity(c);
    else if (c.command == "quasiherm") o = run_quasiherm(c);
    else if (c.command == "riesz") o = run_riesz(c);
    else if (c.command == "pipmap") o = run_pipmap(c);
    else if (c.command == "klmn") o = run_klmn(c);
    else o = run_scenario(c);
    write_report(c.out, o.result, fmt, o.extra ? &*o.extra : nullptr);
    for (const auto& ch : o.result.checks)
      out << (ch.passed ? "PASS " : "FAIL ") << ch.name << ' ' << ch.residual << (ch.at_least ? " >= " : " <= ")
          << ch.tolerance << '\n';
    return o.result.passed() ? 0 : 1;
  } catch (const error& e) {
    err << e.what() << '\n';
    return input_error(e.kind()) ? 2 : 1;
  } catch (const std::exception& e) {
    err << e.what() << '\n';
    return 2;
  }
}

inline int run(int argc, char** argv) { return run(std::vector<std::string>(argv, argv + argc)); }

}  // namespace metriclat::cli
