#pragma once

// Serialization of results: result.json, spectra.csv, lattice.json and
// operator profiles. Files are written to a temporary name and renamed into
// place.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "metriclat/lattice.hpp"
#include "metriclat/pipengine.hpp"
#include "metriclat/scenarios.hpp"

namespace metriclat {

using json = nlohmann::json;

inline constexpr const char* schema_version = "metriclat/1";

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Non-finite numbers become null.
inline json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw error(error_kind::parse_error, "cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw error(error_kind::parse_error, "write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline json to_json(const Check& c) {
  return {{"name", c.name},         {"anchor", c.anchor},           {"passed", c.passed},
          {"value", number(c.residual)}, {"bound", number(c.tolerance)}, {"relation", c.at_least ? ">=" : "<="}};
}

inline json to_json(const LatticeGraph& g) {
  json nodes = json::array(), edges = json::array();
  for (std::size_t i = 0; i < g.nodes().size(); ++i)
    nodes.push_back({{"id", i}, {"label", g.nodes()[i].label.to_string()}});
  for (const auto& e : g.edges())
    edges.push_back({{"lower", e.lower}, {"upper", e.upper}, {"holds", e.order.holds},
                     {"gamma", number(e.order.gamma)}, {"symbolic", e.order.symbolic}});
  return {{"schema", schema_version}, {"nodes", nodes}, {"edges", edges}};
}

/// "X|Y" -> {bounded, norm} for every domain/codomain pair.
inline json to_json(const OperatorProfile& p) {
  json pairs = json::object();
  for (std::size_t r = 0; r < p.pairs.size(); ++r)
    for (std::size_t u = 0; u < p.pairs.size(); ++u) {
      const RepNorm& n = p.pairs[r][u];
      pairs[p.labels[r] + "|" + p.labels[u]] = {{"bounded", n.bounded},
                                                {"norm", n.bounded ? number(n.norm) : json(nullptr)}};
    }
  auto names = [&](const std::vector<std::size_t>& s) {
    json a = json::array();
    for (std::size_t k : s) a.push_back(p.labels[k]);
    return a;
  };
  return {{"pairs", pairs},          {"s_set", names(p.s_set)},       {"d_set", names(p.d_set)},
          {"i_set", names(p.i_set)}, {"d_initial", p.d_initial},      {"i_final", p.i_final}};
}

inline std::string spectra_csv(const SpectrumReport& s) {
  std::ostringstream os;
  os.precision(17);
  os << "index,re,im,residual\n";
  for (Index k = 0; k < s.values.size(); ++k)
    os << k << ',' << s.values(k).real() << ',' << s.values(k).imag() << ',' << s.residuals(k) << '\n';
  return os.str();
}

inline json to_json(const ScenarioResult& r, bool with_timestamp = true) {
  json params = json::object(), labels = json::object(), checks = json::array();
  for (const auto& [k, v] : r.params) params[k] = number(v);
  for (const auto& [k, v] : r.labels) labels[k] = v;
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  json j = {{"schema", schema_version}, {"name", r.name},       {"params", params},
            {"labels", labels},         {"checks", checks},     {"passed", r.passed()},
            {"artifacts", r.artifacts}};
  if (with_timestamp) j["timestamp"] = utc_timestamp();
  return j;
}

enum class output_format { json, csv, both };

inline output_format parse_format(const std::string& s) {
  if (s == "json") return output_format::json;
  if (s == "csv") return output_format::csv;
  if (s == "both") return output_format::both;
  throw error(error_kind::parse_error, "format must be json, csv or both");
}

/// Writes the result and its side files into `dir`; returns the paths written.
inline std::vector<std::string> write_report(const std::filesystem::path& dir, ScenarioResult r,
                                             output_format fmt, const json* extra = nullptr) {
  const bool want_json = fmt != output_format::csv, want_csv = fmt != output_format::json;
  if (r.spectra && want_csv) r.artifacts.push_back((dir / "spectra.csv").string());
  if (r.lattice && want_json) r.artifacts.push_back((dir / "lattice.json").string());
  if (extra && want_json) r.artifacts.push_back((dir / "profile.json").string());

  if (r.spectra && want_csv) write_atomic(dir / "spectra.csv", spectra_csv(*r.spectra));
  if (r.lattice && want_json) write_atomic(dir / "lattice.json", to_json(*r.lattice).dump(2) + "\n");
  if (extra && want_json) write_atomic(dir / "profile.json", extra->dump(2) + "\n");
  // result.json is always written so the exit status has a record.
  write_atomic(dir / "result.json", to_json(r).dump(2) + "\n");
  auto out = r.artifacts;
  out.push_back((dir / "result.json").string());
  return out;
}

}  // namespace metriclat
