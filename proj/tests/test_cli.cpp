#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "metriclat/cli.hpp"

namespace fs = std::filesystem;
using namespace metriclat;
using json = nlohmann::json;

namespace {

struct CliRun {
  int code;
  std::string out, err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "metriclat");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("metriclat_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

json load(const fs::path& p) { return json::parse(slurp(p)); }

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

int passed_checks(const json& j) {
  int k = 0;
  for (const auto& c : j["checks"]) k += c["passed"].get<bool>() ? 1 : 0;
  return k;
}

}  // namespace

TEST(Cli, ShiftedOscillatorExample) {
  const fs::path dir = scratch("osc");
  const CliRun r = run({"scenario", "shifted-oscillator", "--n", "64", "--alpha", "0.5", "--omega", "1", "--out",
                     dir.string()});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  const json j = load(dir / "result.json");
  EXPECT_EQ(j["schema"], "metriclat/1");
  EXPECT_EQ(j["checks"].size(), 3u);
  EXPECT_EQ(passed_checks(j), 3);
  EXPECT_TRUE(j["passed"].get<bool>());
  EXPECT_TRUE(j.contains("timestamp"));
}

TEST(Cli, RieszExample) {
  const fs::path dir = scratch("riesz");
  const CliRun r = run({"riesz", "--dim", "64", "--seed", "7", "--alpha-real", "--out", dir.string()});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  const json j = load(dir / "result.json");
  bool saw_hermiticity = false;
  for (const auto& c : j["checks"]) saw_hermiticity = saw_hermiticity || c["name"] == "hermiticity";
  EXPECT_TRUE(saw_hermiticity);
  EXPECT_NE(r.out.find("PASS biorthogonality"), std::string::npos);
}

TEST(Cli, KlmnExample) {
  const fs::path dir = scratch("klmn");
  const CliRun r = run({"klmn", "--example", "dirichlet-pi", "--n", "200", "--out", dir.string()});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_TRUE(load(dir / "result.json")["passed"].get<bool>());
}

TEST(Cli, LatticeAndPipmapWriteExtras) {
  const fs::path dir = scratch("pipmap");
  CliRun r = run({"lattice", "--n", "32", "--out", dir.string()});
  EXPECT_EQ(r.code, 0) << r.err;
  const json lat = load(dir / "lattice.json");
  EXPECT_EQ(lat["nodes"].size(), 9u);
  EXPECT_EQ(lat["edges"].size(), 12u);

  r = run({"pipmap", "--n", "32", "--operator", "1,1,0", "--out", dir.string()});
  EXPECT_EQ(r.code, 0) << r.err;
  const json prof = load(dir / "profile.json");
  for (const char* key : {"pairs", "s_set", "d_set", "i_set", "d_initial", "i_final"})
    EXPECT_TRUE(prof.contains(key)) << key;
}

TEST(Cli, SimilarityAndQuasihermRandom) {
  const fs::path dir = scratch("random");
  EXPECT_EQ(run({"similarity", "--dim", "12", "--seed", "3", "--out", dir.string()}).code, 0);
  EXPECT_EQ(run({"quasiherm", "--dim", "12", "--seed", "3", "--out", dir.string()}).code, 0);
}

TEST(Cli, FailingCheckExitsOne) {
  const fs::path dir = scratch("fail");
  write_text(dir / "a.txt", "2\n1 2\n0 1\n");
  const CliRun r = run({"quasiherm", "--a", (dir / "a.txt").string(), "--out", dir.string()});
  EXPECT_EQ(r.code, 1) << r.err;
  EXPECT_NE(r.out.find("FAIL quasi_hermitian"), std::string::npos);
  EXPECT_FALSE(load(dir / "result.json")["passed"].get<bool>());

  write_text(dir / "b.txt", "2\n5 0\n0 7\n");
  EXPECT_EQ(run({"similarity", "--a", (dir / "a.txt").string(), "--b-matrix", (dir / "b.txt").string(), "--out",
                 dir.string()})
                .code,
            1);
}

TEST(Cli, UsageErrorsExitTwo) {
  const fs::path dir = scratch("usage");
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"bogus"}).code, 2);
  EXPECT_EQ(run({"riesz", "--format", "xml"}).code, 2);
  EXPECT_EQ(run({"riesz", "--dim", "-3"}).code, 2);
  EXPECT_EQ(run({"scenario"}).code, 2);
  EXPECT_EQ(run({"scenario", "no-such-thing", "--out", dir.string()}).code, 2);
  EXPECT_EQ(run({"scenario", "shifted-oscillator", "--n", "8", "--out", dir.string()}).code, 2);
  EXPECT_EQ(run({"klmn", "--example", "neumann", "--out", dir.string()}).code, 2);
  EXPECT_EQ(run({"quasiherm", "--a", (dir / "missing.txt").string(), "--out", dir.string()}).code, 2);
  EXPECT_EQ(run({"riesz", "--config", (dir / "missing.cfg").string()}).code, 2);
}

TEST(Cli, HelpExitsZero) {
  const CliRun r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("scenario"), std::string::npos);
}

TEST(Cli, MalformedMatrixIsInputError) {
  const fs::path dir = scratch("malformed");
  write_text(dir / "a.txt", "2\n1 2\n0\n");
  EXPECT_EQ(run({"quasiherm", "--a", (dir / "a.txt").string(), "--out", dir.string()}).code, 2);
  write_text(dir / "a.txt", "2\n1 2\n0 1x\n");
  EXPECT_EQ(run({"quasiherm", "--a", (dir / "a.txt").string(), "--out", dir.string()}).code, 2);
}

TEST(Cli, ResultIsDeterministicApartFromTimestamp) {
  const fs::path dir = scratch("determinism");
  auto once = [&] {
    EXPECT_EQ(run({"riesz", "--dim", "16", "--seed", "11", "--out", dir.string()}).code, 0);
    json j = load(dir / "result.json");
    j.erase("timestamp");
    return j.dump();
  };
  const std::string first = once();
  EXPECT_EQ(first, once());
}

TEST(Cli, ConfigFileWithFlagOverride) {
  const fs::path dir = scratch("config");
  write_text(dir / "run.cfg",
             "# oscillator settings\n"
             "n = 40\n"
             "alpha = 0.25\n"
             "out = " + dir.string() + "\n");
  ASSERT_EQ(run({"scenario", "shifted-oscillator", "--config", (dir / "run.cfg").string()}).code, 0);
  json j = load(dir / "result.json");
  EXPECT_DOUBLE_EQ(j["params"]["alpha"].get<double>(), 0.25);

  ASSERT_EQ(run({"scenario", "shifted-oscillator", "--config", (dir / "run.cfg").string(), "--alpha", "0.75"}).code,
            0);
  j = load(dir / "result.json");
  EXPECT_DOUBLE_EQ(j["params"]["alpha"].get<double>(), 0.75);

  write_text(dir / "bad.cfg", "just words\n");
  EXPECT_EQ(run({"riesz", "--config", (dir / "bad.cfg").string()}).code, 2);
}

TEST(Cli, ConfigBooleanFlag) {
  const fs::path dir = scratch("config_bool");
  write_text(dir / "run.cfg", "alpha-real = true\ndim = 8\nout = " + dir.string() + "\n");
  const CliRun r = run({"riesz", "--config", (dir / "run.cfg").string()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("hermiticity"), std::string::npos);
}

TEST(Cli, FormatSelectsFiles) {
  const fs::path csv = scratch("fmt_csv"), both = scratch("fmt_both"), js = scratch("fmt_json");
  ASSERT_EQ(run({"riesz", "--dim", "8", "--format", "csv", "--out", csv.string()}).code, 0);
  EXPECT_TRUE(fs::exists(csv / "spectra.csv"));
  EXPECT_TRUE(fs::exists(csv / "result.json"));

  ASSERT_EQ(run({"riesz", "--dim", "8", "--format", "json", "--out", js.string()}).code, 0);
  EXPECT_FALSE(fs::exists(js / "spectra.csv"));

  ASSERT_EQ(run({"riesz", "--dim", "8", "--format", "both", "--out", both.string()}).code, 0);
  const std::string text = slurp(both / "spectra.csv");
  EXPECT_EQ(text.rfind("index,re,im,residual\n", 0), 0u);
  std::size_t lines = 0;
  for (char ch : text) lines += ch == '\n';
  EXPECT_EQ(lines, 9u);
  const json j = load(both / "result.json");
  ASSERT_EQ(j["artifacts"].size(), 1u);
  EXPECT_EQ(fs::path(j["artifacts"][0].get<std::string>()).filename(), "spectra.csv");

  for (const auto& dir : {csv, both, js})
    for (const auto& e : fs::directory_iterator(dir)) EXPECT_NE(e.path().extension(), ".tmp") << e.path();
}

TEST(Cli, AlphaCsvFile) {
  const fs::path dir = scratch("alpha_csv");
  write_text(dir / "alpha.csv", "1, -2, 0.5+0.5i, 3i\n");
  write_text(dir / "t.txt", "4\n2 0 0 0\n0 1 0 0\n0 0 1 1\n0 0 0 1\n");
  const CliRun r = run({"riesz", "--t", (dir / "t.txt").string(), "--alpha-csv", (dir / "alpha.csv").string(), "--out",
                     dir.string()});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_EQ(r.out.find("hermiticity"), std::string::npos);

  write_text(dir / "short.csv", "1,2\n");
  EXPECT_EQ(run({"riesz", "--t", (dir / "t.txt").string(), "--alpha-csv", (dir / "short.csv").string(), "--out",
                 dir.string()})
                .code,
            2);
}

TEST(MatrixIo, ParseComplexForms) {
  EXPECT_EQ(parse_complex("2.5"), complex(2.5, 0));
  EXPECT_EQ(parse_complex("-3i"), complex(0, -3));
  EXPECT_EQ(parse_complex("i"), complex(0, 1));
  EXPECT_EQ(parse_complex("-i"), complex(0, -1));
  EXPECT_EQ(parse_complex("1-2i"), complex(1, -2));
  EXPECT_EQ(parse_complex("1e-3+2e+1i"), complex(1e-3, 20));
  EXPECT_EQ(parse_complex("4+i"), complex(4, 1));
  for (const char* bad : {"", "abc", "1+2", "1..2i", "1+xi"}) EXPECT_THROW(parse_complex(bad), error) << bad;
}

TEST(MatrixIo, RoundTripIsExact) {
  rng gen(5);
  const Matrix m = random_matrix(7, gen);
  std::stringstream s;
  write_matrix(s, m);
  EXPECT_EQ(read_matrix(s), m);
}

TEST(MatrixIo, RejectsBadInput) {
  std::stringstream a("0\n"), b("2\n1 2 3\n"), c("2\n1 2 3 4 5\n");
  EXPECT_THROW(read_matrix(a), error);
  EXPECT_THROW(read_matrix(b), error);
  EXPECT_THROW(read_matrix(c), error);
}

#ifdef METRICLAT_CLI_PATH
TEST(CliBinary, ExitStatusReachesShell) {
  const fs::path dir = scratch("binary");
  const std::string exe = METRICLAT_CLI_PATH;
  auto status = [&](const std::string& args) {
    const int raw = std::system(("\"" + exe + "\" " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  EXPECT_EQ(status("klmn --n 200 --out \"" + dir.string() + "\""), 0);
  EXPECT_EQ(status("scenario nope --out \"" + dir.string() + "\""), 2);
  EXPECT_TRUE(fs::exists(dir / "result.json"));
}
#endif
