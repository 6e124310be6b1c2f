#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "semiloc/cli.hpp"

using namespace semiloc;

namespace {
struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "semiloc");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "semiloc_cli_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string write_file(const std::string& name, const std::string& contents) {
  const auto path = scratch(name);
  std::ofstream(path) << contents;
  return path.string();
}

std::map<std::string, std::string> fields(const std::string& line) {
  std::map<std::string, std::string> kv;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) {
    const auto eq = tok.find('=');
    if (eq != std::string::npos) kv[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  return kv;
}

std::vector<std::vector<double>> read_qk(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "q,K");
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    rows.push_back({std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1))});
  }
  return rows;
}
}  // namespace

TEST_CASE("simulate: deterministic CSV") {
  const auto a = invoke({"simulate", "--case", "1", "--grid", "1", "--trials", "10", "--seed", "7"});
  const auto b = invoke({"simulate", "--case", "1", "--grid", "1", "--trials", "10", "--seed", "7"});
  REQUIRE(a.code == cli::kOk);
  CHECK(a.out == b.out);
  std::istringstream in(a.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "# seed=7");
  std::getline(in, line);
  CHECK(line == cli::kSimulationCsvHeader);
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 5);

  const auto threaded = invoke({"simulate", "--case", "1", "--grid", "1", "--trials", "10", "--seed", "7", "--threads", "3"});
  CHECK(threaded.out == a.out);
  const auto other = invoke({"simulate", "--case", "1", "--grid", "1", "--trials", "10", "--seed", "8"});
  CHECK(other.out != a.out);
}

TEST_CASE("simulate: Gaussian mean row") {
  const auto r = invoke({"simulate", "--case", "2", "--grid", "1.0", "--trials", "10000", "--seed", "1", "--estimators", "mean"});
  REQUIRE(r.code == cli::kOk);
  std::istringstream in(r.out);
  const auto recs = cli::parse_simulation_csv(in);
  REQUIRE(recs.size() == 2);
  CHECK(recs[0].estimator == "mean");
  CHECK(recs[0].crb == doctest::Approx(0.001).epsilon(1e-12));
  CHECK(std::abs(recs[0].mse / recs[0].crb - 1.0) <= 0.05);
}

TEST_CASE("simulate: errors and exit codes") {
  CHECK(invoke({"simulate", "--case", "9"}).code == cli::kUsage);
  CHECK(!invoke({"simulate", "--case", "9"}).err.empty());
  CHECK(invoke({"simulate"}).code == cli::kUsage);
  CHECK(invoke({"simulate", "--case", "1", "--bogus"}).code == cli::kUsage);
  CHECK(invoke({"simulate", "--case", "1", "--trials", "0"}).code == cli::kUsage);
  CHECK(invoke({"simulate", "--case", "1", "--estimators", "mean,mode"}).code == cli::kUsage);
  CHECK(invoke({"simulate", "--case", "1", "--h", "0"}).code == cli::kUsage);
  CHECK(invoke({"simulate", "--case", "2", "--grid", "0.25", "--trials", "5"}).code == cli::kNumerical);
  CHECK(invoke({}).code == cli::kUsage);
  CHECK(invoke({"frobnicate"}).code == cli::kUsage);
}

TEST_CASE("simulate: file output round trip and plot script") {
  const auto csv = scratch("sim.csv").string();
  const auto gp = scratch("sim.gp").string();
  const auto r = invoke({"simulate", "--case", "3", "--grid", "0.5,0.9", "--trials", "30", "--seed", "3", "--out", csv,
                         "--gnuplot", gp});
  REQUIRE(r.code == cli::kOk);
  std::ifstream in(csv);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  std::istringstream parse_in(text);
  const auto recs = cli::parse_simulation_csv(parse_in);
  REQUIRE(recs.size() == 10);
  std::ostringstream again;
  cli::write_simulation_csv(again, recs, 3);
  CHECK(again.str() == text);
  CHECK(recs[0].case_label == "3");
  CHECK(recs[0].grid_param == 0.5);

  std::ifstream script(gp);
  std::stringstream s;
  s << script.rdbuf();
  CHECK(s.str().find(csv) != std::string::npos);
  CHECK(s.str().find("plot") != std::string::npos);
}

TEST_CASE("number formatting round-trips") {
  Rng rng(12);
  for (int i = 0; i < 2000; ++i) {
    const double v = std::exp(40.0 * sample_uniform(rng) - 20.0) * (sample_uniform(rng) < 0.5 ? -1.0 : 1.0);
    CHECK(std::stod(cli::format_number(v)) == v);
  }
  CHECK(cli::format_number(0.3) == "0.3");
  CHECK(cli::format_number(2.0 / 3.0, 10) == "0.6666666667");
  CHECK(cli::format_number(0.5, 10) == "0.5");
}

TEST_CASE("estimate") {
  const auto pair = write_file("pair.txt", "# two points\n5\n\n8\n");
  const auto r = invoke({"estimate", "--input", pair, "--method", "os-r", "--theta-star", "6"});
  REQUIRE(r.code == cli::kOk);
  const auto kv = fields(r.out);
  CHECK(kv.at("n") == "2");
  CHECK(std::abs(std::stod(kv.at("theta_hat")) - 6.47858) <= 1e-4);
  CHECK(std::stod(kv.at("theta_star")) == 6.0);
  CHECK(std::abs(std::stod(kv.at("delta_tilde")) - 0.379500) <= 1e-5);
  CHECK(std::abs(std::stod(kv.at("psi_hat")) - 0.560716) <= 1e-5);

  const auto three = write_file("three.txt", "1\n2\n3\n");
  const auto m = invoke({"estimate", "--input", three, "--method", "median"});
  REQUIRE(m.code == cli::kOk);
  CHECK(std::stod(fields(m.out).at("theta_hat")) == 2.0);
  CHECK(std::stod(fields(invoke({"estimate", "--input", three, "--method", "mean"}).out).at("theta_hat")) == 2.0);
  CHECK(invoke({"estimate", "--input", three, "--method", "os-c", "--h", "0.5"}).code == cli::kOk);
  CHECK(invoke({"estimate", "--input", three, "--method", "os-c", "--score", "t:3"}).code == cli::kOk);

  const auto garbage = write_file("garbage.txt", "1\n2\nseven\n4\n");
  const auto g = invoke({"estimate", "--input", garbage, "--method", "mean"});
  CHECK(g.code == cli::kUsage);
  CHECK(g.err.find("line 3") != std::string::npos);

  const auto empty = write_file("empty.txt", "# nothing\n\n");
  CHECK(invoke({"estimate", "--input", empty, "--method", "mean"}).code == cli::kUsage);
  CHECK(invoke({"estimate", "--input", scratch("missing.txt").string(), "--method", "mean"}).code == cli::kUsage);
  CHECK(invoke({"estimate", "--input", three, "--method", "mode"}).code == cli::kUsage);

  // a slope estimate of exactly zero
  const auto flat = write_file("flat.txt", "0\n11\n");
  CHECK(invoke({"estimate", "--input", flat, "--method", "os-c", "--theta-star", "5", "--h", "1e-9"}).code ==
        cli::kNumerical);
}

TEST_CASE("data file parser") {
  std::istringstream ok("  1.5\n# c\n-2e3\n\n  7  \n");
  CHECK(cli::parse_data_file(ok) == std::vector<double>{1.5, -2000.0, 7.0});
  std::istringstream bad("1\n2 3\n");
  try {
    cli::parse_data_file(bad);
    FAIL("expected DataFileError");
  } catch (const cli::DataFileError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("fisher") {
  const auto t1 = invoke({"fisher", "--dist", "t", "--nu", "1"});
  REQUIRE(t1.code == cli::kOk);
  CHECK(t1.out == "0.5\n");
  CHECK(invoke({"fisher", "--dist", "gg", "--s", "1", "--b", "1"}).out == "1\n");
  const auto t3 = invoke({"fisher", "--dist", "t", "--nu", "3", "--numeric"});
  REQUIRE(t3.code == cli::kOk);
  std::istringstream in(t3.out);
  std::string first, second;
  std::getline(in, first);
  std::getline(in, second);
  CHECK(first == "0.6666666667");
  CHECK(std::stod(fields(second).at("abs_diff")) <= 1e-6);
  const auto mix = invoke({"fisher", "--dist", "mix", "--eps", "1", "--nu", "10", "--s", "0.9", "--b", "10"});
  CHECK(std::abs(std::stod(mix.out) - 11.0 / 13.0) <= 1e-8);

  CHECK(invoke({"fisher", "--dist", "t", "--nu", "-1"}).code == cli::kUsage);
  CHECK(invoke({"fisher", "--dist", "gg", "--s", "0", "--b", "1"}).code == cli::kUsage);
  CHECK(invoke({"fisher", "--dist", "mix", "--eps", "2"}).code == cli::kUsage);
  CHECK(invoke({"fisher", "--dist", "laplace"}).code == cli::kUsage);
  CHECK(invoke({"fisher", "--dist", "gg", "--s", "0.2", "--b", "1"}).code == cli::kNumerical);
}

TEST_CASE("score-table") {
  const auto one = invoke({"score-table", "--score", "gaussian", "--points", "1"});
  REQUIRE(one.code == cli::kOk);
  const auto rows = read_qk(one.out);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0][0] == 0.5);
  CHECK(std::abs(rows[0][1] - 0.6744898) <= 1e-6);

  const auto dense = read_qk(invoke({"score-table", "--score", "gaussian"}).out);
  REQUIRE(dense.size() == 99);
  for (std::size_t i = 1; i < dense.size(); ++i) CHECK(dense[i][1] > dense[i - 1][1]);
  for (std::size_t i = 0; i < dense.size(); ++i) {
    CHECK(std::abs(dense[i][1] - oracle::normal_quantile(0.5 * (1.0 + dense[i][0]))) <= 1e-9);
  }

  const auto g = read_qk(invoke({"score-table", "--score", "gaussian", "--points", "9"}).out);
  const auto gg = read_qk(invoke({"score-table", "--score", "gg:1,1", "--points", "9"}).out);
  REQUIRE(g.size() == 9);
  REQUIRE(gg.size() == 9);
  for (std::size_t i = 0; i < 9; ++i) {
    CHECK(g[i][0] == gg[i][0]);
    CHECK(std::abs(g[i][1] - gg[i][1]) <= 1e-5);
  }
  CHECK(invoke({"score-table", "--score", "t:4", "--points", "5"}).code == cli::kOk);
  CHECK(invoke({"score-table", "--score", "cauchy"}).code == cli::kUsage);
  CHECK(invoke({"score-table", "--score", "t:-2"}).code == cli::kUsage);
  CHECK(invoke({"score-table", "--score", "gg:1"}).code == cli::kUsage);
  CHECK(invoke({"score-table", "--points", "0"}).code == cli::kUsage);
}

TEST_CASE("score spec parser") {
  CHECK(cli::parse_score_spec("gaussian").label() == "gaussian");
  CHECK(cli::parse_score_spec("t:3").eval(0.4) == RankScoreFunction::from_density(SymmetricDensity::student_t(3.0)).eval(0.4));
  CHECK(cli::parse_score_spec("gg:0.7,2").eval(0.4) ==
        RankScoreFunction::from_density(SymmetricDensity::generalized_gaussian(0.7, 2.0)).eval(0.4));
  CHECK_THROWS_AS(cli::parse_score_spec("t:"), std::invalid_argument);
  CHECK_THROWS_AS(cli::parse_score_spec("gg:1,x"), std::invalid_argument);
}
