#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "trickle/io.hpp"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = trickle::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  return cells;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) rows.push_back(split_line(line));
  return rows;
}

}  // namespace

TEST_CASE("analyze reports the long-run rates") {
  const auto r = run({"analyze", "--R", "5", "--eta", "0", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto doc = trickle::json::parse(r.out);
  CHECK(doc["mu_U"].get<double>() == doctest::Approx(3.6667).epsilon(1e-4));
  CHECK(doc["delay_rate"].get<double>() == doctest::Approx(0.064545).epsilon(1e-5));

  const auto csv = parse_csv(run({"analyze", "--R", "5", "--eta", "0"}).out);
  REQUIRE(csv.size() == 2);
  CHECK(csv[0][2] == "mu_U");
}

TEST_CASE("sweep-eta summary row") {
  const auto r = run({"sweep-eta", "--R", "5", "--steps", "101"});
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 103);
  CHECK(rows[0] == std::vector<std::string>{"kind", "eta", "delay_rate", "sigma_T_sq"});
  CHECK(rows.back()[0] == "argmin");
  CHECK(std::stod(rows.back()[1]) == doctest::Approx(0.56).epsilon(0.03 / 0.56));
}

TEST_CASE("exact and gf agree and gf is eta independent") {
  const auto e = run({"exact", "--R", "4", "--n", "20"});
  const auto g0 = run({"gf", "--R", "4", "--n", "20", "--eta", "0"});
  const auto g1 = run({"gf", "--R", "4", "--n", "20", "--eta", "0.5"});
  REQUIRE(e.code == 0);
  REQUIRE(g0.code == 0);
  REQUIRE(g1.code == 0);
  CHECK(g0.out == g1.out);
  const auto er = parse_csv(e.out), gr = parse_csv(g0.out);
  CHECK(er[0] == std::vector<std::string>{"m", "probability"});
  CHECK(gr[0] == std::vector<std::string>{"m", "probability", "dp_probability", "abs_diff"});
  REQUIRE(er.size() == gr.size());
  for (std::size_t i = 1; i < er.size(); ++i)
    CHECK(std::stod(er[i][1]) == doctest::Approx(std::stod(gr[i][1])).epsilon(1e-12));

  const auto j = trickle::json::parse(run({"exact", "--R", "4", "--n", "20", "--format", "json"}).out);
  CHECK(j["n"] == 20);
  CHECK(j["pmf"].size() == 9);
  CHECK(j.contains("variance"));
}

TEST_CASE("compare at R=30, n=1500 matches the exact mean") {
  const auto r = run({"compare", "--R", "30", "--n", "1500", "--eta", "0", "--reps", "10000", "--seed", "1"});
  REQUIRE(r.code == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 3);
  const auto& header = rows[0];
  const auto col = [&](const std::string& name) {
    return static_cast<std::size_t>(std::find(header.begin(), header.end(), name) - header.begin());
  };
  for (int i : {1, 2}) {
    const double z_exact = std::stod(rows[i][col("z_vs_exact")]);
    const double z_approx = std::stod(rows[i][col("z_vs_approx")]);
    MESSAGE(rows[i][0] << ": z vs exact " << z_exact << ", z vs asymptotic " << z_approx);
    CHECK(std::abs(z_exact) <= 3.0);
  }
}

TEST_CASE("simulate is deterministic and thread independent") {
  const std::vector<std::string> base{"simulate", "--R", "5", "--n", "60", "--reps", "300", "--seed", "11"};
  auto a_args = base, b_args = base;
  a_args.insert(a_args.end(), {"--threads", "1"});
  b_args.insert(b_args.end(), {"--threads", "3"});
  const auto a = run(a_args), b = run(b_args), c = run(a_args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out == c.out);
  CHECK(a.out.rfind("rep,H,T\n", 0) == 0);

  auto p = base;
  p.insert(p.end(), {"--engine", "protocol"});
  CHECK(run(p).out == run(p).out);
}

TEST_CASE("seed from the environment") {
  const auto explicit_seed =
      run({"simulate", "--R", "3", "--n", "20", "--reps", "50", "--seed", "123"}).out;
  setenv("TRICKLE_LAB_SEED", "123", 1);
  const auto env_seed = run({"simulate", "--R", "3", "--n", "20", "--reps", "50"}).out;
  setenv("TRICKLE_LAB_SEED", "abc", 1);
  const auto bad = run({"simulate", "--R", "3"});
  unsetenv("TRICKLE_LAB_SEED");
  CHECK(explicit_seed == env_seed);
  CHECK(bad.code == 2);
}

TEST_CASE("trace dump") {
  const std::string path = "trickle_cli_trace.json";
  const auto r = run({"simulate", "--R", "3", "--n", "12", "--reps", "2", "--engine", "protocol",
                      "--trace", path});
  REQUIRE(r.code == 0);
  std::ifstream in(path);
  const auto doc = trickle::json::parse(in);
  CHECK(doc["update_time"].size() == 13);
  CHECK(doc["final_states"][0].contains("has_fired"));
  std::remove(path.c_str());
}

TEST_CASE("histogram output") {
  const std::string path = "trickle_cli_hist.csv";
  const auto r = run({"compare", "--R", "5", "--n", "100", "--reps", "2000", "--hist-out", path,
                      "--bins", "25"});
  REQUIRE(r.code == 0);
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  const auto rows = parse_csv(ss.str());
  CHECK(rows.size() == 26);
  CHECK(rows[0][0] == "bin_lo");
  std::remove(path.c_str());
}

TEST_CASE("exit codes") {
  CHECK(run({"analyze", "--R", "0"}).code == 2);
  CHECK(run({"analyze", "--eta", "1.5"}).code == 2);
  CHECK(run({"simulate", "--tau-h", "soon"}).code == 2);
  CHECK(run({"simulate", "--engine", "renewal", "--k", "2"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"analyze", "--format", "xml"}).code == 2);
  const auto stalled = run({"simulate", "--engine", "protocol", "--n", "50", "--R", "1", "--eta",
                            "1", "--reps", "1", "--horizon", "5"});
  CHECK(stalled.code == 3);
  CHECK(stalled.err.find("engine error") != std::string::npos);
  CHECK(run({"exact", "--out", "/nonexistent-dir/out.csv"}).code == 4);
  const auto help = run({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("sweep-eta") != std::string::npos);
}

TEST_CASE("finite tau_h through the CLI") {
  const auto r = run({"simulate", "--engine", "protocol", "--tau-h", "8", "--k", "2", "--R", "3",
                      "--n", "30", "--reps", "20"});
  CHECK(r.code == 0);
  CHECK(parse_csv(r.out).size() == 21);
}
