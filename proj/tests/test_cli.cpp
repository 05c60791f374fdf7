#include "ergo/cli.hpp"

#include <doctest.h>

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace {
struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = ergo::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("ergo_cli_" + name)).string();
}
}  // namespace

TEST_CASE("cli examples") {
  auto r = run({"sieve", "--limit", "10"});
  CHECK(r.code == 0);
  CHECK(r.out == "2 3 5 7\n");
  r = run({"gauss", "--k", "1", "--k-double-prime", "0", "--gamma-degree", "2", "--gamma-only", "2", "--q", "3", "--a", "1"});
  CHECK(r.code == 0);
  CHECK(r.out.find("modulus 0.5773502692") != std::string::npos);
  r = run({"seminorm", "--mode", "jump", "--values", "0,1,0,1", "--times", "1,2,3,4"});
  CHECK(r.code == 0);
  CHECK(r.out == "1.7320508076\n");
}

TEST_CASE("cli errors") {
  CHECK(run({"sieve", "--limit", "10", "--bogus"}).code == 1);
  CHECK(run({}).code == 1);
  CHECK(run({"gauss", "--q", "4", "--a", "2"}).code == 1);
  CHECK(run({"seminorm", "--mode", "variation", "--values", "0,x"}).code == 1);
  CHECK(run({"arcs", "--tau", "0.7"}).code == 1);
  CHECK(run({"verify", "iw_family"}).code == 1);
  auto r = run({"sieve", "--limit", "100000000000"});
  CHECK(r.code == 2);
  CHECK(r.err.find("resource") != std::string::npos);
}

TEST_CASE("cli seminorm modes") {
  CHECK(run({"seminorm", "--mode", "variation", "--values", "0,1,0", "--r", "2"}).out == "1.4142135624\n");
  CHECK(run({"seminorm", "--mode", "jump-count", "--values", "0,1,0,1", "--lambda", "1"}).out == "3\n");
  CHECK(run({"seminorm", "--mode", "oscillation", "--values", "0,1,0,1", "--times", "1,2,3,4", "--sequence", "1,2,4"})
            .out == "1.0000000000\n");
}

TEST_CASE("cli weyl") {
  auto r = run({"weyl", "--gamma", "2", "--xi-num", "1", "--xi-den", "4", "--t", "4.5"});
  CHECK(r.code == 0);
  CHECK(r.out.find("real 5.0000000000\nimag 4.0000000000") == 0);
}

TEST_CASE("cli operators on files") {
  const auto in = temp_path("delta.txt"), out = temp_path("avg.txt");
  {
    std::ofstream f(in);
    f << "0 1 0\n";
  }
  auto r = run({"average", "--signal", in, "--t", "2.5", "--output", out});
  CHECK(r.code == 0);
  const std::string text = slurp(out);
  CHECK(std::count(text.begin(), text.end(), '\n') >= 5);
  r = run({"twisted", "--signal", in, "--t", "2.5", "--twist", "0.5:1"});
  CHECK(r.code == 0);
  r = run({"cotlar", "--signal", in, "--t", "3.5"});
  CHECK(r.code == 0);
  std::remove(in.c_str());
  std::remove(out.c_str());
}

TEST_CASE("cli arcs") {
  auto r = run({"arcs", "--what", "fractions", "--n", "2", "--gamma-degree", "2"});
  CHECK(r.out.rfind("count 4\n", 0) == 0);
  r = run({"arcs", "--what", "support", "--s", "2", "--gamma", "1"});
  CHECK(r.out.find("Q_s 2\n") != std::string::npos);
  r = run({"arcs", "--what", "bump", "--xi", "0", "--gamma", "1", "--t", "4"});
  CHECK(r.out == "1.0000000000\n");
  r = run({"arcs", "--what", "plan", "--gamma-degree", "2"});
  CHECK(r.code == 0);
  CHECK(r.out.find("\"varrho\"") != std::string::npos);
}

TEST_CASE("cli config file and verify") {
  const auto cfg = temp_path("cfg.ini"), report = temp_path("report.json");
  {
    std::ofstream f(cfg);
    f << "# defaults\n[sieve]\nlimit=30\n";
  }
  auto r = run({"--config", cfg, "sieve", "--limit", "12"});
  CHECK(r.out == "2 3 5 7 11\n");
  r = run({"--config", cfg, "sieve"});
  CHECK(r.out == "2 3 5 7 11 13 17 19 23 29\n");
  r = run({"verify", "iw_family", "--seed", "1", "--output", report});
  CHECK(r.code == 0);
  CHECK(r.out.find("criterion 7 PASS") != std::string::npos);
  const std::string first = slurp(report);
  CHECK(nlohmann::json::parse(first).at("experiment") == "iw_family");
  // identical arguments give identical files
  run({"verify", "iw_family", "--seed", "1", "--output", report});
  CHECK(slurp(report) == first);
  std::remove(cfg.c_str());
  std::remove(report.c_str());
}
