#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "zenolab/cli.hpp"
#include "zenolab/report.hpp"

using namespace zenolab;

namespace {

struct CliRun {
  int status = 0;
  std::string out;
  std::string err;
};

CliRun run(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  CliRun r;
  r.status = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::vector<std::string> split(const std::string& line, char sep = ',') {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) rows.push_back(split(line));
  return rows;
}

std::size_t column(const std::vector<std::string>& header, const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw std::runtime_error("missing column " + name);
}

}  // namespace

TEST_CASE("format_real keeps 17 significant digits", "[report]") {
  CHECK(format_real(0.5) == "0.5");
  CHECK(format_real(0.1) == "0.10000000000000001");
  CHECK(std::stod(format_real(0.60577043649072822)) == 0.60577043649072822);
  CHECK(format_real(std::nan("")) == "nan");
}

TEST_CASE("CSV and JSON writers", "[report]") {
  Table t{{"a", "b", "c", "d"}, {}};
  t.add_row({1.0, std::uint64_t{3}, true, Cell{}});
  t.add_row({0.25, std::uint64_t{4}, false, std::string("x,y")});
  CHECK(to_csv(t) == "a,b,c,d\n1,3,true,\n0.25,4,false,\"x,y\"\n");
  const auto j = nlohmann::json::parse(to_json(t, false));
  REQUIRE(j.is_array());
  CHECK(j[0]["d"].is_null());
  CHECK(j[1]["d"] == "x,y");
  CHECK_THROWS_AS(to_json(t, true), std::logic_error);
  CHECK_THROWS_AS(t.add_row({1.0}), std::logic_error);
}

TEST_CASE("survival subcommand emits a JSON object", "[cli]") {
  const auto r = run({"survival", "--alpha", "1", "--tau", "0.5", "--k", "1", "--n", "100", "--format", "json"});
  REQUIRE(r.status == 0);
  CHECK(r.err.empty());
  const auto j = nlohmann::json::parse(r.out);
  REQUIRE(j.is_object());
  CHECK(j["exact"].get<double>() == Catch::Approx(0.60577043649072822).epsilon(1e-13));
  CHECK(j["regime"] == "anti_zeno");
  CHECK(j["approx_valid"] == false);
  CHECK(j["n"] == 100);
}

TEST_CASE("hamlet subcommand with zero coupling", "[cli]") {
  const auto r = run({"hamlet", "--alpha", "0", "--tau", "0.5", "--beta", "0.8", "--gamma", "0.4", "--ln-n", "10"});
  REQUIRE(r.status == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[1][column(rows[0], "survival")] == "1");
  CHECK(rows[1][column(rows[0], "k")] == "1.2");
}

TEST_CASE("hamlet defaults cover three ratios", "[cli]") {
  const auto r = run({"hamlet", "--alpha", "1", "--tau", "0.5", "--format", "json"});
  REQUIRE(r.status == 0);
  const auto j = nlohmann::json::parse(r.out);
  REQUIRE(j.is_array());
  CHECK(j.size() == 15);
  CHECK(j.back()["ratio"].get<double>() == Catch::Approx(2.0));
  CHECK(j.back()["limit"].get<double>() == Catch::Approx(0.93233235838169365));
}

TEST_CASE("zeno and antizeno grids", "[cli]") {
  const auto z = run({"zeno", "--alpha", "1", "--tau", "0.5"});
  REQUIRE(z.status == 0);
  auto rows = parse_csv(z.out);
  REQUIRE(rows.size() == 7);
  const auto exact = column(rows[0], "exact");
  for (std::size_t i = 2; i < rows.size(); ++i) CHECK(std::stod(rows[i][exact]) > std::stod(rows[i - 1][exact]));
  CHECK(rows[1][column(rows[0], "limit_ref")] == "1");

  const auto a = run({"antizeno", "--alpha", "1", "--tau", "0.5", "--n", "1000,1000000"});
  REQUIRE(a.status == 0);
  rows = parse_csv(a.out);
  REQUIRE(rows.size() == 3);
  CHECK(std::abs(std::stod(rows[2][column(rows[0], "limit_gap")])) < 1e-6);
}

TEST_CASE("iterated subcommand", "[cli]") {
  const auto r = run({"iterated", "--alpha", "1", "--tau", "0.5", "--format", "json"});
  REQUIRE(r.status == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(std::abs(j["limit_k_then_n"].get<double>() - 1.0) <= 1e-4);
  CHECK(std::abs(j["limit_n_at_k_one"].get<double>() - std::exp(-0.5)) <= 1e-6);
  CHECK(j["iterated_difference"].get<double>() > 0.39);

  const auto csv = run({"iterated", "--alpha", "1", "--tau", "0.5", "--ratio", "1.25,2"});
  REQUIRE(csv.status == 0);
  CHECK(csv.out.find("path_limit_spread") != std::string::npos);
}

TEST_CASE("simulate output is byte-identical across runs and worker counts", "[cli]") {
  const std::vector<std::string> base{"simulate", "--alpha", "1",   "--tau",          "0.5",    "--k",
                                      "1",        "--n",     "100", "--trajectories", "100000", "--seed", "42"};
  const auto first = run(base);
  const auto second = run(base);
  auto more = base;
  more.insert(more.end(), {"--workers", "4"});
  const auto parallel = run(more);
  REQUIRE(first.status == 0);
  CHECK(first.out == second.out);
  CHECK(first.out == parallel.out);
  const auto rows = parse_csv(first.out);
  CHECK(std::abs(std::stod(rows[1][column(rows[0], "z_vs")])) < 4.0);
}

TEST_CASE("sweep rows reproduce their own exact value", "[cli][property]") {
  const auto r = run({"sweep", "--alpha", "0.3,1", "--tau", "0.1,0.5,0.9", "--k", "0.7,1,1.37,2", "--n",
                      "1,2,17,1000,123456789"});
  REQUIRE(r.status == 0);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 1 + 2 * 3 * 4 * 5);
  const auto& h = rows[0];
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    const auto back = run({"survival", "--alpha", row[column(h, "alpha")], "--tau", row[column(h, "tau")], "--k",
                           row[column(h, "k")], "--n", row[column(h, "n")]});
    REQUIRE(back.status == 0);
    const auto again = parse_csv(back.out);
    REQUIRE(again[1][column(again[0], "exact")] == row[column(h, "exact")]);
  }
}

TEST_CASE("path sweep rows round-trip through survival", "[cli][property]") {
  const auto r = run({"sweep", "--alpha", "1", "--tau", "0.5", "--ratio", "1.25,2", "--n", "10,1000000", "--format",
                      "json"});
  REQUIRE(r.status == 0);
  const auto j = nlohmann::json::parse(r.out);
  REQUIRE(j.size() == 4);
  for (const auto& row : j) {
    CHECK_FALSE(row["hamlet_survival"].is_null());
    CHECK(row["gamma"].get<double>() == 0.4);
    const auto back = run({"survival", "--alpha", "1", "--tau", "0.5", "--k", format_real(row["k"].get<double>()),
                           "--n", std::to_string(row["n"].get<std::uint64_t>()), "--format", "json"});
    REQUIRE(back.status == 0);
    CHECK(nlohmann::json::parse(back.out)["exact"].get<double>() == row["exact"].get<double>());
  }
}

TEST_CASE("sweep with Monte Carlo columns", "[cli]") {
  const auto r = run({"sweep", "--alpha", "1", "--tau", "0.5", "--k", "1,2", "--n", "50", "--trajectories", "20000",
                      "--seed", "9"});
  REQUIRE(r.status == 0);
  const auto rows = parse_csv(r.out);
  const auto z = column(rows[0], "mc_z");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK_FALSE(rows[i][z].empty());
    CHECK(std::abs(std::stod(rows[i][z])) < 5.0);
  }
  CHECK(run({"sweep", "--alpha", "1", "--tau", "0.5", "--k", "1", "--n", "50", "--trajectories", "10"}).status != 0);
}

TEST_CASE("regime violations are surfaced as columns", "[cli]") {
  const auto r = run({"survival", "--alpha", "1", "--tau", "0.5", "--k", "1", "--n", "2"});
  REQUIRE(r.status == 0);
  const auto rows = parse_csv(r.out);
  CHECK(rows[1][column(rows[0], "outside_weak_coupling")] == "true");
  CHECK(rows[1][column(rows[0], "approx_valid")] == "false");
}

TEST_CASE("command-line errors exit nonzero with a diagnostic", "[cli]") {
  auto expect_failure = [](const std::vector<std::string>& args) {
    const auto r = run(args);
    INFO((args.empty() ? std::string("<none>") : args.front()));
    CHECK(r.status != 0);
    CHECK_FALSE(r.err.empty());
    CHECK(r.out.empty());
  };
  expect_failure({"simulate", "--alpha", "1", "--tau", "0.5", "--k", "1", "--n", "10", "--trajectories", "10"});
  expect_failure({"survival", "--alpha", "1", "--tau", "0.5", "--k", "1", "--n", "10", "--bogus", "3"});
  expect_failure({"survival", "--alpha", "5", "--tau", "1", "--k", "1", "--n", "1"});
  expect_failure({"survival", "--alpha", "1", "--tau", "0.5", "--k", "1", "--n", "9223372036854775807"});
  expect_failure({"hamlet", "--alpha", "1", "--tau", "0.5", "--n", "100", "--ln-n", "4"});
  expect_failure({"hamlet", "--alpha", "1", "--tau", "0.5", "--beta", "0.3", "--gamma", "0.4"});
  expect_failure({"sweep", "--alpha", "1", "--tau", "0.5", "--k", "1", "--ratio", "2", "--n", "10"});
  expect_failure({"survival", "--alpha", "1", "--tau", "0.5", "--k", "1", "--n", "10", "--output",
                  "/nonexistent-dir/out.csv"});
  expect_failure({});
}

TEST_CASE("output file destination", "[cli]") {
  const auto path = std::filesystem::temp_directory_path() / "zenolab_cli_test.json";
  const auto r = run({"survival", "--alpha", "1", "--tau", "0.5", "--k", "2", "--n", "1000", "--format", "json",
                      "--output", path.string()});
  REQUIRE(r.status == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  const auto j = nlohmann::json::parse(in);
  CHECK(j["approx"].get<double>() == Catch::Approx(0.99975));
  std::filesystem::remove(path);
}
