// End-to-end runs of the command line front end.

#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "stochord/cli.hpp"
#include "stochord/errors.hpp"

using namespace stochord;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = STOCHORD_FIXTURES;

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "stochord");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("stochord-test-cli-" + name);
  fs::remove_all(dir);
  return dir;
}

std::string fixture(const char* name) { return (kFixtures / name).string(); }

}  // namespace

TEST_CASE("indices subcommand", "[cli]") {
  const auto dir = scratch_dir("indices");
  const auto r = run({"indices", "--f", fixture("normal_100_10.json"), "--g",
                      R"({"kind":"normal","mean":116,"sd":20})", "--grid", "10001", "--out", dir.string()});
  REQUIRE(r.code == 0);
  const auto report = Json::parse(r.out);
  CHECK(report["command"] == "indices");
  CHECK(report["config"]["grid"] == 10001);
  CHECK(std::abs(report["result"]["gamma"].get<double>() - 0.05) < 0.005);
  CHECK(report["config_hash"] == config_hash(report["config"]));
  CHECK(fs::exists(dir / "indices.json"));
  CHECK(fs::exists(dir / "indices.timing.json"));
  CHECK_FALSE(Json::parse(read_file(dir / "indices.json")).contains("started_utc"));
}

TEST_CASE("galton subcommand on fixture files", "[cli]") {
  const auto dir = scratch_dir("galton");
  const auto r = run({"galton", "--x", fixture("galton_x.csv"), "--y", fixture("galton_y.csv"), "--header", "--out",
                      dir.string()});
  REQUIRE(r.code == 0);
  const auto res = Json::parse(r.out)["result"];
  CHECK(res["count"] == 2);
  CHECK(res["n"] == 15);
  CHECK(res["p_value"].get<double>() == 3.0 / 16.0);
}

TEST_CASE("test-gamma subcommand", "[cli]") {
  const auto dir = scratch_dir("test");
  const auto r = run({"test-gamma", "--x", fixture("galton_x.csv"), "--y", fixture("galton_y.csv"), "--header",
                      "--gamma0", "0.5", "--B", "200", "--seed", "4", "--out", dir.string()});
  REQUIRE(r.code == 0);
  const auto res = Json::parse(r.out)["result"];
  CHECK(res["U"].get<double>() >= res["estimate"].get<double>());
  CHECK(res["reject"].get<bool>() == (res["U"].get<double>() < 0.5));
  CHECK(res["seed"]["seed"] == 4);
}

TEST_CASE("simulate-table subcommand", "[cli]") {
  const auto dir = scratch_dir("table");
  const auto r = run({"simulate-table", "--case", "1", "--family", "t1", "--gamma0", "0.05", "--n", "100", "--reps",
                      "50", "--B", "50", "--seed", "7", "--out", dir.string()});
  REQUIRE(r.code == 0);
  const auto cell = Json::parse(r.out)["result"]["cells"][0];
  const double p = cell["proportion"].get<double>();
  CHECK(cell["mc_se"].get<double>() == Catch::Approx(std::sqrt(p * (1 - p) / 50)));
  CHECK(cell["reference"].get<double>() == Catch::Approx(0.142));
  const auto csv = read_file(dir / "table1.csv");
  CHECK(csv.starts_with("gamma0,n,case1-t1\n0.05,100,"));
  CHECK(fs::exists(dir / "table1_cells.csv"));
}

TEST_CASE("reports rerun byte for byte with any thread count", "[cli]") {
  const auto a = scratch_dir("rerun-a");
  const auto b = scratch_dir("rerun-b");
  REQUIRE(run({"simulate-table", "--case", "2", "--family", "mixture", "--gamma0", "0.1", "--n", "100", "--reps",
               "40", "--B", "40", "--seed", "11", "--threads", "1", "--out", a.string()})
              .code == 0);
  const auto r = run({"rerun", (a / "table1.json").string(), "--threads", "3", "--out", b.string()});
  REQUIRE(r.code == 0);
  CHECK(read_file(a / "table1.json") == read_file(b / "table1.json"));
  CHECK(read_file(a / "table1.csv") == read_file(b / "table1.csv"));

  REQUIRE(run({"bridge-lab", "--paths", "300", "--bridge-grid", "256", "--subset", "0.1:0.5", "--seed", "3", "--out",
               a.string()})
              .code == 0);
  REQUIRE(run({"rerun", (a / "bridge_occupation.json").string(), "--threads", "4", "--out", b.string()}).code == 0);
  CHECK(read_file(a / "bridge_occupation.json") == read_file(b / "bridge_occupation.json"));
  CHECK(read_file(a / "bridge_occupation.csv") == read_file(b / "bridge_occupation.csv"));

  REQUIRE(run({"limit-law", "--n", "300", "--reps", "40", "--seed", "5", "--out", a.string()}).code == 0);
  REQUIRE(run({"rerun", (a / "limit_law.json").string(), "--threads", "2", "--out", b.string()}).code == 0);
  CHECK(read_file(a / "limit_law.json") == read_file(b / "limit_law.json"));
  CHECK(read_file(a / "limit_law_draws.csv") == read_file(b / "limit_law_draws.csv"));
}

TEST_CASE("seed falls back to the environment", "[cli]") {
  const auto a = scratch_dir("env-a");
  const auto b = scratch_dir("env-b");
  ::setenv("STOCHORD_SEED", "99", 1);
  const auto r1 = run({"bridge-lab", "--paths", "50", "--bridge-grid", "64", "--out", a.string()});
  ::unsetenv("STOCHORD_SEED");
  const auto r2 = run({"bridge-lab", "--paths", "50", "--bridge-grid", "64", "--seed", "99", "--out", b.string()});
  REQUIRE(r1.code == 0);
  CHECK(r1.out == r2.out);
  CHECK(Json::parse(r1.out)["config"]["seed"] == 99);
  ::setenv("STOCHORD_SEED", "abc", 1);
  CHECK(run({"bridge-lab", "--paths", "5", "--out", a.string()}).code == kExitUsage);
  ::unsetenv("STOCHORD_SEED");
}

TEST_CASE("exit codes and error json", "[cli]") {
  const auto dir = scratch_dir("errors");
  auto r = run({"galton", "--x", fixture("galton_x.csv")});
  CHECK(r.code == kExitUsage);
  CHECK(Json::parse(r.err)["error"]["kind"] == "usage");
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"test-gamma", "--x", "a", "--y", "b", "--gamma0", "2"}).code == kExitUsage);
  CHECK(run({"bridge-lab", "--bridge-grid", "1000", "--out", dir.string()}).code == kExitUsage);

  r = run({"galton", "--x", fixture("galton_x.csv"), "--y", fixture("galton_y.csv"), "--out", dir.string()});
  CHECK(r.code == kExitData);  // header line read as data
  CHECK(Json::parse(r.err)["error"]["line"] == 1);
  CHECK(run({"galton", "--x", "/nonexistent.csv", "--y", "/nonexistent.csv", "--out", dir.string()}).code ==
        kExitData);

  r = run({"limit-law", "--g", R"({"kind":"normal","mean":0,"sd":1.0000001})", "--n", "50", "--reps", "5", "--out",
           dir.string()});
  CHECK(r.code == kExitNumeric);
  CHECK(Json::parse(r.err)["error"]["kind"] == "assumption");
  // failed runs leave nothing behind
  CHECK_FALSE(fs::exists(dir));

  r = run({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("simulate-table") != std::string::npos);
}

TEST_CASE("config json round trip", "[cli]") {
  CommandConfig c;
  c.subcommand = "simulate-table";
  c.cases = {1, 3};
  c.families = {"mixture"};
  c.seed = 8;
  const auto j = config_to_json(c);
  CHECK(j["reps"] == 200);
  CHECK(j["B"] == 200);
  CHECK(j["n"] == Json::array({100, 1000}));
  const auto back = config_from_json(j);
  CHECK(config_to_json(back) == j);
  CHECK_THROWS_AS(config_from_json(Json{{"nope", 1}}), ParameterError);
}
