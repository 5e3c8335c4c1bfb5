#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cflab/channels.hpp"
#include "cflab/errors.hpp"
#include "cflab/harness.hpp"
#include "cflab/prob.hpp"
#include "cli_app.hpp"

using namespace cflab;
using namespace cflab::cli;

namespace {

int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("cflab");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() / "cflab_cli_test";
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string str() const { return path.string(); }
};

std::string write_additive_spec(const TempDir& dir) {
  channels::MacSpec spec = channels::make_additive_mac(
      2, prob::Pmf::uniform(2), prob::Pmf::uniform(2), prob::Pmf({0.9, 0.1}), 1, 1);
  std::string path = (dir.path / "mac.json").string();
  std::ofstream(path) << channels::mac_spec_to_json_text(spec);
  return path;
}

}  // namespace

TEST_CASE("argument parsing fills documented defaults") {
  unsetenv("CFLAB_OUT_DIR");
  TempDir dir;
  std::string spec = write_additive_spec(dir);
  RunConfig cfg = parse_config({"region", "--kind", "star", "--spec", spec});
  CHECK(cfg.command == "region");
  CHECK(cfg.kind == "star");
  CHECK(cfg.eps == doctest::Approx(0.1));
  CHECK(cfg.eps_prime == doctest::Approx(0.2));  // follows eps unless pinned
  CHECK(cfg.delta == doctest::Approx(0.0));
  CHECK(cfg.grid == 200);
  CHECK(cfg.trials == 2000);
  CHECK(cfg.seed == 0);
  CHECK(cfg.budget == (1ull << 24));
  CHECK(cfg.decode_budget == cfg.budget);
  CHECK(cfg.out_dir == ".");
  CHECK(cfg.out_base == "region-star");
  CHECK(cfg.ns == std::vector<std::size_t>{8, 12, 16});

  setenv("CFLAB_OUT_DIR", dir.str().c_str(), 1);
  RunConfig env = parse_config({"region", "--kind", "mac", "--spec", spec});
  CHECK(env.out_dir == dir.str());
  CHECK(env.out_base == "region-mac");
  unsetenv("CFLAB_OUT_DIR");

  RunConfig help = parse_config({"--help"});
  CHECK(help.command == "help");
  CHECK(help.help_text.find("region") != std::string::npos);
  CHECK(dispatch(help) == 0);
}

TEST_CASE("argument errors are usage or schema errors") {
  CHECK_THROWS_AS(parse_config({}), UsageError);
  CHECK_THROWS_AS(parse_config({"frobnicate"}), UsageError);
  CHECK_THROWS_AS(parse_config({"region", "--spec", "x.json"}), UsageError);  // no kind

  TempDir dir;
  std::string spec = write_additive_spec(dir);
  CHECK_THROWS_AS(parse_config({"simulate-mac", "--spec", spec, "--eps", "-0.5"}),
                  SchemaError);
  CHECK_THROWS_AS(parse_config({"simulate-bc", "--spec", spec, "--alpha", "1.5"}),
                  SchemaError);
  CHECK_THROWS_AS(parse_config({"verify", "--check", "star", "--instances", "0"}),
                  SchemaError);
  try {
    parse_config({"simulate-mac", "--spec", spec, "--eps", "-0.5"});
    FAIL("expected a schema error");
  } catch (const SchemaError& e) {
    CHECK(std::string(e.what()).find("eps") != std::string::npos);
  }
}

TEST_CASE("region command writes the expected artifacts") {
  TempDir dir;
  std::string spec = write_additive_spec(dir);
  RunConfig cfg = parse_config({"region", "--kind", "star", "--spec", spec, "--out-dir",
                                dir.str(), "--out", "sq"});
  CHECK(dispatch(cfg) == 0);
  CHECK(std::filesystem::exists(dir.path / "sq.json"));
  CHECK(std::filesystem::exists(dir.path / "sq.meta.json"));
  REQUIRE(std::filesystem::exists(dir.path / "sq.csv"));

  std::ifstream csv(dir.path / "sq.csv");
  std::string line;
  std::getline(csv, line);
  CHECK(line == "cell_id,R1,R2");
  std::set<std::pair<long, long>> got;  // micro-units for exact set compare
  while (std::getline(csv, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell, r1, r2;
    std::getline(row, cell, ',');
    std::getline(row, r1, ',');
    std::getline(row, r2, ',');
    got.insert({std::lround(std::stod(r1) * 1e6), std::lround(std::stod(r2) * 1e6)});
  }
  long c = std::lround(0.5310044064107188 * 1e6);
  std::set<std::pair<long, long>> expect = {{0, 0}, {c, 0}, {0, c}, {c, c}};
  CHECK(got == expect);
}

TEST_CASE("verify and export commands run end to end") {
  TempDir dir;
  int rc = run({"verify", "--check", "star", "--instances", "2", "--grid", "30",
                "--seed", "4", "--out-dir", dir.str()});
  CHECK(rc == 0);
  REQUIRE(std::filesystem::exists(dir.path / "verify-star.json"));

  // Re-export a hand-built report and make sure the CSV companion appears.
  harness::Report rep;
  rep.title = "sweep";
  rep.seed = 1;
  harness::ErrorEstimate est;
  est.trials = 10;
  est.failures = 2;
  est.rate = 0.2;
  est.ci95 = harness::wilson_ci95(2, 10);
  rep.sweep.push_back(harness::make_sweep_point(8, 0.4, 0.4, est));
  std::string in = (dir.path / "in.json").string();
  std::ofstream(in) << harness::report_to_json_text(rep);
  CHECK(run({"export", "--in", in, "--out-dir", dir.str(), "--out", "copy"}) == 0);
  CHECK(std::filesystem::exists(dir.path / "copy.json"));
  CHECK(std::filesystem::exists(dir.path / "copy.csv"));
}

TEST_CASE("process exit codes by failure class") {
  TempDir dir;
  std::string spec = write_additive_spec(dir);
  CHECK(run({}) == 2);
  CHECK(run({"region", "--kind", "star"}) == 2);  // missing required --spec
  CHECK(run({"region", "--kind", "star", "--spec",
             (dir.path / "missing.json").string()}) == 1);
  CHECK(run({"simulate-mac", "--spec", spec, "--eps", "-1"}) == 3);
  CHECK(run({"simulate-mac", "--spec", spec, "--n", "12", "--k1", "2", "--k2", "2",
             "--trials", "1", "--budget", "4", "--out-dir", dir.str()}) == 4);
}
