#include <doctest.h>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cflab/channels.hpp"
#include "cflab/errors.hpp"
#include "cflab/harness.hpp"
#include "cflab/prob.hpp"

using namespace cflab;
using namespace cflab::harness;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

channels::MacSpec additive_example(double flip = 0.1) {
  return channels::make_additive_mac(2, prob::Pmf::uniform(2), prob::Pmf::uniform(2),
                                     prob::Pmf({1.0 - flip, flip}), 1, 1);
}

}  // namespace

TEST_CASE("wilson interval") {
  // Zero failures pin the lower end at 0; the upper end is z^2 / (N + z^2).
  WilsonInterval zero = wilson_ci95(0, 100);
  CHECK(zero.lo == doctest::Approx(0.0));
  CHECK(zero.hi == doctest::Approx(3.841458820694124 / 103.841458820694124).epsilon(1e-12));

  WilsonInterval all = wilson_ci95(100, 100);
  CHECK(all.hi == doctest::Approx(1.0));

  // Mirror symmetry: the interval for f failures reflects the one for N - f.
  WilsonInterval a = wilson_ci95(30, 100);
  WilsonInterval b = wilson_ci95(70, 100);
  CHECK(a.lo == doctest::Approx(1.0 - b.hi).epsilon(1e-12));
  CHECK(a.hi == doctest::Approx(1.0 - b.lo).epsilon(1e-12));
  CHECK(a.lo < 0.3);
  CHECK(a.hi > 0.3);
}

TEST_CASE("rounding a rate to a message length") {
  CHECK(message_length_for_rate(16, 0.5) == 8);
  CHECK(message_length_for_rate(10, 0.71) == 7);
  CHECK(message_length_for_rate(8, 0.0) == 0);
  CHECK_THROWS_AS(message_length_for_rate(8, -0.1), InvalidSpec);
}

TEST_CASE("error estimate is independent of the thread split") {
  MacExperiment e;
  e.spec = additive_example(0.0);
  e.params.q = 2;
  e.params.n = 10;
  e.params.k1 = 1;
  e.params.k2 = 1;
  e.params.eps = 0.3;
  e.params.seed = 77;
  e.eps_prime = 1.4;

  ErrorEstimate one = estimate_mac_error(e, 40, 1);
  ErrorEstimate four = estimate_mac_error(e, 40, 4);
  CHECK(one == four);
  CHECK(one.trials == 40);
  CHECK(one.failures == one.no_candidate + one.ambiguous + one.wrong_value);
  CHECK(one.ensemble);
  // Noiseless channel with a wide decoding band: mostly successes.
  CHECK(one.rate < 0.5);

  e.fixed_codebook = true;
  ErrorEstimate fixed = estimate_mac_error(e, 40, 2);
  CHECK_FALSE(fixed.ensemble);
}

TEST_CASE("full rank probability") {
  CHECK(exact_full_rank_prob(2, 2, 3) == doctest::Approx(0.65625).epsilon(1e-15));
  CHECK(exact_full_rank_prob(2, 4, 3) == 0.0);  // more rows than columns
  CHECK(exact_full_rank_prob(3, 1, 1) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));

  VerificationReport rep = verify_full_rank(2, 2, 3, 4000, 12345);
  CHECK(rep.pass);
  CHECK(rep.samples == 4000);
  CHECK(rep.seed == 12345);
  bool has_exact = false;
  for (const auto& [k, v] : rep.diagnostics)
    if (k == "exact") {
      has_exact = true;
      CHECK(v == doctest::Approx(0.65625));
    }
  CHECK(has_exact);
}

TEST_CASE("region identity batteries at reduced scale") {
  VerificationReport star = verify_star_decomposition(3, 40, 2024);
  CHECK(star.pass);
  CHECK(star.statistic == 0.0);

  VerificationReport nat = verify_natural_decomposition(3, 40, 2024);
  CHECK(nat.pass);

  VerificationReport marton = verify_marton_forms(2, 30, 2024);
  CHECK(marton.pass);
}

TEST_CASE("uniformity within a type class at toy scale") {
  homocode::HomologousParams p;
  p.q = 2;
  p.n = 6;
  p.k1 = 1;
  p.k2 = 1;
  p.eps = 0.1;
  p.seed = 9;
  prob::TypeVector theta;
  theta.n = 6;
  theta.counts = {3, 3};
  VerificationReport rep = verify_uniform_within_type(p, theta, 20000);
  CHECK(rep.pass);
  CHECK(rep.statistic <= rep.threshold);
}

TEST_CASE("report serialization round trips and stays stable") {
  Report r;
  r.title = "demo";
  r.seed = 42;
  r.config = {{"eps", "0.1"}, {"n", "8"}};
  VerificationReport v;
  v.id = "demo-check";
  v.test = "unit";
  v.statistic = 0.25;
  v.threshold = 0.5;
  v.pass = true;
  v.samples = 10;
  v.seed = 42;
  v.diagnostics = {{"a", 1.5}, {"b", -0.5}};
  r.checks.push_back(v);
  ErrorEstimate est;
  est.trials = 100;
  est.failures = 3;
  est.rate = 0.03;
  est.ci95 = wilson_ci95(3, 100);
  r.sweep.push_back(make_sweep_point(8, 0.5, 0.25, est));

  std::string text = report_to_json_text(r);
  Report back = report_from_json_text(text);
  CHECK(back == r);
  CHECK(report_to_json_text(back) == text);
  CHECK_THROWS_AS(report_from_json_text("not json"), SchemaError);

  std::string csv = sweep_to_csv_text(r.sweep);
  CHECK(csv.rfind("n,rate_point_r1,rate_point_r2,trials,failures,rate,ci_lo,ci_hi\n", 0) ==
        0);
  CHECK(csv.find("\n8,") != std::string::npos);
}

TEST_CASE("export writes identical artifacts on identical input") {
  Report r;
  r.title = "export-demo";
  r.seed = 7;
  r.config = {{"trials", "10"}};
  ErrorEstimate est;
  est.trials = 10;
  est.failures = 1;
  est.rate = 0.1;
  est.ci95 = wilson_ci95(1, 10);
  r.sweep.push_back(make_sweep_point(4, 0.3, 0.3, est));

  auto dir = std::filesystem::temp_directory_path() / "cflab_export_test";
  std::filesystem::create_directories(dir);
  std::string base = (dir / "report").string();
  export_report(r, base);
  REQUIRE(std::filesystem::exists(base + ".json"));
  REQUIRE(std::filesystem::exists(base + ".csv"));
  std::string j1 = slurp(base + ".json");
  std::string c1 = slurp(base + ".csv");
  export_report(r, base);
  CHECK(slurp(base + ".json") == j1);
  CHECK(slurp(base + ".csv") == c1);
  CHECK(report_from_json_text(j1) == r);

  CHECK_THROWS_AS(export_report(r, (dir / "nope" / "deep" / "report").string()),
                  IoFailure);
  std::filesystem::remove_all(dir);
}
