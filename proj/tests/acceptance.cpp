// End-to-end acceptance battery. Each numbered block exercises one release
// gate at full scale and prints a single [PASS]/[FAIL] line; the process
// exits nonzero when any block fails. Seeds are frozen so reruns are
// byte-for-byte comparable.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cflab/channels.hpp"
#include "cflab/field.hpp"
#include "cflab/harness.hpp"
#include "cflab/homologous.hpp"
#include "cflab/marton.hpp"
#include "cflab/prob.hpp"
#include "cflab/regions.hpp"
#include "cflab/rng.hpp"

using namespace cflab;

namespace {

int g_failures = 0;

void report(int idx, const std::string& name, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", idx, name.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

channels::MacSpec additive_binary(double flip) {
  return channels::make_additive_mac(2, prob::Pmf::uniform(2), prob::Pmf::uniform(2),
                                     prob::Pmf({1.0 - flip, flip}), 1, 1);
}

bool vertices_match(const regions::RateRegion& a, const regions::RateRegion& b,
                    double tol) {
  auto va = a.vertices();
  auto vb = b.vertices();
  if (va.size() != vb.size()) return false;
  auto lt = [](const regions::RatePair& x, const regions::RatePair& y) {
    return x.r1 != y.r1 ? x.r1 < y.r1 : x.r2 < y.r2;
  };
  std::sort(va.begin(), va.end(), lt);
  std::sort(vb.begin(), vb.end(), lt);
  for (std::size_t i = 0; i < va.size(); ++i)
    if (std::abs(va[i].r1 - vb[i].r1) > tol || std::abs(va[i].r2 - vb[i].r2) > tol)
      return false;
  return true;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

// ---------------------------------------------------------------------------

void criterion_1() {
  auto t0 = std::chrono::steady_clock::now();
  harness::VerificationReport r = harness::verify_star_decomposition(25, 200, 1001);
  double secs = seconds_since(t0);
  char buf[160];
  std::snprintf(buf, sizeof(buf), "disagreements=%.0f over %llu samples, %.1fs",
                r.statistic, static_cast<unsigned long long>(r.samples), secs);
  report(1, "combined-decoder region equals the union decomposition", r.pass && secs < 60.0,
         buf);
}

void criterion_2() {
  harness::VerificationReport r = harness::verify_natural_decomposition(25, 200, 1002);
  char buf[120];
  std::snprintf(buf, sizeof(buf), "disagreements=%.0f over %llu samples", r.statistic,
                static_cast<unsigned long long>(r.samples));
  report(2, "per-sender split matches under natural coefficients", r.pass, buf);
}

void criterion_3() {
  harness::VerificationReport r = harness::verify_marton_forms(25, 200, 1003);
  char buf[120];
  std::snprintf(buf, sizeof(buf), "disagreements=%.0f over %llu samples", r.statistic,
                static_cast<unsigned long long>(r.samples));
  report(3, "both broadcast region forms agree across the alpha sweep", r.pass, buf);
}

void criterion_4() {
  double exact = harness::exact_full_rank_prob(2, 2, 3);
  bool value_ok = std::abs(exact - 0.65625) < 1e-15;

  // Independent census: walk all 2^(2*3) binary matrices.
  std::size_t full = 0;
  for (std::uint32_t bits = 0; bits < 64; ++bits) {
    gf::FieldMatrix m(2, 2, 3);
    for (std::size_t i = 0; i < 6; ++i) m.a[i] = (bits >> i) & 1u;
    if (gf::rank(m) == 2) ++full;
  }
  bool census_ok = (static_cast<double>(full) / 64.0 == exact);

  harness::VerificationReport r = harness::verify_full_rank(2, 2, 3, 10000, 1004);
  char buf[160];
  std::snprintf(buf, sizeof(buf), "exact=%.5f census=%zu/64 z=%.2f trend=%s", exact, full,
                r.statistic, r.pass ? "ok" : "bad");
  report(4, "full-rank probability: closed form, census, sampling, trend",
         value_ok && census_ok && r.pass, buf);
}

void criterion_5() {
  bool all = true;
  std::string detail;
  const prob::Pmf targets[2] = {prob::Pmf::uniform(2), prob::Pmf({0.8, 0.2})};
  const char* names[2] = {"uniform", "skewed"};
  for (int i = 0; i < 2; ++i) {
    channels::MacSpec spec = channels::make_additive_mac(
        2, targets[i], prob::Pmf::uniform(2), prob::Pmf({0.95, 0.05}), 1, 1);
    homocode::HomologousParams p;
    p.q = 2;
    p.n = 10;
    p.k1 = 1;
    p.k2 = 1;
    p.eps = 0.1;
    p.seed = 1005 + i;
    harness::VerificationReport r = harness::verify_codeword_marginal(p, spec, 0, 100000);
    all = all && r.pass;
    char buf[80];
    std::snprintf(buf, sizeof(buf), "%s%s violation=%.4f", i ? ", " : "", names[i],
                  r.statistic);
    detail += buf;
  }
  report(5, "shaped codeword coordinates follow the target marginal", all, detail);
}

void criterion_6() {
  homocode::HomologousParams p;
  p.q = 2;
  p.n = 6;
  p.k1 = 1;
  p.k2 = 1;
  p.eps = 0.1;
  p.seed = 1006;
  prob::TypeVector theta;
  theta.n = 6;
  theta.counts = {3, 3};
  harness::VerificationReport r = harness::verify_uniform_within_type(p, theta, 100000);
  char buf[80];
  std::snprintf(buf, sizeof(buf), "tv=%.4f threshold=%.2f", r.statistic, r.threshold);
  report(6, "codewords are uniform within a type class", r.pass, buf);
}

void criterion_7() {
  channels::MacSpec spec = additive_binary(0.1);
  auto joint = channels::build_mac_joint(spec);

  regions::RateRegion cf = regions::region_cf(joint, 1, 1);
  regions::RateRegion outer_triv = regions::general_outer(spec, regions::trivial_auxiliary(spec));
  cf.prune();
  outer_triv.prune();
  bool triv_ok = vertices_match(cf, outer_triv, 1e-9);

  regions::RateRegion mac = regions::region_mac(joint);
  regions::RateRegion outer_rev = regions::general_outer(spec, regions::revealing_auxiliary(spec));
  mac.prune();
  outer_rev.prune();
  bool rev_ok = vertices_match(mac, outer_rev, 1e-9);

  report(7, "general outer bound collapses to both baselines",
         triv_ok && rev_ok,
         std::string("degenerate=") + (triv_ok ? "match" : "mismatch") +
             ", revealing=" + (rev_ok ? "match" : "mismatch"));
}

void criterion_8() {
  auto t0 = std::chrono::steady_clock::now();
  channels::MacSpec spec = additive_binary(0.05);
  auto joint = channels::build_mac_joint(spec);
  double corner = prob::entropy(joint, {"X1"}, 2.0) -
                  prob::conditional_entropy(joint, {"W"}, {"Y"}, 2.0);
  const std::vector<std::size_t> ns = {8, 12, 16};

  // Inside point: 70% of the achievable corner.
  std::vector<double> inside_rates;
  for (std::size_t n : ns) {
    harness::MacExperiment e;
    e.spec = spec;
    e.params.q = 2;
    e.params.n = n;
    e.params.k1 = static_cast<std::size_t>(std::llround(0.7 * corner * n));
    e.params.k2 = e.params.k1;
    e.params.eps = 0.05;
    e.params.seed = 1008;
    e.eps_prime = 2.0;
    harness::ErrorEstimate est = harness::estimate_mac_error(e, 2000);
    inside_rates.push_back(est.rate);
  }
  bool inside_ok = inside_rates[0] > inside_rates[1] && inside_rates[1] > inside_rates[2];

  // Outside point: 120% of the corner must stay unreliable at every n.
  std::vector<double> outside_rates;
  for (std::size_t n : ns) {
    harness::MacExperiment e;
    e.spec = spec;
    e.params.q = 2;
    e.params.n = n;
    e.params.k1 = static_cast<std::size_t>(std::llround(1.2 * corner * n));
    e.params.k2 = e.params.k1;
    e.params.eps = 0.05;
    e.params.seed = 1009;
    e.params.l1_override = 0;
    e.params.l2_override = 0;
    e.eps_prime = 9.0;
    e.decode_budget = 1ull << 32;
    harness::ErrorEstimate est = harness::estimate_mac_error(e, 2000);
    outside_rates.push_back(est.rate);
  }
  bool outside_ok = true;
  for (double r : outside_rates) outside_ok = outside_ok && r >= 0.5;

  double secs = seconds_since(t0);
  char buf[240];
  std::snprintf(buf, sizeof(buf),
                "inside={%.3f %.3f %.3f} outside={%.3f %.3f %.3f} %.0fs",
                inside_rates[0], inside_rates[1], inside_rates[2], outside_rates[0],
                outside_rates[1], outside_rates[2], secs);
  report(8, "computation error falls inside the region, stays high outside",
         inside_ok && outside_ok && secs < 600.0, buf);
}

void criterion_9() {
  // Clean ternary orthogonal broadcast: each receiver observes its own
  // auxiliary symbol exactly.
  std::vector<double> pu(9, 1.0 / 9.0);
  std::vector<double> ident = {1, 0, 0, 0, 1, 0, 0, 0, 1};
  channels::BcSpec spec = channels::make_orthogonal_bc(3, 3, pu, ident, 3, ident, 3);

  harness::BcExperiment e;
  e.spec = spec;
  e.params.n = 12;
  // 70% of the per-receiver corner log2(3) bits/use.
  e.params.k1 = static_cast<std::size_t>(std::llround(0.7 * std::log2(3.0) * 12));
  e.params.k2 = e.params.k1;
  e.params.alpha = 0.5;
  e.params.eps = 0.1;
  e.params.seed = 1010;
  e.params.l1_override = 0;  // independent uniform auxiliaries need no covering
  e.params.l2_override = 0;
  e.eps_prime = 6.0;
  e.decode_budget = 1ull << 27;
  harness::BcErrorEstimate est = harness::estimate_bc_error(e, 200);
  double joint_success = 1.0 - est.joint_rate;
  bool success_ok = joint_success >= 0.95;

  // Dependent auxiliaries with too few covering indices: the failure
  // frequency must fall as the block length grows.
  martoncode::MartonParams base;
  base.n = 4;
  base.k1 = 0;
  base.k2 = 0;
  base.alpha = 0.5;
  base.eps = 0.25;
  base.seed = 1011;
  base.l1_override = 1;
  base.l2_override = 1;
  std::vector<double> dep_pu = {0.4, 0.1, 0.1, 0.4};
  std::vector<double> ident2 = {1, 0, 0, 1};
  channels::BcSpec dep = channels::make_orthogonal_bc(2, 2, dep_pu, ident2, 2, ident2, 2);
  harness::VerificationReport cov =
      harness::verify_shaping_coverage_marton(base, dep, {8, 12, 16}, 200);

  char buf[160];
  std::snprintf(buf, sizeof(buf), "joint success=%.3f (need >= 0.95), covering trend %s",
                joint_success, cov.pass ? "nonincreasing" : "violated");
  report(9, "broadcast pair decodes jointly; covering failures shrink with n",
         success_ok && cov.pass, buf);
}

void criterion_10() {
  namespace fs = std::filesystem;
  channels::MacSpec spec = additive_binary(0.1);
  auto build = [&](unsigned threads) {
    harness::Report rep;
    rep.title = "determinism probe";
    rep.seed = 77;
    rep.config = {{"eps", "0.3"}, {"n", "10"}, {"trials", "60"}};
    harness::MacExperiment e;
    e.spec = spec;
    e.params.q = 2;
    e.params.n = 10;
    e.params.k1 = 1;
    e.params.k2 = 1;
    e.params.eps = 0.3;
    e.params.seed = 77;
    e.eps_prime = 1.4;
    harness::ErrorEstimate est = harness::estimate_mac_error(e, 60, threads);
    rep.sweep.push_back(harness::make_sweep_point(10, 0.1, 0.1, est));
    rep.checks.push_back(harness::verify_full_rank(2, 2, 3, 2000, 77));
    return rep;
  };

  fs::path dir = fs::temp_directory_path() / "cflab_acceptance";
  fs::create_directories(dir);
  std::string b1 = (dir / "run1").string();
  std::string b2 = (dir / "run2").string();
  harness::export_report(build(1), b1);
  harness::export_report(build(4), b2);
  bool json_ok = slurp(b1 + ".json") == slurp(b2 + ".json");
  bool csv_ok = slurp(b1 + ".csv") == slurp(b2 + ".csv");
  fs::remove_all(dir);

  report(10, "same master seed yields byte-identical artifacts", json_ok && csv_ok,
         std::string("json=") + (json_ok ? "identical" : "differs") +
             ", csv=" + (csv_ok ? "identical" : "differs"));
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
