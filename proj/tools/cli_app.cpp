#include "cli_app.hpp"

#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cflab/channels.hpp"
#include "cflab/errors.hpp"
#include "cflab/harness.hpp"
#include "cflab/homologous.hpp"
#include "cflab/marton.hpp"
#include "cflab/prob.hpp"
#include "cflab/regions.hpp"
#include "cflab/rng.hpp"

namespace cflab::cli {
namespace {

using nlohmann::json;

std::string fmt_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string join_sizes(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(v[i]);
  }
  return s;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (!in.good() && !in.eof()) throw IoFailure("cannot read " + path);
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoFailure("cannot open " + path + " for writing");
  out << text;
  out.flush();
  if (!out.good()) throw IoFailure("cannot write " + path);
}

std::string joined(const std::string& dir, const std::string& base) {
  return (std::filesystem::path(dir) / base).string();
}

/// Resolved-config echo embedded in every artifact. Sorted by key so the
/// serialization is stable.
using Echo = std::vector<std::pair<std::string, std::string>>;

void finish_echo(Echo& e) {
  std::sort(e.begin(), e.end());
}

Echo common_echo(const RunConfig& cfg) {
  Echo e;
  e.emplace_back("command", cfg.command);
  e.emplace_back("out_base", cfg.out_base);
  e.emplace_back("out_dir", cfg.out_dir);
  e.emplace_back("seed", std::to_string(cfg.seed));
  if (!cfg.spec_path.empty()) e.emplace_back("spec", cfg.spec_path);
  return e;
}

json echo_to_json(const Echo& e) {
  json obj = json::object();
  for (const auto& [k, v] : e) obj[k] = v;
  return obj;
}

// ---- timestamps live only here, never inside the artifact proper ----

void write_sidecar(const std::string& base_path) {
  json meta;
  meta["artifact"] = base_path + ".json";
  meta["created_unix"] = static_cast<std::int64_t>(std::time(nullptr));
  write_file(base_path + ".meta.json", meta.dump(2) + "\n");
}

// ---- region command ----

regions::AuxiliarySpec auxiliary_from_json_text(const std::string& text,
                                                const channels::MacSpec& spec) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& ex) {
    throw SchemaError(std::string("auxiliary file: ") + ex.what());
  }
  if (!j.is_object()) throw SchemaError("auxiliary file: object expected");
  auto pmf_of = [](const json& arr, const char* field) {
    if (!arr.is_array()) throw SchemaError(std::string(field) + ": array expected");
    std::vector<double> p;
    for (const auto& x : arr) {
      if (!x.is_number()) throw SchemaError(std::string(field) + ": numeric entries expected");
      p.push_back(x.get<double>());
    }
    try {
      return prob::Pmf(std::move(p));
    } catch (const Error& ex) {
      throw SchemaError(std::string(field) + ": " + ex.what());
    }
  };
  regions::AuxiliarySpec aux;
  if (!j.contains("pq")) throw SchemaError("pq");
  aux.pq = pmf_of(j["pq"], "pq");
  auto rows_of = [&](const char* field) {
    if (!j.contains(field) || !j[field].is_array())
      throw SchemaError(std::string(field) + ": array of pmf rows expected");
    std::vector<prob::Pmf> rows;
    for (const auto& row : j[field]) rows.push_back(pmf_of(row, field));
    if (rows.size() != aux.pq.size())
      throw SchemaError(std::string(field) + ": one row per q value expected");
    return rows;
  };
  aux.px1_given_q = rows_of("px1_given_q");
  aux.px2_given_q = rows_of("px2_given_q");
  const std::size_t nx1 = aux.px1_given_q.front().size();
  const std::size_t nx2 = aux.px2_given_q.front().size();
  if (nx1 != spec.q || nx2 != spec.q)
    throw SchemaError("px1_given_q/px2_given_q: rows must cover the channel input alphabet");
  aux.nt = j.value("nt", std::size_t{1});
  if (aux.nt == 0) throw SchemaError("nt");
  const std::size_t want = aux.pq.size() * nx1 * nx2 * aux.nt;
  if (j.contains("pt_given")) {
    if (!j["pt_given"].is_array() || j["pt_given"].size() != want)
      throw SchemaError("pt_given: flat array of size |Q|*|X1|*|X2|*nt expected");
    aux.pt_given.clear();
    for (const auto& x : j["pt_given"]) {
      if (!x.is_number()) throw SchemaError("pt_given: numeric entries expected");
      aux.pt_given.push_back(x.get<double>());
    }
  } else {
    if (aux.nt != 1) throw SchemaError("pt_given: required when nt > 1");
    aux.pt_given.assign(want, 1.0);
  }
  return aux;
}

int run_region(const RunConfig& cfg) {
  Echo echo = common_echo(cfg);
  echo.emplace_back("delta", fmt_g(cfg.delta));
  echo.emplace_back("kind", cfg.kind);

  regions::RateRegion region;
  if (cfg.kind == "marton") {
    channels::BcSpec spec = channels::bc_spec_from_json_text(read_file(cfg.spec_path));
    const auto form = cfg.form == "per-receiver" ? regions::MartonForm::kPerReceiver
                                                 : regions::MartonForm::kCombined;
    region = regions::marton_region(channels::build_bc_joint(spec), cfg.alpha, cfg.delta, form);
    echo.emplace_back("alpha", fmt_g(cfg.alpha));
    echo.emplace_back("form", cfg.form);
  } else {
    channels::MacSpec spec = channels::mac_spec_from_json_text(read_file(cfg.spec_path));
    if (cfg.a1 >= 0) spec.a1 = static_cast<std::uint32_t>(cfg.a1);
    if (cfg.a2 >= 0) spec.a2 = static_cast<std::uint32_t>(cfg.a2);
    channels::validate(spec);
    echo.emplace_back("a1", std::to_string(spec.a1));
    echo.emplace_back("a2", std::to_string(spec.a2));
    if (cfg.kind == "outer-general") {
      regions::AuxiliarySpec aux;
      if (cfg.aux == "trivial") {
        aux = regions::trivial_auxiliary(spec);
      } else if (cfg.aux == "revealing") {
        aux = regions::revealing_auxiliary(spec);
      } else {
        aux = auxiliary_from_json_text(read_file(cfg.aux), spec);
      }
      region = regions::general_outer(spec, aux);
      echo.emplace_back("aux", cfg.aux);
    } else {
      const prob::JointPmf joint = channels::build_mac_joint(spec);
      if (cfg.kind == "cf") {
        region = regions::region_cf(joint, spec.a1, spec.a2, cfg.delta);
      } else if (cfg.kind == "mac") {
        region = regions::region_mac(joint);
      } else if (cfg.kind == "r1") {
        region = regions::region_j(joint, spec.a1, spec.a2, 1, cfg.delta);
      } else if (cfg.kind == "r2") {
        region = regions::region_j(joint, spec.a1, spec.a2, 2, cfg.delta);
      } else if (cfg.kind == "star") {
        region = regions::region_star_star(joint, spec.a1, spec.a2, cfg.delta);
      } else {
        throw UsageError("unknown region kind: " + cfg.kind);
      }
    }
  }
  region.prune();
  finish_echo(echo);

  json artifact;
  artifact["command"] = "region";
  artifact["config"] = echo_to_json(echo);
  artifact["region"] = json::parse(region.to_json_text());
  artifact["version"] = 1;

  const std::string base = joined(cfg.out_dir, cfg.out_base);
  write_file(base + ".json", artifact.dump(2) + "\n");
  write_file(base + ".csv", region.vertices_csv());
  write_sidecar(base);

  const auto verts = region.vertices();
  std::printf("region %s: %zu cell(s), %zu vertices -> %s.json, %s.csv\n", cfg.kind.c_str(),
              region.cells().size(), verts.size(), base.c_str(), base.c_str());
  return 0;
}

// ---- simulation commands ----

Echo simulate_echo(const RunConfig& cfg) {
  Echo e = common_echo(cfg);
  e.emplace_back("budget", std::to_string(cfg.budget));
  e.emplace_back("decode_budget", std::to_string(cfg.decode_budget));
  e.emplace_back("eps", fmt_g(cfg.eps));
  e.emplace_back("eps_prime", fmt_g(cfg.eps_prime));
  e.emplace_back("fixed_codebook", cfg.fixed_codebook ? "true" : "false");
  e.emplace_back("k1", std::to_string(cfg.k1));
  e.emplace_back("k2", std::to_string(cfg.k2));
  e.emplace_back("l1", std::to_string(cfg.l1));
  e.emplace_back("l2", std::to_string(cfg.l2));
  e.emplace_back("n", join_sizes(cfg.ns));
  e.emplace_back("r1", fmt_g(cfg.r1));
  e.emplace_back("r2", fmt_g(cfg.r2));
  e.emplace_back("threads", std::to_string(cfg.threads));
  e.emplace_back("trials", std::to_string(cfg.trials));
  return e;
}

int run_simulate_mac(const RunConfig& cfg) {
  channels::MacSpec spec = channels::mac_spec_from_json_text(read_file(cfg.spec_path));
  if (cfg.a1 >= 0) spec.a1 = static_cast<std::uint32_t>(cfg.a1);
  if (cfg.a2 >= 0) spec.a2 = static_cast<std::uint32_t>(cfg.a2);
  channels::validate(spec);

  harness::Report report;
  report.title = "mac-sweep";
  report.seed = cfg.seed;
  Echo echo = simulate_echo(cfg);
  echo.emplace_back("a1", std::to_string(spec.a1));
  echo.emplace_back("a2", std::to_string(spec.a2));
  finish_echo(echo);
  report.config = echo;

  for (std::size_t n : cfg.ns) {
    homocode::HomologousParams p;
    p.q = spec.q;
    p.n = n;
    p.k1 = cfg.k1 >= 0 ? static_cast<std::size_t>(cfg.k1)
                       : harness::message_length_for_rate(n, cfg.r1);
    p.k2 = cfg.k2 >= 0 ? static_cast<std::size_t>(cfg.k2)
                       : harness::message_length_for_rate(n, cfg.r2);
    p.eps = cfg.eps;
    p.budget = cfg.budget;
    p.seed = Rng(cfg.seed).derive(n).seed();
    if (cfg.l1 >= 0) p.l1_override = static_cast<std::size_t>(cfg.l1);
    if (cfg.l2 >= 0) p.l2_override = static_cast<std::size_t>(cfg.l2);

    harness::MacExperiment e{spec, p, cfg.eps_prime, cfg.decode_budget, cfg.fixed_codebook};
    const harness::ErrorEstimate est = harness::estimate_mac_error(e, cfg.trials, cfg.threads);
    report.sweep.push_back(harness::make_sweep_point(n, cfg.r1, cfg.r2, est));
    std::printf("n=%zu k=(%zu,%zu) failures=%llu/%llu rate=%.6g ci95=[%.6g,%.6g]\n", n, p.k1,
                p.k2, static_cast<unsigned long long>(est.failures),
                static_cast<unsigned long long>(est.trials), est.rate, est.ci95.lo, est.ci95.hi);
  }

  const std::string base = joined(cfg.out_dir, cfg.out_base);
  harness::export_report(report, base);
  write_sidecar(base);
  std::printf("wrote %s.json, %s.csv\n", base.c_str(), base.c_str());
  return 0;
}

int run_simulate_bc(const RunConfig& cfg) {
  channels::BcSpec spec = channels::bc_spec_from_json_text(read_file(cfg.spec_path));

  harness::Report report;
  report.title = "bc-sweep";
  report.seed = cfg.seed;
  Echo echo = simulate_echo(cfg);
  echo.emplace_back("alpha", fmt_g(cfg.alpha));
  finish_echo(echo);
  report.config = echo;

  for (std::size_t n : cfg.ns) {
    martoncode::MartonParams p;
    p.n = n;
    p.k1 = cfg.k1 >= 0 ? static_cast<std::size_t>(cfg.k1)
                       : harness::message_length_for_rate(n, cfg.r1);
    p.k2 = cfg.k2 >= 0 ? static_cast<std::size_t>(cfg.k2)
                       : harness::message_length_for_rate(n, cfg.r2);
    p.alpha = cfg.alpha;
    p.eps = cfg.eps;
    p.budget = cfg.budget;
    p.seed = Rng(cfg.seed).derive(n).seed();
    if (cfg.l1 >= 0) p.l1_override = static_cast<std::size_t>(cfg.l1);
    if (cfg.l2 >= 0) p.l2_override = static_cast<std::size_t>(cfg.l2);

    harness::BcExperiment e{spec, p, cfg.eps_prime, cfg.decode_budget, cfg.fixed_codebook};
    const harness::BcErrorEstimate est = harness::estimate_bc_error(e, cfg.trials, cfg.threads);
    report.sweep.push_back(harness::make_sweep_point(n, cfg.r1, cfg.r2, est));
    std::printf(
        "n=%zu k=(%zu,%zu) joint_failures=%llu/%llu (rx1=%llu, rx2=%llu) rate=%.6g "
        "ci95=[%.6g,%.6g]\n",
        n, p.k1, p.k2, static_cast<unsigned long long>(est.joint_failures),
        static_cast<unsigned long long>(est.trials),
        static_cast<unsigned long long>(est.failures1),
        static_cast<unsigned long long>(est.failures2), est.joint_rate, est.ci95.lo,
        est.ci95.hi);
  }

  const std::string base = joined(cfg.out_dir, cfg.out_base);
  harness::export_report(report, base);
  write_sidecar(base);
  std::printf("wrote %s.json, %s.csv\n", base.c_str(), base.c_str());
  return 0;
}

// ---- verify command ----

int run_verify(const RunConfig& cfg) {
  harness::VerificationReport vr;
  Echo echo = common_echo(cfg);
  echo.emplace_back("check", cfg.check);

  if (cfg.check == "star" || cfg.check == "natural" || cfg.check == "marton-forms") {
    echo.emplace_back("grid", std::to_string(cfg.grid));
    echo.emplace_back("instances", std::to_string(cfg.instances));
    if (cfg.check == "star") {
      vr = harness::verify_star_decomposition(cfg.instances, cfg.grid, cfg.seed);
    } else if (cfg.check == "natural") {
      vr = harness::verify_natural_decomposition(cfg.instances, cfg.grid, cfg.seed);
    } else {
      vr = harness::verify_marton_forms(cfg.instances, cfg.grid, cfg.seed);
    }
  } else if (cfg.check == "fullrank") {
    echo.emplace_back("k", std::to_string(cfg.k));
    echo.emplace_back("n", std::to_string(cfg.n));
    echo.emplace_back("q", std::to_string(cfg.q));
    echo.emplace_back("samples", std::to_string(cfg.samples));
    vr = harness::verify_full_rank(cfg.q, cfg.k, cfg.n, cfg.samples, cfg.seed);
  } else if (cfg.check == "marginal") {
    channels::MacSpec spec = channels::mac_spec_from_json_text(read_file(cfg.spec_path));
    homocode::HomologousParams p;
    p.q = spec.q;
    p.n = cfg.n;
    p.k1 = cfg.k1 >= 0 ? static_cast<std::size_t>(cfg.k1) : cfg.k;
    p.k2 = cfg.k2 >= 0 ? static_cast<std::size_t>(cfg.k2) : cfg.k;
    p.eps = cfg.eps;
    p.seed = cfg.seed;
    p.budget = cfg.budget;
    if (cfg.l1 >= 0) p.l1_override = static_cast<std::size_t>(cfg.l1);
    if (cfg.l2 >= 0) p.l2_override = static_cast<std::size_t>(cfg.l2);
    echo.emplace_back("coord", std::to_string(cfg.coord));
    echo.emplace_back("eps", fmt_g(cfg.eps));
    echo.emplace_back("k1", std::to_string(p.k1));
    echo.emplace_back("k2", std::to_string(p.k2));
    echo.emplace_back("n", std::to_string(cfg.n));
    echo.emplace_back("samples", std::to_string(cfg.samples));
    vr = harness::verify_codeword_marginal(p, spec, cfg.coord, cfg.samples);
  } else if (cfg.check == "uniformtype") {
    if (cfg.type_counts.empty()) throw SchemaError("type");
    prob::TypeVector theta;
    theta.counts = cfg.type_counts;
    theta.n = 0;
    for (auto c : theta.counts) theta.n += c;
    if (cfg.type_counts.size() != cfg.q) throw SchemaError("type");
    homocode::HomologousParams p;
    p.q = cfg.q;
    p.n = theta.n;
    p.k1 = cfg.k1 >= 0 ? static_cast<std::size_t>(cfg.k1) : 0;
    p.k2 = cfg.k2 >= 0 ? static_cast<std::size_t>(cfg.k2) : 0;
    p.eps = cfg.eps;
    p.seed = cfg.seed;
    p.budget = cfg.budget;
    if (cfg.l1 >= 0) p.l1_override = static_cast<std::size_t>(cfg.l1);
    if (cfg.l2 >= 0) p.l2_override = static_cast<std::size_t>(cfg.l2);
    std::string tv;
    for (std::size_t i = 0; i < theta.counts.size(); ++i) {
      if (i) tv += ",";
      tv += std::to_string(theta.counts[i]);
    }
    echo.emplace_back("eps", fmt_g(cfg.eps));
    echo.emplace_back("q", std::to_string(cfg.q));
    echo.emplace_back("samples", std::to_string(cfg.samples));
    echo.emplace_back("type", tv);
    vr = harness::verify_uniform_within_type(p, theta, cfg.samples);
  } else if (cfg.check == "coverage") {
    echo.emplace_back("draws", std::to_string(cfg.draws));
    echo.emplace_back("eps", fmt_g(cfg.eps));
    echo.emplace_back("mode", cfg.mode);
    echo.emplace_back("n", join_sizes(cfg.ns));
    if (cfg.mode == "mac") {
      channels::MacSpec spec = channels::mac_spec_from_json_text(read_file(cfg.spec_path));
      homocode::HomologousParams base;
      base.q = spec.q;
      base.k1 = cfg.k1 >= 0 ? static_cast<std::size_t>(cfg.k1) : 0;
      base.k2 = cfg.k2 >= 0 ? static_cast<std::size_t>(cfg.k2) : 0;
      base.eps = cfg.eps;
      base.seed = cfg.seed;
      base.budget = cfg.budget;
      if (cfg.l1 >= 0) base.l1_override = static_cast<std::size_t>(cfg.l1);
      if (cfg.l2 >= 0) base.l2_override = static_cast<std::size_t>(cfg.l2);
      vr = harness::verify_shaping_coverage_mac(base, spec.px1, spec.px2, cfg.ns, cfg.draws);
    } else if (cfg.mode == "bc") {
      channels::BcSpec spec = channels::bc_spec_from_json_text(read_file(cfg.spec_path));
      martoncode::MartonParams base;
      base.k1 = cfg.k1 >= 0 ? static_cast<std::size_t>(cfg.k1) : 0;
      base.k2 = cfg.k2 >= 0 ? static_cast<std::size_t>(cfg.k2) : 0;
      base.alpha = cfg.alpha;
      base.eps = cfg.eps;
      base.seed = cfg.seed;
      base.budget = cfg.budget;
      if (cfg.l1 >= 0) base.l1_override = static_cast<std::size_t>(cfg.l1);
      if (cfg.l2 >= 0) base.l2_override = static_cast<std::size_t>(cfg.l2);
      vr = harness::verify_shaping_coverage_marton(base, spec, cfg.ns, cfg.draws);
    } else {
      throw SchemaError("mode");
    }
  } else {
    throw UsageError("unknown check: " + cfg.check +
                     " (expected star|natural|marton-forms|fullrank|marginal|uniformtype|coverage)");
  }

  finish_echo(echo);
  harness::Report report;
  report.title = "verify-" + cfg.check;
  report.seed = cfg.seed;
  report.config = echo;
  report.checks.push_back(vr);

  const std::string base = joined(cfg.out_dir, cfg.out_base);
  harness::export_report(report, base);
  write_sidecar(base);
  std::printf("[%s] %s statistic=%.6g threshold=%.6g samples=%llu -> %s.json\n",
              vr.pass ? "PASS" : "FAIL", vr.id.c_str(), vr.statistic, vr.threshold,
              static_cast<unsigned long long>(vr.samples), base.c_str());
  return vr.pass ? 0 : 5;
}

// ---- export command ----

int run_export(const RunConfig& cfg) {
  const harness::Report report = harness::report_from_json_text(read_file(cfg.spec_path));
  const std::string base = joined(cfg.out_dir, cfg.out_base);
  harness::export_report(report, base);
  write_sidecar(base);
  std::printf("wrote %s.json%s\n", base.c_str(), report.sweep.empty() ? "" : " and companion .csv");
  return 0;
}

void check_ranges(const RunConfig& cfg) {
  if (!(cfg.eps > 0.0)) throw SchemaError("eps");
  if (!(cfg.eps_prime > 0.0)) throw SchemaError("eps-prime");
  if (!(cfg.delta >= 0.0)) throw SchemaError("delta");
  if (cfg.grid < 2) throw SchemaError("grid");
  if (cfg.trials == 0) throw SchemaError("trials");
  if (!(cfg.alpha >= 0.0 && cfg.alpha <= 1.0)) throw SchemaError("alpha");
  if (!(cfg.r1 >= 0.0)) throw SchemaError("r1");
  if (!(cfg.r2 >= 0.0)) throw SchemaError("r2");
  if (cfg.instances == 0) throw SchemaError("instances");
  if (cfg.samples == 0) throw SchemaError("samples");
  if (cfg.draws == 0) throw SchemaError("draws");
  if (cfg.q < 2) throw SchemaError("q");
  if (cfg.budget == 0) throw SchemaError("budget");
  for (std::size_t n : cfg.ns)
    if (n == 0) throw SchemaError("n");
}

}  // namespace

RunConfig parse_config(const std::vector<std::string>& args) {
  RunConfig cfg;
  CLI::App app{"finite-field coding laboratory", "cflab"};
  app.require_subcommand(1);

  auto add_output = [&](CLI::App* sub) {
    sub->add_option("--out-dir", cfg.out_dir, "output directory (default $CFLAB_OUT_DIR or .)");
    sub->add_option("--out", cfg.out_base, "artifact base name, no extension");
    sub->add_option("--seed", cfg.seed, "master seed");
  };

  CLI::App* region = app.add_subcommand("region", "compute a rate region and export JSON + vertex CSV");
  region->add_option("--kind", cfg.kind, "cf|mac|r1|r2|star|marton|outer-general")->required();
  region->add_option("--spec", cfg.spec_path, "channel spec JSON")->required();
  region->add_option("--delta", cfg.delta, "constraint slack");
  region->add_option("--a1", cfg.a1, "override coefficient 1");
  region->add_option("--a2", cfg.a2, "override coefficient 2");
  region->add_option("--alpha", cfg.alpha, "split parameter (marton)");
  region->add_option("--form", cfg.form, "combined|per-receiver (marton)")
      ->check(CLI::IsMember({"combined", "per-receiver"}));
  region->add_option("--aux", cfg.aux, "trivial|revealing|<auxiliary JSON path> (outer-general)");
  add_output(region);

  auto add_sim = [&](CLI::App* sub) {
    sub->add_option("--spec", cfg.spec_path, "channel spec JSON")->required();
    sub->add_option("--r1", cfg.r1, "rate point, sender 1");
    sub->add_option("--r2", cfg.r2, "rate point, sender 2");
    sub->add_option("--n", cfg.ns, "block lengths (default 8 12 16)");
    sub->add_option("--k1", cfg.k1, "message length override, sender 1");
    sub->add_option("--k2", cfg.k2, "message length override, sender 2");
    sub->add_option("--l1", cfg.l1, "auxiliary index length override, sender 1");
    sub->add_option("--l2", cfg.l2, "auxiliary index length override, sender 2");
    sub->add_option("--eps", cfg.eps, "codebook typicality band");
    sub->add_option("--eps-prime", cfg.eps_prime, "decoder typicality band (default 2*eps)");
    sub->add_option("--trials", cfg.trials, "Monte Carlo trials per block length");
    sub->add_option("--threads", cfg.threads, "worker threads (0 = hardware)");
    sub->add_option("--budget", cfg.budget, "codebook enumeration budget");
    sub->add_option("--decode-budget", cfg.decode_budget, "decoder enumeration budget (default = budget)");
    sub->add_flag("--fixed-codebook", cfg.fixed_codebook,
                  "reuse one codebook instead of redrawing per trial");
    add_output(sub);
  };

  CLI::App* sim_mac = app.add_subcommand("simulate-mac", "estimate computation error over a block-length sweep");
  add_sim(sim_mac);
  sim_mac->add_option("--a1", cfg.a1, "override coefficient 1");
  sim_mac->add_option("--a2", cfg.a2, "override coefficient 2");

  CLI::App* sim_bc = app.add_subcommand("simulate-bc", "estimate broadcast error over a block-length sweep");
  add_sim(sim_bc);
  sim_bc->add_option("--alpha", cfg.alpha, "redundancy split");

  CLI::App* verify = app.add_subcommand("verify", "run one statistical or identity check");
  verify->add_option("--check", cfg.check,
                     "star|natural|marton-forms|fullrank|marginal|uniformtype|coverage")
      ->required();
  verify->add_option("--spec", cfg.spec_path, "channel spec JSON (marginal, coverage)");
  verify->add_option("--instances", cfg.instances, "random instances (identity checks)");
  verify->add_option("--grid", cfg.grid, "membership grid resolution per axis");
  verify->add_option("--samples", cfg.samples, "Monte Carlo samples");
  verify->add_option("--draws", cfg.draws, "codebook draws per block length (coverage)");
  verify->add_option("--q", cfg.q, "field order");
  verify->add_option("--k", cfg.k, "matrix rows / message length (fullrank, marginal)");
  verify->add_option("--n", cfg.n, "block length");
  verify->add_option("--ns", cfg.ns, "block-length sweep (coverage; default 8 12 16)");
  verify->add_option("--coord", cfg.coord, "codeword coordinate under test (marginal)");
  verify->add_option("--type", cfg.type_counts, "type-class counts, one per symbol (uniformtype)");
  verify->add_option("--mode", cfg.mode, "mac|bc (coverage)")
      ->check(CLI::IsMember({"mac", "bc"}));
  verify->add_option("--eps", cfg.eps, "codebook typicality band");
  verify->add_option("--alpha", cfg.alpha, "redundancy split (coverage, bc mode)");
  verify->add_option("--k1", cfg.k1, "message length override, sender 1");
  verify->add_option("--k2", cfg.k2, "message length override, sender 2");
  verify->add_option("--l1", cfg.l1, "auxiliary index length override, sender 1");
  verify->add_option("--l2", cfg.l2, "auxiliary index length override, sender 2");
  verify->add_option("--budget", cfg.budget, "codebook enumeration budget");
  add_output(verify);

  CLI::App* exp = app.add_subcommand("export", "re-export a report artifact (JSON + CSV companion)");
  exp->add_option("--in", cfg.spec_path, "report JSON to re-export")->required();
  add_output(exp);

  std::vector<const char*> argv;
  argv.push_back("cflab");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      cfg.command = "help";
      cfg.help_text = app.help();
      return cfg;
    }
    std::string sub;
    for (auto* s : app.get_subcommands()) sub = s->get_name();
    throw UsageError(std::string(e.what()) + "\nsubcommands: region, simulate-mac, simulate-bc, verify, export" +
                     (sub.empty() ? "" : "\nrun `cflab " + sub + " --help` for flags"));
  }

  cfg.command = app.get_subcommands().front()->get_name();
  if (cfg.eps_prime < 0.0) cfg.eps_prime = 2.0 * cfg.eps;
  if (cfg.decode_budget == 0) cfg.decode_budget = cfg.budget;
  if (cfg.ns.empty()) cfg.ns = {8, 12, 16};
  if (cfg.out_dir.empty()) {
    const char* env = std::getenv("CFLAB_OUT_DIR");
    cfg.out_dir = env && *env ? env : ".";
  }
  if (cfg.out_base.empty()) {
    if (cfg.command == "region") cfg.out_base = "region-" + cfg.kind;
    else if (cfg.command == "simulate-mac") cfg.out_base = "mac-sweep";
    else if (cfg.command == "simulate-bc") cfg.out_base = "bc-sweep";
    else if (cfg.command == "verify") cfg.out_base = "verify-" + cfg.check;
    else cfg.out_base = "export";
  }
  check_ranges(cfg);
  return cfg;
}

int dispatch(const RunConfig& cfg) {
  if (cfg.command == "help") {
    std::fputs(cfg.help_text.c_str(), stdout);
    return 0;
  }
  if (cfg.command == "region") return run_region(cfg);
  if (cfg.command == "simulate-mac") return run_simulate_mac(cfg);
  if (cfg.command == "simulate-bc") return run_simulate_bc(cfg);
  if (cfg.command == "verify") return run_verify(cfg);
  if (cfg.command == "export") return run_export(cfg);
  throw UsageError("unknown command: " + cfg.command);
}

int run_cli(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  try {
    return dispatch(parse_config(args));
  } catch (const UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const SchemaError& e) {
    std::fprintf(stderr, "schema error: %s\n", e.what());
    return 3;
  } catch (const BudgetExceeded& e) {
    std::fprintf(stderr, "budget exceeded: %s\n", e.what());
    return 4;
  } catch (const IoFailure& e) {
    std::fprintf(stderr, "io failure: %s\n", e.what());
    return 1;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 1;
  }
}

}  // namespace cflab::cli
