#include "cflab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "cflab/errors.hpp"
#include "cflab/field.hpp"
#include "cflab/regions.hpp"
#include "count_band.hpp"

namespace cflab::harness {

namespace {

constexpr double kZ95 = 1.959963984540054;

struct Tally {
  std::uint64_t success = 0;
  std::uint64_t fail1 = 0, fail2 = 0;  // bc only
  std::uint64_t no_candidate = 0, ambiguous = 0, wrong_value = 0;
};

// Static partition of [0, trials) across workers. Every trial derives its own
// stream from (master seed, trial index) and tallies are integers, so the
// merged result is identical for any worker count.
template <class PerTrial>
std::vector<Tally> run_partitioned(std::uint64_t trials, unsigned threads,
                                   const PerTrial& per_trial) {
  unsigned hw = std::thread::hardware_concurrency();
  if (threads == 0) threads = hw > 0 ? hw : 1;
  if (threads > trials) threads = static_cast<unsigned>(trials);
  std::vector<Tally> tallies(threads);
  if (threads <= 1) {
    for (std::uint64_t t = 0; t < trials; ++t) per_trial(t, tallies[0]);
    return tallies;
  }
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        std::uint64_t lo = trials * w / threads;
        std::uint64_t hi = trials * (w + 1) / threads;
        for (std::uint64_t t = lo; t < hi; ++t) per_trial(t, tallies[w]);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return tallies;
}

void tally_kind(Tally& tal, bool decoded_ok, bool no_candidate, bool ambiguous) {
  if (no_candidate)
    ++tal.no_candidate;
  else if (ambiguous)
    ++tal.ambiguous;
  else if (decoded_ok)
    ++tal.wrong_value;  // decoded cleanly but to the wrong value
}

}  // namespace

WilsonInterval wilson_ci95(std::uint64_t failures, std::uint64_t trials) {
  if (trials == 0) return {0.0, 1.0};
  double nn = static_cast<double>(trials);
  double f = static_cast<double>(failures) / nn;
  double z2 = kZ95 * kZ95;
  double denom = 1.0 + z2 / nn;
  double center = f + z2 / (2.0 * nn);
  double half = kZ95 * std::sqrt(f * (1.0 - f) / nn + z2 / (4.0 * nn * nn));
  WilsonInterval w;
  w.lo = std::max(0.0, (center - half) / denom);
  w.hi = std::min(1.0, (center + half) / denom);
  return w;
}

std::size_t message_length_for_rate(std::size_t n, double rate) {
  if (!(rate >= 0.0)) throw InvalidSpec("rate point must be nonnegative");
  long long k = std::llround(static_cast<double>(n) * rate);
  return k < 0 ? 0 : static_cast<std::size_t>(k);
}

ErrorEstimate estimate_mac_error(const MacExperiment& e, std::uint64_t trials,
                                 unsigned threads) {
  if (trials == 0) throw InvalidSpec("estimator: at least one trial is required");
  channels::validate(e.spec);
  homocode::JtDecoder dec = homocode::make_jt_decoder(e.spec, e.eps_prime, e.decode_budget);
  homocode::HomologousCodebook fixed;
  if (e.fixed_codebook)
    fixed = homocode::generate_homologous_codebook(e.params, e.spec.px1, e.spec.px2);

  auto per_trial = [&](std::uint64_t t, Tally& tal) {
    Rng ts = Rng(e.params.seed).derive(t);
    homocode::HomologousCodebook own;
    const homocode::HomologousCodebook* cb = &fixed;
    if (!e.fixed_codebook) {
      homocode::HomologousParams p = e.params;
      p.seed = ts.next_u64();
      own = homocode::generate_homologous_codebook(p, e.spec.px1, e.spec.px2);
      cb = &own;
    }
    homocode::TrialRecord rec = homocode::run_computation_trial(*cb, e.spec, dec, ts);
    if (rec.success)
      ++tal.success;
    else
      tally_kind(tal, rec.failure == homocode::DecodeFailure::kNone,
                 rec.failure == homocode::DecodeFailure::kNoCandidate,
                 rec.failure == homocode::DecodeFailure::kAmbiguous);
  };
  std::vector<Tally> tallies = run_partitioned(trials, threads, per_trial);

  ErrorEstimate est;
  est.trials = trials;
  est.ensemble = !e.fixed_codebook;
  std::uint64_t success = 0;
  for (const Tally& t : tallies) {
    success += t.success;
    est.no_candidate += t.no_candidate;
    est.ambiguous += t.ambiguous;
    est.wrong_value += t.wrong_value;
  }
  est.failures = trials - success;
  est.rate = static_cast<double>(est.failures) / static_cast<double>(trials);
  est.ci95 = wilson_ci95(est.failures, trials);
  return est;
}

BcErrorEstimate estimate_bc_error(const BcExperiment& e, std::uint64_t trials,
                                  unsigned threads) {
  if (trials == 0) throw InvalidSpec("estimator: at least one trial is required");
  channels::validate(e.spec);
  martoncode::MartonDecoder dec1 =
      martoncode::make_marton_decoder(e.spec, 1, e.eps_prime, e.decode_budget);
  martoncode::MartonDecoder dec2 =
      martoncode::make_marton_decoder(e.spec, 2, e.eps_prime, e.decode_budget);
  martoncode::MartonCodebook fixed;
  if (e.fixed_codebook) fixed = martoncode::generate_marton_codebook(e.params, e.spec);

  auto per_trial = [&](std::uint64_t t, Tally& tal) {
    Rng ts = Rng(e.params.seed).derive(t);
    martoncode::MartonCodebook own;
    const martoncode::MartonCodebook* cb = &fixed;
    if (!e.fixed_codebook) {
      martoncode::MartonParams p = e.params;
      p.seed = ts.next_u64();
      own = martoncode::generate_marton_codebook(p, e.spec);
      cb = &own;
    }
    martoncode::BcTrialRecord rec = martoncode::run_bc_trial(*cb, dec1, dec2, ts);
    if (rec.success1 && rec.success2) ++tal.success;
    if (!rec.success1) {
      ++tal.fail1;
      tally_kind(tal, rec.failure1 == martoncode::BcDecodeFailure::kNone,
                 rec.failure1 == martoncode::BcDecodeFailure::kNoCandidate,
                 rec.failure1 == martoncode::BcDecodeFailure::kAmbiguous);
    }
    if (!rec.success2) {
      ++tal.fail2;
      tally_kind(tal, rec.failure2 == martoncode::BcDecodeFailure::kNone,
                 rec.failure2 == martoncode::BcDecodeFailure::kNoCandidate,
                 rec.failure2 == martoncode::BcDecodeFailure::kAmbiguous);
    }
  };
  std::vector<Tally> tallies = run_partitioned(trials, threads, per_trial);

  BcErrorEstimate est;
  est.trials = trials;
  est.ensemble = !e.fixed_codebook;
  std::uint64_t success = 0;
  for (const Tally& t : tallies) {
    success += t.success;
    est.failures1 += t.fail1;
    est.failures2 += t.fail2;
    est.no_candidate += t.no_candidate;
    est.ambiguous += t.ambiguous;
    est.wrong_value += t.wrong_value;
  }
  est.joint_failures = trials - success;
  est.joint_rate = static_cast<double>(est.joint_failures) / static_cast<double>(trials);
  est.ci95 = wilson_ci95(est.joint_failures, trials);
  return est;
}

namespace {

// Small positive rationals (numerators in 1..8) keep every cell strictly
// positive, so conditionals and divergences are everywhere finite.
prob::Pmf random_rational_pmf(Rng& rng, std::size_t k) {
  std::vector<double> p(k);
  double s = 0.0;
  for (double& v : p) {
    v = 1.0 + static_cast<double>(rng.uniform_int(8));
    s += v;
  }
  for (double& v : p) v /= s;
  return prob::Pmf(p);
}

channels::MacSpec random_mac_instance(Rng& rng) {
  channels::MacSpec spec;
  spec.q = (rng.uniform_int(2) == 0) ? 2 : 3;
  spec.px1 = random_rational_pmf(rng, spec.q);
  spec.px2 = random_rational_pmf(rng, spec.q);
  spec.ny = 2 + rng.uniform_int(3);
  spec.t.resize(static_cast<std::size_t>(spec.q) * spec.q * spec.ny);
  for (std::uint32_t x1 = 0; x1 < spec.q; ++x1)
    for (std::uint32_t x2 = 0; x2 < spec.q; ++x2) {
      prob::Pmf row = random_rational_pmf(rng, spec.ny);
      for (std::size_t y = 0; y < spec.ny; ++y)
        spec.t[(static_cast<std::size_t>(x1) * spec.q + x2) * spec.ny + y] = row[y];
    }
  return spec;
}

channels::BcSpec random_bc_instance(Rng& rng) {
  channels::BcSpec spec;
  spec.nu1 = 2 + rng.uniform_int(2);
  spec.nu2 = 2 + rng.uniform_int(2);
  spec.nx = spec.nu1 * spec.nu2;
  spec.ny1 = 2 + rng.uniform_int(2);
  spec.ny2 = 2 + rng.uniform_int(2);
  spec.pu = random_rational_pmf(rng, spec.nu1 * spec.nu2).data();
  spec.xmap.resize(spec.nx);
  for (std::size_t i = 0; i < spec.nx; ++i) spec.xmap[i] = static_cast<std::uint32_t>(i);
  spec.t.resize(spec.nx * spec.ny1 * spec.ny2);
  for (std::size_t x = 0; x < spec.nx; ++x) {
    prob::Pmf row = random_rational_pmf(rng, spec.ny1 * spec.ny2);
    for (std::size_t c = 0; c < row.size(); ++c) spec.t[x * row.size() + c] = row[c];
  }
  return spec;
}

VerificationReport identity_report(std::string id, std::string test, std::uint64_t instances,
                                   std::size_t grid, std::uint64_t seed,
                                   std::uint64_t mismatches, std::uint64_t points_total) {
  VerificationReport r;
  r.id = std::move(id);
  r.test = std::move(test);
  r.samples = instances;
  r.seed = seed;
  r.statistic = static_cast<double>(mismatches);
  r.threshold = 0.0;
  r.pass = mismatches == 0;
  r.diagnostics.emplace_back("grid", static_cast<double>(grid));
  r.diagnostics.emplace_back("points", static_cast<double>(points_total));
  std::sort(r.diagnostics.begin(), r.diagnostics.end());
  return r;
}

}  // namespace

VerificationReport verify_star_decomposition(std::uint64_t instances, std::size_t grid,
                                             std::uint64_t seed) {
  if (instances == 0) throw InvalidSpec("verification: at least one instance is required");
  std::uint64_t mism = 0, points = 0;
  for (std::uint64_t i = 0; i < instances; ++i) {
    Rng irng = Rng(seed).derive(i);
    channels::MacSpec spec = random_mac_instance(irng);
    for (std::uint32_t a1 = 0; a1 < spec.q; ++a1)
      for (std::uint32_t a2 = 0; a2 < spec.q; ++a2) {
        if (a1 == 0 && a2 == 0) continue;
        spec.a1 = a1;
        spec.a2 = a2;
        regions::GridCompareResult res = regions::check_star_decomposition(
            channels::build_mac_joint(spec), a1, a2, grid);
        mism += res.mismatches;
        points += res.points;
      }
  }
  return identity_report(
      "star-decomposition",
      "grid membership of the split-form computation region equals the union of the "
      "single-combination and multiple-access regions for every nonzero coefficient pair",
      instances, grid, seed, mism, points);
}

VerificationReport verify_natural_decomposition(std::uint64_t instances, std::size_t grid,
                                                std::uint64_t seed) {
  if (instances == 0) throw InvalidSpec("verification: at least one instance is required");
  std::uint64_t mism = 0, points = 0;
  for (std::uint64_t i = 0; i < instances; ++i) {
    Rng irng = Rng(seed).derive(i);
    channels::MacSpec spec = random_mac_instance(irng);
    std::uint32_t a1 = 0, a2 = 0;
    bool chosen = false;
    for (int att = 0; att < 8 && !chosen; ++att) {
      std::uint32_t b1 = irng.field_element(spec.q);
      std::uint32_t b2 = irng.field_element(spec.q);
      if (b1 == 0 && b2 == 0) continue;
      spec.a1 = b1;
      spec.a2 = b2;
      if (regions::is_natural(channels::build_mac_joint(spec), b1, b2).natural) {
        a1 = b1;
        a2 = b2;
        chosen = true;
      }
    }
    if (!chosen) {
      // No luck sampling; take a minimizer, which is natural by definition.
      spec.a1 = 1;
      spec.a2 = 0;
      regions::NaturalnessResult nat =
          regions::is_natural(channels::build_mac_joint(spec), 1, 0);
      for (const regions::NaturalnessWitness& w : nat.table)
        if (w.h_wb_given_y <= nat.min_h + 1e-9) {
          a1 = w.b1;
          a2 = w.b2;
          break;
        }
    }
    spec.a1 = a1;
    spec.a2 = a2;
    regions::GridCompareResult res = regions::check_natural_decomposition(
        channels::build_mac_joint(spec), a1, a2, grid);
    mism += res.mismatches;
    points += res.points;
  }
  return identity_report(
      "natural-decomposition",
      "grid membership of the union of the single-combination and per-sender regions "
      "equals the union with the multiple-access region, under a naturally matched "
      "coefficient pair",
      instances, grid, seed, mism, points);
}

VerificationReport verify_marton_forms(std::uint64_t instances, std::size_t grid,
                                       std::uint64_t seed) {
  if (instances == 0) throw InvalidSpec("verification: at least one instance is required");
  const double alphas[] = {0.0, 0.25, 0.5, 0.75, 1.0};
  std::uint64_t mism = 0, points = 0;
  for (std::uint64_t i = 0; i < instances; ++i) {
    Rng irng = Rng(seed).derive(i);
    channels::BcSpec spec = random_bc_instance(irng);
    prob::JointPmf joint = channels::build_bc_joint(spec);
    for (double alpha : alphas) {
      regions::GridCompareResult res = regions::check_marton_forms(joint, alpha, grid);
      mism += res.mismatches;
      points += res.points;
    }
  }
  return identity_report(
      "marton-forms",
      "grid membership of the combined broadcast region equals the intersection of the "
      "two per-receiver regions across split parameters {0, 0.25, 0.5, 0.75, 1}",
      instances, grid, seed, mism, points);
}

double exact_full_rank_prob(std::uint32_t q, std::size_t k, std::size_t n) {
  gf::check_prime(q);
  if (k > n) return 0.0;
  double p = 1.0;
  for (std::size_t j = 1; j <= k; ++j)
    p *= 1.0 - std::pow(static_cast<double>(q),
                        static_cast<double>(j) - 1.0 - static_cast<double>(n));
  return p;
}

namespace {

std::string padded(std::size_t n) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "%03zu", n);
  return buf;
}

}  // namespace

VerificationReport verify_full_rank(std::uint32_t q, std::size_t k, std::size_t n,
                                    std::uint64_t samples, std::uint64_t seed) {
  if (samples == 0) throw InvalidSpec("verification: at least one sample is required");
  VerificationReport r;
  r.id = "full-rank";
  r.test = "empirical full-rank frequency within 3 sigma of the exact product; "
           "n * P(rank deficient) strictly decreasing over n = 4..16 at k = n/2";
  r.samples = samples;
  r.seed = seed;

  double exact = exact_full_rank_prob(q, k, n);
  Rng rng(seed);
  std::uint64_t hits = 0;
  for (std::uint64_t t = 0; t < samples; ++t)
    if (gf::rank(gf::random_matrix(rng, q, k, n)) == k) ++hits;
  double freq = static_cast<double>(hits) / static_cast<double>(samples);
  double sigma = std::sqrt(exact * (1.0 - exact) / static_cast<double>(samples));
  double z;
  if (sigma > 0.0)
    z = std::abs(freq - exact) / sigma;
  else
    z = (freq == exact) ? 0.0 : std::numeric_limits<double>::infinity();

  bool trend_ok = true;
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t m = 4; m <= 16; m += 2) {
    double t = static_cast<double>(m) * (1.0 - exact_full_rank_prob(q, m / 2, m));
    r.diagnostics.emplace_back("deficiency_n" + padded(m), t);
    if (!(t < prev)) trend_ok = false;
    prev = t;
  }
  r.diagnostics.emplace_back("empirical", freq);
  r.diagnostics.emplace_back("exact", exact);
  std::sort(r.diagnostics.begin(), r.diagnostics.end());

  r.statistic = z;
  r.threshold = 3.0;
  r.pass = (z <= 3.0) && trend_ok;
  return r;
}

VerificationReport verify_codeword_marginal(const homocode::HomologousParams& params,
                                            const channels::MacSpec& spec,
                                            std::size_t coord, std::uint64_t samples) {
  channels::validate(spec);
  if (spec.q != params.q) throw ModulusMismatch("verification: channel field mismatch");
  if (coord >= params.n) throw DimensionMismatch("verification: coordinate out of range");
  if (samples == 0) throw InvalidSpec("verification: at least one sample is required");

  const std::uint32_t q = params.q;
  const std::size_t ny = spec.ny;
  prob::JointPmf pxy = channels::build_mac_joint(spec).marginal({"X1", "Y"});
  detail::CountBand band(spec.px1.data(), params.n, params.eps);

  std::vector<std::uint64_t> sym(q, 0), joint(static_cast<std::size_t>(q) * ny, 0);
  std::vector<std::int64_t> counts(q);
  std::uint64_t cond = 0;
  for (std::uint64_t t = 0; t < samples; ++t) {
    Rng ts = Rng(params.seed).derive(t);
    homocode::HomologousParams p = params;
    p.seed = ts.next_u64();
    homocode::HomologousCodebook cb =
        homocode::generate_homologous_codebook(p, spec.px1, spec.px2);
    gf::FieldVector m1 =
        homocode::index_to_message(ts.uniform_int(cb.message_count(1)), params.k1, q);
    gf::FieldVector m2 =
        homocode::index_to_message(ts.uniform_int(cb.message_count(2)), params.k2, q);
    gf::FieldVector x1 = homocode::encode(cb, 1, m1);
    gf::FieldVector x2 = homocode::encode(cb, 2, m2);
    std::vector<std::uint32_t> y = channels::sample_mac(spec, x1, x2, ts);
    std::fill(counts.begin(), counts.end(), 0);
    for (std::uint32_t s : x1.v) ++counts[s];
    if (!band.pass(counts)) continue;
    ++cond;
    ++sym[x1.v[coord]];
    ++joint[static_cast<std::size_t>(x1.v[coord]) * ny + y[coord]];
  }

  VerificationReport r;
  r.id = "codeword-marginal";
  r.test = "conditional per-coordinate symbol and symbol-output frequencies within "
           "(1 +- eps) * p plus 3 sigma sampling slack";
  r.samples = samples;
  r.seed = params.seed;
  r.threshold = 0.0;
  if (cond == 0) {
    r.statistic = std::numeric_limits<double>::infinity();
    r.pass = false;
    r.diagnostics.emplace_back("conditioned", 0.0);
    return r;
  }

  double dc = static_cast<double>(cond);
  auto violation = [&](double f, double p) {
    double sigma = std::sqrt(p * (1.0 - p) / dc);
    double lo = (1.0 - params.eps) * p - 3.0 * sigma;
    double hi = (1.0 + params.eps) * p + 3.0 * sigma;
    return std::max(lo - f, f - hi);
  };
  double worst_sym = -std::numeric_limits<double>::infinity();
  for (std::uint32_t x = 0; x < q; ++x)
    worst_sym = std::max(worst_sym, violation(static_cast<double>(sym[x]) / dc, spec.px1[x]));
  double worst_joint = -std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < joint.size(); ++c)
    worst_joint =
        std::max(worst_joint, violation(static_cast<double>(joint[c]) / dc, pxy.data()[c]));

  r.statistic = std::max(worst_sym, worst_joint);
  r.pass = r.statistic <= 0.0;
  r.diagnostics.emplace_back("conditioned", dc);
  r.diagnostics.emplace_back("worst_symbol_slack", worst_sym);
  r.diagnostics.emplace_back("worst_symbol_output_slack", worst_joint);
  std::sort(r.diagnostics.begin(), r.diagnostics.end());
  return r;
}

VerificationReport verify_uniform_within_type(const homocode::HomologousParams& params,
                                              const prob::TypeVector& theta,
                                              std::uint64_t samples, double threshold) {
  const std::uint32_t q = params.q;
  const std::size_t n = params.n;
  if (theta.n != n || theta.counts.size() != q)
    throw DimensionMismatch("verification: type does not match the code parameters");
  std::uint64_t total = 0;
  for (std::uint64_t c : theta.counts) total += c;
  if (total != n) throw InvalidSpec("verification: type counts must sum to n");
  if (samples == 0) throw InvalidSpec("verification: at least one sample is required");
  std::uint64_t space = detail::checked_pow(q, n, 4096);
  if (space > 4096)
    throw InstanceTooLarge("verification: type class enumeration is limited to q^n <= 4096");

  // Enumerate the class once; sequences index it little-endian.
  std::vector<std::int32_t> pos(space, -1);
  std::size_t class_size = 0;
  std::vector<std::uint64_t> counts_buf(q);
  for (std::uint64_t idx = 0; idx < space; ++idx) {
    std::fill(counts_buf.begin(), counts_buf.end(), 0);
    std::uint64_t v = idx;
    for (std::size_t i = 0; i < n; ++i) {
      ++counts_buf[v % q];
      v /= q;
    }
    if (counts_buf == theta.counts) pos[idx] = static_cast<std::int32_t>(class_size++);
  }
  if (class_size == 0) throw InvalidSpec("verification: the type class is empty");

  std::vector<std::uint64_t> tally(class_size, 0);
  std::uint64_t cond = 0;
  for (std::uint64_t t = 0; t < samples; ++t) {
    Rng ts = Rng(params.seed).derive(t);
    homocode::HomologousParams p = params;
    p.seed = ts.next_u64();
    homocode::HomologousCodebook cb = homocode::generate_homologous_codebook(
        p, prob::Pmf::uniform(q), prob::Pmf::uniform(q));
    gf::FieldVector m =
        homocode::index_to_message(ts.uniform_int(cb.message_count(1)), params.k1, q);
    gf::FieldVector u = homocode::encode(cb, 1, m);
    std::uint64_t flat = 0;
    for (std::size_t i = u.size(); i-- > 0;) flat = flat * q + u.v[i];
    if (pos[flat] >= 0) {
      ++cond;
      ++tally[static_cast<std::size_t>(pos[flat])];
    }
  }

  VerificationReport r;
  r.id = "uniform-within-type";
  r.test = "total variation from uniform over the enumerated type class, conditional on "
           "the codeword landing in the class";
  r.samples = samples;
  r.seed = params.seed;
  r.threshold = threshold;
  if (cond == 0) {
    r.statistic = std::numeric_limits<double>::infinity();
    r.pass = false;
    r.diagnostics.emplace_back("class_size", static_cast<double>(class_size));
    r.diagnostics.emplace_back("conditioned", 0.0);
    return r;
  }
  double tv = 0.0;
  for (std::uint64_t c : tally)
    tv += std::abs(static_cast<double>(c) / static_cast<double>(cond) -
                   1.0 / static_cast<double>(class_size));
  tv *= 0.5;
  r.statistic = tv;
  r.pass = tv <= threshold;
  r.diagnostics.emplace_back("class_size", static_cast<double>(class_size));
  r.diagnostics.emplace_back("conditioned", static_cast<double>(cond));
  std::sort(r.diagnostics.begin(), r.diagnostics.end());
  return r;
}

namespace {

VerificationReport trend_report(std::string id, std::string test,
                                const std::vector<std::size_t>& ns,
                                const std::vector<double>& freq,
                                const std::vector<std::uint64_t>& totals,
                                std::uint64_t samples, std::uint64_t seed) {
  VerificationReport r;
  r.id = std::move(id);
  r.test = std::move(test);
  r.samples = samples;
  r.seed = seed;
  r.threshold = 0.0;
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < ns.size(); ++i) {
    double margin =
        3.0 * std::sqrt(freq[i] * (1.0 - freq[i]) / static_cast<double>(totals[i])) + 1e-9;
    worst = std::max(worst, freq[i + 1] - freq[i] - margin);
  }
  for (std::size_t i = 0; i < ns.size(); ++i)
    r.diagnostics.emplace_back("freq_n" + padded(ns[i]), freq[i]);
  std::sort(r.diagnostics.begin(), r.diagnostics.end());
  r.statistic = ns.size() < 2 ? 0.0 : worst;
  r.pass = r.statistic <= 0.0;
  return r;
}

// Override lengths in the base params are read relative to base.n and scale
// with the sweep, so a fixed per-symbol redundancy is held across block
// lengths (a constant index count would invert the trend).
std::size_t scaled_override(std::size_t value, std::size_t base_n, std::size_t n) {
  if (value == 0) return 0;
  return (value * n + base_n - 1) / base_n;
}

}  // namespace

VerificationReport verify_shaping_coverage_mac(const homocode::HomologousParams& base,
                                               const prob::Pmf& px1, const prob::Pmf& px2,
                                               const std::vector<std::size_t>& ns,
                                               std::uint64_t draws) {
  if (ns.empty()) throw InvalidSpec("verification: the n sweep is empty");
  if (draws == 0) throw InvalidSpec("verification: at least one draw is required");
  std::vector<double> freq(ns.size(), 0.0);
  std::vector<std::uint64_t> totals(ns.size(), 0);
  for (std::size_t i = 0; i < ns.size(); ++i) {
    std::uint64_t failures = 0, total = 0;
    for (std::uint64_t d = 0; d < draws; ++d) {
      homocode::HomologousParams p = base;
      p.n = ns[i];
      if (base.l1_override) p.l1_override = scaled_override(*base.l1_override, base.n, ns[i]);
      if (base.l2_override) p.l2_override = scaled_override(*base.l2_override, base.n, ns[i]);
      p.seed = Rng(base.seed).derive((static_cast<std::uint64_t>(i) << 32) | d).seed();
      homocode::HomologousCodebook cb = homocode::generate_homologous_codebook(p, px1, px2);
      for (int j = 1; j <= 2; ++j) {
        std::uint64_t nm = cb.message_count(j);
        for (std::uint64_t m = 0; m < nm; ++m)
          if (!cb.shaped(j, m)) ++failures;
        total += nm;
      }
    }
    freq[i] = static_cast<double>(failures) / static_cast<double>(total);
    totals[i] = total;
  }
  return trend_report("shaping-coverage",
                      "per-message shaping failure frequency nonincreasing over the n sweep "
                      "(3 sigma slack)",
                      ns, freq, totals, draws, base.seed);
}

VerificationReport verify_shaping_coverage_marton(const martoncode::MartonParams& base,
                                                  const channels::BcSpec& spec,
                                                  const std::vector<std::size_t>& ns,
                                                  std::uint64_t draws) {
  if (ns.empty()) throw InvalidSpec("verification: the n sweep is empty");
  if (draws == 0) throw InvalidSpec("verification: at least one draw is required");
  std::vector<double> freq(ns.size(), 0.0);
  std::vector<std::uint64_t> totals(ns.size(), 0);
  for (std::size_t i = 0; i < ns.size(); ++i) {
    std::uint64_t failures = 0, total = 0;
    for (std::uint64_t d = 0; d < draws; ++d) {
      martoncode::MartonParams p = base;
      p.n = ns[i];
      if (base.l1_override) p.l1_override = scaled_override(*base.l1_override, base.n, ns[i]);
      if (base.l2_override) p.l2_override = scaled_override(*base.l2_override, base.n, ns[i]);
      p.seed = Rng(base.seed).derive((static_cast<std::uint64_t>(i) << 32) | d).seed();
      martoncode::MartonCodebook cb = martoncode::generate_marton_codebook(p, spec);
      martoncode::CoverageStats stats = martoncode::coverage_stats(cb);
      failures += stats.failures;
      total += stats.pairs;
    }
    freq[i] = static_cast<double>(failures) / static_cast<double>(total);
    totals[i] = total;
  }
  return trend_report("covering",
                      "per-message-pair covering failure frequency nonincreasing over the "
                      "n sweep (3 sigma slack)",
                      ns, freq, totals, draws, base.seed);
}

SweepPoint make_sweep_point(std::size_t n, double r1, double r2, const ErrorEstimate& est) {
  return {n, r1, r2, est.trials, est.failures, est.rate, est.ci95.lo, est.ci95.hi};
}

SweepPoint make_sweep_point(std::size_t n, double r1, double r2,
                            const BcErrorEstimate& est) {
  return {n,        r1,       r2, est.trials, est.joint_failures, est.joint_rate,
          est.ci95.lo, est.ci95.hi};
}

std::string report_to_json_text(const Report& r) {
  nlohmann::json j;
  j["version"] = 1;
  j["title"] = r.title;
  j["seed"] = r.seed;
  nlohmann::json cfg = nlohmann::json::object();
  for (const auto& [k, v] : r.config) cfg[k] = v;
  j["config"] = cfg;
  nlohmann::json checks = nlohmann::json::array();
  for (const VerificationReport& c : r.checks) {
    nlohmann::json jc;
    jc["id"] = c.id;
    jc["test"] = c.test;
    jc["statistic"] = c.statistic;
    jc["threshold"] = c.threshold;
    jc["pass"] = c.pass;
    jc["samples"] = c.samples;
    jc["seed"] = c.seed;
    nlohmann::json diag = nlohmann::json::object();
    for (const auto& [k, v] : c.diagnostics) diag[k] = v;
    jc["diagnostics"] = diag;
    checks.push_back(jc);
  }
  j["checks"] = checks;
  nlohmann::json sweep = nlohmann::json::array();
  for (const SweepPoint& p : r.sweep) {
    nlohmann::json jp;
    jp["n"] = p.n;
    jp["rate_point_r1"] = p.rate_point_r1;
    jp["rate_point_r2"] = p.rate_point_r2;
    jp["trials"] = p.trials;
    jp["failures"] = p.failures;
    jp["rate"] = p.rate;
    jp["ci_lo"] = p.ci_lo;
    jp["ci_hi"] = p.ci_hi;
    sweep.push_back(jp);
  }
  j["sweep"] = sweep;
  return j.dump(2) + "\n";
}

Report report_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("report json: parse failure: ") + e.what());
  }
  if (!j.is_object() || !j.contains("version")) throw SchemaError("report json: missing version");
  if (j.at("version").get<int>() != 1) throw SchemaError("report json: unsupported version");
  Report r;
  try {
    r.title = j.at("title").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& [k, v] : j.at("config").items())
      r.config.emplace_back(k, v.get<std::string>());
    for (const auto& jc : j.at("checks")) {
      VerificationReport c;
      c.id = jc.at("id").get<std::string>();
      c.test = jc.at("test").get<std::string>();
      c.statistic = jc.at("statistic").get<double>();
      c.threshold = jc.at("threshold").get<double>();
      c.pass = jc.at("pass").get<bool>();
      c.samples = jc.at("samples").get<std::uint64_t>();
      c.seed = jc.at("seed").get<std::uint64_t>();
      for (const auto& [k, v] : jc.at("diagnostics").items())
        c.diagnostics.emplace_back(k, v.get<double>());
      r.checks.push_back(std::move(c));
    }
    for (const auto& jp : j.at("sweep")) {
      SweepPoint p;
      p.n = jp.at("n").get<std::size_t>();
      p.rate_point_r1 = jp.at("rate_point_r1").get<double>();
      p.rate_point_r2 = jp.at("rate_point_r2").get<double>();
      p.trials = jp.at("trials").get<std::uint64_t>();
      p.failures = jp.at("failures").get<std::uint64_t>();
      p.rate = jp.at("rate").get<double>();
      p.ci_lo = jp.at("ci_lo").get<double>();
      p.ci_hi = jp.at("ci_hi").get<double>();
      r.sweep.push_back(p);
    }
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("report json: bad field: ") + e.what());
  }
  return r;
}

std::string sweep_to_csv_text(const std::vector<SweepPoint>& sweep) {
  std::ostringstream os;
  os << std::setprecision(12);
  os << "n,rate_point_r1,rate_point_r2,trials,failures,rate,ci_lo,ci_hi\n";
  for (const SweepPoint& p : sweep)
    os << p.n << ',' << p.rate_point_r1 << ',' << p.rate_point_r2 << ',' << p.trials << ','
       << p.failures << ',' << p.rate << ',' << p.ci_lo << ',' << p.ci_hi << '\n';
  return os.str();
}

void export_report(const Report& r, const std::string& base_path) {
  auto write = [](const std::string& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoFailure("cannot open '" + path + "' for writing");
    os << text;
    os.flush();
    if (!os) throw IoFailure("failed writing '" + path + "'");
  };
  write(base_path + ".json", report_to_json_text(r));
  if (!r.sweep.empty()) write(base_path + ".csv", sweep_to_csv_text(r.sweep));
}

}  // namespace cflab::harness
