#include "cflab/marton.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include <nlohmann/json.hpp>

#include "cflab/errors.hpp"
#include "count_band.hpp"

namespace cflab::martoncode {

namespace {

using detail::checked_pow;
using detail::CountBand;

// Namespace tag separating per-pair index streams from the bank stream.
constexpr std::uint64_t kPairStream = 0x636f766572ull;

void check_receiver(int j) {
  if (j != 1 && j != 2) throw InvalidSpec("marton code: receiver index must be 1 or 2");
}

void check_params(const MartonParams& params, const channels::BcSpec& spec) {
  channels::validate(spec);
  if (params.n == 0) throw InvalidSpec("marton code: block length must be positive");
  if (!(params.alpha >= 0.0 && params.alpha <= 1.0))
    throw InvalidAlpha("marton code: redundancy split must lie in [0, 1]");
  if (!(params.eps > 0.0)) throw InvalidSpec("marton code: covering band must be positive");
  if (params.k1 + params.k2 > 62)
    throw InstanceTooLarge("marton code: message pair space exceeds 2^62");
}

prob::JointPmf aux_joint(const channels::BcSpec& spec) {
  return prob::JointPmf({{"U1", spec.nu1}, {"U2", spec.nu2}}, spec.pu);
}

std::vector<double> marginal_cdf(const channels::BcSpec& spec, int j) {
  std::size_t na = (j == 1) ? spec.nu1 : spec.nu2;
  std::vector<double> cdf(na, 0.0);
  for (std::size_t u1 = 0; u1 < spec.nu1; ++u1)
    for (std::size_t u2 = 0; u2 < spec.nu2; ++u2)
      cdf[(j == 1) ? u1 : u2] += spec.pu_at(u1, u2);
  for (std::size_t a = 1; a < na; ++a) cdf[a] += cdf[a - 1];
  return cdf;
}

// Codes l1 * 2^{l2} + l2 of the index pairs jointly typical with the design
// pmf for this message pair. counts is scratch of size nu1 * nu2.
std::vector<std::uint64_t> typical_codes(const MartonCodebook& cb, std::uint64_t m1,
                                         std::uint64_t m2, const CountBand& band,
                                         std::vector<std::int64_t>& counts) {
  const std::size_t n = cb.params.n;
  const std::size_t nu2 = cb.spec.nu2;
  const std::uint64_t nl1 = 1ull << cb.l1;
  const std::uint64_t nl2 = 1ull << cb.l2;
  std::vector<std::uint64_t> codes;
  for (std::uint64_t i1 = 0; i1 < nl1; ++i1) {
    const std::uint32_t* r1 = cb.row(1, m1, i1);
    for (std::uint64_t i2 = 0; i2 < nl2; ++i2) {
      const std::uint32_t* r2 = cb.row(2, m2, i2);
      std::fill(counts.begin(), counts.end(), 0);
      bool rejected = false;
      for (std::size_t i = 0; i < n; ++i) {
        std::size_t cell = static_cast<std::size_t>(r1[i]) * nu2 + r2[i];
        if (band.above(cell, ++counts[cell])) {
          rejected = true;
          break;
        }
      }
      if (!rejected && band.floors_ok(counts)) codes.push_back(i1 * nl2 + i2);
    }
  }
  return codes;
}

}  // namespace

std::pair<std::size_t, std::size_t> covering_lengths(const MartonParams& params,
                                                     const channels::BcSpec& spec) {
  check_params(params, spec);
  prob::JointPmf uu = aux_joint(spec);
  double iu = prob::mutual_information(uu, {"U1"}, {"U2"}, 2.0);
  double huu = prob::entropy(uu, {}, 2.0);
  double excess = iu + 10.0 * params.eps * huu;
  auto len = [&](double share) {
    return static_cast<std::size_t>(
        std::ceil(static_cast<double>(params.n) * share * excess - 1e-12));
  };
  return {len(params.alpha), len(1.0 - params.alpha)};
}

std::uint64_t MartonCodebook::message_count(int j) const {
  check_receiver(j);
  return 1ull << ((j == 1) ? params.k1 : params.k2);
}

std::uint64_t MartonCodebook::bank_rows(int j) const {
  check_receiver(j);
  return (j == 1) ? (1ull << (params.k1 + l1)) : (1ull << (params.k2 + l2));
}

const std::uint32_t* MartonCodebook::row(int j, std::uint64_t m, std::uint64_t l) const {
  std::size_t li = (j == 1) ? l1 : l2;
  const auto& bank = (j == 1) ? u1 : u2;
  return bank.data() + ((m << li) + l) * params.n;
}

MartonCodebook generate_marton_codebook(const MartonParams& params,
                                        const channels::BcSpec& spec) {
  MartonCodebook cb;
  cb.params = params;
  cb.spec = spec;
  auto formula = covering_lengths(params, spec);
  cb.l1 = params.l1_override ? *params.l1_override : formula.first;
  cb.l2 = params.l2_override ? *params.l2_override : formula.second;
  if (params.k1 + cb.l1 > 62 || params.k2 + cb.l2 > 62)
    throw InstanceTooLarge("marton code: auxiliary bank index exceeds 2^62");
  if (checked_pow(2, params.k1 + cb.l1, params.budget) > params.budget ||
      checked_pow(2, params.k2 + cb.l2, params.budget) > params.budget)
    throw BudgetExceeded("marton code: auxiliary bank exceeds the budget");

  Rng rng(params.seed);
  for (int j = 1; j <= 2; ++j) {
    std::vector<double> cdf = marginal_cdf(spec, j);
    std::uint64_t rows = cb.bank_rows(j);
    if (rows > ~0ull / params.n)
      throw InstanceTooLarge("marton code: auxiliary bank does not fit in memory");
    auto& bank = (j == 1) ? cb.u1 : cb.u2;
    bank.resize(rows * params.n);
    for (std::size_t s = 0; s < bank.size(); ++s)
      bank[s] = static_cast<std::uint32_t>(rng.sample_cdf(cdf));
  }
  return cb;
}

ChosenPair chosen_pair(const MartonCodebook& cb, std::uint64_t m1, std::uint64_t m2) {
  if (m1 >= cb.message_count(1) || m2 >= cb.message_count(2))
    throw WrongMessageLength("marton code: message index out of range");
  if (cb.l1 + cb.l2 > 62)
    throw InstanceTooLarge("marton code: index pair space exceeds 2^62");
  std::uint64_t nl1 = 1ull << cb.l1;
  std::uint64_t nl2 = 1ull << cb.l2;
  if (nl1 > cb.params.budget / nl2)
    throw BudgetExceeded("marton code: index pair scan exceeds the budget");

  CountBand band(cb.spec.pu, cb.params.n, cb.params.eps);
  std::vector<std::int64_t> counts(cb.spec.nu1 * cb.spec.nu2);
  std::vector<std::uint64_t> codes = typical_codes(cb, m1, m2, band, counts);

  // The draw comes from a stream derived from (seed, message pair), so the
  // choice is reproducible no matter which pairs were queried before.
  Rng shaper = Rng(cb.params.seed).derive(kPairStream).derive(
      m1 * cb.message_count(2) + m2);
  ChosenPair cp;
  cp.covered = !codes.empty();
  cp.candidates = codes.size();
  std::uint64_t code = cp.covered ? codes[shaper.uniform_int(codes.size())]
                                  : shaper.uniform_int(nl1 * nl2);
  cp.l1 = code / nl2;
  cp.l2 = code % nl2;
  return cp;
}

std::vector<std::uint32_t> marton_encode(const MartonCodebook& cb, std::uint64_t m1,
                                         std::uint64_t m2) {
  ChosenPair cp = chosen_pair(cb, m1, m2);
  const std::uint32_t* r1 = cb.row(1, m1, cp.l1);
  const std::uint32_t* r2 = cb.row(2, m2, cp.l2);
  std::vector<std::uint32_t> x(cb.params.n);
  for (std::size_t i = 0; i < cb.params.n; ++i) x[i] = cb.spec.x_of(r1[i], r2[i]);
  return x;
}

CoverageStats coverage_stats(const MartonCodebook& cb) {
  std::uint64_t nm1 = cb.message_count(1);
  std::uint64_t nm2 = cb.message_count(2);
  std::uint64_t scans = (1ull << cb.l1) * (1ull << cb.l2);
  if (nm1 * nm2 > cb.params.budget / scans)
    throw BudgetExceeded("marton code: covering census exceeds the budget");

  CountBand band(cb.spec.pu, cb.params.n, cb.params.eps);
  std::vector<std::int64_t> counts(cb.spec.nu1 * cb.spec.nu2);
  CoverageStats stats;
  stats.pairs = nm1 * nm2;
  for (std::uint64_t m1 = 0; m1 < nm1; ++m1)
    for (std::uint64_t m2 = 0; m2 < nm2; ++m2)
      if (typical_codes(cb, m1, m2, band, counts).empty()) ++stats.failures;
  return stats;
}

MartonDecoder make_marton_decoder(const channels::BcSpec& spec, int receiver,
                                  double eps_prime, std::uint64_t budget) {
  check_receiver(receiver);
  channels::validate(spec);
  if (!(eps_prime > 0.0)) throw InvalidSpec("decoder: typicality band must be positive");
  MartonDecoder dec;
  dec.receiver = receiver;
  dec.uuy = channels::build_bc_joint(spec).marginal(
      {"U1", "U2", receiver == 1 ? "Y1" : "Y2"});
  dec.eps_prime = eps_prime;
  dec.budget = budget;
  return dec;
}

BcDecodeResult marton_decode(const MartonCodebook& cb, const MartonDecoder& dec,
                             const std::vector<std::uint32_t>& y) {
  const std::size_t n = cb.params.n;
  const std::size_t nu1 = cb.spec.nu1;
  const std::size_t nu2 = cb.spec.nu2;
  if (dec.uuy.axis(0).size != nu1 || dec.uuy.axis(1).size != nu2)
    throw AlphabetMismatch("decoder: auxiliary alphabets do not match codebook");
  if (y.size() != n) throw LengthMismatch("decoder: output length mismatch");
  const std::size_t ny = dec.uuy.axis(2).size;
  for (std::uint32_t s : y)
    if (s >= ny) throw AlphabetMismatch("decoder: output symbol out of range");

  std::uint64_t n1 = cb.bank_rows(1);
  std::uint64_t n2 = cb.bank_rows(2);
  if (n1 > dec.budget || n2 > dec.budget || n1 > dec.budget / n2)
    throw BudgetExceeded("decoder: tuple enumeration exceeds the budget");

  // A bank row whose pair type with y is already off-band cannot sit inside a
  // jointly typical tuple, so each bank is filtered against its own pair band
  // before the tuple scan.
  const std::string yname = dec.uuy.axis(2).name;
  struct Candidate {
    std::uint64_t pair;
    const std::uint32_t* u;
  };
  auto survivors = [&](int j, std::size_t na) {
    CountBand band(dec.uuy.marginal({j == 1 ? "U1" : "U2", yname}).data(), n,
                   dec.eps_prime);
    std::vector<std::int64_t> counts(na * ny);
    std::vector<Candidate> out;
    std::uint64_t rows = cb.bank_rows(j);
    for (std::uint64_t pair = 0; pair < rows; ++pair) {
      const std::uint32_t* u = cb.row(j, pair >> ((j == 1) ? cb.l1 : cb.l2),
                                      pair & ((1ull << ((j == 1) ? cb.l1 : cb.l2)) - 1));
      std::fill(counts.begin(), counts.end(), 0);
      bool rejected = false;
      for (std::size_t i = 0; i < n; ++i) {
        std::size_t cell = static_cast<std::size_t>(u[i]) * ny + y[i];
        if (band.above(cell, ++counts[cell])) {
          rejected = true;
          break;
        }
      }
      if (!rejected && band.floors_ok(counts)) out.push_back({pair, u});
    }
    return out;
  };
  std::vector<Candidate> c1 = survivors(1, nu1);
  std::vector<Candidate> c2 = survivors(2, nu2);

  CountBand joint_band(dec.uuy.data(), n, dec.eps_prime);
  std::vector<std::int64_t> counts(nu1 * nu2 * ny);

  // Only the set of distinct own-message values matters; a second one is
  // already an ambiguity, so the scan stops there.
  bool found = false;
  bool ambiguous = false;
  std::uint64_t m_first = 0;
  for (const auto& t1 : c1) {
    for (const auto& t2 : c2) {
      std::fill(counts.begin(), counts.end(), 0);
      bool rejected = false;
      for (std::size_t i = 0; i < n; ++i) {
        std::size_t cell = (static_cast<std::size_t>(t1.u[i]) * nu2 + t2.u[i]) * ny + y[i];
        if (joint_band.above(cell, ++counts[cell])) {
          rejected = true;
          break;
        }
      }
      if (rejected || !joint_band.floors_ok(counts)) continue;
      std::uint64_t m = (dec.receiver == 1) ? (t1.pair >> cb.l1) : (t2.pair >> cb.l2);
      if (!found) {
        found = true;
        m_first = m;
      } else if (m != m_first) {
        ambiguous = true;
        break;
      }
    }
    if (ambiguous) break;
  }

  BcDecodeResult res;
  if (!found) {
    res.failure = BcDecodeFailure::kNoCandidate;
    return res;
  }
  if (ambiguous) {
    res.failure = BcDecodeFailure::kAmbiguous;
    return res;
  }
  res.ok = true;
  res.m_hat = m_first;
  return res;
}

BcTrialRecord run_bc_trial(const MartonCodebook& cb, const MartonDecoder& dec1,
                           const MartonDecoder& dec2, Rng& rng) {
  if (dec1.receiver != 1 || dec2.receiver != 2)
    throw InvalidSpec("trial: decoders must target receivers 1 and 2");
  BcTrialRecord rec;
  rec.m1 = rng.uniform_int(cb.message_count(1));
  rec.m2 = rng.uniform_int(cb.message_count(2));
  ChosenPair cp = chosen_pair(cb, rec.m1, rec.m2);
  const std::uint32_t* r1 = cb.row(1, rec.m1, cp.l1);
  const std::uint32_t* r2 = cb.row(2, rec.m2, cp.l2);
  std::vector<std::uint32_t> u1(r1, r1 + cb.params.n);
  std::vector<std::uint32_t> u2(r2, r2 + cb.params.n);
  auto [y1, y2] = channels::sample_bc(cb.spec, u1, u2, rng);
  BcDecodeResult d1 = marton_decode(cb, dec1, y1);
  BcDecodeResult d2 = marton_decode(cb, dec2, y2);
  rec.failure1 = d1.failure;
  rec.failure2 = d2.failure;
  rec.success1 = d1.ok && d1.m_hat == rec.m1;
  rec.success2 = d2.ok && d2.m_hat == rec.m2;
  return rec;
}

std::string marton_to_json_text(const MartonCodebook& cb) {
  nlohmann::json j;
  j["version"] = 1;
  j["n"] = cb.params.n;
  j["k1"] = cb.params.k1;
  j["k2"] = cb.params.k2;
  j["alpha"] = cb.params.alpha;
  j["eps"] = cb.params.eps;
  j["seed"] = cb.params.seed;
  j["budget"] = cb.params.budget;
  if (cb.params.l1_override) j["l1_override"] = *cb.params.l1_override;
  if (cb.params.l2_override) j["l2_override"] = *cb.params.l2_override;
  j["l1"] = cb.l1;
  j["l2"] = cb.l2;
  j["channel"] = nlohmann::json::parse(channels::bc_spec_to_json_text(cb.spec));
  j["u1"] = cb.u1;
  j["u2"] = cb.u2;
  return j.dump(2) + "\n";
}

MartonCodebook marton_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("marton json: parse failure: ") + e.what());
  }
  if (!j.is_object() || !j.contains("version"))
    throw SchemaError("marton json: missing version");
  if (j.at("version").get<int>() != 1)
    throw SchemaError("marton json: unsupported version");
  for (const char* key :
       {"n", "k1", "k2", "alpha", "eps", "seed", "budget", "l1", "l2", "channel", "u1", "u2"})
    if (!j.contains(key)) throw SchemaError(std::string("marton json: missing field '") + key + "'");

  MartonCodebook cb;
  try {
    cb.params.n = j.at("n").get<std::size_t>();
    cb.params.k1 = j.at("k1").get<std::size_t>();
    cb.params.k2 = j.at("k2").get<std::size_t>();
    cb.params.alpha = j.at("alpha").get<double>();
    cb.params.eps = j.at("eps").get<double>();
    cb.params.seed = j.at("seed").get<std::uint64_t>();
    cb.params.budget = j.at("budget").get<std::uint64_t>();
    if (j.contains("l1_override")) cb.params.l1_override = j.at("l1_override").get<std::size_t>();
    if (j.contains("l2_override")) cb.params.l2_override = j.at("l2_override").get<std::size_t>();
    cb.l1 = j.at("l1").get<std::size_t>();
    cb.l2 = j.at("l2").get<std::size_t>();
    cb.spec = channels::bc_spec_from_json_text(j.at("channel").dump());
    cb.u1 = j.at("u1").get<std::vector<std::uint32_t>>();
    cb.u2 = j.at("u2").get<std::vector<std::uint32_t>>();
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("marton json: bad field: ") + e.what());
  }
  check_params(cb.params, cb.spec);
  if (cb.params.k1 + cb.l1 > 62 || cb.params.k2 + cb.l2 > 62)
    throw SchemaError("marton json: bank index exceeds 2^62");
  if (cb.u1.size() != cb.bank_rows(1) * cb.params.n ||
      cb.u2.size() != cb.bank_rows(2) * cb.params.n)
    throw SchemaError("marton json: bank size does not match lengths");
  for (std::uint32_t v : cb.u1)
    if (v >= cb.spec.nu1) throw SchemaError("marton json: bank symbol out of alphabet");
  for (std::uint32_t v : cb.u2)
    if (v >= cb.spec.nu2) throw SchemaError("marton json: bank symbol out of alphabet");
  return cb;
}

}  // namespace cflab::martoncode
