#include "cflab/homologous.hpp"

#include <cmath>
#include <utility>

#include <nlohmann/json.hpp>

#include "cflab/errors.hpp"
#include "count_band.hpp"

namespace cflab::homocode {

namespace {

using detail::checked_pow;
using detail::CountBand;

void check_sender(int j) {
  if (j != 1 && j != 2) throw InvalidSpec("homologous code: sender index must be 1 or 2");
}

}  // namespace

std::size_t shaping_length(std::size_t n, const prob::Pmf& px, std::uint32_t q,
                           double eps) {
  if (!(eps > 0.0)) throw InvalidSpec("homologous code: shaping band must be positive");
  double rate = prob::kl_divergence(px, prob::Pmf::uniform(q), static_cast<double>(q)) + eps;
  return static_cast<std::size_t>(std::ceil(static_cast<double>(n) * rate - 1e-12));
}

std::uint64_t HomologousCodebook::message_count(int j) const {
  check_sender(j);
  return checked_pow(params.q, j == 1 ? params.k1 : params.k2, ~0ull - 1);
}

bool HomologousCodebook::shaped(int j, std::uint64_t m_index) const {
  check_sender(j);
  const auto& cand = (j == 1) ? candidates1 : candidates2;
  return cand.at(m_index) > 0;
}

gf::FieldVector index_to_message(std::uint64_t idx, std::size_t len, std::uint32_t q) {
  gf::FieldVector m = gf::FieldVector::zeros(q, len);
  for (std::size_t i = 0; i < len; ++i) {
    m.v[i] = static_cast<std::uint32_t>(idx % q);
    idx /= q;
  }
  if (idx != 0) throw WrongMessageLength("homologous code: message index out of range");
  return m;
}

std::uint64_t message_to_index(const gf::FieldVector& m) {
  std::uint64_t idx = 0;
  for (std::size_t i = m.size(); i-- > 0;) idx = idx * m.q + m.v[i];
  return idx;
}

namespace {

// [m l 0] over kappa rows, m and l as little-endian digit strings.
gf::FieldVector stack_index(std::uint64_t m_index, std::size_t k, std::uint64_t l_index,
                            std::size_t l, std::size_t kappa, std::uint32_t q) {
  gf::FieldVector row = gf::FieldVector::zeros(q, kappa);
  for (std::size_t i = 0; i < k; ++i) {
    row.v[i] = static_cast<std::uint32_t>(m_index % q);
    m_index /= q;
  }
  for (std::size_t i = 0; i < l; ++i) {
    row.v[k + i] = static_cast<std::uint32_t>(l_index % q);
    l_index /= q;
  }
  return row;
}

}  // namespace

gf::FieldVector coset_codeword(const HomologousCodebook& cb, int j, std::uint64_t m_index,
                               std::uint64_t l_index) {
  check_sender(j);
  std::size_t k = (j == 1) ? cb.params.k1 : cb.params.k2;
  std::size_t l = (j == 1) ? cb.l1 : cb.l2;
  gf::FieldVector row = stack_index(m_index, k, l_index, l, cb.kappa, cb.params.q);
  return gf::vec_add(gf::vec_mat_mul(row, cb.g), (j == 1) ? cb.d1 : cb.d2);
}

HomologousCodebook generate_homologous_codebook(const HomologousParams& params,
                                                const prob::Pmf& px1, const prob::Pmf& px2) {
  gf::check_prime(params.q);
  if (params.n == 0) throw InvalidSpec("homologous code: block length must be positive");
  if (px1.size() != params.q || px2.size() != params.q)
    throw DimensionMismatch("homologous code: input pmf size must equal q");

  HomologousCodebook cb;
  cb.params = params;
  cb.px1 = px1;
  cb.px2 = px2;
  cb.l1 = params.l1_override ? *params.l1_override
                             : shaping_length(params.n, px1, params.q, params.eps);
  cb.l2 = params.l2_override ? *params.l2_override
                             : shaping_length(params.n, px2, params.q, params.eps);
  cb.kappa = std::max(params.k1 + cb.l1, params.k2 + cb.l2);

  if (checked_pow(params.q, params.k1 + cb.l1, params.budget) > params.budget ||
      checked_pow(params.q, params.k2 + cb.l2, params.budget) > params.budget)
    throw BudgetExceeded("homologous code: shaping enumeration exceeds the budget");

  Rng rng(params.seed);
  cb.g = gf::random_matrix(rng, params.q, cb.kappa, params.n);
  cb.d1 = gf::random_vector(rng, params.q, params.n);
  cb.d2 = gf::random_vector(rng, params.q, params.n);

  for (int j = 1; j <= 2; ++j) {
    std::size_t k = (j == 1) ? params.k1 : params.k2;
    std::size_t l = (j == 1) ? cb.l1 : cb.l2;
    const prob::Pmf& px = (j == 1) ? px1 : px2;
    auto& shaping = (j == 1) ? cb.shaping1 : cb.shaping2;
    auto& candidates = (j == 1) ? cb.candidates1 : cb.candidates2;

    CountBand band(px.data(), params.n, params.eps);
    std::uint64_t nm = checked_pow(params.q, k, params.budget);
    std::uint64_t nl = checked_pow(params.q, l, params.budget);
    shaping.resize(nm);
    candidates.resize(nm);
    std::vector<std::int64_t> counts(params.q);
    std::vector<std::uint64_t> typical;
    for (std::uint64_t m = 0; m < nm; ++m) {
      typical.clear();
      for (std::uint64_t li = 0; li < nl; ++li) {
        gf::FieldVector u = coset_codeword(cb, j, m, li);
        std::fill(counts.begin(), counts.end(), 0);
        for (std::uint32_t s : u.v) ++counts[s];
        if (band.pass(counts)) typical.push_back(li);
      }
      candidates[m] = typical.size();
      shaping[m] = typical.empty() ? rng.uniform_int(nl)
                                   : typical[rng.uniform_int(typical.size())];
    }
  }
  return cb;
}

gf::FieldVector encode(const HomologousCodebook& cb, int j, const gf::FieldVector& m) {
  check_sender(j);
  std::size_t k = (j == 1) ? cb.params.k1 : cb.params.k2;
  if (m.size() != k) throw WrongMessageLength("homologous code: message has wrong length");
  if (m.q != cb.params.q) throw ModulusMismatch("homologous code: message field mismatch");
  std::uint64_t idx = message_to_index(m);
  const auto& shaping = (j == 1) ? cb.shaping1 : cb.shaping2;
  return coset_codeword(cb, j, idx, shaping.at(idx));
}

gf::FieldVector true_combination(const HomologousCodebook& cb, const gf::FieldVector& m1,
                                 const gf::FieldVector& m2, std::uint32_t a1,
                                 std::uint32_t a2) {
  return gf::combine(a1, encode(cb, 1, m1), a2, encode(cb, 2, m2));
}

JtDecoder make_jt_decoder(const channels::MacSpec& spec, double eps_prime,
                          std::uint64_t budget) {
  if (!(eps_prime > 0.0)) throw InvalidSpec("decoder: typicality band must be positive");
  JtDecoder dec;
  dec.xxy = channels::build_mac_joint(spec).marginal({"X1", "X2", "Y"});
  dec.px1 = spec.px1;
  dec.px2 = spec.px2;
  dec.q = spec.q;
  dec.a1 = spec.a1;
  dec.a2 = spec.a2;
  dec.eps_prime = eps_prime;
  dec.budget = budget;
  return dec;
}

DecodeResult jt_decode(const HomologousCodebook& cb, const JtDecoder& dec,
                       const std::vector<std::uint32_t>& y) {
  const std::uint32_t q = cb.params.q;
  if (dec.q != q) throw ModulusMismatch("decoder: field does not match codebook");
  if (y.size() != cb.params.n) throw LengthMismatch("decoder: output length mismatch");
  const std::size_t n = cb.params.n;
  const std::size_t ny = dec.xxy.axis(2).size;
  for (std::uint32_t s : y)
    if (s >= ny) throw AlphabetMismatch("decoder: output symbol out of range");

  std::uint64_t n1 = checked_pow(q, cb.params.k1 + cb.l1, dec.budget);
  std::uint64_t n2 = checked_pow(q, cb.params.k2 + cb.l2, dec.budget);
  if (n1 > dec.budget || n2 > dec.budget || n1 > dec.budget / n2)
    throw BudgetExceeded("decoder: tuple enumeration exceeds the budget");

  // Marginally atypical auxiliaries cannot appear in a jointly typical
  // tuple, so enumerate survivors only.
  struct Candidate {
    std::uint64_t pair;  // m * q^l + l, little-endian digits give [m l 0]
    std::vector<std::uint32_t> u;
  };
  auto survivors = [&](int j, std::uint64_t total, const prob::Pmf& px) {
    CountBand band(px.data(), n, dec.eps_prime);
    std::vector<std::int64_t> counts(q);
    std::vector<Candidate> out;
    std::uint64_t nl = checked_pow(q, (j == 1) ? cb.l1 : cb.l2, ~0ull - 1);
    for (std::uint64_t pair = 0; pair < total; ++pair) {
      gf::FieldVector u = coset_codeword(cb, j, pair / nl, pair % nl);
      std::fill(counts.begin(), counts.end(), 0);
      for (std::uint32_t s : u.v) ++counts[s];
      if (band.pass(counts)) out.push_back({pair, std::move(u.v)});
    }
    return out;
  };
  std::vector<Candidate> c1 = survivors(1, n1, dec.px1);
  std::vector<Candidate> c2 = survivors(2, n2, dec.px2);

  CountBand joint_band(dec.xxy.data(), n, dec.eps_prime);
  std::vector<std::int64_t> counts(static_cast<std::size_t>(q) * q * ny);

  // The decoder needs only the set of distinct s vectors; two suffice to
  // declare ambiguity, so the scan stops there.
  bool found = false;
  bool ambiguous = false;
  gf::FieldVector s_first;
  std::uint64_t nl1 = checked_pow(q, cb.l1, ~0ull - 1);
  std::uint64_t nl2 = checked_pow(q, cb.l2, ~0ull - 1);
  std::vector<std::size_t> yoff(n);
  for (std::size_t i = 0; i < n; ++i) yoff[i] = y[i];

  for (const auto& u1 : c1) {
    for (const auto& u2 : c2) {
      std::fill(counts.begin(), counts.end(), 0);
      for (std::size_t i = 0; i < n; ++i)
        ++counts[(static_cast<std::size_t>(u1.u[i]) * q + u2.u[i]) * ny + yoff[i]];
      if (!joint_band.pass(counts)) continue;
      gf::FieldVector v1 = stack_index(u1.pair / nl1, cb.params.k1, u1.pair % nl1, cb.l1,
                                       cb.kappa, q);
      gf::FieldVector v2 = stack_index(u2.pair / nl2, cb.params.k2, u2.pair % nl2, cb.l2,
                                       cb.kappa, q);
      gf::FieldVector s = gf::combine(dec.a1, v1, dec.a2, v2);
      if (!found) {
        found = true;
        s_first = std::move(s);
      } else if (!(s == s_first)) {
        ambiguous = true;
        break;
      }
    }
    if (ambiguous) break;
  }

  DecodeResult res;
  if (!found) {
    res.failure = DecodeFailure::kNoCandidate;
    return res;
  }
  if (ambiguous) {
    res.failure = DecodeFailure::kAmbiguous;
    return res;
  }
  res.ok = true;
  res.w_hat = gf::vec_add(gf::vec_mat_mul(s_first, cb.g),
                          gf::combine(dec.a1, cb.d1, dec.a2, cb.d2));
  return res;
}

TrialRecord run_computation_trial(const HomologousCodebook& cb,
                                  const channels::MacSpec& spec, const JtDecoder& dec,
                                  Rng& rng) {
  if (spec.q != cb.params.q) throw ModulusMismatch("trial: channel field mismatch");
  TrialRecord rec;
  rec.m1 = rng.uniform_int(cb.message_count(1));
  rec.m2 = rng.uniform_int(cb.message_count(2));
  gf::FieldVector m1 = index_to_message(rec.m1, cb.params.k1, cb.params.q);
  gf::FieldVector m2 = index_to_message(rec.m2, cb.params.k2, cb.params.q);
  gf::FieldVector x1 = encode(cb, 1, m1);
  gf::FieldVector x2 = encode(cb, 2, m2);
  rec.w = gf::combine(spec.a1, x1, spec.a2, x2);
  std::vector<std::uint32_t> y = channels::sample_mac(spec, x1, x2, rng);
  DecodeResult d = jt_decode(cb, dec, y);
  rec.failure = d.failure;
  if (d.ok) {
    rec.w_hat = d.w_hat;
    rec.success = (d.w_hat == rec.w);
  }
  return rec;
}

std::string codebook_to_json_text(const HomologousCodebook& cb) {
  nlohmann::json j;
  j["version"] = 1;
  j["q"] = cb.params.q;
  j["n"] = cb.params.n;
  j["k1"] = cb.params.k1;
  j["k2"] = cb.params.k2;
  j["eps"] = cb.params.eps;
  j["seed"] = cb.params.seed;
  j["budget"] = cb.params.budget;
  if (cb.params.l1_override) j["l1_override"] = *cb.params.l1_override;
  if (cb.params.l2_override) j["l2_override"] = *cb.params.l2_override;
  j["l1"] = cb.l1;
  j["l2"] = cb.l2;
  j["kappa"] = cb.kappa;
  j["px1"] = cb.px1.data();
  j["px2"] = cb.px2.data();
  j["g"] = cb.g.a;
  j["d1"] = cb.d1.v;
  j["d2"] = cb.d2.v;
  j["shaping1"] = cb.shaping1;
  j["shaping2"] = cb.shaping2;
  j["candidates1"] = cb.candidates1;
  j["candidates2"] = cb.candidates2;
  return j.dump(2) + "\n";
}

HomologousCodebook codebook_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("codebook json: parse failure: ") + e.what());
  }
  if (!j.is_object() || !j.contains("version"))
    throw SchemaError("codebook json: missing version");
  if (j.at("version").get<int>() != 1)
    throw SchemaError("codebook json: unsupported version");
  for (const char* key : {"q", "n", "k1", "k2", "eps", "seed", "budget", "l1", "l2",
                          "kappa", "px1", "px2", "g", "d1", "d2", "shaping1", "shaping2",
                          "candidates1", "candidates2"})
    if (!j.contains(key)) throw SchemaError(std::string("codebook json: missing field '") + key + "'");

  HomologousCodebook cb;
  try {
    cb.params.q = j.at("q").get<std::uint32_t>();
    cb.params.n = j.at("n").get<std::size_t>();
    cb.params.k1 = j.at("k1").get<std::size_t>();
    cb.params.k2 = j.at("k2").get<std::size_t>();
    cb.params.eps = j.at("eps").get<double>();
    cb.params.seed = j.at("seed").get<std::uint64_t>();
    cb.params.budget = j.at("budget").get<std::uint64_t>();
    if (j.contains("l1_override")) cb.params.l1_override = j.at("l1_override").get<std::size_t>();
    if (j.contains("l2_override")) cb.params.l2_override = j.at("l2_override").get<std::size_t>();
    cb.l1 = j.at("l1").get<std::size_t>();
    cb.l2 = j.at("l2").get<std::size_t>();
    cb.kappa = j.at("kappa").get<std::size_t>();
    cb.px1 = prob::Pmf(j.at("px1").get<std::vector<double>>());
    cb.px2 = prob::Pmf(j.at("px2").get<std::vector<double>>());
    cb.g = gf::FieldMatrix(cb.params.q, cb.kappa, cb.params.n);
    auto flat = j.at("g").get<std::vector<std::uint32_t>>();
    if (flat.size() != cb.kappa * cb.params.n)
      throw SchemaError("codebook json: generator has wrong size");
    cb.g.a = std::move(flat);
    cb.d1 = gf::FieldVector(cb.params.q, j.at("d1").get<std::vector<std::uint32_t>>());
    cb.d2 = gf::FieldVector(cb.params.q, j.at("d2").get<std::vector<std::uint32_t>>());
    cb.shaping1 = j.at("shaping1").get<std::vector<std::uint64_t>>();
    cb.shaping2 = j.at("shaping2").get<std::vector<std::uint64_t>>();
    cb.candidates1 = j.at("candidates1").get<std::vector<std::uint64_t>>();
    cb.candidates2 = j.at("candidates2").get<std::vector<std::uint64_t>>();
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("codebook json: bad field: ") + e.what());
  }
  if (cb.kappa != std::max(cb.params.k1 + cb.l1, cb.params.k2 + cb.l2))
    throw SchemaError("codebook json: row count does not match lengths");
  if (cb.d1.size() != cb.params.n || cb.d2.size() != cb.params.n)
    throw SchemaError("codebook json: dither has wrong length");
  for (std::uint32_t v : cb.g.a)
    if (v >= cb.params.q) throw SchemaError("codebook json: generator entry out of field");
  return cb;
}

}  // namespace cflab::homocode
