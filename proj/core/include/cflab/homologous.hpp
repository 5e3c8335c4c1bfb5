#ifndef CFLAB_HOMOLOGOUS_HPP
#define CFLAB_HOMOLOGOUS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cflab/channels.hpp"
#include "cflab/field.hpp"
#include "cflab/prob.hpp"
#include "cflab/rng.hpp"

namespace cflab::homocode {

struct HomologousParams {
  std::uint32_t q = 2;
  std::size_t n = 1;
  std::size_t k1 = 0, k2 = 0;  // message lengths in field symbols
  double eps = 0.1;            // shaping band
  std::uint64_t seed = 0;
  std::uint64_t budget = 1ull << 24;  // enumeration cap (codewords / tuples)
  // The auxiliary lengths default to the redundancy formula below; an
  // override pins them (0 disables shaping search entirely).
  std::optional<std::size_t> l1_override, l2_override;
};

/// ceil(n * (D(px || Unif(F_q)) + eps)) in base-q units.
std::size_t shaping_length(std::size_t n, const prob::Pmf& px, std::uint32_t q, double eps);

/// Coset codebook pair sharing one generator matrix. Codewords are
/// recomputed on demand from (G, dithers, shaping table); nothing else is
/// stored, so replay from (params, pmfs) is exact.
struct HomologousCodebook {
  HomologousParams params;
  prob::Pmf px1, px2;
  std::size_t l1 = 0, l2 = 0;  // auxiliary index lengths
  std::size_t kappa = 0;       // generator rows, max(k1+l1, k2+l2)
  gf::FieldMatrix g;
  gf::FieldVector d1, d2;
  std::vector<std::uint64_t> shaping1, shaping2;      // message index -> l index
  std::vector<std::uint64_t> candidates1, candidates2;  // typical l count per message

  std::uint64_t message_count(int j) const;
  bool shaped(int j, std::uint64_t m_index) const;  // had >= 1 typical candidate
};

/// Draw order is fixed (G row-major, d1, d2, shaping for sender 1 then 2)
/// so a seed pins the codebook bit-for-bit.
HomologousCodebook generate_homologous_codebook(const HomologousParams& params,
                                                const prob::Pmf& px1, const prob::Pmf& px2);

/// Digits of idx in base q, least significant first, fixed width.
gf::FieldVector index_to_message(std::uint64_t idx, std::size_t len, std::uint32_t q);
std::uint64_t message_to_index(const gf::FieldVector& m);

/// u_j(m, l) = [m l 0] G + d_j for an explicit auxiliary index.
gf::FieldVector coset_codeword(const HomologousCodebook& cb, int j, std::uint64_t m_index,
                               std::uint64_t l_index);

/// x_j(m) = u_j(m, L_j(m)) with the stored shaping choice.
gf::FieldVector encode(const HomologousCodebook& cb, int j, const gf::FieldVector& m);

/// Componentwise a1*x1(m1) + a2*x2(m2).
gf::FieldVector true_combination(const HomologousCodebook& cb, const gf::FieldVector& m1,
                                 const gf::FieldVector& m2, std::uint32_t a1,
                                 std::uint32_t a2);

enum class DecodeFailure { kNone, kNoCandidate, kAmbiguous };

struct DecodeResult {
  bool ok = false;
  DecodeFailure failure = DecodeFailure::kNone;
  gf::FieldVector w_hat;
};

/// Typicality decoder context: the design joint (X1, X2, Y), the target
/// combination, the decoding band and the tuple-enumeration cap.
struct JtDecoder {
  prob::JointPmf xxy;
  prob::Pmf px1, px2;
  std::uint32_t q = 2;
  std::uint32_t a1 = 1, a2 = 1;
  double eps_prime = 0.2;
  std::uint64_t budget = 1ull << 24;
};

JtDecoder make_jt_decoder(const channels::MacSpec& spec, double eps_prime,
                          std::uint64_t budget = 1ull << 24);

/// Scans all (m1, l1, m2, l2) whose auxiliary pair is jointly typical with y
/// and collects s = a1 [m1 l1 0] + a2 [m2 l2 0]. A unique s decodes to
/// w = s G + a1 d1 + a2 d2; none or several is a failure. Tuples lying
/// outside single-sender typicality are pruned first (joint typicality
/// implies marginal typicality, so pruning never changes the candidate set).
DecodeResult jt_decode(const HomologousCodebook& cb, const JtDecoder& dec,
                       const std::vector<std::uint32_t>& y);

struct TrialRecord {
  bool success = false;
  DecodeFailure failure = DecodeFailure::kNone;
  std::uint64_t m1 = 0, m2 = 0;
  gf::FieldVector w, w_hat;
};

/// Uniform message pair -> encode -> channel -> decode -> compare.
TrialRecord run_computation_trial(const HomologousCodebook& cb,
                                  const channels::MacSpec& spec, const JtDecoder& dec,
                                  Rng& rng);

std::string codebook_to_json_text(const HomologousCodebook& cb);
HomologousCodebook codebook_from_json_text(const std::string& text);

}  // namespace cflab::homocode

#endif  // CFLAB_HOMOLOGOUS_HPP
