#ifndef CFLAB_MARTON_HPP
#define CFLAB_MARTON_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cflab/channels.hpp"
#include "cflab/prob.hpp"
#include "cflab/rng.hpp"

namespace cflab::martoncode {

struct MartonParams {
  std::size_t n = 1;
  std::size_t k1 = 0, k2 = 0;  // message lengths in bits
  double alpha = 0.5;          // redundancy split between the senders' banks
  double eps = 0.1;            // covering band
  std::uint64_t seed = 0;
  std::uint64_t budget = 1ull << 24;
  std::optional<std::size_t> l1_override, l2_override;
};

/// Bank index lengths: ceil(n * alpha * (I(U1;U2) + 10 eps H(U1,U2))) bits
/// for sender 1 and the (1 - alpha) share for sender 2.
std::pair<std::size_t, std::size_t> covering_lengths(const MartonParams& params,
                                                     const channels::BcSpec& spec);

/// Auxiliary banks u_j[m_j][l_j] drawn i.i.d. from the marginals. The
/// per-message-pair index choice is not tabulated (the pair rectangle can
/// dwarf the banks); it is recomputed on demand from a stream derived from
/// (seed, pair), so replay is exact without the table.
struct MartonCodebook {
  MartonParams params;
  channels::BcSpec spec;
  std::size_t l1 = 0, l2 = 0;
  std::vector<std::uint32_t> u1, u2;  // flat banks, row (m * 2^l + l_idx) * n

  std::uint64_t message_count(int j) const;
  std::uint64_t bank_rows(int j) const;
  const std::uint32_t* row(int j, std::uint64_t m, std::uint64_t l) const;
};

MartonCodebook generate_marton_codebook(const MartonParams& params,
                                        const channels::BcSpec& spec);

struct ChosenPair {
  std::uint64_t l1 = 0, l2 = 0;
  bool covered = false;         // a jointly typical pair existed
  std::uint64_t candidates = 0;  // how many pairs were jointly typical
};

/// Uniform draw among the jointly typical (l1, l2) for this message pair,
/// falling back to a uniform draw over the whole rectangle.
ChosenPair chosen_pair(const MartonCodebook& cb, std::uint64_t m1, std::uint64_t m2);

/// x_i = x(u1_i, u2_i) on the chosen auxiliary rows.
std::vector<std::uint32_t> marton_encode(const MartonCodebook& cb, std::uint64_t m1,
                                         std::uint64_t m2);

struct CoverageStats {
  std::uint64_t pairs = 0;
  std::uint64_t failures = 0;  // message pairs with no jointly typical index pair
};

/// Exact covering census over every message pair (budget-guarded).
CoverageStats coverage_stats(const MartonCodebook& cb);

enum class BcDecodeFailure { kNone, kNoCandidate, kAmbiguous };

struct BcDecodeResult {
  bool ok = false;
  BcDecodeFailure failure = BcDecodeFailure::kNone;
  std::uint64_t m_hat = 0;
};

/// Receiver-side context: the design joint (U1, U2, Y_j) and the band.
struct MartonDecoder {
  int receiver = 1;
  prob::JointPmf uuy;
  double eps_prime = 0.2;
  std::uint64_t budget = 1ull << 24;
};

MartonDecoder make_marton_decoder(const channels::BcSpec& spec, int receiver,
                                  double eps_prime, std::uint64_t budget = 1ull << 24);

/// Looks for a unique own-message value m_j appearing in any tuple
/// (m1, l1, m2, l2) jointly typical with y; the other message index is left
/// nonunique. Rows failing their pair band with y are pruned first.
BcDecodeResult marton_decode(const MartonCodebook& cb, const MartonDecoder& dec,
                             const std::vector<std::uint32_t>& y);

struct BcTrialRecord {
  std::uint64_t m1 = 0, m2 = 0;
  bool success1 = false, success2 = false;
  BcDecodeFailure failure1 = BcDecodeFailure::kNone;
  BcDecodeFailure failure2 = BcDecodeFailure::kNone;
};

BcTrialRecord run_bc_trial(const MartonCodebook& cb, const MartonDecoder& dec1,
                           const MartonDecoder& dec2, Rng& rng);

std::string marton_to_json_text(const MartonCodebook& cb);
MartonCodebook marton_from_json_text(const std::string& text);

}  // namespace cflab::martoncode

#endif  // CFLAB_MARTON_HPP
