#ifndef CFLAB_RNG_HPP
#define CFLAB_RNG_HPP

#include <cstdint>
#include <random>
#include <vector>

namespace cflab {

/// Deterministic random stream.
///
/// All randomness in the library flows through this wrapper so that a run is
/// reproducible from (config, master seed) alone. Integer and real draws are
/// implemented directly on top of the raw 64-bit stream instead of
/// std::*_distribution, whose output is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed), seed_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t uniform_int(std::uint64_t bound);

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform_real();

  /// Uniform element of F_q, i.e. integer in [0, q).
  std::uint32_t field_element(std::uint32_t q) {
    return static_cast<std::uint32_t>(uniform_int(q));
  }

  /// Index drawn from a pmf given as cumulative sums (last entry ~ 1).
  std::size_t sample_cdf(const std::vector<double>& cdf);

  /// Child stream whose seed mixes this stream's seed with a label.
  /// Gives each trial / message an independent reproducible stream whose
  /// draws do not depend on how many values the parent has consumed.
  Rng derive(std::uint64_t label) const;

  std::uint64_t seed() const { return seed_; }

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
};

/// splitmix64 finalizer; used to decorrelate derived seeds.
std::uint64_t mix64(std::uint64_t x);

}  // namespace cflab

#endif  // CFLAB_RNG_HPP
