#ifndef CFLAB_SRC_COUNT_BAND_HPP
#define CFLAB_SRC_COUNT_BAND_HPP

#include <cmath>
#include <cstdint>
#include <vector>

namespace cflab::detail {

// q^e, saturating at cap+1 so callers can compare against a budget.
inline std::uint64_t checked_pow(std::uint64_t q, std::size_t e, std::uint64_t cap) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < e; ++i) {
    if (r > cap / q) return cap + 1;
    r *= q;
  }
  return r;
}

// Inclusive per-cell count bounds realizing |p - c/n| <= eps*p, with a small
// fudge so exact boundary counts stay inside. Cells with p = 0 must not occur
// at all. Shaping, decoder prefilters and the joint test all use these integer
// bounds, so a prefilter can never drop a tuple the joint test would accept.
struct CountBand {
  std::vector<std::int64_t> lo, hi;

  CountBand(const std::vector<double>& p, std::size_t n, double eps) {
    lo.resize(p.size());
    hi.resize(p.size());
    double dn = static_cast<double>(n);
    for (std::size_t c = 0; c < p.size(); ++c) {
      if (p[c] <= 0.0) {
        lo[c] = 0;
        hi[c] = 0;
        continue;
      }
      lo[c] = static_cast<std::int64_t>(std::ceil(dn * (1.0 - eps) * p[c] - 1e-9));
      hi[c] = static_cast<std::int64_t>(std::floor(dn * (1.0 + eps) * p[c] + 1e-9));
    }
  }

  bool pass(const std::vector<std::int64_t>& counts) const {
    for (std::size_t c = 0; c < counts.size(); ++c)
      if (counts[c] < lo[c] || counts[c] > hi[c]) return false;
    return true;
  }

  // Counts only grow during a scan, so exceeding hi midway is final.
  bool above(std::size_t c, std::int64_t count) const { return count > hi[c]; }

  bool floors_ok(const std::vector<std::int64_t>& counts) const {
    for (std::size_t c = 0; c < counts.size(); ++c)
      if (counts[c] < lo[c]) return false;
    return true;
  }
};

}  // namespace cflab::detail

#endif  // CFLAB_SRC_COUNT_BAND_HPP
