#include "cflab/rng.hpp"

#include "cflab/errors.hpp"

namespace cflab {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t Rng::uniform_int(std::uint64_t bound) {
  if (bound == 0) throw Error("uniform_int: bound must be positive");
  // rejection sampling on the top of the range keeps the draw exactly uniform
  std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t v = next_u64();
  while (v >= limit) v = next_u64();
  return v % bound;
}

double Rng::uniform_real() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::size_t Rng::sample_cdf(const std::vector<double>& cdf) {
  if (cdf.empty()) throw Error("sample_cdf: empty cdf");
  double u = uniform_real();
  for (std::size_t i = 0; i + 1 < cdf.size(); ++i) {
    if (u < cdf[i]) return i;
  }
  return cdf.size() - 1;
}

Rng Rng::derive(std::uint64_t label) const {
  return Rng(mix64(seed_ ^ mix64(label + 0x632be59bd9b4e019ULL)));
}

}  // namespace cflab
