#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "cflab/channels.hpp"
#include "cflab/field.hpp"
#include "cflab/harness.hpp"
#include "cflab/homologous.hpp"
#include "cflab/prob.hpp"
#include "cflab/regions.hpp"
#include "cflab/rng.hpp"

using namespace cflab;

namespace {

channels::MacSpec additive_binary(double flip) {
  return channels::make_additive_mac(2, prob::Pmf::uniform(2), prob::Pmf::uniform(2),
                                     prob::Pmf({1.0 - flip, flip}), 1, 1);
}

void bm_field_mul(benchmark::State& state) {
  std::uint32_t q = static_cast<std::uint32_t>(state.range(0));
  std::uint32_t x = 1;
  for (auto _ : state) {
    x = gf::mul(x, 2, q);
    x = gf::add(x, 1, q);
    benchmark::DoNotOptimize(x);
  }
}
BENCHMARK(bm_field_mul)->Arg(2)->Arg(7)->Arg(11);

void bm_field_inv(benchmark::State& state) {
  std::uint32_t q = static_cast<std::uint32_t>(state.range(0));
  std::uint32_t x = 1;
  for (auto _ : state) {
    x = gf::inv(x, q);
    x = gf::add(x, 1, q);
    if (x == 0) x = 1;
    benchmark::DoNotOptimize(x);
  }
}
BENCHMARK(bm_field_inv)->Arg(7)->Arg(11);

void bm_vec_mat_mul(benchmark::State& state) {
  std::size_t n = static_cast<std::size_t>(state.range(0));
  Rng rng(1);
  gf::FieldMatrix g = gf::random_matrix(rng, 2, n / 2, n);
  gf::FieldVector v = gf::random_vector(rng, 2, n / 2);
  for (auto _ : state) {
    gf::FieldVector w = gf::vec_mat_mul(v, g);
    benchmark::DoNotOptimize(w);
  }
}
BENCHMARK(bm_vec_mat_mul)->Arg(16)->Arg(64)->Arg(256);

void bm_rank(benchmark::State& state) {
  std::size_t n = static_cast<std::size_t>(state.range(0));
  Rng rng(2);
  gf::FieldMatrix g = gf::random_matrix(rng, 3, n / 2, n);
  for (auto _ : state) {
    std::size_t r = gf::rank(g);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(bm_rank)->Arg(16)->Arg(64);

void bm_typicality(benchmark::State& state) {
  std::size_t n = static_cast<std::size_t>(state.range(0));
  Rng rng(3);
  prob::Pmf p({0.8, 0.2});
  std::vector<std::uint32_t> x(n);
  for (auto& s : x) s = (rng.next_u64() % 5 == 0) ? 1u : 0u;
  for (auto _ : state) {
    bool t = prob::is_typical(x, p, 0.2);
    benchmark::DoNotOptimize(t);
  }
}
BENCHMARK(bm_typicality)->Arg(16)->Arg(256)->Arg(4096);

void bm_region_membership(benchmark::State& state) {
  auto joint = channels::build_mac_joint(additive_binary(0.1));
  regions::RateRegion reg = regions::region_star_star(joint, 1, 1);
  reg.prune();
  double step = reg.box() / 64.0;
  for (auto _ : state) {
    std::size_t inside = 0;
    for (int i = 0; i < 64; ++i)
      for (int j = 0; j < 64; ++j)
        if (reg.contains({i * step, j * step})) ++inside;
    benchmark::DoNotOptimize(inside);
  }
}
BENCHMARK(bm_region_membership);

void bm_region_build(benchmark::State& state) {
  auto joint = channels::build_mac_joint(additive_binary(0.1));
  for (auto _ : state) {
    regions::RateRegion reg = regions::region_star_star(joint, 1, 1);
    reg.prune();
    benchmark::DoNotOptimize(reg);
  }
}
BENCHMARK(bm_region_build);

void bm_decode_trial(benchmark::State& state) {
  std::size_t n = static_cast<std::size_t>(state.range(0));
  channels::MacSpec spec = additive_binary(0.05);
  homocode::HomologousParams p;
  p.q = 2;
  p.n = n;
  p.k1 = n / 4;
  p.k2 = n / 4;
  p.eps = 0.1;
  p.seed = 7;
  auto cb = homocode::generate_homologous_codebook(p, spec.px1, spec.px2);
  homocode::JtDecoder dec = homocode::make_jt_decoder(spec, 0.3);
  Rng rng(8);
  for (auto _ : state) {
    homocode::TrialRecord r = homocode::run_computation_trial(cb, spec, dec, rng);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(bm_decode_trial)->Arg(8)->Arg(12)->Arg(16);

void bm_codebook_generation(benchmark::State& state) {
  std::size_t n = static_cast<std::size_t>(state.range(0));
  prob::Pmf px({0.8, 0.2});
  homocode::HomologousParams p;
  p.q = 2;
  p.n = n;
  p.k1 = n / 4;
  p.k2 = n / 4;
  p.eps = 0.2;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    p.seed = seed++;
    auto cb = homocode::generate_homologous_codebook(p, px, px);
    benchmark::DoNotOptimize(cb);
  }
}
BENCHMARK(bm_codebook_generation)->Arg(8)->Arg(16);

}  // namespace

BENCHMARK_MAIN();
