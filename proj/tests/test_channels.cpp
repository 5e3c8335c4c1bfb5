#include <doctest.h>

#include <vector>

#include "cflab/channels.hpp"
#include "cflab/errors.hpp"
#include "cflab/rng.hpp"

using namespace cflab;
using namespace cflab::channels;

namespace {

MacSpec additive_example(double flip = 0.1) {
  return make_additive_mac(2, prob::Pmf::uniform(2), prob::Pmf::uniform(2),
                           prob::Pmf({1.0 - flip, flip}), 1, 1);
}

}  // namespace

TEST_CASE("additive channel table") {
  MacSpec spec = additive_example(0.05);
  CHECK(spec.ny == 2);
  CHECK(spec.p(0, 0, 0) == doctest::Approx(0.95));
  CHECK(spec.p(0, 0, 1) == doctest::Approx(0.05));
  CHECK(spec.p(1, 1, 0) == doctest::Approx(0.95));  // 1 + 1 = 0 (mod 2)
  CHECK(spec.p(1, 0, 1) == doctest::Approx(0.95));
  CHECK_NOTHROW(validate(spec));
}

TEST_CASE("validation rejects malformed specs") {
  MacSpec spec = additive_example();
  MacSpec bad = spec;
  bad.t[0] = 0.3;  // row no longer sums to 1
  CHECK_THROWS_AS(validate(bad), InvalidSpec);

  bad = spec;
  bad.a1 = 0;
  bad.a2 = 0;
  CHECK_THROWS_AS(validate(bad), ZeroCoefficientVector);

  bad = spec;
  bad.a1 = 2;  // not a canonical field element
  CHECK_THROWS_AS(validate(bad), InvalidSpec);

  bad = spec;
  bad.px1 = prob::Pmf::uniform(3);
  CHECK_THROWS_AS(validate(bad), DimensionMismatch);
}

TEST_CASE("design joint concentrates on the true combination") {
  MacSpec spec = additive_example();
  prob::JointPmf j = build_mac_joint(spec);
  REQUIRE(j.num_axes() == 4);
  CHECK(j.axis(0).name == "X1");
  CHECK(j.axis(1).name == "X2");
  CHECK(j.axis(2).name == "W");
  CHECK(j.axis(3).name == "Y");

  // Mass only where w = x1 + x2.
  for (std::size_t x1 = 0; x1 < 2; ++x1)
    for (std::size_t x2 = 0; x2 < 2; ++x2)
      for (std::size_t w = 0; w < 2; ++w)
        for (std::size_t y = 0; y < 2; ++y) {
          double v = j.at(std::vector<std::size_t>{x1, x2, w, y});
          if (w != ((x1 + x2) & 1)) {
            CHECK(v == doctest::Approx(0.0));
          } else {
            CHECK(v == doctest::Approx(0.25 * spec.p(x1, x2, y)));
          }
        }

  prob::JointPmf mx1 = j.marginal({"X1"});
  CHECK(mx1.data()[0] == doctest::Approx(0.5));
}

TEST_CASE("markov factorization through the combination") {
  CHECK(check_markov_through_w(additive_example()));

  // y = x1 AND x2 does not factor through w = x1 + x2: the pairs (0,0) and
  // (1,1) share w = 0 but give different output laws.
  MacSpec spec;
  spec.q = 2;
  spec.px1 = prob::Pmf::uniform(2);
  spec.px2 = prob::Pmf::uniform(2);
  spec.ny = 2;
  spec.t = {1, 0, 1, 0, 1, 0, 0, 1};
  spec.a1 = spec.a2 = 1;
  CHECK_NOTHROW(validate(spec));
  CHECK_FALSE(check_markov_through_w(spec));
}

TEST_CASE("relabeling a raw channel through symbol maps") {
  // Raw 2x2 -> identity maps reproduce the table.
  std::vector<double> raw = {0.9, 0.1, 0.2, 0.8, 0.3, 0.7, 0.6, 0.4};
  std::vector<std::uint32_t> id{0, 1};
  std::vector<double> virt = virtualize(raw, 2, 2, 2, id, id, 2);
  CHECK(virt == raw);

  // Swapping sender 1's symbols permutes the rows accordingly.
  std::vector<std::uint32_t> swap{1, 0};
  std::vector<double> sw = virtualize(raw, 2, 2, 2, swap, id, 2);
  CHECK(sw[0] == doctest::Approx(raw[4]));
  CHECK(sw[4] == doctest::Approx(raw[0]));
}

TEST_CASE("channel sampling is reproducible and in range") {
  MacSpec spec = additive_example(0.3);
  gf::FieldVector x1(2, {0, 1, 1, 0, 1, 0, 0, 1});
  gf::FieldVector x2(2, {1, 1, 0, 0, 1, 1, 0, 0});
  Rng r1(7), r2(7);
  auto y1 = sample_mac(spec, x1, x2, r1);
  auto y2 = sample_mac(spec, x1, x2, r2);
  CHECK(y1 == y2);
  CHECK(y1.size() == 8);
  for (auto s : y1) CHECK(s < spec.ny);
}

TEST_CASE("mac spec json round trip") {
  MacSpec spec = additive_example(0.05);
  spec.a2 = 1;
  std::string text = mac_spec_to_json_text(spec);
  MacSpec back = mac_spec_from_json_text(text);
  CHECK(back.q == spec.q);
  CHECK(back.ny == spec.ny);
  CHECK(back.a1 == spec.a1);
  CHECK(back.a2 == spec.a2);
  CHECK(back.px1.data() == spec.px1.data());
  CHECK(back.t == spec.t);
  CHECK_THROWS_AS(mac_spec_from_json_text("{"), SchemaError);
  CHECK_THROWS_AS(mac_spec_from_json_text("{\"q\": 2}"), SchemaError);
}

TEST_CASE("orthogonal broadcast components stay independent") {
  // Clean bit pipes: each receiver observes its own auxiliary exactly.
  std::vector<double> pu = {0.25, 0.25, 0.25, 0.25};
  std::vector<double> ident = {1, 0, 0, 1};
  BcSpec spec = make_orthogonal_bc(2, 2, pu, ident, 2, ident, 2);
  CHECK_NOTHROW(validate(spec));
  CHECK(spec.nx == 4);
  CHECK(spec.x_of(1, 0) == 2);  // x enumerates (u1, u2) pairs row-major

  prob::JointPmf j = build_bc_joint(spec);
  CHECK(j.axis(0).name == "U1");
  CHECK(j.axis(3).name == "Y2");
  CHECK(j.at(std::vector<std::size_t>{1, 0, 1, 0}) == doctest::Approx(0.25));
  CHECK(j.at(std::vector<std::size_t>{1, 0, 0, 0}) == doctest::Approx(0.0));

  std::vector<std::uint32_t> u1{0, 1, 1};
  std::vector<std::uint32_t> u2{1, 0, 1};
  Rng rng(3);
  auto [y1, y2] = sample_bc(spec, u1, u2, rng);
  CHECK(y1 == u1);
  CHECK(y2 == u2);
}

TEST_CASE("bc spec json round trip") {
  std::vector<double> pu = {0.4, 0.1, 0.1, 0.4};
  std::vector<double> ident = {1, 0, 0, 1};
  BcSpec spec = make_orthogonal_bc(2, 2, pu, ident, 2, ident, 2);
  BcSpec back = bc_spec_from_json_text(bc_spec_to_json_text(spec));
  CHECK(back.nu1 == spec.nu1);
  CHECK(back.pu == spec.pu);
  CHECK(back.xmap == spec.xmap);
  CHECK(back.t == spec.t);
  CHECK_THROWS_AS(bc_spec_from_json_text("[]"), SchemaError);
}
