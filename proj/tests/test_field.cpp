#include <doctest.h>

#include <set>

#include "cflab/errors.hpp"
#include "cflab/field.hpp"
#include "cflab/rng.hpp"

using namespace cflab;
using namespace cflab::gf;

TEST_CASE("primality") {
  CHECK(is_prime(2));
  CHECK(is_prime(3));
  CHECK(is_prime(5));
  CHECK(is_prime(7));
  CHECK(is_prime(101));
  CHECK_FALSE(is_prime(1));
  CHECK_FALSE(is_prime(0));
  CHECK_FALSE(is_prime(4));
  CHECK_FALSE(is_prime(9));
  CHECK_FALSE(is_prime(91));  // 7 * 13
  CHECK_THROWS_AS(check_prime(6), NotPrime);
  CHECK_NOTHROW(check_prime(13));
}

TEST_CASE("scalar arithmetic mod 5") {
  CHECK(add(3, 4, 5) == 2);
  CHECK(sub(1, 3, 5) == 3);
  CHECK(mul(3, 4, 5) == 2);
  CHECK(neg(2, 5) == 3);
  CHECK(neg(0, 5) == 0);
}

TEST_CASE("inverse table against brute force") {
  // Oracle: a * inv(a) = 1 checked by direct multiplication for every
  // nonzero element of several small fields.
  for (std::uint32_t q : {2u, 3u, 5u, 7u, 11u}) {
    for (std::uint32_t a = 1; a < q; ++a) {
      std::uint32_t ia = inv(a, q);
      CHECK(mul(a, ia, q) == 1);
    }
  }
  CHECK(inv(3, 5) == 2);
  CHECK(inv(2, 7) == 4);
  CHECK_THROWS_AS(inv(0, 5), DivisionByZero);
  CHECK_THROWS_AS(div(1, 0, 3), DivisionByZero);
  CHECK(div(2, 3, 5) == 4);  // 3 * 4 = 12 = 2 (mod 5)
}

TEST_CASE("field element carries its modulus") {
  FieldElement a(7, 5);
  CHECK(a.value == 2);
  FieldElement b(4, 5);
  CHECK((a + b).value == 1);
  CHECK((a - b).value == 3);
  CHECK((a * b).value == 3);
  CHECK((b / a).value == 2);
  CHECK_THROWS_AS(FieldElement(1, 4), NotPrime);
  FieldElement c(1, 3);
  CHECK_THROWS_AS(a + c, ModulusMismatch);
}

TEST_CASE("vector arithmetic mod 3") {
  FieldVector x(3, {2, 1});
  FieldVector y(3, {2, 2});
  CHECK(vec_add(x, y) == FieldVector(3, {1, 0}));
  CHECK(scalar_mul(2, x) == FieldVector(3, {1, 2}));
  CHECK(combine(1, x, 2, y) == FieldVector(3, {0, 2}));
  CHECK_THROWS_AS(vec_add(x, FieldVector(3, {1})), DimensionMismatch);
  CHECK_THROWS_AS(vec_add(x, FieldVector(2, {1, 1})), ModulusMismatch);
}

TEST_CASE("vector-matrix product mod 3") {
  // [2 1] * [[1 2] [2 2]] = [2*1+1*2, 2*2+1*2] = [4 6] = [1 0] (mod 3)
  FieldMatrix m(3, 2, 2);
  m.at(0, 0) = 1;
  m.at(0, 1) = 2;
  m.at(1, 0) = 2;
  m.at(1, 1) = 2;
  FieldVector v(3, {2, 1});
  CHECK(vec_mat_mul(v, m) == FieldVector(3, {1, 0}));
  CHECK_THROWS_AS(vec_mat_mul(FieldVector(3, {1, 1, 1}), m), DimensionMismatch);
}

TEST_CASE("rank by elimination") {
  FieldMatrix id3(5, 3, 3);
  for (std::size_t i = 0; i < 3; ++i) id3.at(i, i) = 1;
  CHECK(rank(id3) == 3);

  FieldMatrix rep(2, 2, 2);
  rep.at(0, 0) = rep.at(0, 1) = rep.at(1, 0) = rep.at(1, 1) = 1;
  CHECK(rank(rep) == 1);

  FieldMatrix zero(3, 2, 4);
  CHECK(rank(zero) == 0);

  FieldMatrix wide(2, 2, 3);
  wide.at(0, 0) = 1;
  wide.at(0, 2) = 1;
  wide.at(1, 1) = 1;
  wide.at(1, 2) = 1;
  CHECK(rank(wide) == 2);

  // rank takes a copy; the argument is reusable
  CHECK(rank(wide) == 2);
}

TEST_CASE("rank counts full-rank 2x3 binary matrices") {
  // All 64 matrices enumerated; the full-rank count is the oracle for the
  // closed-form ensemble probability used elsewhere: 42/64.
  std::size_t full = 0;
  for (std::uint32_t bits = 0; bits < 64; ++bits) {
    FieldMatrix m(2, 2, 3);
    for (std::size_t c = 0; c < 6; ++c) m.a[c] = (bits >> c) & 1;
    if (rank(m) == 2) ++full;
  }
  CHECK(full == 42);
}

TEST_CASE("random draws are reproducible and in range") {
  Rng r1(99), r2(99);
  FieldVector v1 = random_vector(r1, 7, 32);
  FieldVector v2 = random_vector(r2, 7, 32);
  CHECK(v1 == v2);
  for (auto s : v1.v) CHECK(s < 7);

  FieldMatrix m1 = random_matrix(r1, 3, 4, 5);
  FieldMatrix m2 = random_matrix(r2, 3, 4, 5);
  CHECK(m1 == m2);
  std::set<std::uint32_t> seen(m1.a.begin(), m1.a.end());
  for (auto s : seen) CHECK(s < 3);
}
