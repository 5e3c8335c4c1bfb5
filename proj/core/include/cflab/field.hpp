#ifndef CFLAB_FIELD_HPP
#define CFLAB_FIELD_HPP

#include <cstdint>
#include <vector>

#include "cflab/rng.hpp"

namespace cflab::gf {

/// True iff q is a prime (q >= 2). Deterministic trial division; the library
/// only deals in small moduli.
bool is_prime(std::uint32_t q);

/// Throws NotPrime unless q is prime.
void check_prime(std::uint32_t q);

// Scalar arithmetic in F_q. Values are canonical representatives in [0, q).
std::uint32_t add(std::uint32_t a, std::uint32_t b, std::uint32_t q);
std::uint32_t sub(std::uint32_t a, std::uint32_t b, std::uint32_t q);
std::uint32_t mul(std::uint32_t a, std::uint32_t b, std::uint32_t q);
std::uint32_t neg(std::uint32_t a, std::uint32_t q);

/// Multiplicative inverse via extended Euclid; throws DivisionByZero on 0.
std::uint32_t inv(std::uint32_t a, std::uint32_t q);
std::uint32_t div(std::uint32_t a, std::uint32_t b, std::uint32_t q);

/// A single element carrying its modulus. Operations on mismatched moduli
/// throw ModulusMismatch. Construction reduces the value and checks primality.
struct FieldElement {
  std::uint32_t value = 0;
  std::uint32_t q = 2;

  FieldElement() = default;
  FieldElement(std::uint64_t v, std::uint32_t modulus);

  FieldElement operator+(FieldElement other) const;
  FieldElement operator-(FieldElement other) const;
  FieldElement operator*(FieldElement other) const;
  FieldElement operator/(FieldElement other) const;
  bool operator==(const FieldElement&) const = default;
};

/// Vector over F_q; symbols stored as canonical representatives.
struct FieldVector {
  std::uint32_t q = 2;
  std::vector<std::uint32_t> v;

  FieldVector() = default;
  FieldVector(std::uint32_t modulus, std::vector<std::uint32_t> values);
  static FieldVector zeros(std::uint32_t q, std::size_t n);

  std::size_t size() const { return v.size(); }
  bool operator==(const FieldVector&) const = default;
};

/// Dense row-major matrix over F_q.
struct FieldMatrix {
  std::uint32_t q = 2;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint32_t> a;

  FieldMatrix() = default;
  FieldMatrix(std::uint32_t modulus, std::size_t r, std::size_t c);

  std::uint32_t& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
  std::uint32_t at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }
  bool operator==(const FieldMatrix&) const = default;
};

FieldVector vec_add(const FieldVector& x, const FieldVector& y);
FieldVector scalar_mul(std::uint32_t c, const FieldVector& x);

/// Elementwise a1*x1 + a2*x2 (the linear combination a channel computes).
FieldVector combine(std::uint32_t a1, const FieldVector& x1,
                    std::uint32_t a2, const FieldVector& x2);

/// Row vector times matrix; requires v.size() == m.rows.
FieldVector vec_mat_mul(const FieldVector& v, const FieldMatrix& m);

/// Rank by Gaussian elimination over F_q. The input is taken by value.
std::size_t rank(FieldMatrix m);

FieldVector random_vector(Rng& rng, std::uint32_t q, std::size_t n);
FieldMatrix random_matrix(Rng& rng, std::uint32_t q, std::size_t rows, std::size_t cols);

}  // namespace cflab::gf

#endif  // CFLAB_FIELD_HPP
