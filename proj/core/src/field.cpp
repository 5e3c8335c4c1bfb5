#include "cflab/field.hpp"

#include <string>

#include "cflab/errors.hpp"

namespace cflab::gf {

bool is_prime(std::uint32_t q) {
  if (q < 2) return false;
  if (q < 4) return true;
  if (q % 2 == 0) return false;
  for (std::uint32_t d = 3; d * d <= q; d += 2) {
    if (q % d == 0) return false;
  }
  return true;
}

void check_prime(std::uint32_t q) {
  if (!is_prime(q)) throw NotPrime("modulus " + std::to_string(q) + " is not prime");
}

std::uint32_t add(std::uint32_t a, std::uint32_t b, std::uint32_t q) {
  std::uint32_t s = a + b;
  return s >= q ? s - q : s;
}

std::uint32_t sub(std::uint32_t a, std::uint32_t b, std::uint32_t q) {
  return a >= b ? a - b : a + q - b;
}

std::uint32_t mul(std::uint32_t a, std::uint32_t b, std::uint32_t q) {
  return static_cast<std::uint32_t>((static_cast<std::uint64_t>(a) * b) % q);
}

std::uint32_t neg(std::uint32_t a, std::uint32_t q) { return a == 0 ? 0 : q - a; }

std::uint32_t inv(std::uint32_t a, std::uint32_t q) {
  if (a % q == 0) throw DivisionByZero("inverse of 0 in F_" + std::to_string(q));
  // extended Euclid on (a, q); q prime so gcd is 1
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = q, new_r = a % q;
  while (new_r != 0) {
    std::int64_t quot = r / new_r;
    std::int64_t tmp = t - quot * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - quot * new_r;
    r = new_r;
    new_r = tmp;
  }
  if (t < 0) t += q;
  return static_cast<std::uint32_t>(t);
}

std::uint32_t div(std::uint32_t a, std::uint32_t b, std::uint32_t q) {
  return mul(a, inv(b, q), q);
}

FieldElement::FieldElement(std::uint64_t v, std::uint32_t modulus) {
  check_prime(modulus);
  q = modulus;
  value = static_cast<std::uint32_t>(v % modulus);
}

namespace {
void check_same_q(std::uint32_t qa, std::uint32_t qb) {
  if (qa != qb) {
    throw ModulusMismatch("moduli differ: " + std::to_string(qa) + " vs " + std::to_string(qb));
  }
}
}  // namespace

FieldElement FieldElement::operator+(FieldElement other) const {
  check_same_q(q, other.q);
  return FieldElement(add(value, other.value, q), q);
}

FieldElement FieldElement::operator-(FieldElement other) const {
  check_same_q(q, other.q);
  return FieldElement(sub(value, other.value, q), q);
}

FieldElement FieldElement::operator*(FieldElement other) const {
  check_same_q(q, other.q);
  return FieldElement(mul(value, other.value, q), q);
}

FieldElement FieldElement::operator/(FieldElement other) const {
  check_same_q(q, other.q);
  return FieldElement(div(value, other.value, q), q);
}

FieldVector::FieldVector(std::uint32_t modulus, std::vector<std::uint32_t> values)
    : q(modulus), v(std::move(values)) {
  check_prime(q);
  for (auto& x : v) x %= q;
}

FieldVector FieldVector::zeros(std::uint32_t q, std::size_t n) {
  return FieldVector(q, std::vector<std::uint32_t>(n, 0));
}

FieldMatrix::FieldMatrix(std::uint32_t modulus, std::size_t r, std::size_t c)
    : q(modulus), rows(r), cols(c), a(r * c, 0) {
  check_prime(q);
}

FieldVector vec_add(const FieldVector& x, const FieldVector& y) {
  check_same_q(x.q, y.q);
  if (x.size() != y.size()) {
    throw DimensionMismatch("vec_add: " + std::to_string(x.size()) + " vs " +
                            std::to_string(y.size()));
  }
  FieldVector out = x;
  for (std::size_t i = 0; i < out.size(); ++i) out.v[i] = add(out.v[i], y.v[i], x.q);
  return out;
}

FieldVector scalar_mul(std::uint32_t c, const FieldVector& x) {
  FieldVector out = x;
  c %= x.q;
  for (auto& s : out.v) s = mul(c, s, x.q);
  return out;
}

FieldVector combine(std::uint32_t a1, const FieldVector& x1,
                    std::uint32_t a2, const FieldVector& x2) {
  return vec_add(scalar_mul(a1, x1), scalar_mul(a2, x2));
}

FieldVector vec_mat_mul(const FieldVector& v, const FieldMatrix& m) {
  check_same_q(v.q, m.q);
  if (v.size() != m.rows) {
    throw DimensionMismatch("vec_mat_mul: vector length " + std::to_string(v.size()) +
                            " vs matrix rows " + std::to_string(m.rows));
  }
  FieldVector out = FieldVector::zeros(m.q, m.cols);
  for (std::size_t r = 0; r < m.rows; ++r) {
    std::uint32_t c = v.v[r];
    if (c == 0) continue;
    for (std::size_t j = 0; j < m.cols; ++j) {
      out.v[j] = add(out.v[j], mul(c, m.at(r, j), m.q), m.q);
    }
  }
  return out;
}

std::size_t rank(FieldMatrix m) {
  std::size_t r = 0;
  for (std::size_t col = 0; col < m.cols && r < m.rows; ++col) {
    std::size_t pivot = r;
    while (pivot < m.rows && m.at(pivot, col) == 0) ++pivot;
    if (pivot == m.rows) continue;
    for (std::size_t j = 0; j < m.cols; ++j) std::swap(m.at(r, j), m.at(pivot, j));
    std::uint32_t scale = inv(m.at(r, col), m.q);
    for (std::size_t j = col; j < m.cols; ++j) m.at(r, j) = mul(m.at(r, j), scale, m.q);
    for (std::size_t i = 0; i < m.rows; ++i) {
      if (i == r || m.at(i, col) == 0) continue;
      std::uint32_t f = m.at(i, col);
      for (std::size_t j = col; j < m.cols; ++j) {
        m.at(i, j) = sub(m.at(i, j), mul(f, m.at(r, j), m.q), m.q);
      }
    }
    ++r;
  }
  return r;
}

FieldVector random_vector(Rng& rng, std::uint32_t q, std::size_t n) {
  check_prime(q);
  std::vector<std::uint32_t> v(n);
  for (auto& s : v) s = rng.field_element(q);
  return FieldVector(q, std::move(v));
}

FieldMatrix random_matrix(Rng& rng, std::uint32_t q, std::size_t rows, std::size_t cols) {
  FieldMatrix m(q, rows, cols);
  for (auto& s : m.a) s = rng.field_element(q);
  return m;
}

}  // namespace cflab::gf
