#ifndef CFLAB_CHANNELS_HPP
#define CFLAB_CHANNELS_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cflab/field.hpp"
#include "cflab/prob.hpp"
#include "cflab/rng.hpp"

namespace cflab::channels {

/// Two-sender multiple access channel with F_q inputs and a target linear
/// combination w = a1*x1 + a2*x2.
struct MacSpec {
  std::uint32_t q = 2;
  prob::Pmf px1, px2;
  std::size_t ny = 0;
  std::vector<double> t;  // p(y | x1, x2), flat as (x1*q + x2)*ny + y
  std::uint32_t a1 = 1, a2 = 1;

  double p(std::size_t x1, std::size_t x2, std::size_t y) const {
    return t[(x1 * q + x2) * ny + y];
  }
};

/// Validates alphabet sizes, row stochasticity (1e-9) and a != 0.
void validate(const MacSpec& spec);

/// Joint design pmf over axes (X1, X2, W, Y).
prob::JointPmf build_mac_joint(const MacSpec& spec);

/// True iff p(y|x1,x2) depends on (x1,x2) only through w = a1*x1 + a2*x2.
bool check_markov_through_w(const MacSpec& spec, double tol = 1e-9);

/// Gallager-style virtual channel: relabel a raw two-input channel
/// p(y|s1,s2) through symbol maps phi_j : F_q -> raw input alphabet.
/// Returns the q x q x ny transition table of the virtual MAC.
std::vector<double> virtualize(const std::vector<double>& raw, std::size_t ns1,
                               std::size_t ns2, std::size_t ny,
                               const std::vector<std::uint32_t>& phi1,
                               const std::vector<std::uint32_t>& phi2, std::uint32_t q);

/// Memoryless use of the channel on codeword pair (x1, x2).
std::vector<std::uint32_t> sample_mac(const MacSpec& spec, const gf::FieldVector& x1,
                                      const gf::FieldVector& x2, Rng& rng);

/// y = x1 + x2 + z over F_q with z ~ noise.
MacSpec make_additive_mac(std::uint32_t q, const prob::Pmf& px1, const prob::Pmf& px2,
                          const prob::Pmf& noise, std::uint32_t a1, std::uint32_t a2);

MacSpec mac_spec_from_json_text(const std::string& text);
std::string mac_spec_to_json_text(const MacSpec& spec);

/// Two-receiver broadcast channel driven by auxiliary pair (u1, u2) through a
/// symbol map x(u1, u2).
struct BcSpec {
  std::size_t nu1 = 0, nu2 = 0, nx = 0, ny1 = 0, ny2 = 0;
  std::vector<double> pu;            // p(u1, u2), flat u1*nu2 + u2
  std::vector<std::uint32_t> xmap;   // x(u1, u2), same layout
  std::vector<double> t;             // p(y1, y2 | x), flat (x*ny1 + y1)*ny2 + y2

  double pu_at(std::size_t u1, std::size_t u2) const { return pu[u1 * nu2 + u2]; }
  std::uint32_t x_of(std::size_t u1, std::size_t u2) const { return xmap[u1 * nu2 + u2]; }
  double p(std::size_t x, std::size_t y1, std::size_t y2) const {
    return t[(x * ny1 + y1) * ny2 + y2];
  }
};

void validate(const BcSpec& spec);

/// Joint design pmf over axes (U1, U2, Y1, Y2).
prob::JointPmf build_bc_joint(const BcSpec& spec);

/// Memoryless use on the input induced by (u1, u2) sequences.
std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>> sample_bc(
    const BcSpec& spec, const std::vector<std::uint32_t>& u1,
    const std::vector<std::uint32_t>& u2, Rng& rng);

/// Product broadcast channel: y1 depends only on u1, y2 only on u2.
/// t1 is p(y1|u1) (nu1 x ny1), t2 is p(y2|u2).
BcSpec make_orthogonal_bc(std::size_t nu1, std::size_t nu2, const std::vector<double>& pu,
                          const std::vector<double>& t1, std::size_t ny1,
                          const std::vector<double>& t2, std::size_t ny2);

BcSpec bc_spec_from_json_text(const std::string& text);
std::string bc_spec_to_json_text(const BcSpec& spec);

}  // namespace cflab::channels

#endif  // CFLAB_CHANNELS_HPP
