#ifndef CFLAB_PROB_HPP
#define CFLAB_PROB_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace cflab::prob {

/// One-dimensional pmf. Construction validates: entries nonnegative and the
/// total within 1e-9 of 1. Out-of-tolerance input is refused, never silently
/// renormalized.
class Pmf {
 public:
  Pmf() = default;
  explicit Pmf(std::vector<double> p);
  static Pmf uniform(std::size_t n);

  std::size_t size() const { return p_.size(); }
  double operator[](std::size_t i) const { return p_[i]; }
  const std::vector<double>& data() const { return p_; }

 private:
  std::vector<double> p_;
};

struct Axis {
  std::string name;
  std::size_t size = 0;
};

/// Dense joint pmf over named axes, row-major with the last axis fastest.
class JointPmf {
 public:
  JointPmf() = default;
  JointPmf(std::vector<Axis> axes, std::vector<double> p);

  std::size_t num_axes() const { return axes_.size(); }
  const Axis& axis(std::size_t i) const { return axes_[i]; }
  const std::vector<Axis>& axes() const { return axes_; }
  std::size_t axis_index(const std::string& name) const;  // throws UnknownAxis
  bool has_axis(const std::string& name) const;

  std::size_t total_size() const { return p_.size(); }
  const std::vector<double>& data() const { return p_; }
  double at(std::span<const std::size_t> cell) const;

  std::size_t flatten(std::span<const std::size_t> cell) const;
  void unflatten(std::size_t flat, std::vector<std::size_t>& cell) const;

  /// Marginal over the named axes, in the order given.
  /// Throws OverlappingAxes on duplicates, UnknownAxis on misses.
  JointPmf marginal(const std::vector<std::string>& names) const;

 private:
  std::vector<Axis> axes_;
  std::vector<std::size_t> strides_;
  std::vector<double> p_;
};

/// Empirical type of a length-n sequence: exact counts over the alphabet.
struct TypeVector {
  std::size_t n = 0;
  std::vector<std::uint64_t> counts;

  double frac(std::size_t i) const { return static_cast<double>(counts[i]) / n; }
  bool operator==(const TypeVector&) const = default;
};

TypeVector empirical_type(std::span<const std::uint32_t> x, std::size_t alphabet);

/// Shannon entropy of raw cell weights (assumed normalized); 0 log 0 = 0.
double entropy_raw(std::span<const double> p, double base);

double entropy(const Pmf& p, double base);

/// Joint entropy of a subset of axes (whole joint if names empty).
double entropy(const JointPmf& j, const std::vector<std::string>& names, double base);

/// H(targets | given).
double conditional_entropy(const JointPmf& j, const std::vector<std::string>& targets,
                           const std::vector<std::string>& given, double base);

/// I(a ; b).
double mutual_information(const JointPmf& j, const std::vector<std::string>& a,
                          const std::vector<std::string>& b, double base);

/// I(a ; b | c).
double conditional_mutual_information(const JointPmf& j, const std::vector<std::string>& a,
                                      const std::vector<std::string>& b,
                                      const std::vector<std::string>& c, double base);

/// D(p || r); throws AbsoluteContinuityViolation where p > 0, r = 0.
double kl_divergence(const Pmf& p, const Pmf& r, double base);

/// Multiplicative-band typicality of parallel sequences against a joint pmf:
/// for every cell, |p(cell) - pi(cell)| <= eps * p(cell), where pi is the
/// empirical joint type. Cells with p = 0 must not occur at all.
/// The sequences correspond to the joint's axes in order.
bool is_typical(const std::vector<std::span<const std::uint32_t>>& seqs,
                const JointPmf& joint, double eps);

/// Single-sequence convenience overload against a 1-D pmf.
bool is_typical(std::span<const std::uint32_t> x, const Pmf& p, double eps);

}  // namespace cflab::prob

#endif  // CFLAB_PROB_HPP
