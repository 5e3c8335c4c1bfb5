#include "cflab/prob.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "cflab/errors.hpp"

namespace cflab::prob {

namespace {
constexpr double kSumTol = 1e-9;

void validate_cells(const std::vector<double>& p, const char* what) {
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= 0.0)) throw InvalidPmf(std::string(what) + ": negative or NaN entry");
    sum += v;
  }
  if (std::fabs(sum - 1.0) > kSumTol) {
    throw InvalidPmf(std::string(what) + ": total " + std::to_string(sum) +
                     " outside 1 +/- 1e-9; refusing to renormalize");
  }
}
}  // namespace

Pmf::Pmf(std::vector<double> p) : p_(std::move(p)) {
  if (p_.empty()) throw InvalidPmf("Pmf: empty support");
  validate_cells(p_, "Pmf");
}

Pmf Pmf::uniform(std::size_t n) {
  if (n == 0) throw InvalidPmf("Pmf::uniform: empty support");
  return Pmf(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

JointPmf::JointPmf(std::vector<Axis> axes, std::vector<double> p)
    : axes_(std::move(axes)), p_(std::move(p)) {
  if (axes_.empty()) throw InvalidPmf("JointPmf: no axes");
  std::size_t total = 1;
  std::set<std::string> seen;
  for (const auto& ax : axes_) {
    if (ax.size == 0) throw InvalidPmf("JointPmf: axis " + ax.name + " has size 0");
    if (!seen.insert(ax.name).second) throw OverlappingAxes("JointPmf: duplicate axis " + ax.name);
    total *= ax.size;
  }
  if (total != p_.size()) {
    throw DimensionMismatch("JointPmf: axes imply " + std::to_string(total) +
                            " cells, got " + std::to_string(p_.size()));
  }
  validate_cells(p_, "JointPmf");
  strides_.assign(axes_.size(), 1);
  for (std::size_t i = axes_.size(); i-- > 1;) {
    strides_[i - 1] = strides_[i] * axes_[i].size;
  }
}

std::size_t JointPmf::axis_index(const std::string& name) const {
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    if (axes_[i].name == name) return i;
  }
  throw UnknownAxis("no axis named " + name);
}

bool JointPmf::has_axis(const std::string& name) const {
  for (const auto& ax : axes_) {
    if (ax.name == name) return true;
  }
  return false;
}

std::size_t JointPmf::flatten(std::span<const std::size_t> cell) const {
  if (cell.size() != axes_.size()) throw DimensionMismatch("flatten: wrong cell arity");
  std::size_t flat = 0;
  for (std::size_t i = 0; i < cell.size(); ++i) {
    if (cell[i] >= axes_[i].size) throw DimensionMismatch("flatten: index out of range");
    flat += cell[i] * strides_[i];
  }
  return flat;
}

void JointPmf::unflatten(std::size_t flat, std::vector<std::size_t>& cell) const {
  cell.resize(axes_.size());
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    cell[i] = (flat / strides_[i]) % axes_[i].size;
  }
}

double JointPmf::at(std::span<const std::size_t> cell) const { return p_[flatten(cell)]; }

JointPmf JointPmf::marginal(const std::vector<std::string>& names) const {
  if (names.empty()) throw UnknownAxis("marginal: no axes requested");
  std::set<std::string> seen;
  std::vector<std::size_t> keep;
  std::vector<Axis> new_axes;
  for (const auto& nm : names) {
    if (!seen.insert(nm).second) throw OverlappingAxes("marginal: duplicate axis " + nm);
    std::size_t idx = axis_index(nm);
    keep.push_back(idx);
    new_axes.push_back(axes_[idx]);
  }
  std::size_t new_total = 1;
  for (const auto& ax : new_axes) new_total *= ax.size;
  std::vector<double> out(new_total, 0.0);

  std::vector<std::size_t> new_strides(keep.size(), 1);
  for (std::size_t i = keep.size(); i-- > 1;) {
    new_strides[i - 1] = new_strides[i] * new_axes[i].size;
  }
  std::vector<std::size_t> cell;
  for (std::size_t flat = 0; flat < p_.size(); ++flat) {
    if (p_[flat] == 0.0) continue;
    unflatten(flat, cell);
    std::size_t nf = 0;
    for (std::size_t i = 0; i < keep.size(); ++i) nf += cell[keep[i]] * new_strides[i];
    out[nf] += p_[flat];
  }
  // Rounding in the accumulation can push the total a hair past the
  // constructor tolerance; the inputs were validated, so clamp the total.
  double sum = 0.0;
  for (double v : out) sum += v;
  if (std::fabs(sum - 1.0) > kSumTol) {
    throw InvalidPmf("marginal: accumulated mass drifted; input joint was inconsistent");
  }
  return JointPmf(std::move(new_axes), std::move(out));
}

TypeVector empirical_type(std::span<const std::uint32_t> x, std::size_t alphabet) {
  if (x.empty()) throw EmptySequence("empirical_type: empty sequence");
  TypeVector t;
  t.n = x.size();
  t.counts.assign(alphabet, 0);
  for (std::uint32_t s : x) {
    if (s >= alphabet) throw AlphabetMismatch("empirical_type: symbol out of range");
    ++t.counts[s];
  }
  return t;
}

double entropy_raw(std::span<const double> p, double base) {
  double h = 0.0;
  for (double v : p) {
    if (v > 0.0) h -= v * std::log(v);
  }
  return h / std::log(base);
}

double entropy(const Pmf& p, double base) {
  return entropy_raw(std::span<const double>(p.data()), base);
}

double entropy(const JointPmf& j, const std::vector<std::string>& names, double base) {
  if (names.empty()) return entropy_raw(std::span<const double>(j.data()), base);
  JointPmf m = j.marginal(names);
  return entropy_raw(std::span<const double>(m.data()), base);
}

double conditional_entropy(const JointPmf& j, const std::vector<std::string>& targets,
                           const std::vector<std::string>& given, double base) {
  if (given.empty()) return entropy(j, targets, base);
  std::vector<std::string> all = targets;
  all.insert(all.end(), given.begin(), given.end());
  return entropy(j, all, base) - entropy(j, given, base);
}

double mutual_information(const JointPmf& j, const std::vector<std::string>& a,
                          const std::vector<std::string>& b, double base) {
  std::vector<std::string> ab = a;
  ab.insert(ab.end(), b.begin(), b.end());
  return entropy(j, a, base) + entropy(j, b, base) - entropy(j, ab, base);
}

double conditional_mutual_information(const JointPmf& j, const std::vector<std::string>& a,
                                      const std::vector<std::string>& b,
                                      const std::vector<std::string>& c, double base) {
  if (c.empty()) return mutual_information(j, a, b, base);
  std::vector<std::string> ac = a, bc = b, abc = a;
  ac.insert(ac.end(), c.begin(), c.end());
  bc.insert(bc.end(), c.begin(), c.end());
  abc.insert(abc.end(), b.begin(), b.end());
  abc.insert(abc.end(), c.begin(), c.end());
  return entropy(j, ac, base) + entropy(j, bc, base) - entropy(j, abc, base) -
         entropy(j, c, base);
}

double kl_divergence(const Pmf& p, const Pmf& r, double base) {
  if (p.size() != r.size()) throw DimensionMismatch("kl_divergence: alphabet sizes differ");
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (r[i] == 0.0) {
      throw AbsoluteContinuityViolation("kl_divergence: p > 0 where r = 0 at index " +
                                        std::to_string(i));
    }
    d += p[i] * std::log(p[i] / r[i]);
  }
  return d / std::log(base);
}

bool is_typical(const std::vector<std::span<const std::uint32_t>>& seqs,
                const JointPmf& joint, double eps) {
  if (seqs.size() != joint.num_axes()) {
    throw DimensionMismatch("is_typical: sequence count vs joint axes");
  }
  if (seqs.empty() || seqs[0].empty()) throw EmptySequence("is_typical: empty input");
  const std::size_t n = seqs[0].size();
  for (const auto& s : seqs) {
    if (s.size() != n) throw LengthMismatch("is_typical: sequences of unequal length");
  }
  std::vector<std::uint64_t> counts(joint.total_size(), 0);
  std::vector<std::size_t> cell(seqs.size());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < seqs.size(); ++a) {
      if (seqs[a][i] >= joint.axis(a).size) {
        throw AlphabetMismatch("is_typical: symbol out of axis range");
      }
      cell[a] = seqs[a][i];
    }
    ++counts[joint.flatten(cell)];
  }
  const auto& p = joint.data();
  const double dn = static_cast<double>(n);
  for (std::size_t f = 0; f < p.size(); ++f) {
    double pi = static_cast<double>(counts[f]) / dn;
    if (std::fabs(p[f] - pi) > eps * p[f]) return false;
  }
  return true;
}

bool is_typical(std::span<const std::uint32_t> x, const Pmf& p, double eps) {
  JointPmf j({Axis{"X", p.size()}}, p.data());
  return is_typical({x}, j, eps);
}

}  // namespace cflab::prob
