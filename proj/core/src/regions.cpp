#include "cflab/regions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cflab/errors.hpp"
#include "cflab/field.hpp"

namespace cflab::regions {

namespace {

constexpr double kTol = 1e-9;

bool below(const HalfPlane& h, const RatePair& p, double tol) {
  return h.c1 * p.r1 + h.c2 * p.r2 <= h.b + tol;
}

}  // namespace

bool ConvexCell::contains(const RatePair& p, double tol) const {
  for (const auto& h : planes)
    if (!below(h, p, tol)) return false;
  return true;
}

RateRegion::RateRegion(std::vector<ConvexCell> cells, double box)
    : cells_(std::move(cells)), box_(box) {
  if (!(box_ > 0.0)) throw InvalidSpec("rate region: evaluation box must be positive");
}

bool RateRegion::contains(const RatePair& p, double tol) const {
  if (p.r1 < -tol || p.r2 < -tol) return false;
  for (const auto& c : cells_)
    if (c.contains(p, tol)) return true;
  return false;
}

std::vector<RatePair> RateRegion::cell_vertices(std::size_t i, double tol) const {
  std::vector<HalfPlane> planes = cells_.at(i).planes;
  planes.push_back({-1.0, 0.0, 0.0});
  planes.push_back({0.0, -1.0, 0.0});
  planes.push_back({1.0, 0.0, box_});
  planes.push_back({0.0, 1.0, box_});

  std::vector<RatePair> out;
  for (std::size_t a = 0; a < planes.size(); ++a)
    for (std::size_t b = a + 1; b < planes.size(); ++b) {
      double det = planes[a].c1 * planes[b].c2 - planes[a].c2 * planes[b].c1;
      if (std::fabs(det) < 1e-12) continue;
      RatePair p{(planes[a].b * planes[b].c2 - planes[b].b * planes[a].c2) / det,
                 (planes[a].c1 * planes[b].b - planes[b].c1 * planes[a].b) / det};
      bool feasible = true;
      for (const auto& h : planes)
        if (!below(h, p, tol)) {
          feasible = false;
          break;
        }
      if (!feasible) continue;
      bool dup = false;
      for (const auto& v : out)
        if (std::fabs(v.r1 - p.r1) <= tol && std::fabs(v.r2 - p.r2) <= tol) {
          dup = true;
          break;
        }
      if (!dup) out.push_back(p);
    }

  if (out.size() > 2) {
    double cx = 0.0, cy = 0.0;
    for (const auto& v : out) {
      cx += v.r1;
      cy += v.r2;
    }
    cx /= static_cast<double>(out.size());
    cy /= static_cast<double>(out.size());
    std::sort(out.begin(), out.end(), [&](const RatePair& u, const RatePair& v) {
      return std::atan2(u.r2 - cy, u.r1 - cx) < std::atan2(v.r2 - cy, v.r1 - cx);
    });
  }
  return out;
}

std::vector<RatePair> RateRegion::vertices(double tol) const {
  std::vector<RatePair> out;
  for (std::size_t i = 0; i < cells_.size(); ++i)
    for (const auto& p : cell_vertices(i, tol)) {
      bool dup = false;
      for (const auto& v : out)
        if (std::fabs(v.r1 - p.r1) <= tol && std::fabs(v.r2 - p.r2) <= tol) {
          dup = true;
          break;
        }
      if (!dup) out.push_back(p);
    }
  return out;
}

bool RateRegion::is_empty(double tol) const {
  for (std::size_t i = 0; i < cells_.size(); ++i)
    if (!cell_vertices(i, tol).empty()) return false;
  return true;
}

void RateRegion::prune(double tol) {
  // Coverage is decided on box-clipped vertices; all builders bound every
  // active constraint by the box, so this preserves membership.
  std::vector<std::vector<RatePair>> verts(cells_.size());
  for (std::size_t i = 0; i < cells_.size(); ++i) verts[i] = cell_vertices(i, tol);

  std::vector<bool> keep(cells_.size(), true);
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    if (verts[i].empty()) {
      keep[i] = false;
      continue;
    }
    for (std::size_t j = 0; j < cells_.size(); ++j) {
      if (i == j || !keep[j]) continue;
      bool covered = true;
      for (const auto& v : verts[i])
        if (!cells_[j].contains(v, tol)) {
          covered = false;
          break;
        }
      if (!covered) continue;
      // Mutually covering cells: keep the earlier one.
      bool mutual = true;
      for (const auto& v : verts[j])
        if (!cells_[i].contains(v, tol)) {
          mutual = false;
          break;
        }
      if (!mutual || j < i) {
        keep[i] = false;
        break;
      }
    }
  }

  std::vector<ConvexCell> kept;
  for (std::size_t i = 0; i < cells_.size(); ++i)
    if (keep[i]) kept.push_back(std::move(cells_[i]));
  cells_ = std::move(kept);
}

std::string RateRegion::to_json_text() const {
  nlohmann::json j;
  j["box"] = box_;
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : cells_) {
    nlohmann::json planes = nlohmann::json::array();
    for (const auto& h : c.planes)
      planes.push_back({{"b", h.b}, {"c1", h.c1}, {"c2", h.c2}});
    cells.push_back(std::move(planes));
  }
  j["cells"] = std::move(cells);
  return j.dump(2) + "\n";
}

std::string RateRegion::vertices_csv() const {
  std::ostringstream os;
  os << "cell_id,R1,R2\n";
  os.precision(12);
  for (std::size_t i = 0; i < cells_.size(); ++i)
    for (const auto& v : cell_vertices(i)) os << i << "," << v.r1 << "," << v.r2 << "\n";
  return os.str();
}

namespace {

// Shared validation for joints over (X1, X2, W, Y): prime common alphabet,
// and every positive cell consistent with w = a1*x1 + a2*x2.
std::uint32_t mac_field_size(const prob::JointPmf& joint) {
  for (const char* name : {"X1", "X2", "W", "Y"})
    if (!joint.has_axis(name))
      throw UnknownAxis(std::string("rate region: joint is missing axis ") + name);
  std::size_t q = joint.axis(joint.axis_index("X1")).size;
  if (joint.axis(joint.axis_index("X2")).size != q ||
      joint.axis(joint.axis_index("W")).size != q)
    throw DimensionMismatch("rate region: X1, X2, W alphabets must share one size");
  gf::check_prime(static_cast<std::uint32_t>(q));
  return static_cast<std::uint32_t>(q);
}

void check_w_axis(const prob::JointPmf& joint, std::uint32_t a1, std::uint32_t a2,
                  std::uint32_t q) {
  if (a1 % q == 0 && a2 % q == 0)
    throw ZeroCoefficientVector("rate region: coefficient vector is zero");
  std::size_t ix1 = joint.axis_index("X1"), ix2 = joint.axis_index("X2"),
              iw = joint.axis_index("W");
  std::vector<std::size_t> cell;
  for (std::size_t f = 0; f < joint.total_size(); ++f) {
    if (joint.data()[f] <= 0.0) continue;
    joint.unflatten(f, cell);
    std::uint32_t w = gf::add(gf::mul(a1, static_cast<std::uint32_t>(cell[ix1]), q),
                              gf::mul(a2, static_cast<std::uint32_t>(cell[ix2]), q), q);
    if (cell[iw] != w)
      throw InvalidSpec("rate region: W axis does not match the coefficient vector");
  }
}

double mac_box(const prob::JointPmf& joint, double base) {
  return 1.0 + std::max(prob::entropy(joint, {"X1"}, base), prob::entropy(joint, {"X2"}, base));
}

// H(b1*X1 + b2*X2 | Y) from the (X1, X2, Y) marginal, base q.
double combo_conditional_entropy(const prob::JointPmf& xxy, std::uint32_t b1,
                                 std::uint32_t b2, std::uint32_t q) {
  std::size_t ny = xxy.axis(2).size;
  std::vector<double> wy(static_cast<std::size_t>(q) * ny, 0.0);
  std::vector<double> py(ny, 0.0);
  std::vector<std::size_t> cell;
  for (std::size_t f = 0; f < xxy.total_size(); ++f) {
    double p = xxy.data()[f];
    if (p <= 0.0) continue;
    xxy.unflatten(f, cell);
    std::uint32_t w = gf::add(gf::mul(b1, static_cast<std::uint32_t>(cell[0]), q),
                              gf::mul(b2, static_cast<std::uint32_t>(cell[1]), q), q);
    wy[w * ny + cell[2]] += p;
    py[cell[2]] += p;
  }
  double base = static_cast<double>(q);
  return prob::entropy_raw(wy, base) - prob::entropy_raw(py, base);
}

}  // namespace

RateRegion region_cf(const prob::JointPmf& joint, std::uint32_t a1, std::uint32_t a2,
                     double delta) {
  std::uint32_t q = mac_field_size(joint);
  check_w_axis(joint, a1, a2, q);
  double base = q;
  double hw_y = prob::conditional_entropy(joint, {"W"}, {"Y"}, base);
  ConvexCell cell;
  if (a1 % q != 0)
    cell.planes.push_back({1.0, 0.0, prob::entropy(joint, {"X1"}, base) - hw_y - delta});
  if (a2 % q != 0)
    cell.planes.push_back({0.0, 1.0, prob::entropy(joint, {"X2"}, base) - hw_y - delta});
  return RateRegion({cell}, mac_box(joint, base));
}

RateRegion region_mac(const prob::JointPmf& joint) {
  std::uint32_t q = mac_field_size(joint);
  double base = q;
  ConvexCell cell;
  cell.planes.push_back({1.0, 0.0, prob::conditional_mutual_information(joint, {"X1"}, {"Y"}, {"X2"}, base)});
  cell.planes.push_back({0.0, 1.0, prob::conditional_mutual_information(joint, {"X2"}, {"Y"}, {"X1"}, base)});
  cell.planes.push_back({1.0, 1.0, prob::mutual_information(joint, {"X1", "X2"}, {"Y"}, base)});
  return RateRegion({cell}, mac_box(joint, base));
}

RateRegion region_j(const prob::JointPmf& joint, std::uint32_t a1, std::uint32_t a2,
                    int j, double delta) {
  std::uint32_t q = mac_field_size(joint);
  check_w_axis(joint, a1, a2, q);
  if (j != 1 && j != 2) throw InvalidSpec("rate region: sender index must be 1 or 2");
  double base = q;
  prob::JointPmf xxy = joint.marginal({"X1", "X2", "Y"});

  double min_h = 0.0;
  bool first = true;
  for (std::uint32_t b1 = 1; b1 < q; ++b1)
    for (std::uint32_t b2 = 1; b2 < q; ++b2) {
      double h = combo_conditional_entropy(xxy, b1, b2, q);
      if (first || h < min_h) min_h = h;
      first = false;
    }

  double i_sum = prob::mutual_information(joint, {"X1", "X2"}, {"Y"}, base);
  ConvexCell cell;
  cell.planes.push_back({1.0, 0.0, prob::conditional_mutual_information(joint, {"X1"}, {"Y"}, {"X2"}, base) - delta});
  cell.planes.push_back({0.0, 1.0, prob::conditional_mutual_information(joint, {"X2"}, {"Y"}, {"X1"}, base) - delta});
  cell.planes.push_back({1.0, 1.0, i_sum - delta});
  if (j == 1)
    cell.planes.push_back({1.0, 0.0, i_sum - prob::entropy(joint, {"X2"}, base) + min_h - delta});
  else
    cell.planes.push_back({0.0, 1.0, i_sum - prob::entropy(joint, {"X1"}, base) + min_h - delta});
  return RateRegion({cell}, mac_box(joint, base));
}

RateRegion region_star_star(const prob::JointPmf& joint, std::uint32_t a1,
                            std::uint32_t a2, double delta) {
  std::uint32_t q = mac_field_size(joint);
  check_w_axis(joint, a1, a2, q);
  double base = q;
  double i_sum = prob::mutual_information(joint, {"X1", "X2"}, {"Y"}, base);

  // Per active sender j: the plain bound and the two-cell split of
  // min{R_jc, I(X_jc; W, Y)}.
  struct Split {
    HalfPlane plain;
    std::vector<HalfPlane> low, high;
  };
  std::vector<Split> splits;
  for (int j = 1; j <= 2; ++j) {
    std::uint32_t aj = (j == 1) ? a1 : a2;
    if (aj % q == 0) continue;
    const char* xj = (j == 1) ? "X1" : "X2";
    const char* xc = (j == 1) ? "X2" : "X1";
    double own = (j == 1) ? 1.0 : 0.0;  // coefficient pattern for R_j
    double other = 1.0 - own;
    double i_single = prob::conditional_mutual_information(joint, {xj}, {"Y"}, {xc}, base);
    double i_cross = prob::mutual_information(joint, {xc}, {"W", "Y"}, base);
    Split s;
    s.plain = {own, other, i_single + delta};
    s.low = {{other, own, i_cross}, {1.0, 1.0, i_sum + delta}};
    s.high = {{-other, -own, -i_cross}, {own, other, i_sum - i_cross + delta}};
    splits.push_back(std::move(s));
  }

  std::vector<ConvexCell> cells = {ConvexCell{}};
  for (const auto& s : splits) {
    std::vector<ConvexCell> next;
    for (const auto& c : cells)
      for (const auto* branch : {&s.low, &s.high}) {
        ConvexCell merged = c;
        merged.planes.push_back(s.plain);
        merged.planes.insert(merged.planes.end(), branch->begin(), branch->end());
        next.push_back(std::move(merged));
      }
    cells = std::move(next);
  }
  return RateRegion(std::move(cells), mac_box(joint, base));
}

NaturalnessResult is_natural(const prob::JointPmf& joint, std::uint32_t a1,
                             std::uint32_t a2) {
  std::uint32_t q = mac_field_size(joint);
  check_w_axis(joint, a1, a2, q);
  prob::JointPmf xxy = joint.marginal({"X1", "X2", "Y"});

  NaturalnessResult res;
  bool first = true;
  for (std::uint32_t b1 = 0; b1 < q; ++b1)
    for (std::uint32_t b2 = 0; b2 < q; ++b2) {
      if (b1 == 0 && b2 == 0) continue;
      double h = combo_conditional_entropy(xxy, b1, b2, q);
      res.table.push_back({b1, b2, h});
      if (b1 == a1 % q && b2 == a2 % q) res.h_wa_given_y = h;
      if (first || h < res.min_h) res.min_h = h;
      first = false;
    }
  res.natural = res.h_wa_given_y <= res.min_h + kTol;
  return res;
}

namespace {

GridCompareResult grid_compare(const std::vector<const RateRegion*>& lhs,
                               const std::vector<const RateRegion*>& rhs, double box,
                               std::size_t grid) {
  if (grid < 2) throw InvalidSpec("rate region: grid resolution must be at least 2");
  GridCompareResult res;
  for (std::size_t i = 0; i < grid; ++i)
    for (std::size_t k = 0; k < grid; ++k) {
      RatePair p{box * static_cast<double>(i) / static_cast<double>(grid - 1),
                 box * static_cast<double>(k) / static_cast<double>(grid - 1)};
      bool in_l = false, in_r = false;
      for (const auto* r : lhs) in_l = in_l || r->contains(p);
      for (const auto* r : rhs) in_r = in_r || r->contains(p);
      ++res.points;
      if (in_l != in_r) {
        if (res.mismatches == 0) res.first_mismatch = p;
        ++res.mismatches;
      }
    }
  return res;
}

}  // namespace

GridCompareResult check_star_decomposition(const prob::JointPmf& joint, std::uint32_t a1,
                              std::uint32_t a2, std::size_t grid) {
  RateRegion star = region_star_star(joint, a1, a2, 0.0);
  RateRegion cf = region_cf(joint, a1, a2, 0.0);
  RateRegion mac = region_mac(joint);
  return grid_compare({&star}, {&cf, &mac}, star.box(), grid);
}

GridCompareResult check_natural_decomposition(const prob::JointPmf& joint, std::uint32_t a1,
                               std::uint32_t a2, std::size_t grid) {
  if (!is_natural(joint, a1, a2).natural)
    throw NotNaturalCombination(
        "rate region: equivalence check requires the easiest-to-recover combination");
  RateRegion cf = region_cf(joint, a1, a2, 0.0);
  RateRegion r1 = region_j(joint, a1, a2, 1, 0.0);
  RateRegion r2 = region_j(joint, a1, a2, 2, 0.0);
  RateRegion mac = region_mac(joint);
  return grid_compare({&cf, &r1, &r2}, {&cf, &mac}, cf.box(), grid);
}

namespace {

struct BcMeasures {
  double iu;                       // I(U1;U2)
  double full1, sum1, cross1, single1;  // receiver 1
  double full2, sum2, cross2, single2;  // receiver 2
  double box;
};

BcMeasures bc_measures(const prob::JointPmf& joint) {
  for (const char* name : {"U1", "U2", "Y1", "Y2"})
    if (!joint.has_axis(name))
      throw UnknownAxis(std::string("rate region: joint is missing axis ") + name);
  const double base = 2.0;
  BcMeasures m;
  m.iu = prob::mutual_information(joint, {"U1"}, {"U2"}, base);
  m.full1 = prob::mutual_information(joint, {"U1"}, {"Y1", "U2"}, base);
  m.sum1 = prob::mutual_information(joint, {"U1", "U2"}, {"Y1"}, base);
  m.cross1 = prob::mutual_information(joint, {"U2"}, {"Y1", "U1"}, base);
  m.single1 = prob::mutual_information(joint, {"U1"}, {"Y1"}, base);
  m.full2 = prob::mutual_information(joint, {"U2"}, {"Y2", "U1"}, base);
  m.sum2 = prob::mutual_information(joint, {"U1", "U2"}, {"Y2"}, base);
  m.cross2 = prob::mutual_information(joint, {"U1"}, {"Y2", "U2"}, base);
  m.single2 = prob::mutual_information(joint, {"U2"}, {"Y2"}, base);
  m.box = 1.0 + std::max(prob::entropy(joint, {"U1"}, base), prob::entropy(joint, {"U2"}, base));
  return m;
}

}  // namespace

RateRegion marton_region(const prob::JointPmf& bc_joint, double alpha, double delta,
                         MartonForm form) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw InvalidAlpha("rate region: split parameter must lie in [0, 1]");
  BcMeasures m = bc_measures(bc_joint);
  double abar = 1.0 - alpha;

  std::vector<ConvexCell> cells;
  if (form == MartonForm::kCombined) {
    HalfPlane p1{1.0, 0.0, m.full1 - alpha * m.iu + delta};
    HalfPlane p2{0.0, 1.0, m.full2 - abar * m.iu + delta};
    double v1 = std::min(m.cross1 - abar * m.iu, m.sum1);
    double v2 = std::min(m.cross2 - alpha * m.iu, m.sum2);
    std::vector<std::vector<HalfPlane>> split1 = {
        {{0.0, 1.0, v1}, {1.0, 1.0, m.sum1 + delta}},
        {{0.0, -1.0, -v1}, {1.0, 0.0, m.sum1 - v1 + delta}}};
    std::vector<std::vector<HalfPlane>> split2 = {
        {{1.0, 0.0, v2}, {1.0, 1.0, m.sum2 + delta}},
        {{-1.0, 0.0, -v2}, {0.0, 1.0, m.sum2 - v2 + delta}}};
    for (const auto& s1 : split1)
      for (const auto& s2 : split2) {
        ConvexCell c;
        c.planes = {p1, p2};
        c.planes.insert(c.planes.end(), s1.begin(), s1.end());
        c.planes.insert(c.planes.end(), s2.begin(), s2.end());
        cells.push_back(std::move(c));
      }
  } else {
    double d4 = 4.0 * delta;
    std::vector<std::vector<HalfPlane>> opts1 = {
        {{1.0, 0.0, std::max(0.0, m.single1 - alpha * m.iu - d4)}},
        {{1.0, 0.0, m.full1 - alpha * m.iu - d4}, {1.0, 1.0, m.sum1 - d4}}};
    std::vector<std::vector<HalfPlane>> opts2 = {
        {{0.0, 1.0, std::max(0.0, m.single2 - abar * m.iu - d4)}},
        {{0.0, 1.0, m.full2 - abar * m.iu - d4}, {1.0, 1.0, m.sum2 - d4}}};
    for (const auto& o1 : opts1)
      for (const auto& o2 : opts2) {
        ConvexCell c;
        c.planes = o1;
        c.planes.insert(c.planes.end(), o2.begin(), o2.end());
        cells.push_back(std::move(c));
      }
  }
  return RateRegion(std::move(cells), m.box);
}

GridCompareResult check_marton_forms(const prob::JointPmf& bc_joint, double alpha,
                               std::size_t grid) {
  RateRegion outer = marton_region(bc_joint, alpha, 0.0, MartonForm::kCombined);
  RateRegion inner = marton_region(bc_joint, alpha, 0.0, MartonForm::kPerReceiver);
  return grid_compare({&outer}, {&inner}, outer.box(), grid);
}

AuxiliarySpec trivial_auxiliary(const channels::MacSpec& spec) {
  AuxiliarySpec aux;
  aux.pq = prob::Pmf({1.0});
  aux.px1_given_q = {spec.px1};
  aux.px2_given_q = {spec.px2};
  aux.nt = 1;
  aux.pt_given.assign(static_cast<std::size_t>(spec.q) * spec.q, 1.0);
  return aux;
}

AuxiliarySpec revealing_auxiliary(const channels::MacSpec& spec) {
  AuxiliarySpec aux;
  aux.pq = prob::Pmf({1.0});
  aux.px1_given_q = {spec.px1};
  aux.px2_given_q = {spec.px2};
  aux.nt = static_cast<std::size_t>(spec.q) * spec.q;
  aux.pt_given.assign(aux.nt * aux.nt, 0.0);
  for (std::size_t pair = 0; pair < aux.nt; ++pair) aux.pt_given[pair * aux.nt + pair] = 1.0;
  return aux;
}

RateRegion general_outer(const channels::MacSpec& spec, const AuxiliarySpec& aux) {
  channels::validate(spec);
  const std::uint32_t q = spec.q;
  if (spec.a1 % q == 0 || spec.a2 % q == 0)
    throw ZeroCoefficientVector("general outer bound: both coefficients must be nonzero");
  if (!check_markov_through_w(spec))
    throw MarkovPrecondFailed(
        "general outer bound: channel output must depend on the inputs only through w");

  const std::size_t nq = aux.pq.size(), nt = aux.nt, ny = spec.ny;
  if (nq == 0 || nt == 0) throw InvalidSpec("general outer bound: empty auxiliary alphabet");
  if (aux.px1_given_q.size() != nq || aux.px2_given_q.size() != nq)
    throw DimensionMismatch("general outer bound: one input row required per q value");
  for (std::size_t i = 0; i < nq; ++i)
    if (aux.px1_given_q[i].size() != q || aux.px2_given_q[i].size() != q)
      throw DimensionMismatch("general outer bound: input rows must have q entries");
  if (aux.pt_given.size() != nq * q * q * nt)
    throw DimensionMismatch("general outer bound: t-channel table has wrong size");
  for (std::size_t row = 0; row < nq * q * q; ++row) {
    double s = 0.0;
    for (std::size_t t = 0; t < nt; ++t) {
      double v = aux.pt_given[row * nt + t];
      if (!(v >= 0.0) || std::isnan(v))
        throw InvalidPmf("general outer bound: negative or NaN t-channel probability");
      s += v;
    }
    if (std::fabs(s - 1.0) > 1e-9)
      throw InvalidPmf("general outer bound: t-channel row does not sum to 1");
  }

  std::vector<prob::Axis> axes = {{"Q", nq}, {"X1", q}, {"X2", q},
                                  {"W", q},  {"T", nt}, {"Y", ny}};
  std::vector<double> cells(nq * q * q * q * nt * ny, 0.0);
  for (std::size_t qi = 0; qi < nq; ++qi)
    for (std::uint32_t x1 = 0; x1 < q; ++x1)
      for (std::uint32_t x2 = 0; x2 < q; ++x2) {
        double phead = aux.pq[qi] * aux.px1_given_q[qi][x1] * aux.px2_given_q[qi][x2];
        if (phead <= 0.0) continue;
        std::uint32_t w = gf::add(gf::mul(spec.a1, x1, q), gf::mul(spec.a2, x2, q), q);
        std::size_t trow = (qi * q + x1) * q + x2;
        for (std::size_t t = 0; t < nt; ++t) {
          double pt = aux.pt_given[trow * nt + t];
          if (pt <= 0.0) continue;
          for (std::size_t y = 0; y < ny; ++y)
            cells[((((qi * q + x1) * q + x2) * q + w) * nt + t) * ny + y] =
                phead * pt * spec.p(x1, x2, y);
        }
      }
  prob::JointPmf joint(axes, cells);

  const double base = q;
  double iwy = prob::conditional_mutual_information(joint, {"W"}, {"Y"}, {"Q"}, base);
  double ix1w = prob::conditional_mutual_information(joint, {"X1"}, {"W"}, {"T", "Q"}, base);
  double ix2w = prob::conditional_mutual_information(joint, {"X2"}, {"W"}, {"T", "Q"}, base);
  double ixxw = prob::conditional_mutual_information(joint, {"X1", "X2"}, {"W"}, {"T", "Q"}, base);

  ConvexCell cell;
  cell.planes.push_back({1.0, 0.0, prob::conditional_mutual_information(joint, {"X1"}, {"Y"}, {"X2", "Q"}, base)});
  cell.planes.push_back({0.0, 1.0, prob::conditional_mutual_information(joint, {"X2"}, {"Y"}, {"X1", "Q"}, base)});
  cell.planes.push_back({1.0, 0.0, iwy - ix2w});
  cell.planes.push_back({0.0, 1.0, iwy - ix1w});
  cell.planes.push_back({1.0, 1.0, iwy + ixxw - ix1w - ix2w});
  return RateRegion({cell}, mac_box(joint, base));
}

}  // namespace cflab::regions
