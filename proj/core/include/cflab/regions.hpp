#ifndef CFLAB_REGIONS_HPP
#define CFLAB_REGIONS_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "cflab/channels.hpp"
#include "cflab/prob.hpp"

namespace cflab::regions {

struct RatePair {
  double r1 = 0.0, r2 = 0.0;
};

/// c1*R1 + c2*R2 <= b.
struct HalfPlane {
  double c1 = 0.0, c2 = 0.0, b = 0.0;
};

/// Intersection of half-planes with the nonnegative quadrant.
struct ConvexCell {
  std::vector<HalfPlane> planes;
  bool contains(const RatePair& p, double tol = 1e-9) const;
};

/// Union of convex cells. min{.,.} rate constraints are resolved by
/// case-splitting into cells, so each cell stays a plain intersection.
/// The box bound only clips vertex extraction and grid scans; membership
/// ignores it (a coordinate a region leaves unconstrained stays unbounded).
class RateRegion {
 public:
  RateRegion() = default;
  RateRegion(std::vector<ConvexCell> cells, double box);

  bool contains(const RatePair& p, double tol = 1e-9) const;
  bool is_empty(double tol = 1e-9) const;
  const std::vector<ConvexCell>& cells() const { return cells_; }
  double box() const { return box_; }

  /// Extreme points of cell i clipped to [0, box]^2: feasible pairwise
  /// plane intersections, deduplicated, in counterclockwise order.
  std::vector<RatePair> cell_vertices(std::size_t i, double tol = 1e-9) const;
  /// Union of all cell vertex lists, deduplicated.
  std::vector<RatePair> vertices(double tol = 1e-9) const;

  /// Drops empty cells and cells covered by another cell.
  void prune(double tol = 1e-9);

  std::string to_json_text() const;
  /// One row per vertex: cell_id,R1,R2.
  std::string vertices_csv() const;

 private:
  std::vector<ConvexCell> cells_;
  double box_ = 1.0;
};

/// Per-sender computation bound: R_j <= H(X_j) - H(W|Y) - delta for each j
/// with a_j != 0; a sender with a_j = 0 is unconstrained.
/// Expects a joint over (X1, X2, W, Y) whose W axis matches a.
RateRegion region_cf(const prob::JointPmf& joint, std::uint32_t a1, std::uint32_t a2,
                     double delta = 0.0);

/// Pentagon {R1 <= I(X1;Y|X2), R2 <= I(X2;Y|X1), R1+R2 <= I(X1,X2;Y)}.
RateRegion region_mac(const prob::JointPmf& joint);

/// Four-constraint decoder region for sender j: the pentagon bounds minus
/// delta plus R_j <= I(X1,X2;Y) - H(X_{jc}) + min_b H(W_b|Y) - delta, the
/// min ranging over all b with both entries nonzero.
RateRegion region_j(const prob::JointPmf& joint, std::uint32_t a1, std::uint32_t a2,
                    int j, double delta = 0.0);

/// For each j with a_j != 0: R_j <= I(X_j;Y|X_jc) + delta and
/// R_j <= I(X1,X2;Y) - min{R_jc, I(X_jc;W,Y)} + delta, the min case-split
/// into two cells per active sender.
RateRegion region_star_star(const prob::JointPmf& joint, std::uint32_t a1,
                            std::uint32_t a2, double delta = 0.0);

struct NaturalnessWitness {
  std::uint32_t b1 = 0, b2 = 0;
  double h_wb_given_y = 0.0;
};

struct NaturalnessResult {
  bool natural = false;
  double h_wa_given_y = 0.0;
  double min_h = 0.0;
  std::vector<NaturalnessWitness> table;  // all b != 0, row-major over (b1, b2)
};

/// a is natural when H(W_a|Y) attains min over all nonzero b of H(W_b|Y);
/// ties count as natural (slack 1e-9).
NaturalnessResult is_natural(const prob::JointPmf& joint, std::uint32_t a1,
                             std::uint32_t a2);

struct GridCompareResult {
  std::size_t points = 0;
  std::size_t mismatches = 0;
  RatePair first_mismatch;
  bool equal() const { return mismatches == 0; }
};

/// Membership comparison of region_star_star(delta=0) against
/// region_cf union region_mac on a grid over the evaluation box.
GridCompareResult check_star_decomposition(const prob::JointPmf& joint, std::uint32_t a1,
                              std::uint32_t a2, std::size_t grid = 200);

/// Membership comparison of cf|r1|r2 against cf|mac at delta=0. Requires a
/// natural combination; throws NotNaturalCombination otherwise.
GridCompareResult check_natural_decomposition(const prob::JointPmf& joint, std::uint32_t a1,
                               std::uint32_t a2, std::size_t grid = 200);

enum class MartonForm { kCombined, kPerReceiver };

/// Broadcast region at split parameter alpha (bits/use).
/// kCombined: the four-constraint outer form, min terms case-split, +delta.
/// kPerReceiver: intersection of the two per-receiver unions, each
/// "single bound with max(0,.)" or "pair of bounds", at -4*delta.
RateRegion marton_region(const prob::JointPmf& bc_joint, double alpha, double delta = 0.0,
                         MartonForm form = MartonForm::kCombined);

/// Grid comparison of the two marton_region forms at delta = 0.
GridCompareResult check_marton_forms(const prob::JointPmf& bc_joint, double alpha,
                               std::size_t grid = 200);

/// Time-sharing and t-channel choice for the general outer bound.
struct AuxiliarySpec {
  prob::Pmf pq;                           // p(q)
  std::vector<prob::Pmf> px1_given_q;     // one row per q value
  std::vector<prob::Pmf> px2_given_q;
  std::size_t nt = 1;
  std::vector<double> pt_given;           // p(t|x1,x2,q), flat ((q*|X1|+x1)*|X2|+x2)*nt+t
};

AuxiliarySpec trivial_auxiliary(const channels::MacSpec& spec);      // Q, T degenerate
AuxiliarySpec revealing_auxiliary(const channels::MacSpec& spec);    // T = (X1, X2)

/// Five-constraint capacity outer bound evaluated at the supplied
/// auxiliaries. Requires p(y|x1,x2) to depend on the inputs only through w
/// and both coefficients nonzero.
RateRegion general_outer(const channels::MacSpec& spec, const AuxiliarySpec& aux);

}  // namespace cflab::regions

#endif  // CFLAB_REGIONS_HPP
