#ifndef CFLAB_HARNESS_HPP
#define CFLAB_HARNESS_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cflab/channels.hpp"
#include "cflab/homologous.hpp"
#include "cflab/marton.hpp"
#include "cflab/prob.hpp"

namespace cflab::harness {

struct WilsonInterval {
  double lo = 0.0, hi = 1.0;
  bool operator==(const WilsonInterval&) const = default;
};

/// 95% Wilson score interval. Well behaved at zero failures, where the upper
/// end is about 3.84 / (trials + 3.84).
WilsonInterval wilson_ci95(std::uint64_t failures, std::uint64_t trials);

struct ErrorEstimate {
  std::uint64_t trials = 0, failures = 0;
  double rate = 0.0;
  WilsonInterval ci95;
  bool ensemble = true;  // fresh codebook per trial vs one fixed codebook
  std::uint64_t no_candidate = 0, ambiguous = 0, wrong_value = 0;
  bool operator==(const ErrorEstimate&) const = default;
};

/// Message digit count whose rate is nearest the requested one.
std::size_t message_length_for_rate(std::size_t n, double rate);

struct MacExperiment {
  channels::MacSpec spec;
  homocode::HomologousParams params;  // params.seed is the master seed
  double eps_prime = 0.2;
  std::uint64_t decode_budget = 1ull << 24;
  bool fixed_codebook = false;
};

/// Monte Carlo estimate of the computation error rate. Each trial runs on its
/// own stream derived from (master seed, trial index), so the result does not
/// depend on how trials are split across threads (threads = 0 picks the
/// hardware count). Integer tallies only; the merge is exact.
ErrorEstimate estimate_mac_error(const MacExperiment& e, std::uint64_t trials,
                                 unsigned threads = 0);

struct BcExperiment {
  channels::BcSpec spec;
  martoncode::MartonParams params;
  double eps_prime = 0.2;
  std::uint64_t decode_budget = 1ull << 24;
  bool fixed_codebook = false;
};

struct BcErrorEstimate {
  std::uint64_t trials = 0;
  std::uint64_t failures1 = 0, failures2 = 0, joint_failures = 0;
  double joint_rate = 0.0;
  WilsonInterval ci95;  // joint failure rate
  bool ensemble = true;
  std::uint64_t no_candidate = 0, ambiguous = 0, wrong_value = 0;
  bool operator==(const BcErrorEstimate&) const = default;
};

BcErrorEstimate estimate_bc_error(const BcExperiment& e, std::uint64_t trials,
                                  unsigned threads = 0);

/// Verdict of one empirical check: the statistic, the threshold it was held
/// to, and named diagnostics (kept sorted by name so serialization is stable).
struct VerificationReport {
  std::string id;
  std::string test;
  double statistic = 0.0;
  double threshold = 0.0;
  bool pass = false;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, double>> diagnostics;
  bool operator==(const VerificationReport&) const = default;
};

/// Randomized region-identity batteries. Each instance draws a small channel
/// with rational pmfs and compares two region expressions point-for-point on
/// the evaluation grid; the statistic is the total number of disagreements.
VerificationReport verify_star_decomposition(std::uint64_t instances, std::size_t grid,
                                             std::uint64_t seed);

/// Same, for the split-union form under a naturally matched coefficient pair
/// (instances are rejection-sampled, falling back to the minimizer).
VerificationReport verify_natural_decomposition(std::uint64_t instances, std::size_t grid,
                                                std::uint64_t seed);

/// Same, for the two broadcast-region forms across a sweep of split
/// parameters alpha in {0, 0.25, 0.5, 0.75, 1}.
VerificationReport verify_marton_forms(std::uint64_t instances, std::size_t grid,
                                       std::uint64_t seed);

/// P(random k x n matrix over F_q has full row rank):
/// prod_{j=1..k} (q^n - q^{j-1}) / q^n, and 0 when k > n.
double exact_full_rank_prob(std::uint32_t q, std::size_t k, std::size_t n);

/// Empirical full-rank frequency against the exact value (3 sigma), plus a
/// strict-decrease check of n * P(rank deficient) along n = 4..16, k = n/2.
VerificationReport verify_full_rank(std::uint32_t q, std::size_t k, std::size_t n,
                                    std::uint64_t samples, std::uint64_t seed);

/// Conditional on the sender-1 codeword being typical, per-coordinate symbol
/// and symbol-output frequencies must sit within (1 +- eps) * p plus 3 sigma
/// sampling slack, over fresh codebooks and uniform messages.
VerificationReport verify_codeword_marginal(const homocode::HomologousParams& params,
                                            const channels::MacSpec& spec,
                                            std::size_t coord, std::uint64_t samples);

/// Conditional on the shaped codeword landing in the given type class, its
/// distribution must be near uniform over the enumerated class (TV <= 0.05
/// by default). Only tiny instances are enumerable.
VerificationReport verify_uniform_within_type(const homocode::HomologousParams& params,
                                              const prob::TypeVector& theta,
                                              std::uint64_t samples,
                                              double threshold = 0.05);

/// Empirical shaping-failure frequency over an n sweep must be nonincreasing
/// up to sampling slack. Override lengths in base are read relative to base.n
/// and rescale with each swept block length (ceil-proportional; 0 stays 0).
VerificationReport verify_shaping_coverage_mac(const homocode::HomologousParams& base,
                                               const prob::Pmf& px1, const prob::Pmf& px2,
                                               const std::vector<std::size_t>& ns,
                                               std::uint64_t draws);

/// Same trend check for the covering step of the broadcast codebook.
VerificationReport verify_shaping_coverage_marton(const martoncode::MartonParams& base,
                                                  const channels::BcSpec& spec,
                                                  const std::vector<std::size_t>& ns,
                                                  std::uint64_t draws);

/// One row of a sweep artifact; the CSV columns in order.
struct SweepPoint {
  std::size_t n = 0;
  double rate_point_r1 = 0.0, rate_point_r2 = 0.0;
  std::uint64_t trials = 0, failures = 0;
  double rate = 0.0, ci_lo = 0.0, ci_hi = 1.0;
  bool operator==(const SweepPoint&) const = default;
};

SweepPoint make_sweep_point(std::size_t n, double r1, double r2, const ErrorEstimate& est);
SweepPoint make_sweep_point(std::size_t n, double r1, double r2, const BcErrorEstimate& est);

/// Experiment artifact: resolved config echo, master seed, check verdicts and
/// sweep rows. Contains no timestamps, so equal runs serialize identically.
struct Report {
  std::string title;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<VerificationReport> checks;
  std::vector<SweepPoint> sweep;
  bool operator==(const Report&) const = default;
};

std::string report_to_json_text(const Report& r);
Report report_from_json_text(const std::string& text);
std::string sweep_to_csv_text(const std::vector<SweepPoint>& sweep);

/// Writes base_path + ".json" and, when the sweep is nonempty, a CSV
/// companion at base_path + ".csv". Throws IoFailure when a file cannot be
/// written.
void export_report(const Report& r, const std::string& base_path);

}  // namespace cflab::harness

#endif  // CFLAB_HARNESS_HPP
