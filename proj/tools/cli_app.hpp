#ifndef CFLAB_TOOLS_CLI_APP_HPP
#define CFLAB_TOOLS_CLI_APP_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace cflab::cli {

/// Fully resolved invocation: command, paths, and every numeric knob with
/// defaults applied (eps = 0.1, eps' = 2 eps, delta = 0, grid = 200,
/// trials = 2000, seed = 0).
struct RunConfig {
  std::string command;
  std::string help_text;  // set when the invocation only asked for help
  std::string spec_path;
  std::string out_dir;   // --out-dir, else $CFLAB_OUT_DIR, else "."
  std::string out_base;  // artifact base name (no extension)

  double eps = 0.1;
  double eps_prime = -1.0;  // resolved to 2 * eps when not given
  double delta = 0.0;
  std::size_t grid = 200;
  std::uint64_t trials = 2000;
  std::uint64_t seed = 0;
  std::uint64_t budget = 1ull << 24;
  std::uint64_t decode_budget = 0;  // resolved to budget when not given
  unsigned threads = 0;             // 0 = hardware count

  // region
  std::string kind;
  std::string form = "combined";
  double alpha = 0.5;
  std::string aux = "trivial";
  std::int64_t a1 = -1, a2 = -1;  // coefficient overrides; file value when < 0

  // simulation
  double r1 = 0.0, r2 = 0.0;
  std::vector<std::size_t> ns;
  std::int64_t k1 = -1, k2 = -1;  // explicit message lengths; from rate when < 0
  std::int64_t l1 = -1, l2 = -1;  // shaping-length overrides
  bool fixed_codebook = false;

  // verify
  std::string check;
  std::uint64_t instances = 25;
  std::uint64_t samples = 100000;
  std::uint64_t draws = 200;
  std::uint32_t q = 2;
  std::size_t k = 2, n = 3;
  std::size_t coord = 0;
  std::vector<std::uint64_t> type_counts;
  std::string mode = "mac";
};

/// Parses arguments (program name excluded) and validates ranges. Throws
/// UsageError on malformed invocations and SchemaError naming the offending
/// field on out-of-range values.
RunConfig parse_config(const std::vector<std::string>& args);

/// Executes one resolved command and returns its exit code (0 success,
/// 5 when a verification check fails).
int dispatch(const RunConfig& cfg);

/// parse_config + dispatch with errors mapped to exit codes:
/// 0 ok, 2 usage, 3 schema/spec, 4 budget, 5 verification failed.
int run_cli(int argc, const char* const* argv);

}  // namespace cflab::cli

#endif  // CFLAB_TOOLS_CLI_APP_HPP
