#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "jitq/polynomial.hpp"
#include "jitq/scenario.hpp"

namespace jitq {

inline constexpr std::size_t kMaxBruteForceVars = 26;

struct SolveResult {
  double best_value = 0.0;
  std::vector<BitString> minimizers;  // ascending basis index
  std::uint64_t evaluations = 0;
  std::optional<std::uint64_t> seed;
};

struct AnnealConfig {
  std::size_t sweeps = 200;
  std::optional<double> t_start;  // default: largest |coefficient|
  std::optional<double> t_end;    // default: 1e-3 * t_start
  std::size_t restarts = 4;
  std::uint64_t seed = 0;
};

/// Bit q of index is variable q.
BitString bits_of(std::uint64_t index, std::size_t num_vars);
std::uint64_t index_of(const BitString& bits);

/// Per-variable view of a polynomial: for each variable, the terms that
/// contain it with that variable removed. Flip deltas only touch these.
class FlipTable {
 public:
  explicit FlipTable(const PseudoBooleanPolynomial& pbp);

  /// evaluate(x with bit i flipped) - evaluate(x)
  [[nodiscard]] double delta(const BitString& x, VarIndex i) const;
  [[nodiscard]] std::size_t num_vars() const { return adjacent_.size(); }

 private:
  struct Partial {
    double coeff;
    std::vector<VarIndex> others;
  };
  std::vector<std::vector<Partial>> adjacent_;
};

/// Exhaustive minimum with the complete minimizer set. `threads` = 0 uses the
/// hardware concurrency; results do not depend on the thread count.
SolveResult brute_force(const PseudoBooleanPolynomial& pbp, unsigned threads = 0);

/// Single-bit-flip Metropolis annealing on a geometric temperature ladder.
/// Restarts run in parallel; restart r uses random stream r of cfg.seed.
SolveResult simulated_annealing(const PseudoBooleanPolynomial& pbp, const AnnealConfig& cfg,
                                unsigned threads = 0);

struct LandscapeRow {
  double arrival_time = 0.0;
  double cost = 0.0;
};

/// Minimal cost per reachable arrival time, ascending in arrival time.
std::vector<LandscapeRow> landscape(const RouteScenario& scenario, const EncodingConfig& enc);
std::string landscape_csv(const std::vector<LandscapeRow>& rows);

}  // namespace jitq
