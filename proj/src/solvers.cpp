#include "jitq/solvers.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <map>
#include <thread>

#include <fmt/format.h>

#include "jitq/error.hpp"
#include "jitq/random.hpp"

namespace jitq {

BitString bits_of(std::uint64_t index, std::size_t num_vars) {
  BitString bits(num_vars);
  for (std::size_t q = 0; q < num_vars; ++q) bits[q] = (index >> q) & 1U;
  return bits;
}

std::uint64_t index_of(const BitString& bits) {
  if (bits.size() > 64) throw DomainError("assignment too long for a 64-bit index");
  std::uint64_t index = 0;
  for (std::size_t q = 0; q < bits.size(); ++q) {
    index |= static_cast<std::uint64_t>(bits[q] & 1U) << q;
  }
  return index;
}

FlipTable::FlipTable(const PseudoBooleanPolynomial& pbp) : adjacent_(pbp.num_vars()) {
  for (const auto& [vars, c] : pbp.terms()) {
    for (const auto v : vars) {
      Partial partial{c, {}};
      std::copy_if(vars.begin(), vars.end(), std::back_inserter(partial.others),
                   [v](VarIndex o) { return o != v; });
      adjacent_[v].push_back(std::move(partial));
    }
  }
}

double FlipTable::delta(const BitString& x, VarIndex i) const {
  double slope = 0.0;
  for (const auto& p : adjacent_[i]) {
    if (std::all_of(p.others.begin(), p.others.end(), [&](VarIndex o) { return x[o] != 0; })) {
      slope += p.coeff;
    }
  }
  return x[i] ? -slope : slope;
}

namespace {

unsigned worker_count(unsigned requested, std::size_t jobs) {
  unsigned n = requested == 0 ? std::max(1U, std::thread::hardware_concurrency()) : requested;
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

// Runs job(k) for k in [0, jobs) on up to `workers` threads.
template <typename Job>
void parallel_for(std::size_t jobs, unsigned workers, Job&& job) {
  if (workers <= 1) {
    for (std::size_t k = 0; k < jobs; ++k) job(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < jobs; k = next++) job(k);
    });
  }
}

// Bitmask form of a polynomial for enumeration over at most 64 variables.
struct MaskedTerms {
  std::vector<std::pair<std::uint64_t, double>> terms;
  std::vector<std::vector<std::pair<std::uint64_t, double>>> partials;  // per variable

  explicit MaskedTerms(const PseudoBooleanPolynomial& pbp) : partials(pbp.num_vars()) {
    for (const auto& [vars, c] : pbp.terms()) {
      std::uint64_t mask = 0;
      for (const auto v : vars) mask |= std::uint64_t{1} << v;
      terms.emplace_back(mask, c);
      for (const auto v : vars) partials[v].emplace_back(mask & ~(std::uint64_t{1} << v), c);
    }
  }

  [[nodiscard]] double value(std::uint64_t z) const {
    double sum = 0.0;
    for (const auto& [mask, c] : terms) {
      if ((z & mask) == mask) sum += c;
    }
    return sum;
  }

  [[nodiscard]] double flip_delta(std::uint64_t z, unsigned q) const {
    double slope = 0.0;
    for (const auto& [mask, c] : partials[q]) {
      if ((z & mask) == mask) slope += c;
    }
    return (z >> q) & 1U ? -slope : slope;
  }
};

struct Candidate {
  double approx;
  std::uint64_t index;
};

}  // namespace

SolveResult brute_force(const PseudoBooleanPolynomial& pbp, unsigned threads) {
  const auto n = pbp.num_vars();
  if (n > kMaxBruteForceVars) {
    throw DomainError(fmt::format("brute force supports at most {} variables, problem has {}",
                                  kMaxBruteForceVars, n));
  }
  const MaskedTerms masked(pbp);

  // Chunks fix the high bits; the low bits are walked in Gray-code order with
  // incremental deltas. Chunk boundaries depend only on n, never on threads.
  const unsigned low_bits = static_cast<unsigned>(std::min<std::size_t>(n, 12));
  const std::uint64_t chunk_size = std::uint64_t{1} << low_bits;
  const std::uint64_t chunks = std::uint64_t{1} << (n - low_bits);

  std::vector<std::vector<Candidate>> found(chunks);
  parallel_for(chunks, worker_count(threads, chunks), [&](std::size_t chunk) {
    const std::uint64_t base = static_cast<std::uint64_t>(chunk) << low_bits;
    std::uint64_t z = base;
    double value = masked.value(z);
    double best = value;
    auto slack = [](double b) { return 1e-9 * std::max(1.0, std::abs(b)); };
    std::vector<Candidate> keep{{value, z}};
    for (std::uint64_t step = 1; step < chunk_size; ++step) {
      const auto q = static_cast<unsigned>(std::countr_zero(step));
      value += masked.flip_delta(z, q);
      z ^= std::uint64_t{1} << q;
      if (value < best - slack(best)) {
        best = value;
        std::erase_if(keep, [&](const Candidate& c) { return c.approx > best + slack(best); });
        keep.push_back({value, z});
      } else if (value <= best + slack(best)) {
        best = std::min(best, value);
        keep.push_back({value, z});
      }
    }
    found[chunk] = std::move(keep);
  });

  // Exact re-evaluation removes any drift from the incremental walk.
  std::vector<std::pair<double, std::uint64_t>> exact;
  for (const auto& chunk : found) {
    for (const auto& c : chunk) exact.emplace_back(masked.value(c.index), c.index);
  }
  double best = exact.front().first;
  for (const auto& [v, _] : exact) best = std::min(best, v);
  const double tol = 1e-12 * std::max(1.0, std::abs(best));

  std::vector<std::uint64_t> winners;
  for (const auto& [v, z] : exact) {
    if (v - best <= tol) winners.push_back(z);
  }
  std::sort(winners.begin(), winners.end());

  SolveResult result;
  result.best_value = best;
  result.evaluations = chunks * chunk_size;
  result.minimizers.reserve(winners.size());
  for (const auto z : winners) result.minimizers.push_back(bits_of(z, n));
  return result;
}

namespace {

struct AnnealRun {
  double value = 0.0;
  BitString best;
  std::uint64_t evaluations = 0;
};

AnnealRun anneal_once(const PseudoBooleanPolynomial& pbp, const FlipTable& table,
                      const std::vector<double>& ladder, std::mt19937_64 engine) {
  const auto n = pbp.num_vars();
  BitString x(n);
  for (auto& bit : x) bit = static_cast<std::uint8_t>(engine() >> 63);

  AnnealRun run;
  double value = pbp.evaluate(x);
  run.value = value;
  run.best = x;
  run.evaluations = 1;
  for (const double temperature : ladder) {
    for (VarIndex i = 0; i < n; ++i) {
      const double d = table.delta(x, i);
      ++run.evaluations;
      if (d <= 0.0 || uniform01(engine) < std::exp(-d / temperature)) {
        x[i] ^= 1U;
        value += d;
        if (value < run.value) {
          run.value = value;
          run.best = x;
        }
      }
    }
  }
  run.value = pbp.evaluate(run.best);
  return run;
}

}  // namespace

SolveResult simulated_annealing(const PseudoBooleanPolynomial& pbp, const AnnealConfig& cfg,
                                unsigned threads) {
  if (pbp.num_vars() == 0) throw DomainError("annealing needs at least one variable");
  if (cfg.sweeps == 0 || cfg.restarts == 0) {
    throw DomainError("sweeps and restarts must be at least 1");
  }
  double t_start = cfg.t_start.value_or(pbp.max_abs_coefficient());
  if (!cfg.t_start && t_start == 0.0) t_start = 1.0;
  const double t_end = cfg.t_end.value_or(1e-3 * t_start);
  if (!(t_end > 0.0) || !(t_start >= t_end) || !std::isfinite(t_start)) {
    throw DomainError("temperatures must satisfy t_start >= t_end > 0");
  }

  std::vector<double> ladder(cfg.sweeps);
  for (std::size_t k = 0; k < cfg.sweeps; ++k) {
    const double frac = cfg.sweeps == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(cfg.sweeps - 1);
    ladder[k] = t_start * std::pow(t_end / t_start, frac);
  }

  const FlipTable table(pbp);
  std::vector<AnnealRun> runs(cfg.restarts);
  parallel_for(cfg.restarts, worker_count(threads, cfg.restarts), [&](std::size_t r) {
    runs[r] = anneal_once(pbp, table, ladder, seeded_stream(cfg.seed, r));
  });

  SolveResult result;
  result.seed = cfg.seed;
  std::size_t winner = 0;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    result.evaluations += runs[r].evaluations;
    if (runs[r].value < runs[winner].value) winner = r;
  }
  result.best_value = runs[winner].value;
  result.minimizers.push_back(runs[winner].best);
  return result;
}

std::vector<LandscapeRow> landscape(const RouteScenario& scenario, const EncodingConfig& enc) {
  validate_scenario(scenario);
  enc.validate();
  const auto n = scenario.size();
  const auto width = static_cast<std::size_t>(enc.bits());
  if (n * width > kMaxBruteForceVars) {
    throw DomainError(fmt::format("landscape enumerates at most {} bits, scenario needs {}",
                                  kMaxBruteForceVars, n * width));
  }
  const std::uint64_t codes = std::uint64_t{1} << width;

  // Each sector's bit pattern is the binary code of its u value, so walking
  // all code tuples visits every bitstring once.
  std::vector<std::vector<double>> times(n, std::vector<double>(codes));
  std::vector<std::vector<double>> fuel(n, std::vector<double>(codes));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::uint64_t k = 0; k < codes; ++k) {
      const double u = enc.value_of(k);
      times[i][k] = scenario.sectors[i].length * u;
      fuel[i][k] = sector_fuel(scenario.sectors[i], u);
    }
  }

  std::map<double, double> best_by_time;
  std::vector<std::uint64_t> code(n, 0);
  for (;;) {
    double t = 0.0;
    double f = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      t += times[i][code[i]];
      f += fuel[i][code[i]];
    }
    const double late = t - scenario.rta;
    const double cost = f + scenario.alpha * late * late;
    auto [it, inserted] = best_by_time.try_emplace(t, cost);
    if (!inserted) it->second = std::min(it->second, cost);

    std::size_t i = 0;
    while (i < n && ++code[i] == codes) code[i++] = 0;
    if (i == n) break;
  }

  // Equal arrival times reached through different summation orders can
  // differ in the last bits; merge neighbours closer than 1e-12 relative.
  std::vector<LandscapeRow> rows;
  for (const auto& [t, c] : best_by_time) {
    if (!rows.empty() && t - rows.back().arrival_time <= 1e-12 * std::max(1.0, std::abs(t))) {
      rows.back().cost = std::min(rows.back().cost, c);
    } else {
      rows.push_back({t, c});
    }
  }
  return rows;
}

std::string landscape_csv(const std::vector<LandscapeRow>& rows) {
  std::string out = "t_A,cost\n";
  for (const auto& r : rows) out += fmt::format("{},{}\n", r.arrival_time, r.cost);
  return out;
}

}  // namespace jitq
