#include "jitq/quantum.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "jitq/error.hpp"
#include "jitq/random.hpp"

namespace jitq {

namespace {

std::size_t qubits_for_dimension(std::size_t dim) {
  if (dim == 0 || !std::has_single_bit(dim)) {
    throw DomainError(fmt::format("dimension {} is not a power of two", dim));
  }
  const auto n = static_cast<std::size_t>(std::countr_zero(dim));
  if (n > kMaxQubits) {
    throw DomainError(fmt::format("{} qubits exceed the simulator limit of {}", n, kMaxQubits));
  }
  return n;
}

}  // namespace

DiagonalHamiltonian::DiagonalHamiltonian(std::vector<double> energies)
    : num_qubits_(qubits_for_dimension(energies.size())), energies_(std::move(energies)) {
  const auto [lo, hi] = std::minmax_element(energies_.begin(), energies_.end());
  min_ = *lo;
  max_ = *hi;
}

double DiagonalHamiltonian::mean() const {
  double sum = 0.0;
  for (const double e : energies_) sum += e;
  return sum / static_cast<double>(energies_.size());
}

DiagonalHamiltonian DiagonalHamiltonian::rescaled() const {
  const double span = max_ - min_;
  std::vector<double> out(energies_.size(), 0.0);
  if (span > 0.0) {
    for (std::size_t z = 0; z < out.size(); ++z) out[z] = (energies_[z] - min_) / span;
  }
  return DiagonalHamiltonian(std::move(out));
}

DiagonalHamiltonian build_diagonal(const PseudoBooleanPolynomial& pbp) {
  const auto n = pbp.num_vars();
  if (n > kMaxQubits) {
    throw DomainError(fmt::format("{} variables exceed the simulator limit of {} qubits", n, kMaxQubits));
  }
  std::vector<double> energies(std::size_t{1} << n, 0.0);
  for (const auto& [vars, c] : pbp.terms()) {
    std::uint64_t mask = 0;
    for (const auto v : vars) mask |= std::uint64_t{1} << v;
    for (std::uint64_t z = 0; z < energies.size(); ++z) {
      if ((z & mask) == mask) energies[z] += c;
    }
  }
  return DiagonalHamiltonian(std::move(energies));
}

// ---------------------------------------------------------------------------

StateVector::StateVector(std::vector<Amplitude> amplitudes)
    : num_qubits_(qubits_for_dimension(amplitudes.size())), amps_(std::move(amplitudes)) {}

StateVector StateVector::uniform(std::size_t num_qubits) {
  if (num_qubits > kMaxQubits) {
    throw DomainError(fmt::format("{} qubits exceed the simulator limit of {}", num_qubits, kMaxQubits));
  }
  const std::size_t dim = std::size_t{1} << num_qubits;
  return StateVector(std::vector<Amplitude>(dim, Amplitude(1.0 / std::sqrt(static_cast<double>(dim)), 0.0)));
}

StateVector StateVector::basis(std::size_t num_qubits, std::uint64_t index) {
  if (num_qubits > kMaxQubits) {
    throw DomainError(fmt::format("{} qubits exceed the simulator limit of {}", num_qubits, kMaxQubits));
  }
  std::vector<Amplitude> amps(std::size_t{1} << num_qubits);
  if (index >= amps.size()) throw DomainError("basis index out of range");
  amps[index] = 1.0;
  return StateVector(std::move(amps));
}

double StateVector::norm() const {
  double sum = 0.0;
  for (const auto& a : amps_) sum += std::norm(a);
  return std::sqrt(sum);
}

std::vector<double> StateVector::probabilities() const {
  std::vector<double> p(amps_.size());
  std::transform(amps_.begin(), amps_.end(), p.begin(), [](const Amplitude& a) { return std::norm(a); });
  return p;
}

void apply_phase(StateVector& state, const DiagonalHamiltonian& hamiltonian, double gamma) {
  if (state.dimension() != hamiltonian.dimension()) {
    throw DomainError(fmt::format("state dimension {} does not match Hamiltonian dimension {}",
                                  state.dimension(), hamiltonian.dimension()));
  }
  auto& amps = state.amplitudes();
  const auto& energies = hamiltonian.energies();
  for (std::size_t z = 0; z < amps.size(); ++z) {
    amps[z] *= std::polar(1.0, -gamma * energies[z]);
  }
}

void apply_mixer(StateVector& state, double beta) {
  const double c = std::cos(beta);
  const Amplitude is(0.0, std::sin(beta));
  auto& amps = state.amplitudes();
  const std::size_t dim = amps.size();
  for (std::size_t q = 0; q < state.num_qubits(); ++q) {
    const std::size_t stride = std::size_t{1} << q;
    for (std::size_t block = 0; block < dim; block += 2 * stride) {
      for (std::size_t z = block; z < block + stride; ++z) {
        const Amplitude a0 = amps[z];
        const Amplitude a1 = amps[z + stride];
        amps[z] = c * a0 + is * a1;
        amps[z + stride] = is * a0 + c * a1;
      }
    }
  }
}

double expectation(const StateVector& state, const DiagonalHamiltonian& hamiltonian) {
  if (state.dimension() != hamiltonian.dimension()) {
    throw DomainError("state and Hamiltonian dimensions differ");
  }
  double weighted = 0.0;
  double total = 0.0;
  const auto& amps = state.amplitudes();
  const auto& energies = hamiltonian.energies();
  for (std::size_t z = 0; z < amps.size(); ++z) {
    const double p = std::norm(amps[z]);
    weighted += energies[z] * p;
    total += p;
  }
  // Normalizing and clamping absorbs rounding at the last ulp.
  return std::clamp(weighted / total, hamiltonian.min(), hamiltonian.max());
}

// ---------------------------------------------------------------------------

StateVector qaoa_state(const DiagonalHamiltonian& hamiltonian, const QaoaParams& params) {
  if (params.betas.size() != params.gammas.size()) {
    throw DomainError("QAOA needs as many betas as gammas");
  }
  auto state = StateVector::uniform(hamiltonian.num_qubits());
  for (std::size_t k = 0; k < params.layers(); ++k) {
    apply_phase(state, hamiltonian, params.gammas[k]);
    apply_mixer(state, params.betas[k]);
  }
  return state;
}

double qaoa_expectation(const DiagonalHamiltonian& hamiltonian, const QaoaParams& params) {
  return expectation(qaoa_state(hamiltonian, params), hamiltonian);
}

namespace {

constexpr double kInitialStep = 0.5;
constexpr double kFinalStep = 1e-4;
constexpr std::size_t kMaxEvaluationsPerStart = 100000;

QaoaParams unpack(const std::vector<double>& x, std::size_t p) {
  return {std::vector<double>(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(p)),
          std::vector<double>(x.begin() + static_cast<std::ptrdiff_t>(p), x.end())};
}

}  // namespace

QaoaResult qaoa_optimize(const DiagonalHamiltonian& hamiltonian, const QaoaOptions& options) {
  const std::size_t p = options.layers;
  if (p == 0) throw DomainError("QAOA needs at least one layer");

  std::vector<std::vector<double>> starts;
  for (const auto& warm : options.warm_starts) {
    if (warm.betas.size() != p || warm.gammas.size() != p) {
      throw DomainError(fmt::format("warm start has {} layers, expected {}", warm.layers(), p));
    }
    std::vector<double> x = warm.betas;
    x.insert(x.end(), warm.gammas.begin(), warm.gammas.end());
    starts.push_back(std::move(x));
  }
  for (std::size_t r = 0; r < options.restarts; ++r) {
    auto engine = seeded_stream(options.seed, r);
    std::vector<double> x(2 * p);
    for (std::size_t k = 0; k < p; ++k) x[k] = std::numbers::pi * uniform01(engine);
    for (std::size_t k = 0; k < p; ++k) x[p + k] = 2.0 * std::numbers::pi * uniform01(engine);
    starts.push_back(std::move(x));
  }
  if (starts.empty()) throw DomainError("QAOA needs at least one restart or warm start");

  QaoaResult result;
  std::size_t iteration = 0;
  auto objective = [&](const std::vector<double>& x) {
    const double value = qaoa_expectation(hamiltonian, unpack(x, p));
    result.trace.push_back({iteration++, value});
    return value;
  };

  bool have_best = false;
  for (auto x : starts) {
    double fx = objective(x);
    std::size_t evaluations = 1;
    double step = kInitialStep;
    while (step >= kFinalStep && evaluations < kMaxEvaluationsPerStart) {
      bool improved = false;
      for (std::size_t k = 0; k < x.size(); ++k) {
        for (const double direction : {1.0, -1.0}) {
          auto trial = x;
          trial[k] += direction * step;
          const double ft = objective(trial);
          ++evaluations;
          if (ft < fx) {
            x = std::move(trial);
            fx = ft;
            improved = true;
            break;
          }
        }
      }
      if (!improved) step *= 0.5;
    }
    if (!have_best || fx < result.expectation) {
      have_best = true;
      result.expectation = fx;
      result.params = unpack(x, p);
    }
  }
  return result;
}

std::map<std::uint64_t, std::uint64_t> sample(const StateVector& state, std::uint64_t shots,
                                              std::uint64_t seed) {
  if (shots == 0) throw DomainError("shots must be at least 1");
  const auto probs = state.probabilities();
  std::vector<double> cumulative(probs.size());
  double running = 0.0;
  for (std::size_t z = 0; z < probs.size(); ++z) {
    running += probs[z];
    cumulative[z] = running;
  }
  auto engine = seeded_stream(seed, 0);
  std::map<std::uint64_t, std::uint64_t> counts;
  for (std::uint64_t s = 0; s < shots; ++s) {
    const double r = uniform01(engine) * running;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), r);
    // Skip zero-probability entries that share the cumulative value.
    auto z = static_cast<std::uint64_t>(std::min<std::ptrdiff_t>(it - cumulative.begin(),
                                                                 static_cast<std::ptrdiff_t>(probs.size()) - 1));
    while (probs[z] == 0.0 && z > 0) --z;
    ++counts[z];
  }
  return counts;
}

// ---------------------------------------------------------------------------

StateVector adiabatic_evolve(const DiagonalHamiltonian& hamiltonian, const AdiabaticConfig& cfg,
                             const AdiabaticObserver& observer, std::size_t every) {
  if (!(cfg.total_time > 0.0) || !std::isfinite(cfg.total_time)) {
    throw DomainError("total evolution time must be positive");
  }
  if (cfg.steps == 0) throw DomainError("adiabatic evolution needs at least one step");
  if (every == 0) every = 1;
  const Schedule s = cfg.schedule ? cfg.schedule : Schedule([](double tau) { return tau; });
  if (s(0.0) != 0.0 || s(1.0) != 1.0) {
    throw DomainError("schedule must satisfy s(0) = 0 and s(1) = 1");
  }

  const double n = static_cast<double>(cfg.steps);
  const double dt = cfg.total_time / n;
  auto state = StateVector::uniform(hamiltonian.num_qubits());
  if (observer) observer({0, 0.0, 0.0, &state});

  double previous = 0.0;
  for (std::size_t k = 0; k < cfg.steps; ++k) {
    const double mid = s((static_cast<double>(k) + 0.5) / n);
    if (mid < previous || mid > 1.0) throw DomainError("schedule must be monotone within [0, 1]");
    previous = mid;
    apply_mixer(state, (1.0 - mid) * dt);
    apply_phase(state, hamiltonian, mid * dt);
    const std::size_t done = k + 1;
    if (observer && (done % every == 0 || done == cfg.steps)) {
      const double tau = static_cast<double>(done) / n;
      observer({done, tau * cfg.total_time, s(tau), &state});
    }
  }
  return state;
}

double ground_overlap(const StateVector& state, std::span<const std::uint64_t> minimizers) {
  double mass = 0.0;
  for (const auto z : minimizers) {
    if (z >= state.dimension()) {
      throw DomainError(fmt::format("minimizer index {} out of range for dimension {}", z, state.dimension()));
    }
    mass += std::norm(state[z]);
  }
  return std::clamp(mass, 0.0, 1.0);
}

}  // namespace jitq
