#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "jitq/polynomial.hpp"

namespace jitq {

inline constexpr std::size_t kMaxQubits = 20;

using Amplitude = std::complex<double>;

/// Problem Hamiltonian H_P|z> = C(z)|z>. Bit q of the basis index z is
/// variable q (little-endian).
class DiagonalHamiltonian {
 public:
  explicit DiagonalHamiltonian(std::vector<double> energies);

  [[nodiscard]] std::size_t num_qubits() const { return num_qubits_; }
  [[nodiscard]] std::size_t dimension() const { return energies_.size(); }
  [[nodiscard]] const std::vector<double>& energies() const { return energies_; }
  [[nodiscard]] double min() const { return min_; }
  [[nodiscard]] double max() const { return max_; }
  [[nodiscard]] double mean() const;

  /// Affine map of the spectrum onto [0, 1]; a flat spectrum maps to all zeros.
  [[nodiscard]] DiagonalHamiltonian rescaled() const;

 private:
  std::size_t num_qubits_ = 0;
  std::vector<double> energies_;
  double min_ = 0.0;
  double max_ = 0.0;
};

DiagonalHamiltonian build_diagonal(const PseudoBooleanPolynomial& pbp);

class StateVector {
 public:
  explicit StateVector(std::vector<Amplitude> amplitudes);

  static StateVector uniform(std::size_t num_qubits);
  static StateVector basis(std::size_t num_qubits, std::uint64_t index);

  [[nodiscard]] std::size_t num_qubits() const { return num_qubits_; }
  [[nodiscard]] std::size_t dimension() const { return amps_.size(); }
  [[nodiscard]] const std::vector<Amplitude>& amplitudes() const { return amps_; }
  [[nodiscard]] std::vector<Amplitude>& amplitudes() { return amps_; }
  [[nodiscard]] const Amplitude& operator[](std::size_t z) const { return amps_[z]; }
  [[nodiscard]] double norm() const;
  [[nodiscard]] std::vector<double> probabilities() const;

 private:
  std::size_t num_qubits_ = 0;
  std::vector<Amplitude> amps_;
};

inline StateVector init_uniform(std::size_t num_qubits) { return StateVector::uniform(num_qubits); }

/// amplitude[z] *= exp(-i gamma E_z)
void apply_phase(StateVector& state, const DiagonalHamiltonian& hamiltonian, double gamma);

/// exp(-i beta H_I) with H_I = -sum_q X_q: per qubit [[cos b, i sin b], [i sin b, cos b]].
void apply_mixer(StateVector& state, double beta);

double expectation(const StateVector& state, const DiagonalHamiltonian& hamiltonian);

struct QaoaParams {
  std::vector<double> betas;
  std::vector<double> gammas;

  [[nodiscard]] std::size_t layers() const { return betas.size(); }
  friend bool operator==(const QaoaParams&, const QaoaParams&) = default;
};

/// Uniform state followed by p (phase, mixer) layers.
StateVector qaoa_state(const DiagonalHamiltonian& hamiltonian, const QaoaParams& params);
double qaoa_expectation(const DiagonalHamiltonian& hamiltonian, const QaoaParams& params);

struct QaoaOptions {
  std::size_t layers = 1;
  std::size_t restarts = 4;
  std::uint64_t seed = 0;
  /// Extra starting points, searched before the random restarts.
  std::vector<QaoaParams> warm_starts;
};

struct QaoaTracePoint {
  std::size_t iteration = 0;
  double expectation = 0.0;
};

struct QaoaResult {
  QaoaParams params;
  double expectation = 0.0;
  std::vector<QaoaTracePoint> trace;  // one row per objective evaluation
};

/// Cyclic coordinate descent on the angles (steps +-delta, delta halved
/// after a sweep without improvement, 0.5 down to 1e-4) from seeded random
/// starts with beta in [0, pi) and gamma in [0, 2 pi).
QaoaResult qaoa_optimize(const DiagonalHamiltonian& hamiltonian, const QaoaOptions& options);

/// Basis index -> count; counts sum to shots.
std::map<std::uint64_t, std::uint64_t> sample(const StateVector& state, std::uint64_t shots,
                                              std::uint64_t seed);

/// Schedule s(tau) over normalized time tau = t / T.
using Schedule = std::function<double(double)>;

struct AdiabaticConfig {
  double total_time = 1.0;
  std::size_t steps = 1000;
  Schedule schedule;  // empty: linear s(tau) = tau
};

struct AdiabaticSample {
  std::size_t step = 0;
  double time = 0.0;
  double s = 0.0;
  const StateVector* state = nullptr;
};

/// Called after every `every`-th step (and after the final one).
using AdiabaticObserver = std::function<void(const AdiabaticSample&)>;

/// First-order split-step evolution from the uniform state under
/// H(t) = (1 - s) H_I + s H_P, evaluating s at each step's midpoint.
StateVector adiabatic_evolve(const DiagonalHamiltonian& hamiltonian, const AdiabaticConfig& cfg,
                             const AdiabaticObserver& observer = {}, std::size_t every = 1);

/// Probability mass on the given basis indices.
double ground_overlap(const StateVector& state, std::span<const std::uint64_t> minimizers);

}  // namespace jitq
