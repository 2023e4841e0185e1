#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "jitq/polynomial.hpp"

namespace jitq {

using Spins = std::vector<std::int8_t>;

/// E(s) = offset + sum_i h_i s_i + sum_{i<j} J_ij s_i s_j over s in {-1,+1}^N.
struct IsingModel {
  std::size_t num_spins = 0;
  std::vector<double> h;
  std::map<std::pair<VarIndex, VarIndex>, double> couplings;  // keys have first < second
  double offset = 0.0;

  [[nodiscard]] double energy(const Spins& spins) const;
  friend bool operator==(const IsingModel&, const IsingModel&) = default;
};

/// Substitutes x_i = (1 + s_i) / 2. Requires degree <= 2.
IsingModel to_ising(const PseudoBooleanPolynomial& pbp);

inline double ising_energy(const IsingModel& model, const Spins& spins) {
  return model.energy(spins);
}

/// s_i = 2 x_i - 1
Spins spins_from_bits(const BitString& bits);

}  // namespace jitq
