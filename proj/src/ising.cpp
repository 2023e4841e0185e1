#include "jitq/ising.hpp"

#include <fmt/format.h>

#include "jitq/error.hpp"

namespace jitq {

double IsingModel::energy(const Spins& spins) const {
  if (spins.size() != num_spins) {
    throw DomainError(fmt::format("expected {} spins, got {}", num_spins, spins.size()));
  }
  double e = offset;
  for (std::size_t i = 0; i < num_spins; ++i) {
    if (spins[i] != 1 && spins[i] != -1) {
      throw DomainError(fmt::format("spin {} has value {}, expected -1 or +1", i,
                                    static_cast<int>(spins[i])));
    }
    e += h[i] * spins[i];
  }
  for (const auto& [ij, c] : couplings) {
    e += c * spins[ij.first] * spins[ij.second];
  }
  return e;
}

IsingModel to_ising(const PseudoBooleanPolynomial& pbp) {
  if (pbp.degree() > 2) {
    throw DomainError(fmt::format("Ising conversion needs degree <= 2, polynomial has degree {}",
                                  pbp.degree()));
  }
  IsingModel model;
  model.num_spins = pbp.num_vars();
  model.h.assign(model.num_spins, 0.0);
  for (const auto& [vars, c] : pbp.terms()) {
    switch (vars.size()) {
      case 0:
        model.offset += c;
        break;
      case 1:
        model.offset += 0.5 * c;
        model.h[vars[0]] += 0.5 * c;
        break;
      default: {
        const double q = 0.25 * c;
        model.offset += q;
        model.h[vars[0]] += q;
        model.h[vars[1]] += q;
        auto& coupling = model.couplings[{vars[0], vars[1]}];
        coupling += q;
        break;
      }
    }
  }
  std::erase_if(model.couplings, [](const auto& kv) { return kv.second == 0.0; });
  return model;
}

Spins spins_from_bits(const BitString& bits) {
  Spins spins(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) spins[i] = bits[i] ? 1 : -1;
  return spins;
}

}  // namespace jitq
