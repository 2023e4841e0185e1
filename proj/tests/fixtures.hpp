#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "jitq/polynomial.hpp"
#include "jitq/scenario.hpp"

namespace jitq::testing {

inline Sector unit_sector() {
  Sector s;
  s.length = 100.0;
  s.fuel.a = 1.0;
  return s;
}

// 1 sector, s = 100, a = 1, alpha = 1, RTA = 6 (6 variables).
inline RouteScenario ref1() {
  RouteScenario sc;
  sc.sectors = {unit_sector()};
  sc.rta = 6.0;
  sc.alpha = 1.0;
  return sc;
}

// 2 sectors like REF1, RTA = 12 (12 variables).
inline RouteScenario ref2() {
  RouteScenario sc;
  sc.sectors = {unit_sector(), unit_sector()};
  sc.rta = 12.0;
  sc.alpha = 1.0;
  return sc;
}

// Direct physical evaluation of the voyage cost, written independently of the
// library's ground-speed coefficient conversion: each sector is sailed at
// water speed v = w - dv for time t = s / w and burns (a + b v + c v^2 +
// e perp^2) per unit time. Sectors with u = 0 take zero time and are charged
// the finite part s * (b - 2 c dv) of C(v) t as w grows.
inline double physical_cost(const RouteScenario& sc, const std::vector<double>& u) {
  double arrival = 0.0;
  double fuel = 0.0;
  for (std::size_t i = 0; i < sc.sectors.size(); ++i) {
    const auto& sec = sc.sectors[i];
    const auto& f = sec.fuel;
    if (u[i] == 0.0) {
      fuel += sec.length * (f.b - 2.0 * f.c * sec.parallel_flow);
      continue;
    }
    const double w = 1.0 / u[i];
    const double v = w - sec.parallel_flow;
    const double t = sec.length / w;
    arrival += t;
    fuel += (f.a + f.b * v + f.c * v * v + f.e * sec.perp_flow * sec.perp_flow) * t;
  }
  return fuel + sc.alpha * (arrival - sc.rta) * (arrival - sc.rta);
}

// Inverse speeds read from sector-major bits, computed without the library.
inline std::vector<double> inverse_speeds(const BitString& bits, std::size_t sectors, int j_min,
                                          int j_max) {
  const int width = j_max - j_min + 1;
  std::vector<double> u(sectors, 0.0);
  for (std::size_t i = 0; i < sectors; ++i) {
    for (int b = 0; b < width; ++b) {
      if (bits[i * width + b]) u[i] += std::pow(2.0, j_min + b);
    }
  }
  return u;
}

inline BitString bits_from_index(std::uint64_t z, std::size_t n) {
  BitString bits(n);
  for (std::size_t q = 0; q < n; ++q) bits[q] = (z >> q) & 1U;
  return bits;
}

// Random polynomial with `terms` monomials of degree in [1, max_degree] and
// integer-valued coefficients in [-5, 5] plus a constant.
inline PseudoBooleanPolynomial random_polynomial(std::mt19937_64& rng, std::size_t num_vars,
                                                 std::size_t terms, std::size_t max_degree) {
  PseudoBooleanPolynomial p(num_vars);
  std::uniform_int_distribution<std::size_t> var(0, num_vars - 1);
  std::uniform_int_distribution<std::size_t> deg(1, max_degree);
  std::uniform_real_distribution<double> coeff(-5.0, 5.0);
  for (std::size_t t = 0; t < terms; ++t) {
    Monomial m;
    const auto d = std::min(deg(rng), num_vars);
    while (m.size() < d) {
      const auto v = static_cast<VarIndex>(var(rng));
      if (std::find(m.begin(), m.end(), v) == m.end()) m.push_back(v);
    }
    p.add_term(m, std::round(coeff(rng) * 4.0) / 4.0);
  }
  p.add_constant(coeff(rng));
  return p;
}

// Minimum and minimizer indices by plain enumeration with evaluate().
struct Enumerated {
  double best;
  std::vector<std::uint64_t> minimizers;
};

inline Enumerated enumerate(const PseudoBooleanPolynomial& p, double tol = 1e-12) {
  const std::uint64_t count = std::uint64_t{1} << p.num_vars();
  std::vector<double> values(count);
  for (std::uint64_t z = 0; z < count; ++z) values[z] = p.evaluate(bits_from_index(z, p.num_vars()));
  Enumerated e{*std::min_element(values.begin(), values.end()), {}};
  for (std::uint64_t z = 0; z < count; ++z) {
    if (values[z] - e.best <= tol * std::max(1.0, std::abs(e.best))) e.minimizers.push_back(z);
  }
  return e;
}

}  // namespace jitq::testing
