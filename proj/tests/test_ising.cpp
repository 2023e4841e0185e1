#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "jitq/error.hpp"
#include "jitq/ising.hpp"

using namespace jitq;

TEST_CASE("to_ising worked example") {
  PseudoBooleanPolynomial p(2);
  p.add_term({0, 1}, 3.0);
  p.add_term({0}, -1.0);
  p.add_constant(2.0);
  const auto m = to_ising(p);
  CHECK(m.h == std::vector<double>{0.25, 0.75});
  REQUIRE(m.couplings.size() == 1);
  CHECK(m.couplings.at({0, 1}) == 0.75);
  CHECK(m.offset == 2.25);
  CHECK(m.energy({1, 1}) == 4.0);
  CHECK(m.energy({-1, -1}) == 2.0);
}

TEST_CASE("to_ising of a constant") {
  PseudoBooleanPolynomial p(0);
  p.add_constant(5.0);
  const auto m = to_ising(p);
  CHECK(m.h.empty());
  CHECK(m.couplings.empty());
  CHECK(m.offset == 5.0);
}

TEST_CASE("ising_energy basics and errors") {
  IsingModel zero{3, {0, 0, 0}, {}, 1.5};
  CHECK(ising_energy(zero, {1, -1, 1}) == 1.5);
  IsingModel field{1, {1.0}, {}, 0.0};
  CHECK(ising_energy(field, {-1}) == -1.0);
  CHECK_THROWS_AS((void)ising_energy(field, {0}), DomainError);
  CHECK_THROWS_AS((void)ising_energy(field, {1, 1}), DomainError);
}

TEST_CASE("to_ising rejects cubic terms") {
  PseudoBooleanPolynomial p(3);
  p.add_term({0, 1, 2}, 1.0);
  CHECK_THROWS_AS(to_ising(p), DomainError);
}

TEST_CASE("Ising energy equals the polynomial on every assignment") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 10;
    const auto p = jitq::testing::random_polynomial(rng, n, 30, 2);
    const auto m = to_ising(p);
    for (std::uint64_t z = 0; z < (1U << n); ++z) {
      const auto bits = jitq::testing::bits_from_index(z, n);
      CHECK(std::abs(m.energy(spins_from_bits(bits)) - p.evaluate(bits)) <= 1e-12);
    }
  }
}
