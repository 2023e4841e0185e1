#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <numeric>
#include <numbers>
#include <random>
#include <unsupported/Eigen/MatrixFunctions>

#include "fixtures.hpp"
#include "jitq/error.hpp"
#include "jitq/quantum.hpp"
#include "jitq/random.hpp"
#include "jitq/solvers.hpp"

using namespace jitq;
using std::numbers::pi;

namespace {

DiagonalHamiltonian ref1_hamiltonian() {
  const auto sc = jitq::testing::ref1();
  return build_diagonal(build_linear_qubo(sc, sc.encoding).polynomial);
}

// Dense H(s) = -(1 - s) sum_q X_q + s diag(E).
Eigen::MatrixXcd dense_hamiltonian(const std::vector<double>& energies, double s) {
  const auto dim = static_cast<Eigen::Index>(energies.size());
  const auto n = static_cast<int>(std::countr_zero(energies.size()));
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index z = 0; z < dim; ++z) {
    h(z, z) = s * energies[static_cast<std::size_t>(z)];
    for (int q = 0; q < n; ++q) h(z, z ^ (Eigen::Index{1} << q)) += -(1.0 - s);
  }
  return h;
}

}  // namespace

TEST_CASE("build_diagonal reads bit weights little-endian") {
  PseudoBooleanPolynomial one(1);
  one.add_term({0}, 1.0);
  CHECK(build_diagonal(one).energies() == std::vector<double>{0, 1});

  PseudoBooleanPolynomial two(2);
  two.add_term({0}, 1.0);
  two.add_term({1}, 2.0);
  const auto h = build_diagonal(two);
  CHECK(h.energies() == std::vector<double>{0, 1, 2, 3});
  CHECK(h.min() == 0.0);
  CHECK(h.max() == 3.0);

  CHECK_THROWS_AS(build_diagonal(PseudoBooleanPolynomial(21)), DomainError);
}

TEST_CASE("REF1 diagonal matches the physical cost") {
  const auto h = ref1_hamiltonian();
  REQUIRE(h.dimension() == 64);
  const auto sc = jitq::testing::ref1();
  for (std::uint64_t z = 0; z < 64; ++z) {
    const double u = static_cast<double>(z) / 32.0;
    CHECK(h.energies()[z] == doctest::Approx(jitq::testing::physical_cost(sc, {u})).epsilon(1e-12));
  }
  const auto argmin = std::min_element(h.energies().begin(), h.energies().end()) - h.energies().begin();
  CHECK(argmin == 2);
  CHECK(h.min() == 6.3125);
}

TEST_CASE("rescaled spectrum spans [0, 1] with the same argmin") {
  const auto h = ref1_hamiltonian();
  const auto r = h.rescaled();
  CHECK(r.min() == 0.0);
  CHECK(r.max() == 1.0);
  CHECK(r.energies()[2] == 0.0);
  const auto flat = DiagonalHamiltonian(std::vector<double>(4, 3.0)).rescaled();
  CHECK(flat.energies() == std::vector<double>(4, 0.0));
}

TEST_CASE("init_uniform") {
  const auto s1 = init_uniform(1);
  CHECK(s1[0].real() == doctest::Approx(0.7071067811865476).epsilon(1e-15));
  CHECK(s1[1].real() == doctest::Approx(0.7071067811865476).epsilon(1e-15));
  const auto s2 = init_uniform(2);
  for (std::size_t z = 0; z < 4; ++z) CHECK(s2[z] == Amplitude(0.5, 0.0));
  for (std::size_t n = 0; n <= 12; ++n) CHECK(init_uniform(n).norm() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(init_uniform(21), DomainError);
}

TEST_CASE("apply_phase") {
  const DiagonalHamiltonian h(std::vector<double>{0, 1, 2, 3});
  auto s = init_uniform(2);
  apply_phase(s, h, 0.0);
  for (std::size_t z = 0; z < 4; ++z) CHECK(s[z] == Amplitude(0.5, 0.0));
  apply_phase(s, h, pi);
  const double expected[] = {0.5, -0.5, 0.5, -0.5};
  for (std::size_t z = 0; z < 4; ++z) {
    CHECK(s[z].real() == doctest::Approx(expected[z]).epsilon(1e-14));
    CHECK(std::abs(s[z].imag()) < 1e-14);
    CHECK(std::abs(s[z]) == doctest::Approx(0.5).epsilon(1e-15));
  }
  auto wrong = init_uniform(3);
  CHECK_THROWS_AS(apply_phase(wrong, h, 1.0), DomainError);
}

TEST_CASE("apply_mixer") {
  SUBCASE("beta = 0 is the identity") {
    StateVector s({Amplitude(0.6, 0.0), Amplitude(0.0, 0.8)});
    apply_mixer(s, 0.0);
    CHECK(s[0] == Amplitude(0.6, 0.0));
    CHECK(s[1] == Amplitude(0.0, 0.8));
  }
  SUBCASE("full rotation of |0>") {
    auto s = StateVector::basis(1, 0);
    apply_mixer(s, pi / 2);
    CHECK(std::abs(s[0]) < 1e-15);
    CHECK(std::abs(s[1] - Amplitude(0.0, 1.0)) < 1e-15);
  }
  SUBCASE("uniform state only picks up the phase exp(i N beta)") {
    const double beta = 0.37;
    auto s = init_uniform(4);
    apply_mixer(s, beta);
    const Amplitude expected = 0.25 * std::polar(1.0, 4 * beta);
    for (std::size_t z = 0; z < 16; ++z) CHECK(std::abs(s[z] - expected) < 1e-14);
  }
  SUBCASE("matches the dense transverse-field exponential") {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> g;
    std::vector<Amplitude> amps(8);
    for (auto& a : amps) a = {g(rng), g(rng)};
    double nrm = 0;
    for (const auto& a : amps) nrm += std::norm(a);
    for (auto& a : amps) a /= std::sqrt(nrm);
    StateVector s(amps);
    const double beta = 0.81;
    apply_mixer(s, beta);
    Eigen::VectorXcd v(8);
    for (int z = 0; z < 8; ++z) v(z) = amps[static_cast<std::size_t>(z)];
    const Eigen::MatrixXcd hi = dense_hamiltonian(std::vector<double>(8, 0.0), 0.0);
    const Eigen::VectorXcd w = (std::complex<double>(0, -beta) * hi).exp() * v;
    for (int z = 0; z < 8; ++z) CHECK(std::abs(s[static_cast<std::size_t>(z)] - w(z)) < 1e-12);
  }
}

TEST_CASE("qaoa_expectation") {
  const DiagonalHamiltonian h(std::vector<double>{0, 1, 2, 3});
  CHECK(qaoa_expectation(h, {{0.0}, {0.0}}) == doctest::Approx(1.5));
  const auto r1 = ref1_hamiltonian();
  CHECK(qaoa_expectation(r1, {{0.0, 0.0}, {0.0, 0.0}}) == doctest::Approx(r1.mean()).epsilon(1e-12));

  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    QaoaParams p{{jitq::uniform01(rng) * 7, jitq::uniform01(rng) * 7},
                 {jitq::uniform01(rng) * 0.01, jitq::uniform01(rng) * 5}};
    const double e = qaoa_expectation(r1, p);
    CHECK(e >= r1.min());
    CHECK(e <= r1.max());
    CHECK(qaoa_state(r1, p).norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(qaoa_state(h, {{0.1}, {}}), DomainError);
}

TEST_CASE("qaoa_optimize on a flat landscape terminates at the constant") {
  const DiagonalHamiltonian flat(std::vector<double>(8, 2.5));
  const auto r = qaoa_optimize(flat, {2, 2, 0, {}});
  CHECK(r.expectation == doctest::Approx(2.5));
  CHECK(r.params.layers() == 2);
  CHECK_THROWS_AS(qaoa_optimize(flat, {0, 1, 0, {}}), DomainError);
}

TEST_CASE("qaoa_optimize on REF1") {
  const auto h = ref1_hamiltonian().rescaled();
  const auto p1 = qaoa_optimize(h, {1, 4, 1, {}});
  CHECK(p1.expectation < h.mean());
  CHECK(p1.expectation == doctest::Approx(qaoa_expectation(h, p1.params)).epsilon(1e-12));
  CHECK_FALSE(p1.trace.empty());

  SUBCASE("deterministic") {
    const auto again = qaoa_optimize(h, {1, 4, 1, {}});
    CHECK(again.params == p1.params);
    CHECK(again.expectation == p1.expectation);
  }
  SUBCASE("two layers do at least as well as the padded one-layer optimum") {
    const QaoaParams padded{{p1.params.betas[0], 0.0}, {p1.params.gammas[0], 0.0}};
    const auto p2 = qaoa_optimize(h, {2, 4, 1, {padded}});
    CHECK(p2.expectation <= p1.expectation);
  }
}

TEST_CASE("sample") {
  SUBCASE("basis state") {
    const auto counts = sample(StateVector::basis(3, 5), 1000, 9);
    REQUIRE(counts.size() == 1);
    CHECK(counts.at(5) == 1000);
  }
  SUBCASE("uniform single qubit within 5 sigma") {
    const auto counts = sample(init_uniform(1), 100000, 1);
    CHECK(std::abs(static_cast<double>(counts.at(0)) - 50000.0) < 5 * 158.1);
    CHECK(counts.at(0) + counts.at(1) == 100000);
  }
  SUBCASE("counts sum to shots and repeat for a seed") {
    auto s = init_uniform(4);
    apply_phase(s, DiagonalHamiltonian(std::vector<double>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15}), 0.3);
    apply_mixer(s, 0.4);
    const auto a = sample(s, 777, 3);
    std::uint64_t total = 0;
    for (const auto& [z, c] : a) total += c;
    CHECK(total == 777);
    CHECK(a == sample(s, 777, 3));
  }
  CHECK_THROWS_AS(sample(init_uniform(1), 0, 0), DomainError);
}

TEST_CASE("ground_overlap") {
  CHECK(ground_overlap(init_uniform(6), std::vector<std::uint64_t>{2}) == doctest::Approx(1.0 / 64));
  CHECK(ground_overlap(StateVector::basis(6, 2), std::vector<std::uint64_t>{2}) == 1.0);
  std::vector<std::uint64_t> all(8);
  std::iota(all.begin(), all.end(), 0);
  auto s = init_uniform(3);
  apply_phase(s, DiagonalHamiltonian(std::vector<double>{3, 1, 4, 1, 5, 9, 2, 6}), 0.7);
  apply_mixer(s, 1.1);
  CHECK(ground_overlap(s, all) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(ground_overlap(s, std::vector<std::uint64_t>{8}), DomainError);
}

TEST_CASE("adiabatic_evolve limits") {
  const auto h = ref1_hamiltonian().rescaled();
  SUBCASE("vanishing time leaves the uniform state") {
    const auto s = adiabatic_evolve(h, {1e-9, 1, {}});
    Amplitude overlap = 0;
    for (std::size_t z = 0; z < 64; ++z) overlap += s[z] / 8.0;
    CHECK(std::norm(overlap) >= 0.999);
  }
  SUBCASE("constant problem Hamiltonian keeps the uniform state") {
    const DiagonalHamiltonian flat(std::vector<double>(16, 0.4));
    const auto s = adiabatic_evolve(flat, {50.0, 500, {}});
    Amplitude overlap = 0;
    for (std::size_t z = 0; z < 16; ++z) overlap += s[z] / 4.0;
    CHECK(std::norm(overlap) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("bad configurations") {
    CHECK_THROWS_AS(adiabatic_evolve(h, {0.0, 10, {}}), DomainError);
    CHECK_THROWS_AS(adiabatic_evolve(h, {1.0, 0, {}}), DomainError);
    CHECK_THROWS_AS(adiabatic_evolve(h, {1.0, 10, [](double t) { return 0.5 * t; }}), DomainError);
    CHECK_THROWS_AS(adiabatic_evolve(h, {1.0, 10, [](double t) { return t < 0.5 ? 0.6 - t : t; }}),
                    DomainError);
  }
}

TEST_CASE("split-step evolution converges to the exact time-ordered evolution") {
  // Oracle: products of dense matrix exponentials of H at many fine midpoints.
  const std::vector<double> energies{0.3, 0.0, 1.0, 0.6};
  const double total = 6.0;
  const int fine = 4000;
  Eigen::VectorXcd v = Eigen::VectorXcd::Constant(4, 0.5);
  for (int k = 0; k < fine; ++k) {
    const double s = (k + 0.5) / fine;
    v = (std::complex<double>(0, -total / fine) * dense_hamiltonian(energies, s)).exp() * v;
  }
  const DiagonalHamiltonian h(energies);
  const auto coarse = adiabatic_evolve(h, {total, 400, {}});
  const auto finer = adiabatic_evolve(h, {total, 4000, {}});
  double err_coarse = 0, err_fine = 0;
  for (int z = 0; z < 4; ++z) {
    err_coarse = std::max(err_coarse, std::abs(coarse[static_cast<std::size_t>(z)] - v(z)));
    err_fine = std::max(err_fine, std::abs(finer[static_cast<std::size_t>(z)] - v(z)));
  }
  CHECK(err_fine < 2e-3);
  CHECK(err_fine < err_coarse);
}

TEST_CASE("slow evolution on an open-gap problem ends in the ground state") {
  const DiagonalHamiltonian h(std::vector<double>{0.7, 0.9, 0.0, 1.0, 0.5, 0.8, 0.4, 0.6});
  const auto s = adiabatic_evolve(h, {100.0, 4000, {}});
  CHECK(ground_overlap(s, std::vector<std::uint64_t>{2}) >= 0.9);
}

TEST_CASE("norm is preserved over 10^4 steps at 12 qubits") {
  std::mt19937_64 rng(12);
  std::vector<double> energies(4096);
  for (auto& e : energies) e = jitq::uniform01(rng);
  std::size_t samples = 0;
  double worst = 0.0;
  const auto s = adiabatic_evolve(
      DiagonalHamiltonian(energies), {300.0, 10000, {}},
      [&](const AdiabaticSample& smp) {
        ++samples;
        worst = std::max(worst, std::abs(smp.state->norm() - 1.0));
      },
      1000);
  CHECK(samples == 11);
  CHECK(worst < 1e-9);
  CHECK(std::abs(s.norm() - 1.0) < 1e-9);
}

TEST_CASE("REF1 ground overlap grows along the T ladder") {
  const auto h = ref1_hamiltonian().rescaled();
  const std::vector<std::uint64_t> ground{2};
  double previous = 0.0;
  for (const double T : {1.0, 5.0, 25.0, 125.0}) {
    const double overlap = ground_overlap(adiabatic_evolve(h, {T, 4000, {}}), ground);
    CHECK(overlap >= previous - 0.02);
    previous = overlap;
  }
}
