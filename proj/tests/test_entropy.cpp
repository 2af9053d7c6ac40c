/** @file
 * Entropies, relative entropy, trace distance and mutual information.
 */

#include <catch2/catch_amalgamated.hpp>

#include "qpt/entropy.hpp"
#include "qpt/random.hpp"

using namespace qpt;

namespace {
Cmat diag2(double a, double b) {
  Cmat m = Cmat::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}
}  // namespace

TEST_CASE("von Neumann entropy") {
  Rng rng(1);

  SECTION("pure states have zero entropy") {
    Cvec psi = random_pure_ket(rng, 5);
    CHECK(von_neumann_entropy(psi * psi.adjoint()) < 1e-9);
  }

  SECTION("maximally mixed state of dimension d gives log2 d") {
    for (long d : {2L, 3L, 7L})
      CHECK(von_neumann_entropy(identity(d) / double(d)) ==
            Catch::Approx(std::log2(double(d))).margin(1e-12));
  }

  SECTION("diag(0.3, 0.7)") {
    const double expected = -(0.3 * std::log2(0.3) + 0.7 * std::log2(0.7));
    CHECK(von_neumann_entropy(diag2(0.3, 0.7)) ==
          Catch::Approx(expected).margin(1e-12));
    CHECK(expected == Catch::Approx(0.8813).margin(5e-5));
  }

  SECTION("invariant under permutations and unitary conjugation") {
    Cmat rho = random_state(rng, 8);
    WireList w({Wire{in_wire(3), 2}, Wire{in_wire(2), 2}, Wire{in_wire(1), 2}});
    auto [perm, pw] = permute_subsystems(rho, w, {2, 0, 1});
    CHECK(von_neumann_entropy(perm) ==
          Catch::Approx(von_neumann_entropy(rho)).margin(1e-9));
    const Cmat u = random_unitary(rng, 8);
    CHECK(von_neumann_entropy(u * rho * u.adjoint()) ==
          Catch::Approx(von_neumann_entropy(rho)).margin(1e-9));
  }

  SECTION("errors") {
    CHECK_THROWS_AS(von_neumann_entropy(diag2(1.3, -0.3)), PositivityError);
    CHECK_THROWS_AS(von_neumann_entropy(diag2(0.9, 0.3)), NormalizationError);
  }
}

TEST_CASE("quantum relative entropy") {
  Rng rng(2);

  SECTION("D(rho || rho) = 0") {
    const Cmat rho = random_state(rng, 4);
    CHECK(quantum_relative_entropy(rho, rho) ==
          Catch::Approx(0.0).margin(1e-10));
  }

  SECTION("D(|0><0| || 1/2) = 1 bit") {
    CHECK(quantum_relative_entropy(basis_proj(2, 0), 0.5 * identity(2)) ==
          Catch::Approx(1.0).margin(1e-12));
  }

  SECTION("disjoint support gives +infinity") {
    CHECK(std::isinf(
        quantum_relative_entropy(basis_proj(2, 0), basis_proj(2, 1))));
  }

  SECTION("nonnegative, zero only at equality") {
    for (int k = 0; k < 20; ++k) {
      const Cmat rho = random_state(rng, 3);
      const Cmat sigma = random_state(rng, 3);
      const double d = quantum_relative_entropy(rho, sigma);
      CHECK(d >= -1e-10);
      if (d < 1e-10) CHECK(trace_distance(rho, sigma) <= 1e-8);
    }
  }
}

TEST_CASE("trace distance") {
  Rng rng(3);
  const Cmat rho = random_state(rng, 4);
  CHECK(trace_distance(rho, rho) == 0.0);
  CHECK(trace_distance(basis_proj(2, 0), basis_proj(2, 1)) ==
        Catch::Approx(1.0).margin(1e-14));
  CHECK(trace_distance(diag2(0.6, 0.4), diag2(0.5, 0.5)) ==
        Catch::Approx(0.1).margin(1e-14));
}

TEST_CASE("mutual information") {
  Rng rng(4);
  WireList w({Wire{in_wire(2, "A"), 2}, Wire{in_wire(1, "B"), 2}});

  SECTION("product states carry none") {
    for (int k = 0; k < 5; ++k) {
      const Cmat rho = kron(random_state(rng, 2), random_state(rng, 2));
      CHECK(mutual_information(rho, w, {in_wire(2, "A")}) <= 1e-9);
    }
  }

  SECTION("Bell state carries two bits") {
    CHECK(mutual_information(max_entangled(2) / 2.0, w, {in_wire(2, "A")}) ==
          Catch::Approx(2.0).margin(1e-9));
  }

  SECTION("classically correlated pair carries one bit") {
    Cmat rho = 0.5 * (kron(basis_proj(2, 0), basis_proj(2, 0)) +
                      kron(basis_proj(2, 1), basis_proj(2, 1)));
    CHECK(mutual_information(rho, w, {in_wire(2, "A")}) ==
          Catch::Approx(1.0).margin(1e-9));
  }
}
