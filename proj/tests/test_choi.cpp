/** @file
 * Choi operators, Kraus extraction, channel validation and dual sets.
 */

#include <catch2/catch_amalgamated.hpp>

#include "qpt/choi.hpp"
#include "qpt/duals.hpp"
#include "qpt/random.hpp"

using namespace qpt;

namespace {
const SpaceLabel kOut = out_wire(1);
const SpaceLabel kIn = in_wire(1);

std::vector<Cmat> operator_basis(long d) {
  std::vector<Cmat> basis;
  for (long i = 0; i < d; ++i)
    for (long j = 0; j < d; ++j) {
      Cmat unit = Cmat::Zero(d, d);
      unit(i, j) = 1.0;
      basis.push_back(unit);
    }
  return basis;
}
}  // namespace

TEST_CASE("choi_from_superoperator") {
  SECTION("identity map has the maximally entangled Choi operator") {
    ChoiOperator c = choi_from_superoperator(
        [](const Cmat& rho) -> Cmat { return rho; }, 2, kOut, kIn);
    CHECK((c.matrix - max_entangled(2)).cwiseAbs().maxCoeff() < 1e-14);
  }

  SECTION("sigma_x conjugation gives the Phi+ Bell operator") {
    ChoiOperator c = choi_from_kraus({pauli_x()}, kOut, kIn);
    Cvec v(4);
    v << 0, 1, 1, 0;
    CHECK((c.matrix - v * v.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
  }

  SECTION("completely depolarising qubit map") {
    ChoiOperator c = choi_from_superoperator(
        [](const Cmat& rho) -> Cmat {
          return rho.trace() * 0.5 * identity(2);
        },
        2, kOut, kIn);
    CHECK((c.matrix - 0.5 * identity(4)).cwiseAbs().maxCoeff() < 1e-14);
    Rng rng(1);
    for (int k = 0; k < 3; ++k) {
      const Cmat rho = random_state(rng, 2);
      CHECK((apply_choi(c, rho) - 0.5 * identity(2)).cwiseAbs().maxCoeff() <
            1e-12);
    }
  }
}

TEST_CASE("apply_choi") {
  Rng rng(2);

  SECTION("identity Choi acts as the identity") {
    ChoiOperator c{max_entangled(3), WireList::single(kOut, 3),
                   WireList::single(kIn, 3)};
    const Cmat rho = random_state(rng, 3);
    CHECK((apply_choi(c, rho) - rho).cwiseAbs().maxCoeff() < 1e-13);
  }

  SECTION("bit flip on |0><0|") {
    ChoiOperator c = choi_from_kraus({pauli_x()}, kOut, kIn);
    CHECK((apply_choi(c, basis_proj(2, 0)) - basis_proj(2, 1))
              .cwiseAbs()
              .maxCoeff() < 1e-14);
  }

  SECTION("random CPTP Choi action matches the Kraus oracle") {
    for (int k = 0; k < 5; ++k) {
      ChoiOperator c = random_cptp_choi(rng, 2, kOut, kIn);
      KrausSet ks = kraus_from_choi(c);
      for (const auto& basis : operator_basis(2))
        CHECK((apply_choi(c, basis) - ks.apply(basis)).cwiseAbs().maxCoeff() <
              1e-9);
    }
  }
}

TEST_CASE("kraus_from_choi") {
  SECTION("unitary channel has a single Kraus operator") {
    ChoiOperator c{max_entangled(2), WireList::single(kOut, 2),
                   WireList::single(kIn, 2)};
    KrausSet ks = kraus_from_choi(c);
    REQUIRE(ks.operators.size() == 1);
    // equals the identity up to a global phase
    Complex phase = ks.operators[0](0, 0);
    CHECK((ks.operators[0] - phase * identity(2)).cwiseAbs().maxCoeff() < 1e-12);
  }

  SECTION("depolarising channel has four Kraus operators summing to 1") {
    ChoiOperator c{0.5 * identity(4), WireList::single(kOut, 2),
                   WireList::single(kIn, 2)};
    KrausSet ks = kraus_from_choi(c);
    CHECK(ks.operators.size() == 4);
    CHECK(ks.trace_preserving(1e-10));
  }

  SECTION("rank-2 dephasing map yields exactly 2 Kraus operators") {
    const double p = 0.25;
    ChoiOperator c = choi_from_superoperator(
        [&](const Cmat& rho) -> Cmat {
          return (1 - p) * rho + p * pauli_z() * rho * pauli_z();
        },
        2, kOut, kIn);
    CHECK(kraus_from_choi(c).operators.size() == 2);
  }

  SECTION("non-positive input is rejected") {
    ChoiOperator c{kron(pauli_z(), identity(2)), WireList::single(kOut, 2),
                   WireList::single(kIn, 2)};
    CHECK_THROWS_AS(kraus_from_choi(c), PositivityError);
  }

  SECTION("round trip through the Kraus action for d in {2, 3}") {
    Rng rng(3);
    for (long d : {2L, 3L}) {
      for (int k = 0; k < 10; ++k) {
        ChoiOperator c = random_cptp_choi(rng, d, kOut, kIn);
        KrausSet ks = kraus_from_choi(c);
        ChoiOperator back = choi_from_superoperator(
            [&](const Cmat& rho) { return ks.apply(rho); }, d, kOut, kIn);
        CHECK((back.matrix - c.matrix).cwiseAbs().maxCoeff() < 1e-9);
      }
    }
  }
}

TEST_CASE("validate_channel") {
  SECTION("identity channel") {
    ChoiOperator c{max_entangled(2), WireList::single(kOut, 2),
                   WireList::single(kIn, 2)};
    ChannelReport rep = validate_channel(c);
    CHECK(rep.cp);
    CHECK(rep.tp);
    CHECK(rep.trace_nonincreasing);
  }

  SECTION("the transposition map is TP but not CP") {
    // Its Choi operator is the SWAP matrix.
    ChoiOperator c{swap_gate(2), WireList::single(kOut, 2),
                   WireList::single(kIn, 2)};
    ChannelReport rep = validate_channel(c);
    CHECK_FALSE(rep.cp);
    CHECK(rep.tp);
  }

  SECTION("subnormalised CP element") {
    ChoiOperator c{0.5 * max_entangled(2), WireList::single(kOut, 2),
                   WireList::single(kIn, 2)};
    ChannelReport rep = validate_channel(c);
    CHECK(rep.cp);
    CHECK_FALSE(rep.tp);
    CHECK(rep.trace_nonincreasing);
  }

  SECTION("Stinespring constructions are always CPTP") {
    Rng rng(4);
    for (int k = 0; k < 20; ++k) {
      ChoiOperator c = random_cptp_choi(rng, 2, kOut, kIn);
      ChannelReport rep = validate_channel(c);
      CHECK(rep.cp);
      CHECK(rep.tp);
    }
  }
}

TEST_CASE("build_dual_set") {
  SECTION("reference qubit basis and its duals") {
    Cmat r1(2, 2), r2(2, 2), r3(2, 2), r4(2, 2);
    r1 << 0.5, 0.5, 0.5, 0.5;
    r2 << 0.5, Complex(0, -0.5), Complex(0, 0.5), 0.5;
    r3 << 1, 0, 0, 0;
    r4 << 0.5, -0.5, -0.5, 0.5;
    DualSet ds = build_dual_set({r1, r2, r3, r4});

    Cmat d1(2, 2), d2(2, 2), d3(2, 2), d4(2, 2);
    d1 << 0, Complex(0.5, 0.5), Complex(0.5, -0.5), 1;
    d2 << 0, Complex(0, -1), Complex(0, 1), 0;
    d3 << 1, 0, 0, -1;
    d4 << 0, Complex(-0.5, 0.5), Complex(-0.5, -0.5), 1;
    const std::vector<Cmat> expected = {d1, d2, d3, d4};
    for (int i = 0; i < 4; ++i)
      CHECK((ds.duals[i] - expected[i]).cwiseAbs().maxCoeff() < 1e-10);
  }

  SECTION("orthonormal bases are self-dual") {
    std::vector<Cmat> basis;
    for (int i = 0; i < 4; ++i) basis.push_back(pauli(i) / std::sqrt(2.0));
    DualSet ds = build_dual_set(basis);
    for (int i = 0; i < 4; ++i)
      CHECK((ds.duals[i] - basis[i]).cwiseAbs().maxCoeff() < 1e-10);
  }

  SECTION("biorthogonality for random bases in d = 2, 3") {
    Rng rng(5);
    for (long d : {2L, 3L}) {
      std::vector<Cmat> basis;
      for (long k = 0; k < d * d; ++k) basis.push_back(random_state(rng, d));
      DualSet ds = build_dual_set(basis);
      for (long i = 0; i < d * d; ++i)
        for (long j = 0; j < d * d; ++j) {
          const Complex ip = (ds.duals[i].adjoint() * basis[j]).trace();
          CHECK(std::abs(ip - (i == j ? 1.0 : 0.0)) < 1e-10);
        }
      // Reconstruction is exact on the span.
      const Cmat m = random_ginibre(rng, d, d);
      CHECK((reconstruct_from_duals(ds, m) - m).cwiseAbs().maxCoeff() < 1e-9);
    }
  }

  SECTION("rank-deficient bases are rejected") {
    std::vector<Cmat> basis = {identity(2), pauli_x(), pauli_x(), pauli_z()};
    CHECK_THROWS_AS(build_dual_set(basis), LinearDependenceError);
  }
}
