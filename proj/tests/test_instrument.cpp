/** @file
 * Instruments: the tetrahedral POVM, causal breaks, Bell instrument and
 * validity reports.
 */

#include <catch2/catch_amalgamated.hpp>

#include "qpt/instrument.hpp"
#include "qpt/memory.hpp"
#include "qpt/random.hpp"

using namespace qpt;

TEST_CASE("tetrahedral POVM") {
  Instrument povm = tetrahedral_povm(in_wire(1));

  SECTION("elements sum to the identity") {
    CHECK((povm.sum().matrix - identity(2)).cwiseAbs().maxCoeff() < 1e-12);
  }

  SECTION("all element traces are equal (tr 1 / 4 each)") {
    for (std::size_t b = 0; b < 4; ++b)
      CHECK(povm.element(b).matrix.trace().real() ==
            Catch::Approx(0.5).margin(1e-14));
  }

  SECTION("pairwise overlaps are symmetric") {
    const double ref =
        (povm.element(0).matrix * povm.element(1).matrix).trace().real();
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t b = a + 1; b < 4; ++b)
        CHECK((povm.element(a).matrix * povm.element(b).matrix).trace().real() ==
              Catch::Approx(ref).margin(1e-14));
  }

  SECTION("duals are biorthogonal to the elements") {
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        CHECK(std::abs((tetrahedral_dual(a).adjoint() *
                        tetrahedral_element(b)).trace() -
                       (a == b ? 1.0 : 0.0)) < 1e-12);
  }

  SECTION("build_dual_set reproduces the closed-form duals") {
    std::vector<Cmat> basis;
    for (int b = 0; b < 4; ++b) basis.push_back(tetrahedral_element(b));
    DualSet ds = build_dual_set(basis);
    for (int b = 0; b < 4; ++b)
      CHECK((ds.duals[b] - tetrahedral_dual(b)).cwiseAbs().maxCoeff() < 1e-10);
  }

  SECTION("validates as a POVM") {
    CHECK(validate_instrument(povm).valid());
  }
}

TEST_CASE("causal break instruments") {
  SECTION("trivial POVM with a single preparation") {
    Instrument trivial;
    trivial.kind = Instrument::Kind::Povm;
    trivial.elements.emplace_back("", effect_choi(identity(2), in_wire(1)));
    Instrument cb = causal_break_instrument(trivial, {{1.0, basis_proj(2, 0)}},
                                            out_wire(1));
    REQUIRE(cb.size() == 1);
    CHECK((cb.element(0).matrix - kron(basis_proj(2, 0), identity(2)))
              .cwiseAbs()
              .maxCoeff() < 1e-14);
    CHECK(validate_instrument(cb).valid());
  }

  SECTION("tetrahedral POVM with uniform IC preparations: 16 valid elements") {
    Instrument cb = standard_causal_break(out_wire(1), in_wire(1));
    CHECK(cb.size() == 16);
    CHECK(validate_instrument(cb).valid());
  }

  SECTION("trace bookkeeping for a two-state preparation ensemble") {
    Cvec k0 = basis_ket(2, 0), k1 = basis_ket(2, 1);
    Instrument z = projective_povm({k0, k1}, in_wire(1));
    Instrument cb = causal_break_instrument(
        z, {{0.5, basis_proj(2, 0)}, {0.5, basis_proj(2, 1)}}, out_wire(1));
    CHECK(cb.size() == 4);
    for (std::size_t i = 0; i < 4; ++i)
      CHECK(cb.element(i).matrix.trace().real() ==
            Catch::Approx(0.5).margin(1e-14));
  }

  SECTION("bad preparation probabilities are rejected") {
    Instrument z = projective_povm({basis_ket(2, 0), basis_ket(2, 1)}, in_wire(1));
    CHECK_THROWS_AS(
        causal_break_instrument(z, {{0.7, basis_proj(2, 0)}}, out_wire(1)),
        NormalizationError);
  }
}

TEST_CASE("bell instrument") {
  Instrument bell = bell_instrument(out_wire(1), in_wire(2));

  SECTION("sums to the Choi of the Bell-dephasing channel") {
    const ChoiOperator s = bell.sum();
    CHECK((s.matrix - 0.5 * identity(4)).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(validate_instrument(bell).valid());
  }

  SECTION("a lone subnormalised element is not an instrument") {
    Instrument bad;
    bad.kind = Instrument::Kind::Instrument;
    ChoiOperator el{0.6 * max_entangled(2), WireList::single(out_wire(1), 2),
                    WireList::single(in_wire(1), 2)};
    bad.elements.emplace_back("x", std::move(el));
    CHECK_FALSE(validate_instrument(bad).valid());
  }
}

TEST_CASE("instrument sums are deterministic on states") {
  // For every valid instrument the outcome probabilities over any unit-trace
  // input sum to one.
  Rng rng(9);
  Instrument cb = standard_causal_break(out_wire(1), in_wire(1));
  for (int k = 0; k < 5; ++k) {
    const Cmat rho = random_state(rng, 2);
    double total = 0.0;
    for (std::size_t i = 0; i < cb.size(); ++i) {
      ChoiOperator el = cb.element(i);
      total += apply_choi(el, rho).trace().real();
    }
    CHECK(total == Catch::Approx(1.0).margin(1e-10));
  }
}

TEST_CASE("identity and noise instruments") {
  Instrument id = identity_instrument({{Wire{out_wire(1), 2}, Wire{in_wire(1), 2}}});
  CHECK((id.element(0).matrix - max_entangled(2)).cwiseAbs().maxCoeff() == 0.0);
  CHECK(validate_instrument(id).valid());

  Instrument noise =
      noise_instrument({Wire{out_wire(1), 2}}, {Wire{in_wire(1), 2}});
  CHECK((noise.element(0).matrix - 0.5 * identity(4)).cwiseAbs().maxCoeff() ==
        0.0);
  CHECK(validate_instrument(noise).valid());
}
