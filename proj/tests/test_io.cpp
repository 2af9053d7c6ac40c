/** @file
 * JSON round trips for process tensors, instruments and distributions.
 */

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>

#include "qpt/io.hpp"
#include "qpt/models.hpp"
#include "qpt/random.hpp"

using namespace qpt;

TEST_CASE("process tensor JSON round trip is bit-exact") {
  Rng rng(61);
  std::vector<SEStep> steps = {se_unitary(random_unitary(rng, 4)),
                               se_unitary(random_unitary(rng, 4))};
  ProcessTensor p = build_from_dilation_fresh(random_state(rng, 2), 2, steps);

  Json j = process_to_json(p, Json{{"model", "test"}});
  const std::string text = j.dump();
  ProcessTensor q = process_from_json(Json::parse(text));

  REQUIRE(q.matrix.rows() == p.matrix.rows());
  for (long c = 0; c < p.matrix.cols(); ++c)
    for (long r = 0; r < p.matrix.rows(); ++r) {
      CHECK(q.matrix(r, c).real() == p.matrix(r, c).real());
      CHECK(q.matrix(r, c).imag() == p.matrix(r, c).imag());
    }
  CHECK(q.wires.str() == p.wires.str());
  CHECK(q.n_steps == p.n_steps);
}

TEST_CASE("instrument JSON round trip") {
  Instrument cb = standard_causal_break(out_wire(2), in_wire(2));
  Json j = instrument_to_json(cb);
  Instrument back = instrument_from_json(j);
  REQUIRE(back.size() == cb.size());
  CHECK(back.kind == cb.kind);
  for (std::size_t i = 0; i < cb.size(); ++i) {
    CHECK(back.label(i) == cb.label(i));
    CHECK((back.element(i).matrix - cb.element(i).matrix).cwiseAbs().maxCoeff() ==
          0.0);
  }
}

TEST_CASE("distribution JSON round trip") {
  JointDistribution d = parity_bits_distribution();
  JointDistribution back = distribution_from_json(distribution_to_json(d));
  CHECK(back.alphabet_sizes == d.alphabet_sizes);
  CHECK(back.probs == d.probs);
}

TEST_CASE("malformed inputs are rejected") {
  CHECK_THROWS(process_from_json(Json::parse(R"({"wires": []})")));
  CHECK_THROWS(wires_from_json(Json::parse(R"([{"t":1,"dir":"x","dim":2}])")));
  Json bad = Json::parse(R"({"dim": 2, "data": [[1,0]]})");
  CHECK_THROWS_AS(matrix_from_json(bad), DimensionError);
}
