#include <sstream>

#include "anticoherence/catalogue.hpp"
#include "anticoherence/errors.hpp"
#include "anticoherence/random.hpp"
#include "anticoherence/state_io.hpp"
#include "doctest.h"

using namespace ac;

TEST_CASE("pure and mixed round trips") {
  Rng rng(2);
  const auto psi = random_pure_state(SpinQuantumNumber(3), rng);
  const auto doc = parse_state(Json::parse(state_to_json(psi).dump()));
  CHECK(doc.pure);
  CHECK(doc.check.ok());
  CHECK((doc.pure_state().amplitudes() - psi.amplitudes()).norm() < 1e-15);

  const auto rho = random_mixed_state(SpinQuantumNumber(4), rng, 3);
  const auto back = parse_state(Json::parse(state_to_json(rho).dump()));
  CHECK_FALSE(back.pure);
  CHECK(back.spin.two_j() == 4);
  CHECK((back.state().matrix() - rho.matrix()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("format details") {
  std::istringstream in(R"({"matrix": [[0.5, 0], [0, [0.5, 0]]]})");
  const auto doc = read_state(in);
  CHECK(doc.spin.two_j() == 1);
  CHECK(doc.state().purity() == doctest::Approx(0.5));

  const auto src = parse_state(Json{{"two_j", 0}, {"amplitudes", {{1, 0}}}, {"source", {{"catalogue", "x"}, {"lambda", "1/3"}}}});
  REQUIRE(src.source);
  CHECK(src.source->lambda == "1/3");
  CHECK(src.source->two_j == -1);
  CHECK(complex_from_json(Json::parse("[1.5, -2]")) == cplx(1.5, -2));
}

TEST_CASE("malformed documents are rejected") {
  const char* bad[] = {
      R"([1, 2])",
      R"({"two_j": 1})",
      R"({"two_j": 1, "amplitudes": [[1,0]]})",
      R"({"amplitudes": [[1,0],[0,0]]})",
      R"({"two_j": 2, "matrix": [[1,0],[0,0]]})",
      R"({"matrix": [[1,0],[0]]})",
      R"({"two_j": 1, "kind": "mixed", "amplitudes": [[1,0],[0,0]]})",
      R"({"two_j": 1, "amplitudes": [[1,0,0],[0,0]]})",
      R"({"two_j": -1, "matrix": [[1]]})",
  };
  for (const char* text : bad) {
    INFO(text);
    CHECK_THROWS_AS(parse_state(Json::parse(text)), ValidationError);
  }
  std::istringstream junk("{not json");
  CHECK_THROWS_AS(read_state(junk), ValidationError);
}

TEST_CASE("numerical validation") {
  const auto nonpsd = parse_state(Json::parse(R"({"matrix": [[1.2, 0], [0, -0.2]]})"));
  CHECK_FALSE(nonpsd.check.ok());
  CHECK(nonpsd.check.min_eigenvalue == doctest::Approx(-0.2));
  try {
    (void)nonpsd.state();
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(e.min_eigenvalue() == doctest::Approx(-0.2));
  }
  CHECK_NOTHROW((void)nonpsd.state(false));

  const auto nonherm = parse_state(Json::parse(R"({"matrix": [[0.5, [0.1, 0]], [0, 0.5]]})"));
  CHECK_FALSE(nonherm.check.hermitian);
  CHECK_THROWS_AS((void)nonherm.state(), ValidationError);

  const auto unnorm = parse_state(Json::parse(R"({"two_j": 1, "amplitudes": [2, 0]})"));
  CHECK_THROWS_AS((void)unnorm.state(), ValidationError);
  CHECK(unnorm.state(false).purity() == doctest::Approx(1.0));
  // inside the input tolerance
  const auto close = parse_state(Json::parse(R"({"two_j": 1, "amplitudes": [1.000000001, 0]})"));
  CHECK_NOTHROW((void)close.pure_state());
}

TEST_CASE("channel files") {
  const auto spec = parse_channel(Json::parse(R"({"two_j": 2, "f": [0.5, 0.25]})"));
  CHECK(spec.spin.two_j() == 2);
  CHECK(spec.damping(2) == 0.25);
  const auto again = parse_channel(channel_to_json(spec));
  CHECK(again.f == spec.f);
  CHECK_THROWS_AS(parse_channel(Json::parse(R"({"two_j": 2, "f": [0.5]})")), DomainError);
  CHECK_THROWS_AS(parse_channel(Json::parse(R"({"two_j": 2, "f": [1.5, 0]})")), DomainError);
  CHECK_THROWS_AS(parse_channel(Json::parse(R"({"f": [0.5]})")), ValidationError);
  CHECK_THROWS_AS(read_channel_file("/nonexistent/spec.json"), ValidationError);
}
