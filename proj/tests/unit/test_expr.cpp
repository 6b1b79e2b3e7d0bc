#include <cmath>

#include "doctest.h"
#include "gammaflow/expr.hpp"
#include "test_util.hpp"

using namespace gammaflow;

TEST_SUITE("expr") {
  TEST_CASE("polynomials") {
    const auto e = SequenceExpr::parse("(k+1)^3");
    CHECK(e(0) == 1.0);
    CHECK(e(1) == 8.0);
    CHECK(e(2) == 27.0);
    CHECK(SequenceExpr::parse("k+1")(41) == 42.0);
    CHECK(SequenceExpr::parse("1")(1000) == 1.0);
    CHECK(SequenceExpr::parse("2*k - 3/2")(2) == 2.5);
    CHECK(SequenceExpr::parse("-k^2")(3) == -9.0);
  }

  TEST_CASE("precedence and associativity") {
    CHECK(SequenceExpr::parse("1 + 2*3")(0) == 7.0);
    CHECK(SequenceExpr::parse("8/4/2")(0) == 1.0);
    CHECK(SequenceExpr::parse("10-3-2")(0) == 5.0);
    CHECK(SequenceExpr::parse("2*k^2")(3) == 18.0);
  }

  TEST_CASE("exponentials") {
    CHECK(SequenceExpr::parse("2^k")(10) == 1024.0);
    CHECK(SequenceExpr::parse("exp(k)")(1) == doctest::Approx(std::exp(1.0)).epsilon(1e-15));
    CHECK(SequenceExpr::parse("exp(2*k)")(3) == doctest::Approx(std::exp(6.0)).epsilon(1e-15));
  }

  TEST_CASE("the source text is kept") {
    CHECK(SequenceExpr::parse("(k+1)^3").text() == "(k+1)^3");
    CHECK(SequenceExpr::parse("k").as_sequence()(5) == 5.0);
  }

  TEST_CASE("malformed input") {
    for (const auto* bad : {"", "k+", "(k+1", "k^1.5", "k^k^", "x", "2**k", "exp k", "k)"})
      CHECK_ERROR_CODE(SequenceExpr::parse(bad), ErrorCode::ParseError);
  }
}
