#include "doctest.h"
#include "support.hpp"

using namespace momentkit;
using mktest::seq;

namespace {

AtomicMeasure two_point() { return AtomicMeasure::make({{Scalar(1), Scalar(1)}, {Scalar(2), Scalar(1)}}); }

}  // namespace

TEST_CASE("moment examples") {
  AtomicMeasure d1 = AtomicMeasure::make({{Scalar(1), Scalar(1)}});
  CHECK(moment(d1, 5) == 1);
  CHECK(moment(two_point(), 3) == 9);
  CHECK(moment(two_point(), -1) == Scalar(3, 2));
  CHECK(moments(two_point(), 0, 3).values == seq({"2", "3", "5", "9"}));
  CHECK(moments(d1, 0, 2).values == seq({"1", "1", "1"}));
  AtomicMeasure m = AtomicMeasure::make({{Scalar(1, 2), Scalar(2)}, {Scalar(1), Scalar(1)}});
  CHECK(moments(m, 0, 2).values == seq({"3", "2", "3/2"}));
  CHECK(moments(two_point(), -2, 1).first_index == -2);
}

TEST_CASE("tilt examples") {
  AtomicMeasure d2 = AtomicMeasure::make({{Scalar(2), Scalar(3)}});
  CHECK(tilt(d2, 1) == AtomicMeasure::make({{Scalar(2), Scalar(6)}}));
  CHECK(tilt(two_point(), -1) == AtomicMeasure::make({{Scalar(1), Scalar(1)}, {Scalar(2), Scalar(1, 2)}}));
  CHECK(tilt(two_point(), 0) == two_point());
}

TEST_CASE("make validates, sorts and merges") {
  AtomicMeasure m = AtomicMeasure::make({{Scalar(2), Scalar(1)}, {Scalar(1), Scalar(1)}, {Scalar(2), Scalar(1)}});
  REQUIRE(m.size() == 2);
  CHECK(m.atoms[0].x == 1);
  CHECK(m.atoms[1].m == 2);
  CHECK_THROWS_AS(AtomicMeasure::make({{Scalar(0), Scalar(1)}}), Error);
  CHECK_THROWS_AS(AtomicMeasure::make({{Scalar(1), Scalar(-1)}}), Error);
}

TEST_CASE("moments agree with a direct power sum on random measures") {
  mktest::Gen g(21);
  for (int trial = 0; trial < 100; ++trial) {
    AtomicMeasure mu = g.measure(int(g.integer(1, 4)), Scalar(1, 10), Scalar(10));
    CHECK(moments(mu, -3, 6).values == mktest::moments_of(mu, -3, 6));
    // t^j (t^k mu) = t^{j+k} mu
    long k = g.integer(-3, 3);
    CHECK(moment(tilt(mu, k), 2) == moment(mu, k + 2));
    CHECK(reproduces(mu, moments(mu, -1, 4)));
  }
}

TEST_CASE("vandermonde masses") {
  auto m = vandermonde_masses({Scalar(1), Scalar(2)}, seq({"2", "3"}));
  CHECK(m == seq({"1", "1"}));
  auto shifted = vandermonde_masses({Scalar(1), Scalar(2)}, seq({"3/2", "2"}), -1);
  CHECK(shifted == seq({"1", "1"}));
}
