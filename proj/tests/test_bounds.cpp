#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "qnet/bounds.hpp"

using namespace qnet;
using Catch::Matchers::WithinAbs;

namespace {
const std::vector<i64> kPrimes25{2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41,
                                 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};
}

TEST_CASE("threshold values") {
  CHECK_THAT(ub2(2, 1), WithinAbs(0.9, 1e-15));
  CHECK_THAT(ub1(2, 1), WithinAbs(0.957107, 5e-7));
  CHECK_THAT(ub2(1000003, 1), WithinAbs(2.0 / 3.0, 1e-3));
  CHECK_THAT(ub1(1000003, 1), WithinAbs((5.0 + std::sqrt(5.0)) / 8.0, 1e-3));
  CHECK(ub2(3, 5) < 1.0);
  CHECK(ub2(3, 5) < ub1(3, 5));
  for (i64 d : {2, 3, 13, 997}) CHECK(ub1(d, 5) > 0.99);

  CHECK_THROWS_AS(ub2(4, 1), std::invalid_argument);
  CHECK_THROWS_AS(ub2(3, 2), std::invalid_argument);
  CHECK_THROWS_AS(ub1(3, 0), std::invalid_argument);
}

TEST_CASE("comparison report") {
  BoundReport r = compare(2, 1);
  CHECK(r.ub2 < r.ub1);
  CHECK_THAT(r.improvement, WithinAbs(1.0 - 0.9 / ub1(2, 1), 1e-12));
  CHECK_THAT(r.gap_ratio, WithinAbs(0.1 / (1.0 - ub1(2, 1)), 1e-9));

  double limit = (4.0 - std::sqrt(5.0)) / (3.0 * std::sqrt(5.0));
  CHECK_THAT(compare(10007, 1).improvement, WithinAbs(limit, 5e-3));
  CHECK_THAT(compare(1000003, 1).improvement, WithinAbs(limit, 5e-4));

  double prev = 0.0;
  for (i64 beta = 1; beta <= 99; beta += 2) {
    double g = compare(3, beta).gap_ratio;
    CHECK(g > prev);
    prev = g;
  }
  CHECK(prev > 10.0);  // heading off to infinity
}

TEST_CASE("grid shape of the two bounds") {
  for (i64 d : kPrimes25) {
    double prev_in_beta = 0.0;
    for (i64 beta = 1; beta <= 21; beta += 2) {
      double v2 = ub2(d, beta), v1 = ub1(d, beta);
      CHECK(v2 > (static_cast<double>(d) + 1.0) / (2.0 * static_cast<double>(d)));
      CHECK(v2 < 1.0);
      CHECK(v2 < v1);
      CHECK(v2 > prev_in_beta);
      prev_in_beta = v2;
    }
  }
  for (i64 beta = 1; beta <= 21; beta += 2) {
    double prev_in_d = 2.0;
    for (i64 d : kPrimes25) {
      double v2 = ub2(d, beta);
      CHECK(v2 < prev_in_d);
      prev_in_d = v2;
    }
  }
}

TEST_CASE("bounds straight from a graph") {
  auto r1 = bound_for_graph(qnet::testing::beta1_fixture());
  CHECK(r1.beta == 1);
  CHECK_THAT(r1.ub2, WithinAbs(ub2(3, 1), 1e-15));

  auto r5 = bound_for_graph(qnet::testing::beta5_fixture());
  CHECK(r5.beta == 5);
  CHECK_THAT(r5.ub2, WithinAbs(ub2(3, 5), 1e-15));

  Multigraph k3(2, 3);
  k3.set_edge(0, 1, 1);
  k3.set_edge(0, 2, 1);
  k3.set_edge(1, 2, 1);
  auto rk = bound_for_graph(k3);
  CHECK(rk.beta == 1);
  CHECK_THAT(rk.ub2, WithinAbs(0.9, 1e-15));
}

TEST_CASE("sweep emits the full grid") {
  auto rows = sweep({2, 3}, {1, 3, 5});
  REQUIRE(rows.size() == 6);
  CHECK(rows[0].d == 2);
  CHECK(rows[0].beta == 1);
  CHECK(rows[5].d == 3);
  CHECK(rows[5].beta == 5);
  for (const auto& r : rows) CHECK(r.ub2 < r.ub1);
}
