#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <queue>

#include "helpers.hpp"
#include "qnet/standard_form.hpp"

using namespace qnet;

namespace {

// Independent orbit scan used to cross-check standardize_min_beta: plain BFS
// over all LC moves, collecting the smallest index over all standard pairs.
i64 oracle_min_beta(const Multigraph& start) {
  std::map<std::vector<i64>, bool> seen;
  std::queue<Multigraph> todo;
  todo.push(start);
  seen[start.gamma] = true;
  i64 best = -1;
  while (!todo.empty()) {
    Multigraph g = todo.front();
    todo.pop();
    for (int v1 = 0; v1 < g.n; ++v1)
      for (int v2 = 0; v2 < g.n; ++v2)
        if (v1 != v2 && g.at(v1, v2) != 0 && is_standard(g, v1, v2)) {
          i64 b = index_beta(g, v1, v2);
          if (best < 0 || b < best) best = b;
        }
    for (int l = 0; l < g.n; ++l)
      for (i64 a = 1; a < g.d; ++a) {
        Multigraph next = lc_apply(g, l, a);
        if (!seen.count(next.gamma)) {
          seen[next.gamma] = true;
          todo.push(next);
        }
      }
  }
  return best;
}

}  // namespace

TEST_CASE("standard predicate and index on the fixtures") {
  auto a = qnet::testing::beta1_fixture();
  CHECK(is_standard(a, 0, 1));
  CHECK(index_beta(a, 0, 1) == 1);

  auto b = qnet::testing::beta5_fixture();
  CHECK(is_standard(b, 0, 1));
  CHECK(index_beta(b, 0, 1) == 5);

  Multigraph k3(2, 3);
  k3.set_edge(0, 1, 1);
  k3.set_edge(0, 2, 1);
  k3.set_edge(1, 2, 1);
  CHECK_FALSE(is_standard(k3, 0, 1));  // the third vertex stays tied to v2

  CHECK_THROWS_AS(index_beta(a, 1, 2), std::domain_error);  // not adjacent
  Multigraph tiny(2, 2);
  tiny.set_edge(0, 1, 1);
  CHECK_THROWS_AS(is_standard(tiny, 0, 1), std::domain_error);  // n < 3
}

TEST_CASE("standardize the qubit triangle") {
  Multigraph k3(2, 3);
  k3.set_edge(0, 1, 1);
  k3.set_edge(0, 2, 1);
  k3.set_edge(1, 2, 1);

  auto res = standardize(k3);
  REQUIRE(res.moves.size() == 1);
  CHECK(res.moves[0].vertex == 0);
  CHECK(res.moves[0].weight == 1);
  CHECK(res.v1 == 0);
  CHECK(res.v2 == 1);
  CHECK(res.beta == 1);
  CHECK(res.graph.at(1, 2) == 0);
  CHECK(lc_apply(k3, res.moves) == res.graph);
}

TEST_CASE("already standard graphs pass through untouched") {
  for (const auto& g : {qnet::testing::beta1_fixture(), qnet::testing::beta5_fixture()}) {
    auto res = standardize(g);
    CHECK(res.moves.empty());
    CHECK(res.v1 == 0);
    CHECK(res.v2 == 1);
    CHECK(res.graph == g);
  }
  CHECK(standardize(qnet::testing::beta5_fixture()).beta == 5);
}

TEST_CASE("standardize terminates with a replayable certificate") {
  std::mt19937_64 rng(42);
  for (i64 d : {2, 3, 5}) {
    for (int trial = 0; trial < 120; ++trial) {
      int n = 3 + static_cast<int>(rng() % 5);  // 3..7
      auto g = qnet::testing::random_connected_multigraph(rng, n, d);
      auto res = standardize(g);
      CHECK(is_standard(res.graph, res.v1, res.v2));
      CHECK(res.beta % 2 == 1);
      CHECK(res.beta >= 1);
      CHECK(lc_apply(g, res.moves) == res.graph);
      CHECK(is_connected(res.graph));
    }
  }
}

TEST_CASE("exhaustive minimum beta agrees with a plain orbit scan") {
  std::mt19937_64 rng(99);
  for (i64 d : {2, 3}) {
    for (int trial = 0; trial < 12; ++trial) {
      int n = 3 + static_cast<int>(rng() % 3);  // 3..5
      auto g = qnet::testing::random_connected_multigraph(rng, n, d);
      auto res = standardize_min_beta(g);
      CHECK(is_standard(res.graph, res.v1, res.v2));
      CHECK(index_beta(res.graph, res.v1, res.v2) == res.beta);
      CHECK(lc_apply(g, res.moves) == res.graph);
      CHECK(res.beta == oracle_min_beta(g));
      CHECK(res.beta <= standardize(g).beta);
    }
  }
  Multigraph big(2, 7);
  for (int i = 0; i + 1 < 7; ++i) big.set_edge(i, i + 1, 1);
  CHECK_THROWS_AS(standardize_min_beta(big), std::domain_error);
}

TEST_CASE("classification tags") {
  SECTION("g0: empty intersection") {
    auto g = qnet::testing::beta1_fixture();
    CHECK(classify(g, 0, 1).tag == GraphClassTag::g0);
  }
  SECTION("g1: every common neighbor breaks the mirror condition") {
    auto g = qnet::testing::beta5_fixture();
    CHECK(classify(g, 0, 1).tag == GraphClassTag::g1);
  }
  SECTION("g2: singleton intersection with mirrored neighborhoods") {
    Multigraph g(2, 4);
    g.set_edge(0, 1, 1);
    g.set_edge(0, 2, 1);
    g.set_edge(0, 3, 1);
    g.set_edge(1, 3, 1);
    auto c = classify(g, 0, 1);
    CHECK(c.tag == GraphClassTag::g2);
    CHECK(c.u == 3);
  }
  SECTION("g3: two mirrored common neighbors with a uniform weight") {
    Multigraph g(2, 5);
    g.set_edge(0, 1, 1);
    g.set_edge(0, 2, 1);
    g.set_edge(0, 3, 1);
    g.set_edge(1, 3, 1);
    g.set_edge(0, 4, 1);
    g.set_edge(1, 4, 1);
    g.set_edge(3, 4, 1);
    auto c = classify(g, 0, 1);
    CHECK(c.tag == GraphClassTag::g3);
    CHECK(c.u == 3);
    CHECK(c.a == 1);
  }
  SECTION("mirrored vertex without a uniform weight is rejected for d = 3") {
    Multigraph g(3, 5);
    g.set_edge(0, 1, 1);
    g.set_edge(0, 2, 1);
    g.set_edge(0, 3, 1);
    g.set_edge(1, 3, 1);
    g.set_edge(0, 4, 1);
    g.set_edge(1, 4, 1);
    g.set_edge(3, 4, 2);
    CHECK_THROWS_AS(classify(g, 0, 1), std::domain_error);
  }
  SECTION("preconditions") {
    Multigraph path(2, 3);
    path.set_edge(0, 1, 1);
    path.set_edge(1, 2, 1);
    CHECK_THROWS_AS(classify(path, 0, 1), std::domain_error);   // |N1 \ N2| = 1
    CHECK_THROWS_AS(classify(path, 0, 2), std::domain_error);   // pair not adjacent
  }
}

TEST_CASE("classification is invariant over the deterministic run's tags") {
  // classify demands its preconditions, so filter the random stream
  std::mt19937_64 rng(5);
  int checked = 0;
  while (checked < 40) {
    auto g = qnet::testing::random_connected_multigraph(rng, 5, 3);
    auto n1 = neighborhood(g, 0);
    if (g.at(0, 1) == 0) continue;
    int outside = 0;
    for (int w : n1)
      if (w != 1 && g.at(1, w) == 0) ++outside;
    if (outside < 1) continue;  // need |N1 \ N2| >= 2 counting v2
    try {
      auto c = classify(g, 0, 1);
      (void)c;
      ++checked;
    } catch (const std::domain_error&) {
      ++checked;  // the d >= 3 gap case is a legal outcome
    }
  }
  SUCCEED();
}
