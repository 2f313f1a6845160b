#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "qnet/multigraph.hpp"

using namespace qnet;

TEST_CASE("field arithmetic") {
  Field f(5);
  CHECK(f.add(3, 4) == 2);
  CHECK(f.neg(2) == 3);
  CHECK(f.mul(3, 4) == 2);
  CHECK(f.inv(2) == 3);
  CHECK(f.div(1, 4) == 4);
  CHECK_THROWS_AS(Field(6), std::invalid_argument);
  CHECK_THROWS_AS(Field(1), std::invalid_argument);
  CHECK_THROWS_AS(f.inv(0), std::domain_error);
  CHECK(is_prime(2));
  CHECK(is_prime(1000003));
  CHECK_FALSE(is_prime(1000001));
}

TEST_CASE("local complementation on the qubit triangle") {
  Multigraph k3(2, 3);
  k3.set_edge(0, 1, 1);
  k3.set_edge(0, 2, 1);
  k3.set_edge(1, 2, 1);

  Multigraph path = lc_apply(k3, 0, 1);
  CHECK(path.at(0, 1) == 1);
  CHECK(path.at(0, 2) == 1);
  CHECK(path.at(1, 2) == 0);
}

TEST_CASE("local complementation with multiplicities, d = 3") {
  Multigraph g = testing::beta1_fixture();  // gamma_12 = 2, gamma_13 = 1
  CHECK(neighborhood(g, 0) == std::vector<int>{1, 2});

  Multigraph h = lc_apply(g, 0, 1);
  CHECK(h.at(1, 2) == 2);  // 0 + 1*2*1
  CHECK(h.at(0, 1) == 2);  // edges at the center unchanged
  CHECK(h.at(0, 2) == 1);
}

TEST_CASE("lc_apply(l, a) then lc_apply(l, -a) is the identity") {
  std::mt19937_64 rng(2024);
  for (i64 d : {2, 3, 5}) {
    Field f(d);
    for (int trial = 0; trial < 50; ++trial) {
      auto g = testing::random_connected_multigraph(rng, 5, d);
      int l = static_cast<int>(rng() % 5);
      i64 a = 1 + static_cast<i64>(rng() % (d - 1));
      auto back = lc_apply(lc_apply(g, l, a), l, f.neg(a));
      CHECK(back == g);
    }
  }
}

TEST_CASE("lc_apply preserves the center neighborhood and connectivity") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    auto g = testing::random_connected_multigraph(rng, 6, 3);
    int l = static_cast<int>(rng() % 6);
    i64 a = 1 + static_cast<i64>(rng() % 2);
    auto h = lc_apply(g, l, a);
    CHECK(neighborhood(h, l) == neighborhood(g, l));
    CHECK(is_connected(h));
    for (int j = 0; j < 6; ++j) CHECK(h.at(j, j) == 0);
  }
}

TEST_CASE("graph JSON parsing") {
  auto g = graph_from_json_text(R"({"d": 2, "n": 3, "edges": [[1,2,1],[1,3],[2,3,1]]})");
  CHECK(g.d == 2);
  CHECK(g.n == 3);
  CHECK(g.at(0, 1) == 1);
  CHECK(g.at(0, 2) == 1);
  CHECK(g.at(1, 2) == 1);

  SECTION("duplicate edges accumulate mod d") {
    auto h = graph_from_json_text(R"({"d": 3, "n": 2, "edges": [[1,2,2],[1,2,2]]})");
    CHECK(h.at(0, 1) == 1);
    auto z = graph_from_json_text(R"({"d": 2, "n": 2, "edges": [[1,2,1],[2,1,1]]})");
    CHECK(z.at(0, 1) == 0);
  }
  SECTION("multiplicities reduce mod d at parse") {
    auto h = graph_from_json_text(R"({"d": 3, "n": 2, "edges": [[1,2,5]]})");
    CHECK(h.at(0, 1) == 2);
  }
  SECTION("self-loops rejected") {
    CHECK_THROWS_WITH(graph_from_json_text(R"({"d": 2, "n": 2, "edges": [[1,1,1]]})"),
                      Catch::Matchers::ContainsSubstring("self-loop"));
  }
  SECTION("composite modulus rejected with a distinct error") {
    CHECK_THROWS_WITH(graph_from_json_text(R"({"d": 4, "n": 2, "edges": []})"),
                      Catch::Matchers::ContainsSubstring("must be prime"));
  }
  SECTION("vertex range checked") {
    CHECK_THROWS_AS(graph_from_json_text(R"({"d": 2, "n": 2, "edges": [[1,3,1]]})"),
                    std::out_of_range);
    CHECK_THROWS_AS(graph_from_json_text(R"({"d": 2, "n": 2, "edges": [[0,1,1]]})"),
                    std::out_of_range);
  }
  SECTION("malformed JSON reported as invalid_argument") {
    CHECK_THROWS_AS(graph_from_json_text("{"), std::invalid_argument);
  }
}

TEST_CASE("graph JSON round-trip") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    auto g = testing::random_connected_multigraph(rng, 5, 5);
    auto back = graph_from_json(graph_to_json(g));
    CHECK(back == g);
  }
}

TEST_CASE("connectivity") {
  Multigraph g(2, 3);
  g.set_edge(0, 1, 1);
  CHECK_FALSE(is_connected(g));
  g.set_edge(1, 2, 1);
  CHECK(is_connected(g));
}
