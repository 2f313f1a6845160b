#pragma once

#include <random>

#include "qnet/multigraph.hpp"

namespace qnet::testing {

/// Random connected multigraph over F_d: half the vertex pairs carry an edge
/// with a uniform nonzero multiplicity; resampled until connected.
inline Multigraph random_connected_multigraph(std::mt19937_64& rng, int n, i64 d) {
  std::uniform_int_distribution<int> coin(0, 1);
  std::uniform_int_distribution<i64> weight(1, d - 1);
  for (;;) {
    Multigraph g(d, n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (coin(rng)) g.set_edge(i, j, weight(rng));
    if (is_connected(g)) return g;
  }
}

/// Fixture: 3 vertices over F_3 with a double edge 1-2 and a single edge 1-3.
/// N1 = {2, 3}, N1 cap N2 empty, so the pair (1, 2) is already standard, beta 1.
inline Multigraph beta1_fixture() {
  Multigraph g(3, 3);
  g.set_edge(0, 1, 2);
  g.set_edge(0, 2, 1);
  return g;
}

/// Fixture: 6 vertices over F_3; pair (1, 2) shares the two neighbors 4, 5 and
/// every vertex in {1, 4, 5} has an escape neighbor outside N2, so the graph is
/// standard with beta = 5.
inline Multigraph beta5_fixture() {
  Multigraph g(3, 6);
  g.set_edge(0, 1, 1);  // pair
  g.set_edge(0, 2, 1);  // escape neighbor of vertex 1
  g.set_edge(0, 3, 1);
  g.set_edge(1, 3, 1);  // common neighbor 4
  g.set_edge(0, 4, 1);
  g.set_edge(1, 4, 1);  // common neighbor 5
  g.set_edge(3, 5, 1);  // escape for 4
  g.set_edge(4, 5, 1);  // escape for 5
  return g;
}

}  // namespace qnet::testing
