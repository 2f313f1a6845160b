#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include <json.hpp>

#include "qnet/field.hpp"

namespace qnet {

/// Weighted multigraph over F_d: symmetric adjacency matrix with entries in
/// [0, d) and zero diagonal. Vertices are 0-indexed internally; the JSON
/// interchange format and all human-facing reports are 1-based.
struct Multigraph {
  i64 d = 2;
  int n = 0;
  std::vector<i64> gamma;  // row-major n*n

  Multigraph() = default;
  Multigraph(i64 d_, int n_) : d(d_), n(n_), gamma(static_cast<size_t>(n_) * n_, 0) {
    if (!is_prime(d_))
      throw std::invalid_argument("graph modulus d must be prime, got " + std::to_string(d_));
    if (n_ < 1) throw std::invalid_argument("graph needs at least one vertex");
  }

  i64& at(int i, int j) { return gamma[static_cast<size_t>(i) * n + j]; }
  i64 at(int i, int j) const { return gamma[static_cast<size_t>(i) * n + j]; }

  void set_edge(int i, int j, i64 mult) {
    check_vertex(i);
    check_vertex(j);
    if (i == j) throw std::invalid_argument("self-loops are not allowed");
    i64 m = mod_pos(mult, d);
    at(i, j) = m;
    at(j, i) = m;
  }

  void add_edge(int i, int j, i64 mult) {
    check_vertex(i);
    check_vertex(j);
    if (i == j) throw std::invalid_argument("self-loops are not allowed");
    set_edge(i, j, at(i, j) + mult);
  }

  bool operator==(const Multigraph& o) const {
    return d == o.d && n == o.n && gamma == o.gamma;
  }

  void check_vertex(int i) const {
    if (i < 0 || i >= n)
      throw std::out_of_range("vertex index " + std::to_string(i + 1) + " outside 1.." +
                              std::to_string(n));
  }
};

/// Vertices adjacent to i (any nonzero multiplicity), ascending.
inline std::vector<int> neighborhood(const Multigraph& g, int i) {
  g.check_vertex(i);
  std::vector<int> nb;
  for (int j = 0; j < g.n; ++j)
    if (j != i && g.at(i, j) != 0) nb.push_back(j);
  return nb;
}

inline bool is_connected(const Multigraph& g) {
  if (g.n == 0) return false;
  std::vector<char> seen(g.n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int j = 0; j < g.n; ++j)
      if (!seen[j] && g.at(v, j) != 0) {
        seen[j] = 1;
        ++count;
        stack.push_back(j);
      }
  }
  return count == g.n;
}

/// Local complementation at vertex l with weight a:
///   gamma'_ij = gamma_ij + a * gamma_il * gamma_jl   (i != j, diagonal fixed at 0).
/// Edges incident to l are unchanged; lc_apply(l, -a) undoes the move.
inline Multigraph lc_apply(const Multigraph& g, int l, i64 a) {
  g.check_vertex(l);
  Field f(g.d);
  a = f.reduce(a);
  Multigraph out = g;
  for (int i = 0; i < g.n; ++i) {
    if (g.at(i, l) == 0) continue;
    for (int j = i + 1; j < g.n; ++j) {
      if (g.at(j, l) == 0) continue;
      i64 v = f.add(g.at(i, j), f.mul(a, f.mul(g.at(i, l), g.at(j, l))));
      out.at(i, j) = v;
      out.at(j, i) = v;
    }
  }
  return out;
}

/// One move of an LC sequence: vertex is 0-indexed in memory, 1-based in JSON.
struct LcMove {
  int vertex;
  i64 weight;
  bool operator==(const LcMove& o) const { return vertex == o.vertex && weight == o.weight; }
};

inline Multigraph lc_apply(const Multigraph& g, const std::vector<LcMove>& seq) {
  Multigraph out = g;
  for (const auto& m : seq) out = lc_apply(out, m.vertex, m.weight);
  return out;
}

/// Parse the JSON interchange format
///   {"d": 2, "n": 3, "edges": [[1,2,1],[2,3,1]]}
/// Vertices are 1-based; an edge may omit the multiplicity (defaults to 1);
/// repeated edges accumulate mod d; self-loops are rejected.
inline Multigraph graph_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("d") || !j.contains("n"))
    throw std::invalid_argument("graph JSON must be an object with \"d\", \"n\", \"edges\"");
  i64 d = j.at("d").get<i64>();
  int n = j.at("n").get<int>();
  Multigraph g(d, n);
  if (j.contains("edges")) {
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() < 2 || e.size() > 3)
        throw std::invalid_argument("edge entries must be [i, j] or [i, j, multiplicity]");
      int a = e.at(0).get<int>() - 1;
      int b = e.at(1).get<int>() - 1;
      i64 m = e.size() == 3 ? e.at(2).get<i64>() : 1;
      g.add_edge(a, b, m);
    }
  }
  return g;
}

inline Multigraph graph_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("graph JSON parse error: ") + e.what());
  }
  return graph_from_json(j);
}

inline nlohmann::json graph_to_json(const Multigraph& g) {
  nlohmann::json edges = nlohmann::json::array();
  for (int i = 0; i < g.n; ++i)
    for (int j = i + 1; j < g.n; ++j)
      if (g.at(i, j) != 0) edges.push_back({i + 1, j + 1, g.at(i, j)});
  return nlohmann::json{{"d", g.d}, {"n", g.n}, {"edges", edges}};
}

}  // namespace qnet
