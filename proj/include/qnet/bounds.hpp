#pragma once
// Closed-form fidelity thresholds for graph states against LOSR networks
// with bipartite sources, plus the older single-pair bound for comparison.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "qnet/standard_form.hpp"

namespace qnet {

namespace detail {

inline void check_bound_args(i64 d, i64 beta) {
  if (!is_prime(d)) throw std::invalid_argument("bound needs a prime dimension d");
  if (beta < 1 || beta % 2 == 0) throw std::invalid_argument("bound needs an odd index beta >= 1");
}

}  // namespace detail

// States with fidelity strictly above this cannot come from bipartite sources.
inline double ub2(i64 d, i64 beta) {
  detail::check_bound_args(d, beta);
  double b = static_cast<double>(beta), dd = static_cast<double>(d);
  double root = 2.0 * std::sqrt(2.0 * b * dd);
  return (1.0 + root + (b + 1.0) * dd) / ((b + 2.0) * dd + root);
}

// Earlier threshold built from a single stabilizer pair.
inline double ub1(i64 d, i64 beta) {
  detail::check_bound_args(d, beta);
  double b = static_cast<double>(beta);
  double gamma = std::sqrt(static_cast<double>(d)) / (std::sqrt(static_cast<double>(d)) + 1.0);
  double s = std::sqrt(b * b + 4.0 * gamma) - b;
  return 1.0 - s * s / 16.0;
}

struct BoundReport {
  i64 d = 2;
  i64 beta = 1;
  double ub2 = 0.0;
  double ub1 = 0.0;
  double improvement = 0.0;  // 1 - ub2/ub1
  double gap_ratio = 0.0;    // (1 - ub2)/(1 - ub1)
};

inline BoundReport compare(i64 d, i64 beta) {
  BoundReport r;
  r.d = d;
  r.beta = beta;
  r.ub2 = ub2(d, beta);
  r.ub1 = ub1(d, beta);
  r.improvement = 1.0 - r.ub2 / r.ub1;
  r.gap_ratio = (1.0 - r.ub2) / (1.0 - r.ub1);
  return r;
}

inline BoundReport bound_for_graph(const Multigraph& G) {
  StandardFormResult sf = standardize(G);
  return compare(G.d, sf.beta);
}

// Rows (d, beta, ub1, ub2) over a rectangular grid.
inline std::vector<BoundReport> sweep(const std::vector<i64>& ds, const std::vector<i64>& betas) {
  std::vector<BoundReport> rows;
  rows.reserve(ds.size() * betas.size());
  for (i64 d : ds)
    for (i64 b : betas) rows.push_back(compare(d, b));
  return rows;
}

}  // namespace qnet
