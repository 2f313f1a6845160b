#pragma once
// Qudit graph states and GHZ states as dense vectors.

#include <cmath>

#include "qnet/dense.hpp"
#include "qnet/multigraph.hpp"
#include "qnet/pauli.hpp"

namespace qnet {

// Controlled phase gates CZ^{Gamma_jk} applied to the uniform superposition;
// amplitude of |v> is omega^{sum_{j<k} Gamma_jk v_j v_k} / sqrt(d^n).
inline DenseState graph_state(const Multigraph& G) {
  std::vector<i64> dims(G.n, G.d);
  i64 total = total_dim(dims);
  Vec amps(total);
  double norm = 1.0 / std::sqrt(static_cast<double>(total));
  std::vector<i64> v(G.n, 0);
  for (i64 idx = 0; idx < total; ++idx) {
    i64 rest = idx;
    for (int j = G.n - 1; j >= 0; --j) {
      v[j] = rest % G.d;
      rest /= G.d;
    }
    i64 exponent = 0;
    for (int j = 0; j < G.n; ++j)
      for (int k = j + 1; k < G.n; ++k) exponent = mod_pos(exponent + G.at(j, k) * v[j] * v[k], G.d);
    amps(idx) = norm * std::pow(omega(G.d), static_cast<double>(exponent));
  }
  return DenseState(std::move(dims), std::move(amps));
}

inline DenseState ghz_state(i64 d, int parties = 3) {
  if (d < 2) throw std::invalid_argument("ghz states need d >= 2");
  if (parties < 1) throw std::invalid_argument("ghz states need at least one party");
  std::vector<i64> dims(parties, d);
  i64 total = total_dim(dims);
  Vec amps = Vec::Zero(total);
  i64 stride = 0;
  for (int p = 0; p < parties; ++p) stride = stride * d + 1;
  double norm = 1.0 / std::sqrt(static_cast<double>(d));
  for (i64 i = 0; i < d; ++i) amps(i * stride) = norm;
  return DenseState(std::move(dims), std::move(amps));
}

}  // namespace qnet
