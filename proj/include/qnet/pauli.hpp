#pragma once
// Generalized Pauli operators and n-site Pauli strings with phase tracking.
//
// A string is u^p * X^{x_1}Z^{z_1} x ... x X^{x_n}Z^{z_n} where the phase
// unit u is omega for odd d and i for d = 2 (p runs mod d, resp. mod 4).
// With this bookkeeping g^d = 1 holds automatically for odd d; for d = 2 it
// holds iff p = x.z mod 2, which every graph stabilizer product satisfies.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "qnet/dense.hpp"
#include "qnet/multigraph.hpp"

namespace qnet {

inline cplx omega(i64 d) {
  return std::polar(1.0, 2.0 * std::numbers::pi / static_cast<double>(d));
}

inline DenseOperator pauli_x(i64 d) {
  if (d < 2) throw std::invalid_argument("pauli operators need d >= 2");
  Mat m = Mat::Zero(d, d);
  for (i64 i = 0; i < d; ++i) m((i + 1) % d, i) = 1.0;
  return DenseOperator({d}, std::move(m));
}

inline DenseOperator pauli_z(i64 d) {
  if (d < 2) throw std::invalid_argument("pauli operators need d >= 2");
  Mat m = Mat::Zero(d, d);
  for (i64 i = 0; i < d; ++i) m(i, i) = std::pow(omega(d), static_cast<double>(i));
  return DenseOperator({d}, std::move(m));
}

struct PauliString {
  i64 d = 2;
  int n = 0;
  std::vector<i64> x, z;
  i64 phase_exp = 0;  // power of i when d = 2, power of omega otherwise

  i64 phase_mod() const { return d == 2 ? 4 : d; }
  cplx phase() const {
    return std::pow(std::polar(1.0, 2.0 * std::numbers::pi / static_cast<double>(phase_mod())),
                    static_cast<double>(phase_exp));
  }
  bool is_identity() const {
    if (phase_exp != 0) return false;
    for (int j = 0; j < n; ++j)
      if (x[j] != 0 || z[j] != 0) return false;
    return true;
  }
};

inline PauliString identity_string(i64 d, int n) {
  if (!is_prime(d)) throw std::invalid_argument("pauli strings need a prime dimension");
  if (n < 1) throw std::invalid_argument("pauli strings need at least one site");
  PauliString g;
  g.d = d;
  g.n = n;
  g.x.assign(n, 0);
  g.z.assign(n, 0);
  return g;
}

inline PauliString pauli_string(i64 d, std::vector<i64> x, std::vector<i64> z, i64 phase_exp = 0) {
  PauliString g = identity_string(d, static_cast<int>(x.size()));
  if (z.size() != x.size()) throw std::invalid_argument("x and z must have the same length");
  for (int j = 0; j < g.n; ++j) {
    g.x[j] = mod_pos(x[j], d);
    g.z[j] = mod_pos(z[j], d);
  }
  g.phase_exp = mod_pos(phase_exp, g.phase_mod());
  return g;
}

inline PauliString operator*(const PauliString& g, const PauliString& h) {
  if (g.d != h.d || g.n != h.n) throw std::invalid_argument("pauli string shape mismatch");
  PauliString r = identity_string(g.d, g.n);
  i64 cross = 0;  // from commuting each Z^{z_g} past X^{x_h}
  for (int j = 0; j < g.n; ++j) {
    r.x[j] = mod_pos(g.x[j] + h.x[j], g.d);
    r.z[j] = mod_pos(g.z[j] + h.z[j], g.d);
    cross = mod_pos(cross + g.z[j] * h.x[j], g.d);
  }
  i64 unit_per_omega = g.d == 2 ? 2 : 1;
  r.phase_exp = mod_pos(g.phase_exp + h.phase_exp + unit_per_omega * cross, r.phase_mod());
  return r;
}

inline PauliString pauli_power(const PauliString& g, i64 k) {
  if (k < 0) throw std::invalid_argument("negative pauli powers are not supported");
  PauliString r = identity_string(g.d, g.n);
  for (i64 i = 0; i < k; ++i) r = r * g;
  return r;
}

// gh = omega^eta hg
inline i64 commutation_phase(const PauliString& g, const PauliString& h) {
  if (g.d != h.d || g.n != h.n) throw std::invalid_argument("pauli string shape mismatch");
  i64 eta = 0;
  for (int j = 0; j < g.n; ++j) eta = mod_pos(eta + g.z[j] * h.x[j] - g.x[j] * h.z[j], g.d);
  return eta;
}

inline PauliString graph_stabilizer(const Multigraph& G, int i) {
  G.check_vertex(i);
  PauliString g = identity_string(G.d, G.n);
  g.x[i] = 1;
  for (int j = 0; j < G.n; ++j) g.z[j] = G.at(i, j);
  return g;
}

inline DenseOperator to_dense(const PauliString& g) {
  Mat acc = Mat::Constant(1, 1, g.phase());
  std::vector<i64> dims;
  for (int j = 0; j < g.n; ++j) {
    Mat m = Mat::Zero(g.d, g.d);
    for (i64 c = 0; c < g.d; ++c)
      m((c + g.x[j]) % g.d, c) = std::pow(omega(g.d), static_cast<double>(mod_pos(c * g.z[j], g.d)));
    acc = Eigen::kroneckerProduct(acc, m).eval();
    dims.push_back(g.d);
  }
  return DenseOperator(std::move(dims), std::move(acc));
}

// Projector onto the +1 eigenspace, (1/d) sum_k g^k.  Demands g^d = 1.
inline DenseOperator eigenspace_projector(const PauliString& g) {
  if (!pauli_power(g, g.d).is_identity())
    throw std::domain_error("eigenspace projector needs g^d = 1 under the phase convention");
  std::vector<i64> dims(g.n, g.d);
  i64 total = total_dim(dims);
  Mat G = to_dense(g).mat;
  Mat acc = Mat::Identity(total, total);
  Mat sum = Mat::Identity(total, total);
  for (i64 k = 1; k < g.d; ++k) {
    acc = (acc * G).eval();
    sum += acc;
  }
  return DenseOperator(std::move(dims), sum / static_cast<double>(g.d));
}

inline double expectation_projector(const DenseState& psi, const PauliString& g) {
  return fidelity(psi, eigenspace_projector(g));
}

inline double expectation_projector(const DenseOperator& rho, const PauliString& g) {
  DenseOperator P = eigenspace_projector(g);
  check_same_dims(rho.dims, P.dims);
  return (rho.mat * P.mat).trace().real();
}

}  // namespace qnet
