#pragma once
// Seed-driven randomness: Haar unitaries, random states and densities,
// random Pauli strings.  Everything flows from one mt19937_64.

#include <random>

#include "qnet/dense.hpp"
#include "qnet/pauli.hpp"

namespace qnet {

using Rng = std::mt19937_64;

inline cplx gaussian_cplx(Rng& rng) {
  std::normal_distribution<double> n01;
  double re = n01(rng);
  double im = n01(rng);
  return {re, im};
}

// Gaussian matrix, QR, then fix the diagonal phases of R.
inline Mat haar_unitary(Rng& rng, i64 dim) {
  Mat g(dim, dim);
  for (i64 r = 0; r < dim; ++r)
    for (i64 c = 0; c < dim; ++c) g(r, c) = gaussian_cplx(rng);
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ() * Mat::Identity(dim, dim);
  Mat rm = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (i64 j = 0; j < dim; ++j) {
    cplx r = rm(j, j);
    q.col(j) *= std::abs(r) == 0.0 ? 1.0 : r / std::abs(r);
  }
  return q;
}

inline DenseState random_state(Rng& rng, std::vector<i64> dims) {
  i64 total = total_dim(dims);
  Vec v(total);
  for (i64 i = 0; i < total; ++i) v(i) = gaussian_cplx(rng);
  v /= v.norm();
  return DenseState(std::move(dims), std::move(v));
}

inline DenseOperator random_density(Rng& rng, std::vector<i64> dims, i64 rank = 0) {
  i64 total = total_dim(dims);
  if (rank <= 0 || rank > total) rank = total;
  Mat g(total, rank);
  for (i64 r = 0; r < total; ++r)
    for (i64 c = 0; c < rank; ++c) g(r, c) = gaussian_cplx(rng);
  Mat rho = g * g.adjoint();
  rho /= rho.trace();
  return DenseOperator(std::move(dims), std::move(rho));
}

// Uniform x, z; the phase is chosen so that g^d = 1 always holds.
inline PauliString random_pauli_string(Rng& rng, i64 d, int n) {
  PauliString g = identity_string(d, n);
  std::uniform_int_distribution<i64> coeff(0, d - 1);
  for (int j = 0; j < n; ++j) {
    g.x[j] = coeff(rng);
    g.z[j] = coeff(rng);
  }
  if (d == 2) {
    i64 xz = 0;
    for (int j = 0; j < n; ++j) xz += g.x[j] * g.z[j];
    std::uniform_int_distribution<i64> sign(0, 1);
    g.phase_exp = mod_pos(xz + 2 * sign(rng), 4);
  } else {
    std::uniform_int_distribution<i64> ph(0, d - 1);
    g.phase_exp = ph(rng);
  }
  return g;
}

}  // namespace qnet
