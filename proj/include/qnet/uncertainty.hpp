#pragma once
// Fine-grained uncertainty machinery for a projector pair with PQP = lambda P:
// the envelope f_lambda, the square-root inequality, the attainable (p, q)
// region, the canonical block decomposition, and the commuting-pair chain.

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

#include "qnet/dense.hpp"
#include "qnet/pauli.hpp"
#include "qnet/rng.hpp"

namespace qnet {

inline double f_lambda(double lambda, double x) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw std::invalid_argument("lambda must lie in (0, 1)");
  if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("x must lie in [0, 1]");
  if (x <= lambda) return 1.0;
  double s = std::sqrt((1.0 - lambda) * x) - std::sqrt(lambda * (1.0 - x));
  return 1.0 - s * s;
}

struct ProjectionPair {
  DenseOperator P, Q;
  double lambda = 0.5;
  i64 blocks = 0;  // R, the number of 2-dim interaction blocks (= rank P)
  i64 c0 = 0;      // common (P, Q) = (0, 0) eigenspace dimension
  i64 c1 = 0;      // common (P, Q) = (0, 1) eigenspace dimension

  // QPQ = lambda Q needs every +1 eigenvector of Q to meet P
  bool symmetric_valid() const { return c1 == 0; }
};

inline bool is_projector(const Mat& m, double tol = 1e-10) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol && (m * m - m).cwiseAbs().maxCoeff() <= tol;
}

inline void validate(const ProjectionPair& pair, double tol = 1e-9) {
  if (!is_projector(pair.P.mat) || !is_projector(pair.Q.mat))
    throw std::invalid_argument("projection pair members must be Hermitian idempotents");
  Mat defect = pair.P.mat * pair.Q.mat * pair.P.mat - pair.lambda * pair.P.mat;
  if (defect.cwiseAbs().maxCoeff() > tol)
    throw std::invalid_argument("projection pair violates PQP = lambda P");
}

// Canonical blocks conjugated by a Haar unitary.  Layout before conjugation:
// R two-dim blocks carrying P0 = diag(1, 0) and
// Q_lambda = [[l, s], [s, 1-l]] with s = sqrt(l(1-l)), then c0 dims where
// both vanish, then c1 dims where only Q acts.
inline ProjectionPair random_projection_pair(Rng& rng, double lambda, i64 R, i64 c0 = 0, i64 c1 = 0) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw std::invalid_argument("lambda must lie in (0, 1)");
  if (R < 1 || c0 < 0 || c1 < 0) throw std::invalid_argument("block counts must be nonnegative, R >= 1");
  i64 dim = 2 * R + c0 + c1;
  Mat P = Mat::Zero(dim, dim), Q = Mat::Zero(dim, dim);
  double s = std::sqrt(lambda * (1.0 - lambda));
  for (i64 k = 0; k < R; ++k) {
    P(2 * k, 2 * k) = 1.0;
    Q(2 * k, 2 * k) = lambda;
    Q(2 * k, 2 * k + 1) = s;
    Q(2 * k + 1, 2 * k) = s;
    Q(2 * k + 1, 2 * k + 1) = 1.0 - lambda;
  }
  for (i64 j = 0; j < c1; ++j) Q(2 * R + c0 + j, 2 * R + c0 + j) = 1.0;
  Mat U = haar_unitary(rng, dim);
  ProjectionPair pair{DenseOperator({dim}, U * P * U.adjoint()), DenseOperator({dim}, U * Q * U.adjoint()),
                      lambda, R, c0, c1};
  validate(pair);
  return pair;
}

// Two noncommuting order-d Weyl strings always interact at lambda = 1/d.
inline ProjectionPair projection_pair_from_strings(const PauliString& g, const PauliString& h) {
  if (commutation_phase(g, h) == 0)
    throw std::invalid_argument("string pair must not commute");
  DenseOperator P = eigenspace_projector(g), Q = eigenspace_projector(h);
  i64 dim = P.mat.rows();
  i64 R = dim / g.d;  // rank of each projector
  ProjectionPair pair{std::move(P), std::move(Q), 1.0 / static_cast<double>(g.d), R, dim - 2 * R, 0};
  validate(pair);
  return pair;
}

struct FigurResult {
  double lhs = 0.0, rhs = 0.0;
  bool holds = false;
};

inline FigurResult figur_check_pq(double lambda, double p, double q) {
  FigurResult r;
  r.lhs = std::sqrt(std::max(0.0, 1.0 - p));
  r.rhs = std::sqrt((1.0 - lambda) * q) - std::sqrt(lambda * (1.0 - q));
  r.holds = r.lhs >= r.rhs - 1e-9;
  return r;
}

inline FigurResult figur_check(const ProjectionPair& pair, const DenseOperator& rho) {
  check_same_dims(pair.P.dims, rho.dims);
  double p = (rho.mat * pair.P.mat).trace().real();
  double q = (rho.mat * pair.Q.mat).trace().real();
  return figur_check_pq(pair.lambda, p, q);
}

inline FigurResult figur_check(const ProjectionPair& pair, const DenseState& psi) {
  check_same_dims(pair.P.dims, psi.dims);
  double p = fidelity(psi, pair.P);
  double q = fidelity(psi, pair.Q);
  return figur_check_pq(pair.lambda, p, q);
}

// The attainable region is the hull of the block ellipse together with the
// common-eigenspace points (0, 0) and (0, 1); its upper and lower envelopes
// are f_lambda and the mirrored 1 - f_{1-lambda}.
inline bool ellipse_region_check(double lambda, double p, double q, double tol = 1e-9) {
  if (!(p >= -tol && p <= 1.0 + tol && q >= -tol && q <= 1.0 + tol)) return false;
  double pc = std::min(1.0, std::max(0.0, p));
  return q <= f_lambda(lambda, pc) + tol && q >= 1.0 - f_lambda(1.0 - lambda, pc) - tol;
}

// QPQ = lambda Q variant: p + q - 2 sqrt(lambda p q) <= 1 - lambda.
inline bool symmetric_figur_check(double lambda, double p, double q, double tol = 1e-9) {
  return p + q - 2.0 * std::sqrt(lambda * p * q) <= 1.0 - lambda + tol;
}

// Eigenvalues of (I-P)Q(I-P) must be 0 (R + c0 times), 1 - lambda (R times)
// and 1 (c1 times); this pins the block structure up to basis.
inline bool pair_spectrum_check(const ProjectionPair& pair, double tol = 1e-8) {
  i64 dim = pair.P.mat.rows();
  Mat comp = Mat::Identity(dim, dim) - pair.P.mat;
  Mat D = comp * pair.Q.mat * comp;
  Eigen::SelfAdjointEigenSolver<Mat> es(D);
  if (es.info() != Eigen::Success) return false;
  i64 zeros = 0, mids = 0, ones = 0;
  for (i64 i = 0; i < dim; ++i) {
    double v = es.eigenvalues()(i);
    if (std::abs(v) <= tol)
      ++zeros;
    else if (std::abs(v - (1.0 - pair.lambda)) <= tol)
      ++mids;
    else if (std::abs(v - 1.0) <= tol)
      ++ones;
    else
      return false;
  }
  return zeros == pair.blocks + pair.c0 && mids == pair.blocks && ones == pair.c1;
}

struct Lemma2Result {
  double joint = 0.0;    // Tr rho |gh>
  double product = 0.0;  // Tr rho |g||h|
  double sum = 0.0;      // Tr rho |g| + Tr rho |h| - 1
  bool holds = false;
};

inline Lemma2Result lemma2_check(const PauliString& g, const PauliString& h, const DenseOperator& rho,
                                 double tol = 1e-9) {
  if (commutation_phase(g, h) != 0) throw std::invalid_argument("lemma 2 needs commuting strings");
  DenseOperator Pg = eigenspace_projector(g);
  DenseOperator Ph = eigenspace_projector(h);
  DenseOperator Pgh = eigenspace_projector(g * h);
  check_same_dims(rho.dims, Pg.dims);
  Lemma2Result r;
  r.joint = (rho.mat * Pgh.mat).trace().real();
  r.product = (rho.mat * Pg.mat * Ph.mat).trace().real();
  double eg = (rho.mat * Pg.mat).trace().real();
  double eh = (rho.mat * Ph.mat).trace().real();
  r.sum = eg + eh - 1.0;
  r.holds = r.joint >= r.product - tol && r.product >= r.sum - tol;
  return r;
}

}  // namespace qnet
