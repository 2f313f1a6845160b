#pragma once
// Tripartite Bell inequalities with two dichotomic settings per party:
// built-in coefficient tensors, classical bounds by strategy enumeration,
// see-saw lower bounds on quantum values, and the triangle-network
// violation table.

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qnet/dense.hpp"
#include "qnet/rng.hpp"
#include "qnet/triangle_protocols.hpp"

namespace qnet {

// Coefficient tensor c[x][y][z] over correlators <A_x B_y C_z>.  Index 0 is
// the identity slot, so marginals live in the same array; c[0][0][0] is a
// constant offset and is zero for every built-in inequality.
struct BellInequality {
  std::string name;
  std::array<std::array<std::array<double, 3>, 3>, 3> coeffs{};
  double classical_bound = 0.0;
  double quantum_bound = 0.0;
};

// Two dichotomic observables per party, indexed [party][setting-1].
struct MeasurementSet {
  std::array<std::array<Mat, 2>, 3> obs;
};

inline double classical_bound(const BellInequality& ineq) {
  double best = -1e300;
  for (int bits = 0; bits < 64; ++bits) {
    double a[3][3];
    for (int p = 0; p < 3; ++p) {
      a[p][0] = 1.0;
      a[p][1] = (bits >> (2 * p)) & 1 ? -1.0 : 1.0;
      a[p][2] = (bits >> (2 * p + 1)) & 1 ? -1.0 : 1.0;
    }
    double v = 0.0;
    for (int x = 0; x < 3; ++x)
      for (int y = 0; y < 3; ++y)
        for (int z = 0; z < 3; ++z)
          v += ineq.coeffs[x][y][z] * a[0][x] * a[1][y] * a[2][z];
    v -= ineq.coeffs[0][0][0];
    best = std::max(best, v);
  }
  return best;
}

namespace detail {

inline void check_observable(const Mat& o, i64 dim, double tol = 1e-9) {
  if (o.rows() != dim || o.cols() != dim)
    throw std::invalid_argument("observable dimension mismatch");
  if ((o - o.adjoint()).cwiseAbs().maxCoeff() > tol)
    throw std::invalid_argument("observable is not Hermitian");
  if ((o * o - Mat::Identity(dim, dim)).cwiseAbs().maxCoeff() > tol)
    throw std::invalid_argument("observable is not dichotomic");
}

inline void check_measurements(const MeasurementSet& meas, const std::vector<i64>& dims) {
  for (int p = 0; p < 3; ++p)
    for (int s = 0; s < 2; ++s) check_observable(meas.obs[p][s], dims[p]);
}

// Hermitian sign function; eigenvalues within 1e-12 of zero map to +1 so the
// result is deterministic.
inline Mat sign_of(const Mat& f) {
  Mat h = 0.5 * (f + f.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  Eigen::VectorXd s = es.eigenvalues();
  for (i64 i = 0; i < s.size(); ++i) s(i) = s(i) < -1e-12 ? -1.0 : 1.0;
  return es.eigenvectors() * s.asDiagonal() * es.eigenvectors().adjoint();
}

// See-saw replacement rule: sign of the traceless part of the partial
// contraction.  Projecting out the identity component keeps the observables
// genuinely two-outcome (for qubits this is the Bloch-vector update n = f/|f|);
// the raw sign collapses onto +-identity, which just replays deterministic
// classical strategies and can never fall below the classical bound.
inline Mat seesaw_update(const Mat& f) {
  i64 d = f.rows();
  Mat h = 0.5 * (f + f.adjoint());
  h -= (h.trace() / static_cast<double>(d)) * Mat::Identity(d, d);
  return sign_of(h);
}

inline Mat random_observable(Rng& rng, i64 dim) {
  Mat g(dim, dim);
  for (i64 r = 0; r < dim; ++r)
    for (i64 c = 0; c < dim; ++c) g(r, c) = gaussian_cplx(rng);
  return seesaw_update(g + g.adjoint());
}

inline Mat term_operator(const MeasurementSet& meas, const std::vector<i64>& dims,
                         int x, int y, int z, int identity_party = -1) {
  int idx[3] = {x, y, z};
  Mat m = Mat::Identity(1, 1);
  for (int p = 0; p < 3; ++p) {
    Mat o = (idx[p] == 0 || p == identity_party)
                ? Mat(Mat::Identity(dims[p], dims[p]))
                : meas.obs[p][idx[p] - 1];
    m = Eigen::kroneckerProduct(m, o).eval();
  }
  return m;
}

// Partial contraction of rho against the other two parties' observables:
// the matrix F with Tr[O F] equal to the observable-dependent part of the
// objective when party p uses O at setting s.
inline Mat party_contraction(const BellInequality& ineq, const DenseOperator& rho,
                             const MeasurementSet& meas, int p, int s) {
  Mat f = Mat::Zero(rho.dims[p], rho.dims[p]);
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y)
      for (int z = 0; z < 3; ++z) {
        int idx[3] = {x, y, z};
        if (idx[p] != s) continue;
        double w = ineq.coeffs[x][y][z];
        if (w == 0.0) continue;
        Mat m = term_operator(meas, rho.dims, x, y, z, p);
        DenseOperator prod(rho.dims, m * rho.mat);
        f += w * partial_trace(prod, {p}).mat;
      }
  return f;
}

inline Mat bell_operator(const BellInequality& ineq, const MeasurementSet& meas,
                         const std::vector<i64>& dims) {
  i64 total = total_dim(dims);
  Mat b = Mat::Zero(total, total);
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y)
      for (int z = 0; z < 3; ++z) {
        double w = ineq.coeffs[x][y][z];
        if (w == 0.0) continue;
        b += w * term_operator(meas, dims, x, y, z);
      }
  return b;
}

}  // namespace detail

inline double bell_value(const BellInequality& ineq, const DenseOperator& rho,
                         const MeasurementSet& meas) {
  if (rho.dims.size() != 3)
    throw std::invalid_argument("bell_value expects a tripartite state");
  detail::check_measurements(meas, rho.dims);
  double v = 0.0;
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y)
      for (int z = 0; z < 3; ++z) {
        double w = ineq.coeffs[x][y][z];
        if (w == 0.0) continue;
        Mat m = detail::term_operator(meas, rho.dims, x, y, z);
        v += w * (rho.mat * m).trace().real();
      }
  return v;
}

struct SeesawResult {
  double value = 0.0;
  MeasurementSet meas;
};

// Alternating maximization over observables for a fixed state.  Each
// observable is replaced by sign of its partial contraction; sweeps repeat
// until the objective changes by less than 1e-10, best over restarts.
inline SeesawResult seesaw(const BellInequality& ineq, const DenseOperator& rho,
                           const std::vector<i64>& dims, int restarts = 64,
                           std::uint64_t seed = 1) {
  if (dims.size() != 3 || rho.dims != dims)
    throw std::invalid_argument("seesaw expects a tripartite state on the given dims");
  if (std::abs(rho.mat.trace().real() - 1.0) > 1e-9)
    throw std::invalid_argument("seesaw expects a unit-trace density operator");
  if (restarts < 1) throw std::invalid_argument("restarts must be positive");
  SeesawResult best;
  best.value = -1e300;
  for (int restart = 0; restart < restarts; ++restart) {
    Rng rng(seed + static_cast<std::uint64_t>(restart));
    MeasurementSet meas;
    for (int p = 0; p < 3; ++p)
      for (int s = 0; s < 2; ++s) meas.obs[p][s] = detail::random_observable(rng, dims[p]);
    double value = bell_value(ineq, rho, meas);
    for (int sweep = 0; sweep < 500; ++sweep) {
      for (int p = 0; p < 3; ++p)
        for (int s = 1; s <= 2; ++s)
          meas.obs[p][s - 1] = detail::seesaw_update(detail::party_contraction(ineq, rho, meas, p, s));
      double next = bell_value(ineq, rho, meas);
      if (next < value - 1e-9)
        throw std::logic_error("see-saw objective decreased");
      bool done = std::abs(next - value) < 1e-10;
      value = next;
      if (done) break;
    }
    if (value > best.value) {
      best.value = value;
      best.meas = meas;
    }
  }
  return best;
}

// Joint see-saw over the state (top eigenvector of the current Bell
// operator) and the observables; best over restarts.
inline double quantum_max(const BellInequality& ineq, const std::vector<i64>& local_dims,
                          int restarts = 64, std::uint64_t seed = 1) {
  if (local_dims.size() != 3)
    throw std::invalid_argument("quantum_max expects three local dimensions");
  for (i64 d : local_dims)
    if (d < 2) throw std::invalid_argument("local dimensions must be at least 2");
  if (restarts < 1) throw std::invalid_argument("restarts must be positive");
  i64 total = total_dim(local_dims);
  double best = -1e300;
  for (int restart = 0; restart < restarts; ++restart) {
    Rng rng(seed + static_cast<std::uint64_t>(restart));
    MeasurementSet meas;
    for (int p = 0; p < 3; ++p)
      for (int s = 0; s < 2; ++s)
        meas.obs[p][s] = detail::random_observable(rng, local_dims[p]);
    DenseState psi = random_state(rng, local_dims);
    double value = -1e300;
    for (int sweep = 0; sweep < 500; ++sweep) {
      DenseOperator rho = projector_onto(psi);
      for (int p = 0; p < 3; ++p)
        for (int s = 1; s <= 2; ++s)
          meas.obs[p][s - 1] = detail::seesaw_update(detail::party_contraction(ineq, rho, meas, p, s));
      Eigen::SelfAdjointEigenSolver<Mat> es(detail::bell_operator(ineq, meas, local_dims));
      double next = es.eigenvalues()(total - 1);
      psi.amps = es.eigenvectors().col(total - 1);
      if (value > -1e299 && next < value - 1e-9)
        throw std::logic_error("see-saw objective decreased");
      bool done = value > -1e299 && std::abs(next - value) < 1e-10;
      value = next;
      if (done) break;
    }
    best = std::max(best, value);
  }
  return best;
}

namespace detail {

inline BellInequality make_inequality(
    std::string name, double expected_bound, double quantum_ref,
    const std::vector<std::array<double, 4>>& terms) {
  BellInequality b;
  b.name = std::move(name);
  for (const auto& t : terms)
    b.coeffs[static_cast<int>(t[0])][static_cast<int>(t[1])][static_cast<int>(t[2])] = t[3];
  b.classical_bound = classical_bound(b);
  if (std::abs(b.classical_bound - expected_bound) > 1e-12)
    throw std::runtime_error("classical-bound checksum failed for inequality " + b.name);
  b.quantum_bound = quantum_ref;
  return b;
}

}  // namespace detail

// The five two-setting tripartite facet inequalities used in the violation
// table, named by their index in the standard enumeration, plus the two
// genuine-multipartite-nonlocality inequalities g1 and g2.  Each entry is
// validated against its enumerated classical bound at construction time.
inline std::vector<BellInequality> builtin_inequalities() {
  std::vector<BellInequality> out;
  out.push_back(detail::make_inequality("sliwa4", 2.0, 3.65685, {{
      {0, 1, 1, 1}, {0, 1, 2, 1}, {0, 2, 1, 1}, {0, 2, 2, -1},
      {2, 0, 0, -2}, {2, 1, 1, 1}, {2, 1, 2, 1}, {2, 2, 1, 1}, {2, 2, 2, -1},
  }}));
  out.push_back(detail::make_inequality("sliwa5", 3.0, 4.88854, {{
      {0, 0, 1, 1}, {0, 1, 0, 1}, {0, 1, 2, 1}, {0, 2, 1, 1}, {0, 2, 2, -1},
      {1, 0, 0, 1}, {1, 0, 2, 1}, {1, 1, 1, -1}, {1, 1, 2, -1}, {1, 2, 0, 1},
      {1, 2, 1, -1}, {2, 0, 1, 1}, {2, 0, 2, -1}, {2, 1, 0, 1}, {2, 1, 1, -1},
      {2, 2, 0, -1}, {2, 2, 2, 1},
  }}));
  out.push_back(detail::make_inequality("sliwa6", 3.0, 4.65685, {{
      {0, 0, 1, 1}, {0, 1, 0, 1}, {0, 1, 1, 1}, {1, 0, 0, 1}, {1, 0, 2, 1},
      {1, 1, 1, -1}, {1, 1, 2, -1}, {1, 2, 0, 1}, {1, 2, 1, -1}, {2, 0, 1, 1},
      {2, 0, 2, -1}, {2, 1, 0, -1}, {2, 1, 2, 1}, {2, 2, 0, 1}, {2, 2, 1, -1},
  }}));
  out.push_back(detail::make_inequality("sliwa21", 4.0, 5.95546, {{
      {0, 0, 1, 1}, {0, 0, 2, 1}, {0, 1, 0, 1}, {0, 1, 1, 1}, {0, 2, 0, 1},
      {0, 2, 2, -1}, {1, 0, 1, 1}, {1, 0, 2, 1}, {1, 1, 0, 1}, {1, 1, 1, -2},
      {1, 1, 2, -1}, {1, 2, 0, 1}, {1, 2, 1, -1}, {2, 1, 1, 1}, {2, 1, 2, -1},
      {2, 2, 1, -1}, {2, 2, 2, 1},
  }}));
  out.push_back(detail::make_inequality("sliwa40", 6.0, 8.12979, {{
      {0, 0, 1, 2}, {0, 0, 2, 2}, {0, 1, 1, 1}, {0, 1, 2, 1}, {0, 2, 1, 1},
      {0, 2, 2, -1}, {1, 0, 1, 1}, {1, 0, 2, 1}, {1, 1, 0, 2}, {1, 1, 1, -2},
      {1, 1, 2, -2}, {1, 2, 1, 1}, {1, 2, 2, -1}, {2, 0, 0, -2}, {2, 0, 1, 1},
      {2, 0, 2, 1}, {2, 1, 0, -2}, {2, 1, 1, 1}, {2, 1, 2, 1}, {2, 2, 1, 2},
      {2, 2, 2, -2},
  }}));
  out.push_back(detail::make_inequality("g1", 6.0, 6.82507, {{
      {0, 0, 1, 2}, {0, 1, 0, 1}, {0, 1, 1, 1}, {0, 2, 0, 1}, {0, 2, 1, 1},
      {1, 0, 0, 1}, {1, 0, 1, 1}, {1, 1, 0, 1}, {1, 1, 1, -2}, {1, 1, 2, 1},
      {1, 2, 1, -1}, {1, 2, 2, -1}, {2, 0, 0, 1}, {2, 0, 1, 1}, {2, 1, 1, -1},
      {2, 1, 2, -1}, {2, 2, 0, 1}, {2, 2, 1, -2}, {2, 2, 2, 1},
  }}));
  out.push_back(detail::make_inequality("g2", 6.0, 6.56259, {{
      {0, 0, 1, 2}, {0, 1, 0, 2}, {0, 1, 2, 2}, {1, 0, 0, 1}, {1, 0, 1, 1},
      {1, 1, 0, 1}, {1, 1, 1, -2}, {1, 1, 2, -1}, {1, 2, 1, 1}, {1, 2, 2, -1},
      {2, 0, 0, 1}, {2, 0, 1, 1}, {2, 1, 0, 1}, {2, 1, 1, -2}, {2, 1, 2, -1},
      {2, 2, 1, -1}, {2, 2, 2, 1},
  }}));
  return out;
}

struct TableRow {
  std::string name;
  double classical_bound = 0.0;
  double quantum_ref = 0.0;
  std::vector<double> values;
};

struct TableReport {
  std::vector<i64> source_dims;
  std::vector<TableRow> rows;
};

// For each source dimension, optimize the triangle protocol with t = d and
// run the see-saw on its three-qubit output state against every built-in
// inequality.
inline TableReport table1_report(const std::vector<i64>& source_dims,
                                 int restarts = 200, std::uint64_t seed = 1) {
  for (i64 d : source_dims)
    if (d < 2 || d > 4)
      throw std::invalid_argument("table source dimensions must lie in {2,3,4}");
  TableReport report;
  report.source_dims = source_dims;
  std::vector<DenseOperator> states;
  for (i64 d : source_dims)
    states.push_back(protocol1_optimize(static_cast<int>(d)).rho_out);
  for (const BellInequality& ineq : builtin_inequalities()) {
    TableRow row;
    row.name = ineq.name;
    row.classical_bound = ineq.classical_bound;
    row.quantum_ref = ineq.quantum_bound;
    for (const DenseOperator& rho : states)
      row.values.push_back(seesaw(ineq, rho, {2, 2, 2}, restarts, seed).value);
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace qnet
