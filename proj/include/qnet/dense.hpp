#pragma once
// Dense states and operators on a list of qudit sites.
// Site 0 is the most significant digit of the row-major index.

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qnet/field.hpp"

namespace qnet {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

inline constexpr i64 kDenseCap = i64{1} << 20;

inline i64 total_dim(const std::vector<i64>& dims) {
  i64 total = 1;
  for (i64 d : dims) {
    if (d < 1) throw std::invalid_argument("site dimensions must be positive");
    if (total > kDenseCap / d) throw std::length_error("total dimension exceeds the dense cap (2^20)");
    total *= d;
  }
  return total;
}

struct DenseState {
  std::vector<i64> dims;
  Vec amps;

  DenseState() = default;
  DenseState(std::vector<i64> dims_, Vec amps_) : dims(std::move(dims_)), amps(std::move(amps_)) {
    if (amps.size() != total_dim(dims)) throw std::invalid_argument("amplitude length does not match dims");
  }
};

struct DenseOperator {
  std::vector<i64> dims;
  Mat mat;

  DenseOperator() = default;
  DenseOperator(std::vector<i64> dims_, Mat mat_) : dims(std::move(dims_)), mat(std::move(mat_)) {
    i64 total = total_dim(dims);
    if (mat.rows() != total || mat.cols() != total)
      throw std::invalid_argument("matrix shape does not match dims");
  }
};

inline bool is_normalized(const DenseState& s, double tol = 1e-12) {
  return std::abs(s.amps.norm() - 1.0) <= tol;
}

inline DenseState kron(const DenseState& a, const DenseState& b) {
  std::vector<i64> dims = a.dims;
  dims.insert(dims.end(), b.dims.begin(), b.dims.end());
  Vec amps = Eigen::kroneckerProduct(a.amps, b.amps);
  return DenseState(std::move(dims), std::move(amps));
}

inline DenseOperator kron(const DenseOperator& a, const DenseOperator& b) {
  std::vector<i64> dims = a.dims;
  dims.insert(dims.end(), b.dims.begin(), b.dims.end());
  Mat mat = Eigen::kroneckerProduct(a.mat, b.mat);
  return DenseOperator(std::move(dims), std::move(mat));
}

inline DenseOperator identity_operator(std::vector<i64> dims) {
  i64 total = total_dim(dims);
  return DenseOperator(std::move(dims), Mat::Identity(total, total));
}

// Output site k carries what input site perm[k] carried.
inline DenseState permute_sites(const DenseState& s, const std::vector<int>& perm) {
  int n = static_cast<int>(s.dims.size());
  if (static_cast<int>(perm.size()) != n) throw std::invalid_argument("permutation length mismatch");
  std::vector<bool> hit(n, false);
  std::vector<i64> dims(n);
  for (int k = 0; k < n; ++k) {
    if (perm[k] < 0 || perm[k] >= n || hit[perm[k]]) throw std::invalid_argument("not a permutation");
    hit[perm[k]] = true;
    dims[k] = s.dims[perm[k]];
  }
  std::vector<i64> in_stride(n, 1);
  for (int k = n - 2; k >= 0; --k) in_stride[k] = in_stride[k + 1] * s.dims[k + 1];
  Vec out(s.amps.size());
  std::vector<i64> digit(n);
  for (i64 idx = 0; idx < s.amps.size(); ++idx) {
    i64 rest = idx;
    for (int k = 0; k < n; ++k) {
      digit[k] = rest / in_stride[k];
      rest %= in_stride[k];
    }
    i64 out_idx = 0;
    for (int k = 0; k < n; ++k) out_idx = out_idx * dims[k] + digit[perm[k]];
    out(out_idx) = s.amps(idx);
  }
  return DenseState(std::move(dims), std::move(out));
}

inline void check_same_dims(const std::vector<i64>& a, const std::vector<i64>& b) {
  if (a != b) throw std::invalid_argument("dimension mismatch");
}

inline double fidelity(const DenseState& psi, const DenseState& phi) {
  check_same_dims(psi.dims, phi.dims);
  return std::norm(psi.amps.dot(phi.amps));
}

inline double fidelity(const DenseState& psi, const DenseOperator& rho) {
  check_same_dims(psi.dims, rho.dims);
  cplx v = psi.amps.dot(rho.mat * psi.amps);
  return v.real();
}

inline DenseOperator projector_onto(const DenseState& psi) {
  return DenseOperator(psi.dims, psi.amps * psi.amps.adjoint());
}

// Reduced operator on the kept sites, in their original order.
inline DenseOperator partial_trace(const DenseOperator& op, const std::vector<int>& keep) {
  int n = static_cast<int>(op.dims.size());
  std::vector<bool> kept(n, false);
  for (int k : keep) {
    if (k < 0 || k >= n) throw std::invalid_argument("partial_trace: site out of range");
    if (kept[k]) throw std::invalid_argument("partial_trace: repeated site");
    kept[k] = true;
  }
  std::vector<int> sorted_keep;
  for (int s = 0; s < n; ++s)
    if (kept[s]) sorted_keep.push_back(s);
  if (sorted_keep != keep) throw std::invalid_argument("partial_trace: keep sites must be ordered");
  std::vector<i64> out_dims, traced_dims;
  std::vector<int> traced;
  for (int s = 0; s < n; ++s) {
    if (kept[s]) out_dims.push_back(op.dims[s]);
    else {
      traced.push_back(s);
      traced_dims.push_back(op.dims[s]);
    }
  }
  i64 out_total = total_dim(out_dims);
  i64 tr_total = total_dim(traced_dims);
  std::vector<i64> stride(n, 1);
  for (int s = n - 2; s >= 0; --s) stride[s] = stride[s + 1] * op.dims[s + 1];
  auto full_index = [&](i64 kept_idx, i64 traced_idx) {
    i64 idx = 0;
    for (int s = static_cast<int>(keep.size()) - 1; s >= 0; --s) {
      idx += (kept_idx % out_dims[s]) * stride[keep[s]];
      kept_idx /= out_dims[s];
    }
    for (int s = static_cast<int>(traced.size()) - 1; s >= 0; --s) {
      idx += (traced_idx % traced_dims[s]) * stride[traced[s]];
      traced_idx /= traced_dims[s];
    }
    return idx;
  };
  Mat out = Mat::Zero(out_total, out_total);
  for (i64 r = 0; r < out_total; ++r)
    for (i64 c = 0; c < out_total; ++c) {
      cplx sum = 0.0;
      for (i64 tr = 0; tr < tr_total; ++tr) sum += op.mat(full_index(r, tr), full_index(c, tr));
      out(r, c) = sum;
    }
  return DenseOperator(std::move(out_dims), std::move(out));
}

inline nlohmann::json state_to_json(const DenseState& s) {
  nlohmann::json amps = nlohmann::json::array();
  for (i64 i = 0; i < s.amps.size(); ++i)
    amps.push_back({s.amps(i).real(), s.amps(i).imag()});
  return {{"dims", s.dims}, {"amps", std::move(amps)}};
}

inline DenseState state_from_json(const nlohmann::json& j) {
  std::vector<i64> dims = j.at("dims").get<std::vector<i64>>();
  const auto& amps = j.at("amps");
  Vec v(amps.size());
  for (i64 i = 0; i < static_cast<i64>(amps.size()); ++i)
    v(i) = cplx(amps[i].at(0).get<double>(), amps[i].at(1).get<double>());
  return DenseState(std::move(dims), std::move(v));
}

inline nlohmann::json operator_to_json(const DenseOperator& op) {
  nlohmann::json rows = nlohmann::json::array();
  for (i64 r = 0; r < op.mat.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (i64 c = 0; c < op.mat.cols(); ++c)
      row.push_back({op.mat(r, c).real(), op.mat(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return {{"dims", op.dims}, {"matrix", std::move(rows)}};
}

inline DenseOperator operator_from_json(const nlohmann::json& j) {
  std::vector<i64> dims = j.at("dims").get<std::vector<i64>>();
  const auto& rows = j.at("matrix");
  Mat m(rows.size(), rows.size());
  for (i64 r = 0; r < static_cast<i64>(rows.size()); ++r)
    for (i64 c = 0; c < static_cast<i64>(rows.size()); ++c)
      m(r, c) = cplx(rows[r][c].at(0).get<double>(), rows[r][c].at(1).get<double>());
  return DenseOperator(std::move(dims), std::move(m));
}

}  // namespace qnet
