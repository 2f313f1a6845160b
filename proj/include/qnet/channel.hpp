#pragma once
// Quantum channels for network nodes and the triangle-network simulator.
//
// Triangle wiring: sources are indexed 0, 1, 2 and sit on the edges
// (node1, node2), (node2, node3), (node3, node1).  Each source has two
// slots; slot 1 goes clockwise, slot 2 counterclockwise, so
//   node1 holds (source0 slot1, source2 slot2),
//   node2 holds (source1 slot1, source0 slot2),
//   node3 holds (source2 slot1, source1 slot2).

#include <array>
#include <stdexcept>
#include <vector>

#include "qnet/dense.hpp"

namespace qnet {

struct NodeChannel {
  std::vector<Mat> kraus;  // each out_dim x prod(in_dims)
  std::vector<i64> in_dims;
  i64 out_dim = 0;
};

inline void check_trace_preserving(const NodeChannel& ch, double tol = 1e-10) {
  if (ch.kraus.empty()) throw std::invalid_argument("channel needs at least one Kraus operator");
  i64 in_total = total_dim(ch.in_dims);
  Mat sum = Mat::Zero(in_total, in_total);
  for (const auto& K : ch.kraus) {
    if (K.rows() != ch.out_dim || K.cols() != in_total)
      throw std::invalid_argument("Kraus operator shape mismatch");
    sum += K.adjoint() * K;
  }
  if ((sum - Mat::Identity(in_total, in_total)).cwiseAbs().maxCoeff() > tol)
    throw std::invalid_argument("channel is not trace preserving");
}

// A bipartite source; the first `split` sites form slot 1.
struct BipartiteSource {
  DenseOperator rho;
  int split = 1;
};

struct PureBipartiteSource {
  DenseState psi;
  int split = 1;
};

inline DenseOperator permute_sites(const DenseOperator& op, const std::vector<int>& perm) {
  int n = static_cast<int>(op.dims.size());
  if (static_cast<int>(perm.size()) != n) throw std::invalid_argument("permutation length mismatch");
  std::vector<i64> dims(n);
  for (int k = 0; k < n; ++k) dims[k] = op.dims[perm[k]];
  std::vector<i64> in_stride(n, 1);
  for (int k = n - 2; k >= 0; --k) in_stride[k] = in_stride[k + 1] * op.dims[k + 1];
  i64 total = op.mat.rows();
  std::vector<i64> map(total);  // output index -> input index
  std::vector<i64> digit(n);
  for (i64 idx = 0; idx < total; ++idx) {
    i64 rest = idx;
    for (int k = 0; k < n; ++k) {
      digit[k] = rest / in_stride[k];
      rest %= in_stride[k];
    }
    i64 out_idx = 0;
    for (int k = 0; k < n; ++k) out_idx = out_idx * dims[k] + digit[perm[k]];
    map[out_idx] = idx;
  }
  Mat m(total, total);
  for (i64 r = 0; r < total; ++r)
    for (i64 c = 0; c < total; ++c) m(r, c) = op.mat(map[r], map[c]);
  return DenseOperator(std::move(dims), std::move(m));
}

namespace detail {

// Site order after kron(source0, source1, source2), regrouped per node.
inline std::vector<int> triangle_site_order(const std::array<int, 3>& splits,
                                            const std::array<int, 3>& site_counts) {
  std::array<int, 3> base{0, site_counts[0], site_counts[0] + site_counts[1]};
  std::vector<int> order;
  auto slot1 = [&](int s) {
    for (int i = 0; i < splits[s]; ++i) order.push_back(base[s] + i);
  };
  auto slot2 = [&](int s) {
    for (int i = splits[s]; i < site_counts[s]; ++i) order.push_back(base[s] + i);
  };
  slot1(0); slot2(2);  // node 1
  slot1(1); slot2(0);  // node 2
  slot1(2); slot2(1);  // node 3
  return order;
}

inline void check_grouping(const std::array<NodeChannel, 3>& channels,
                           const std::vector<i64>& grouped_dims) {
  std::vector<i64> expected;
  for (const auto& ch : channels)
    expected.insert(expected.end(), ch.in_dims.begin(), ch.in_dims.end());
  if (expected != grouped_dims) throw std::invalid_argument("channel inputs do not match the wiring");
}

// Runs emit(branch) for every Kraus triple; branch is the unnormalized
// output vector, indexed row-major over (out1, out2, out3).
template <typename Emit>
void for_each_branch(const DenseState& grouped, const std::array<NodeChannel, 3>& channels,
                     Emit&& emit) {
  check_grouping(channels, grouped.dims);
  i64 D1 = total_dim(channels[0].in_dims);
  i64 D2 = total_dim(channels[1].in_dims);
  i64 D3 = total_dim(channels[2].in_dims);
  i64 o1 = channels[0].out_dim, o2 = channels[1].out_dim, o3 = channels[2].out_dim;
  Eigen::Map<const Mat> t0(grouped.amps.data(), D3 * D2, D1);
  Vec branch(o1 * o2 * o3);
  for (const auto& K1 : channels[0].kraus) {
    Mat s1 = t0 * K1.transpose();                  // (D3 D2, o1)
    Mat r1 = s1.reshaped(D3, D2 * o1).eval();      // columns grouped as (a, i2)
    for (const auto& K2 : channels[1].kraus) {
      Mat s2(D3, o2 * o1);
      for (i64 a = 0; a < o1; ++a)
        s2.middleCols(a * o2, o2) = r1.middleCols(a * D2, D2) * K2.transpose();
      for (const auto& K3 : channels[2].kraus) {
        Mat s3 = K3 * s2;                          // (o3, o2 o1)
        for (i64 a = 0; a < o1; ++a)
          for (i64 b = 0; b < o2; ++b)
            for (i64 c = 0; c < o3; ++c) branch((a * o2 + b) * o3 + c) = s3(c, a * o2 + b);
        emit(branch);
      }
    }
  }
}

}  // namespace detail

// Applies channel i to party i of a pure state grouped as the channels'
// input sites, returning the output density operator.
inline DenseOperator channel3_output(const DenseState& grouped,
                                     const std::array<NodeChannel, 3>& channels) {
  i64 out = channels[0].out_dim * channels[1].out_dim * channels[2].out_dim;
  Mat acc = Mat::Zero(out, out);
  detail::for_each_branch(grouped, channels, [&](const Vec& v) { acc += v * v.adjoint(); });
  return DenseOperator({channels[0].out_dim, channels[1].out_dim, channels[2].out_dim},
                       std::move(acc));
}

// <target| output |target> without building the output matrix.
inline double channel3_fidelity(const DenseState& grouped,
                                const std::array<NodeChannel, 3>& channels,
                                const DenseState& target) {
  std::vector<i64> out_dims{channels[0].out_dim, channels[1].out_dim, channels[2].out_dim};
  check_same_dims(target.dims, out_dims);
  double fid = 0.0;
  detail::for_each_branch(grouped, channels,
                          [&](const Vec& v) { fid += std::norm(target.amps.dot(v)); });
  return fid;
}

inline DenseState wire_triangle(const std::array<PureBipartiteSource, 3>& sources) {
  DenseState joint = kron(kron(sources[0].psi, sources[1].psi), sources[2].psi);
  std::array<int, 3> splits{sources[0].split, sources[1].split, sources[2].split};
  std::array<int, 3> counts{static_cast<int>(sources[0].psi.dims.size()),
                            static_cast<int>(sources[1].psi.dims.size()),
                            static_cast<int>(sources[2].psi.dims.size())};
  return permute_sites(joint, detail::triangle_site_order(splits, counts));
}

// Full density-matrix simulation of one triangle round.
inline DenseOperator simulate_triangle(const std::array<NodeChannel, 3>& channels,
                                       const std::array<BipartiteSource, 3>& sources) {
  for (const auto& ch : channels) check_trace_preserving(ch);
  DenseOperator joint = kron(kron(sources[0].rho, sources[1].rho), sources[2].rho);
  std::array<int, 3> splits{sources[0].split, sources[1].split, sources[2].split};
  std::array<int, 3> counts{static_cast<int>(sources[0].rho.dims.size()),
                            static_cast<int>(sources[1].rho.dims.size()),
                            static_cast<int>(sources[2].rho.dims.size())};
  DenseOperator wired = permute_sites(joint, detail::triangle_site_order(splits, counts));
  detail::check_grouping(channels, wired.dims);

  i64 out = channels[0].out_dim * channels[1].out_dim * channels[2].out_dim;
  Mat acc = Mat::Zero(out, out);
  for (const auto& K1 : channels[0].kraus)
    for (const auto& K2 : channels[1].kraus)
      for (const auto& K3 : channels[2].kraus) {
        Mat K = Eigen::kroneckerProduct(K1, Eigen::kroneckerProduct(K2, K3).eval()).eval();
        acc += K * wired.mat * K.adjoint();
      }
  return DenseOperator({channels[0].out_dim, channels[1].out_dim, channels[2].out_dim},
                       std::move(acc));
}

// Pure-source fast path; same output as simulate_triangle on |psi><psi|.
inline DenseOperator simulate_triangle_pure(const std::array<NodeChannel, 3>& channels,
                                            const std::array<PureBipartiteSource, 3>& sources) {
  return channel3_output(wire_triangle(sources), channels);
}

inline double triangle_fidelity_pure(const std::array<NodeChannel, 3>& channels,
                                     const std::array<PureBipartiteSource, 3>& sources,
                                     const DenseState& target) {
  return channel3_fidelity(wire_triangle(sources), channels, target);
}

}  // namespace qnet
